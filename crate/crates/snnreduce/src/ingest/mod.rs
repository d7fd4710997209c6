//! Reading and writing datasets: brick files, CSV point lists and synthetic volumes.

mod brick;
mod csv;
mod synthetic;

pub use brick::{export_brick, load_brick, load_bricks};
pub use csv::{load_annotated_csv, load_csv, load_csv_with_sentinel, read_csv, save_csv, write_csv, Annotations};
pub use synthetic::{
    generate_synthetic, sample_blob_cloud, standard_blobs, Blob, BlobCloud, SyntheticSpec,
    STANDARD_PEAK, STANDARD_RADIUS,
};
