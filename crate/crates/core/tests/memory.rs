//! Peak heap use of partitioned reduction, measured by a counting allocator.
//! Kept in its own test binary so no other test allocates concurrently.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snnreduce_core::{partitioned_reduce, plan_partitions, Dataset, GridSpec, SnnConfig, SplitAxis};

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Extra heap held at the high-water mark while `f` runs.
fn peak_during<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let out = f();
    (out, PEAK.load(Ordering::Relaxed) - base)
}

#[test]
fn slab_structures_scale_with_slab_size() {
    let spec = GridSpec::new([64, 32, 16], ["v"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let values = (0..spec.cell_count()).map(|_| rng.random::<f64>()).collect();
    let d = Dataset::grid(spec, values).unwrap();
    let cfg = SnnConfig::default();

    let whole = plan_partitions(&d, 1, SplitAxis::Auto).unwrap();
    let sliced = plan_partitions(&d, 8, SplitAxis::Auto).unwrap();
    let (a, peak_whole) = peak_during(|| partitioned_reduce(&d, &whole, &cfg).unwrap());
    drop(a);
    let (b, peak_sliced) = peak_during(|| partitioned_reduce(&d, &sliced, &cfg).unwrap());
    drop(b);
    eprintln!("peak extra heap: 1 part {peak_whole} B, 8 parts {peak_sliced} B");
    // Merged outputs and the filtered copy are O(n) in both runs; neighbour
    // lists and the graph dominate the unpartitioned peak.
    assert!(
        peak_sliced * 3 < peak_whole,
        "8-part peak {peak_sliced} B is not well below 1-part peak {peak_whole} B"
    );
}
