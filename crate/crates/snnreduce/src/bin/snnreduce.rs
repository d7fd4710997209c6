use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    panic::set_hook(Box::new(|info| {
        let msg = info
            .payload()
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| info.payload().downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        eprintln!("{}", snnreduce::cli::Failure::Internal(msg).line());
    }));
    panic::catch_unwind(|| snnreduce::cli::main_with_args(std::env::args_os())).unwrap_or(ExitCode::from(3))
}
