use std::process::ExitCode;

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("FRACKERNEL_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    ExitCode::from(frackernel::cli::run(std::env::args().skip(1)) as u8)
}
