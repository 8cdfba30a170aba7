use std::process::ExitCode;

fn main() -> ExitCode {
    // GAMBLEKIT_THREADS caps the rayon pool used by batch simulation and the
    // fair-curve sweep; unset means rayon's default (one thread per core).
    if let Ok(value) = std::env::var("GAMBLEKIT_THREADS") {
        let threads: usize = match value.parse() {
            Ok(t) if t >= 1 => t,
            _ => {
                eprintln!("gamblekit: GAMBLEKIT_THREADS must be a positive integer, got {value:?}");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("gamblekit: failed to configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(gamblekit::cli::run(std::env::args_os()))
}
