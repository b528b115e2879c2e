use std::process::ExitCode;

use gwright_cli::{configure_threads, parse_config, run, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE};

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    if let Err(e) = configure_threads(std::env::var("GWRIGHT_THREADS").ok()) {
        eprintln!("{e}");
        return exit(EXIT_USAGE);
    }
    let cfg = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            if e.informational {
                println!("{e}");
                return exit(EXIT_OK);
            }
            eprintln!("{e}");
            return exit(EXIT_USAGE);
        }
    };
    match run(&cfg) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.stdout.ends_with('\n') {
                println!();
            }
            exit(if out.success { EXIT_OK } else { EXIT_COMPUTE })
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(EXIT_COMPUTE)
        }
    }
}
