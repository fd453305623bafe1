use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = sternpoly::cli::run(std::env::args_os(), &mut out, &mut err);
    if out.flush().is_err() && code == sternpoly::cli::EXIT_OK {
        std::process::exit(sternpoly::cli::EXIT_USAGE);
    }
    drop(out);
    std::process::exit(code);
}
