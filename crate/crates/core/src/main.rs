use std::io;

fn main() {
    let code = harmonic_shear::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
