use std::io::{stderr, stdout};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = stablespan::cli::run_command(&args, &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
