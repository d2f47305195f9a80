use std::io::{stderr, stdout};

fn main() {
    let code = cvenn_cli::run_from(std::env::args_os(), &mut stdout(), &mut stderr());
    std::process::exit(code);
}
