use std::io::Write;

fn main() {
    let outcome = wsra::cli::run(std::env::args_os());
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout(), "{}", outcome.report);
    std::process::exit(outcome.code);
}
