mod commands;
mod input;

use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = commands::run(&args);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    if !out.stderr.is_empty() {
        let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    }
    std::process::exit(out.code);
}
