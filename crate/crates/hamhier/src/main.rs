use std::io::{self, Write};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let status = hamhier::run(&args, &mut stdin.lock(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(status as i32);
}
