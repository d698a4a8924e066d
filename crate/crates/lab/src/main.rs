use std::io::Write;

fn main() {
    let (code, text) = plantlab::run_command(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    let _ = stdout.flush();
    std::process::exit(code);
}
