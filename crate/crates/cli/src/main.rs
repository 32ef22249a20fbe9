use std::io::Write;

fn main() {
    let result = toric_mle_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(result.stdout.as_bytes());
    let _ = out.flush();
    std::process::exit(result.exit_code);
}
