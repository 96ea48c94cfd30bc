use clap::Parser;
use oneloop::cli::{run, Cli};
use oneloop::error::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (out, code) = run(&cli);
    if code == exit::PASS || code == exit::VERIFICATION_FAILED {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    std::process::exit(code);
}
