use clap::Parser;
use stoprule_cli::cli::Cli;
use stoprule_cli::commands;

/// The Rust runtime ignores SIGPIPE, turning `stoprule ... | head` into a
/// broken-pipe panic; restore the default so piped output just ends.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() {
    reset_sigpipe();
    // Usage mistakes are input errors (exit 1); --help and --version are
    // ordinary exits.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = commands::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
