use clap::Parser;

fn main() {
    // die quietly when piped into a pager that exits early
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = gcla::cli::Cli::parse();
    std::process::exit(gcla::cli::run(cli));
}
