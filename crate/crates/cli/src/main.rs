use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("MSTL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        mstl::par::set_thread_limit(n);
    }
    let cli = mstl_cli::Cli::parse();
    if let Err(e) = mstl_cli::run(&cli) {
        eprintln!("mstl: {e}");
        std::process::exit(e.exit_code());
    }
}
