use clap::Parser;

fn main() {
    let args = algconc_cli::Args::parse();
    match algconc_cli::run(&args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
