use clap::Parser;

fn main() {
    match ptmoment_cli::run(ptmoment_cli::Cli::parse()) {
        Ok(Some(path)) => eprintln!("wrote {}", path.display()),
        Ok(None) => {}
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
