use clap::Parser;
use vessel_elim::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {}", path.display(), e);
                std::process::exit(2);
            }
        }
        None => print!("{}", text),
    }
    std::process::exit(code);
}
