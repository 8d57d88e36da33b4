use std::io::Write;

use clap::Parser;

use ppinterp_cli::commands::{run, Cli, OutFormat};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.out {
                OutFormat::Text => out.text,
                OutFormat::Json => serde_json::to_string_pretty(&out.json).expect("serialisable"),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            std::process::exit(if out.passed { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
