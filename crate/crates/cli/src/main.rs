use clap::Parser;

use natgrid_cli::{run, Cli, EXIT_INPUT, EXIT_OK};

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => run(&cli, &mut std::io::stdout().lock()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    };
    std::process::exit(code);
}
