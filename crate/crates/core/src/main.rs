use std::io::Write;

use anyhow::Context;

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = tagcalc::cli::dispatch(&args, &mut out);
    out.flush().context("flushing stdout")?;
    std::process::exit(code)
}
