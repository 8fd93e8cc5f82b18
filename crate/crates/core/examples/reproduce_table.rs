//! Regenerates a reference table with its checks, as `resum reproduce` does,
//! and writes it as CSV to stdout.
//!
//! `cargo run --example reproduce_table -- phi4-fixed-point`

use resum::reproduce::{reproduce, TableId};
use resum::Precision;

fn main() -> resum::Result<()> {
    let id: TableId = std::env::args().nth(1).as_deref().unwrap_or("saddle-table").parse()?;
    let out = reproduce(id, Precision::from_env()?)?;
    out.write_csv(std::io::stdout())?;
    for c in &out.checks {
        eprintln!("{} {} = {} (target {})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.target);
    }
    for n in &out.notes {
        eprintln!("note: {n}");
    }
    std::process::exit(if out.passed() { 0 } else { 2 });
}
