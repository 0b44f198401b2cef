//! Parse a module and print the sentences its rewrite relation must satisfy.
//!
//!     cargo run --example generate_theory [path/to/module.maude]

use ossynth::frontend::{generate_theory, parse_module};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/toyama.maude").into());
    let trs = parse_module(&std::fs::read_to_string(path)?)?;
    println!(
        "module {}: {} sorts, {} ranks, {} rules",
        trs.name,
        trs.sig.poset.len(),
        trs.sig.funcs.len(),
        trs.rules.len()
    );
    let theory = generate_theory(&trs)?;
    print!("{}", theory.render());
    Ok(())
}
