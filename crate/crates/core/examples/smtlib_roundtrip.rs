//! Write the constraint problem as SMT-LIB, hand it to `z3` if installed,
//! and read the model back.

use std::process::Command;

use ossynth::pipeline::{build_problem, conclude, PipelineConfig};
use ossynth::solver::smtlib::{emit_smtlib, parse_smt_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = build_problem(include_str!("../data/toyama.maude"), &PipelineConfig::default())?;
    let script = emit_smtlib(&problem.constraints, &problem.interp.table);
    let path = std::env::temp_dir().join("toyama.smt2");
    std::fs::write(&path, &script)?;
    println!("wrote {} ({} lines)", path.display(), script.lines().count());

    let Ok(out) = Command::new("z3").arg(&path).output() else {
        println!("z3 not on PATH; run it on the script yourself and pass the model with --smt-model-in");
        return Ok(());
    };
    let text = String::from_utf8(out.stdout)?;
    println!("z3 says {}", text.lines().next().unwrap_or(""));
    if text.starts_with("sat") {
        let a = parse_smt_model(&text, &problem.interp.table)?;
        let c = conclude(&problem, &a, 1000, 0);
        println!("verdict: {}", c.verdict.label());
    }
    Ok(())
}
