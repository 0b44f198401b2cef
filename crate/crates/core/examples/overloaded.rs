//! Subsort-overloaded operators: `s` is declared at Nat and Int and both
//! ranks must agree on the smaller domain.

use ossynth::model::{render_model, Format};
use ossynth::pipeline::{build_problem, synthesize, PipelineConfig};
use ossynth::solver::SolveConfig;

fn main() {
    let problem = build_problem(include_str!("../data/overloaded.maude"), &PipelineConfig::default()).unwrap();
    let s = synthesize(&problem, &SolveConfig::default(), 1000, 0);
    if let Some(m) = &s.conclusion.model {
        print!("{}", render_model(m, Format::Text));
    }
    if let Some(r) = &s.conclusion.report {
        for inv in &r.invariants {
            println!("{}: ok={} checked={}", inv.name, inv.ok, inv.checked);
        }
    }
    println!("verdict: {}", s.conclusion.verdict.label());
}
