//! Merging S1 and S2 makes Toyama's counterexample well-sorted; the search
//! must come back empty and the verdict must stay UNKNOWN.

use ossynth::pipeline::{build_problem, synthesize, PipelineConfig};
use ossynth::solver::SolveConfig;

fn main() {
    let problem = build_problem(include_str!("../data/toyama_merged.maude"), &PipelineConfig::default()).unwrap();
    let s = synthesize(&problem, &SolveConfig::default(), 1000, 0);
    println!("verdict: {}", s.conclusion.verdict.label());
    for r in &s.conclusion.verdict.reasons {
        println!("  {r}");
    }
}
