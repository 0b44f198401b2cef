//! End to end: synthesize a model for Toyama's order-sorted system, check
//! it and print the verdict.

use std::time::Instant;

use ossynth::model::{render_model, Format};
use ossynth::pipeline::{build_problem, synthesize, PipelineConfig};
use ossynth::solver::SolveConfig;

fn main() {
    let problem = build_problem(include_str!("../data/toyama.maude"), &PipelineConfig::default()).unwrap();
    let t = Instant::now();
    let s = synthesize(&problem, &SolveConfig::default(), 1000, 0);
    let stats = s.outcome.stats();
    println!(
        "{} outer and {} inner parameters, {} nodes, {:.2?}",
        stats.outer_params,
        stats.inner_params,
        stats.nodes,
        t.elapsed()
    );
    if let Some(m) = &s.conclusion.model {
        print!("{}", render_model(m, Format::Text));
    }
    println!("verdict: {}", s.conclusion.verdict.label());
}
