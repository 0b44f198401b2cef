//! Shrinking the search space: pin the margin and widen the multiplier
//! grid, then compare the two value orders.

use ossynth::interp::SynthConfig;
use ossynth::pipeline::{build_problem, synthesize, PipelineConfig};
use ossynth::rational::{frac, int};
use ossynth::solver::{SolveConfig, ValueOrder};

fn main() {
    let cfg = PipelineConfig {
        synth: SynthConfig {
            lambda_domain: vec![int(0), frac(1, 2), int(1), int(2), int(3)],
            ..SynthConfig::default()
        },
        prune_trivial: true,
    };
    let problem = build_problem(include_str!("../data/toyama.maude"), &cfg).unwrap();
    for order in [ValueOrder::SmallestMagnitude, ValueOrder::Ascending] {
        let solve = SolveConfig {
            value_order: order,
            ..SolveConfig::default()
        };
        let s = synthesize(&problem, &solve, 500, 0);
        let a = s.outcome.assignment();
        println!(
            "{order:?}: {} nodes, verdict {}, C.S2 = ({}, {})",
            s.outcome.stats().nodes,
            s.conclusion.verdict.label(),
            a.and_then(|a| a.get("C.S2.1")).unwrap_or_default(),
            a.and_then(|a| a.get("C.S2.2")).unwrap_or_default(),
        );
    }
}
