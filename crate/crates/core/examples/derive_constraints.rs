//! Read each sentence through the parametric interpretation, then turn
//! every affine implication into polynomial constraints.

use ossynth::pipeline::{build_problem, PipelineConfig};

fn main() {
    let problem = build_problem(include_str!("../data/toyama.maude"), &PipelineConfig::default()).unwrap();
    let table = &problem.interp.table;
    println!(
        "{} parameters before multipliers",
        table.len() - problem.certificates.iter().map(|c| c.lambdas.len()).sum::<usize>()
    );
    for imp in &problem.implications {
        println!("{}", imp.render(table));
    }
    println!("\n{} constraints, e.g.", problem.constraints.len());
    for c in problem.constraints.iter().take(8) {
        println!("  [{}] {}", c.origin, c.display(table));
    }
}
