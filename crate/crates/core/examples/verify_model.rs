//! Check a hand-written assignment against the constraints, then sample
//! every sentence in the model it induces.

use ossynth::model::{instantiate_model, verify_model};
use ossynth::pipeline::{build_problem, synthesize, PipelineConfig};
use ossynth::rational::int;
use ossynth::solver::{first_violation, SolveConfig};

fn main() {
    let problem = build_problem(include_str!("../data/toyama.maude"), &PipelineConfig::default()).unwrap();
    let table = &problem.interp.table;
    let a = synthesize(&problem, &SolveConfig::default(), 0, 0)
        .outcome
        .assignment()
        .unwrap()
        .clone();

    let model = instantiate_model(&a, &problem.trs.sig, &problem.interp).unwrap();
    let report = verify_model(&model, &problem, 2000, 7);
    for s in &report.sentences {
        println!(
            "({}) {:<7} certificate {:<5} {} samples, {} failures",
            s.id,
            s.tag,
            s.certificate_ok,
            s.samples,
            s.failures.len()
        );
    }
    for inv in &report.invariants {
        println!("{}: ok={} checked={}", inv.name, inv.ok, inv.checked);
    }

    // drop the constant of g and the rule g(y,z) => y stops holding
    let mut broken = a.clone();
    broken.set("g.0", int(0));
    if let Ok(Some(i)) = first_violation(&problem.constraints, table, &broken) {
        let c = &problem.constraints[i];
        println!("g0 = 0 violates [{}] {}", c.origin, c.display(table));
    }
}
