//! Eliminate the universally quantified variables of one implication, then
//! certify a purely numeric instance with explicit multipliers.

use ossynth::farkas::{certify_numeric, eliminate, search_certificate, NumericImplication};
use ossynth::pipeline::{build_problem, PipelineConfig};
use ossynth::rational::{frac, int};

fn main() {
    let problem = build_problem(include_str!("../data/toyama.maude"), &PipelineConfig::default()).unwrap();
    let mut table = problem.interp.table.clone();
    let imp = problem.implications.iter().find(|i| i.tag == "Re(3)").unwrap();
    println!("{}", imp.render(&table));
    let grid = [int(0), frac(1, 2), int(1), int(2)];
    let (cert, cs) = eliminate(imp, 99, &mut table, &grid).unwrap();
    println!("{} multipliers:", cert.lambdas.len());
    for c in &cs {
        println!("  {}", c.display(&table));
    }

    // x >= 1 /\ y >= x  =>  x + y >= 2
    let n = NumericImplication {
        a: vec![vec![int(1), int(0)], vec![int(-1), int(1)]],
        b: vec![int(1), int(0)],
        c: vec![int(1), int(1)],
        beta: int(2),
    };
    let ls = search_certificate(&n, &grid).expect("certificate");
    let shown: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
    println!(
        "x >= 1, y >= x => x + y >= 2 with multipliers [{}]: {}",
        shown.join(", "),
        certify_numeric(&n, &ls)
    );
}
