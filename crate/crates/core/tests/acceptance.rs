//! Acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any FAIL.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ossynth::derivor::AffineImplication;
use ossynth::farkas::{certify_numeric, eliminate, search_certificate, NumericImplication, PolyConstraint, Rel};
use ossynth::frontend::{generate_theory, parse_module};
use ossynth::interp::{PredSem, SynthConfig};
use ossynth::model::{
    algebraicity_closure, instantiate_model, overload_coincidence, subsort_containment, VerdictStatus,
};
use ossynth::params::{ParamTable, Poly};
use ossynth::pipeline::{build_problem, synthesize, PipelineConfig, Problem};
use ossynth::rational::{frac, int, Rat};
use ossynth::signature::SortedSignature;
use ossynth::solver::smtlib::emit_smtlib;
use ossynth::solver::{check_assignment, first_violation, solve, Assignment, SolveConfig, SolveOutcome};
use ossynth::term::{Atom, Sentence, Term};

const TOYAMA: &str = include_str!("../data/toyama.maude");
const MERGED: &str = include_str!("../data/toyama_merged.maude");
const OVERLOADED: &str = include_str!("../data/overloaded.maude");

const SAMPLES: usize = 1000;
const THEORY_BUDGET: Duration = Duration::from_secs(1);
const SYNTH_BUDGET: Duration = Duration::from_secs(60);
const NEGATIVE_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn lambda_grid() -> Vec<Rat> {
    vec![int(0), frac(1, 2), int(1), int(2)]
}

// ---------------------------------------------------------------- 1

fn term_canon(t: &Term, names: &BTreeMap<String, String>) -> String {
    match t {
        Term::Var { name, .. } => names[name].clone(),
        Term::App { symbol, args, .. } if args.is_empty() => symbol.clone(),
        Term::App { symbol, args, .. } => {
            let a: Vec<String> = args.iter().map(|x| term_canon(x, names)).collect();
            format!("{symbol}({})", a.join(","))
        }
    }
}

fn atom_canon(a: &Atom, sig: &SortedSignature, names: &BTreeMap<String, String>) -> String {
    let sort = sig.sort_name(sig.preds[a.rank].args[0]);
    format!(
        "{}[{sort}]({},{})",
        a.pred,
        term_canon(&a.args[0], names),
        term_canon(&a.args[1], names)
    )
}

/// Variables renamed `v0, v1, …` in quantifier order.
fn sentence_canon(s: &Sentence, sig: &SortedSignature) -> String {
    let names: BTreeMap<String, String> = s
        .quantified_vars
        .iter()
        .enumerate()
        .map(|(i, (x, _))| (x.clone(), format!("v{i}")))
        .collect();
    let q: Vec<String> = s
        .quantified_vars
        .iter()
        .enumerate()
        .map(|(i, (_, srt))| format!("v{i}:{}", sig.sort_name(*srt)))
        .collect();
    let prem: Vec<String> = s.premises.iter().map(|p| atom_canon(p, sig, &names)).collect();
    let concl = atom_canon(&s.conclusion, sig, &names);
    if prem.is_empty() {
        format!("forall {} . {concl}", q.join(" "))
    } else {
        format!("forall {} . {} => {concl}", q.join(" "), prem.join(" & "))
    }
}

/// The twelve sentences of the ToyamaOS theory, written out by hand with
/// variables numbered in quantifier order.
const GOLDEN_THEORY: [(&str, &str); 12] = [
    ("Rf", "forall v0:S . ->*[S](v0,v0)"),
    ("Rf", "forall v0:S1 . ->*[S1](v0,v0)"),
    (
        "T",
        "forall v0:S v1:S v2:S . ->[S](v0,v1) & ->*[S](v1,v2) => ->*[S](v0,v2)",
    ),
    (
        "T",
        "forall v0:S1 v1:S1 v2:S1 . ->[S1](v0,v1) & ->*[S1](v1,v2) => ->*[S1](v0,v2)",
    ),
    (
        "C(f,1)",
        "forall v0:S1 v1:S1 v2:S1 v3:S1 . ->[S1](v0,v1) => ->[S](f(v0,v2,v3),f(v1,v2,v3))",
    ),
    (
        "C(f,2)",
        "forall v0:S1 v1:S1 v2:S1 v3:S1 . ->[S1](v1,v2) => ->[S](f(v0,v1,v3),f(v0,v2,v3))",
    ),
    (
        "C(f,3)",
        "forall v0:S1 v1:S1 v2:S1 v3:S1 . ->[S1](v2,v3) => ->[S](f(v0,v1,v2),f(v0,v1,v3))",
    ),
    (
        "C(g,1)",
        "forall v0:S1 v1:S1 v2:S1 . ->[S1](v0,v1) => ->[S1](g(v0,v2),g(v1,v2))",
    ),
    (
        "C(g,2)",
        "forall v0:S1 v1:S1 v2:S1 . ->[S1](v1,v2) => ->[S1](g(v0,v1),g(v0,v2))",
    ),
    ("Re(1)", "forall v0:S2 . ->[S](f(0,1,v0),f(v0,v0,v0))"),
    ("Re(2)", "forall v0:S1 v1:S1 . ->[S1](g(v0,v1),v0)"),
    ("Re(3)", "forall v0:S1 v1:S1 . ->[S1](g(v0,v1),v1)"),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let trs = parse_module(TOYAMA).expect("module parses");
    let theory = generate_theory(&trs).expect("theory");
    let elapsed = start.elapsed();
    let got: Vec<(String, String)> = theory
        .sentences
        .iter()
        .map(|ts| (ts.tag.to_string(), sentence_canon(&ts.sentence, &theory.sig)))
        .collect();
    let mut mismatches = Vec::new();
    for i in 0..got.len().max(GOLDEN_THEORY.len()) {
        let g = got.get(i).map(|(a, b)| (a.as_str(), b.as_str()));
        if g != GOLDEN_THEORY.get(i).copied() {
            mismatches.push(i + 1);
        }
    }
    let x_at_s2 = theory.sentences.get(9).is_some_and(|s| {
        s.sentence.quantified_vars.len() == 1 && theory.sig.sort_name(s.sentence.quantified_vars[0].1) == "S2"
    });
    outcome(
        mismatches.is_empty() && x_at_s2 && got.len() == 12 && elapsed < THEORY_BUDGET,
        format!(
            "{} sentences, mismatches {:?}, rule-1 variable at S2: {x_at_s2}, {:.3}s (limit 1s)",
            got.len(),
            mismatches,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn published_assignment(g0: i64) -> Assignment {
    let mut a = Assignment::new();
    let mut set = |k: &str, v: i64| a.set(k, int(v));
    for s in ["S", "S1"] {
        set(&format!("C.{s}.1"), 1);
        set(&format!("C.{s}.2"), 1);
    }
    set("C.S2.1", 1);
    set("C.S2.2", -1);
    for s in ["S", "S1", "S2"] {
        set(&format!("b.{s}.1"), 0);
        set(&format!("b.{s}.2"), 0);
    }
    for (k, v) in [("f.1", 1), ("f.2", 1), ("f.3", 1), ("f.0", 0), ("g.1", 1), ("g.2", 1)] {
        set(k, v);
    }
    set("g.0", g0);
    set("0.0", 0);
    set("1.0", 1);
    for k in ["k.S", "k.S1", "alpha.S", "alpha.S1"] {
        set(k, 0);
    }
    set("delta", 1);
    a
}

/// Per-implication multiplier search on the grid; `Err(tag)` for the
/// first implication without a certificate.
fn derive_lambdas(problem: &Problem, base: &Assignment) -> Result<Assignment, String> {
    let table = &problem.interp.table;
    let mut a = base.clone();
    for (imp, cert) in problem.implications.iter().zip(&problem.certificates) {
        let value = |id| base.get(table.name(id));
        let n = NumericImplication::instantiate(imp, &value).map_err(|p| table.name(p).to_string())?;
        let ls = search_certificate(&n, &lambda_grid()).ok_or_else(|| imp.tag.clone())?;
        for (&l, v) in cert.lambdas.iter().zip(ls) {
            a.set(table.name(l), v);
        }
    }
    Ok(a)
}

fn criterion_2() -> Outcome {
    let cfg = PipelineConfig {
        synth: SynthConfig {
            force_dummies: true,
            ..SynthConfig::default()
        },
        prune_trivial: false,
    };
    let problem = build_problem(TOYAMA, &cfg).expect("problem");
    let table = &problem.interp.table;
    let non_lambda = table.iter().filter(|(_, p)| !p.name.starts_with("lambda.")).count();

    // the table as printed (g0 = 0) leaves rule g(y,z) => y without a certificate
    let literal = derive_lambdas(&problem, &published_assignment(0));
    let a = match derive_lambdas(&problem, &published_assignment(1)) {
        Ok(a) => a,
        Err(tag) => return outcome(false, format!("no certificate for {tag} under g0 = 1")),
    };
    let ok = check_assignment(&problem.constraints, table, &a) == Ok(true);
    // sanity: delta = 0 and f1 = 0 are rejected
    let mut d0 = a.clone();
    d0.set("delta", int(0));
    let mut f0 = a.clone();
    f0.set("f.1", int(0));
    let rejects = check_assignment(&problem.constraints, table, &d0) == Ok(false)
        && first_violation(&problem.constraints, table, &f0)
            .ok()
            .flatten()
            .is_some();
    outcome(
        ok && rejects && non_lambda == 26,
        format!(
            "{} constraints, {} parameters ({} before multipliers), exact check {}; perturbations rejected: {rejects}; printed g0 = 0: {}",
            problem.constraints.len(),
            table.len(),
            non_lambda,
            if ok { "passes" } else { "fails" },
            match literal {
                Ok(_) => "certified".to_string(),
                Err(tag) => format!("no certificate for {tag}"),
            }
        ),
    )
}

// ---------------------------------------------------------------- 3, 4

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let start = Instant::now();
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).expect("problem");
    let s = synthesize(&problem, &SolveConfig::default(), SAMPLES, 0);
    let elapsed = start.elapsed();
    let (Some(model), Some(report)) = (&s.conclusion.model, &s.conclusion.report) else {
        let msg = format!("no model: {:?}", s.conclusion.verdict.reasons);
        return (outcome(false, msg.clone()), outcome(false, msg));
    };
    let min_samples = report.sentences.iter().map(|r| r.samples).min().unwrap_or(0);
    let certs = report.sentences.iter().all(|r| r.certificate_ok) && report.structural.iter().all(|r| r.certificate_ok);
    let c3 = outcome(
        report.failure_count() == 0 && certs && min_samples >= SAMPLES && elapsed < SYNTH_BUDGET,
        format!(
            "{} sentences, min {} samples each, {} failures, certificates ok: {certs}, {:.2}s (limit 60s)",
            report.sentences.len(),
            min_samples,
            report.failure_count(),
            elapsed.as_secs_f64()
        ),
    );
    let s2 = problem.trs.sig.sort("S2").expect("S2");
    let point = model.interval(s2).is_point();
    let arrow_is_gt = model
        .predicates
        .iter()
        .filter(|p| p.symbol == "->")
        .all(|p| p.semantics == Some(PredSem::GtDelta));
    let terminating = s.conclusion.verdict.status == VerdictStatus::ModelFoundTerminating;
    let c4 = outcome(
        point && arrow_is_gt && model.delta >= int(1) && terminating,
        format!(
            "A(S2) = {}, -> read as >_delta with delta = {}, verdict {}",
            model.interval(s2).render(),
            model.delta,
            s.conclusion.verdict.label()
        ),
    );
    (c3, c4)
}

// ---------------------------------------------------------------- 5

fn z3_available() -> bool {
    Command::new("z3")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let problem = build_problem(MERGED, &PipelineConfig::default()).expect("problem");
    let s = synthesize(&problem, &SolveConfig::default(), SAMPLES, 0);
    let elapsed = start.elapsed();
    let exhausted = matches!(s.outcome, SolveOutcome::NoSolution(_));
    let unknown = s.conclusion.verdict.status == VerdictStatus::Unknown;
    let smt = if z3_available() {
        let path = std::env::temp_dir().join(format!("ossynth-merged-{}.smt2", std::process::id()));
        std::fs::write(&path, emit_smtlib(&problem.constraints, &problem.interp.table)).expect("write script");
        let out = Command::new("z3").arg("-T:300").arg(&path).output().expect("z3 runs");
        let _ = std::fs::remove_file(&path);
        let first = String::from_utf8_lossy(&out.stdout)
            .lines()
            .next()
            .unwrap_or("")
            .to_string();
        Some(first)
    } else {
        None
    };
    let smt_ok = smt.as_deref().is_none_or(|r| r == "unsat");
    outcome(
        exhausted && unknown && smt_ok && elapsed < NEGATIVE_BUDGET,
        format!(
            "search {} after {} nodes, verdict {}, {:.2}s (limit 600s); external solver: {}",
            if exhausted { "exhausted" } else { "did not exhaust" },
            s.outcome.stats().nodes,
            s.conclusion.verdict.label(),
            elapsed.as_secs_f64(),
            smt.unwrap_or_else(|| "not available, skipped".into())
        ),
    )
}

// ---------------------------------------------------------------- 6

fn constraint(lhs: Poly, rel: Rel, rhs: Poly) -> (Poly, Rel, Poly) {
    (lhs, rel, rhs)
}

fn shape(cs: &[PolyConstraint]) -> Vec<(Poly, Rel, Poly)> {
    cs.iter().map(|c| (c.lhs.clone(), c.rel, c.rhs.clone())).collect()
}

fn criterion_6() -> Outcome {
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).expect("problem");
    let mut table: ParamTable = problem.interp.table.clone();
    let find = |tag: &str| -> &AffineImplication {
        problem
            .implications
            .iter()
            .find(|i| i.tag == tag)
            .expect("implication present")
    };
    let grid = lambda_grid();

    let (below_cert, below_got) = eliminate(find("below(S)"), 901, &mut table, &grid).expect("affine");
    let p = |t: &ParamTable, n: &str| Poly::param(t.lookup(n).expect(n));
    let l = |i: usize| Poly::param(below_cert.lambdas[i]);
    let below_expected = vec![
        constraint(
            Poly::int(1),
            Rel::Eq,
            &(&p(&table, "C.S.1") * &l(0)) + &(&p(&table, "C.S.2") * &l(1)),
        ),
        constraint(
            &(&l(0) * &p(&table, "b.S.1")) + &(&l(1) * &p(&table, "b.S.2")),
            Rel::Ge,
            p(&table, "alpha.S"),
        ),
        constraint(l(0), Rel::Ge, Poly::zero()),
        constraint(l(1), Rel::Ge, Poly::zero()),
    ];
    let below_ok = shape(&below_got) == below_expected;

    let (rule_cert, rule_got) = eliminate(find("Re(3)"), 902, &mut table, &grid).expect("affine");
    let l = |i: usize| Poly::param(rule_cert.lambdas[i]);
    let (c1, c2, b1, b2) = (
        p(&table, "C.S1.1"),
        p(&table, "C.S1.2"),
        p(&table, "b.S1.1"),
        p(&table, "b.S1.2"),
    );
    let mut beta_side = Poly::zero();
    for (i, b) in [&b1, &b2, &b1, &b2].into_iter().enumerate() {
        beta_side = &beta_side + &(&l(i) * b);
    }
    let rule_expected = vec![
        constraint(p(&table, "g.1"), Rel::Eq, &(&c1 * &l(0)) + &(&c2 * &l(1))),
        constraint(
            &p(&table, "g.2") - &Poly::int(1),
            Rel::Eq,
            &(&c1 * &l(2)) + &(&c2 * &l(3)),
        ),
        constraint(beta_side, Rel::Ge, &p(&table, "delta") - &p(&table, "g.0")),
        constraint(l(0), Rel::Ge, Poly::zero()),
        constraint(l(1), Rel::Ge, Poly::zero()),
        constraint(l(2), Rel::Ge, Poly::zero()),
        constraint(l(3), Rel::Ge, Poly::zero()),
    ];
    let rule_ok = rule_cert.lambdas.len() == 4 && shape(&rule_got) == rule_expected;
    outcome(
        below_ok && rule_ok,
        format!(
            "bounded-below system {} ({} constraints); rule g(y,z) => z system {} ({} multipliers)",
            if below_ok { "matches" } else { "differs" },
            below_got.len(),
            if rule_ok { "matches" } else { "differs" },
            rule_cert.lambdas.len()
        ),
    )
}

// ---------------------------------------------------------------- 7

fn random_implication(rng: &mut ChaCha8Rng) -> (NumericImplication, Vec<Rat>) {
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=6);
    // a known integer point inside the premises keeps the region non-empty
    let x0: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    while a.len() < k {
        let row: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let at: i64 = row.iter().zip(&x0).map(|(p, q)| p * q).sum();
        if at < -3 {
            continue;
        }
        b.push(int(rng.gen_range(-3..=at.min(3))));
        a.push(row.into_iter().map(int).collect());
    }
    let c = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
    let beta = int(rng.gen_range(-3..=3));
    (NumericImplication { a, b, c, beta }, x0.into_iter().map(int).collect())
}

/// A few exact hit-and-run moves from `x0`; every point satisfies the
/// premises by construction.
fn premise_sample(n: &NumericImplication, x0: &[Rat], rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let mut x = x0.to_vec();
    for _ in 0..rng.gen_range(1..=3) {
        let d: Vec<Rat> = (0..x.len()).map(|_| int(rng.gen_range(-2..=2))).collect();
        let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
        for (row, bi) in n.a.iter().zip(&n.b) {
            // row·x + t·row·d ≥ b
            let ad: Rat = row.iter().zip(&d).map(|(p, q)| p * q).sum();
            let slack: Rat = row.iter().zip(&x).map(|(p, q)| p * q).sum::<Rat>() - bi;
            if ad.is_positive() {
                let t = -slack / ad;
                lo = Some(lo.map_or(t, |l: Rat| l.max(t)));
            } else if ad.is_negative() {
                let t = -slack / ad;
                hi = Some(hi.map_or(t, |h: Rat| h.min(t)));
            }
        }
        let lo = lo.unwrap_or(int(-5));
        let hi = hi.unwrap_or(int(5));
        let step = match rng.gen_range(0..4) {
            0 => lo,
            1 => hi,
            _ => lo + (hi - lo) * frac(rng.gen_range(0..=16), 16),
        };
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += step * di;
        }
    }
    x
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = lambda_grid();
    let (mut certified, mut samples, mut violations, mut outside) = (0, 0u64, 0, 0);
    for _ in 0..200 {
        let (n, x0) = random_implication(&mut rng);
        let Some(ls) = search_certificate(&n, &grid) else {
            continue;
        };
        assert!(certify_numeric(&n, &ls));
        certified += 1;
        for _ in 0..10_000 {
            let x = premise_sample(&n, &x0, &mut rng);
            if !n.premises_hold(&x) {
                outside += 1;
                continue;
            }
            samples += 1;
            if !n.conclusion_holds(&x) {
                violations += 1;
            }
        }
    }
    outcome(
        certified > 0 && violations == 0 && outside == 0,
        format!(
            "200 implications, {certified} certified, {samples} premise-satisfying samples, {violations} violations (tolerance 0)"
        ),
    )
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    let cases: [(&str, &str, PipelineConfig); 3] = [
        ("ToyamaOS", TOYAMA, PipelineConfig::default()),
        (
            "ToyamaOS with witnesses",
            TOYAMA,
            PipelineConfig {
                synth: SynthConfig {
                    force_dummies: true,
                    ..SynthConfig::default()
                },
                prune_trivial: true,
            },
        ),
        ("overloaded fixture", OVERLOADED, PipelineConfig::default()),
    ];
    for (name, text, cfg) in cases {
        let problem = build_problem(text, &cfg).expect("problem");
        let sig = &problem.trs.sig;
        let Some(a) = solve(&problem.constraints, &problem.interp.table, &SolveConfig::default())
            .assignment()
            .cloned()
        else {
            ok = false;
            details.push(format!("{name}: no model"));
            continue;
        };
        let model = instantiate_model(&a, sig, &problem.interp).expect("model");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sub = subsort_containment(&model, sig);
        let alg = algebraicity_closure(&model, sig, SAMPLES, &mut rng);
        let ovl = overload_coincidence(&model, sig, SAMPLES, &mut rng);
        let overloaded_ranks = sig.funcs.iter().filter(|f| sig.is_overloaded(&f.symbol)).count();
        let needs_overload = name == "overloaded fixture";
        let case_ok = sub.ok
            && alg.ok
            && ovl.ok
            && alg.checked >= SAMPLES * sig.funcs.len()
            && (!needs_overload || (overloaded_ranks >= 2 && ovl.checked >= SAMPLES));
        ok &= case_ok;
        details.push(format!(
            "{name}: {} subsort pairs, {} closure tuples, {} overload points",
            sub.checked, alg.checked, ovl.checked
        ));
    }
    outcome(ok, details.join("; "))
}

// ---------------------------------------------------------------- 9

fn run_binary(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ossynth"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/toyama.maude");
    let mut same = true;
    let mut codes = Vec::new();
    for flags in [vec![], vec!["--json"]] {
        let mut args = flags.clone();
        args.push(path);
        let first = run_binary(&args);
        let second = run_binary(&args);
        same &= first == second && !first.1.is_empty();
        codes.push(first.0);
    }
    // and through the library
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).expect("problem");
    let s1 = synthesize(&problem, &SolveConfig::default(), SAMPLES, 0);
    let s2 = synthesize(&problem, &SolveConfig::default(), SAMPLES, 0);
    let json_same = s1.conclusion.to_json() == s2.conclusion.to_json();
    outcome(
        same && json_same && codes == [0, 0],
        format!("text and JSON outputs byte-identical across runs: {same}; exit codes {codes:?}; report JSON identical: {json_same}"),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((1, "golden theory", criterion_1()));
    results.push((2, "published assignment", criterion_2()));
    let (c3, c4) = criterion_3_and_4();
    results.push((3, "end-to-end synthesis", c3));
    results.push((4, "model shape and verdict", c4));
    results.push((5, "negative control", criterion_5()));
    results.push((6, "Farkas golden shapes", criterion_6()));
    results.push((7, "Farkas soundness", criterion_7()));
    results.push((8, "structural invariants", criterion_8()));
    results.push((9, "determinism", criterion_9()));
    let mut failed = 0;
    for (n, name, o) in &results {
        println!(
            "[{}] criterion {n} {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
