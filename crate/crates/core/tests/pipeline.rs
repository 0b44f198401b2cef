use std::collections::BTreeMap;
use std::process::Command;
use std::sync::OnceLock;

use proptest::prelude::*;

use ossynth::cli::{run, EXIT_ERROR, EXIT_TERMINATING, EXIT_UNKNOWN};
use ossynth::farkas::{certify_numeric, search_certificate, NumericImplication};
use ossynth::model::{instantiate_model, parse_model_json, render_model, ConcreteModel, Format};
use ossynth::pipeline::{build_problem, conclude, synthesize, PipelineConfig, Problem};
use ossynth::rational::{frac, int, Rat};
use ossynth::solver::smtlib::{emit_smtlib, parse_smt_model};
use ossynth::solver::{check_assignment, SolveConfig};
use ossynth::term::{least_sort, Term};

const TOYAMA: &str = include_str!("../data/toyama.maude");

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let mut argv = vec!["ossynth"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn toyama_model() -> &'static (Problem, ConcreteModel) {
    static CELL: OnceLock<(Problem, ConcreteModel)> = OnceLock::new();
    CELL.get_or_init(|| {
        let problem = build_problem(TOYAMA, &PipelineConfig::default()).unwrap();
        let s = synthesize(&problem, &SolveConfig::default(), 100, 0);
        let model = s.conclusion.model.expect("model");
        (problem, model)
    })
}

#[test]
fn exit_codes() {
    let (code, out, _) = cli(&[&data("toyama.maude")]);
    assert_eq!(code, EXIT_TERMINATING);
    assert!(out.contains("verdict: MODEL_FOUND_TERMINATING"));
    assert!(out.contains("g(x,y) = x + y + 1"), "{out}");

    let (code, out, _) = cli(&[&data("toyama_merged.maude")]);
    assert_eq!(code, EXIT_UNKNOWN);
    assert!(out.contains("verdict: UNKNOWN"));

    let (code, _, err) = cli(&[&data("missing.maude")]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("missing.maude"));
}

#[test]
fn dumps_stop_early() {
    let (code, out, _) = cli(&["--dump-theory", &data("toyama.maude")]);
    assert_eq!(code, EXIT_TERMINATING);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sentences"].as_array().unwrap().len(), 12);

    let (code, out, _) = cli(&["--dump-constraints", &data("toyama.maude")]);
    assert_eq!(code, EXIT_TERMINATING);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["constraints"][0]["origin"], "delta");
}

#[test]
fn restricted_domains_give_unknown() {
    // with all coefficients pinned to 0, no monotone interpretation exists
    let (code, out, _) = cli(&["--coeff-domain", "0..0", "--timeout", "60", &data("toyama.maude")]);
    assert_eq!(code, EXIT_UNKNOWN, "{out}");
}

#[test]
fn model_json_round_trip() {
    let (_, model) = toyama_model();
    let text = render_model(model, Format::Json);
    let back = parse_model_json(&text).unwrap();
    assert_eq!(&back, model);
}

#[test]
fn external_model_is_checked_exactly() {
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).unwrap();
    let s = synthesize(&problem, &SolveConfig::default(), 100, 0);
    let a = s.outcome.assignment().unwrap().clone();
    let mut smt = String::from("sat\n(\n");
    for (k, v) in &a.0 {
        let lit = if v.is_integer() {
            format!("{}", v.numer())
        } else {
            format!("(/ {} {})", v.numer(), v.denom())
        };
        smt.push_str(&format!("  (define-fun |{k}| () Real {lit})\n"));
    }
    smt.push(')');
    let parsed = parse_smt_model(&smt, &problem.interp.table).unwrap();
    assert_eq!(parsed, a);
    let c = conclude(&problem, &parsed, 100, 0);
    assert!(c.report.unwrap().all_ok());

    let mut bad = a.clone();
    bad.set("delta", int(0));
    let c = conclude(&problem, &bad, 100, 0);
    assert!(c.model.is_none());
    assert!(c.verdict.reasons[0].contains("delta"), "{:?}", c.verdict.reasons);
}

#[test]
fn z3_round_trip() {
    let Ok(v) = Command::new("z3").arg("--version").output() else {
        eprintln!("z3 not found, skipping");
        return;
    };
    assert!(v.status.success());
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).unwrap();
    let path = std::env::temp_dir().join(format!("ossynth-toyama-{}.smt2", std::process::id()));
    std::fs::write(&path, emit_smtlib(&problem.constraints, &problem.interp.table)).unwrap();
    let out = Command::new("z3").arg("-T:120").arg(&path).output().unwrap();
    let _ = std::fs::remove_file(&path);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("sat"), "{text}");
    let a = parse_smt_model(&text, &problem.interp.table).unwrap();
    assert_eq!(
        check_assignment(&problem.constraints, &problem.interp.table, &a),
        Ok(true)
    );
}

/// Random terms over the signature of the Toyama module at sort S1.
fn s1_term(depth: u32) -> BoxedStrategy<Shape> {
    let leaf = prop_oneof![Just(Shape::Zero), Just(Shape::One), Just(Shape::Y), Just(Shape::Z)];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Shape::G(Box::new(a), Box::new(b)))
    })
    .boxed()
}

#[derive(Debug, Clone)]
enum Shape {
    Zero,
    One,
    Y,
    Z,
    G(Box<Shape>, Box<Shape>),
}

fn build(s: &Shape, p: &Problem) -> Term {
    let sig = &p.trs.sig;
    match s {
        Shape::Zero => Term::app(sig, "0", vec![]).unwrap(),
        Shape::One => Term::app(sig, "1", vec![]).unwrap(),
        Shape::Y => Term::var(sig, "y").unwrap(),
        Shape::Z => Term::var(sig, "z").unwrap(),
        Shape::G(a, b) => Term::app(sig, "g", vec![build(a, p), build(b, p)]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Evaluating t[y := s] equals evaluating t with y bound to the value of s.
    #[test]
    fn substitution_lemma(t in s1_term(3), s in s1_term(2), y in -5i64..5, z in -5i64..5) {
        let (p, model) = toyama_model();
        let (t, s) = (build(&t, p), build(&s, p));
        let env: BTreeMap<String, Rat> = [("y".into(), int(y)), ("z".into(), int(z))].into();
        let sigma: BTreeMap<String, Term> = [("y".to_string(), s.clone())].into();
        let mut env2 = env.clone();
        env2.insert("y".into(), model.eval(&s, &env));
        prop_assert_eq!(model.eval(&t.substitute(&sigma), &env), model.eval(&t, &env2));
    }

    /// Values of terms stay inside the domain of their least sort.
    #[test]
    fn terms_stay_in_their_domain(t in s1_term(3), yi in 0usize..20, zi in 0usize..20) {
        let (p, model) = toyama_model();
        let t = build(&t, p);
        let s1 = p.trs.sig.sort("S1").unwrap();
        let cands = model.interval(s1).candidates(20);
        let env: BTreeMap<String, Rat> =
            [("y".into(), cands[yi % cands.len()]), ("z".into(), cands[zi % cands.len()])].into();
        let srt = least_sort(&t, &p.trs.sig).unwrap();
        prop_assert!(model.interval(srt).contains(&model.eval(&t, &env)));
    }

    /// A certified implication has no counterexample on a small grid.
    #[test]
    fn certificates_are_sound(
        a in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 1..4),
        b in prop::collection::vec(-2i64..=2, 3),
        c in prop::collection::vec(-2i64..=2, 2),
        beta in -2i64..=2,
    ) {
        let k = a.len();
        let n = NumericImplication {
            a: a.into_iter().map(|r| r.into_iter().map(int).collect()).collect(),
            b: b.into_iter().take(k).map(int).collect(),
            c: c.into_iter().map(int).collect(),
            beta: int(beta),
        };
        prop_assume!(n.b.len() == k);
        let grid = [int(0), frac(1, 2), int(1), int(2)];
        if let Some(ls) = search_certificate(&n, &grid) {
            prop_assert!(certify_numeric(&n, &ls));
            for x0 in -6..=6 {
                for x1 in -6..=6 {
                    let x = [frac(x0, 2), frac(x1, 2)];
                    prop_assert!(!n.premises_hold(&x) || n.conclusion_holds(&x));
                }
            }
        }
    }
}

#[test]
fn instantiation_needs_every_parameter() {
    let problem = build_problem(TOYAMA, &PipelineConfig::default()).unwrap();
    let s = synthesize(&problem, &SolveConfig::default(), 10, 0);
    let mut a = s.outcome.assignment().unwrap().clone();
    a.0.remove("f.1");
    assert!(instantiate_model(&a, &problem.trs.sig, &problem.interp).is_err());
}
