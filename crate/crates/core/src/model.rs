//! Concrete models: solved domains and interpretations, their independent
//! verification against the theory, rendering, and the verdict.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::farkas::{certify, search_certificate, NumericImplication};
use crate::interp::{ParamInterp, PredSem};
use crate::pipeline::Problem;
use crate::rational::{fmt_rat, frac, int, Rat};
use crate::signature::SortedSignature;
use crate::solver::Assignment;
use crate::sorts::SortId;
use crate::term::{Atom, Sentence, Term};

/// A closed, possibly unbounded or empty, interval of rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_opt_rat")]
    pub lower: Option<Rat>,
    #[serde(with = "crate::rational::serde_opt_rat")]
    pub upper: Option<Rat>,
    pub empty: bool,
}

impl Interval {
    pub const FULL: Interval = Interval {
        lower: None,
        upper: None,
        empty: false,
    };
    pub const EMPTY: Interval = Interval {
        lower: None,
        upper: None,
        empty: true,
    };

    pub fn closed(lo: Rat, hi: Rat) -> Interval {
        Interval::FULL.meet_lower(lo).meet_upper(hi)
    }

    fn normalize(self) -> Interval {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) if l > u => Interval::EMPTY,
            _ if self.empty => Interval::EMPTY,
            _ => self,
        }
    }

    fn meet_lower(self, v: Rat) -> Interval {
        let lower = Some(self.lower.map_or(v, |l| l.max(v)));
        Interval { lower, ..self }.normalize()
    }

    fn meet_upper(self, v: Rat) -> Interval {
        let upper = Some(self.upper.map_or(v, |u| u.min(v)));
        Interval { upper, ..self }.normalize()
    }

    /// `{x | c·x ≥ b}` intersected in.
    pub fn meet_row(self, c: Rat, b: Rat) -> Interval {
        if c.is_positive() {
            self.meet_lower(b / c)
        } else if c.is_negative() {
            self.meet_upper(b / c)
        } else if b.is_positive() {
            Interval::EMPTY
        } else {
            self
        }
    }

    pub fn from_rows(rows: &[(Rat, Rat)]) -> Interval {
        rows.iter().fold(Interval::FULL, |i, &(c, b)| i.meet_row(c, b))
    }

    pub fn contains(&self, x: &Rat) -> bool {
        !self.empty && self.lower.is_none_or(|l| l <= *x) && self.upper.is_none_or(|u| *x <= u)
    }

    pub fn is_point(&self) -> bool {
        !self.empty && self.lower.is_some() && self.lower == self.upper
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        let lower_ok = match (other.lower, self.lower) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => o <= s,
        };
        let upper_ok = match (other.upper, self.upper) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(s)) => s <= o,
        };
        lower_ok && upper_ok
    }

    /// Deterministic candidates first (endpoints, integer grid, a midpoint),
    /// at most `cap` of them.
    pub fn candidates(&self, cap: usize) -> Vec<Rat> {
        if self.empty {
            return vec![];
        }
        let mut out: Vec<Rat> = Vec::new();
        let push = |v: Rat, out: &mut Vec<Rat>| {
            if out.len() < cap && self.contains(&v) && !out.contains(&v) {
                out.push(v);
            }
        };
        match (self.lower, self.upper) {
            (Some(l), Some(u)) => {
                push(l, &mut out);
                push(u, &mut out);
                let mut k = l.ceil();
                while k <= u && out.len() < cap {
                    push(k, &mut out);
                    k += Rat::one();
                }
                push((l + u) / int(2), &mut out);
            }
            (Some(l), None) => {
                for i in 0..=10 {
                    push(l + int(i), &mut out);
                }
                push(l + frac(1, 2), &mut out);
            }
            (None, Some(u)) => {
                for i in 0..=10 {
                    push(u - int(i), &mut out);
                }
                push(u - frac(1, 2), &mut out);
            }
            (None, None) => {
                push(Rat::zero(), &mut out);
                for i in 1..=10 {
                    push(int(i), &mut out);
                    push(int(-i), &mut out);
                }
                push(frac(1, 2), &mut out);
                push(frac(-1, 2), &mut out);
            }
        }
        out
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Option<Rat> {
        if self.empty {
            return None;
        }
        let den: i64 = rng.gen_range(1..=8);
        let u = frac(rng.gen_range(0..=den), den);
        let spread = int(20);
        Some(match (self.lower, self.upper) {
            (Some(l), Some(h)) => l + (h - l) * u,
            (Some(l), None) => l + spread * u,
            (None, Some(h)) => h - spread * u,
            (None, None) => spread * (u - frac(1, 2)) * int(2),
        })
    }

    pub fn render(&self) -> String {
        if self.empty {
            return "∅".into();
        }
        if self.is_point() {
            return format!("{{{}}}", fmt_rat(&self.lower.unwrap()));
        }
        let lo = self.lower.map_or("(-inf".to_string(), |l| format!("[{}", fmt_rat(&l)));
        let hi = self.upper.map_or("+inf)".to_string(), |u| format!("{}]", fmt_rat(&u)));
        format!("{lo}, {hi}")
    }
}

/// Deterministic sample tuples from a product of intervals: the grid of
/// candidates in mixed-radix order, then random points, `n` in total.
/// Empty when some interval is empty.
pub fn sample_tuples(intervals: &[Interval], n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    if intervals.iter().any(|i| i.empty) {
        return vec![];
    }
    let cands: Vec<Vec<Rat>> = intervals.iter().map(|i| i.candidates(1000)).collect();
    let mut out = Vec::with_capacity(n);
    let mut idx = vec![0usize; cands.len()];
    'grid: while out.len() < n {
        out.push(idx.iter().zip(&cands).map(|(&i, c)| c[i]).collect());
        let mut d = idx.len();
        loop {
            if d == 0 {
                break 'grid;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < cands[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
    while out.len() < n {
        out.push(intervals.iter().map(|i| i.random(rng).unwrap()).collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortModel {
    pub name: String,
    /// Solved `(C_i, b_i)` rows.
    #[serde(with = "rows_serde")]
    pub rows: Vec<(Rat, Rat)>,
    pub interval: Interval,
}

mod rows_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &[(Rat, Rat)], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<[String; 2]> = v.iter().map(|(c, b)| [fmt_rat(c), fmt_rat(b)]).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rat, Rat)>, D::Error> {
        let rows = Vec::<[String; 2]>::deserialize(d)?;
        rows.iter()
            .map(|[c, b]| {
                let p = |t: &str| parse_rat(t).map_err(serde::de::Error::custom);
                Ok((p(c)?, p(b)?))
            })
            .collect()
    }
}

/// `coeffs · args + constant` for one rank declaration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionModel {
    pub symbol: String,
    pub args: Vec<String>,
    pub result: String,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "crate::rational::serde_rat")]
    pub constant: Rat,
}

impl FunctionModel {
    pub fn apply(&self, xs: &[Rat]) -> Rat {
        self.coeffs.iter().zip(xs).map(|(c, x)| c * x).sum::<Rat>() + self.constant
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredModel {
    pub symbol: String,
    pub args: Vec<String>,
    /// `None` for predicates without a numeric reading.
    pub semantics: Option<PredSem>,
}

/// Indexed like the signature: `sorts[s]`, `functions[rank]`,
/// `predicates[pred rank]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcreteModel {
    pub sorts: Vec<SortModel>,
    pub functions: Vec<FunctionModel>,
    pub predicates: Vec<PredModel>,
    #[serde(with = "crate::rational::serde_rat")]
    pub delta: Rat,
    pub assignment: Assignment,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("the domain of sort {0} is empty")]
    EmptyDomain(String),
    #[error("parameter `{0}` has no value")]
    UnboundParam(String),
}

/// Sorts that must be inhabited: tops carrying `->`.
pub fn required_nonempty(sig: &SortedSignature, interp: &ParamInterp) -> Vec<SortId> {
    interp.gt_delta_tops(sig)
}

pub fn instantiate_model(
    a: &Assignment,
    sig: &SortedSignature,
    interp: &ParamInterp,
) -> Result<ConcreteModel, ModelError> {
    let table = &interp.table;
    let val = |id| {
        let name = table.name(id);
        a.get(name).ok_or_else(|| ModelError::UnboundParam(name.to_string()))
    };
    let mut sorts = Vec::new();
    for d in &interp.domains {
        let rows = d
            .rows
            .iter()
            .map(|&(c, b)| Ok((val(c)?, val(b)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        sorts.push(SortModel {
            name: sig.sort_name(d.sort).to_string(),
            interval: Interval::from_rows(&rows),
            rows,
        });
    }
    for s in required_nonempty(sig, interp) {
        if sorts[s.0].interval.empty {
            return Err(ModelError::EmptyDomain(sorts[s.0].name.clone()));
        }
    }
    let mut functions = Vec::new();
    for (decl, li) in sig.funcs.iter().zip(&interp.interps) {
        functions.push(FunctionModel {
            symbol: decl.symbol.clone(),
            args: decl.args.iter().map(|&s| sig.sort_name(s).to_string()).collect(),
            result: sig.sort_name(decl.result).to_string(),
            coeffs: li.coeffs.iter().map(|&c| val(c)).collect::<Result<_, _>>()?,
            constant: val(li.constant)?,
        });
    }
    let predicates = sig
        .preds
        .iter()
        .zip(&interp.preds)
        .map(|(p, sem)| PredModel {
            symbol: p.symbol.clone(),
            args: p.args.iter().map(|&s| sig.sort_name(s).to_string()).collect(),
            semantics: *sem,
        })
        .collect();
    Ok(ConcreteModel {
        sorts,
        functions,
        predicates,
        delta: val(interp.delta)?,
        assignment: a.clone(),
    })
}

impl ConcreteModel {
    pub fn interval(&self, s: SortId) -> &Interval {
        &self.sorts[s.0].interval
    }

    pub fn eval(&self, t: &Term, env: &BTreeMap<String, Rat>) -> Rat {
        match t {
            Term::Var { name, .. } => env[name],
            Term::App { rank, args, .. } => {
                let xs: Vec<Rat> = args.iter().map(|a| self.eval(a, env)).collect();
                self.functions[*rank].apply(&xs)
            }
        }
    }

    /// `(lhs, rhs, holds)` with `rhs` already including the margin.
    pub fn eval_atom(&self, atom: &Atom, env: &BTreeMap<String, Rat>) -> Option<(Rat, Rat, bool)> {
        let sem = self.predicates[atom.rank].semantics?;
        let l = self.eval(&atom.args[0], env);
        let mut r = self.eval(&atom.args[1], env);
        if sem == PredSem::GtDelta {
            r += self.delta;
        }
        Some((l, r, l >= r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub valuation: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceCheck {
    pub id: usize,
    pub tag: String,
    pub certificate_ok: bool,
    pub samples: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub id: usize,
    pub tag: String,
    pub certificate_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub ok: bool,
    pub checked: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub sentences: Vec<SentenceCheck>,
    pub structural: Vec<ConstraintCheck>,
    pub invariants: Vec<InvariantCheck>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.sentences.iter().all(|s| s.certificate_ok && s.failures.is_empty())
            && self.structural.iter().all(|s| s.certificate_ok)
            && self.invariants.iter().all(|i| i.ok)
    }

    pub fn failure_count(&self) -> usize {
        self.sentences.iter().map(|s| s.failures.len()).sum()
    }
}

/// Keeps reports small; the count of failures is still exact in spirit
/// because sampling stops recording, not checking.
const MAX_RECORDED_FAILURES: usize = 5;

/// Checks one sentence on `n` sampled valuations.
pub fn sample_sentence(model: &ConcreteModel, s: &Sentence, n: usize, rng: &mut ChaCha8Rng) -> (usize, Vec<Failure>) {
    let intervals: Vec<Interval> = s.quantified_vars.iter().map(|(_, srt)| *model.interval(*srt)).collect();
    let tuples = sample_tuples(&intervals, n, rng);
    let mut failures = Vec::new();
    for t in &tuples {
        let env: BTreeMap<String, Rat> = s
            .quantified_vars
            .iter()
            .map(|(x, _)| x.clone())
            .zip(t.iter().copied())
            .collect();
        let premises_hold = s
            .premises
            .iter()
            .all(|p| model.eval_atom(p, &env).is_some_and(|(_, _, ok)| ok));
        if !premises_hold {
            continue;
        }
        let (l, r, ok) = match model.eval_atom(&s.conclusion, &env) {
            Some(v) => v,
            None => (Rat::zero(), Rat::zero(), false),
        };
        if !ok && failures.len() < MAX_RECORDED_FAILURES {
            failures.push(Failure {
                valuation: env.iter().map(|(k, v)| (k.clone(), fmt_rat(v))).collect(),
                lhs: fmt_rat(&l),
                rhs: fmt_rat(&r),
            });
        }
    }
    (tuples.len(), failures)
}

/// Multiplier grid used to re-certify implications that were dropped
/// before elimination (tautologies, duplicates, 0/1-certified ones).
fn recheck_grid() -> Vec<Rat> {
    vec![Rat::zero(), frac(1, 2), Rat::one(), int(2)]
}

/// Re-checks every Farkas certificate exactly, samples every theory
/// sentence, and checks the structural invariants.
pub fn verify_model(model: &ConcreteModel, problem: &Problem, samples: usize, seed: u64) -> Report {
    let table = &problem.interp.table;
    let a = &model.assignment;
    let value = a.lookup(table);
    let cert_ok = |j: usize| {
        let lambdas: Option<Vec<Rat>> = problem.certificates[j].lambdas.iter().map(|&l| value(l)).collect();
        lambdas.is_some_and(|ls| certify(&problem.implications[j], &ls, &value))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences = Vec::new();
    for (i, ts) in problem.theory.sentences.iter().enumerate() {
        let certificate_ok = match problem.sentence_index[i] {
            Some(j) => cert_ok(j),
            None => NumericImplication::instantiate(&problem.sentence_impls[i], &value)
                .is_ok_and(|n| search_certificate(&n, &recheck_grid()).is_some()),
        };
        let (count, failures) = sample_sentence(model, &ts.sentence, samples, &mut rng);
        sentences.push(SentenceCheck {
            id: i + 1,
            tag: ts.tag.to_string(),
            certificate_ok,
            samples: count,
            failures,
        });
    }
    let structural = (0..problem.structural_len())
        .map(|j| ConstraintCheck {
            id: j + 1,
            tag: problem.implications[j].tag.clone(),
            certificate_ok: cert_ok(j),
        })
        .collect();
    let sig = &problem.trs.sig;
    let invariants = vec![
        subsort_containment(model, sig),
        algebraicity_closure(model, sig, samples, &mut rng),
        overload_coincidence(model, sig, samples, &mut rng),
    ];
    Report {
        sentences,
        structural,
        invariants,
    }
}

/// `s ≤ s' ⇒ A(s) ⊆ A(s')` for every declared subsort pair.
pub fn subsort_containment(model: &ConcreteModel, sig: &SortedSignature) -> InvariantCheck {
    let pairs = sig.poset.strict_pairs();
    let violations: Vec<String> = pairs
        .iter()
        .filter(|(a, b)| !model.interval(*a).is_subset_of(model.interval(*b)))
        .map(|(a, b)| {
            format!(
                "A({}) = {} not inside A({}) = {}",
                sig.sort_name(*a),
                model.interval(*a).render(),
                sig.sort_name(*b),
                model.interval(*b).render()
            )
        })
        .collect();
    InvariantCheck {
        name: "subsort-containment".into(),
        ok: violations.is_empty(),
        checked: pairs.len(),
        violations,
    }
}

/// Every function maps sampled argument tuples into its result domain.
pub fn algebraicity_closure(
    model: &ConcreteModel,
    sig: &SortedSignature,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> InvariantCheck {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (rank, decl) in sig.funcs.iter().enumerate() {
        let intervals: Vec<Interval> = decl.args.iter().map(|s| *model.interval(*s)).collect();
        let target = model.interval(decl.result);
        for xs in sample_tuples(&intervals, samples, rng) {
            checked += 1;
            let v = model.functions[rank].apply(&xs);
            if !target.contains(&v) && violations.len() < MAX_RECORDED_FAILURES {
                let args: Vec<String> = xs.iter().map(fmt_rat).collect();
                violations.push(format!(
                    "{}({}) = {} outside {}",
                    decl.symbol,
                    args.join(","),
                    fmt_rat(&v),
                    target.render()
                ));
            }
        }
    }
    InvariantCheck {
        name: "algebraicity-closure".into(),
        ok: violations.is_empty(),
        checked,
        violations,
    }
}

/// Ranks `w → s` and `w' → s'` of one symbol with `w ≤ w'` agree on
/// sampled points of the smaller argument domains.
pub fn overload_coincidence(
    model: &ConcreteModel,
    sig: &SortedSignature,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> InvariantCheck {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (i, a) in sig.funcs.iter().enumerate() {
        for (j, b) in sig.ranks_of(&a.symbol) {
            if i == j || a.arity() != b.arity() || !sig.poset.leq_string(&a.args, &b.args).unwrap_or(false) {
                continue;
            }
            let intervals: Vec<Interval> = a.args.iter().map(|s| *model.interval(*s)).collect();
            for xs in sample_tuples(&intervals, samples, rng) {
                checked += 1;
                let (u, v) = (model.functions[i].apply(&xs), model.functions[j].apply(&xs));
                if u != v && violations.len() < MAX_RECORDED_FAILURES {
                    violations.push(format!(
                        "{} and {} differ: {} vs {}",
                        sig.display_rank(a),
                        sig.display_rank(b),
                        fmt_rat(&u),
                        fmt_rat(&v)
                    ));
                }
            }
        }
    }
    InvariantCheck {
        name: "overload-coincidence".into(),
        ok: violations.is_empty(),
        checked,
        violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    ModelFoundTerminating,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub reasons: Vec<String>,
}

/// What a positive verdict rests on.
pub const VERDICT_NOTE: &str = "a model interpreting -> as a well-founded relation implies operational termination; \
the claim is conditional on that framework";

impl Verdict {
    pub fn unknown(reason: impl Into<String>) -> Verdict {
        Verdict {
            status: VerdictStatus::Unknown,
            reasons: vec![reason.into()],
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            VerdictStatus::ModelFoundTerminating => "MODEL_FOUND_TERMINATING",
            VerdictStatus::Unknown => "UNKNOWN",
        }
    }
}

/// Positive only when the report is fully green, `δ > 0`, and every sort
/// in a component whose top carries `->` is bounded from below.
pub fn termination_verdict(model: &ConcreteModel, report: &Report, sig: &SortedSignature) -> Verdict {
    let mut reasons = Vec::new();
    for s in &report.sentences {
        if !s.certificate_ok {
            reasons.push(format!("sentence {} ({}) has no valid certificate", s.id, s.tag));
        }
        if !s.failures.is_empty() {
            reasons.push(format!("sentence {} ({}) is falsified by sampling", s.id, s.tag));
        }
    }
    for s in &report.structural {
        if !s.certificate_ok {
            reasons.push(format!("constraint {} has no valid certificate", s.tag));
        }
    }
    for i in &report.invariants {
        if !i.ok {
            reasons.push(format!("invariant {} violated", i.name));
        }
    }
    if !model.delta.is_positive() {
        reasons.push("delta is not positive".into());
    }
    for (p, pm) in sig.preds.iter().zip(&model.predicates) {
        if pm.semantics != Some(PredSem::GtDelta) {
            continue;
        }
        let comp = sig.poset.component(p.args[0]);
        for &s in &sig.poset.components()[comp] {
            let i = model.interval(s);
            if !i.empty && i.lower.is_none() {
                reasons.push(format!("A({}) is not bounded from below", sig.sort_name(s)));
            }
        }
    }
    Verdict {
        status: if reasons.is_empty() {
            VerdictStatus::ModelFoundTerminating
        } else {
            VerdictStatus::Unknown
        },
        reasons,
    }
}

fn var_names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

/// `x + y + 1`, `2*x - 1/2`, `0`.
pub fn render_linear(coeffs: &[Rat], constant: &Rat, vars: &[String]) -> String {
    let mut out = String::new();
    let mut push = |c: Rat, body: Option<&str>| {
        if c.is_zero() {
            return;
        }
        let neg = c.is_negative();
        let m = c.abs();
        let text = match body {
            Some(x) if m.is_one() => x.to_string(),
            Some(x) => format!("{}*{x}", fmt_rat(&m)),
            None => fmt_rat(&m),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&text);
    };
    for (c, x) in coeffs.iter().zip(vars) {
        push(*c, Some(x));
    }
    push(*constant, None);
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render_model(model: &ConcreteModel, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(model).expect("model serializes"),
        Format::Text => render_text(model),
    }
}

fn render_text(model: &ConcreteModel) -> String {
    let mut out = String::new();
    for s in &model.sorts {
        writeln!(out, "A({}) = {}", s.name, s.interval.render()).unwrap();
    }
    for f in &model.functions {
        let vars = var_names(f.coeffs.len());
        let head = if vars.is_empty() {
            f.symbol.clone()
        } else {
            format!("{}({})", f.symbol, vars.join(","))
        };
        let overloaded = model.functions.iter().filter(|g| g.symbol == f.symbol).count() > 1;
        let rank = if overloaded {
            format!("    [{} -> {}]", f.args.join(" "), f.result)
        } else {
            String::new()
        };
        writeln!(out, "{head} = {}{rank}", render_linear(&f.coeffs, &f.constant, &vars)).unwrap();
    }
    for p in &model.predicates {
        let reading = match p.semantics {
            Some(PredSem::GtDelta) => format!("t >_{} t'", fmt_rat(&model.delta)),
            Some(PredSem::Geq) => "t >= t'".into(),
            None => continue,
        };
        writeln!(out, "t {}[{}] t' <=> {reading}", p.symbol, p.args.join(" ")).unwrap();
    }
    out
}

pub fn parse_model_json(text: &str) -> Result<ConcreteModel, serde_json::Error> {
    serde_json::from_str(text)
}

/// Full report: verdict, per-sentence checks, model.
pub fn report_json(verdict: &Verdict, report: Option<&Report>, model: Option<&ConcreteModel>) -> serde_json::Value {
    serde_json::json!({
        "verdict": verdict.label(),
        "reasons": verdict.reasons,
        "note": VERDICT_NOTE,
        "sentences": report.map(|r| serde_json::to_value(&r.sentences).unwrap()).unwrap_or(serde_json::json!([])),
        "structural": report.map(|r| serde_json::to_value(&r.structural).unwrap()).unwrap_or(serde_json::json!([])),
        "invariants": report.map(|r| serde_json::to_value(&r.invariants).unwrap()).unwrap_or(serde_json::json!([])),
        "model": model.map(|m| serde_json::to_value(m).unwrap()).unwrap_or(serde_json::Value::Null),
    })
}
