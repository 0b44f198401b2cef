//! Translation of sentences into parametric affine implications over
//! semantic (real-valued) variables.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::frontend::Theory;
use crate::interp::{ParamInterp, PredSem};
use crate::params::{ParamTable, Poly};
use crate::rational::Rat;
use crate::term::{Atom, Sentence, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivError {
    #[error("no interpretation for rank {0} of `{1}`")]
    MissingInterp(usize, String),
    #[error("unsupported formula: {0}")]
    UnsupportedFormula(String),
}

/// `Σ coeff(x)·x + constant` with coefficients polynomial in the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinExprP {
    pub coeffs: BTreeMap<String, Poly>,
    pub constant: Poly,
}

impl LinExprP {
    pub fn var(name: &str) -> Self {
        LinExprP {
            coeffs: BTreeMap::from([(name.to_string(), Poly::int(1))]),
            constant: Poly::zero(),
        }
    }

    pub fn constant(p: Poly) -> Self {
        LinExprP {
            coeffs: BTreeMap::new(),
            constant: p,
        }
    }

    pub fn coeff(&self, x: &str) -> Poly {
        self.coeffs.get(x).cloned().unwrap_or_default()
    }

    fn add_scaled(&mut self, other: &LinExprP, factor: &Poly) {
        for (x, c) in &other.coeffs {
            let entry = self.coeffs.entry(x.clone()).or_default();
            *entry = &*entry + &(c * factor);
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        self.constant = &self.constant + &(&other.constant * factor);
    }

    pub fn plus(&self, other: &LinExprP) -> LinExprP {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::int(1));
        out
    }

    pub fn minus(&self, other: &LinExprP) -> LinExprP {
        let mut out = self.clone();
        out.add_scaled(other, &Poly::int(-1));
        out
    }

    pub fn times(&self, factor: &Poly) -> LinExprP {
        let mut out = LinExprP::default();
        out.add_scaled(self, factor);
        out
    }

    pub fn substitute(&self, sigma: &BTreeMap<String, LinExprP>) -> LinExprP {
        let mut out = LinExprP::constant(self.constant.clone());
        for (x, c) in &self.coeffs {
            match sigma.get(x) {
                Some(e) => out.add_scaled(e, c),
                None => out.add_scaled(&LinExprP::var(x), c),
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .values()
            .chain(std::iter::once(&self.constant))
            .map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Numeric value under a parameter valuation and a variable valuation.
    pub fn eval(
        &self,
        params: &dyn Fn(crate::params::ParamId) -> Option<Rat>,
        vars: &BTreeMap<String, Rat>,
    ) -> Option<Rat> {
        let mut acc = self.constant.eval(params).ok()?;
        for (x, c) in &self.coeffs {
            acc += c.eval(params).ok()? * *vars.get(x)?;
        }
        Some(acc)
    }
}

/// `Σ lhs(x)·x ≥ rhs`, variables on the left, parameter-only terms on the
/// right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineAtom {
    pub lhs: BTreeMap<String, Poly>,
    pub rhs: Poly,
}

impl AffineAtom {
    /// Normalizes `e1 ≥ e2 + margin`.
    pub fn geq(e1: &LinExprP, e2: &LinExprP, margin: &Poly) -> AffineAtom {
        let diff = e1.minus(e2);
        AffineAtom {
            lhs: diff.coeffs,
            rhs: margin - &diff.constant,
        }
    }

    /// `c·x ≥ b` for a single variable.
    pub fn row(x: &str, c: Poly, b: Poly) -> AffineAtom {
        let mut lhs = BTreeMap::new();
        if !c.is_zero() {
            lhs.insert(x.to_string(), c);
        }
        AffineAtom { lhs, rhs: b }
    }

    pub fn coeff(&self, x: &str) -> Poly {
        self.lhs.get(x).cloned().unwrap_or_default()
    }

    pub fn has_no_vars(&self) -> bool {
        self.lhs.values().all(Poly::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.lhs
            .values()
            .chain(std::iter::once(&self.rhs))
            .map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    fn rename(&self, map: &BTreeMap<&str, String>) -> AffineAtom {
        AffineAtom {
            lhs: self
                .lhs
                .iter()
                .map(|(x, c)| (map.get(x.as_str()).cloned().unwrap_or_else(|| x.clone()), c.clone()))
                .collect(),
            rhs: self.rhs.clone(),
        }
    }

    pub fn display<'a>(&'a self, table: &'a ParamTable) -> AtomDisplay<'a> {
        AtomDisplay { atom: self, table }
    }
}

pub struct AtomDisplay<'a> {
    atom: &'a AffineAtom,
    table: &'a ParamTable,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atom.lhs.is_empty() {
            f.write_str("0")?;
        }
        for (i, (x, c)) in self.atom.lhs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.num_terms() > 1 {
                write!(f, "({})*{x}", c.display(self.table))?;
            } else if c.as_constant() == Some(Rat::one()) {
                f.write_str(x)?;
            } else {
                write!(f, "{}*{x}", c.display(self.table))?;
            }
        }
        write!(f, " >= {}", self.atom.rhs.display(self.table))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineImplication {
    pub tag: String,
    /// Universally quantified semantic variables, the columns of `A`.
    pub vars: Vec<String>,
    pub premises: Vec<AffineAtom>,
    pub conclusion: AffineAtom,
}

impl AffineImplication {
    pub fn degree(&self) -> usize {
        self.premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .map(AffineAtom::degree)
            .max()
            .unwrap_or(0)
    }

    /// Every atom only mentions the quantified variables.
    pub fn is_affine_form(&self) -> bool {
        self.premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .all(|a| a.lhs.keys().all(|x| self.vars.contains(x)))
    }

    /// Same implication with variables renamed positionally, for duplicate
    /// detection.
    fn canonical(&self) -> (Vec<AffineAtom>, AffineAtom) {
        let map: BTreeMap<&str, String> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, x)| (x.as_str(), format!("#{i}")))
            .collect();
        (
            self.premises.iter().map(|p| p.rename(&map)).collect(),
            self.conclusion.rename(&map),
        )
    }

    pub fn render(&self, table: &ParamTable) -> String {
        let prem: Vec<String> = self.premises.iter().map(|p| p.display(table).to_string()).collect();
        let body = if prem.is_empty() {
            self.conclusion.display(table).to_string()
        } else {
            format!("{} => {}", prem.join(" /\\ "), self.conclusion.display(table))
        };
        if self.vars.is_empty() {
            body
        } else {
            format!("forall {} . {body}", self.vars.join(", "))
        }
    }
}

/// Homomorphic extension of the parametric interpretation to terms.
pub fn eval_term(t: &Term, interp: &ParamInterp) -> Result<LinExprP, DerivError> {
    match t {
        Term::Var { name, .. } => Ok(LinExprP::var(name)),
        Term::App { symbol, rank, args } => {
            let li = interp
                .interps
                .iter()
                .find(|li| li.rank == *rank)
                .ok_or_else(|| DerivError::MissingInterp(*rank, symbol.clone()))?;
            let mut out = LinExprP::constant(Poly::param(li.constant));
            for (a, &c) in args.iter().zip(&li.coeffs) {
                out = out.plus(&eval_term(a, interp)?.times(&Poly::param(c)));
            }
            Ok(out)
        }
    }
}

fn translate_atom(a: &Atom, interp: &ParamInterp) -> Result<AffineAtom, DerivError> {
    let sem = interp
        .preds
        .get(a.rank)
        .copied()
        .flatten()
        .ok_or_else(|| DerivError::UnsupportedFormula(format!("predicate `{}` has no numeric reading", a.pred)))?;
    if a.args.len() != 2 {
        return Err(DerivError::UnsupportedFormula(format!(
            "predicate `{}` is not binary",
            a.pred
        )));
    }
    let l = eval_term(&a.args[0], interp)?;
    let r = eval_term(&a.args[1], interp)?;
    let margin = match sem {
        PredSem::Geq => Poly::zero(),
        PredSem::GtDelta => Poly::param(interp.delta),
    };
    Ok(AffineAtom::geq(&l, &r, &margin))
}

/// Domain membership of each quantified variable, then the translated
/// premises, implying the translated conclusion.
pub fn derive_sentence(tag: &str, s: &Sentence, interp: &ParamInterp) -> Result<AffineImplication, DerivError> {
    let mut premises = Vec::new();
    for (x, sort) in &s.quantified_vars {
        premises.extend(interp.membership(x, *sort));
    }
    for p in &s.premises {
        premises.push(translate_atom(p, interp)?);
    }
    Ok(AffineImplication {
        tag: tag.to_string(),
        vars: s.quantified_vars.iter().map(|(x, _)| x.clone()).collect(),
        premises,
        conclusion: translate_atom(&s.conclusion, interp)?,
    })
}

pub fn derive_theory(theory: &Theory, interp: &ParamInterp) -> Result<Vec<AffineImplication>, DerivError> {
    theory
        .sentences
        .iter()
        .map(|ts| derive_sentence(&ts.tag.to_string(), &ts.sentence, interp))
        .collect()
}

fn trivially_true(a: &AffineAtom) -> bool {
    a.has_no_vars() && a.rhs.as_constant().is_some_and(|c| !c.is_positive())
}

/// Drops implications whose conclusion is a tautology such as `0 ≥ 0`, and
/// repeats modulo renaming of the quantified variables.
pub fn simplify(impls: Vec<AffineImplication>) -> Vec<AffineImplication> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for imp in impls {
        if trivially_true(&imp.conclusion) {
            continue;
        }
        let key = imp.canonical();
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push(imp);
    }
    out
}

/// Further drops implications provable with 0/1 multipliers for every
/// parameter value (`λᵀb - β` zero or a positive multiple of `delta`).
pub fn prune_trivial(impls: Vec<AffineImplication>, delta: &Poly) -> Vec<AffineImplication> {
    impls
        .into_iter()
        .filter(|imp| !identically_certified(imp, delta))
        .collect()
}

fn identically_certified(imp: &AffineImplication, delta: &Poly) -> bool {
    let k = imp.premises.len();
    if k > 16 {
        return false;
    }
    (0u32..1 << k).any(|mask| {
        let chosen: Vec<&AffineAtom> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &imp.premises[i])
            .collect();
        let coeffs_match = imp.vars.iter().all(|x| {
            let sum = chosen.iter().fold(Poly::zero(), |acc, p| &acc + &p.coeff(x));
            sum == imp.conclusion.coeff(x)
        });
        if !coeffs_match {
            return false;
        }
        let slack = &chosen.iter().fold(Poly::zero(), |acc, p| &acc + &p.rhs) - &imp.conclusion.rhs;
        slack.is_zero() || positive_multiple_of(&slack, delta)
    })
}

fn positive_multiple_of(p: &Poly, q: &Poly) -> bool {
    let (Some((mp, cp)), Some((mq, cq))) = (single_term(p), single_term(q)) else {
        return false;
    };
    mp == mq && (cp / cq).is_positive()
}

fn single_term(p: &Poly) -> Option<(&crate::params::Monomial, Rat)> {
    let mut terms = p.terms();
    let (m, c) = terms.next()?;
    terms.next().is_none().then_some((m, *c))
}

pub fn max_degree(impls: &[AffineImplication]) -> usize {
    impls.iter().map(AffineImplication::degree).max().unwrap_or(0)
}

#[derive(Serialize)]
struct AtomJson {
    lhs: BTreeMap<String, String>,
    rhs: String,
    text: String,
}

#[derive(Serialize)]
struct ImplJson {
    id: usize,
    tag: String,
    vars: Vec<String>,
    premises: Vec<AtomJson>,
    conclusion: AtomJson,
}

#[derive(Serialize)]
struct DerivedJson {
    max_degree: usize,
    implications: Vec<ImplJson>,
}

fn atom_json(a: &AffineAtom, table: &ParamTable) -> AtomJson {
    AtomJson {
        lhs: a
            .lhs
            .iter()
            .map(|(x, c)| (x.clone(), c.display(table).to_string()))
            .collect(),
        rhs: a.rhs.display(table).to_string(),
        text: a.display(table).to_string(),
    }
}

pub fn derived_json(impls: &[AffineImplication], table: &ParamTable) -> serde_json::Value {
    let doc = DerivedJson {
        max_degree: max_degree(impls),
        implications: impls
            .iter()
            .enumerate()
            .map(|(i, imp)| ImplJson {
                id: i + 1,
                tag: imp.tag.clone(),
                vars: imp.vars.clone(),
                premises: imp.premises.iter().map(|p| atom_json(p, table)).collect(),
                conclusion: atom_json(&imp.conclusion, table),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("derived implications serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{generate_theory, parse_module};
    use crate::interp::{make_param_interp, SynthConfig};

    const TOYAMA: &str = include_str!("../data/toyama.maude");

    fn setup() -> (Theory, ParamInterp) {
        let m = parse_module(TOYAMA).unwrap();
        let th = generate_theory(&m).unwrap();
        let pi = make_param_interp(&m.sig, &SynthConfig::default());
        (th, pi)
    }

    fn p(pi: &ParamInterp, name: &str) -> Poly {
        Poly::param(pi.table.lookup(name).unwrap())
    }

    #[test]
    fn nested_terms_multiply_parameters() {
        let (th, pi) = setup();
        let sig = &th.sig;
        let v = |n: &str| Term::var_of(n, sig.sort("S1").unwrap());
        let inner = Term::app(sig, "g", vec![v("x"), v("y")]).unwrap();
        let t = Term::app(sig, "g", vec![inner, v("z")]).unwrap();
        let e = eval_term(&t, &pi).unwrap();
        let (g1, g2, g0) = (p(&pi, "g.1"), p(&pi, "g.2"), p(&pi, "g.0"));
        assert_eq!(e.coeff("x"), &g1 * &g1);
        assert_eq!(e.coeff("y"), &g1 * &g2);
        assert_eq!(e.coeff("z"), g2);
        assert_eq!(e.constant, &(&g1 * &g0) + &g0);
        assert_eq!(e.degree(), 2);
    }

    #[test]
    fn variables_translate_to_themselves() {
        let (th, pi) = setup();
        let y = Term::var(&th.sig, "y").unwrap();
        assert_eq!(eval_term(&y, &pi).unwrap(), LinExprP::var("y"));
    }

    #[test]
    fn rule_with_constants_on_the_left() {
        let (th, pi) = setup();
        let imp = derive_sentence("Re(1)", &th.sentences[9].sentence, &pi).unwrap();
        assert_eq!(imp.vars, ["x"]);
        assert_eq!(imp.premises.len(), 2);
        let (f1, f2) = (p(&pi, "f.1"), p(&pi, "f.2"));
        assert_eq!(imp.conclusion.coeff("x"), -(&f1 + &f2));
        assert_eq!(
            imp.conclusion.rhs,
            &p(&pi, "delta") - &(&(&f1 * &p(&pi, "0.0")) + &(&f2 * &p(&pi, "1.0")))
        );
    }

    #[test]
    fn projection_rule_normalizes() {
        let (th, pi) = setup();
        let imp = derive_sentence("Re(3)", &th.sentences[11].sentence, &pi).unwrap();
        assert_eq!(imp.vars, ["y", "z"]);
        assert_eq!(imp.premises.len(), 4);
        assert_eq!(imp.conclusion.coeff("y"), p(&pi, "g.1"));
        assert_eq!(imp.conclusion.coeff("z"), &p(&pi, "g.2") - &Poly::int(1));
        assert_eq!(imp.conclusion.rhs, &p(&pi, "delta") - &p(&pi, "g.0"));
        assert!(imp.is_affine_form());
    }

    #[test]
    fn reflexivity_reduces_to_zero_geq_zero() {
        let (th, pi) = setup();
        let imp = derive_sentence("Rf", &th.sentences[0].sentence, &pi).unwrap();
        assert!(imp.conclusion.lhs.is_empty());
        assert!(imp.conclusion.rhs.is_zero());
        assert!(simplify(vec![imp]).is_empty());
        assert!(simplify(vec![]).is_empty());
    }

    #[test]
    fn simplify_and_prune_counts() {
        let (th, pi) = setup();
        let all = derive_theory(&th, &pi).unwrap();
        assert_eq!(all.len(), 12);
        let simplified = simplify(all);
        assert_eq!(simplified.len(), 10);
        let pruned = prune_trivial(simplified, &Poly::param(pi.delta));
        let tags: Vec<&str> = pruned.iter().map(|i| i.tag.as_str()).collect();
        assert_eq!(
            tags,
            ["C(f,1)", "C(f,2)", "C(f,3)", "C(g,1)", "C(g,2)", "Re(1)", "Re(2)", "Re(3)"]
        );
    }

    #[test]
    fn duplicates_modulo_renaming_are_dropped() {
        let (th, pi) = setup();
        let a = derive_sentence("a", &th.sentences[10].sentence, &pi).unwrap();
        let mut b = a.clone();
        b.tag = "b".into();
        let ren: BTreeMap<&str, String> = [("y", "u".to_string()), ("z", "w".to_string())].into();
        b.vars = vec!["u".into(), "w".into()];
        b.premises = b.premises.iter().map(|p| p.rename(&ren)).collect();
        b.conclusion = b.conclusion.rename(&ren);
        assert_eq!(simplify(vec![a, b]).len(), 1);
    }

    #[test]
    fn equality_predicate_is_unsupported() {
        let (th, pi) = setup();
        let sig = &th.sig;
        let t = Term::var_of("t", sig.sort("S").unwrap());
        let atom = Atom::new(sig, crate::signature::EQUALITY, vec![t.clone(), t]).unwrap();
        let s = Sentence::new(vec![("t".into(), sig.sort("S").unwrap())], vec![], atom).unwrap();
        assert!(matches!(
            derive_sentence("eq", &s, &pi),
            Err(DerivError::UnsupportedFormula(_))
        ));
    }
}
