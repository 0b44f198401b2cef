//! Order-sorted signatures with predicates and their well-formedness checks.

use std::fmt;

use serde::Serialize;

use crate::sorts::{SortError, SortId, SubsortPoset};

/// `symbol : arg_sorts -> result_sort`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankDecl {
    pub symbol: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

impl RankDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_constant(&self) -> bool {
        self.args.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredDecl {
    pub symbol: String,
    pub args: Vec<SortId>,
}

pub const REWRITE: &str = "->";
pub const REWRITE_STAR: &str = "->*";
pub const EQUALITY: &str = "=";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("variable `{0}` declared twice with different sorts")]
    ConflictingVariable(String),
}

#[derive(Debug, Clone)]
pub struct SortedSignature {
    pub poset: SubsortPoset,
    pub funcs: Vec<RankDecl>,
    pub preds: Vec<PredDecl>,
    vars: Vec<(String, SortId)>,
}

impl SortedSignature {
    pub fn new(poset: SubsortPoset) -> Self {
        SortedSignature {
            poset,
            funcs: Vec::new(),
            preds: Vec::new(),
            vars: Vec::new(),
        }
    }

    pub fn sort(&self, name: &str) -> Result<SortId, SignatureError> {
        self.poset
            .lookup(name)
            .ok_or_else(|| SignatureError::UnknownSort(name.to_string()))
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        self.poset.name(s)
    }

    /// Adds `symbol : args -> result`, returning the rank index.
    pub fn add_op(&mut self, symbol: &str, args: &[&str], result: &str) -> Result<usize, SignatureError> {
        let args = args.iter().map(|a| self.sort(a)).collect::<Result<Vec<_>, _>>()?;
        let result = self.sort(result)?;
        self.funcs.push(RankDecl {
            symbol: symbol.to_string(),
            args,
            result,
        });
        Ok(self.funcs.len() - 1)
    }

    pub fn add_pred(&mut self, symbol: &str, args: Vec<SortId>) -> usize {
        if let Some(i) = self.preds.iter().position(|p| p.symbol == symbol && p.args == args) {
            return i;
        }
        self.preds.push(PredDecl {
            symbol: symbol.to_string(),
            args,
        });
        self.preds.len() - 1
    }

    pub fn add_var(&mut self, name: &str, sort: &str) -> Result<(), SignatureError> {
        let s = self.sort(sort)?;
        match self.var_sort(name) {
            Some(old) if old != s => Err(SignatureError::ConflictingVariable(name.to_string())),
            Some(_) => Ok(()),
            None => {
                self.vars.push((name.to_string(), s));
                Ok(())
            }
        }
    }

    pub fn var_sort(&self, name: &str) -> Option<SortId> {
        self.vars.iter().find(|(n, _)| n == name).map(|&(_, s)| s)
    }

    pub fn vars(&self) -> &[(String, SortId)] {
        &self.vars
    }

    pub fn is_op(&self, symbol: &str) -> bool {
        self.funcs.iter().any(|r| r.symbol == symbol)
    }

    pub fn ranks_of<'a>(&'a self, symbol: &'a str) -> impl Iterator<Item = (usize, &'a RankDecl)> + 'a {
        self.funcs.iter().enumerate().filter(move |(_, r)| r.symbol == symbol)
    }

    /// Installs `->` and `->*` (and the housed equality symbol) at
    /// `top top` for every component that has a top sort.
    pub fn install_rewrite_predicates(&mut self) {
        let tops: Vec<SortId> = (0..self.poset.components().len())
            .filter_map(|c| self.poset.top_of_component(c))
            .collect();
        for t in tops {
            self.add_pred(REWRITE, vec![t, t]);
            self.add_pred(REWRITE_STAR, vec![t, t]);
            self.add_pred(EQUALITY, vec![t, t]);
        }
    }

    /// Least rank of `symbol` whose argument string lies above `arg_sorts`.
    pub fn least_rank(&self, symbol: &str, arg_sorts: &[SortId]) -> Option<usize> {
        let candidates: Vec<usize> = self
            .ranks_of(symbol)
            .filter(|(_, r)| {
                r.args.len() == arg_sorts.len() && self.poset.leq_string(arg_sorts, &r.args).unwrap_or(false)
            })
            .map(|(i, _)| i)
            .collect();
        least_of(&candidates, |a, b| self.rank_leq(a, b))
    }

    /// Least predicate rank of `symbol` covering `arg_sorts`.
    pub fn least_pred_rank(&self, symbol: &str, arg_sorts: &[SortId]) -> Option<usize> {
        let candidates: Vec<usize> = self
            .preds
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                p.symbol == symbol
                    && p.args.len() == arg_sorts.len()
                    && self.poset.leq_string(arg_sorts, &p.args).unwrap_or(false)
            })
            .map(|(i, _)| i)
            .collect();
        least_of(&candidates, |a, b| {
            self.poset
                .leq_string(&self.preds[a].args, &self.preds[b].args)
                .unwrap_or(false)
        })
    }

    fn rank_leq(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.funcs[a], &self.funcs[b]);
        self.poset.leq_string(&ra.args, &rb.args).unwrap_or(false) && self.poset.leq(ra.result, rb.result)
    }

    pub fn check(&self) -> Diagnostics {
        check_signature(self)
    }

    /// Sorts with at least one ground term (least fixpoint over the ranks).
    pub fn inhabited_sorts(&self) -> Vec<bool> {
        let mut inhabited = vec![false; self.poset.len()];
        loop {
            let mut changed = false;
            for r in &self.funcs {
                if r.args.iter().all(|a| inhabited[a.0]) {
                    for s in self.poset.sorts() {
                        if !inhabited[s.0] && self.poset.leq(r.result, s) {
                            inhabited[s.0] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return inhabited;
            }
        }
    }

    pub fn is_overloaded(&self, symbol: &str) -> bool {
        self.ranks_of(symbol).count() > 1
    }

    pub fn display_rank(&self, r: &RankDecl) -> String {
        let args: Vec<&str> = r.args.iter().map(|&s| self.sort_name(s)).collect();
        format!(
            "{} : {}-> {}",
            r.symbol,
            args.iter().map(|a| format!("{a} ")).collect::<String>(),
            self.sort_name(r.result)
        )
    }
}

fn least_of(candidates: &[usize], leq: impl Fn(usize, usize) -> bool) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .find(|&c| candidates.iter().all(|&o| leq(c, o)))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Check {
    pub ok: bool,
    pub problems: Vec<String>,
}

impl Check {
    fn from_problems(problems: Vec<String>) -> Self {
        Check {
            ok: problems.is_empty(),
            problems,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Diagnostics {
    pub monotonic: Check,
    pub sensible: Check,
    pub regular: Check,
    pub coherent: Check,
    pub constants_single_rank: Check,
    pub predicate_regular: Check,
}

impl Diagnostics {
    pub fn all_ok(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.ok)
    }

    pub fn checks(&self) -> [(&'static str, &Check); 6] {
        [
            ("monotonic", &self.monotonic),
            ("sensible", &self.sensible),
            ("regular", &self.regular),
            ("coherent", &self.coherent),
            ("constants-single-rank", &self.constants_single_rank),
            ("predicate-regular", &self.predicate_regular),
        ]
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks()
            .iter()
            .filter(|(_, c)| !c.ok)
            .flat_map(|(name, c)| c.problems.iter().map(move |p| format!("{name}: {p}")))
            .collect()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in self.checks() {
            writeln!(f, "{name}: {}", if c.ok { "ok" } else { "FAILED" })?;
            for p in &c.problems {
                writeln!(f, "  {p}")?;
            }
        }
        Ok(())
    }
}

// Upper bound on |S|^k strings scanned per symbol by the regularity checks.
const MAX_REGULARITY_STRINGS: usize = 1 << 20;

fn all_strings(n_sorts: usize, k: usize) -> Option<Vec<Vec<SortId>>> {
    let total = n_sorts.checked_pow(k as u32)?;
    if total > MAX_REGULARITY_STRINGS {
        return None;
    }
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; k];
    for _ in 0..total {
        out.push(cur.iter().map(|&i| SortId(i)).collect());
        for digit in cur.iter_mut().rev() {
            *digit += 1;
            if *digit < n_sorts {
                break;
            }
            *digit = 0;
        }
    }
    Some(out)
}

pub fn check_signature(sig: &SortedSignature) -> Diagnostics {
    let poset = &sig.poset;
    let sorts = |w: &[SortId]| -> String { w.iter().map(|&s| poset.name(s)).collect::<Vec<_>>().join(" ") };

    let mut monotonic = Vec::new();
    let mut sensible = Vec::new();
    for (i, a) in sig.funcs.iter().enumerate() {
        for b in sig.funcs.iter().skip(i + 1) {
            if a.symbol != b.symbol || a.arity() != b.arity() {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if poset.leq_string(&x.args, &y.args).unwrap_or(false) && !poset.leq(x.result, y.result) {
                    monotonic.push(format!(
                        "{}: [{}] <= [{}] but {} is not <= {}",
                        x.symbol,
                        sorts(&x.args),
                        sorts(&y.args),
                        poset.name(x.result),
                        poset.name(y.result)
                    ));
                }
            }
            let same_components = a.args.iter().zip(&b.args).all(|(&x, &y)| poset.same_component(x, y));
            if same_components && !poset.same_component(a.result, b.result) {
                sensible.push(format!(
                    "{}: [{}] and [{}] share components but results {} and {} do not",
                    a.symbol,
                    sorts(&a.args),
                    sorts(&b.args),
                    poset.name(a.result),
                    poset.name(b.result)
                ));
            }
        }
    }

    let mut regular = Vec::new();
    let mut symbols: Vec<(&str, usize)> = Vec::new();
    for r in &sig.funcs {
        if !symbols.contains(&(r.symbol.as_str(), r.arity())) {
            symbols.push((r.symbol.as_str(), r.arity()));
        }
    }
    for &(symbol, k) in &symbols {
        if sig.ranks_of(symbol).filter(|(_, r)| r.arity() == k).count() < 2 {
            continue;
        }
        let Some(strings) = all_strings(poset.len(), k) else {
            regular.push(format!("{symbol}: too many argument strings to scan"));
            continue;
        };
        for w0 in strings {
            let applicable = sig
                .ranks_of(symbol)
                .any(|(_, r)| r.arity() == k && poset.leq_string(&w0, &r.args).unwrap_or(false));
            if applicable && sig.least_rank(symbol, &w0).is_none() {
                regular.push(format!("{symbol}: no least rank above [{}]", sorts(&w0)));
            }
        }
    }

    let mut constants = Vec::new();
    for r in sig.funcs.iter().filter(|r| r.is_constant()) {
        let n = sig.ranks_of(&r.symbol).count();
        if n != 1 {
            let msg = format!("constant {} has {n} rank declarations", r.symbol);
            if !constants.contains(&msg) {
                constants.push(msg);
            }
        }
    }

    let mut pred_regular = Vec::new();
    let mut pred_symbols: Vec<(&str, usize)> = Vec::new();
    for p in &sig.preds {
        if !pred_symbols.contains(&(p.symbol.as_str(), p.args.len())) {
            pred_symbols.push((p.symbol.as_str(), p.args.len()));
        }
    }
    for &(symbol, k) in &pred_symbols {
        let Some(strings) = all_strings(poset.len(), k) else {
            pred_regular.push(format!("{symbol}: too many argument strings to scan"));
            continue;
        };
        for w0 in strings {
            let applicable = sig
                .preds
                .iter()
                .any(|p| p.symbol == symbol && p.args.len() == k && poset.leq_string(&w0, &p.args).unwrap_or(false));
            if applicable && sig.least_pred_rank(symbol, &w0).is_none() {
                pred_regular.push(format!("{symbol}: no least rank above [{}]", sorts(&w0)));
            }
        }
    }

    let mut coherent = Vec::new();
    if !regular.is_empty() {
        coherent.push("signature is not regular".to_string());
    }
    for (c, members) in poset.components().iter().enumerate() {
        if poset.top_of_component(c).is_none() {
            coherent.push(format!("component {{{}}} has no top sort", sorts(members)));
        }
    }

    Diagnostics {
        monotonic: Check::from_problems(monotonic),
        sensible: Check::from_problems(sensible),
        regular: Check::from_problems(regular),
        coherent: Check::from_problems(coherent),
        constants_single_rank: Check::from_problems(constants),
        predicate_regular: Check::from_problems(pred_regular),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sorts::build_poset;

    pub(crate) fn toyama_signature() -> SortedSignature {
        let poset = build_poset(&["S", "S1", "S2"], &[("S2", "S1")]).unwrap();
        let mut sig = SortedSignature::new(poset);
        sig.add_op("0", &[], "S2").unwrap();
        sig.add_op("1", &[], "S1").unwrap();
        sig.add_op("f", &["S1", "S1", "S1"], "S").unwrap();
        sig.add_op("g", &["S1", "S1"], "S1").unwrap();
        sig.add_var("x", "S2").unwrap();
        sig.add_var("y", "S1").unwrap();
        sig.add_var("z", "S1").unwrap();
        sig.install_rewrite_predicates();
        sig
    }

    #[test]
    fn toyama_signature_is_coherent() {
        let d = toyama_signature().check();
        assert!(d.all_ok(), "{d}");
    }

    #[test]
    fn constant_with_two_ranks_fails() {
        let poset = build_poset(&["A", "B"], &[]).unwrap();
        let mut sig = SortedSignature::new(poset);
        sig.add_op("c", &[], "A").unwrap();
        sig.add_op("c", &[], "B").unwrap();
        let d = sig.check();
        assert!(!d.constants_single_rank.ok);
        // the empty argument strings compare equal, so A and B must be related
        assert!(!d.monotonic.ok);
    }

    #[test]
    fn sensibility_by_definition_scan() {
        let poset = build_poset(&["A", "B"], &[]).unwrap();
        let mut sig = SortedSignature::new(poset);
        sig.add_op("f", &["A"], "A").unwrap();
        sig.add_op("f", &["B"], "B").unwrap();
        assert!(sig.check().sensible.ok);
        sig.add_op("f", &["A"], "B").unwrap();
        let d = sig.check();
        assert!(!d.sensible.ok);
        assert!(!d.monotonic.ok);
    }

    #[test]
    fn missing_least_rank_breaks_regularity() {
        // f : A B -> C and f : B A -> C with A < B: for (A A) both apply and
        // neither is below the other.
        let poset = build_poset(&["A", "B", "C"], &[("A", "B")]).unwrap();
        let mut sig = SortedSignature::new(poset);
        sig.add_op("f", &["A", "B"], "C").unwrap();
        sig.add_op("f", &["B", "A"], "C").unwrap();
        let d = sig.check();
        assert!(!d.regular.ok);
        assert!(!d.coherent.ok);
    }

    #[test]
    fn least_rank_prefers_smaller_overload() {
        let poset = build_poset(&["Nat", "Zero"], &[("Zero", "Nat")]).unwrap();
        let mut sig = SortedSignature::new(poset);
        let big = sig.add_op("h", &["Nat"], "Nat").unwrap();
        let small = sig.add_op("h", &["Zero"], "Zero").unwrap();
        let zero = sig.sort("Zero").unwrap();
        let nat = sig.sort("Nat").unwrap();
        assert_eq!(sig.least_rank("h", &[zero]), Some(small));
        assert_eq!(sig.least_rank("h", &[nat]), Some(big));
        assert!(sig.check().all_ok());
    }

    #[test]
    fn predicates_sit_at_tops() {
        let sig = toyama_signature();
        let s1 = sig.sort("S1").unwrap();
        let s2 = sig.sort("S2").unwrap();
        let p = sig.least_pred_rank(REWRITE, &[s2, s1]).unwrap();
        assert_eq!(sig.preds[p].args, vec![s1, s1]);
        assert!(sig.least_pred_rank(REWRITE, &[s2, sig.sort("S").unwrap()]).is_none());
    }
}
