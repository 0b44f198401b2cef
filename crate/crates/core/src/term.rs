//! Terms, atoms and the universally quantified implicational sentences the
//! pipeline works with.

use std::collections::BTreeMap;
use std::fmt;

use crate::signature::SortedSignature;
use crate::sorts::SortId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var {
        name: String,
        sort: SortId,
    },
    /// `rank` indexes `SortedSignature::funcs`.
    App {
        symbol: String,
        rank: usize,
        args: Vec<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("no rank of `{symbol}` accepts argument sorts [{args}]")]
    IllTyped { symbol: String, args: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("no rank of predicate `{pred}` covers argument sorts [{args}]")]
    IllTypedAtom { pred: String, args: String },
    #[error("variable `{0}` is not quantified")]
    FreeVariable(String),
}

impl Term {
    pub fn var(sig: &SortedSignature, name: &str) -> Result<Term, TermError> {
        let sort = sig
            .var_sort(name)
            .ok_or_else(|| TermError::UndeclaredVariable(name.to_string()))?;
        Ok(Term::Var {
            name: name.to_string(),
            sort,
        })
    }

    pub fn var_of(name: &str, sort: SortId) -> Term {
        Term::Var {
            name: name.to_string(),
            sort,
        }
    }

    /// Applies `symbol` at the least rank accepting the arguments' least sorts.
    pub fn app(sig: &SortedSignature, symbol: &str, args: Vec<Term>) -> Result<Term, TermError> {
        let arg_sorts = args.iter().map(|a| least_sort(a, sig)).collect::<Result<Vec<_>, _>>()?;
        let rank = sig.least_rank(symbol, &arg_sorts).ok_or_else(|| TermError::IllTyped {
            symbol: symbol.to_string(),
            args: sort_list(sig, &arg_sorts),
        })?;
        Ok(Term::App {
            symbol: symbol.to_string(),
            rank,
            args,
        })
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var { .. } => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars_into(&self, out: &mut Vec<(String, SortId)>) {
        match self {
            Term::Var { name, sort } => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), *sort));
                }
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> Vec<(String, SortId)> {
        let mut out = Vec::new();
        self.vars_into(&mut out);
        out
    }

    pub fn substitute(&self, sigma: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var { name, .. } => sigma.get(name).cloned().unwrap_or_else(|| self.clone()),
            Term::App { symbol, rank, args } => Term::App {
                symbol: symbol.clone(),
                rank: *rank,
                args: args.iter().map(|a| a.substitute(sigma)).collect(),
            },
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { name, .. } => f.write_str(name),
            Term::App { symbol, args, .. } if args.is_empty() => f.write_str(symbol),
            Term::App { symbol, args, .. } => {
                write!(f, "{symbol}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn sort_list(sig: &SortedSignature, sorts: &[SortId]) -> String {
    sorts.iter().map(|&s| sig.sort_name(s)).collect::<Vec<_>>().join(" ")
}

/// Least sort of `t`, recomputed bottom-up from the argument sorts.
pub fn least_sort(t: &Term, sig: &SortedSignature) -> Result<SortId, TermError> {
    match t {
        Term::Var { sort, .. } => Ok(*sort),
        Term::App { symbol, args, .. } => {
            let arg_sorts = args.iter().map(|a| least_sort(a, sig)).collect::<Result<Vec<_>, _>>()?;
            let rank = sig.least_rank(symbol, &arg_sorts).ok_or_else(|| TermError::IllTyped {
                symbol: symbol.clone(),
                args: sort_list(sig, &arg_sorts),
            })?;
            Ok(sig.funcs[rank].result)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub pred: String,
    /// Index into `SortedSignature::preds`.
    pub rank: usize,
    pub args: Vec<Term>,
}

impl Atom {
    /// Builds `pred(args)` at the least predicate rank covering the
    /// arguments' least sorts.
    pub fn new(sig: &SortedSignature, pred: &str, args: Vec<Term>) -> Result<Atom, TermError> {
        let arg_sorts = args.iter().map(|a| least_sort(a, sig)).collect::<Result<Vec<_>, _>>()?;
        let rank = sig
            .least_pred_rank(pred, &arg_sorts)
            .ok_or_else(|| TermError::IllTypedAtom {
                pred: pred.to_string(),
                args: sort_list(sig, &arg_sorts),
            })?;
        Ok(Atom {
            pred: pred.to_string(),
            rank,
            args,
        })
    }

    pub fn vars_into(&self, out: &mut Vec<(String, SortId)>) {
        self.args.iter().for_each(|a| a.vars_into(out));
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.len() == 2 {
            write!(f, "{} {} {}", self.args[0], self.pred, self.args[1])
        } else {
            write!(f, "{}(", self.pred)?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")
        }
    }
}

/// `∀ vars (premises ⇒ conclusion)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub quantified_vars: Vec<(String, SortId)>,
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
}

impl Sentence {
    pub fn new(
        quantified_vars: Vec<(String, SortId)>,
        premises: Vec<Atom>,
        conclusion: Atom,
    ) -> Result<Sentence, TermError> {
        let mut used = Vec::new();
        premises.iter().for_each(|a| a.vars_into(&mut used));
        conclusion.vars_into(&mut used);
        for (name, _) in &used {
            if !quantified_vars.iter().any(|(q, _)| q == name) {
                return Err(TermError::FreeVariable(name.clone()));
            }
        }
        Ok(Sentence {
            quantified_vars,
            premises,
            conclusion,
        })
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    pub fn max_depth(&self) -> usize {
        self.atoms()
            .flat_map(|a| a.args.iter())
            .map(Term::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn display(&self, sig: &SortedSignature) -> String {
        let mut out = String::new();
        if !self.quantified_vars.is_empty() {
            out.push_str("forall ");
            let vars: Vec<String> = self
                .quantified_vars
                .iter()
                .map(|(n, s)| format!("{n}:{}", sig.sort_name(*s)))
                .collect();
            out.push_str(&vars.join(", "));
            out.push_str(" . ");
        }
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                out.push_str(" /\\ ");
            }
            out.push_str(&p.to_string());
        }
        if !self.premises.is_empty() {
            out.push_str(" => ");
        }
        out.push_str(&self.conclusion.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::REWRITE;
    use crate::sorts::build_poset;

    fn toyama() -> SortedSignature {
        let poset = build_poset(&["S", "S1", "S2"], &[("S2", "S1")]).unwrap();
        let mut sig = SortedSignature::new(poset);
        sig.add_op("0", &[], "S2").unwrap();
        sig.add_op("1", &[], "S1").unwrap();
        sig.add_op("f", &["S1", "S1", "S1"], "S").unwrap();
        sig.add_op("g", &["S1", "S1"], "S1").unwrap();
        sig.add_var("x", "S2").unwrap();
        sig.add_var("y", "S1").unwrap();
        sig.install_rewrite_predicates();
        sig
    }

    fn c(sig: &SortedSignature, s: &str) -> Term {
        Term::app(sig, s, vec![]).unwrap()
    }

    #[test]
    fn least_sorts_of_examples() {
        let sig = toyama();
        let g01 = Term::app(&sig, "g", vec![c(&sig, "0"), c(&sig, "1")]).unwrap();
        assert_eq!(least_sort(&g01, &sig).unwrap(), sig.sort("S1").unwrap());
        let x = Term::var(&sig, "x").unwrap();
        assert_eq!(least_sort(&x, &sig).unwrap(), sig.sort("S2").unwrap());
        let f010 = Term::app(&sig, "f", vec![c(&sig, "0"), c(&sig, "1"), c(&sig, "0")]).unwrap();
        assert_eq!(least_sort(&f010, &sig).unwrap(), sig.sort("S").unwrap());
    }

    #[test]
    fn ill_typed_application_rejected() {
        let sig = toyama();
        let f010 = Term::app(&sig, "f", vec![c(&sig, "0"), c(&sig, "1"), c(&sig, "0")]).unwrap();
        let err = Term::app(&sig, "g", vec![f010, c(&sig, "1")]).unwrap_err();
        assert!(matches!(err, TermError::IllTyped { .. }));
        assert!(matches!(Term::var(&sig, "nope"), Err(TermError::UndeclaredVariable(_))));
    }

    #[test]
    fn sentences_must_be_closed() {
        let sig = toyama();
        let y = Term::var(&sig, "y").unwrap();
        let gyy = Term::app(&sig, "g", vec![y.clone(), y.clone()]).unwrap();
        let atom = Atom::new(&sig, REWRITE, vec![gyy, y]).unwrap();
        assert!(Sentence::new(vec![], vec![], atom.clone()).is_err());
        let s1 = sig.sort("S1").unwrap();
        let s = Sentence::new(vec![("y".into(), s1)], vec![], atom).unwrap();
        assert_eq!(s.display(&sig), "forall y:S1 . g(y,y) -> y");
    }
}
