//! Parametric convex domains for sorts, parametric linear interpretations
//! for ranked symbols, and the structural constraints tying them together.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::derivor::{AffineAtom, AffineImplication, LinExprP};
use crate::params::{ParamId, ParamKind, ParamTable, Poly};
use crate::rational::{frac, int, Rat};
use crate::signature::{SortedSignature, REWRITE, REWRITE_STAR};
use crate::sorts::{SortId, SubsortPoset};

/// Numeric reading of a predicate rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PredSem {
    /// `l ≥ r`
    Geq,
    /// `l ≥ r + δ`
    GtDelta,
}

/// Two rows `C_i x ≥ b_i` in dimension one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDomain {
    pub sort: SortId,
    /// `(C_i, b_i)` for i = 1, 2.
    pub rows: [(ParamId, ParamId); 2],
}

/// `F_1 x_1 + … + F_k x_k + F_0` for one rank declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLinInterp {
    pub rank: usize,
    pub coeffs: Vec<ParamId>,
    pub constant: ParamId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthConfig {
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub row_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub bound_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub coeff_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub const_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub dummy_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub alpha_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub delta_domain: Vec<Rat>,
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub lambda_domain: Vec<Rat>,
    /// Emit non-emptiness witnesses even for sorts with ground terms.
    pub force_dummies: bool,
    /// Bound every sort of a component carrying `->` from below, not just
    /// its top.
    pub bound_all_sorts: bool,
}

pub fn int_range(lo: i64, hi: i64) -> Vec<Rat> {
    (lo..=hi).map(int).collect()
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            row_domain: int_range(-1, 1),
            bound_domain: int_range(-2, 2),
            coeff_domain: int_range(0, 2),
            const_domain: int_range(0, 2),
            dummy_domain: int_range(-2, 2),
            alpha_domain: int_range(-2, 2),
            delta_domain: vec![int(1)],
            lambda_domain: vec![int(0), frac(1, 2), int(1), int(2)],
            force_dummies: false,
            bound_all_sorts: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamInterp {
    pub table: ParamTable,
    /// Indexed by sort.
    pub domains: Vec<ParamDomain>,
    /// One per rank declaration, in declaration order.
    pub interps: Vec<ParamLinInterp>,
    /// Indexed by predicate rank; `None` for predicates without a reading.
    pub preds: Vec<Option<PredSem>>,
    pub delta: ParamId,
}

fn rank_prefix(sig: &SortedSignature, rank: usize) -> String {
    let sym = &sig.funcs[rank].symbol;
    if sig.is_overloaded(sym) {
        format!("{sym}@{rank}")
    } else {
        sym.clone()
    }
}

/// Fresh parameters for every sort row and every rank, named `C.S.1`,
/// `b.S1.2`, `f.1`, `g.0`, ... (`f@3.1` for overloaded symbols).
pub fn make_param_interp(sig: &SortedSignature, cfg: &SynthConfig) -> ParamInterp {
    let mut table = ParamTable::new();
    let mut domains = Vec::new();
    for s in sig.poset.sorts() {
        let name = sig.sort_name(s);
        let c1 = table.fresh(format!("C.{name}.1"), ParamKind::DomainRow, cfg.row_domain.clone());
        let c2 = table.fresh(format!("C.{name}.2"), ParamKind::DomainRow, cfg.row_domain.clone());
        let b1 = table.fresh(format!("b.{name}.1"), ParamKind::DomainBound, cfg.bound_domain.clone());
        let b2 = table.fresh(format!("b.{name}.2"), ParamKind::DomainBound, cfg.bound_domain.clone());
        domains.push(ParamDomain {
            sort: s,
            rows: [(c1, b1), (c2, b2)],
        });
    }
    let mut interps = Vec::new();
    for (rank, decl) in sig.funcs.iter().enumerate() {
        let prefix = rank_prefix(sig, rank);
        let coeffs = (1..=decl.arity())
            .map(|i| table.fresh(format!("{prefix}.{i}"), ParamKind::Coeff, cfg.coeff_domain.clone()))
            .collect();
        let constant = table.fresh(format!("{prefix}.0"), ParamKind::Const, cfg.const_domain.clone());
        interps.push(ParamLinInterp { rank, coeffs, constant });
    }
    let delta = table.fresh("delta", ParamKind::Delta, cfg.delta_domain.clone());
    let preds = sig
        .preds
        .iter()
        .map(|p| match p.symbol.as_str() {
            REWRITE => Some(PredSem::GtDelta),
            REWRITE_STAR => Some(PredSem::Geq),
            _ => None,
        })
        .collect();
    ParamInterp {
        table,
        domains,
        interps,
        preds,
        delta,
    }
}

impl ParamInterp {
    pub fn domain(&self, s: SortId) -> &ParamDomain {
        &self.domains[s.0]
    }

    /// `C_1 x ≥ b_1` and `C_2 x ≥ b_2` for the domain of `s`.
    pub fn membership(&self, x: &str, s: SortId) -> [AffineAtom; 2] {
        self.domain(s)
            .rows
            .map(|(c, b)| AffineAtom::row(x, Poly::param(c), Poly::param(b)))
    }

    pub fn interp_of(&self, rank: usize) -> &ParamLinInterp {
        &self.interps[rank]
    }

    /// `F_1 x_1 + … + F_k x_k + F_0` over the given variable names.
    pub fn apply(&self, rank: usize, vars: &[String]) -> LinExprP {
        let li = self.interp_of(rank);
        let mut e = LinExprP::constant(Poly::param(li.constant));
        for (x, &c) in vars.iter().zip(&li.coeffs) {
            e = e.plus(&LinExprP::var(x).times(&Poly::param(c)));
        }
        e
    }

    /// Sorts whose component top carries a `GT_DELTA` predicate.
    pub fn gt_delta_tops(&self, sig: &SortedSignature) -> Vec<SortId> {
        let mut tops: Vec<SortId> = sig
            .preds
            .iter()
            .zip(&self.preds)
            .filter(|(_, sem)| **sem == Some(PredSem::GtDelta))
            .map(|(p, _)| p.args[0])
            .collect();
        tops.sort();
        tops.dedup();
        tops
    }
}

fn x_vars(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// For each top sort carrying `->`, a witness `k` with `C_i k ≥ b_i`,
/// emitted as two premise-free implications. Sorts with a ground term are
/// skipped unless `force_dummies` is set.
pub fn non_emptiness_constraints(
    interp: &mut ParamInterp,
    sig: &SortedSignature,
    cfg: &SynthConfig,
) -> Vec<AffineImplication> {
    let inhabited = sig.inhabited_sorts();
    let mut out = Vec::new();
    for s in interp.gt_delta_tops(sig) {
        if inhabited[s.0] && !cfg.force_dummies {
            continue;
        }
        let name = sig.sort_name(s).to_string();
        let k = interp
            .table
            .fresh(format!("k.{name}"), ParamKind::Dummy, cfg.dummy_domain.clone());
        for (j, (c, b)) in interp.domain(s).rows.into_iter().enumerate() {
            out.push(AffineImplication {
                tag: format!("nonempty({name},{})", j + 1),
                vars: vec![],
                premises: vec![],
                conclusion: AffineAtom {
                    lhs: BTreeMap::new(),
                    rhs: &Poly::param(b) - &(&Poly::param(c) * &Poly::param(k)),
                },
            });
        }
    }
    out
}

/// `x ∈ A_s ⇒ x ≥ α_s` for each sort that must be well-founded under `->`.
pub fn bounded_below_constraints(
    interp: &mut ParamInterp,
    sig: &SortedSignature,
    cfg: &SynthConfig,
) -> Vec<AffineImplication> {
    let tops = interp.gt_delta_tops(sig);
    let sorts: Vec<SortId> = if cfg.bound_all_sorts {
        sig.poset
            .sorts()
            .filter(|&s| sig.poset.top(s).is_some_and(|t| tops.contains(&t)))
            .collect()
    } else {
        tops
    };
    let mut out = Vec::new();
    for s in sorts {
        let name = sig.sort_name(s).to_string();
        let alpha = interp
            .table
            .fresh(format!("alpha.{name}"), ParamKind::LowerBound, cfg.alpha_domain.clone());
        out.push(AffineImplication {
            tag: format!("below({name})"),
            vars: vec!["x".into()],
            premises: interp.membership("x", s).to_vec(),
            conclusion: AffineAtom::row("x", Poly::int(1), Poly::param(alpha)),
        });
    }
    out
}

/// For each covering pair `s < s'`: `x ∈ A_s ⇒ C^{s'}_j x ≥ b^{s'}_j`, one
/// implication per row of `s'`.
pub fn subsort_constraints(interp: &ParamInterp, poset: &SubsortPoset) -> Vec<AffineImplication> {
    let mut out = Vec::new();
    for (s, t) in poset.covering_pairs() {
        for (j, (c, b)) in interp.domain(t).rows.into_iter().enumerate() {
            out.push(AffineImplication {
                tag: format!("subsort({}<{},{})", poset.name(s), poset.name(t), j + 1),
                vars: vec!["x".into()],
                premises: interp.membership("x", s).to_vec(),
                conclusion: AffineAtom::row("x", Poly::param(c), Poly::param(b)),
            });
        }
    }
    out
}

/// For each rank `f : s1…sk -> s` and row j of `s`: arguments in their
/// domains imply `C^s_j·f(x) ≥ b^s_j`.
pub fn algebraicity_constraints(interp: &ParamInterp, sig: &SortedSignature) -> Vec<AffineImplication> {
    let mut out = Vec::new();
    for (rank, decl) in sig.funcs.iter().enumerate() {
        let vars = x_vars(decl.arity());
        let mut premises = Vec::new();
        for (x, &s) in vars.iter().zip(&decl.args) {
            premises.extend(interp.membership(x, s));
        }
        let value = interp.apply(rank, &vars);
        for (j, (c, b)) in interp.domain(decl.result).rows.into_iter().enumerate() {
            let scaled = value.times(&Poly::param(c));
            out.push(AffineImplication {
                tag: format!("alg({},{})", rank_prefix(sig, rank), j + 1),
                vars: vars.clone(),
                premises: premises.clone(),
                conclusion: AffineAtom::geq(&scaled, &LinExprP::constant(Poly::param(b)), &Poly::zero()),
            });
        }
    }
    out
}

/// The two implications forcing ranks `a` and `b` of one symbol to agree
/// on the domains of `a`'s arguments.
pub fn overload_pair_constraints(
    interp: &ParamInterp,
    sig: &SortedSignature,
    a: usize,
    b: usize,
) -> Vec<AffineImplication> {
    let decl = &sig.funcs[a];
    let vars = x_vars(decl.arity());
    let mut premises = Vec::new();
    for (x, &s) in vars.iter().zip(&decl.args) {
        premises.extend(interp.membership(x, s));
    }
    let fa = interp.apply(a, &vars);
    let fb = interp.apply(b, &vars);
    let name = format!("overload({},{})", rank_prefix(sig, a), rank_prefix(sig, b));
    vec![
        AffineImplication {
            tag: format!("{name}:ge"),
            vars: vars.clone(),
            premises: premises.clone(),
            conclusion: AffineAtom::geq(&fa, &fb, &Poly::zero()),
        },
        AffineImplication {
            tag: format!("{name}:le"),
            vars,
            premises,
            conclusion: AffineAtom::geq(&fb, &fa, &Poly::zero()),
        },
    ]
}

/// Coincidence constraints for every pair of ranks `w ≤ w'` of one symbol.
pub fn overload_constraints(interp: &ParamInterp, sig: &SortedSignature) -> Vec<AffineImplication> {
    let mut out = Vec::new();
    for (a, ra) in sig.funcs.iter().enumerate() {
        for (b, rb) in sig.funcs.iter().enumerate() {
            if a != b && ra.symbol == rb.symbol && sig.poset.leq_string(&ra.args, &rb.args).unwrap_or(false) {
                out.extend(overload_pair_constraints(interp, sig, a, b));
            }
        }
    }
    out
}

/// All structural constraints in a fixed order: non-emptiness, bounded
/// below, subsorts, algebraicity, overloads.
pub fn structural_constraints(
    interp: &mut ParamInterp,
    sig: &SortedSignature,
    cfg: &SynthConfig,
) -> Vec<AffineImplication> {
    let mut out = non_emptiness_constraints(interp, sig, cfg);
    out.extend(bounded_below_constraints(interp, sig, cfg));
    out.extend(subsort_constraints(interp, &sig.poset));
    out.extend(algebraicity_constraints(interp, sig));
    out.extend(overload_constraints(interp, sig));
    out
}
