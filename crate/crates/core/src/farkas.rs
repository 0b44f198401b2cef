//! Affine Farkas elimination: `Ax ≥ b ⇒ cᵀx ≥ β` holds for all `x` when
//! some `λ ≥ 0` has `c = Aᵀλ` and `λᵀb ≥ β`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::derivor::AffineImplication;
use crate::params::{ParamId, ParamKind, ParamTable, Poly};
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    Eq,
    Ge,
}

/// `lhs rel rhs` over parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyConstraint {
    pub lhs: Poly,
    pub rel: Rel,
    pub rhs: Poly,
    /// Tag of the implication (or other source) it came from.
    pub origin: String,
}

impl PolyConstraint {
    pub fn new(lhs: Poly, rel: Rel, rhs: Poly, origin: impl Into<String>) -> Self {
        PolyConstraint {
            lhs,
            rel,
            rhs,
            origin: origin.into(),
        }
    }

    /// `lhs - rhs`, compared against zero.
    pub fn diff(&self) -> Poly {
        &self.lhs - &self.rhs
    }

    pub fn holds_at(&self, value: impl Fn(ParamId) -> Option<Rat>) -> Result<bool, ParamId> {
        let d = self.diff().eval(value)?;
        Ok(match self.rel {
            Rel::Eq => d.is_zero(),
            Rel::Ge => !d.is_negative(),
        })
    }

    pub fn display<'a>(&'a self, table: &'a ParamTable) -> ConstraintDisplay<'a> {
        ConstraintDisplay { c: self, table }
    }
}

pub struct ConstraintDisplay<'a> {
    c: &'a PolyConstraint,
    table: &'a ParamTable,
}

impl fmt::Display for ConstraintDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.c.rel {
            Rel::Eq => "=",
            Rel::Ge => ">=",
        };
        write!(
            f,
            "{} {op} {}",
            self.c.lhs.display(self.table),
            self.c.rhs.display(self.table)
        )
    }
}

/// Multipliers introduced for one implication, one per premise row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub implication: usize,
    pub tag: String,
    pub lambdas: Vec<ParamId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FarkasError {
    #[error("implication `{0}` mentions variable `{1}` it does not quantify")]
    NotAffine(String, String),
}

/// Replaces the universally quantified variables of `imp` by fresh
/// multipliers `lambda.{index}.{i}`. Emits, in order: one equality per
/// variable (skipping columns that vanish on both sides), `λᵀb ≥ β`, and
/// `λ_i ≥ 0`.
pub fn eliminate(
    imp: &AffineImplication,
    index: usize,
    table: &mut ParamTable,
    lambda_domain: &[Rat],
) -> Result<(FarkasCertificate, Vec<PolyConstraint>), FarkasError> {
    for atom in imp.premises.iter().chain(std::iter::once(&imp.conclusion)) {
        if let Some(x) = atom.lhs.keys().find(|x| !imp.vars.contains(x)) {
            return Err(FarkasError::NotAffine(imp.tag.clone(), x.clone()));
        }
    }
    let lambdas: Vec<ParamId> = (1..=imp.premises.len())
        .map(|i| table.fresh(format!("lambda.{index}.{i}"), ParamKind::Farkas, lambda_domain.to_vec()))
        .collect();
    let origin = &imp.tag;
    let mut out = Vec::new();
    for x in &imp.vars {
        let c = imp.conclusion.coeff(x);
        let mut sum = Poly::zero();
        for (p, &l) in imp.premises.iter().zip(&lambdas) {
            sum = &sum + &(&p.coeff(x) * &Poly::param(l));
        }
        if c.is_zero() && sum.is_zero() {
            continue;
        }
        out.push(PolyConstraint::new(c, Rel::Eq, sum, origin));
    }
    let mut lb = Poly::zero();
    for (p, &l) in imp.premises.iter().zip(&lambdas) {
        lb = &lb + &(&Poly::param(l) * &p.rhs);
    }
    out.push(PolyConstraint::new(lb, Rel::Ge, imp.conclusion.rhs.clone(), origin));
    for &l in &lambdas {
        out.push(PolyConstraint::new(Poly::param(l), Rel::Ge, Poly::zero(), origin));
    }
    Ok((
        FarkasCertificate {
            implication: index,
            tag: imp.tag.clone(),
            lambdas,
        },
        out,
    ))
}

/// An implication with all parameters replaced by numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericImplication {
    /// `k × n`
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
    pub beta: Rat,
}

impl NumericImplication {
    pub fn instantiate(
        imp: &AffineImplication,
        value: &dyn Fn(ParamId) -> Option<Rat>,
    ) -> Result<NumericImplication, ParamId> {
        let ev = |p: &Poly| p.eval(value);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for p in &imp.premises {
            a.push(
                imp.vars
                    .iter()
                    .map(|x| ev(&p.coeff(x)))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            b.push(ev(&p.rhs)?);
        }
        Ok(NumericImplication {
            a,
            b,
            c: imp
                .vars
                .iter()
                .map(|x| ev(&imp.conclusion.coeff(x)))
                .collect::<Result<Vec<_>, _>>()?,
            beta: ev(&imp.conclusion.rhs)?,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.c.len()
    }

    pub fn premise_holds(&self, i: usize, x: &[Rat]) -> bool {
        dot(&self.a[i], x) >= self.b[i]
    }

    pub fn premises_hold(&self, x: &[Rat]) -> bool {
        (0..self.a.len()).all(|i| self.premise_holds(i, x))
    }

    pub fn conclusion_holds(&self, x: &[Rat]) -> bool {
        dot(&self.c, x) >= self.beta
    }
}

fn dot(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Direct check of `λ ≥ 0`, `c = Aᵀλ`, `λᵀb ≥ β`.
pub fn certify_numeric(n: &NumericImplication, lambdas: &[Rat]) -> bool {
    if lambdas.len() != n.a.len() || lambdas.iter().any(Signed::is_negative) {
        return false;
    }
    let cols_ok = (0..n.n_vars()).all(|j| {
        let s: Rat = n.a.iter().zip(lambdas).map(|(row, l)| row[j] * l).sum();
        s == n.c[j]
    });
    cols_ok && dot(lambdas, &n.b) >= n.beta
}

/// Numeric certificate check for a parametric implication under a full
/// parameter valuation; independent of the polynomial constraints.
pub fn certify(imp: &AffineImplication, lambdas: &[Rat], value: &dyn Fn(ParamId) -> Option<Rat>) -> bool {
    NumericImplication::instantiate(imp, value).is_ok_and(|n| certify_numeric(&n, lambdas))
}

/// Smallest-first depth-first search for a certificate with multipliers
/// drawn from `grid` (which must be non-negative).
pub fn search_certificate(n: &NumericImplication, grid: &[Rat]) -> Option<Vec<Rat>> {
    let k = n.a.len();
    let mut grid: Vec<Rat> = grid.iter().copied().filter(|g| !g.is_negative()).collect();
    grid.sort();
    grid.dedup();
    let (lo, hi) = match (grid.first(), grid.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ if k == 0 => (Rat::zero(), Rat::zero()),
        _ => return None,
    };
    // range of Σ_{r ≥ from} coef(r)·λ_r with every λ_r in [lo, hi]
    let bounds = |coef: &dyn Fn(usize) -> Rat, from: usize| -> (Rat, Rat) {
        let mut mn = Rat::zero();
        let mut mx = Rat::zero();
        for i in from..k {
            let c = coef(i);
            let (p, q) = (c * lo, c * hi);
            mn += p.min(q);
            mx += p.max(q);
        }
        (mn, mx)
    };
    fn go(
        n: &NumericImplication,
        grid: &[Rat],
        lam: &mut Vec<Rat>,
        bounds: &dyn Fn(&dyn Fn(usize) -> Rat, usize) -> (Rat, Rat),
    ) -> bool {
        let i = lam.len();
        for j in 0..n.n_vars() {
            let partial: Rat = lam.iter().enumerate().map(|(r, l)| n.a[r][j] * l).sum();
            let (mn, mx) = bounds(&|r| n.a[r][j], i);
            if n.c[j] < partial + mn || n.c[j] > partial + mx {
                return false;
            }
        }
        let partial_b: Rat = lam.iter().enumerate().map(|(r, l)| n.b[r] * l).sum();
        if partial_b + bounds(&|r| n.b[r], i).1 < n.beta {
            return false;
        }
        if i == n.a.len() {
            return true;
        }
        for &g in grid {
            lam.push(g);
            if go(n, grid, lam, bounds) {
                return true;
            }
            lam.pop();
        }
        false
    }
    let mut lam = Vec::with_capacity(k);
    go(n, &grid, &mut lam, &bounds).then_some(lam)
}
