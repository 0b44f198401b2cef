//! Parameters (existentially quantified unknowns) and polynomials over them.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParamId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    /// `C^s_i`
    DomainRow,
    /// `b^s_i`
    DomainBound,
    /// `F_i`, i ≥ 1
    Coeff,
    /// `F_0`
    Const,
    /// non-emptiness witness `k`
    Dummy,
    /// `α` in bounded-from-below constraints
    LowerBound,
    Delta,
    /// Farkas multiplier `λ`
    Farkas,
}

impl ParamKind {
    /// Coarse search order: domain shape, interpretation, auxiliaries, multipliers.
    pub fn search_rank(self) -> u8 {
        match self {
            ParamKind::DomainRow | ParamKind::DomainBound => 0,
            ParamKind::Coeff | ParamKind::Const => 1,
            ParamKind::LowerBound | ParamKind::Dummy | ParamKind::Delta => 2,
            ParamKind::Farkas => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    /// Finite search domain, ascending.
    #[serde(with = "crate::rational::serde_vec_rat")]
    pub domain: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parameter name `{0}` already in use")]
pub struct DuplicateParam(pub String);

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTable {
    params: Vec<Param>,
    #[serde(skip)]
    by_name: HashMap<String, ParamId>,
}

impl ParamTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a fresh parameter. Names are globally unique.
    pub fn fresh(&mut self, name: impl Into<String>, kind: ParamKind, domain: Vec<Rat>) -> ParamId {
        self.try_fresh(name, kind, domain).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_fresh(
        &mut self,
        name: impl Into<String>,
        kind: ParamKind,
        mut domain: Vec<Rat>,
    ) -> Result<ParamId, DuplicateParam> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(DuplicateParam(name));
        }
        domain.sort();
        domain.dedup();
        let id = ParamId(self.params.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.params.push(Param { name, kind, domain });
        Ok(id)
    }

    pub fn get(&self, id: ParamId) -> &Param {
        &self.params[id.0 as usize]
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.params[id.0 as usize].name
    }

    pub fn kind(&self, id: ParamId) -> ParamKind {
        self.params[id.0 as usize].kind
    }

    pub fn set_domain(&mut self, id: ParamId, mut domain: Vec<Rat>) {
        domain.sort();
        domain.dedup();
        self.params[id.0 as usize].domain = domain;
    }

    pub fn lookup(&self, name: &str) -> Option<ParamId> {
        self.by_name.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len() as u32).map(ParamId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParamId, &Param)> {
        self.params.iter().enumerate().map(|(i, p)| (ParamId(i as u32), p))
    }

    pub fn count_kind(&self, kind: ParamKind) -> usize {
        self.params.iter().filter(|p| p.kind == kind).count()
    }

    /// Rebuilds the name index after deserialization.
    pub fn reindex(&mut self) {
        self.by_name = self
            .params
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), ParamId(i as u32)))
            .collect();
    }
}

/// Product of parameters, sorted, with repetition for powers.
pub type Monomial = Vec<ParamId>;

/// Polynomial over parameters with exact rational coefficients, kept in
/// canonical form (sorted monomials, no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Rat::from_integer(n as i128))
    }

    pub fn param(id: ParamId) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![id], Rat::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero();
        for (mut m, c) in terms {
            m.sort();
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial has no parameters.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Vec::new()).copied().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn params(&self) -> BTreeSet<ParamId> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn scale(&self, c: Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), *v * c)).collect(),
        }
    }

    /// Evaluates with every parameter bound; `Err(id)` names the first unbound one.
    pub fn eval(&self, value: impl Fn(ParamId) -> Option<Rat>) -> Result<Rat, ParamId> {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut prod = *c;
            for &p in m {
                prod *= value(p).ok_or(p)?;
            }
            total += prod;
        }
        Ok(total)
    }

    /// Substitutes the bound parameters, leaving the rest symbolic.
    pub fn partial_eval(&self, value: impl Fn(ParamId) -> Option<Rat>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = *c;
            let mut rest = Vec::new();
            for &p in m {
                match value(p) {
                    Some(v) => coeff *= v,
                    None => rest.push(p),
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    pub fn display<'a>(&'a self, table: &'a ParamTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, table }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -*c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m: Monomial = m1.iter().chain(m2).copied().collect();
                m.sort();
                out.add_term(m, *c1 * *c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-Rat::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    table: &'a ParamTable,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        // parameter terms first, constant last
        let mut terms: Vec<(&Monomial, &Rat)> = self.poly.terms().collect();
        terms.sort_by_key(|(m, _)| (m.is_empty(), (*m).clone()));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = **c < Rat::zero();
            let mag = if neg { -**c } else { **c };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let names: Vec<&str> = m.iter().map(|&p| self.table.name(p)).collect();
            if m.is_empty() {
                f.write_str(&fmt_rat(&mag))?;
            } else if mag.is_one() {
                f.write_str(&names.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&mag), names.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn table3() -> (ParamTable, [ParamId; 3]) {
        let mut t = ParamTable::new();
        let a = t.fresh("a", ParamKind::Coeff, vec![int(0), int(1)]);
        let b = t.fresh("b", ParamKind::Coeff, vec![int(0), int(1)]);
        let c = t.fresh("c", ParamKind::Coeff, vec![int(0), int(1)]);
        (t, [a, b, c])
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let (_, [a, b, _]) = table3();
        let p = &Poly::param(a) + &Poly::param(b);
        let q = &p - &Poly::param(a);
        assert_eq!(q, Poly::param(b));
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn display_uses_names() {
        let (t, [a, b, _]) = table3();
        let p = &(&Poly::param(a) * &Poly::param(b)) - &Poly::int(1);
        assert_eq!(p.display(&t).to_string(), "a*b - 1");
        assert_eq!(Poly::zero().display(&t).to_string(), "0");
    }

    #[test]
    fn duplicate_names_rejected() {
        let (mut t, _) = table3();
        assert!(t.try_fresh("a", ParamKind::Const, vec![]).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..3, 0..3), -3i64..=3), 0..5).prop_map(|terms| {
            Poly::from_terms(
                terms
                    .into_iter()
                    .map(|(m, c)| (m.into_iter().map(ParamId).collect(), int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_ops_agree_with_evaluation(p in arb_poly(), q in arb_poly(),
                                          vals in prop::collection::vec(-3i64..=3, 3)) {
            let v = |id: ParamId| Some(int(vals[id.0 as usize]));
            let (pv, qv) = (p.eval(v).unwrap(), q.eval(v).unwrap());
            prop_assert_eq!((&p + &q).eval(v).unwrap(), pv + qv);
            prop_assert_eq!((&p - &q).eval(v).unwrap(), pv - qv);
            prop_assert_eq!((&p * &q).eval(v).unwrap(), pv * qv);
            prop_assert!((&p * &q).terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
