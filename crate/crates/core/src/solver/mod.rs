//! Finite-domain search for parameter values satisfying polynomial
//! constraints in which every monomial carries at most one multiplier.
//!
//! Constraints are grouped into blocks that share multipliers. A block is
//! a constraint on its remaining ("outer") parameters: it is satisfied by
//! an outer valuation when some multiplier values on the grid complete it,
//! which is decided by a small linear search and memoized. The outer
//! parameters are enumerated depth-first in a fixed order, with
//! generalized arc consistency on the blocks after every choice.

pub mod smtlib;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::farkas::{PolyConstraint, Rel};
use crate::params::{ParamId, ParamKind, ParamTable};
use crate::rational::Rat;

/// Parameter values keyed by parameter name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(#[serde(with = "rat_map")] pub BTreeMap<String, Rat>);

mod rat_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{fmt_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rat>, s: S) -> Result<S::Ok, S::Error> {
        let strings: BTreeMap<&String, String> = m.iter().map(|(k, v)| (k, fmt_rat(v))).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Rat>, D::Error> {
        let strings = BTreeMap::<String, String>::deserialize(d)?;
        strings
            .into_iter()
            .map(|(k, v)| Ok((k, parse_rat(&v).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, v: Rat) {
        self.0.insert(name.into(), v);
    }

    pub fn get(&self, name: &str) -> Option<Rat> {
        self.0.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value lookup by id through the table's names.
    pub fn lookup<'a>(&'a self, table: &'a ParamTable) -> impl Fn(ParamId) -> Option<Rat> + 'a {
        move |id| self.get(table.name(id))
    }

    /// Names of table parameters without a value.
    pub fn missing(&self, table: &ParamTable) -> Vec<String> {
        table
            .iter()
            .filter(|(_, p)| !self.0.contains_key(&p.name))
            .map(|(_, p)| p.name.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueOrder {
    /// Least value first.
    Ascending,
    /// `0, 1, -1, 2, -2, …`; ties between `v` and `-v` go to the positive one.
    #[default]
    SmallestMagnitude,
}

impl ValueOrder {
    pub fn sort(self, values: &mut [Rat]) {
        match self {
            ValueOrder::Ascending => values.sort(),
            ValueOrder::SmallestMagnitude => values.sort_by(|a, b| {
                a.abs()
                    .cmp(&b.abs())
                    .then_with(|| b.is_positive().cmp(&a.is_positive()))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveConfig {
    pub timeout: Option<Duration>,
    pub value_order: ValueOrder,
    /// Largest number of outer valuations enumerated when checking
    /// supports for one block.
    pub support_limit: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            timeout: Some(Duration::from_secs(600)),
            value_order: ValueOrder::default(),
            support_limit: 20_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub block_checks: u64,
    pub blocks: usize,
    pub outer_params: usize,
    pub inner_params: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Assignment, SolveStats),
    NoSolution(SolveStats),
    Timeout(SolveStats),
}

impl SolveOutcome {
    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            SolveOutcome::Solved(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            SolveOutcome::Solved(_, s) | SolveOutcome::NoSolution(s) | SolveOutcome::Timeout(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("parameter `{0}` has no value")]
    UnboundParam(String),
}

/// Exact evaluation of every constraint.
pub fn check_assignment(
    constraints: &[PolyConstraint],
    table: &ParamTable,
    a: &Assignment,
) -> Result<bool, SolveError> {
    Ok(first_violation(constraints, table, a)?.is_none())
}

/// Index of the first constraint that fails under `a`.
pub fn first_violation(
    constraints: &[PolyConstraint],
    table: &ParamTable,
    a: &Assignment,
) -> Result<Option<usize>, SolveError> {
    let value = a.lookup(table);
    for (i, c) in constraints.iter().enumerate() {
        let ok = c
            .holds_at(&value)
            .map_err(|p| SolveError::UnboundParam(table.name(p).to_string()))?;
        if !ok {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------

/// A constraint with monomials split into outer factors and at most one
/// inner factor.
struct Compiled {
    terms: Vec<(Rat, Vec<usize>, Option<usize>)>,
    rel: Rel,
}

struct Block {
    constraints: Vec<usize>,
    /// Global parameter indices, ascending in search order.
    outer: Vec<usize>,
    inner: Vec<usize>,
}

/// `Σ coeffs·λ + constant (rel) 0`
struct LinCon {
    coeffs: Vec<(usize, Rat)>,
    constant: Rat,
    rel: Rel,
}

struct Search<'a> {
    cfg: &'a SolveConfig,
    compiled: Vec<Compiled>,
    blocks: Vec<Block>,
    blocks_of: Vec<Vec<usize>>,
    /// Search domain of each inner parameter.
    inner_domain: Vec<Vec<Rat>>,
    memo: HashMap<(usize, Vec<Rat>), Option<Vec<Rat>>>,
    stats: SolveStats,
    deadline: Option<Instant>,
    timed_out: bool,
}

type Doms = Vec<Vec<Rat>>;

impl Search<'_> {
    /// Feasibility of block `b` when its outer parameters take `key`.
    fn block_feasible(&mut self, b: usize, key: Vec<Rat>) -> bool {
        if let Some(r) = self.memo.get(&(b, key.clone())) {
            return r.is_some();
        }
        self.stats.block_checks += 1;
        let block = &self.blocks[b];
        let pos_of = |p: usize| block.outer.binary_search_by(|&q| self.order_cmp(q, p)).ok();
        let local_of = |p: usize| block.inner.iter().position(|&q| q == p);
        let mut lin = Vec::new();
        for &ci in &block.constraints {
            let c = &self.compiled[ci];
            let mut coeffs: Vec<(usize, Rat)> = Vec::new();
            let mut constant = Rat::zero();
            for (coef, outs, inner) in &c.terms {
                let mut v = *coef;
                for &p in outs {
                    v *= key[pos_of(p).expect("outer parameter of block")];
                }
                if v.is_zero() {
                    continue;
                }
                match inner {
                    None => constant += v,
                    Some(p) => {
                        let l = local_of(*p).expect("inner parameter of block");
                        match coeffs.iter_mut().find(|(q, _)| *q == l) {
                            Some((_, acc)) => *acc += v,
                            None => coeffs.push((l, v)),
                        }
                    }
                }
            }
            coeffs.retain(|(_, v)| !v.is_zero());
            lin.push(LinCon {
                coeffs,
                constant,
                rel: c.rel,
            });
        }
        let doms: Vec<&[Rat]> = block.inner.iter().map(|&p| self.inner_domain[p].as_slice()).collect();
        let witness = solve_linear(&lin, &doms);
        let ok = witness.is_some();
        self.memo.insert((b, key), witness);
        ok
    }

    fn order_cmp(&self, a: usize, b: usize) -> std::cmp::Ordering {
        a.cmp(&b)
    }

    /// Arc consistency on every block, starting from the blocks touching
    /// `changed` (all blocks when `None`). Returns false on a wipe-out.
    fn propagate(&mut self, doms: &mut Doms, changed: Option<usize>) -> bool {
        let mut queue: VecDeque<usize> = match changed {
            None => (0..self.blocks.len()).collect(),
            Some(p) => self.blocks_of[p].iter().copied().collect(),
        };
        let mut queued = vec![false; self.blocks.len()];
        for &b in &queue {
            queued[b] = true;
        }
        while let Some(b) = queue.pop_front() {
            queued[b] = false;
            if self.out_of_time() {
                return true;
            }
            let unbound: Vec<usize> = self.blocks[b]
                .outer
                .iter()
                .copied()
                .filter(|&p| doms[p].len() > 1)
                .collect();
            let mut product: usize = 1;
            for &p in &unbound {
                product = product.saturating_mul(doms[p].len());
            }
            if product > self.cfg.support_limit {
                continue;
            }
            // blocks whose open parameters all lie inside this one's
            let cluster: Vec<usize> = if unbound.is_empty() {
                vec![b]
            } else {
                let mut cl = vec![b];
                for &q in &self.blocks_of[unbound[0]] {
                    if q != b
                        && self.blocks[q]
                            .outer
                            .iter()
                            .all(|p| doms[*p].len() == 1 || unbound.contains(p))
                    {
                        cl.push(q);
                    }
                }
                cl
            };
            let mut supported: Vec<Vec<bool>> = unbound.iter().map(|&p| vec![false; doms[p].len()]).collect();
            let mut idx = vec![0usize; unbound.len()];
            let mut any = false;
            'combos: loop {
                let value = |p: usize, doms: &Doms| -> Rat {
                    match unbound.iter().position(|&q| q == p) {
                        Some(i) => doms[p][idx[i]],
                        None => doms[p][0],
                    }
                };
                let fresh = unbound.is_empty() || supported.iter().zip(&idx).any(|(s, &i)| !s[i]);
                if fresh {
                    let mut ok = true;
                    for &q in &cluster {
                        let key: Vec<Rat> = self.blocks[q].outer.iter().map(|&p| value(p, doms)).collect();
                        if !self.block_feasible(q, key) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        any = true;
                        for (s, &i) in supported.iter_mut().zip(&idx) {
                            s[i] = true;
                        }
                    }
                }
                // next combination
                let mut d = unbound.len();
                loop {
                    if d == 0 {
                        break 'combos;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < doms[unbound[d]].len() {
                        break;
                    }
                    idx[d] = 0;
                }
            }
            if !any {
                return false;
            }
            for (i, &p) in unbound.iter().enumerate() {
                if supported[i].iter().all(|&s| s) {
                    continue;
                }
                let kept: Vec<Rat> = doms[p]
                    .iter()
                    .zip(&supported[i])
                    .filter(|(_, &s)| s)
                    .map(|(v, _)| *v)
                    .collect();
                doms[p] = kept;
                for &q in &self.blocks_of[p] {
                    if !queued[q] {
                        queued[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        true
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if let Some(d) = self.deadline {
            if self.stats.block_checks.is_multiple_of(64) && Instant::now() > d {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn dfs(&mut self, doms: Doms, changed: Option<usize>, order: &[usize]) -> Option<Doms> {
        self.stats.nodes += 1;
        let mut doms = doms;
        if !self.propagate(&mut doms, changed) || self.timed_out {
            return None;
        }
        let Some(&p) = order.iter().find(|&&p| doms[p].len() > 1) else {
            return Some(doms);
        };
        let mut values = doms[p].clone();
        self.cfg.value_order.sort(&mut values);
        for v in values {
            let mut next = doms.clone();
            next[p] = vec![v];
            if let Some(sol) = self.dfs(next, Some(p), order) {
                return Some(sol);
            }
            if self.out_of_time() {
                return None;
            }
        }
        None
    }
}

/// Depth-first search over the bounds of `Σ a·λ + c (rel) 0`.
fn solve_linear(cons: &[LinCon], doms: &[&[Rat]]) -> Option<Vec<Rat>> {
    let n = doms.len();
    if doms.iter().any(|d| d.is_empty()) {
        return None;
    }
    let lo: Vec<Rat> = doms.iter().map(|d| *d.iter().min().unwrap()).collect();
    let hi: Vec<Rat> = doms.iter().map(|d| *d.iter().max().unwrap()).collect();
    // order variables by first appearance in an equality
    let mut order: Vec<usize> = Vec::new();
    for c in cons.iter().filter(|c| c.rel == Rel::Eq).chain(cons.iter()) {
        for &(v, _) in &c.coeffs {
            if !order.contains(&v) {
                order.push(v);
            }
        }
    }
    for v in 0..n {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    let mut value: Vec<Option<Rat>> = vec![None; n];

    fn feasible(cons: &[LinCon], value: &[Option<Rat>], lo: &[Rat], hi: &[Rat]) -> bool {
        cons.iter().all(|c| {
            let mut mn = c.constant;
            let mut mx = c.constant;
            for &(v, a) in &c.coeffs {
                match value[v] {
                    Some(x) => {
                        mn += a * x;
                        mx += a * x;
                    }
                    None => {
                        let (p, q) = (a * lo[v], a * hi[v]);
                        mn += p.min(q);
                        mx += p.max(q);
                    }
                }
            }
            match c.rel {
                Rel::Eq => !mn.is_positive() && !mx.is_negative(),
                Rel::Ge => !mx.is_negative(),
            }
        })
    }

    fn go(
        depth: usize,
        order: &[usize],
        cons: &[LinCon],
        doms: &[&[Rat]],
        value: &mut Vec<Option<Rat>>,
        lo: &[Rat],
        hi: &[Rat],
    ) -> bool {
        if !feasible(cons, value, lo, hi) {
            return false;
        }
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for &x in doms[v] {
            value[v] = Some(x);
            if go(depth + 1, order, cons, doms, value, lo, hi) {
                return true;
            }
        }
        value[v] = None;
        false
    }

    let mut sorted: Vec<Vec<Rat>> = doms.iter().map(|d| d.to_vec()).collect();
    for d in &mut sorted {
        ValueOrder::SmallestMagnitude.sort(d);
    }
    let sorted_refs: Vec<&[Rat]> = sorted.iter().map(Vec::as_slice).collect();
    go(0, &order, cons, &sorted_refs, &mut value, &lo, &hi).then(|| value.into_iter().map(|v| v.unwrap()).collect())
}

/// Searches the parameter domains of `table` for values satisfying every
/// constraint. Deterministic for fixed inputs.
pub fn solve(constraints: &[PolyConstraint], table: &ParamTable, cfg: &SolveConfig) -> SolveOutcome {
    let n = table.len();
    let start = Instant::now();
    let mut stats = SolveStats::default();
    if table.iter().any(|(_, p)| p.domain.is_empty()) {
        return SolveOutcome::NoSolution(stats);
    }

    // inner parameters: multipliers never multiplied with one another
    let mut inner = vec![false; n];
    for (id, p) in table.iter() {
        inner[id.0 as usize] = p.kind == ParamKind::Farkas;
    }
    let diffs: Vec<_> = constraints.iter().map(PolyConstraint::diff).collect();
    for d in &diffs {
        for (m, _) in d.terms() {
            let k = m.iter().filter(|p| inner[p.0 as usize]).count();
            if k > 1 {
                for p in m {
                    inner[p.0 as usize] = false;
                }
            }
        }
    }

    // blocks: union-find over shared inner parameters
    let mut parent: Vec<usize> = (0..constraints.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (ci, d) in diffs.iter().enumerate() {
        for p in d.params() {
            let p = p.0 as usize;
            if !inner[p] {
                continue;
            }
            match owner[p] {
                None => owner[p] = Some(ci),
                Some(o) => {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, ci));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }

    // search order: kind rank, then creation order
    let mut order: Vec<usize> = (0..n).filter(|&p| !inner[p]).collect();
    order.sort_by_key(|&p| (table.kind(ParamId(p as u32)).search_rank(), p));
    let mut rank_of = vec![usize::MAX; n];
    for (i, &p) in order.iter().enumerate() {
        rank_of[p] = i;
    }

    let mut compiled = Vec::new();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, (c, d)) in constraints.iter().zip(&diffs).enumerate() {
        if d.is_zero() {
            // 0 = 0 or 0 ≥ 0
            compiled.push(Compiled {
                terms: vec![],
                rel: c.rel,
            });
            continue;
        }
        if let Some(k) = d.as_constant() {
            let ok = match c.rel {
                Rel::Eq => k.is_zero(),
                Rel::Ge => !k.is_negative(),
            };
            if !ok {
                return SolveOutcome::NoSolution(stats);
            }
            compiled.push(Compiled {
                terms: vec![],
                rel: c.rel,
            });
            continue;
        }
        let terms = d
            .terms()
            .map(|(m, coef)| {
                let mut outs: Vec<usize> = Vec::new();
                let mut inn = None;
                for p in m {
                    let p = p.0 as usize;
                    if inner[p] {
                        inn = Some(p);
                    } else {
                        outs.push(rank_of[p]);
                    }
                }
                (*coef, outs, inn)
            })
            .collect();
        compiled.push(Compiled { terms, rel: c.rel });
        groups.entry(find(&mut parent, ci)).or_default().push(ci);
    }

    // everything below works on search positions instead of parameter ids
    let mut blocks = Vec::new();
    for (_, cs) in groups {
        let mut outer: Vec<usize> = Vec::new();
        let mut inn: Vec<usize> = Vec::new();
        for &ci in &cs {
            for (_, outs, i) in &compiled[ci].terms {
                for &p in outs {
                    if !outer.contains(&p) {
                        outer.push(p);
                    }
                }
                if let Some(p) = i {
                    if !inn.contains(p) {
                        inn.push(*p);
                    }
                }
            }
        }
        outer.sort();
        inn.sort();
        blocks.push(Block {
            constraints: cs,
            outer,
            inner: inn,
        });
    }
    let mut blocks_of = vec![Vec::new(); order.len()];
    for (b, block) in blocks.iter().enumerate() {
        for &p in &block.outer {
            blocks_of[p].push(b);
        }
    }
    let inner_domain: Vec<Vec<Rat>> = (0..n).map(|p| table.get(ParamId(p as u32)).domain.clone()).collect();

    stats.blocks = blocks.len();
    stats.outer_params = order.len();
    stats.inner_params = inner.iter().filter(|&&b| b).count();

    let mut search = Search {
        cfg,
        compiled,
        blocks,
        blocks_of,
        inner_domain,
        memo: HashMap::new(),
        stats,
        deadline: cfg.timeout.map(|t| start + t),
        timed_out: false,
    };
    let doms: Doms = order
        .iter()
        .map(|&p| table.get(ParamId(p as u32)).domain.clone())
        .collect();
    let positions: Vec<usize> = (0..order.len()).collect();
    let found = search.dfs(doms, None, &positions);
    let timed_out = search.timed_out;
    let Some(doms) = found else {
        let stats = search.stats;
        return if timed_out {
            SolveOutcome::Timeout(stats)
        } else {
            SolveOutcome::NoSolution(stats)
        };
    };

    let mut a = Assignment::new();
    for (pos, &p) in order.iter().enumerate() {
        a.set(table.name(ParamId(p as u32)), doms[pos][0]);
    }
    for b in 0..search.blocks.len() {
        let key: Vec<Rat> = search.blocks[b].outer.iter().map(|&p| doms[p][0]).collect();
        let witness = search.memo.get(&(b, key)).cloned().flatten();
        let witness = match witness {
            Some(w) => w,
            None => {
                let key: Vec<Rat> = search.blocks[b].outer.iter().map(|&p| doms[p][0]).collect();
                assert!(search.block_feasible(b, key.clone()), "accepted block must be feasible");
                search.memo[&(b, key)].clone().expect("witness")
            }
        };
        for (&p, v) in search.blocks[b].inner.iter().zip(witness) {
            a.set(table.name(ParamId(p as u32)), v);
        }
    }
    // multipliers that occur in no constraint
    for (id, p) in table.iter() {
        if a.get(&p.name).is_none() {
            let mut values = p.domain.clone();
            cfg.value_order.sort(&mut values);
            a.set(table.name(id), values[0]);
        }
    }
    debug_assert_eq!(check_assignment(constraints, table, &a), Ok(true));
    SolveOutcome::Solved(a, search.stats)
}
