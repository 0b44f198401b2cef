//! Sort posets: reflexive-transitive closure of declared subsorts, connected
//! components and their top sorts.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SortId(pub usize);

impl fmt::Display for SortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("subsort declarations form a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("sort strings of different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsortPoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    component_of: Vec<usize>,
    components: Vec<Vec<SortId>>,
    tops: Vec<Option<SortId>>,
}

impl SubsortPoset {
    /// Builds the poset from sort names and `(sub, super)` declarations.
    pub fn build<S: AsRef<str>>(sorts: &[S], subsort_decls: &[(S, S)]) -> Result<Self, SortError> {
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(sorts.len());
        for s in sorts {
            let s = s.as_ref();
            if index.insert(s.to_string(), names.len()).is_some() {
                return Err(SortError::DuplicateSort(s.to_string()));
            }
            names.push(s.to_string());
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (sub, sup) in subsort_decls {
            let a = *index
                .get(sub.as_ref())
                .ok_or_else(|| SortError::UnknownSort(sub.as_ref().to_string()))?;
            let b = *index
                .get(sup.as_ref())
                .ok_or_else(|| SortError::UnknownSort(sup.as_ref().to_string()))?;
            leq[a][b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(SortError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }

        // components: union-find over the symmetric closure
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let nx = p[x];
                p[x] = r;
                x = nx;
            }
            r
        }
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut component_of = vec![usize::MAX; n];
        let mut components: Vec<Vec<SortId>> = Vec::new();
        let mut root_to_comp = HashMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            let c = *root_to_comp.entry(root).or_insert_with(|| {
                components.push(Vec::new());
                components.len() - 1
            });
            component_of[i] = c;
            components[c].push(SortId(i));
        }
        let tops = components
            .iter()
            .map(|members| {
                members
                    .iter()
                    .copied()
                    .find(|&t| members.iter().all(|&s| leq[s.0][t.0]))
            })
            .collect();
        Ok(SubsortPoset {
            names,
            leq,
            component_of,
            components,
            tops,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.names.len()).map(SortId)
    }

    pub fn name(&self, s: SortId) -> &str {
        &self.names[s.0]
    }

    pub fn lookup(&self, name: &str) -> Option<SortId> {
        self.names.iter().position(|n| n == name).map(SortId)
    }

    pub fn leq(&self, a: SortId, b: SortId) -> bool {
        self.leq[a.0][b.0]
    }

    pub fn lt(&self, a: SortId, b: SortId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Pointwise extension of `≤` to sort strings.
    pub fn leq_string(&self, w1: &[SortId], w2: &[SortId]) -> Result<bool, SortError> {
        if w1.len() != w2.len() {
            return Err(SortError::LengthMismatch(w1.len(), w2.len()));
        }
        Ok(w1.iter().zip(w2).all(|(&a, &b)| self.leq(a, b)))
    }

    pub fn component(&self, s: SortId) -> usize {
        self.component_of[s.0]
    }

    pub fn same_component(&self, a: SortId, b: SortId) -> bool {
        self.component(a) == self.component(b)
    }

    pub fn components(&self) -> &[Vec<SortId>] {
        &self.components
    }

    pub fn top_of_component(&self, c: usize) -> Option<SortId> {
        self.tops[c]
    }

    pub fn top(&self, s: SortId) -> Option<SortId> {
        self.tops[self.component(s)]
    }

    /// All pairs `(s, s')` with `s < s'`.
    pub fn strict_pairs(&self) -> Vec<(SortId, SortId)> {
        let mut out = Vec::new();
        for a in self.sorts() {
            for b in self.sorts() {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Transitive reduction: `s < s'` with nothing strictly in between.
    pub fn covering_pairs(&self) -> Vec<(SortId, SortId)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !self.sorts().any(|m| self.lt(a, m) && self.lt(m, b)))
            .collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

pub fn build_poset<S: AsRef<str>>(sorts: &[S], subsort_decls: &[(S, S)]) -> Result<SubsortPoset, SortError> {
    SubsortPoset::build(sorts, subsort_decls)
}
