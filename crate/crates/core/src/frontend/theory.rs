//! Specialization of the reflexivity, transitivity, congruence and
//! replacement rules of rewriting logic into explicit sentences.

use std::fmt;

use serde::Serialize;

use crate::signature::{SortedSignature, REWRITE, REWRITE_STAR};
use crate::sorts::SortId;
use crate::term::{least_sort, Atom, Sentence, Term};

use super::{FrontendError, Ostrs};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Origin {
    Rf {
        sort: SortId,
    },
    T {
        sort: SortId,
    },
    /// Congruence for rank `rank` (index into `funcs`) at 1-based `position`.
    C {
        symbol: String,
        rank: usize,
        position: usize,
    },
    Re {
        label: String,
    },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Rf { .. } => f.write_str("Rf"),
            Origin::T { .. } => f.write_str("T"),
            Origin::C { symbol, position, .. } => write!(f, "C({symbol},{position})"),
            Origin::Re { label } => write!(f, "Re({label})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySentence {
    pub tag: Origin,
    pub sentence: Sentence,
}

#[derive(Debug, Clone)]
pub struct Theory {
    pub sig: SortedSignature,
    pub sentences: Vec<TheorySentence>,
}

fn pred_atom(sig: &SortedSignature, pred: &str, top: SortId, lhs: Term, rhs: Term) -> Atom {
    let rank = sig
        .preds
        .iter()
        .position(|p| p.symbol == pred && p.args == [top, top])
        .expect("rewrite predicates installed at every top");
    Atom {
        pred: pred.to_string(),
        rank,
        args: vec![lhs, rhs],
    }
}

fn top_of(sig: &SortedSignature, s: SortId) -> Result<SortId, FrontendError> {
    sig.poset.top(s).ok_or_else(|| {
        FrontendError::IncoherentSignature(vec![format!("the component of {} has no top sort", sig.sort_name(s))])
    })
}

/// Builds the theory: reflexivity per component, then transitivity per
/// component, then congruence per rank and argument, then one sentence per
/// rule.
pub fn generate_theory(trs: &Ostrs) -> Result<Theory, FrontendError> {
    let sig = &trs.sig;
    let diagnostics = sig.check();
    if !diagnostics.coherent.ok {
        return Err(FrontendError::IncoherentSignature(
            diagnostics.coherent.problems.clone(),
        ));
    }
    let tops: Vec<SortId> = (0..sig.poset.components().len())
        .filter_map(|c| sig.poset.top_of_component(c))
        .filter(|&t| sig.preds.iter().any(|p| p.symbol == REWRITE_STAR && p.args == [t, t]))
        .collect();

    let closed =
        |vars, premises, conclusion| Sentence::new(vars, premises, conclusion).expect("generated sentences are closed");
    let mut out = Vec::new();
    for &top in &tops {
        let t = Term::var_of("t", top);
        out.push(TheorySentence {
            tag: Origin::Rf { sort: top },
            sentence: closed(
                vec![("t".into(), top)],
                vec![],
                pred_atom(sig, REWRITE_STAR, top, t.clone(), t),
            ),
        });
    }
    for &top in &tops {
        let [t, t1, u] = ["t", "t'", "u"].map(|n| Term::var_of(n, top));
        out.push(TheorySentence {
            tag: Origin::T { sort: top },
            sentence: closed(
                ["t", "t'", "u"].iter().map(|n| (n.to_string(), top)).collect(),
                vec![
                    pred_atom(sig, REWRITE, top, t.clone(), t1.clone()),
                    pred_atom(sig, REWRITE_STAR, top, t1, u.clone()),
                ],
                pred_atom(sig, REWRITE_STAR, top, t, u),
            ),
        });
    }
    for (rank, decl) in sig.funcs.iter().enumerate() {
        let result_top = top_of(sig, decl.result)?;
        for i in 0..decl.arity() {
            let mut vars = Vec::new();
            for (j, &s) in decl.args.iter().enumerate() {
                vars.push((format!("t{}", j + 1), s));
                if j == i {
                    vars.push((format!("t{}'", j + 1), s));
                }
            }
            let args: Vec<Term> = decl
                .args
                .iter()
                .enumerate()
                .map(|(j, &s)| Term::var_of(&format!("t{}", j + 1), s))
                .collect();
            let mut args2 = args.clone();
            args2[i] = Term::var_of(&format!("t{}'", i + 1), decl.args[i]);
            let premise = pred_atom(
                sig,
                REWRITE,
                top_of(sig, decl.args[i])?,
                args[i].clone(),
                args2[i].clone(),
            );
            let app = |args| Term::App {
                symbol: decl.symbol.clone(),
                rank,
                args,
            };
            out.push(TheorySentence {
                tag: Origin::C {
                    symbol: decl.symbol.clone(),
                    rank,
                    position: i + 1,
                },
                sentence: closed(
                    vars,
                    vec![premise],
                    pred_atom(sig, REWRITE, result_top, app(args), app(args2)),
                ),
            });
        }
    }
    for rule in &trs.rules {
        let ls = least_sort(&rule.lhs, sig).map_err(|e| FrontendError::IllTypedRule {
            line: 0,
            message: e.to_string(),
        })?;
        let top = top_of(sig, ls)?;
        out.push(TheorySentence {
            tag: Origin::Re {
                label: rule.label.clone(),
            },
            sentence: closed(
                rule.vars(),
                vec![],
                pred_atom(sig, REWRITE, top, rule.lhs.clone(), rule.rhs.clone()),
            ),
        });
    }
    Ok(Theory {
        sig: sig.clone(),
        sentences: out,
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum TermJson {
    App { sym: String, args: Vec<TermJson> },
    Var { var: String },
}

#[derive(Serialize)]
struct VarJson {
    name: String,
    sort: String,
}

#[derive(Serialize)]
struct AtomJson {
    pred: String,
    sort: String,
    lhs: TermJson,
    rhs: TermJson,
}

#[derive(Serialize)]
struct SentenceJson {
    tag: String,
    vars: Vec<VarJson>,
    premises: Vec<AtomJson>,
    conclusion: AtomJson,
}

#[derive(Serialize)]
struct TheoryJson {
    sentences: Vec<SentenceJson>,
}

fn term_json(t: &Term) -> TermJson {
    match t {
        Term::Var { name, .. } => TermJson::Var { var: name.clone() },
        Term::App { symbol, args, .. } => TermJson::App {
            sym: symbol.clone(),
            args: args.iter().map(term_json).collect(),
        },
    }
}

fn atom_json(sig: &SortedSignature, a: &Atom) -> AtomJson {
    AtomJson {
        pred: a.pred.clone(),
        sort: sig.sort_name(sig.preds[a.rank].args[0]).to_string(),
        lhs: term_json(&a.args[0]),
        rhs: term_json(&a.args[1]),
    }
}

impl Theory {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = TheoryJson {
            sentences: self
                .sentences
                .iter()
                .map(|ts| SentenceJson {
                    tag: ts.tag.to_string(),
                    vars: ts
                        .sentence
                        .quantified_vars
                        .iter()
                        .map(|(n, s)| VarJson {
                            name: n.clone(),
                            sort: self.sig.sort_name(*s).to_string(),
                        })
                        .collect(),
                    premises: ts.sentence.premises.iter().map(|a| atom_json(&self.sig, a)).collect(),
                    conclusion: atom_json(&self.sig, &ts.sentence.conclusion),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("theory serializes")
    }

    /// One sentence per line, numbered from 1.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, ts) in self.sentences.iter().enumerate() {
            out.push_str(&format!(
                "({}) [{}] {}\n",
                i + 1,
                ts.tag,
                ts.sentence.display(&self.sig)
            ));
        }
        out
    }
}
