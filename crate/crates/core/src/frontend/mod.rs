//! Front end: reading rewrite modules and turning them into the
//! implicational theory of their rewriting logic.

mod parser;
mod theory;

pub use parser::parse_module;
pub use theory::{generate_theory, Origin, Theory, TheorySentence};

use crate::signature::SortedSignature;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown sort `{name}`")]
    UnknownSort { name: String, line: usize, col: usize },
    #[error("{line}:{col}: undeclared variable `{name}`")]
    UndeclaredVariable { name: String, line: usize, col: usize },
    #[error("line {line}: ill-typed rule: {message}")]
    IllTypedRule { line: usize, message: String },
    #[error("signature check failed: {}", .0.join("; "))]
    SignatureCheckFailure(Vec<String>),
    #[error("signature is not coherent: {}", .0.join("; "))]
    IncoherentSignature(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    /// Variables of the left- then right-hand side, first occurrence order.
    pub fn vars(&self) -> Vec<(String, crate::sorts::SortId)> {
        let mut out = Vec::new();
        self.lhs.vars_into(&mut out);
        self.rhs.vars_into(&mut out);
        out
    }
}

/// An order-sorted rewrite system.
#[derive(Debug, Clone)]
pub struct Ostrs {
    pub name: String,
    pub sig: SortedSignature,
    pub rules: Vec<Rule>,
}
