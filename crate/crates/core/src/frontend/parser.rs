//! Reader for the Maude subset used to write order-sorted rewrite modules:
//!
//! ```text
//! mod NAME is
//!   sorts S S1 S2 .          --- also `sort`
//!   subsort S2 < S1 .        --- also `subsorts A B < C < D .`
//!   op f : S1 S1 S1 -> S .   --- also `ops a b : -> S .`
//!   var x : S2 .             --- also `vars y z : S1 .`
//!   rl f(0,1,x) => f(x,x,x) .
//!   rl [label] : g(y,z) => y .
//! endm
//! ```

use crate::signature::SortedSignature;
use crate::sorts::{build_poset, SortError};
use crate::term::{least_sort, Term, TermError};

use super::{FrontendError, Ostrs, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

fn is_separator(c: char) -> bool {
    matches!(c, '(' | ')' | ',' | '[' | ']')
}

pub(crate) fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().take(3).map(|&(_, c)| c).collect();
            if rest == "---" || rest == "***" {
                break;
            }
            let col = i + 1;
            if is_separator(c) {
                out.push(Token {
                    text: c.to_string(),
                    line: lineno + 1,
                    col,
                });
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() && !chars[i].1.is_whitespace() && !is_separator(chars[i].1) {
                i += 1;
            }
            out.push(Token {
                text: chars[start..i].iter().map(|&(_, c)| c).collect(),
                line: lineno + 1,
                col,
            });
        }
    }
    out
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    eof_line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, FrontendError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(FrontendError::Syntax {
            line: self.eof_line,
            col: 1,
            message: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, what: &str) -> Result<Token, FrontendError> {
        let t = self.next()?;
        if t.text != what {
            return Err(syntax(&t, format!("expected `{what}`, found `{}`", t.text)));
        }
        Ok(t)
    }

    /// Tokens up to (not including) the statement terminator `.`.
    fn statement(&mut self) -> Result<Vec<Token>, FrontendError> {
        let mut out = Vec::new();
        loop {
            let t = self.next()?;
            if t.text == "." {
                return Ok(out);
            }
            if t.text == "endm" {
                return Err(syntax(&t, "statement not terminated by `.`".into()));
            }
            out.push(t);
        }
    }
}

fn syntax(t: &Token, message: String) -> FrontendError {
    FrontendError::Syntax {
        line: t.line,
        col: t.col,
        message,
    }
}

enum Decl {
    Sorts(Vec<Token>),
    Subsorts(Vec<Vec<Token>>),
    Ops(Vec<Token>, Vec<Token>, Token),
    Vars(Vec<Token>, Token),
    Rule(Option<String>, Token, Vec<Token>, Vec<Token>),
}

fn split_on<'a>(tokens: &'a [Token], sep: &str) -> Vec<&'a [Token]> {
    tokens.split(|t| t.text == sep).collect()
}

fn parse_decl(kw: &Token, body: Vec<Token>) -> Result<Decl, FrontendError> {
    match kw.text.as_str() {
        "sort" | "sorts" => {
            if body.is_empty() {
                return Err(syntax(kw, "empty sort declaration".into()));
            }
            Ok(Decl::Sorts(body))
        }
        "subsort" | "subsorts" => {
            let groups: Vec<Vec<Token>> = split_on(&body, "<").into_iter().map(<[Token]>::to_vec).collect();
            if groups.len() < 2 || groups.iter().any(Vec::is_empty) {
                return Err(syntax(kw, "expected `A < B` in subsort declaration".into()));
            }
            Ok(Decl::Subsorts(groups))
        }
        "op" | "ops" => {
            let colon = body
                .iter()
                .position(|t| t.text == ":")
                .ok_or_else(|| syntax(kw, "expected `:` in operator declaration".into()))?;
            let arrow = body
                .iter()
                .position(|t| t.text == "->")
                .ok_or_else(|| syntax(kw, "expected `->` in operator declaration".into()))?;
            if arrow < colon {
                return Err(syntax(&body[arrow], "`->` before `:`".into()));
            }
            let names = body[..colon].to_vec();
            if names.is_empty() || (kw.text == "op" && names.len() != 1) {
                return Err(syntax(kw, "bad operator name list".into()));
            }
            let args = body[colon + 1..arrow].to_vec();
            let result = &body[arrow + 1..];
            match result {
                [r] => Ok(Decl::Ops(names, args, r.clone())),
                [_, extra, ..] if extra.text == "[" => {
                    Err(syntax(extra, "operator attributes are not supported".into()))
                }
                _ => Err(syntax(kw, "expected a single result sort".into())),
            }
        }
        "var" | "vars" => {
            let colon = body
                .iter()
                .position(|t| t.text == ":")
                .ok_or_else(|| syntax(kw, "expected `:` in variable declaration".into()))?;
            let names = body[..colon].to_vec();
            match &body[colon + 1..] {
                [s] if !names.is_empty() => Ok(Decl::Vars(names, s.clone())),
                _ => Err(syntax(kw, "expected `vars NAMES : SORT .`".into())),
            }
        }
        "rl" => {
            let mut body = body.as_slice();
            let mut label = None;
            if body.first().map(|t| t.text.as_str()) == Some("[") {
                match body {
                    [_, l, close, colon, rest @ ..] if close.text == "]" && colon.text == ":" => {
                        label = Some(l.text.clone());
                        body = rest;
                    }
                    _ => return Err(syntax(kw, "expected `[label] :` after `rl`".into())),
                }
            }
            let arrow = body
                .iter()
                .position(|t| t.text == "=>")
                .ok_or_else(|| syntax(kw, "expected `=>` in rule".into()))?;
            Ok(Decl::Rule(
                label,
                kw.clone(),
                body[..arrow].to_vec(),
                body[arrow + 1..].to_vec(),
            ))
        }
        "crl" | "eq" | "ceq" | "mb" | "cmb" | "including" | "protecting" | "extending" => Err(syntax(
            kw,
            format!("`{}` is outside the supported module language", kw.text),
        )),
        other => Err(syntax(kw, format!("unexpected `{other}`"))),
    }
}

struct TermParser<'a> {
    sig: &'a SortedSignature,
    tokens: &'a [Token],
    pos: usize,
    anchor: &'a Token,
}

impl TermParser<'_> {
    fn err_at(&self, message: String) -> FrontendError {
        let t = self.tokens.get(self.pos).unwrap_or(self.anchor);
        syntax(t, message)
    }

    fn term(&mut self) -> Result<Term, FrontendError> {
        let Some(head) = self.tokens.get(self.pos).cloned() else {
            return Err(self.err_at("expected a term".into()));
        };
        if is_separator(head.text.chars().next().unwrap_or(' ')) {
            return Err(syntax(&head, format!("unexpected `{}`", head.text)));
        }
        self.pos += 1;
        let applied = self.tokens.get(self.pos).map(|t| t.text.as_str()) == Some("(");
        if !applied {
            if self.sig.var_sort(&head.text).is_some() {
                return Term::var(self.sig, &head.text).map_err(|e| term_error(&head, e));
            }
            if self.sig.is_op(&head.text) {
                return Term::app(self.sig, &head.text, vec![]).map_err(|e| term_error(&head, e));
            }
            return Err(FrontendError::UndeclaredVariable {
                name: head.text.clone(),
                line: head.line,
                col: head.col,
            });
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        loop {
            let t = self
                .tokens
                .get(self.pos)
                .ok_or_else(|| self.err_at("unterminated argument list".into()))?;
            self.pos += 1;
            match t.text.as_str() {
                "," => args.push(self.term()?),
                ")" => break,
                other => return Err(syntax(t, format!("expected `,` or `)`, found `{other}`"))),
            }
        }
        if !self.sig.is_op(&head.text) {
            return Err(syntax(&head, format!("unknown operator `{}`", head.text)));
        }
        Term::app(self.sig, &head.text, args).map_err(|e| term_error(&head, e))
    }
}

fn term_error(at: &Token, e: TermError) -> FrontendError {
    match e {
        TermError::UndeclaredVariable(name) => FrontendError::UndeclaredVariable {
            name,
            line: at.line,
            col: at.col,
        },
        other => FrontendError::IllTypedRule {
            line: at.line,
            message: other.to_string(),
        },
    }
}

fn parse_term(sig: &SortedSignature, tokens: &[Token], anchor: &Token) -> Result<Term, FrontendError> {
    let mut p = TermParser {
        sig,
        tokens,
        pos: 0,
        anchor,
    };
    let t = p.term()?;
    if let Some(extra) = tokens.get(p.pos) {
        return Err(syntax(extra, format!("unexpected `{}` after term", extra.text)));
    }
    Ok(t)
}

/// Parses a module and builds its checked signature and rules.
pub fn parse_module(text: &str) -> Result<Ostrs, FrontendError> {
    let tokens = tokenize(text);
    let eof_line = text.lines().count().max(1);
    let mut cur = Cursor {
        tokens,
        pos: 0,
        eof_line,
    };
    let kw = cur.next()?;
    if kw.text != "mod" && kw.text != "fmod" {
        return Err(syntax(&kw, "expected `mod`".into()));
    }
    let name = cur.next()?.text;
    cur.expect("is")?;

    let mut decls = Vec::new();
    loop {
        let kw = cur.next()?;
        if kw.text == "endm" || kw.text == "endfm" {
            break;
        }
        let body = cur.statement()?;
        decls.push(parse_decl(&kw, body)?);
    }
    if let Some(t) = cur.peek() {
        return Err(syntax(t, "text after `endm`".into()));
    }

    // sorts first so that declaration order does not matter
    let mut sorts: Vec<String> = Vec::new();
    for d in &decls {
        if let Decl::Sorts(names) = d {
            for n in names {
                if sorts.contains(&n.text) {
                    return Err(syntax(n, format!("sort `{}` declared twice", n.text)));
                }
                sorts.push(n.text.clone());
            }
        }
    }
    let mut subsorts: Vec<(String, String)> = Vec::new();
    for d in &decls {
        if let Decl::Subsorts(groups) = d {
            for pair in groups.windows(2) {
                for a in &pair[0] {
                    for b in &pair[1] {
                        for t in [a, b] {
                            if !sorts.contains(&t.text) {
                                return Err(FrontendError::UnknownSort {
                                    name: t.text.clone(),
                                    line: t.line,
                                    col: t.col,
                                });
                            }
                        }
                        subsorts.push((a.text.clone(), b.text.clone()));
                    }
                }
            }
        }
    }
    let poset = build_poset(&sorts, &subsorts).map_err(|e| match e {
        SortError::Cycle(a, b) => {
            FrontendError::SignatureCheckFailure(vec![format!("subsort cycle between {a} and {b}")])
        }
        other => FrontendError::SignatureCheckFailure(vec![other.to_string()]),
    })?;
    let mut sig = SortedSignature::new(poset);

    let sort_of = |sig: &SortedSignature, t: &Token| {
        sig.sort(&t.text).map_err(|_| FrontendError::UnknownSort {
            name: t.text.clone(),
            line: t.line,
            col: t.col,
        })
    };
    for d in &decls {
        match d {
            Decl::Ops(names, args, result) => {
                for a in args.iter().chain(std::iter::once(result)) {
                    sort_of(&sig, a)?;
                }
                let args: Vec<&str> = args.iter().map(|t| t.text.as_str()).collect();
                for n in names {
                    sig.add_op(&n.text, &args, &result.text).expect("sorts checked above");
                }
            }
            Decl::Vars(names, sort) => {
                sort_of(&sig, sort)?;
                for n in names {
                    sig.add_var(&n.text, &sort.text).map_err(|e| syntax(n, e.to_string()))?;
                }
            }
            _ => {}
        }
    }

    let diagnostics = sig.check();
    let mut failures = Vec::new();
    for (name, check) in diagnostics.checks() {
        if name == "coherent" || name == "predicate-regular" {
            continue;
        }
        failures.extend(check.problems.iter().map(|p| format!("{name}: {p}")));
    }
    if !failures.is_empty() {
        return Err(FrontendError::SignatureCheckFailure(failures));
    }
    sig.install_rewrite_predicates();

    let mut rules = Vec::new();
    for d in &decls {
        if let Decl::Rule(label, kw, lhs, rhs) = d {
            let label = label.clone().unwrap_or_else(|| (rules.len() + 1).to_string());
            let lhs_t = parse_term(&sig, lhs, kw)?;
            let rhs_t = parse_term(&sig, rhs, kw)?;
            let ls = least_sort(&lhs_t, &sig).map_err(|e| term_error(kw, e))?;
            let rs = least_sort(&rhs_t, &sig).map_err(|e| term_error(kw, e))?;
            if !sig.poset.same_component(ls, rs) {
                return Err(FrontendError::IllTypedRule {
                    line: kw.line,
                    message: format!(
                        "rule [{label}]: sides have sorts {} and {} in different components",
                        sig.sort_name(ls),
                        sig.sort_name(rs)
                    ),
                });
            }
            rules.push(Rule {
                label,
                lhs: lhs_t,
                rhs: rhs_t,
            });
        }
    }
    Ok(Ostrs { name, sig, rules })
}
