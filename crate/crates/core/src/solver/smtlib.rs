//! SMT-LIB 2 export of a constraint problem and import of a solver model.

use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::Assignment;
use crate::farkas::{PolyConstraint, Rel};
use crate::params::{ParamKind, ParamTable, Poly};
use crate::rational::{parse_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmtError {
    #[error("cannot parse solver model: {0}")]
    ParseError(String),
    #[error("solver model has no value for `{0}`")]
    MissingBinding(String),
}

fn is_simple_symbol(s: &str) -> bool {
    const EXTRA: &str = "~!@$%^&*_-+=<>.?/";
    !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
}

pub fn symbol(name: &str) -> String {
    if is_simple_symbol(name) {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn literal(r: &Rat, real: bool) -> String {
    let body = |n: i128| {
        if real {
            format!("{}.0", n.abs())
        } else {
            n.abs().to_string()
        }
    };
    let mag = if r.is_integer() {
        body(*r.numer())
    } else {
        format!("(/ {} {})", body(*r.numer()), body(*r.denom()))
    };
    if r.is_negative() {
        format!("(- {mag})")
    } else {
        mag
    }
}

fn term(p: &Poly, table: &ParamTable, real: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (m, c) in p.terms() {
        let mut factors: Vec<String> = Vec::new();
        if m.is_empty() || !c.is_one() {
            factors.push(literal(c, real));
        }
        factors.extend(m.iter().map(|&id| symbol(table.name(id))));
        parts.push(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            format!("(* {})", factors.join(" "))
        });
    }
    match parts.len() {
        0 => literal(&Rat::zero(), real),
        1 => parts.pop().unwrap(),
        _ => format!("(+ {})", parts.join(" ")),
    }
}

/// Whether every search domain is integral (so `QF_NIA` suffices).
pub fn all_integer(table: &ParamTable) -> bool {
    table
        .iter()
        .all(|(_, p)| p.kind != ParamKind::Farkas && p.domain.iter().all(|v| v.is_integer()))
}

/// Renders the problem as an SMT-LIB script ending in `(check-sat)` and
/// `(get-model)`. Multipliers are only required to be non-negative; every
/// other parameter is restricted to its finite domain.
pub fn emit_smtlib(constraints: &[PolyConstraint], table: &ParamTable) -> String {
    let real = !all_integer(table);
    let sort = if real { "Real" } else { "Int" };
    let mut out = String::new();
    writeln!(out, "(set-logic {})", if real { "QF_NRA" } else { "QF_NIA" }).unwrap();
    for (_, p) in table.iter() {
        writeln!(out, "(declare-fun {} () {sort})", symbol(&p.name)).unwrap();
    }
    for (_, p) in table.iter() {
        let s = symbol(&p.name);
        if p.kind == ParamKind::Farkas {
            writeln!(out, "(assert (>= {s} {}))", literal(&Rat::zero(), real)).unwrap();
            continue;
        }
        let opts: Vec<String> = p
            .domain
            .iter()
            .map(|v| format!("(= {s} {})", literal(v, real)))
            .collect();
        match opts.len() {
            0 => writeln!(out, "(assert false)").unwrap(),
            1 => writeln!(out, "(assert {})", opts[0]).unwrap(),
            _ => writeln!(out, "(assert (or {}))", opts.join(" ")).unwrap(),
        }
    }
    for c in constraints {
        let op = match c.rel {
            Rel::Eq => "=",
            Rel::Ge => ">=",
        };
        writeln!(out, "; {}", c.origin).unwrap();
        writeln!(
            out,
            "(assert ({op} {} {}))",
            term(&c.lhs, table, real),
            term(&c.rhs, table, real)
        )
        .unwrap();
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(src: &str) -> Result<Vec<String>, SmtError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' | ')' => {
                toks.push(c.to_string());
                chars.next();
            }
            ';' => while chars.next().is_some_and(|c| c != '\n') {},
            '|' => {
                chars.next();
                let mut s = String::from("|");
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(c) => s.push(c),
                        None => return Err(SmtError::ParseError("unterminated quoted symbol".into())),
                    }
                }
                s.push('|');
                toks.push(s);
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(SmtError::ParseError("unterminated string".into())),
                    }
                }
                toks.push(s);
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "();|\"".contains(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                toks.push(s);
            }
        }
    }
    Ok(toks)
}

fn parse_sexps(toks: &[String]) -> Result<Vec<Sexp>, SmtError> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for t in toks {
        match t.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack.pop().unwrap();
                stack
                    .last_mut()
                    .ok_or_else(|| SmtError::ParseError("unbalanced `)`".into()))?
                    .push(Sexp::List(done));
            }
            _ => stack.last_mut().unwrap().push(Sexp::Atom(t.clone())),
        }
    }
    if stack.len() != 1 {
        return Err(SmtError::ParseError("unbalanced `(`".into()));
    }
    Ok(stack.pop().unwrap())
}

fn value(e: &Sexp) -> Result<Rat, SmtError> {
    let bad = || SmtError::ParseError(format!("unsupported value {e:?}"));
    match e {
        Sexp::Atom(a) => parse_rat(a).map_err(|_| bad()),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(op), x] if op == "-" => Ok(-value(x)?),
            [Sexp::Atom(op), x, y] if op == "/" => {
                let d = value(y)?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(value(x)? / d)
            }
            [Sexp::Atom(op), x, y] if op == "-" => Ok(value(x)? - value(y)?),
            [Sexp::Atom(op), x] if op == "to_real" => value(x),
            _ => Err(bad()),
        },
    }
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('|').and_then(|s| s.strip_suffix('|')).unwrap_or(s)
}

/// Reads `(define-fun name () Sort value)` bindings from a solver's model
/// output. A leading `sat` line and an optional `(model …)` wrapper are
/// accepted. Every parameter of `table` must be bound.
pub fn parse_smt_model(src: &str, table: &ParamTable) -> Result<Assignment, SmtError> {
    let sexps = parse_sexps(&tokenize(src)?)?;
    let mut defs: Vec<&Sexp> = Vec::new();
    for s in &sexps {
        match s {
            Sexp::Atom(a) if a == "sat" => {}
            Sexp::Atom(a) => return Err(SmtError::ParseError(format!("unexpected `{a}`"))),
            Sexp::List(items) => match items.first() {
                Some(Sexp::Atom(h)) if h == "model" => defs.extend(&items[1..]),
                _ => defs.extend(items.iter().filter(|i| matches!(i, Sexp::List(_)))),
            },
        }
    }
    // a bare list of define-funs parses as one list of lists
    if sexps.len() == 1 {
        if let Sexp::List(items) = &sexps[0] {
            if matches!(items.first(), Some(Sexp::Atom(h)) if h == "define-fun") {
                defs = vec![&sexps[0]];
            }
        }
    }
    let mut a = Assignment::new();
    for d in defs {
        let Sexp::List(items) = d else { continue };
        match items.as_slice() {
            [Sexp::Atom(k), Sexp::Atom(name), Sexp::List(args), Sexp::Atom(sort), v] if k == "define-fun" => {
                if !args.is_empty() {
                    continue;
                }
                if sort != "Int" && sort != "Real" {
                    return Err(SmtError::ParseError(format!("unsupported sort `{sort}`")));
                }
                a.set(unquote(name), value(v)?);
            }
            [Sexp::Atom(k), ..] if k == "define-fun" => {
                return Err(SmtError::ParseError("malformed define-fun".into()));
            }
            _ => {}
        }
    }
    if let Some(m) = a.missing(table).into_iter().next() {
        return Err(SmtError::MissingBinding(m));
    }
    a.0.retain(|k, _| table.lookup(k).is_some());
    Ok(a)
}
