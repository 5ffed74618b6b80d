//! First-order formulas over nested pushdown trees.

use std::collections::BTreeSet;
use std::fmt;

use super::FomcError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(String, String),
    /// Some Delta edge.
    Edge(String, String),
    /// The Delta edge of one transition.
    EdgeAt(usize, String, String),
    Jump(String, String),
    Root(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::Eq(..) | Formula::Edge(..) | Formula::EdgeAt(..) | Formula::Jump(..) | Formula::Root(..)
        )
    }

    pub fn rank(&self) -> usize {
        match self {
            Formula::Not(f) => f.rank(),
            Formula::And(a, b) | Formula::Or(a, b) => a.rank().max(b.rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.rank(),
            _ => 0,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut var = |v: &String| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Eq(x, y) | Formula::Edge(x, y) | Formula::EdgeAt(_, x, y) | Formula::Jump(x, y) => {
                var(x);
                var(y);
            }
            Formula::Root(x) => var(x),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Negations only directly above atoms.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(f) => f.is_atom(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.is_nnf(),
            _ => true,
        }
    }

    fn nnf(&self, negate: bool) -> Formula {
        match (self, negate) {
            (Formula::Not(f), _) => f.nnf(!negate),
            (Formula::And(a, b), false) => Formula::and(a.nnf(false), b.nnf(false)),
            (Formula::And(a, b), true) => Formula::or(a.nnf(true), b.nnf(true)),
            (Formula::Or(a, b), false) => Formula::or(a.nnf(false), b.nnf(false)),
            (Formula::Or(a, b), true) => Formula::and(a.nnf(true), b.nnf(true)),
            (Formula::Exists(x, f), false) => Formula::exists(x, f.nnf(false)),
            (Formula::Exists(x, f), true) => Formula::forall(x, f.nnf(true)),
            (Formula::Forall(x, f), false) => Formula::forall(x, f.nnf(false)),
            (Formula::Forall(x, f), true) => Formula::exists(x, f.nnf(true)),
            (atom, false) => atom.clone(),
            (atom, true) => Formula::not(atom.clone()),
        }
    }
}

/// Negation normal form and quantifier rank.
pub fn normalize(f: &Formula) -> (Formula, usize) {
    (f.nnf(false), f.rank())
}

fn operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if f.is_atom() || matches!(f, Formula::Not(_)) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Edge(x, y) => write!(f, "edge({x},{y})"),
            Formula::EdgeAt(i, x, y) => write!(f, "edge[{i}]({x},{y})"),
            Formula::Jump(x, y) => write!(f, "jump({x},{y})"),
            Formula::Root(x) => write!(f, "root({x})"),
            Formula::Not(g) => {
                write!(f, "!")?;
                operand(g, f)
            }
            Formula::And(a, b) => {
                operand(a, f)?;
                write!(f, " & ")?;
                operand(b, f)
            }
            Formula::Or(a, b) => {
                operand(a, f)?;
                write!(f, " | ")?;
                operand(b, f)
            }
            Formula::Exists(x, g) => write!(f, "exists {x}. {g}"),
            Formula::Forall(x, g) => write!(f, "forall {x}. {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FomcError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| FomcError::Parse {
                position: start,
                message: "number too large".into(),
            })?;
            out.push((start, Tok::Nat(n)));
        } else if "().,=&|![]".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(FomcError::Parse {
                position: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["exists", "forall", "edge", "jump", "root"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FomcError> {
        Err(FomcError::Parse {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), FomcError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn var(&mut self) -> Result<String, FomcError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.error("expected a variable"),
        }
    }

    fn keyword(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()) => Some(s.as_str()),
            _ => None,
        }
    }

    fn formula(&mut self) -> Result<Formula, FomcError> {
        match self.keyword() {
            Some(q @ ("exists" | "forall")) => {
                let exists = q == "exists";
                self.at += 1;
                let x = self.var()?;
                self.expect_sym('.')?;
                let body = self.formula()?;
                Ok(if exists {
                    Formula::Exists(x, Box::new(body))
                } else {
                    Formula::Forall(x, Box::new(body))
                })
            }
            _ => self.disj(),
        }
    }

    fn disj(&mut self) -> Result<Formula, FomcError> {
        let mut f = self.conj()?;
        while self.eat_sym('|') {
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, FomcError> {
        let mut f = self.neg()?;
        while self.eat_sym('&') {
            f = Formula::and(f, self.neg()?);
        }
        Ok(f)
    }

    fn neg(&mut self) -> Result<Formula, FomcError> {
        if self.eat_sym('!') {
            return Ok(Formula::not(self.neg()?));
        }
        if self.eat_sym('(') {
            let f = self.formula()?;
            self.expect_sym(')')?;
            return Ok(f);
        }
        self.atom()
    }

    fn pair(&mut self) -> Result<(String, String), FomcError> {
        self.expect_sym('(')?;
        let x = self.var()?;
        self.expect_sym(',')?;
        let y = self.var()?;
        self.expect_sym(')')?;
        Ok((x, y))
    }

    fn atom(&mut self) -> Result<Formula, FomcError> {
        match self.keyword() {
            Some("edge") => {
                self.at += 1;
                let index = if self.eat_sym('[') {
                    let n = match self.peek() {
                        Some(Tok::Nat(n)) => *n,
                        _ => return self.error("expected a transition index"),
                    };
                    self.at += 1;
                    self.expect_sym(']')?;
                    Some(n)
                } else {
                    None
                };
                let (x, y) = self.pair()?;
                Ok(match index {
                    Some(i) => Formula::EdgeAt(i, x, y),
                    None => Formula::Edge(x, y),
                })
            }
            Some("jump") => {
                self.at += 1;
                let (x, y) = self.pair()?;
                Ok(Formula::Jump(x, y))
            }
            Some("root") => {
                self.at += 1;
                self.expect_sym('(')?;
                let x = self.var()?;
                self.expect_sym(')')?;
                Ok(Formula::Root(x))
            }
            Some(k) => {
                let k = k.to_string();
                self.error(format!("unexpected keyword {k}"))
            }
            None => {
                let x = self.var()?;
                self.expect_sym('=')?;
                let y = self.var()?;
                Ok(Formula::Eq(x, y))
            }
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FomcError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f = parse_formula("exists x. exists y. jump(x,y)").unwrap();
        assert_eq!(
            f,
            Formula::exists("x", Formula::exists("y", Formula::Jump("x".into(), "y".into())))
        );
        assert_eq!(f.rank(), 2);
        assert!(matches!(
            parse_formula("exists x jump(x)"),
            Err(FomcError::Parse { .. })
        ));
        assert!(matches!(
            parse_formula("exists x. jump(x)"),
            Err(FomcError::Parse { position: 16, .. })
        ));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!root(x) & x = y | edge[2](x,y)").unwrap();
        let expected = Formula::or(
            Formula::and(
                Formula::not(Formula::Root("x".into())),
                Formula::Eq("x".into(), "y".into()),
            ),
            Formula::EdgeAt(2, "x".into(), "y".into()),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn negation_normal_form() {
        let f = parse_formula("!(exists x. root(x))").unwrap();
        let (g, r) = normalize(&f);
        assert_eq!(g, Formula::forall("x", Formula::not(Formula::Root("x".into()))));
        assert_eq!(r, 1);
        let atom = Formula::Root("x".into());
        assert_eq!(normalize(&atom), (atom.clone(), 0));
    }
}
