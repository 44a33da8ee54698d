//! The ASCII grammar for homotopy element names.
//!
//! ```text
//! sum      := product (('+' | '-') product)*
//! product  := factor ('.' factor)*
//! factor   := int? primary
//! primary  := atom | 'S^' index ('p' | 'i') | func '(' sum ')'
//!           | '[' sum ',' sum ']' | '(' sum ')'
//! atom     := ident prime* ('_' sub)? prime* ('(' index ')')? ('^' int)?
//! func     := 'ext' | 'coext' | 'P' | 'S'
//! sub      := int | 'n' | '{' index (',' index)* '}'
//! index    := int | 'n' (('+' | '-') int)? | 'C'
//! ```
//!
//! `n` is a placeholder instantiated per row for families such as
//! `beta_1(n) . S^{n+6} p`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse element name '{input}' at byte {pos}: {reason}")]
pub struct GrammarError {
    pub input: String,
    pub pos: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Int(u32),
    /// `n + offset`.
    Var(i32),
    /// A literal tag such as the `C` of `g_10(C)`.
    Tag(String),
}

impl Index {
    fn instantiate(&self, n: u32) -> Index {
        match self {
            Index::Var(off) => Index::Int((n as i64 + *off as i64).max(0) as u32),
            other => other.clone(),
        }
    }

    fn is_symbolic(&self) -> bool {
        matches!(self, Index::Var(_))
    }

    fn needs_braces(&self) -> bool {
        matches!(self, Index::Var(off) if *off != 0)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Int(i) => write!(f, "{i}"),
            Index::Var(0) => f.write_str("n"),
            Index::Var(off) if *off > 0 => write!(f, "n+{off}"),
            Index::Var(off) => write!(f, "n-{}", -off),
            Index::Tag(t) => f.write_str(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Signed terms; at least two, or one with a minus sign.
    Sum(Vec<(bool, Element)>),
    /// Composition `a . b . c`, left to right.
    Compose(Vec<Element>),
    Scaled(u64, Box<Element>),
    Atom {
        base: String,
        primes: u8,
        sub: Vec<Index>,
        arg: Option<Index>,
        power: Option<u32>,
    },
    /// `S^m p` or `S^m i`, the suspended pinch or inclusion.
    Suspended {
        degree: Index,
        map: char,
    },
    Apply {
        func: String,
        arg: Box<Element>,
    },
    Whitehead(Box<Element>, Box<Element>),
}

const FUNCS: [&str; 4] = ["ext", "coext", "P", "S"];

impl Element {
    pub fn parse(input: &str) -> Result<Element, GrammarError> {
        let mut p = Parser {
            input,
            chars: input
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            at: 0,
        };
        let e = p.sum()?;
        if p.at < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Replaces every `n + k` index by the number `n + k`.
    pub fn instantiate(&self, n: u32) -> Element {
        match self {
            Element::Sum(terms) => {
                Element::Sum(terms.iter().map(|(s, e)| (*s, e.instantiate(n))).collect())
            }
            Element::Compose(parts) => {
                Element::Compose(parts.iter().map(|e| e.instantiate(n)).collect())
            }
            Element::Scaled(c, e) => Element::Scaled(*c, Box::new(e.instantiate(n))),
            Element::Atom {
                base,
                primes,
                sub,
                arg,
                power,
            } => Element::Atom {
                base: base.clone(),
                primes: *primes,
                sub: sub.iter().map(|i| i.instantiate(n)).collect(),
                arg: arg.as_ref().map(|i| i.instantiate(n)),
                power: *power,
            },
            Element::Suspended { degree, map } => Element::Suspended {
                degree: degree.instantiate(n),
                map: *map,
            },
            Element::Apply { func, arg } => Element::Apply {
                func: func.clone(),
                arg: Box::new(arg.instantiate(n)),
            },
            Element::Whitehead(a, b) => {
                Element::Whitehead(Box::new(a.instantiate(n)), Box::new(b.instantiate(n)))
            }
        }
    }

    pub fn is_symbolic(&self) -> bool {
        match self {
            Element::Sum(terms) => terms.iter().any(|(_, e)| e.is_symbolic()),
            Element::Compose(parts) => parts.iter().any(Element::is_symbolic),
            Element::Scaled(_, e) => e.is_symbolic(),
            Element::Atom { sub, arg, .. } => {
                sub.iter().any(Index::is_symbolic) || arg.as_ref().is_some_and(Index::is_symbolic)
            }
            Element::Suspended { degree, .. } => degree.is_symbolic(),
            Element::Apply { arg, .. } => arg.is_symbolic(),
            Element::Whitehead(a, b) => a.is_symbolic() || b.is_symbolic(),
        }
    }

    /// Base identifiers of every atom, e.g. `nu`, `sigma`, `g`.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Element::Sum(terms) => terms.iter().for_each(|(_, e)| e.collect_atoms(out)),
            Element::Compose(parts) => parts.iter().for_each(|e| e.collect_atoms(out)),
            Element::Scaled(_, e) => e.collect_atoms(out),
            Element::Atom { base, .. } => out.push(base),
            Element::Suspended { .. } => {}
            Element::Apply { arg, .. } => arg.collect_atoms(out),
            Element::Whitehead(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    fn tight(&self) -> bool {
        !matches!(
            self,
            Element::Sum(_) | Element::Compose(_) | Element::Scaled(..)
        )
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Sum(terms) => {
                for (i, (neg, e)) in terms.iter().enumerate() {
                    match (i, neg) {
                        (0, false) => {}
                        (0, true) => f.write_str("-")?,
                        (_, false) => f.write_str(" + ")?,
                        (_, true) => f.write_str(" - ")?,
                    }
                    if matches!(e, Element::Sum(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            Element::Compose(parts) => {
                for (i, e) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" . ")?;
                    }
                    if matches!(e, Element::Sum(_) | Element::Compose(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            Element::Scaled(c, e) if e.tight() => write!(f, "{c}{e}"),
            Element::Scaled(c, e) => write!(f, "{c}({e})"),
            Element::Atom {
                base,
                primes,
                sub,
                arg,
                power,
            } => {
                f.write_str(base)?;
                for _ in 0..*primes {
                    f.write_str("'")?;
                }
                match sub.as_slice() {
                    [] => {}
                    [i] if !i.needs_braces() => write!(f, "_{i}")?,
                    list => {
                        let parts: Vec<String> = list.iter().map(|i| i.to_string()).collect();
                        write!(f, "_{{{}}}", parts.join(","))?;
                    }
                }
                if let Some(a) = arg {
                    write!(f, "({a})")?;
                }
                if let Some(p) = power {
                    write!(f, "^{p}")?;
                }
                Ok(())
            }
            Element::Suspended { degree, map } if degree.needs_braces() => {
                write!(f, "S^{{{degree}}} {map}")
            }
            Element::Suspended { degree, map } => write!(f, "S^{degree} {map}"),
            Element::Apply { func, arg } => write!(f, "{func}({arg})"),
            Element::Whitehead(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Canonical spelling of a name: parsed and printed back.
pub fn canonical_name(input: &str) -> Result<String, GrammarError> {
    Ok(Element::parse(input)?.to_string())
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    at: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> GrammarError {
        GrammarError {
            input: self.input.to_string(),
            pos: self
                .chars
                .get(self.at)
                .map(|(i, _)| *i)
                .unwrap_or(self.input.len()),
            reason: reason.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|(_, c)| *c)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.at + k).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), GrammarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        if self.at == start {
            return None;
        }
        let s: String = self.chars[start..self.at].iter().map(|(_, c)| c).collect();
        s.parse().ok()
    }

    fn sum(&mut self) -> Result<Element, GrammarError> {
        let mut terms = Vec::new();
        let mut neg = self.eat('-');
        loop {
            match self.product()? {
                // "a + (b + c)" is the same sum as "a + b + c".
                Element::Sum(inner) if !neg => terms.extend(inner),
                e => terms.push((neg, e)),
            }
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(Element::Sum(terms))
        }
    }

    fn product(&mut self) -> Result<Element, GrammarError> {
        let mut parts = vec![self.factor()?];
        while self.eat('.') {
            parts.push(self.factor()?);
        }
        // Flatten nested compositions so grouping does not affect identity.
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Element::Compose(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            Ok(flat.pop().unwrap())
        } else {
            Ok(Element::Compose(flat))
        }
    }

    fn factor(&mut self) -> Result<Element, GrammarError> {
        if let Some(c) = self.number() {
            if c == 0 {
                return Err(self.error("zero coefficient"));
            }
            let inner = self.primary()?;
            return Ok(if c == 1 {
                inner
            } else {
                Element::Scaled(c, Box::new(inner))
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Element, GrammarError> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.at += 1;
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                self.expect(']')?;
                Ok(Element::Whitehead(Box::new(a), Box::new(b)))
            }
            Some('S') if self.peek_at(1) == Some('^') => {
                self.at += 2;
                let degree = if self.eat('{') {
                    let i = self.index()?;
                    self.expect('}')?;
                    i
                } else {
                    self.simple_index()?
                };
                match self.peek() {
                    Some(m @ ('p' | 'i')) => {
                        self.at += 1;
                        Ok(Element::Suspended { degree, map: m })
                    }
                    _ => Err(self.error("expected 'p' or 'i' after S^m")),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => self.atom(),
            _ => Err(self.error("expected an element")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.at += 1;
        }
        self.chars[start..self.at].iter().map(|(_, c)| c).collect()
    }

    fn atom(&mut self) -> Result<Element, GrammarError> {
        let base = self.ident();
        if FUNCS.contains(&base.as_str()) && self.peek() == Some('(') {
            self.at += 1;
            let arg = self.sum()?;
            self.expect(')')?;
            return Ok(Element::Apply {
                func: base,
                arg: Box::new(arg),
            });
        }
        let mut primes = 0u8;
        while self.eat('\'') {
            primes += 1;
        }
        let mut sub = Vec::new();
        if self.eat('_') {
            if self.eat('{') {
                sub.push(self.index()?);
                while self.eat(',') {
                    sub.push(self.index()?);
                }
                self.expect('}')?;
            } else {
                sub.push(self.simple_index()?);
            }
        }
        while self.eat('\'') {
            primes += 1;
        }
        let mut arg = None;
        if self.peek() == Some('(') {
            self.at += 1;
            arg = Some(self.index()?);
            self.expect(')')?;
        }
        let mut power = None;
        if self.eat('^') {
            let p = self
                .number()
                .ok_or_else(|| self.error("expected an exponent"))?;
            power = Some(u32::try_from(p).map_err(|_| self.error("exponent too large"))?);
        }
        Ok(Element::Atom {
            base,
            primes,
            sub,
            arg,
            power,
        })
    }

    /// A bare number or `n`, as used after `_` and `S^` without braces.
    fn simple_index(&mut self) -> Result<Index, GrammarError> {
        if let Some(v) = self.number() {
            return u32::try_from(v)
                .map(Index::Int)
                .map_err(|_| self.error("index too large"));
        }
        if self.eat('n') {
            return Ok(Index::Var(0));
        }
        Err(self.error("expected an index"))
    }

    fn index(&mut self) -> Result<Index, GrammarError> {
        if self.peek() == Some('n') {
            self.at += 1;
            let sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(Index::Var(0));
            };
            let off = self
                .number()
                .ok_or_else(|| self.error("expected an offset"))?;
            let off = i32::try_from(off).map_err(|_| self.error("offset too large"))?;
            return Ok(Index::Var(sign * off));
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.simple_index();
        }
        let tag = self.ident();
        if tag.is_empty() {
            return Err(self.error("expected an index"));
        }
        Ok(Index::Tag(tag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round(s: &str) -> String {
        canonical_name(s).unwrap()
    }

    #[test]
    fn examples_parse_and_print() {
        for s in [
            "nu_4 . sigma' . S^10 p",
            "ext(eta_9 . eps_10)",
            "g_10(C)",
            "P(nu_21)",
            "alpha_1(5)",
            "beta_1(6)",
            "[i_6,i_6] . alpha_1(11)",
            "nu_4^3",
            "2nubar_6",
            "alpha_{1,5}(3)",
            "alpha'_3(5)",
            "sigma' . eta_14^2 + eta_7 . eps_8",
            "ext(2i_14)",
            "2(nu_4 . sigma')",
            "S(sigma') . eta_15^2 + eta_8 . eps_9",
        ] {
            assert_eq!(round(s), s);
        }
    }

    #[test]
    fn whitespace_and_grouping_are_irrelevant() {
        assert_eq!(round("nu_4.sigma'.S^10p"), "nu_4 . sigma' . S^10 p");
        assert_eq!(round("(nu_4 . sigma') . S^10 p"), "nu_4 . sigma' . S^10 p");
        assert_eq!(round("1nu_4"), "nu_4");
    }

    #[test]
    fn instantiation() {
        let e = Element::parse("beta_1(n) . S^{n+6} p").unwrap();
        assert!(e.is_symbolic());
        assert_eq!(e.to_string(), "beta_1(n) . S^{n+6} p");
        assert_eq!(e.instantiate(14).to_string(), "beta_1(14) . S^20 p");
        let e = Element::parse("eta_n . eps_{n+1}").unwrap();
        assert_eq!(e.instantiate(13).to_string(), "eta_13 . eps_14");
        assert!(!e.instantiate(13).is_symbolic());
    }

    #[test]
    fn atoms_are_collected() {
        let e = Element::parse("[i_4,i_4] . alpha_1(7) . S^6 p").unwrap();
        assert_eq!(e.atoms(), vec!["i", "i", "alpha"]);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "", "nu_", "S^4", "ext(nu_4", "nu_4 .", "0nu_4", "[i_4]", "nu_4 $",
        ] {
            assert!(Element::parse(s).is_err(), "{s}");
        }
    }
}
