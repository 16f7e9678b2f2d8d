//! Text formats: agents `3[{2}1[],{1}0[]]`, plays `O@- P@0 O@1`, simple
//! types and terms `\x:o. x`, and nested derivations
//! `RULE alpha rho agent { premises }`.

use std::fmt::Write as _;
use std::rc::Rc;

use agentred_core::agents::Agent;
use agentred_core::certificates::{Derivation, Rule};
use agentred_core::lambda::{Name, Term, Type};
use agentred_core::pointers::{Move, Polarity, PointerStructure};
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

type Parsed<T> = Result<T, ParseError>;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Parsed<T> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Parsed<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(format!("expected `{token}`"))
        }
    }

    fn take_while(&mut self, ok: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c| !ok(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn nat<T: std::str::FromStr>(&mut self) -> Parsed<T> {
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.fail("expected a natural number");
        }
        digits.parse().map_err(|_| ParseError {
            pos: start,
            msg: format!("number {digits} is out of range"),
        })
    }

    fn finish(&mut self) -> Parsed<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.fail("unexpected trailing input");
        }
        Ok(())
    }
}

pub fn parse_agent(src: &str) -> Parsed<Agent> {
    let mut c = Cursor::new(src);
    let a = agent(&mut c)?;
    c.finish()?;
    Ok(a)
}

fn agent(c: &mut Cursor<'_>) -> Parsed<Agent> {
    let label = c.nat()?;
    c.expect("[")?;
    let mut children = Vec::new();
    if !c.eat("]") {
        loop {
            c.expect("{")?;
            let edge = c.nat()?;
            c.expect("}")?;
            children.push((edge, agent(c)?));
            if c.eat("]") {
                break;
            }
            c.expect(",")?;
        }
    }
    Ok(Agent::new(label, children))
}

pub fn parse_play(src: &str) -> Parsed<PointerStructure> {
    let mut c = Cursor::new(src);
    let mut s = PointerStructure::default();
    while c.peek().is_some() {
        let start = c.pos;
        let polarity = if c.eat("O") {
            Polarity::O
        } else if c.eat("P") {
            Polarity::P
        } else {
            return c.fail("expected `O` or `P`");
        };
        c.expect("@")?;
        let justifier = if c.eat("-") { None } else { Some(c.nat()?) };
        s.push(Move { polarity, justifier }).map_err(|e| ParseError {
            pos: start,
            msg: e.to_string(),
        })?;
    }
    Ok(s)
}

pub fn parse_type(src: &str) -> Parsed<Type> {
    let mut c = Cursor::new(src);
    let t = ty(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn ty(c: &mut Cursor<'_>) -> Parsed<Type> {
    let from = if c.eat("(") {
        let t = ty(c)?;
        c.expect(")")?;
        t
    } else if c.take_while(|ch| ch.is_alphanumeric() || ch == '_') == "o" {
        Type::Base
    } else {
        return c.fail("expected `o` or `(`");
    };
    if c.eat("->") {
        Ok(Type::arrow(from, ty(c)?))
    } else {
        Ok(from)
    }
}

/// Parses a term. Identifiers not bound by an enclosing abstraction are
/// constants, of type `o` unless written `(c : T)`.
pub fn parse_term(src: &str) -> Parsed<Term> {
    let mut c = Cursor::new(src);
    let t = term(&mut c, &mut Vec::new())?;
    c.finish()?;
    Ok(t)
}

fn is_ident_start(ch: char) -> bool {
    ch.is_alphabetic() || ch == '_'
}

fn ident(c: &mut Cursor<'_>) -> Parsed<Name> {
    match c.peek() {
        Some(ch) if is_ident_start(ch) => {}
        _ => return c.fail("expected an identifier"),
    }
    let word = c.take_while(|ch| ch.is_alphanumeric() || ch == '_');
    let id = if c.rest().starts_with('\'') {
        c.pos += 1;
        c.nat()?
    } else {
        0
    };
    Ok(Name {
        base: word.into(),
        id,
    })
}

fn term(c: &mut Cursor<'_>, scope: &mut Vec<Name>) -> Parsed<Term> {
    if c.eat("\\") || c.eat("λ") {
        let x = ident(c)?;
        c.expect(":")?;
        let t = ty(c)?;
        c.expect(".")?;
        scope.push(x.clone());
        let body = term(c, scope);
        scope.pop();
        return Ok(Term::Lam(x, t, Rc::new(body?)));
    }
    let mut out = atom(c, scope)?;
    while let Some(ch) = c.peek() {
        if ch == ')' {
            break;
        }
        let arg = if ch == '\\' || ch == 'λ' {
            term(c, scope)?
        } else {
            atom(c, scope)?
        };
        out = Term::App(Rc::new(out), Rc::new(arg));
    }
    Ok(out)
}

fn atom(c: &mut Cursor<'_>, scope: &mut Vec<Name>) -> Parsed<Term> {
    if c.eat("(") {
        let save = c.pos;
        if let Ok(name) = ident(c) {
            if c.eat(":") {
                if scope.contains(&name) {
                    return c.fail(format!("{name} is bound and cannot be annotated"));
                }
                let t = ty(c)?;
                c.expect(")")?;
                return Ok(Term::Const(name, t));
            }
        }
        c.pos = save;
        let t = term(c, scope)?;
        c.expect(")")?;
        return Ok(t);
    }
    let name = ident(c)?;
    if scope.contains(&name) {
        Ok(Term::Var(name))
    } else {
        Ok(Term::Const(name, Type::Base))
    }
}

/// Nested text form, one node per line, premises indented inside braces.
/// Fails when the tree, unfolding shared premises, exceeds `max_lines`.
pub fn write_derivation(dv: &Derivation, max_lines: u64) -> Result<String, String> {
    let lines = dv.tree_size();
    if lines > max_lines {
        return Err(format!("derivation unfolds to {lines} lines, more than {max_lines}"));
    }
    let mut out = String::new();
    write_node(dv, 0, &mut out);
    Ok(out)
}

fn write_node(dv: &Derivation, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let _ = write!(out, "{pad}{} {} {} {}", dv.rule_name(), dv.alpha, dv.rho, dv.subject);
    if let Rule::Cut { edge, left, right } = &dv.rule {
        let _ = write!(out, " @ {edge} | {} | {}", left.subject, right.subject);
    }
    let premises = dv.premises();
    if premises.is_empty() {
        out.push('\n');
        return;
    }
    out.push_str(" {\n");
    for p in premises {
        write_node(p, indent + 1, out);
    }
    let _ = writeln!(out, "{pad}}}");
}

/// Reads a derivation back. Node contents are taken as written; whether
/// the tree is a valid derivation is for the checker to decide.
pub fn parse_derivation(src: &str) -> Parsed<Rc<Derivation>> {
    let mut c = Cursor::new(src);
    let dv = node(&mut c)?;
    c.finish()?;
    Ok(dv)
}

fn node(c: &mut Cursor<'_>) -> Parsed<Rc<Derivation>> {
    let start = c.pos;
    let rule = c.take_while(|ch| ch.is_ascii_uppercase());
    let alpha: BigUint = c.nat()?;
    let rho = c.nat()?;
    let subject = agent(c)?;
    let cut = if rule == "CUT" {
        c.expect("@")?;
        let edge = c.nat()?;
        c.expect("|")?;
        let left = agent(c)?;
        c.expect("|")?;
        let right = agent(c)?;
        Some((edge, left, right))
    } else {
        None
    };
    let mut premises = Vec::new();
    if c.eat("{") {
        while !c.eat("}") {
            if c.peek().is_none() {
                return c.fail("unclosed premise block");
            }
            premises.push(node(c)?);
        }
    }
    let bad = |msg: String| ParseError { pos: start, msg };
    let rule = match (rule, cut) {
        ("BASE", None) if premises.is_empty() => Rule::Base,
        ("BASE", _) => return Err(bad("BASE takes no premises".into())),
        ("RED", None) => {
            let decrement = premises
                .pop()
                .ok_or_else(|| bad("RED needs its decrement premise".into()))?;
            Rule::Red {
                successors: premises,
                decrement,
            }
        }
        ("CUT", Some((edge, l, r))) => {
            let [left, right]: [Rc<Derivation>; 2] = premises
                .try_into()
                .map_err(|_| bad("CUT takes exactly two premises".into()))?;
            if left.subject != l || right.subject != r {
                return Err(bad("CUT header disagrees with its premises".into()));
            }
            Rule::Cut { edge, left, right }
        }
        (other, _) => return Err(bad(format!("unknown rule `{other}`"))),
    };
    Ok(Rc::new(Derivation {
        alpha,
        rho,
        subject,
        rule,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use agentred_core::certificates::{certify, check};
    use agentred_core::lambda::{app, id_base, konst};

    #[test]
    fn agents_round_trip() {
        let a = parse_agent(" 3 [ {2} 1[] , {1}0[] ]").unwrap();
        assert_eq!(a.to_string(), "3[{1}0[],{2}1[]]");
        assert_eq!(parse_agent(&a.to_string()).unwrap(), a);
        let e = parse_agent("1[{1}]").unwrap_err();
        assert_eq!(e.pos, 5);
        assert!(parse_agent("1[] x").is_err());
        assert!(parse_agent("").is_err());
    }

    #[test]
    fn plays_round_trip() {
        let s = parse_play("O@- P@0 O@1 P@0").unwrap();
        assert_eq!(s.to_string(), "O@- P@0 O@1 P@0");
        assert_eq!(s.len(), 4);
        assert!(parse_play("O@- O@0").is_err());
        assert!(parse_play("O@- P@1").is_err());
        assert_eq!(parse_play("").unwrap().len(), 0);
    }

    #[test]
    fn types_and_terms() {
        assert_eq!(parse_type("o -> o -> o").unwrap().to_string(), "o -> o -> o");
        assert_eq!(parse_type("(o -> o) -> o").unwrap().level(), 2);
        let t = parse_term("(\\x:o. x) c").unwrap();
        assert_eq!(t, app(id_base(), konst("c", Type::Base)));
        let f = parse_term("(f : o -> o) c").unwrap();
        assert_eq!(f.typecheck().unwrap(), Type::Base);
        for src in ["\\f:(o -> o) -> o. \\x:o. f (\\y:o. x)", "(y : (o -> o) -> o -> o) (\\x:o. x) c", "\\x'3:o. x'3"] {
            let t = parse_term(src).unwrap();
            assert_eq!(t.to_string(), src);
            assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
        assert!(parse_term("\\x:o. (x : o)").is_err());
        assert!(parse_term("(\\x:o. x").is_err());
    }

    #[test]
    fn derivations_round_trip() {
        let cert = certify(&parse_agent("1[{2}1[]]").unwrap()).unwrap();
        let text = write_derivation(&cert.derivation, 1_000_000).unwrap();
        let back = parse_derivation(&text).unwrap();
        assert_eq!(*back, *cert.derivation);
        assert!(check(&back));
        assert!(write_derivation(&cert.derivation, 1).is_err());
    }

    #[test]
    fn red_and_cut_lines() {
        let text = "RED 1 0 1[{1}0[]] {\n  BASE 0 0 0[{0}0[{1}0[]]]\n  BASE 0 0 0[{1}0[]]\n}\n";
        let dv = parse_derivation(text).unwrap();
        assert!(check(&dv));
        assert_eq!(write_derivation(&dv, 10).unwrap(), text);
        let cut = "CUT 0 1 0[{1}0[]] @ 1 | 0[] | 0[] {\n  BASE 0 1 0[]\n  BASE 0 1 0[]\n}\n";
        let dv = parse_derivation(cut).unwrap();
        assert!(check(&dv));
        assert_eq!(write_derivation(&dv, 10).unwrap(), cut);
        assert!(parse_derivation("CUT 0 1 0[{1}0[]] @ 1 | 1[] | 0[] {\n  BASE 0 1 0[]\n  BASE 0 1 0[]\n}").is_err());
    }
}
