//! Text syntax for matrices, rational expressions, flat expressions and
//! Boolean combinations.
//!
//! ```text
//! matrix  := '[[' q ',' q '],[' q ',' q ']]'      q := int | int '/' int
//! rexpr   := concat ('|' concat)*
//! concat  := postfix+
//! postfix := primary '*'*
//! primary := matrix | NAME | 'M' ij '(' int ')' | 'GL2Z' | '{}' | '(' ')' | '(' rexpr ')'
//! flat    := branch ('|' branch)*
//! branch  := item+        a bare matrix without '*' is a connector, anything else a factor
//! bool    := term ('|' term)*
//! term    := primary_b (('&' | '\') primary_b)*
//! primary_b := '(' flat ')' | '(' bool ')'
//! ```
//!
//! Names: `I`, `S`, `T`, `J`, `X`, `Y` (identity, `[[0,-1],[1,0]]`,
//! `[[1,1],[0,1]]`, `diag(1,-1)`, `[[1,2],[0,1]]`, `[[1,0],[2,1]]`) plus
//! caller supplied definitions.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::automata::{Label, NamedSet, RatExpr};
use crate::error::{Error, Result};
use crate::exact_linear::{Mat2, Rational};
use crate::flat_rat::{BoolComb, Branch, FlatExpr};

pub fn builtin_names() -> BTreeMap<String, Mat2> {
    [
        ("I", Mat2::identity()),
        ("S", Mat2::from_ints(0, -1, 1, 0)),
        ("T", Mat2::from_ints(1, 1, 0, 1)),
        ("J", Mat2::from_ints(1, 0, 0, -1)),
        ("X", Mat2::from_ints(1, 2, 0, 1)),
        ("Y", Mat2::from_ints(1, 0, 2, 1)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: BTreeMap<String, Mat2>,
}

enum Item {
    Connector(Mat2),
    Factor(RatExpr<Label>),
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            names: builtin_names(),
        }
    }

    pub fn define(&mut self, name: &str, m: Mat2) {
        self.names.insert(name.to_string(), m);
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => self.error(format!("expected '{c}', found '{d}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected '{c}'")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        match self.src[start..end].parse::<BigInt>() {
            Ok(n) => {
                self.pos = end;
                Ok(n)
            }
            Err(_) => self.error("expected an integer"),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.integer()?;
        if self.eat('/') {
            let d = self.integer()?;
            if d.is_zero() {
                return self.error("zero denominator");
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    pub fn matrix(&mut self) -> Result<Mat2> {
        self.expect('[')?;
        self.expect('[')?;
        let a = self.rational()?;
        self.expect(',')?;
        let b = self.rational()?;
        self.expect(']')?;
        self.expect(',')?;
        self.expect('[')?;
        let c = self.rational()?;
        self.expect(',')?;
        let d = self.rational()?;
        self.expect(']')?;
        self.expect(']')?;
        Ok(Mat2::new(a, b, c, d))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        rest[..len].to_string()
    }

    /// A matrix given as a literal or a name, if one starts here.
    fn matrix_like(&mut self) -> Result<Option<Mat2>> {
        match self.peek() {
            Some('[') => Ok(Some(self.matrix()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let save = self.pos;
                let name = self.ident();
                if let Some(m) = self.names.get(&name) {
                    return Ok(Some(m.clone()));
                }
                self.pos = save;
                Ok(None)
            }
            _ => Ok(None),
        }
    }

    fn primary(&mut self) -> Result<RatExpr<Label>> {
        if let Some(m) = self.matrix_like()? {
            return Ok(RatExpr::Atom(Label::Mat(m)));
        }
        match self.peek() {
            Some('{') => {
                self.pos += 1;
                self.expect('}')?;
                Ok(RatExpr::Empty)
            }
            Some('(') => {
                self.pos += 1;
                if self.eat(')') {
                    return Ok(RatExpr::one());
                }
                let e = self.rexpr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let save = self.pos;
                let name = self.ident();
                if name == "GL2Z" {
                    return Ok(RatExpr::Atom(Label::Named(NamedSet::Gl2z)));
                }
                let b = name.as_bytes();
                if b.len() == 3 && b[0] == b'M' && matches!(b[1], b'1' | b'2') && matches!(b[2], b'1' | b'2') {
                    self.expect('(')?;
                    let a = self.integer()?;
                    self.expect(')')?;
                    return Ok(RatExpr::Atom(Label::Named(NamedSet::Entry {
                        i: b[1] - b'0',
                        j: b[2] - b'0',
                        a,
                    })));
                }
                self.pos = save;
                self.error(format!("unknown name '{name}'"))
            }
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn starts_primary(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == '[' || c == '(' || c == '{' || c.is_ascii_alphabetic())
    }

    fn postfix(&mut self) -> Result<RatExpr<Label>> {
        let mut e = self.primary()?;
        while self.eat('*') {
            e = RatExpr::star(e);
        }
        Ok(e)
    }

    fn concat(&mut self) -> Result<RatExpr<Label>> {
        let mut items = vec![self.postfix()?];
        while self.starts_primary() {
            items.push(self.postfix()?);
        }
        Ok(RatExpr::concat(items))
    }

    pub fn rexpr(&mut self) -> Result<RatExpr<Label>> {
        let mut items = vec![self.concat()?];
        while self.eat('|') {
            items.push(self.concat()?);
        }
        Ok(RatExpr::union(items))
    }

    fn item(&mut self) -> Result<Item> {
        let save = self.pos;
        if let Some(m) = self.matrix_like()? {
            if self.peek() != Some('*') {
                return Ok(Item::Connector(m));
            }
        }
        self.pos = save;
        Ok(Item::Factor(self.postfix()?))
    }

    fn branch(&mut self) -> Result<Branch> {
        if !self.starts_primary() {
            return self.error("expected a factor or connector");
        }
        let mut factors = Vec::new();
        let mut connectors = Vec::new();
        let mut acc = RatExpr::one();
        while self.starts_primary() {
            match self.item()? {
                Item::Factor(f) => acc = RatExpr::concat(vec![acc, f]),
                Item::Connector(c) => {
                    factors.push(std::mem::replace(&mut acc, RatExpr::one()));
                    connectors.push(c);
                }
            }
        }
        factors.push(acc);
        Ok(Branch { factors, connectors })
    }

    pub fn flat(&mut self) -> Result<FlatExpr> {
        let mut branches = vec![self.branch()?];
        while self.eat('|') {
            branches.push(self.branch()?);
        }
        Ok(FlatExpr { branches })
    }

    fn bool_primary(&mut self) -> Result<BoolComb> {
        self.expect('(')?;
        let save = self.pos;
        if let Ok(f) = self.flat() {
            if self.eat(')') {
                return Ok(BoolComb::Leaf(f));
            }
        }
        self.pos = save;
        let b = self.bool_expr()?;
        self.expect(')')?;
        Ok(b)
    }

    fn bool_term(&mut self) -> Result<BoolComb> {
        let mut acc = self.bool_primary()?;
        loop {
            if self.eat('&') {
                acc = BoolComb::Intersection(Box::new(acc), Box::new(self.bool_primary()?));
            } else if self.eat('\\') {
                acc = BoolComb::Difference(Box::new(acc), Box::new(self.bool_primary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    /// Whole input as a Boolean combination; a plain flat expression is a
    /// single leaf.
    pub fn bool_or_flat(&mut self) -> Result<BoolComb> {
        let save = self.pos;
        if let Ok(f) = self.flat() {
            if self.finish().is_ok() {
                return Ok(BoolComb::Leaf(f));
            }
        }
        self.pos = save;
        let e = self.bool_expr()?;
        self.finish()?;
        Ok(e)
    }

    pub fn bool_expr(&mut self) -> Result<BoolComb> {
        let mut acc = self.bool_term()?;
        while self.eat('|') {
            acc = bool_union(acc, self.bool_term()?);
        }
        Ok(acc)
    }
}

fn bool_union(a: BoolComb, b: BoolComb) -> BoolComb {
    match (a, b) {
        (BoolComb::Leaf(mut x), BoolComb::Leaf(y)) => {
            x.branches.extend(y.branches);
            BoolComb::Leaf(x)
        }
        (a, b) => BoolComb::Union(Box::new(a), Box::new(b)),
    }
}

pub fn parse_matrix(text: &str) -> Result<Mat2> {
    let mut p = Parser::new(text);
    let m = p.matrix_like()?;
    match m {
        Some(m) => {
            p.finish()?;
            Ok(m)
        }
        None => p.error("expected a matrix"),
    }
}

pub fn parse_matrix_list(text: &str) -> Result<Vec<Mat2>> {
    let mut p = Parser::new(text);
    let mut out = Vec::new();
    while !p.at_end() {
        match p.matrix_like()? {
            Some(m) => out.push(m),
            None => return p.error("expected a matrix"),
        }
        p.eat(',');
    }
    Ok(out)
}

pub fn parse_rexpr(text: &str) -> Result<RatExpr<Label>> {
    let mut p = Parser::new(text);
    let e = p.rexpr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_flat(text: &str) -> Result<FlatExpr> {
    let mut p = Parser::new(text);
    let e = p.flat()?;
    p.finish()?;
    Ok(e)
}

/// A Boolean combination; a plain flat expression is read as a leaf.
pub fn parse_bool(text: &str) -> Result<BoolComb> {
    Parser::new(text).bool_or_flat()
}

fn write_rexpr(out: &mut String, e: &RatExpr<Label>, prec: u8) -> fmt::Result {
    // prec: 0 union context, 1 concat item, 2 star operand
    match e {
        RatExpr::Empty => out.write_str("{}"),
        RatExpr::Atom(l) => write!(out, "{l}"),
        RatExpr::Star(b) if **b == RatExpr::Empty => out.write_str("()"),
        RatExpr::Star(b) => {
            write_rexpr(out, b, 2)?;
            out.write_str("*")
        }
        RatExpr::Concat(v) => {
            if prec >= 2 {
                out.write_str("(")?;
            }
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    out.write_str(" ")?;
                }
                write_rexpr(out, x, 1)?;
            }
            if prec >= 2 {
                out.write_str(")")?;
            }
            Ok(())
        }
        RatExpr::Union(v) => {
            if prec >= 1 {
                out.write_str("(")?;
            }
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    out.write_str(" | ")?;
                }
                write_rexpr(out, x, 0)?;
            }
            if prec >= 1 {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

pub fn print_rexpr(e: &RatExpr<Label>) -> String {
    let mut s = String::new();
    write_rexpr(&mut s, e, 0).expect("write to string");
    s
}

pub fn print_flat(e: &FlatExpr) -> String {
    let mut s = String::new();
    for (i, b) in e.branches.iter().enumerate() {
        if i > 0 {
            s.push_str(" | ");
        }
        for (k, f) in b.factors.iter().enumerate() {
            if k > 0 {
                write!(s, " {} ", b.connectors[k - 1]).expect("write to string");
            }
            s.push('(');
            s.push_str(&print_rexpr(f));
            s.push(')');
        }
    }
    s
}

pub fn print_bool(c: &BoolComb) -> String {
    fn go(c: &BoolComb, nested: bool, s: &mut String) {
        match c {
            BoolComb::Leaf(f) => {
                s.push('(');
                s.push_str(&print_flat(f));
                s.push(')');
            }
            BoolComb::Union(a, b) => {
                if nested {
                    s.push('(');
                }
                go(a, false, s);
                s.push_str(" | ");
                go(b, false, s);
                if nested {
                    s.push(')');
                }
            }
            BoolComb::Intersection(a, b) | BoolComb::Difference(a, b) => {
                s.push('(');
                go(a, true, s);
                s.push_str(if matches!(c, BoolComb::Intersection(..)) { " & " } else { " \\ " });
                go(b, true, s);
                s.push(')');
            }
        }
    }
    if let BoolComb::Leaf(f) = c {
        return print_flat(f);
    }
    let mut s = String::new();
    go(c, false, &mut s);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::rat;
    use proptest::prelude::*;

    fn t() -> Mat2 {
        Mat2::from_ints(1, 1, 0, 1)
    }

    #[test]
    fn examples() {
        let e = parse_flat("[[1,1],[0,1]]*").unwrap();
        assert_eq!(e, FlatExpr::single(RatExpr::star(RatExpr::Atom(Label::Mat(t())))));
        let e = parse_flat("([[1,1],[0,1]]* ) [[1,0],[0,2]] (M11(2))").unwrap();
        assert_eq!(e.branches.len(), 1);
        assert_eq!(e.branches[0].connectors, vec![Mat2::diag(rat(1), rat(2))]);
        assert_eq!(
            e.branches[0].factors[1],
            RatExpr::Atom(Label::Named(NamedSet::Entry { i: 1, j: 1, a: BigInt::from(2) }))
        );
        match parse_bool("(T | S) \\ (S)").unwrap() {
            BoolComb::Difference(a, b) => {
                assert!(matches!(*a, BoolComb::Leaf(ref f) if f.branches.len() == 2));
                assert!(matches!(*b, BoolComb::Leaf(_)));
            }
            c => panic!("{c:?}"),
        }
        assert!(matches!(parse_bool("(X) \\ (X)").unwrap(), BoolComb::Difference(..)));
        assert_eq!(parse_matrix("[[1/2, -3],[0, 4/6]]").unwrap(), Mat2::new(rat(1) / rat(2), rat(-3), rat(0), rat(2) / rat(3)));
    }

    #[test]
    fn errors_report_position() {
        match parse_flat("(T)\n  (Q)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            r => panic!("{r:?}"),
        }
        assert!(matches!(parse_matrix("[[1,2],[3]]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("[[1/0,2],[3,4]]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_flat("(T"), Err(Error::Parse { .. })));
    }

    #[test]
    fn definitions() {
        let mut p = Parser::new("A* B");
        p.define("A", Mat2::diag(rat(2), rat(2)));
        p.define("B", Mat2::diag(rat(1), rat(3)));
        let e = p.flat().unwrap();
        assert_eq!(e.branches[0].connectors, vec![Mat2::diag(rat(1), rat(3))]);
    }

    fn arb_mat() -> impl Strategy<Value = Mat2> {
        (-3i64..4, -3i64..4, -3i64..4, -3i64..4, 1i64..3)
            .prop_map(|(a, b, c, d, n)| Mat2::from_ints(a, b, c, d).scale(&(rat(1) / rat(n))))
    }

    fn arb_rexpr() -> impl Strategy<Value = RatExpr<Label>> {
        let leaf = prop_oneof![
            arb_mat().prop_map(|m| RatExpr::Atom(Label::Mat(m))),
            (1u8..3, 1u8..3, -3i64..4)
                .prop_map(|(i, j, a)| RatExpr::Atom(Label::Named(NamedSet::Entry { i, j, a: BigInt::from(a) }))),
            Just(RatExpr::Atom(Label::Named(NamedSet::Gl2z))),
            Just(RatExpr::Empty),
            Just(RatExpr::one()),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(RatExpr::union),
                prop::collection::vec(inner.clone(), 1..4).prop_map(RatExpr::concat),
                inner.prop_map(RatExpr::star),
            ]
        })
    }

    fn arb_flat() -> impl Strategy<Value = FlatExpr> {
        let branch = (arb_rexpr(), prop::collection::vec((arb_mat(), arb_rexpr()), 0..3)).prop_map(|(f0, rest)| {
            let mut b = Branch { factors: vec![f0], connectors: vec![] };
            for (c, f) in rest {
                b.connectors.push(c);
                b.factors.push(f);
            }
            b
        });
        prop::collection::vec(branch, 1..3).prop_map(|branches| FlatExpr { branches })
    }

    fn arb_bool() -> impl Strategy<Value = BoolComb> {
        arb_flat().prop_map(BoolComb::Leaf).prop_recursive(3, 8, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| bool_union(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolComb::Intersection(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| BoolComb::Difference(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn rexpr_round_trip(e in arb_rexpr()) {
            let text = print_rexpr(&e);
            prop_assert_eq!(parse_rexpr(&text).unwrap(), e, "{}", text);
        }

        #[test]
        fn flat_round_trip(e in arb_flat()) {
            let text = print_flat(&e);
            prop_assert_eq!(parse_flat(&text).unwrap(), e, "{}", text);
        }

        #[test]
        fn bool_round_trip(c in arb_bool()) {
            let text = print_bool(&c);
            let once = parse_bool(&text).unwrap();
            prop_assert_eq!(parse_bool(&print_bool(&once)).unwrap(), once);
        }
    }
}
