//! Rational subsets of GL(2,ℤ), represented through the free subgroup
//! `F = ⟨x, y⟩`, `x = [[1,2],[0,1]]`, `y = [[1,0],[2,1]]`, of index 24.
//!
//! A [`GlzRat`] keeps one reduced-language word automaton per left coset
//! `u·F`; component `u` denotes `{w : u·ϕ(w) ∈ L}`.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::automata::{expr_to_nfa, Label, LabeledNfa, NamedSet, RatExpr};
use crate::commensurator::{CosetTable, SubgroupTest};
use crate::error::{Error, Limits, Result};
use crate::exact_linear::Mat2;
use crate::free_rat::{fg_boolean, fg_member, reduce_word, BoolOp, Letter, ReducedWord, WordNfa};

/// S, T, J in table order.
pub fn generators() -> [Mat2; 3] {
    [
        Mat2::from_ints(0, -1, 1, 0),
        Mat2::from_ints(1, 1, 0, 1),
        Mat2::from_ints(1, 0, 0, -1),
    ]
}

pub fn letter_matrix(l: Letter) -> Mat2 {
    match l {
        Letter::X => Mat2::from_ints(1, 2, 0, 1),
        Letter::XInv => Mat2::from_ints(1, -2, 0, 1),
        Letter::Y => Mat2::from_ints(1, 0, 2, 1),
        Letter::YInv => Mat2::from_ints(1, 0, -2, 1),
    }
}

/// `ϕ(w)`.
pub fn phi(w: &[Letter]) -> Mat2 {
    w.iter()
        .fold(Mat2::identity(), |acc, &l| acc.mul(&letter_matrix(l)))
}

fn power(l: Letter, n: &BigInt, out: &mut Vec<Letter>) {
    let (l, n) = if n.is_negative() { (l.inverse(), -n) } else { (l, n.clone()) };
    let mut k = BigInt::zero();
    while k < n {
        out.push(l);
        k += 1;
    }
}

/// `n` minimizing `|a − 2nc|`, for `c ≠ 0`.
fn nearest(a: &BigInt, c: &BigInt) -> BigInt {
    let two_c = c * 2;
    let n0 = a.div_floor(&two_c);
    let n1: BigInt = &n0 + 1;
    if (a - &n0 * &two_c).abs() <= (a - &n1 * &two_c).abs() {
        n0
    } else {
        n1
    }
}

/// For `h ∈ ±F`, the sign and the reduced word of `±h`.
fn ping_pong(h: &Mat2) -> Option<(bool, ReducedWord)> {
    let [a, b, c, d] = h.int_entries()?;
    if &a * &d - &b * &c != BigInt::one() {
        return None;
    }
    let two = BigInt::from(2);
    if a.is_even() || d.is_even() || b.is_odd() || c.is_odd() {
        return None;
    }
    let (mut a, mut b, mut c, mut d) = (a, b, c, d);
    let mut word = Vec::new();
    while !c.is_zero() {
        if a.abs() > c.abs() {
            // x^{-n} h
            let n = nearest(&a, &c);
            a -= &n * &c * &two;
            b -= &n * &d * &two;
            power(Letter::X, &n, &mut word);
        } else {
            // y^{-n} h
            let n = nearest(&c, &a);
            c -= &n * &a * &two;
            d -= &n * &b * &two;
            power(Letter::Y, &n, &mut word);
        }
    }
    let positive = a.is_one();
    let k = if positive { b } else { -b };
    power(Letter::X, &(k / 2), &mut word);
    Some((positive, reduce_word(&word)))
}

pub fn in_free_subgroup(h: &Mat2) -> bool {
    matches!(ping_pong(h), Some((true, _)))
}

/// Reduced word of an element of `F`.
pub fn free_word(h: &Mat2) -> Result<ReducedWord> {
    match ping_pong(h) {
        Some((true, w)) => Ok(w),
        _ => Err(Error::NotInSubgroup),
    }
}

static SANOV_TABLE: LazyLock<CosetTable> =
    LazyLock::new(|| CosetTable::build(SubgroupTest::Sanov, 64).expect("index 24"));

/// Left cosets of `F` in GL(2,ℤ).
pub fn sanov_table() -> &'static CosetTable {
    &SANOV_TABLE
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlzElement {
    pub coset_index: usize,
    pub word: ReducedWord,
}

impl GlzElement {
    pub fn reconstruct(&self) -> Mat2 {
        sanov_table().rep(self.coset_index).mul(&phi(self.word.letters()))
    }
}

pub fn sanov_decompose(g: &Mat2) -> Result<GlzElement> {
    if !g.is_gl2z() {
        return Err(Error::NotInGl2z(g.to_string()));
    }
    let table = sanov_table();
    let i = table.coset_of(g).expect("table covers GL(2,Z)");
    Ok(GlzElement {
        coset_index: i,
        word: free_word(&table.rep_inv(i).mul(g))?,
    })
}

/// Language-preserving automaton whose labels lie in the subgroup of `sub`.
/// Fails with `NotInSubgroup` if some accepted product lies outside it.
pub fn silva_rewrite(a: &LabeledNfa<Mat2>, sub: &CosetTable) -> Result<LabeledNfa<Mat2>> {
    let (ann, inits) = sub.annotate(a)?;
    let finals: Vec<usize> = ann.finals().iter().copied().collect();
    for init in &inits[1..] {
        if !ann.with_endpoints(init, &finals).is_empty() {
            return Err(Error::NotInSubgroup);
        }
    }
    Ok(ann.with_endpoints(&inits[0], &finals).trim())
}

/// Rational subset of GL(2,ℤ): one reduced-language word automaton per coset
/// of the free subgroup.
#[derive(Clone, Debug)]
pub struct GlzRat {
    components: Vec<WordNfa>,
}

impl GlzRat {
    pub fn empty() -> GlzRat {
        GlzRat {
            components: vec![WordNfa::empty(); sanov_table().len()],
        }
    }

    pub fn components(&self) -> &[WordNfa] {
        &self.components
    }

    pub fn from_nfa(a: &LabeledNfa<Mat2>, limits: &Limits) -> Result<GlzRat> {
        let (ann, inits) = sanov_table().annotate(a)?;
        let finals: Vec<usize> = ann.finals().iter().copied().collect();
        let mut components = Vec::with_capacity(inits.len());
        for init in &inits {
            let part = ann.with_endpoints(init, &finals).trim();
            let words = part.expand_labels(|b| free_word(b).expect("label in F").letters().to_vec());
            components.push(WordNfa::new(words).normalized(limits)?);
        }
        Ok(GlzRat { components })
    }

    /// Automaton over matrix labels denoting the same set.
    pub fn to_nfa(&self) -> LabeledNfa<Mat2> {
        let table = sanov_table();
        let mut out = LabeledNfa::with_states(1);
        out.set_initial(0);
        for (i, c) in self.components.iter().enumerate() {
            if c.is_empty() {
                continue;
            }
            let part = c.nfa.map_labels(|&l| letter_matrix(l));
            let off = out.num_states();
            for _ in 0..part.num_states() {
                out.add_state();
            }
            for t in part.transitions() {
                out.add_transition(t.from + off, t.label.clone(), t.to + off);
            }
            for &f in part.finals() {
                out.set_final(f + off);
            }
            let rep = table.rep(i);
            for &s in part.initial() {
                let label = if rep.is_identity() { None } else { Some(rep.clone()) };
                out.add_transition(0, label, s + off);
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.is_empty())
    }

    pub fn contains(&self, g: &Mat2) -> Result<bool> {
        glz_member(g, self)
    }
}

pub fn glz_from_expr(e: &RatExpr<Mat2>, limits: &Limits) -> Result<GlzRat> {
    GlzRat::from_nfa(&expr_to_nfa(e), limits)
}

pub fn glz_from_labels(e: &RatExpr<Label>, limits: &Limits) -> Result<GlzRat> {
    glz_from_expr(&expand_named(e), limits)
}

pub fn glz_boolean(op: BoolOp, a: &GlzRat, b: &GlzRat, limits: &Limits) -> Result<GlzRat> {
    let components = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| fg_boolean(op, x, y, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(GlzRat { components })
}

pub fn glz_member(g: &Mat2, a: &GlzRat) -> Result<bool> {
    let el = sanov_decompose(g)?;
    fg_member(&el.word, &a.components[el.coset_index], &Limits::default())
}

/// `m^ℤ` as `m* (m⁻¹)*`.
pub fn z_power(m: &Mat2) -> RatExpr<Mat2> {
    RatExpr::concat(vec![
        RatExpr::star(RatExpr::Atom(m.clone())),
        RatExpr::star(RatExpr::Atom(m.inverse().expect("invertible"))),
    ])
}

pub fn gl2z_expr() -> RatExpr<Mat2> {
    RatExpr::star(RatExpr::union(
        generators().into_iter().map(RatExpr::Atom).collect(),
    ))
}

fn swap() -> Mat2 {
    Mat2::from_ints(0, 1, 1, 0)
}

/// `M_11(a)`.
fn m11_expr(a: &BigInt) -> RatExpr<Mat2> {
    let t = Mat2::from_ints(1, 1, 0, 1);
    if a.is_zero() {
        return RatExpr::concat(vec![RatExpr::Atom(swap()), m21_zero()]);
    }
    let lower = Mat2::from_ints(1, 0, 1, 1);
    let n = a.abs();
    let mut pieces = Vec::new();
    let mut b0 = BigInt::zero();
    while b0 < n {
        let mut c0 = BigInt::zero();
        while c0 < n {
            let bc = &b0 * &c0;
            for num in [&bc + 1, &bc - 1] as [BigInt; 2] {
                if Integer::is_multiple_of(&num, a) {
                    let center = Mat2::from_bigints([a.clone(), b0.clone(), c0.clone(), num / a]);
                    pieces.push(RatExpr::concat(vec![
                        z_power(&lower),
                        RatExpr::Atom(center),
                        z_power(&t),
                    ]));
                }
            }
            c0 += 1;
        }
        b0 += 1;
    }
    RatExpr::union(pieces)
}

/// `M_21(0) = {±I, ±J}·T^ℤ`.
fn m21_zero() -> RatExpr<Mat2> {
    let signs = [
        Mat2::identity(),
        Mat2::from_ints(-1, 0, 0, -1),
        Mat2::from_ints(1, 0, 0, -1),
        Mat2::from_ints(-1, 0, 0, 1),
    ];
    RatExpr::concat(vec![
        RatExpr::union(signs.into_iter().map(RatExpr::Atom).collect()),
        z_power(&Mat2::from_ints(1, 1, 0, 1)),
    ])
}

/// `M_ij(a)` as an expression over GL(2,ℤ) atoms.
pub fn entry_expr(i: u8, j: u8, a: &BigInt) -> RatExpr<Mat2> {
    let p = || RatExpr::Atom(swap());
    let base = m11_expr(a);
    match (i, j) {
        (1, 1) => base,
        (1, 2) => RatExpr::concat(vec![base, p()]),
        (2, 1) if a.is_zero() => m21_zero(),
        (2, 1) => RatExpr::concat(vec![p(), base]),
        (2, 2) => RatExpr::concat(vec![p(), base, p()]),
        _ => panic!("entry index out of range"),
    }
}

pub fn named_set_expr(n: &NamedSet) -> RatExpr<Mat2> {
    match n {
        NamedSet::Gl2z => gl2z_expr(),
        NamedSet::Entry { i, j, a } => entry_expr(*i, *j, a),
    }
}

/// Replace named-set atoms by their expressions.
pub fn expand_named(e: &RatExpr<Label>) -> RatExpr<Mat2> {
    e.map_atoms(&mut |l| match l {
        Label::Mat(m) => RatExpr::Atom(m.clone()),
        Label::Named(n) => named_set_expr(n),
    })
}

pub fn entry_set(i: u8, j: u8, a: &BigInt, limits: &Limits) -> Result<GlzRat> {
    if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
        return Err(Error::Unsupported(format!("entry index ({i},{j})")));
    }
    glz_from_expr(&entry_expr(i, j, a), limits)
}
