//! Exact rational 2×2 matrices, Smith normal forms, label classes and
//! canonical representatives of left cosets `g·GL(2,ℤ)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A 2×2 matrix over ℚ, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a11: Rational,
    pub a12: Rational,
    pub a21: Rational,
    pub a22: Rational,
}

impl Mat2 {
    pub fn new(a11: Rational, a12: Rational, a21: Rational, a22: Rational) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn from_ints(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Mat2::new(rat(a11), rat(a12), rat(a21), rat(a22))
    }

    pub fn from_bigints(e: [BigInt; 4]) -> Self {
        let [a, b, c, d] = e;
        Mat2::new(
            Rational::from_integer(a),
            Rational::from_integer(b),
            Rational::from_integer(c),
            Rational::from_integer(d),
        )
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        Mat2::from_ints(0, 0, 0, 0)
    }

    pub fn diag(a: Rational, d: Rational) -> Self {
        Mat2::new(a, Rational::zero(), Rational::zero(), d)
    }

    pub fn scalar(r: Rational) -> Self {
        Mat2::diag(r.clone(), r)
    }

    /// `s_q = diag(1, q)`.
    pub fn s_q(q: &BigInt) -> Self {
        Mat2::diag(Rational::one(), Rational::from_integer(q.clone()))
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    /// Entry `g_ij` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        match (i, j) {
            (1, 1) => &self.a11,
            (1, 2) => &self.a12,
            (2, 1) => &self.a21,
            (2, 2) => &self.a22,
            _ => panic!("entry index ({i},{j}) out of range"),
        }
    }

    pub fn det(&self) -> Rational {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integer())
    }

    pub fn is_central(&self) -> bool {
        self.a12.is_zero() && self.a21.is_zero() && self.a11 == self.a22
    }

    pub fn is_gl2z(&self) -> bool {
        self.is_integral() && self.det().abs().is_one()
    }

    /// Integer entries, or `None` if some entry is not an integer.
    pub fn int_entries(&self) -> Option<[BigInt; 4]> {
        if !self.is_integral() {
            return None;
        }
        Some([
            self.a11.to_integer(),
            self.a12.to_integer(),
            self.a21.to_integer(),
            self.a22.to_integer(),
        ])
    }

    pub fn mul(&self, b: &Mat2) -> Mat2 {
        mat_mul(self, b)
    }

    pub fn scale(&self, r: &Rational) -> Mat2 {
        Mat2::new(&self.a11 * r, &self.a12 * r, &self.a21 * r, &self.a22 * r)
    }

    pub fn neg(&self) -> Mat2 {
        self.scale(&rat(-1))
    }

    pub fn inverse(&self) -> Result<Mat2> {
        mat_inverse(self)
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        let mut acc = Mat2::identity();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Positive rational `c` and primitive integer matrix `A` with `self = c·A`.
    /// Requires a nonzero matrix.
    pub fn content_split(&self) -> (Rational, [BigInt; 4]) {
        let den = self
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let ints: Vec<BigInt> = self
            .entries()
            .iter()
            .map(|e| (e.numer() * &den) / e.denom())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        debug_assert!(!g.is_zero());
        let prim = [&ints[0] / &g, &ints[1] / &g, &ints[2] / &g, &ints[3] / &g];
        (Rational::new(g, den), prim)
    }
}

fn fmt_rat(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        fmt_rat(&self.a11, f)?;
        f.write_str(",")?;
        fmt_rat(&self.a12, f)?;
        f.write_str("],[")?;
        fmt_rat(&self.a21, f)?;
        f.write_str(",")?;
        fmt_rat(&self.a22, f)?;
        f.write_str("]]")
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    Mat2::new(
        &a.a11 * &b.a11 + &a.a12 * &b.a21,
        &a.a11 * &b.a12 + &a.a12 * &b.a22,
        &a.a21 * &b.a11 + &a.a22 * &b.a21,
        &a.a21 * &b.a12 + &a.a22 * &b.a22,
    )
}

pub fn mat_inverse(a: &Mat2) -> Result<Mat2> {
    let d = a.det();
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let inv = d.recip();
    Ok(Mat2::new(
        &a.a22 * &inv,
        -(&a.a12 * &inv),
        -(&a.a21 * &inv),
        &a.a11 * &inv,
    ))
}

/// `g = r·e·s_q·f` with `r > 0` and `e, f ∈ SL(2,ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub r: Rational,
    pub e: Mat2,
    pub q: BigInt,
    pub f: Mat2,
}

impl SmithForm {
    pub fn reconstruct(&self) -> Mat2 {
        self.e
            .mul(&Mat2::s_q(&self.q))
            .mul(&self.f)
            .scale(&self.r)
    }
}

// Integer 2×2 matrix used by the reductions below; row-major [a, b, c, d].
type IMat = [BigInt; 4];

fn imul(x: &IMat, y: &IMat) -> IMat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

fn iid() -> IMat {
    [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()]
}

fn ielem(a: i64, b: i64, c: i64, d: i64) -> IMat {
    [a.into(), b.into(), c.into(), d.into()]
}

fn iunip_upper(k: &BigInt) -> IMat {
    [BigInt::one(), k.clone(), BigInt::zero(), BigInt::one()]
}

fn iunip_lower(k: &BigInt) -> IMat {
    [BigInt::one(), BigInt::zero(), k.clone(), BigInt::one()]
}

/// Tracks `A = E·M·F` while `M` is reduced by SL(2,ℤ) row and column moves.
struct Reducer {
    m: IMat,
    e: IMat,
    f: IMat,
}

impl Reducer {
    // M <- R·M, E <- E·R^{-1}
    fn row(&mut self, r: IMat, r_inv: IMat) {
        self.m = imul(&r, &self.m);
        self.e = imul(&self.e, &r_inv);
    }

    // M <- M·C, F <- C^{-1}·F
    fn col(&mut self, c: IMat, c_inv: IMat) {
        self.m = imul(&self.m, &c);
        self.f = imul(&c_inv, &self.f);
    }

    /// Clears `m21` by Euclid on the first column.
    fn clear_first_column(&mut self) {
        while !self.m[2].is_zero() {
            if self.m[0].is_zero() {
                // swap rows with sign: [[0,1],[-1,0]]
                self.row(ielem(0, 1, -1, 0), ielem(0, -1, 1, 0));
                continue;
            }
            let k = self.m[2].div_floor(&self.m[0]);
            // row2 -= k·row1
            self.row(iunip_lower(&-&k), iunip_lower(&k));
            if !self.m[2].is_zero() {
                self.row(ielem(0, 1, -1, 0), ielem(0, -1, 1, 0));
            }
        }
    }

    /// Clears `m12` by Euclid on the first row.
    fn clear_first_row(&mut self) {
        while !self.m[1].is_zero() {
            if self.m[0].is_zero() {
                self.col(ielem(0, -1, 1, 0), ielem(0, 1, -1, 0));
                continue;
            }
            let k = self.m[1].div_floor(&self.m[0]);
            // col2 -= k·col1
            self.col(iunip_upper(&-&k), iunip_upper(&k));
            if !self.m[1].is_zero() {
                self.col(ielem(0, -1, 1, 0), ielem(0, 1, -1, 0));
            }
        }
    }
}

fn to_mat(m: &IMat) -> Mat2 {
    Mat2::from_bigints(m.clone())
}

pub fn smith_normal_form(g: &Mat2) -> Result<SmithForm> {
    if g.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let (r, prim) = g.content_split();
    let mut red = Reducer {
        m: prim,
        e: iid(),
        f: iid(),
    };
    loop {
        red.clear_first_column();
        red.clear_first_row();
        if red.m[2].is_zero() && red.m[1].is_zero() {
            if red.m[3].is_zero() || red.m[3].is_multiple_of(&red.m[0]) {
                break;
            }
            // m11 does not divide m22: row1 += row2 and repeat
            red.row(iunip_upper(&BigInt::one()), iunip_upper(&-BigInt::one()));
        }
    }
    // primitive input: m11 = ±1 and m11 | m22
    if red.m[0].is_negative() {
        red.row(ielem(-1, 0, 0, -1), ielem(-1, 0, 0, -1));
    }
    debug_assert!(red.m[0].is_one());
    let q = red.m[3].clone();
    Ok(SmithForm {
        r,
        e: to_mat(&red.e),
        q,
        f: to_mat(&red.f),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelClass {
    Identity,
    Gl2z,
    /// `r·I` with `r ∈ ℕ`, `r ≥ 2` (r = 1 is `Identity`).
    CentralNatural,
    /// `r·I` with `r > 0` rational and not natural.
    CentralRational,
    ZeroMatrix,
    /// det 0, integer entries, nonzero.
    SingularInteger,
    DetAbsGreaterOne,
    /// Everything else, including non-integral singular matrices.
    OtherGl2q,
}

pub fn classify_label(g: &Mat2) -> LabelClass {
    if g.is_identity() {
        LabelClass::Identity
    } else if g.is_gl2z() {
        LabelClass::Gl2z
    } else if g.is_central() && g.a11.is_integer() && g.a11.is_positive() {
        LabelClass::CentralNatural
    } else if g.is_central() && g.a11.is_positive() {
        LabelClass::CentralRational
    } else if g.is_zero() {
        LabelClass::ZeroMatrix
    } else if g.det().is_zero() && g.is_integral() {
        LabelClass::SingularInteger
    } else if g.det().abs() > Rational::one() {
        LabelClass::DetAbsGreaterOne
    } else {
        LabelClass::OtherGl2q
    }
}

/// Canonical representative `s·HNF(A)` of the coset `g·GL(2,ℤ)`, where
/// `g = s·A` with `A` primitive and `HNF(A) = [[a,0],[c,d]]`, `a,d > 0`,
/// `0 ≤ c < d`.
pub fn coset_canonical(g: &Mat2) -> Result<Mat2> {
    Ok(coset_canonical_with_residue(g)?.0)
}

/// Returns `(c, h)` with `c = coset_canonical(g)` and `h = c⁻¹·g ∈ GL(2,ℤ)`.
pub fn coset_canonical_with_residue(g: &Mat2) -> Result<(Mat2, Mat2)> {
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (s, prim) = g.content_split();
    let mut red = Reducer {
        m: prim,
        e: iid(),
        f: iid(),
    };
    // column moves only; `f` accumulates the inverse of the column transform
    red.clear_first_row();
    if red.m[0].is_negative() {
        red.col(ielem(-1, 0, 0, 1), ielem(-1, 0, 0, 1));
    }
    if red.m[3].is_negative() {
        red.col(ielem(1, 0, 0, -1), ielem(1, 0, 0, -1));
    }
    let k = red.m[2].div_floor(&red.m[3]);
    // col1 -= k·col2
    red.col(iunip_lower(&-&k), iunip_lower(&k));
    debug_assert!(red.e == iid());
    // A = M·F, so g = s·M·F and the residue is F.
    Ok((to_mat(&red.m).scale(&s), to_mat(&red.f)))
}

/// Trial-division factorisation of a positive integer; `None` if a cofactor
/// above `bound²` remains unresolved.
pub fn factorize(n: &BigInt, bound: u64) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Some(out);
    }
    let mut p: u64 = 2;
    while p <= bound {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let bb = BigInt::from(bound) * BigInt::from(bound);
        if n > bb && BigInt::from(p) * BigInt::from(p) <= n {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// All signed divisors of a nonzero integer, ordered by absolute value
/// (positive first).
pub fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    for d in positive_divisors(n) {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

pub fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}
