//! Classification of finitely generated groups `GL(2,ℤ) < G ≤ GL(2,ℚ)`:
//! either `G ≅ GL(2,ℤ) × ℤᵏ` or `G` contains a Baumslag–Solitar group
//! `BS(1, q)` with `q ≥ 2`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linear::{factorize, smith_normal_form, Mat2, Rational};

/// Default trial division bound for [`lattice_rank`].
pub const FACTOR_BOUND: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DichotomyResult {
    DirectProduct { k: usize },
    /// `t·b·t⁻¹ = b^q`.
    ContainsBS { q: BigInt, b: Mat2, t: Mat2 },
}

pub fn classify_extension(generators: &[Mat2]) -> Result<DichotomyResult> {
    classify_extension_bounded(generators, FACTOR_BOUND)
}

pub fn classify_extension_bounded(generators: &[Mat2], bound: u64) -> Result<DichotomyResult> {
    let mut scalars = Vec::new();
    let mut proper = false;
    for g in generators {
        let snf = smith_normal_form(g)?;
        if snf.q.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let q = snf.q.abs();
        if !q.is_one() {
            let b = Mat2::from_ints(1, 0, 1, 1);
            let t = Mat2::diag(snf.r.clone(), snf.r.clone() * Rational::from_integer(q.clone()));
            let lhs = t.mul(&b).mul(&t.inverse()?);
            let rhs = Mat2::from_bigints([BigInt::one(), BigInt::zero(), q.clone(), BigInt::one()]);
            assert_eq!(lhs, rhs, "Baumslag–Solitar relation");
            return Ok(DichotomyResult::ContainsBS { q, b, t });
        }
        if !snf.r.is_one() {
            proper = true;
        }
        scalars.push(snf.r.abs());
    }
    if !proper {
        return Err(Error::NotAnExtension);
    }
    Ok(DichotomyResult::DirectProduct {
        k: lattice_rank(&scalars, bound)?,
    })
}

/// Rank of the lattice spanned by the prime exponent vectors of positive
/// rationals.
pub fn lattice_rank(scalars: &[Rational], bound: u64) -> Result<usize> {
    let mut columns: BTreeMap<BigInt, usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<usize, i64>> = Vec::new();
    for s in scalars {
        let mut row = BTreeMap::new();
        for (part, sign) in [(s.numer(), 1i64), (s.denom(), -1i64)] {
            let f = factorize(part, bound).ok_or(Error::ResourceLimit {
                what: "trial division bound",
                limit: bound as usize,
            })?;
            for (p, e) in f {
                let n = columns.len();
                let c = *columns.entry(p).or_insert(n);
                *row.entry(c).or_insert(0) += sign * e as i64;
            }
        }
        rows.push(row);
    }
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            (0..columns.len())
                .map(|c| Rational::from_integer(BigInt::from(*r.get(&c).unwrap_or(&0))))
                .collect()
        })
        .collect();
    Ok(rank(&mut m))
}

fn rank(m: &mut [Vec<Rational>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
    }
    r
}
