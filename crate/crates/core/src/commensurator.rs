//! Finite-index subgroups of GL(2,ℤ) given by a membership test, their left
//! coset tables, and the subgroups `H_g = {h ∈ H : g⁻¹hg ∈ H}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::automata::LabeledNfa;
use crate::error::{Error, Limits, Result};
use crate::exact_linear::{factorize, smith_normal_form, Mat2};
use crate::glz_rat::{generators, in_free_subgroup, GlzRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupTest {
    /// The free subgroup generated by `[[1,2],[0,1]]` and `[[1,0],[2,1]]`.
    Sanov,
    /// `H_g`: elements `h` of GL(2,ℤ) with `g⁻¹hg` in GL(2,ℤ).
    Conjugate { g: Mat2, g_inv: Mat2 },
}

impl SubgroupTest {
    pub fn contains(&self, h: &Mat2) -> bool {
        match self {
            SubgroupTest::Sanov => in_free_subgroup(h),
            SubgroupTest::Conjugate { g, g_inv } => h.is_gl2z() && g_inv.mul(h).mul(g).is_gl2z(),
        }
    }
}

/// Left cosets `u·H'` of a finite-index subgroup `H'` of GL(2,ℤ).
#[derive(Clone, Debug)]
pub struct CosetTable {
    test: SubgroupTest,
    reps: Vec<Mat2>,
    reps_inv: Vec<Mat2>,
    /// `action[i][k]`: coset of `generators()[k] · reps[i]`.
    action: Vec<[usize; 3]>,
}

impl CosetTable {
    /// Breadth-first enumeration from the identity under left
    /// multiplication by S, T, J.
    pub fn build(test: SubgroupTest, budget: usize) -> Result<CosetTable> {
        let gens = generators();
        let mut table = CosetTable {
            test,
            reps: vec![Mat2::identity()],
            reps_inv: vec![Mat2::identity()],
            action: Vec::new(),
        };
        let mut i = 0;
        while i < table.reps.len() {
            let mut row = [0usize; 3];
            for (k, s) in gens.iter().enumerate() {
                let cand = s.mul(&table.reps[i]);
                row[k] = match table.coset_of(&cand) {
                    Some(j) => j,
                    None => {
                        if table.reps.len() >= budget {
                            return Err(Error::ResourceLimit {
                                what: "coset representatives",
                                limit: budget,
                            });
                        }
                        table.reps_inv.push(cand.inverse()?);
                        table.reps.push(cand);
                        table.reps.len() - 1
                    }
                };
            }
            table.action.push(row);
            i += 1;
        }
        Ok(table)
    }

    pub fn test(&self) -> &SubgroupTest {
        &self.test
    }

    pub fn reps(&self) -> &[Mat2] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }

    pub fn rep_inv(&self, i: usize) -> &Mat2 {
        &self.reps_inv[i]
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn action(&self, i: usize, generator: usize) -> usize {
        self.action[i][generator]
    }

    pub fn contains(&self, h: &Mat2) -> bool {
        self.test.contains(h)
    }

    /// Index `i` with `h ∈ reps[i]·H'`.
    pub fn coset_of(&self, h: &Mat2) -> Option<usize> {
        (0..self.reps.len()).find(|&i| self.test.contains(&self.reps_inv[i].mul(h)))
    }

    /// Split an automaton with GL(2,ℤ) labels along the cosets.
    ///
    /// States become pairs `(q, i)`; a path from `(p, i)` to a final
    /// `(f, 0)` reads labels in `H'` whose product `b` satisfies
    /// `h = reps[i]·b` for the original product `h`. Returned: the
    /// automaton (no initial states) and the initial states per coset.
    pub fn annotate(&self, a: &LabeledNfa<Mat2>) -> Result<(LabeledNfa<Mat2>, Vec<Vec<usize>>)> {
        let a = a.trim();
        let k = self.reps.len();
        let id = |q: usize, i: usize| q * k + i;
        let mut out = LabeledNfa::with_states(a.num_states() * k);
        let mut cache: HashMap<Mat2, usize> = HashMap::new();
        for t in a.transitions() {
            match &t.label {
                None => {
                    for i in 0..k {
                        out.add_transition(id(t.from, i), None, id(t.to, i));
                    }
                }
                Some(h) => {
                    if !h.is_gl2z() {
                        return Err(Error::NotInGl2z(h.to_string()));
                    }
                    for j in 0..k {
                        let hu = h.mul(&self.reps[j]);
                        let i = match cache.get(&hu) {
                            Some(&i) => i,
                            None => {
                                let i = self.coset_of(&hu).ok_or_else(|| {
                                    Error::Unsupported("coset table is not closed".into())
                                })?;
                                cache.insert(hu.clone(), i);
                                i
                            }
                        };
                        let b = self.reps_inv[i].mul(&hu);
                        out.add_transition(id(t.from, i), Some(b), id(t.to, j));
                    }
                }
            }
        }
        for &f in a.finals() {
            out.set_final(id(f, 0));
        }
        let inits = (0..k)
            .map(|i| a.initial().iter().map(|&q| id(q, i)).collect())
            .collect();
        Ok((out, inits))
    }
}

/// `|SL(2, ℤ/qℤ)| = q³ ∏_{p | q} (1 − 1/p²)`, or `None` when `q` cannot be
/// factored by trial division up to `bound`.
pub fn sl2_order(q: &BigInt, bound: u64) -> Option<BigInt> {
    let q = q.abs();
    if q.is_one() {
        return Some(BigInt::one());
    }
    let fac = factorize(&q, bound)?;
    let mut n = &q * &q * &q;
    for (p, _) in fac {
        n = n / (&p * &p) * (&p * &p - 1);
    }
    Some(n)
}

pub fn hg_test(h: &Mat2, g: &Mat2) -> Result<bool> {
    if !h.is_gl2z() {
        return Err(Error::NotInGl2z(h.to_string()));
    }
    let g_inv = g.inverse()?;
    Ok(g_inv.mul(h).mul(g).is_gl2z())
}

/// Left coset representatives of `H_g` in GL(2,ℤ).
pub fn hg_coset_reps(g: &Mat2, limits: &Limits) -> Result<CosetTable> {
    let g_inv = g.inverse()?;
    let budget = match limits.cosets {
        Some(b) => b,
        None => {
            let q = smith_normal_form(g)?.q;
            sl2_order(&q, 1 << 20)
                .and_then(|n| (n * BigInt::from(4)).to_usize())
                .unwrap_or(usize::MAX)
        }
    };
    CosetTable::build(
        SubgroupTest::Conjugate {
            g: g.clone(),
            g_inv,
        },
        budget,
    )
}

fn conjugate_labels(a: &LabeledNfa<Mat2>, g: &Mat2, g_inv: &Mat2) -> LabeledNfa<Mat2> {
    a.map_labels(|b| g_inv.mul(b).mul(g))
}

/// `g⁻¹ (L ∩ H_g) g` as a rational subset of GL(2,ℤ).
pub fn conjugate_rat(l: &GlzRat, g: &Mat2, limits: &Limits) -> Result<GlzRat> {
    let table = hg_coset_reps(g, limits)?;
    let g_inv = g.inverse()?;
    let (ann, inits) = table.annotate(&l.to_nfa())?;
    let finals: Vec<usize> = ann.finals().iter().copied().collect();
    let part = ann.with_endpoints(&inits[0], &finals).trim();
    GlzRat::from_nfa(&conjugate_labels(&part, g, &g_inv), limits)
}

/// Rewrite `K·g` as a union of `g'·K'` with `K'` rational in GL(2,ℤ).
/// Empty parts are dropped.
pub fn push_right(k: &GlzRat, g: &Mat2, limits: &Limits) -> Result<Vec<(Mat2, GlzRat)>> {
    push_right_nfa(&k.to_nfa(), g, limits)
}

pub(crate) fn push_right_nfa(
    k: &LabeledNfa<Mat2>,
    g: &Mat2,
    limits: &Limits,
) -> Result<Vec<(Mat2, GlzRat)>> {
    let table = hg_coset_reps(g, limits)?;
    let g_inv = g.inverse()?;
    let (ann, inits) = table.annotate(k)?;
    let finals: Vec<usize> = ann.finals().iter().copied().collect();
    let mut out = Vec::new();
    for (i, init) in inits.iter().enumerate() {
        let part = ann.with_endpoints(init, &finals).trim();
        if part.is_empty() {
            continue;
        }
        let kp = GlzRat::from_nfa(&conjugate_labels(&part, g, &g_inv), limits)?;
        if !kp.is_empty() {
            out.push((table.rep(i).mul(g), kp));
        }
    }
    Ok(out)
}

/// Same as [`push_right_nfa`] but keeps the parts as automata.
pub(crate) fn push_right_parts(
    k: &LabeledNfa<Mat2>,
    g: &Mat2,
    limits: &Limits,
) -> Result<Vec<(Mat2, LabeledNfa<Mat2>)>> {
    let table = hg_coset_reps(g, limits)?;
    let g_inv = g.inverse()?;
    let (ann, inits) = table.annotate(k)?;
    let finals: Vec<usize> = ann.finals().iter().copied().collect();
    let mut out = Vec::new();
    for (i, init) in inits.iter().enumerate() {
        let part = ann.with_endpoints(init, &finals).trim();
        if !part.is_empty() {
            out.push((table.rep(i).mul(g), conjugate_labels(&part, g, &g_inv)));
        }
    }
    Ok(out)
}

/// Index of `H_g ∩ SL(2,ℤ)` in SL(2,ℤ), by enumerating cosets under S and T.
pub fn sl_index(g: &Mat2, budget: usize) -> Result<usize> {
    let g_inv = g.inverse()?;
    let test = SubgroupTest::Conjugate {
        g: g.clone(),
        g_inv,
    };
    let gens = &generators()[..2];
    let mut reps = vec![Mat2::identity()];
    let mut inv = vec![Mat2::identity()];
    let mut i = 0;
    while i < reps.len() {
        for s in gens {
            let cand = s.mul(&reps[i]);
            if !(0..reps.len()).any(|j| test.contains(&inv[j].mul(&cand))) {
                if reps.len() >= budget {
                    return Err(Error::ResourceLimit {
                        what: "coset representatives",
                        limit: budget,
                    });
                }
                inv.push(cand.inverse()?);
                reps.push(cand);
            }
        }
        i += 1;
    }
    Ok(reps.len())
}
