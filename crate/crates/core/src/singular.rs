//! Membership of singular matrices in flat rational sets over the monoids
//! `P` (zero target) and `P′` (any singular target).
//!
//! Labels are split into GL(2,ℤ) parts, natural scalars and `s₀ = diag(1,0)`.
//! The identity `s₀·M·s₀ = M₁₁·s₀` lets every accepting path collapse to
//! `f₁·(r·s₀)·f₂`, which is then matched entry by entry against the target.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::automata::{expr_to_nfa, LabeledNfa, RatExpr};
use crate::error::{Error, Limits, Result};
use crate::exact_linear::{positive_divisors, signed_divisors, smith_normal_form, Mat2, Rational};
use crate::flat_rat::{flo_member, normalize_flat, Branch, FlatExpr, Monoid};
use crate::free_rat::BoolOp;
use crate::glz_rat::{entry_set, expand_named, glz_boolean, GlzRat};

/// Transition kinds after splitting labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularEdge {
    Gl(Mat2),
    /// Central `diag(n, n)` with `n ≥ 2`.
    Scalar(BigInt),
    /// `diag(1, 0)`.
    S0,
    /// The zero matrix.
    Zero,
}

fn push_gl(out: &mut Vec<SingularEdge>, h: Mat2) {
    if !h.is_identity() {
        out.push(SingularEdge::Gl(h));
    }
}

/// Split a label of `P′`; the zero matrix is kept as [`SingularEdge::Zero`].
fn split_pprime(m: &Mat2) -> Result<Vec<SingularEdge>> {
    if m.is_zero() {
        return Ok(vec![SingularEdge::Zero]);
    }
    let snf = smith_normal_form(m)?;
    if !m.is_integral() || !(snf.q.is_zero() || snf.q.abs().is_one()) {
        return Err(Error::LabelClass {
            label: m.to_string(),
            monoid: Monoid::PPrime.name().into(),
        });
    }
    let n = snf.r.to_integer();
    let mut out = Vec::new();
    if snf.q.is_zero() {
        push_gl(&mut out, snf.e);
        if !n.is_one() {
            out.push(SingularEdge::Scalar(n));
        }
        out.push(SingularEdge::S0);
        push_gl(&mut out, snf.f);
    } else {
        if !n.is_one() {
            out.push(SingularEdge::Scalar(n));
        }
        push_gl(&mut out, snf.e.mul(&Mat2::s_q(&snf.q)).mul(&snf.f));
    }
    Ok(out)
}

/// Split a label of `P` for the zero target: nonzero scalars are dropped.
fn split_p_for_zero(m: &Mat2) -> Result<Vec<SingularEdge>> {
    if m.is_zero() {
        return Ok(vec![SingularEdge::Zero]);
    }
    let snf = smith_normal_form(m)?;
    let mut out = Vec::new();
    if snf.q.is_zero() {
        push_gl(&mut out, snf.e);
        out.push(SingularEdge::S0);
        push_gl(&mut out, snf.f);
    } else if snf.q.abs().is_one() {
        push_gl(&mut out, snf.e.mul(&Mat2::s_q(&snf.q)).mul(&snf.f));
    } else {
        return Err(Error::Unsupported(format!(
            "{m} is neither singular nor a scalar multiple of GL(2,Z)"
        )));
    }
    Ok(out)
}

fn chain(edges: Vec<SingularEdge>) -> LabeledNfa<SingularEdge> {
    let mut a = LabeledNfa::with_states(edges.len() + 1);
    a.set_initial(0);
    a.set_final(edges.len());
    for (i, e) in edges.into_iter().enumerate() {
        a.add_transition(i, Some(e), i + 1);
    }
    a
}

/// A branch of a singular membership query: target divided by the pulled
/// out scalars, and an automaton over [`SingularEdge`] with natural scalars.
#[derive(Clone, Debug)]
pub struct SingularInstance {
    /// Integral, singular, nonzero.
    pub target: Mat2,
    pub automaton: LabeledNfa<SingularEdge>,
    /// gcd of the target's entries.
    pub target_gcd: BigInt,
    /// Number of connectors in the source branch.
    pub rho: usize,
}

impl SingularInstance {
    /// `None` when the branch cannot contain `g` for divisibility reasons.
    pub fn build(g: &Mat2, b: &Branch) -> Result<Option<SingularInstance>> {
        let mut sigma = Rational::one();
        let mut a = factor_automaton(&b.factors[0], split_pprime)?;
        for (c, f) in b.connectors.iter().zip(&b.factors[1..]) {
            if c.is_zero() {
                return Ok(None);
            }
            let snf = smith_normal_form(c)?;
            sigma *= &snf.r;
            let mut edges = Vec::new();
            if snf.q.is_zero() {
                push_gl(&mut edges, snf.e);
                edges.push(SingularEdge::S0);
                push_gl(&mut edges, snf.f);
            } else if snf.q.abs().is_one() {
                push_gl(&mut edges, snf.e.mul(&Mat2::s_q(&snf.q)).mul(&snf.f));
            } else {
                return Err(Error::Unsupported(format!(
                    "connector {c} is not a scalar multiple of a singular or unimodular matrix"
                )));
            }
            a = a.concat(&chain(edges)).concat(&factor_automaton(f, split_pprime)?);
        }
        // g ∈ σ·R′ with R′ integral
        let target = g.scale(&sigma.recip());
        let Some([p, q, r, s]) = target.int_entries() else {
            return Ok(None);
        };
        let t = p.gcd(&q).gcd(&r).gcd(&s);
        // zero labels cannot contribute to a nonzero product
        let automaton = a.filter_transitions(|e| *e != SingularEdge::Zero).trim();
        Ok(Some(SingularInstance {
            target,
            automaton,
            target_gcd: t,
            rho: b.connectors.len(),
        }))
    }

    pub fn decide(&self, limits: &Limits) -> Result<bool> {
        let mut fl = flood_h_transitions(self)?;
        flood_shortcuts(&mut fl, limits)?;
        fl.final_tests(&self.target, limits)
    }
}

fn factor_automaton(
    f: &RatExpr<crate::automata::Label>,
    split: fn(&Mat2) -> Result<Vec<SingularEdge>>,
) -> Result<LabeledNfa<SingularEdge>> {
    let a = expr_to_nfa(&expand_named(f));
    let mut split_of: HashMap<Mat2, Vec<SingularEdge>> = HashMap::new();
    for l in a.labels() {
        split_of.insert(l.clone(), split(&l)?);
    }
    Ok(a.expand_labels(|m| split_of[m].clone()))
}

/// The automaton after the first flooding: states carry the running scalar
/// (a positive divisor of the target gcd); GL(2,ℤ) segments are kept as
/// automata and turned into rational sets on demand; `s₀` transitions carry
/// a sign.
pub struct Flooded {
    divisors: Vec<BigInt>,
    gcd: BigInt,
    /// GL(2,ℤ) transitions and scalar steps (as ε) on augmented states.
    gl: LabeledNfa<Mat2>,
    /// `(from, sign, to)` on augmented states.
    s0: BTreeSet<(usize, i8, usize)>,
    initial: Vec<usize>,
    finals: Vec<usize>,
    segments: HashMap<(usize, usize), Option<GlzRat>>,
    meets: HashMap<(usize, usize, BigInt), bool>,
    entry_cache: HashMap<(u8, u8, BigInt), GlzRat>,
}

impl Flooded {
    fn state(&self, q: usize, d: &BigInt) -> Option<usize> {
        let k = self.divisors.len();
        self.divisors.iter().position(|x| x == d).map(|i| q * k + i)
    }

    fn divisor_of(&self, s: usize) -> &BigInt {
        &self.divisors[s % self.divisors.len()]
    }

    /// `L(p, q)`: products of GL(2,ℤ) paths from `p` to `q`.
    pub fn segment(&mut self, p: usize, q: usize, limits: &Limits) -> Result<Option<GlzRat>> {
        if let Some(l) = self.segments.get(&(p, q)) {
            return Ok(l.clone());
        }
        let part = self.gl.with_endpoints(&[p], &[q]).trim();
        let l = if part.is_empty() {
            None
        } else {
            Some(GlzRat::from_nfa(&part, limits)?)
        };
        self.segments.insert((p, q), l.clone());
        Ok(l)
    }

    fn entry(&mut self, i: u8, j: u8, a: &BigInt, limits: &Limits) -> Result<GlzRat> {
        let key = (i, j, a.clone());
        if let Some(m) = self.entry_cache.get(&key) {
            return Ok(m.clone());
        }
        let m = entry_set(i, j, a, limits)?;
        self.entry_cache.insert(key, m.clone());
        Ok(m)
    }

    fn segment_meets_m11(&mut self, p: usize, q: usize, z: &BigInt, limits: &Limits) -> Result<bool> {
        let key = (p, q, z.clone());
        if let Some(&b) = self.meets.get(&key) {
            return Ok(b);
        }
        let b = match self.segment(p, q, limits)? {
            None => false,
            Some(l) => {
                let m = self.entry(1, 1, z, limits)?;
                !glz_boolean(BoolOp::Intersection, &l, &m, limits)?.is_empty()
            }
        };
        self.meets.insert(key, b);
        Ok(b)
    }

    pub fn s0_transitions(&self) -> &BTreeSet<(usize, i8, usize)> {
        &self.s0
    }

    fn final_tests(&mut self, g: &Mat2, limits: &Limits) -> Result<bool> {
        let edges: Vec<(usize, i8, usize)> = self.s0.iter().copied().collect();
        let (inits, finals) = (self.initial.clone(), self.finals.clone());
        for (q1, sign, p2) in edges {
            for &i in &inits {
                let Some(l1) = self.segment(i, q1, limits)? else { continue };
                for &f in &finals {
                    let Some(l2) = self.segment(p2, f, limits)? else { continue };
                    let r = &self.gcd * BigInt::from(sign);
                    if final_test(&r, &l1, &l2, g, limits)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// First flooding: augment states by the running scalar and expose GL(2,ℤ)
/// segments between any two states.
pub fn flood_h_transitions(inst: &SingularInstance) -> Result<Flooded> {
    let a = &inst.automaton;
    let t = &inst.target_gcd;
    let divisors = positive_divisors(t);
    let k = divisors.len();
    let idx = |d: &BigInt| divisors.iter().position(|x| x == d);
    let mut gl = LabeledNfa::with_states(a.num_states() * k);
    let mut s0 = BTreeSet::new();
    for tr in a.transitions() {
        for (i, d) in divisors.iter().enumerate() {
            let from = tr.from * k + i;
            match &tr.label {
                None => gl.add_transition(from, None, tr.to * k + i),
                Some(SingularEdge::Gl(h)) => gl.add_transition(from, Some(h.clone()), tr.to * k + i),
                Some(SingularEdge::Scalar(n)) => {
                    if let Some(j) = idx(&(d * n)) {
                        gl.add_transition(from, None, tr.to * k + j);
                    }
                }
                Some(SingularEdge::S0) => {
                    s0.insert((from, 1i8, tr.to * k + i));
                }
                Some(SingularEdge::Zero) => {}
            }
        }
    }
    let one = idx(&BigInt::one()).expect("1 divides t");
    let full = idx(&t.abs()).expect("t divides t");
    Ok(Flooded {
        gl,
        s0,
        initial: a.initial().iter().map(|&q| q * k + one).collect(),
        finals: a.finals().iter().map(|&q| q * k + full).collect(),
        gcd: t.abs(),
        divisors,
        segments: HashMap::new(),
        meets: HashMap::new(),
        entry_cache: HashMap::new(),
    })
}

/// Second flooding: `q′ –s₀→ p –L→ q –s₀→ p′` is shortcut to a single `s₀`
/// transition whenever `L` has an element with `(1,1)` entry `z ≠ 0`; `|z|`
/// moves into the running scalar, the sign into the transition.
pub fn flood_shortcuts(fl: &mut Flooded, limits: &Limits) -> Result<()> {
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > limits.saturation {
            return Err(Error::ResourceLimit {
                what: "shortcut rounds",
                limit: limits.saturation,
            });
        }
        let edges: Vec<(usize, i8, usize)> = fl.s0.iter().copied().collect();
        let mut added = Vec::new();
        for &(q1, s1, p) in &edges {
            for &(q, s2, p2) in &edges {
                if fl.segment(p, q, limits)?.is_none() {
                    continue;
                }
                let d = fl.divisor_of(p2).clone();
                let k = fl.divisors.len();
                let rest = &fl.gcd / &d;
                for z in signed_divisors(&rest) {
                    let Some(target) = fl.state(p2 / k, &(&d * z.abs())) else { continue };
                    let sign = s1 * s2 * if z.is_negative() { -1 } else { 1 };
                    let edge = (q1, sign, target);
                    if fl.s0.contains(&edge) || added.contains(&edge) {
                        continue;
                    }
                    if fl.segment_meets_m11(p, q, &z, limits)? {
                        added.push(edge);
                    }
                }
            }
        }
        if added.is_empty() {
            return Ok(());
        }
        fl.s0.extend(added);
    }
}

/// Is `g = f₁·(r·s₀)·f₂` for some `f₁ ∈ L1`, `f₂ ∈ L2`? With `(a, b)` the
/// first column of `f₁` and `(c, d)` the first row of `f₂` this reads
/// `g = r·[[ac, ad], [bc, bd]]`.
pub fn final_test(r: &BigInt, l1: &GlzRat, l2: &GlzRat, g: &Mat2, limits: &Limits) -> Result<bool> {
    if r.is_zero() || !g.det().is_zero() {
        return Ok(false);
    }
    let Some([g11, g12, g21, g22]) = g.int_entries() else {
        return Ok(false);
    };
    if [&g11, &g12, &g21, &g22].iter().any(|x| !x.is_multiple_of(r)) {
        return Ok(false);
    }
    let (h11, h12, h21, h22) = (g11 / r, g12 / r, g21 / r, g22 / r);
    if [&h11, &h12, &h21, &h22].iter().all(|x| x.is_zero()) {
        return Ok(false);
    }
    // enumerate the factor of the first nonzero row, derive the rest
    let mut candidates: Vec<[BigInt; 4]> = Vec::new();
    let row1 = !(h11.is_zero() && h12.is_zero());
    let (x, y) = if row1 { (&h11, &h12) } else { (&h21, &h22) };
    for v in signed_divisors(&x.gcd(y)) {
        let (c, d) = (x / &v, y / &v);
        let (a, b) = if row1 {
            let other = if !c.is_zero() { &h21 / &c } else { &h22 / &d };
            (v.clone(), other)
        } else {
            (BigInt::zero(), v.clone())
        };
        if &a * &c == h11 && &a * &d == h12 && &b * &c == h21 && &b * &d == h22 {
            candidates.push([a, b, c, d]);
        }
    }
    for [a, b, c, d] in candidates {
        let left = glz_boolean(
            BoolOp::Intersection,
            &glz_boolean(BoolOp::Intersection, l1, &entry_set(1, 1, &a, limits)?, limits)?,
            &entry_set(2, 1, &b, limits)?,
            limits,
        )?;
        if left.is_empty() {
            continue;
        }
        let right = glz_boolean(
            BoolOp::Intersection,
            &glz_boolean(BoolOp::Intersection, l2, &entry_set(1, 1, &c, limits)?, limits)?,
            &entry_set(1, 2, &d, limits)?,
            limits,
        )?;
        if !right.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn singular_member(g: &Mat2, e: &FlatExpr, limits: &Limits) -> Result<bool> {
    if !g.det().is_zero() {
        return Err(Error::Unsupported("target is not singular".into()));
    }
    if g.is_zero() {
        return zero_member(e, limits);
    }
    e.check(Monoid::PPrime)?;
    for b in &e.branches {
        if let Some(inst) = SingularInstance::build(g, b)? {
            if inst.decide(limits)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Does the zero matrix lie in the set?
pub fn zero_member(e: &FlatExpr, limits: &Limits) -> Result<bool> {
    e.check(Monoid::P)?;
    for b in &e.branches {
        let mut a = factor_automaton(&b.factors[0], split_p_for_zero)?;
        for (c, f) in b.connectors.iter().zip(&b.factors[1..]) {
            a = a
                .concat(&chain(split_p_for_zero(c)?))
                .concat(&factor_automaton(f, split_p_for_zero)?);
        }
        if zero_in_branch(&a.trim(), limits)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn zero_in_branch(a: &LabeledNfa<SingularEdge>, limits: &Limits) -> Result<bool> {
    if a.is_empty() {
        return Ok(false);
    }
    if a.labels().contains(&SingularEdge::Zero) {
        return Ok(true);
    }
    // s₀·M·s₀ = M₁₁·s₀: a product vanishes iff some segment between two s₀
    // factors has a (1,1) entry 0
    let gl = a
        .filter_transitions(|e| matches!(e, SingularEdge::Gl(_)))
        .map_labels(|e| match e {
            SingularEdge::Gl(h) => h.clone(),
            _ => unreachable!(),
        });
    let s0: Vec<(usize, usize)> = a
        .transitions()
        .iter()
        .filter(|t| t.label == Some(SingularEdge::S0))
        .map(|t| (t.from, t.to))
        .collect();
    let zero_entry = entry_set(1, 1, &BigInt::zero(), limits)?;
    let mut seen = BTreeSet::new();
    for &(_, p) in &s0 {
        for &(q, _) in &s0 {
            if !seen.insert((p, q)) {
                continue;
            }
            let part = gl.with_endpoints(&[p], &[q]).trim();
            if part.is_empty() {
                continue;
            }
            let l = GlzRat::from_nfa(&part, limits)?;
            if !glz_boolean(BoolOp::Intersection, &l, &zero_entry, limits)?.is_empty() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Membership of any matrix in a flat set over the given monoid.
pub fn monoid_member(g: &Mat2, e: &FlatExpr, monoid: Monoid, limits: &Limits) -> Result<bool> {
    match monoid {
        Monoid::Gl2z => {
            e.check(Monoid::Gl2z)?;
            if g.det().is_zero() {
                return Ok(false);
            }
            normalize_flat(e, limits)?.contains(g)
        }
        Monoid::P2q => {
            if g.det().is_zero() {
                e.check(Monoid::P2q)?;
                return Ok(false);
            }
            flo_member(g, e, limits)
        }
        Monoid::P | Monoid::PPrime => {
            if g.is_zero() {
                return zero_member(e, limits);
            }
            if g.det().is_zero() {
                return singular_member(g, e, limits);
            }
            e.check(monoid)?;
            flo_member(g, &drop_singular(e), limits)
        }
    }
}

/// Remove singular atoms and branches with singular connectors; what is
/// left contains every invertible element of the original set.
fn drop_singular(e: &FlatExpr) -> FlatExpr {
    use crate::automata::Label;
    let branches = e
        .branches
        .iter()
        .filter(|b| b.connectors.iter().all(|c| !c.det().is_zero()))
        .map(|b| Branch {
            factors: b
                .factors
                .iter()
                .map(|f| {
                    f.map_atoms(&mut |l| match l {
                        Label::Mat(m) if m.det().is_zero() => RatExpr::Empty,
                        _ => RatExpr::Atom(l.clone()),
                    })
                })
                .collect(),
            connectors: b.connectors.clone(),
        })
        .collect();
    FlatExpr { branches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Label;
    use crate::exact_linear::rat;
    use crate::glz_rat::glz_from_expr;

    fn s0() -> Mat2 {
        Mat2::from_ints(1, 0, 0, 0)
    }
    fn t() -> Mat2 {
        Mat2::from_ints(1, 1, 0, 1)
    }
    fn atom(m: Mat2) -> RatExpr<Label> {
        RatExpr::Atom(Label::Mat(m))
    }
    fn cat(v: Vec<Mat2>) -> FlatExpr {
        FlatExpr::single(RatExpr::concat(v.into_iter().map(atom).collect()))
    }
    fn lim() -> Limits {
        Limits::default()
    }
    fn glz(e: RatExpr<Mat2>) -> GlzRat {
        glz_from_expr(&e, &lim()).unwrap()
    }

    #[test]
    fn zero_examples() {
        let l = lim();
        assert!(!zero_member(&FlatExpr::single(RatExpr::star(atom(t()))), &l).unwrap());
        let z = FlatExpr::single(RatExpr::concat(vec![RatExpr::star(atom(t())), atom(Mat2::zero())]));
        assert!(zero_member(&z, &l).unwrap());
        assert!(zero_member(&cat(vec![s0(), Mat2::from_ints(0, 0, 0, 1)]), &l).unwrap());
        // s₀·S·s₀ = 0 since S₁₁ = 0
        let s = Mat2::from_ints(0, -1, 1, 0);
        assert!(zero_member(&cat(vec![s0(), s.clone(), s0()]), &l).unwrap());
        assert!(!zero_member(&cat(vec![s0(), t(), s0()]), &l).unwrap());
        // scalars in P are harmless
        let half = Mat2::scalar(rat(1) / rat(2));
        assert!(zero_member(&cat(vec![s0(), half, s, s0()]), &l).unwrap());
    }

    #[test]
    fn singular_examples() {
        let l = lim();
        let c2 = Mat2::scalar(rat(2));
        assert!(singular_member(&Mat2::from_ints(2, 0, 0, 0), &cat(vec![c2.clone(), s0()]), &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(1, 0, 0, 0), &cat(vec![c2, s0()]), &l).unwrap());
        let p = Mat2::from_ints(0, 1, 1, 0);
        assert!(singular_member(&Mat2::from_ints(0, 1, 0, 0), &cat(vec![s0(), p]), &l).unwrap());
        assert!(!singular_member(&s0(), &FlatExpr::single(RatExpr::star(atom(t()))), &l).unwrap());
    }

    #[test]
    fn shortcuts_collapse_long_paths() {
        let l = lim();
        // s₀·[[2,1],[1,1]]·s₀·T = 2·s₀·T
        let m = Mat2::from_ints(2, 1, 1, 1);
        let e = cat(vec![s0(), m.clone(), s0(), t()]);
        let g = s0().mul(&m).mul(&s0()).mul(&t());
        assert_eq!(g, Mat2::from_ints(2, 2, 0, 0));
        assert!(singular_member(&g, &e, &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(1, 1, 0, 0), &e, &l).unwrap());
        // negative entry
        let e = cat(vec![s0(), m.neg(), s0()]);
        assert!(singular_member(&Mat2::from_ints(-2, 0, 0, 0), &e, &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(2, 0, 0, 0), &e, &l).unwrap());
    }

    #[test]
    fn star_and_connector_instances() {
        let l = lim();
        // (T)* [[1,0],[0,0]] (T)*  contains T^a s₀ T^b = [[1, b],[0,0]]
        let e = FlatExpr::single(RatExpr::concat(vec![
            RatExpr::star(atom(t())),
            atom(s0()),
            RatExpr::star(atom(t())),
        ]));
        assert!(singular_member(&Mat2::from_ints(1, 3, 0, 0), &e, &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(1, -1, 0, 0), &e, &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(0, 1, 0, 0), &e, &l).unwrap());
        // connector (1/2)·s₀ scales everything down
        let half_s0 = s0().scale(&(rat(1) / rat(2)));
        let b = Branch {
            factors: vec![RatExpr::star(atom(Mat2::scalar(rat(2)))), RatExpr::one()],
            connectors: vec![half_s0],
        };
        let e = FlatExpr { branches: vec![b] };
        assert!(singular_member(&Mat2::from_ints(4, 0, 0, 0), &e, &l).unwrap());
        assert!(singular_member(&s0().scale(&(rat(1) / rat(2))), &e, &l).unwrap());
        assert!(!singular_member(&Mat2::from_ints(3, 0, 0, 0), &e, &l).unwrap());
    }

    #[test]
    fn final_test_examples() {
        let l = lim();
        let one = glz(RatExpr::one());
        let p = Mat2::from_ints(0, 1, 1, 0);
        assert!(final_test(&BigInt::from(3), &one, &one, &s0().scale(&rat(3)), &l).unwrap());
        assert!(final_test(&BigInt::one(), &one, &glz(RatExpr::Atom(p)), &Mat2::from_ints(0, 1, 0, 0), &l).unwrap());
        let any = glz(crate::glz_rat::gl2z_expr());
        assert!(!final_test(&BigInt::from(2), &any, &any, &s0(), &l).unwrap());
        assert!(final_test(&BigInt::one(), &any, &any, &Mat2::from_ints(6, 4, 9, 6), &l).unwrap());
        assert!(!final_test(&BigInt::one(), &any, &any, &Mat2::from_ints(2, 0, 0, 0), &l).unwrap());
    }

    #[test]
    fn monoid_dispatch() {
        let l = lim();
        let e = FlatExpr::single(RatExpr::concat(vec![RatExpr::star(atom(Mat2::scalar(rat(2)))), atom(t())]));
        assert!(monoid_member(&t().scale(&rat(4)), &e, Monoid::PPrime, &l).unwrap());
        assert!(!monoid_member(&t().scale(&rat(3)), &e, Monoid::PPrime, &l).unwrap());
        assert!(!monoid_member(&Mat2::zero(), &e, Monoid::PPrime, &l).unwrap());
    }
}
