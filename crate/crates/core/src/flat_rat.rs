//! Flat rational sets `L₀ g₁ L₁ ⋯ g_t L_t`: normal forms over GL(2,ℤ), the
//! relative Boolean algebra they form, and membership over P(2,ℚ).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::automata::{expr_to_nfa, Label, LabeledNfa, RatExpr};
use crate::commensurator::push_right_parts;
use crate::error::{Error, Limits, Result};
use crate::exact_linear::{coset_canonical, coset_canonical_with_residue, smith_normal_form, Mat2, Rational};
use crate::free_rat::BoolOp;
use crate::glz_rat::{expand_named, glz_boolean, GlzRat};

/// Monoid the factors of a flat expression are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monoid {
    /// GL(2,ℤ).
    Gl2z,
    /// GL(2,ℤ) together with all rational matrices of `|det| > 1`.
    P2q,
    /// Generated by central matrices, GL(2,ℤ) and singular integer matrices.
    P,
    /// As `P`, with central matrices restricted to natural scalars.
    PPrime,
}

impl Monoid {
    pub fn name(self) -> &'static str {
        match self {
            Monoid::Gl2z => "GL2Z",
            Monoid::P2q => "P2Q",
            Monoid::P => "P",
            Monoid::PPrime => "Pprime",
        }
    }

    pub fn contains(self, l: &Label) -> bool {
        let m = match l {
            Label::Named(_) => return true,
            Label::Mat(m) => m,
        };
        if m.is_gl2z() {
            return true;
        }
        match self {
            Monoid::Gl2z => false,
            Monoid::P2q => m.det().abs() > Rational::one(),
            // scalar multiples of GL(2,ℤ) and singular matrices
            Monoid::P => m.det().is_zero() || unit_smith(m),
            // natural multiples of GL(2,ℤ) and singular integer matrices
            Monoid::PPrime => m.is_integral() && (m.det().is_zero() || unit_smith(m)),
        }
    }
}

fn unit_smith(m: &Mat2) -> bool {
    smith_normal_form(m).is_ok_and(|s| s.q.abs().is_one())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    /// One more factor than connectors.
    pub factors: Vec<RatExpr<Label>>,
    pub connectors: Vec<Mat2>,
}

impl Branch {
    pub fn factor(e: RatExpr<Label>) -> Branch {
        Branch {
            factors: vec![e],
            connectors: Vec::new(),
        }
    }

    pub fn connector(g: Mat2) -> Branch {
        Branch {
            factors: vec![RatExpr::one(), RatExpr::one()],
            connectors: vec![g],
        }
    }

    /// Concatenation of two branches.
    pub fn then(&self, other: &Branch) -> Branch {
        let mut factors = self.factors.clone();
        let last = factors.pop().expect("nonempty");
        factors.push(RatExpr::concat(vec![last, other.factors[0].clone()]));
        factors.extend(other.factors[1..].iter().cloned());
        let mut connectors = self.connectors.clone();
        connectors.extend(other.connectors.iter().cloned());
        Branch { factors, connectors }
    }

    /// The whole branch as one expression over matrices.
    pub fn to_expr(&self) -> RatExpr<Mat2> {
        let mut items = vec![expand_named(&self.factors[0])];
        for (g, f) in self.connectors.iter().zip(&self.factors[1..]) {
            items.push(RatExpr::Atom(g.clone()));
            items.push(expand_named(f));
        }
        RatExpr::concat(items)
    }
}

/// Finite union of branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatExpr {
    pub branches: Vec<Branch>,
}

impl FlatExpr {
    pub fn single(e: RatExpr<Label>) -> FlatExpr {
        FlatExpr {
            branches: vec![Branch::factor(e)],
        }
    }

    pub fn of_matrices(e: &RatExpr<Mat2>) -> FlatExpr {
        FlatExpr::single(e.map_atoms(&mut |m| RatExpr::Atom(Label::Mat(m.clone()))))
    }

    /// Split an expression into branches: atoms outside `monoid` become
    /// connectors, unions become separate branches. A star over an atom
    /// outside `monoid` is rejected.
    pub fn flatten(e: &RatExpr<Label>, monoid: Monoid) -> Result<FlatExpr> {
        Ok(FlatExpr {
            branches: flatten_branches(e, monoid)?,
        })
    }

    pub fn check(&self, monoid: Monoid) -> Result<()> {
        for b in &self.branches {
            if b.factors.len() != b.connectors.len() + 1 {
                return Err(Error::Unsupported("malformed branch".into()));
            }
            for f in &b.factors {
                for a in f.atoms() {
                    if !monoid.contains(a) {
                        return Err(Error::LabelClass {
                            label: a.to_string(),
                            monoid: monoid.name().into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_expr(&self) -> RatExpr<Mat2> {
        RatExpr::union(self.branches.iter().map(|b| b.to_expr()).collect())
    }

    pub fn to_nfa(&self) -> LabeledNfa<Mat2> {
        expr_to_nfa(&self.to_expr())
    }
}

fn flatten_branches(e: &RatExpr<Label>, monoid: Monoid) -> Result<Vec<Branch>> {
    Ok(match e {
        RatExpr::Empty => Vec::new(),
        RatExpr::Atom(l) => {
            if monoid.contains(l) {
                vec![Branch::factor(e.clone())]
            } else {
                match l {
                    Label::Mat(m) => vec![Branch::connector(m.clone())],
                    Label::Named(_) => unreachable!("named sets lie in every monoid"),
                }
            }
        }
        RatExpr::Union(v) => {
            let mut out = Vec::new();
            for x in v {
                out.extend(flatten_branches(x, monoid)?);
            }
            out
        }
        RatExpr::Concat(v) => {
            let mut acc = vec![Branch::factor(RatExpr::one())];
            for x in v {
                let right = flatten_branches(x, monoid)?;
                acc = acc
                    .iter()
                    .flat_map(|l| right.iter().map(move |r| l.then(r)))
                    .collect();
            }
            acc
        }
        RatExpr::Star(b) => {
            if let Some(bad) = b.atoms().into_iter().find(|a| !monoid.contains(a)) {
                return Err(Error::LabelClass {
                    label: bad.to_string(),
                    monoid: monoid.name().into(),
                });
            }
            vec![Branch::factor(e.clone())]
        }
    })
}

/// Union of `a·K` with `K` kept as an automaton over GL(2,ℤ) labels and
/// `a` a canonical coset representative.
#[derive(Clone, Debug, Default)]
pub(crate) struct LazyFlat {
    parts: BTreeMap<Mat2, LabeledNfa<Mat2>>,
}

impl LazyFlat {
    pub(crate) fn one() -> LazyFlat {
        LazyFlat::of_nfa(LabeledNfa::epsilon())
    }

    pub(crate) fn of_nfa(k: LabeledNfa<Mat2>) -> LazyFlat {
        let mut parts = BTreeMap::new();
        if !k.is_empty() {
            parts.insert(Mat2::identity(), k);
        }
        LazyFlat { parts }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn add(&mut self, rep: Mat2, k: LabeledNfa<Mat2>) {
        if k.is_empty() {
            return;
        }
        match self.parts.remove(&rep) {
            Some(old) => {
                self.parts.insert(rep, old.union(&k));
            }
            None => {
                self.parts.insert(rep, k);
            }
        }
    }

    pub(crate) fn union_with(&mut self, other: &LazyFlat) {
        for (r, k) in &other.parts {
            self.add(r.clone(), k.clone());
        }
    }

    pub(crate) fn mul_factor(&self, f: &LabeledNfa<Mat2>) -> LazyFlat {
        let mut out = LazyFlat::default();
        for (r, k) in &self.parts {
            out.add(r.clone(), k.concat(f).trim());
        }
        out
    }

    /// Right multiplication by a nonsingular matrix.
    pub(crate) fn mul_connector(&self, g: &Mat2, limits: &Limits) -> Result<LazyFlat> {
        let mut out = LazyFlat::default();
        for (a, k) in &self.parts {
            for (ug, kp) in push_right_parts(k, g, limits)? {
                let (c, res) = coset_canonical_with_residue(&a.mul(&ug))?;
                let kp = if res.is_identity() {
                    kp
                } else {
                    LabeledNfa::single(res).concat(&kp)
                };
                out.add(c, kp);
            }
        }
        Ok(out)
    }

    pub(crate) fn contains(&self, g: &Mat2, limits: &Limits) -> Result<bool> {
        let c = coset_canonical(g)?;
        match self.parts.get(&c) {
            Some(k) => GlzRat::from_nfa(k, limits)?.contains(&c.inverse()?.mul(g)),
            None => Ok(false),
        }
    }

    pub(crate) fn to_normal(&self, limits: &Limits) -> Result<NormalFlat> {
        let mut parts = Vec::new();
        for (r, k) in &self.parts {
            let l = GlzRat::from_nfa(k, limits)?;
            if !l.is_empty() {
                parts.push((r.clone(), l));
            }
        }
        Ok(NormalFlat { parts })
    }
}

/// `∪ repᵢ·Lᵢ` with distinct canonical representatives, sorted.
#[derive(Clone, Debug)]
pub struct NormalFlat {
    parts: Vec<(Mat2, GlzRat)>,
}

impl NormalFlat {
    pub fn empty() -> NormalFlat {
        NormalFlat { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[(Mat2, GlzRat)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|(_, l)| l.is_empty())
    }

    fn part(&self, rep: &Mat2) -> Option<&GlzRat> {
        self.parts
            .binary_search_by(|(r, _)| r.cmp(rep))
            .ok()
            .map(|i| &self.parts[i].1)
    }

    pub fn contains(&self, g: &Mat2) -> Result<bool> {
        if g.det().is_zero() {
            return Ok(false);
        }
        let c = coset_canonical(g)?;
        match self.part(&c) {
            Some(l) => l.contains(&c.inverse()?.mul(g)),
            None => Ok(false),
        }
    }

    fn combine(&self, other: &NormalFlat, op: BoolOp, limits: &Limits) -> Result<NormalFlat> {
        let mut reps: Vec<&Mat2> = self.parts.iter().map(|(r, _)| r).collect();
        if op == BoolOp::Union {
            reps.extend(other.parts.iter().map(|(r, _)| r));
            reps.sort();
            reps.dedup();
        }
        let mut parts = Vec::new();
        for r in reps {
            let l = match (self.part(r), other.part(r)) {
                (Some(a), Some(b)) => glz_boolean(op, a, b, limits)?,
                (Some(a), None) => match op {
                    BoolOp::Intersection => continue,
                    _ => a.clone(),
                },
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            if !l.is_empty() {
                parts.push((r.clone(), l));
            }
        }
        Ok(NormalFlat { parts })
    }

    pub fn union(&self, other: &NormalFlat, limits: &Limits) -> Result<NormalFlat> {
        self.combine(other, BoolOp::Union, limits)
    }
}

pub fn normalize_flat(e: &FlatExpr, limits: &Limits) -> Result<NormalFlat> {
    e.check(Monoid::Gl2z)?;
    let mut total = LazyFlat::default();
    for b in &e.branches {
        total.union_with(&lazy_branch(b, limits)?);
    }
    total.to_normal(limits)
}

fn lazy_branch(b: &Branch, limits: &Limits) -> Result<LazyFlat> {
    let nfa = |f: &RatExpr<Label>| expr_to_nfa(&expand_named(f));
    let mut acc = LazyFlat::of_nfa(nfa(&b.factors[0]));
    for (g, f) in b.connectors.iter().zip(&b.factors[1..]) {
        if acc.is_empty() {
            break;
        }
        acc = acc.mul_connector(g, limits)?.mul_factor(&nfa(f));
    }
    Ok(acc)
}

pub fn flat_difference(a: &NormalFlat, b: &NormalFlat, limits: &Limits) -> Result<NormalFlat> {
    a.combine(b, BoolOp::Difference, limits)
}

/// `a ∖ (a ∖ b)`.
pub fn flat_intersection(a: &NormalFlat, b: &NormalFlat, limits: &Limits) -> Result<NormalFlat> {
    flat_difference(a, &flat_difference(a, b, limits)?, limits)
}

/// Boolean combination of flat sets over GL(2,ℤ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolComb {
    Leaf(FlatExpr),
    Union(Box<BoolComb>, Box<BoolComb>),
    Intersection(Box<BoolComb>, Box<BoolComb>),
    Difference(Box<BoolComb>, Box<BoolComb>),
}

pub fn bool_comb_eval(c: &BoolComb, limits: &Limits) -> Result<NormalFlat> {
    Ok(match c {
        BoolComb::Leaf(e) => normalize_flat(e, limits)?,
        BoolComb::Union(a, b) => bool_comb_eval(a, limits)?.union(&bool_comb_eval(b, limits)?, limits)?,
        BoolComb::Intersection(a, b) => {
            flat_intersection(&bool_comb_eval(a, limits)?, &bool_comb_eval(b, limits)?, limits)?
        }
        BoolComb::Difference(a, b) => {
            flat_difference(&bool_comb_eval(a, limits)?, &bool_comb_eval(b, limits)?, limits)?
        }
    })
}

pub fn bool_comb_empty(c: &BoolComb, limits: &Limits) -> Result<bool> {
    Ok(bool_comb_eval(c, limits)?.is_empty())
}

/// Largest `k` with `t^k ≤ det`, for `t > 1`.
pub fn counter_bound(det: &Rational, t: &Rational) -> usize {
    let mut k = 0;
    let mut p = t.clone();
    while &p <= det {
        k += 1;
        p *= t;
    }
    k
}

/// One branch of a membership query over P(2,ℚ), reduced to a diagonal
/// natural target and a plain rational expression.
#[derive(Clone, Debug)]
pub struct FloInstance {
    /// `diag(m, n)` with `m, n ≥ 1`.
    pub target: Mat2,
    pub expression: RatExpr<Mat2>,
    /// Minimal `|det| > 1` over the labels; `None` if all labels are in GL(2,ℤ).
    pub t_min: Option<Rational>,
    /// Bound on non-GL(2,ℤ) labels along an accepting path for the target.
    pub k: usize,
}

/// Central `ρ = 1/z` for the least natural `z` making `z·g` lie in P(2,ℚ).
fn split_connector(g: &Mat2) -> (Rational, Mat2) {
    let mut z = BigInt::one();
    loop {
        let h = g.scale(&Rational::from_integer(z.clone()));
        if h.is_gl2z() || h.det().abs() > Rational::one() {
            return (Rational::new(BigInt::one(), z), h);
        }
        z += 1;
    }
}

impl FloInstance {
    /// One instance per branch of `e`.
    pub fn build(g: &Mat2, e: &FlatExpr) -> Result<Vec<FloInstance>> {
        e.check(Monoid::P2q)?;
        if g.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut out = Vec::new();
        for b in &e.branches {
            let mut sigma = Rational::one();
            let mut items = vec![expand_named(&b.factors[0])];
            for (c, f) in b.connectors.iter().zip(&b.factors[1..]) {
                if c.det().is_zero() {
                    return Err(Error::SingularMatrix);
                }
                let (rho, h) = split_connector(c);
                sigma *= rho;
                items.push(RatExpr::Atom(h));
                items.push(expand_named(f));
            }
            // g ∈ σ·R  ⟺  σ⁻¹g = r·e·s_n·f ∈ R
            let snf = smith_normal_form(&g.scale(&sigma.recip()))?;
            let big_n = snf.r.denom().clone();
            let m = snf.r.numer().clone();
            let mut expr = Vec::new();
            if !big_n.is_one() {
                expr.push(RatExpr::Atom(Mat2::scalar(Rational::from_integer(big_n))));
            }
            if !snf.e.is_identity() {
                expr.push(RatExpr::Atom(snf.e.inverse()?));
            }
            expr.extend(items);
            if !snf.f.is_identity() {
                expr.push(RatExpr::Atom(snf.f.inverse()?));
            }
            if snf.q.is_negative() {
                expr.push(RatExpr::Atom(Mat2::from_ints(1, 0, 0, -1)));
            }
            let n = &m * snf.q.abs();
            let target = Mat2::from_bigints([m.clone(), BigInt::zero(), BigInt::zero(), n.clone()]);
            let expression = RatExpr::concat(expr);
            let t_min = expr_to_nfa(&expression)
                .trim()
                .labels()
                .iter()
                .filter(|h| !h.is_gl2z())
                .map(|h| h.det().abs())
                .min();
            let k = match &t_min {
                Some(t) => counter_bound(&Rational::from_integer(&m * &n), t),
                None => 0,
            };
            out.push(FloInstance {
                target,
                expression,
                t_min,
                k,
            });
        }
        Ok(out)
    }

    /// The counter construction: paths with at most `k` labels outside
    /// GL(2,ℤ), composed level by level as flat sets over GL(2,ℤ).
    pub fn decide(&self, limits: &Limits) -> Result<bool> {
        let a = expr_to_nfa(&self.expression).trim();
        if a.is_empty() {
            return Ok(false);
        }
        let gl = a.filter_transitions(|h| h.is_gl2z());
        let jumps: Vec<(usize, Mat2, usize)> = a
            .transitions()
            .iter()
            .filter_map(|t| match &t.label {
                Some(h) if !h.is_gl2z() => Some((t.from, h.clone(), t.to)),
                _ => None,
            })
            .collect();
        let finals: Vec<usize> = a.finals().iter().copied().collect();
        let gl_path = |p: usize, to: &[usize]| gl.with_endpoints(&[p], to).trim();

        let mut level: HashMap<usize, LazyFlat> = a.initial().iter().map(|&i| (i, LazyFlat::one())).collect();
        for l in 0..=self.k {
            let mut next: HashMap<usize, LazyFlat> = HashMap::new();
            for (&p, lf) in &level {
                let done = gl_path(p, &finals);
                if !done.is_empty() && lf.mul_factor(&done).contains(&self.target, limits)? {
                    return Ok(true);
                }
                if l == self.k {
                    continue;
                }
                for (q, h, p2) in &jumps {
                    let walk = gl_path(p, &[*q]);
                    if walk.is_empty() {
                        continue;
                    }
                    let stepped = lf.mul_factor(&walk).mul_connector(h, limits)?;
                    next.entry(*p2).or_default().union_with(&stepped);
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        Ok(false)
    }
}

pub fn flo_member(g: &Mat2, e: &FlatExpr, limits: &Limits) -> Result<bool> {
    for inst in FloInstance::build(g, e)? {
        if inst.decide(limits)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::rat;
    use crate::oracle::enumerate_products;

    fn t() -> Mat2 {
        Mat2::from_ints(1, 1, 0, 1)
    }
    fn s() -> Mat2 {
        Mat2::from_ints(0, -1, 1, 0)
    }
    fn d(a: i64, b: i64) -> Mat2 {
        Mat2::diag(rat(a), rat(b))
    }
    fn atom(m: Mat2) -> RatExpr<Label> {
        RatExpr::Atom(Label::Mat(m))
    }
    fn star(m: Mat2) -> RatExpr<Label> {
        RatExpr::star(atom(m))
    }
    fn lim() -> Limits {
        Limits::default()
    }
    fn branch(factors: Vec<RatExpr<Label>>, connectors: Vec<Mat2>) -> FlatExpr {
        FlatExpr {
            branches: vec![Branch { factors, connectors }],
        }
    }

    #[test]
    fn normalize_examples() {
        let n = normalize_flat(&FlatExpr::single(star(t())), &lim()).unwrap();
        assert_eq!(n.parts().len(), 1);
        assert!(n.parts()[0].0.is_identity());
        assert!(n.contains(&t().pow(3)).unwrap());

        let e = branch(vec![atom(Mat2::identity()), atom(Mat2::identity())], vec![d(1, 2)]);
        let n = normalize_flat(&e, &lim()).unwrap();
        assert_eq!(n.parts().len(), 1);
        assert_eq!(n.parts()[0].0, coset_canonical(&d(1, 2)).unwrap());
        assert!(n.contains(&d(1, 2)).unwrap());
        assert!(!n.contains(&d(2, 1)).unwrap());

        let e = branch(vec![star(t().pow(2)), RatExpr::one()], vec![d(1, 2)]);
        let n = normalize_flat(&e, &lim()).unwrap();
        let sample = enumerate_products(&e.to_nfa(), 6, 1 << 16).unwrap();
        for g in sample.keys() {
            assert!(n.contains(g).unwrap());
        }
        for k in [1, 3, 5] {
            assert!(!n.contains(&t().pow(k).mul(&d(1, 2))).unwrap());
        }
    }

    #[test]
    fn boolean_examples() {
        let l = lim();
        let a = normalize_flat(&FlatExpr::single(star(t())), &l).unwrap();
        assert!(flat_difference(&a, &a, &l).unwrap().is_empty());

        let b = normalize_flat(&branch(vec![atom(Mat2::identity()), RatExpr::one()], vec![d(1, 2)]), &l).unwrap();
        let diff = flat_difference(&a, &b, &l).unwrap();
        for k in 0..5 {
            assert!(diff.contains(&t().pow(k)).unwrap());
        }

        let t2 = normalize_flat(&FlatExpr::single(star(t().pow(2))), &l).unwrap();
        let odd = flat_difference(&a, &t2, &l).unwrap();
        for k in 0..=7 {
            assert_eq!(odd.contains(&t().pow(k)).unwrap(), k % 2 == 1);
        }

        let t3 = normalize_flat(&FlatExpr::single(star(t().pow(3))), &l).unwrap();
        let i = flat_intersection(&a, &t3, &l).unwrap();
        for k in 0..=9 {
            assert_eq!(i.contains(&t().pow(k)).unwrap(), k % 3 == 0);
        }
        assert!(flat_intersection(&a, &b, &l).unwrap().is_empty());
    }

    #[test]
    fn bool_comb_examples() {
        let l = lim();
        let leaf = |e: FlatExpr| Box::new(BoolComb::Leaf(e));
        let a = FlatExpr::single(star(t()));
        assert!(bool_comb_empty(&BoolComb::Difference(leaf(a.clone()), leaf(a)), &l).unwrap());

        let x = branch(vec![atom(Mat2::identity()), star(t())], vec![d(1, 2)]);
        let y = branch(vec![atom(Mat2::identity()), star(t().pow(2))], vec![d(1, 2)]);
        assert!(!bool_comb_empty(&BoolComb::Intersection(leaf(x), leaf(y)), &l).unwrap());

        let x = branch(vec![atom(Mat2::identity()), atom(Mat2::identity())], vec![d(1, 2)]);
        let y = branch(vec![atom(Mat2::identity()), atom(Mat2::identity())], vec![d(1, 3)]);
        assert!(bool_comb_empty(&BoolComb::Intersection(leaf(x), leaf(y)), &l).unwrap());
    }

    #[test]
    fn flatten_examples() {
        let e = RatExpr::concat(vec![star(t()), atom(d(1, 2)), star(s())]);
        let f = FlatExpr::flatten(&e, Monoid::Gl2z).unwrap();
        assert_eq!(f.branches.len(), 1);
        assert_eq!(f.branches[0].connectors, vec![d(1, 2)]);
        let f = FlatExpr::flatten(&e, Monoid::P2q).unwrap();
        assert!(f.branches[0].connectors.is_empty());
        let bad = star(d(1, 2));
        assert!(matches!(FlatExpr::flatten(&bad, Monoid::Gl2z), Err(Error::LabelClass { .. })));
        let u = RatExpr::union(vec![atom(d(1, 2)), atom(t())]);
        assert_eq!(FlatExpr::flatten(&u, Monoid::Gl2z).unwrap().branches.len(), 2);
    }

    #[test]
    fn flo_examples() {
        let l = lim();
        let e = FlatExpr::single(star(d(1, 2)));
        assert!(flo_member(&d(1, 4), &e, &l).unwrap());
        assert!(!flo_member(&d(1, 3), &e, &l).unwrap());
        let e = FlatExpr::single(star(Mat2::from_ints(1, 1, 0, 2)));
        assert!(!flo_member(&d(1, 2), &e, &l).unwrap());
        assert!(flo_member(&Mat2::from_ints(1, 3, 0, 4), &e, &l).unwrap());
        assert!(matches!(flo_member(&Mat2::zero(), &e, &l), Err(Error::SingularMatrix)));
    }

    #[test]
    fn flo_with_connectors_and_scalars() {
        let l = lim();
        // T* · (1/2)·[[1,0],[0,4]] · S*
        let half = Mat2::new(rat(1) / rat(2), rat(0), rat(0), rat(2));
        let e = branch(vec![star(t()), star(s())], vec![half.clone()]);
        for w in [half.clone(), t().mul(&half).mul(&s()), t().pow(3).mul(&half).mul(&s().pow(3))] {
            assert!(flo_member(&w, &e, &l).unwrap(), "{w}");
        }
        assert!(!flo_member(&d(1, 1), &e, &l).unwrap());
        assert!(!flo_member(&t().inverse().unwrap().mul(&half), &e, &l).unwrap());
    }

    #[test]
    fn counter_bound_examples() {
        assert_eq!(counter_bound(&rat(16), &rat(2)), 4);
        assert_eq!(counter_bound(&rat(15), &rat(2)), 3);
        assert_eq!(counter_bound(&rat(1), &rat(2)), 0);
        let inst = FloInstance::build(&d(4, 4), &FlatExpr::single(star(d(1, 2)))).unwrap();
        assert_eq!(inst[0].t_min, Some(rat(2)));
        assert_eq!(inst[0].k, 4);
        assert_eq!(inst[0].target, d(4, 4));
    }
}
