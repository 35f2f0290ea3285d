//! Label-generic rational expressions and finite automata.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;

use crate::exact_linear::Mat2;

/// Named subsets of GL(2,ℤ) usable as atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedSet {
    /// `M_ij(a) = {g ∈ GL(2,ℤ) : g_ij = a}`.
    Entry { i: u8, j: u8, a: BigInt },
    /// The whole group GL(2,ℤ).
    Gl2z,
}

impl fmt::Display for NamedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSet::Entry { i, j, a } => write!(f, "M{i}{j}({a})"),
            NamedSet::Gl2z => f.write_str("GL2Z"),
        }
    }
}

/// Atom of a rational expression: a single matrix or a named set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Mat(Mat2),
    Named(NamedSet),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Mat(m) => write!(f, "{m}"),
            Label::Named(n) => write!(f, "{n}"),
        }
    }
}

/// Rational expression over atoms of type `L`. The empty product is
/// `Star(Empty)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RatExpr<L> {
    Empty,
    Atom(L),
    Union(Vec<RatExpr<L>>),
    Concat(Vec<RatExpr<L>>),
    Star(Box<RatExpr<L>>),
}

impl<L: Clone + PartialEq> RatExpr<L> {
    pub fn one() -> Self {
        RatExpr::Star(Box::new(RatExpr::Empty))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, RatExpr::Star(b) if **b == RatExpr::Empty)
    }

    pub fn atom(l: L) -> Self {
        RatExpr::Atom(l)
    }

    /// Union with `Empty` dropped and duplicates removed.
    pub fn union(items: Vec<RatExpr<L>>) -> Self {
        let mut out: Vec<RatExpr<L>> = Vec::new();
        for it in items {
            match it {
                RatExpr::Empty => {}
                RatExpr::Union(inner) => {
                    for x in inner {
                        if !out.contains(&x) {
                            out.push(x);
                        }
                    }
                }
                x => {
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        match out.len() {
            0 => RatExpr::Empty,
            1 => out.pop().unwrap(),
            _ => RatExpr::Union(out),
        }
    }

    /// Concatenation; any `Empty` factor absorbs, empty products vanish.
    pub fn concat(items: Vec<RatExpr<L>>) -> Self {
        let mut out = Vec::new();
        for it in items {
            match it {
                RatExpr::Empty => return RatExpr::Empty,
                x if x.is_one() => {}
                RatExpr::Concat(inner) => out.extend(inner),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => RatExpr::one(),
            1 => out.pop().unwrap(),
            _ => RatExpr::Concat(out),
        }
    }

    pub fn star(e: RatExpr<L>) -> Self {
        match e {
            RatExpr::Empty => RatExpr::one(),
            s @ RatExpr::Star(_) => s,
            x => RatExpr::Star(Box::new(x)),
        }
    }

    pub fn map_atoms<M, F: FnMut(&L) -> RatExpr<M>>(&self, f: &mut F) -> RatExpr<M>
    where
        M: Clone + PartialEq,
    {
        match self {
            RatExpr::Empty => RatExpr::Empty,
            RatExpr::Atom(l) => f(l),
            RatExpr::Union(v) => RatExpr::union(v.iter().map(|x| x.map_atoms(f)).collect()),
            RatExpr::Concat(v) => RatExpr::concat(v.iter().map(|x| x.map_atoms(f)).collect()),
            RatExpr::Star(b) => RatExpr::star(b.map_atoms(f)),
        }
    }

    pub fn atoms(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            RatExpr::Empty => {}
            RatExpr::Atom(l) => out.push(l),
            RatExpr::Union(v) | RatExpr::Concat(v) => v.iter().for_each(|x| x.collect_atoms(out)),
            RatExpr::Star(b) => b.collect_atoms(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RatExpr::Empty | RatExpr::Atom(_) => 1,
            RatExpr::Union(v) | RatExpr::Concat(v) => 1 + v.iter().map(|x| x.size()).sum::<usize>(),
            RatExpr::Star(b) => 1 + b.size(),
        }
    }
}

/// Basis `B(e)`: finite labels for finite sets, `B(L*) = B(L)`, unions
/// merge, a concatenation is empty unless both sides have a nonempty basis.
pub fn basis<L: Clone + Ord>(e: &RatExpr<L>) -> BTreeSet<L> {
    match e {
        RatExpr::Empty => BTreeSet::new(),
        RatExpr::Atom(l) => BTreeSet::from([l.clone()]),
        RatExpr::Star(b) => basis(b),
        RatExpr::Union(v) => v.iter().flat_map(|x| basis(x)).collect(),
        RatExpr::Concat(v) => {
            let mut acc = BTreeSet::new();
            for x in v {
                let b = basis(x);
                if b.is_empty() {
                    return BTreeSet::new();
                }
                acc.extend(b);
            }
            acc
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition<L> {
    pub from: usize,
    /// `None` is an ε-transition.
    pub label: Option<L>,
    pub to: usize,
}

/// Finite automaton with states `0..num_states` and labels of type `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledNfa<L> {
    num_states: usize,
    initial: BTreeSet<usize>,
    finals: BTreeSet<usize>,
    transitions: Vec<Transition<L>>,
}

impl<L> Default for LabeledNfa<L> {
    fn default() -> Self {
        LabeledNfa {
            num_states: 0,
            initial: BTreeSet::new(),
            finals: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }
}

impl<L: Clone> LabeledNfa<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_states(n: usize) -> Self {
        LabeledNfa {
            num_states: n,
            ..Self::default()
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn set_initial(&mut self, s: usize) {
        assert!(s < self.num_states);
        self.initial.insert(s);
    }

    pub fn set_final(&mut self, s: usize) {
        assert!(s < self.num_states);
        self.finals.insert(s);
    }

    pub fn add_transition(&mut self, from: usize, label: Option<L>, to: usize) {
        assert!(from < self.num_states && to < self.num_states);
        self.transitions.push(Transition { from, label, to });
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn is_initial(&self, s: usize) -> bool {
        self.initial.contains(&s)
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals.contains(&s)
    }

    pub fn transitions(&self) -> &[Transition<L>] {
        &self.transitions
    }

    /// A single-transition automaton accepting `{l}`.
    pub fn single(l: L) -> Self {
        let mut a = Self::with_states(2);
        a.set_initial(0);
        a.set_final(1);
        a.add_transition(0, Some(l), 1);
        a
    }

    /// Accepts only the empty product.
    pub fn epsilon() -> Self {
        let mut a = Self::with_states(1);
        a.set_initial(0);
        a.set_final(0);
        a
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            succ[t.from].push(t.to);
        }
        succ
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            pred[t.to].push(t.from);
        }
        pred
    }

    fn closure_from(adj: &[Vec<usize>], start: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in start {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &t in &adj[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn reachable(&self) -> Vec<bool> {
        Self::closure_from(&self.successors(), self.initial.iter().copied())
    }

    pub fn coreachable(&self) -> Vec<bool> {
        Self::closure_from(&self.predecessors(), self.finals.iter().copied())
    }

    /// No initial-to-final path exists.
    pub fn is_empty(&self) -> bool {
        let r = self.reachable();
        !self.finals.iter().any(|&f| r[f])
    }

    /// Keeps only states on some accepting path, renumbered in order.
    pub fn trim(&self) -> Self {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = (0..self.num_states).map(|s| r[s] && c[s]).collect();
        self.restrict_states(&keep)
    }

    /// Sub-automaton on the states with `keep[s]`.
    pub fn restrict_states(&self, keep: &[bool]) -> Self {
        let mut map = vec![usize::MAX; self.num_states];
        let mut n = 0;
        for s in 0..self.num_states {
            if keep[s] {
                map[s] = n;
                n += 1;
            }
        }
        let mut out = Self::with_states(n);
        for &s in &self.initial {
            if keep[s] {
                out.initial.insert(map[s]);
            }
        }
        for &s in &self.finals {
            if keep[s] {
                out.finals.insert(map[s]);
            }
        }
        for t in &self.transitions {
            if keep[t.from] && keep[t.to] {
                out.transitions.push(Transition {
                    from: map[t.from],
                    label: t.label.clone(),
                    to: map[t.to],
                });
            }
        }
        out
    }

    /// Same states, only transitions whose label passes `keep` (ε kept).
    pub fn filter_transitions<F: Fn(&L) -> bool>(&self, keep: F) -> Self {
        let mut out = self.clone();
        out.transitions
            .retain(|t| t.label.as_ref().is_none_or(&keep));
        out
    }

    /// Same graph with explicit initial and final sets.
    pub fn with_endpoints(&self, initial: &[usize], finals: &[usize]) -> Self {
        let mut out = self.clone();
        out.initial = initial.iter().copied().collect();
        out.finals = finals.iter().copied().collect();
        out
    }

    pub fn map_labels<M: Clone, F: FnMut(&L) -> M>(&self, mut f: F) -> LabeledNfa<M> {
        LabeledNfa {
            num_states: self.num_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    from: t.from,
                    label: t.label.as_ref().map(&mut f),
                    to: t.to,
                })
                .collect(),
        }
    }

    /// Replaces every labelled transition by a chain of labels (empty chain
    /// becomes ε).
    pub fn expand_labels<M: Clone, F: FnMut(&L) -> Vec<M>>(&self, mut f: F) -> LabeledNfa<M> {
        let mut out = LabeledNfa::<M>::with_states(self.num_states);
        out.initial = self.initial.clone();
        out.finals = self.finals.clone();
        for t in &self.transitions {
            match &t.label {
                None => out.add_transition(t.from, None, t.to),
                Some(l) => {
                    let chain = f(l);
                    if chain.is_empty() {
                        out.add_transition(t.from, None, t.to);
                        continue;
                    }
                    let mut cur = t.from;
                    let last = chain.len() - 1;
                    for (i, m) in chain.into_iter().enumerate() {
                        let next = if i == last { t.to } else { out.add_state() };
                        out.add_transition(cur, Some(m), next);
                        cur = next;
                    }
                }
            }
        }
        out
    }

    /// Disjoint copy of `other` inside `self`; returns the state offset.
    fn absorb(&mut self, other: &Self) -> usize {
        let off = self.num_states;
        self.num_states += other.num_states;
        for t in &other.transitions {
            self.transitions.push(Transition {
                from: t.from + off,
                label: t.label.clone(),
                to: t.to + off,
            });
        }
        off
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let off = out.absorb(other);
        out.initial.extend(other.initial.iter().map(|s| s + off));
        out.finals.extend(other.finals.iter().map(|s| s + off));
        out
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let off = out.absorb(other);
        let old_finals = std::mem::take(&mut out.finals);
        for &f in &old_finals {
            for &i in &other.initial {
                out.transitions.push(Transition {
                    from: f,
                    label: None,
                    to: i + off,
                });
            }
        }
        out.finals = other.finals.iter().map(|s| s + off).collect();
        out
    }

    pub fn star(&self) -> Self {
        let mut out = Self::with_states(1);
        out.initial.insert(0);
        out.finals.insert(0);
        let off = out.absorb(self);
        for &i in &self.initial {
            out.transitions.push(Transition {
                from: 0,
                label: None,
                to: i + off,
            });
        }
        for &f in &self.finals {
            out.transitions.push(Transition {
                from: f + off,
                label: None,
                to: 0,
            });
        }
        out
    }

    /// ε-closure of a set of states.
    pub fn eps_closure(&self, states: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut eps = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            if t.label.is_none() {
                eps[t.from].push(t.to);
            }
        }
        let seen = Self::closure_from(&eps, states.iter().copied());
        (0..self.num_states).filter(|&s| seen[s]).collect()
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|t| t.label.is_none())
    }
}

impl<L: Clone + Ord> LabeledNfa<L> {
    /// Equivalent automaton without ε-transitions, trimmed, duplicate
    /// transitions removed.
    pub fn remove_epsilon(&self) -> Self {
        let mut eps = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            if t.label.is_none() {
                eps[t.from].push(t.to);
            }
        }
        let mut out = Self::with_states(self.num_states);
        out.initial = self.initial.clone();
        let mut trans = BTreeSet::new();
        for p in 0..self.num_states {
            let cl = Self::closure_from(&eps, [p]);
            for q in 0..self.num_states {
                if !cl[q] {
                    continue;
                }
                if self.finals.contains(&q) {
                    out.finals.insert(p);
                }
            }
            for t in &self.transitions {
                if let Some(l) = &t.label {
                    if cl[t.from] {
                        trans.insert((p, l.clone(), t.to));
                    }
                }
            }
        }
        out.transitions = trans
            .into_iter()
            .map(|(from, l, to)| Transition {
                from,
                label: Some(l),
                to,
            })
            .collect();
        out.trim()
    }

    /// Distinct labels occurring on transitions.
    pub fn labels(&self) -> BTreeSet<L> {
        self.transitions
            .iter()
            .filter_map(|t| t.label.clone())
            .collect()
    }
}

/// Thompson-style construction.
pub fn expr_to_nfa<L: Clone + PartialEq>(e: &RatExpr<L>) -> LabeledNfa<L> {
    match e {
        RatExpr::Empty => {
            let mut a = LabeledNfa::with_states(1);
            a.set_initial(0);
            a
        }
        RatExpr::Atom(l) => LabeledNfa::single(l.clone()),
        RatExpr::Union(v) => {
            let mut acc = LabeledNfa::<L>::new();
            for x in v {
                acc = acc.union(&expr_to_nfa(x));
            }
            if acc.num_states == 0 {
                expr_to_nfa(&RatExpr::Empty)
            } else {
                acc
            }
        }
        RatExpr::Concat(v) => {
            let mut acc = LabeledNfa::epsilon();
            for x in v {
                acc = acc.concat(&expr_to_nfa(x));
            }
            acc
        }
        RatExpr::Star(b) => expr_to_nfa(b).star(),
    }
}

pub fn nfa_trim<L: Clone>(a: &LabeledNfa<L>) -> LabeledNfa<L> {
    a.trim()
}

pub fn is_empty<L: Clone>(a: &LabeledNfa<L>) -> bool {
    a.is_empty()
}

/// Expression for the products of `filter`-passing labels along `p → q`
/// paths that use only `filter`-passing transitions (and ε). Computed by
/// state elimination, lowest-degree state first.
pub fn between_states_expr<L, F>(a: &LabeledNfa<L>, p: usize, q: usize, filter: F) -> RatExpr<L>
where
    L: Clone + PartialEq,
    F: Fn(&L) -> bool,
{
    let n = a.num_states();
    let start = n;
    let end = n + 1;
    let mut edges: BTreeMap<(usize, usize), RatExpr<L>> = BTreeMap::new();
    let add = |edges: &mut BTreeMap<(usize, usize), RatExpr<L>>, i, j, e: RatExpr<L>| {
        let cur = edges.remove(&(i, j)).unwrap_or(RatExpr::Empty);
        let u = RatExpr::union(vec![cur, e]);
        if u != RatExpr::Empty {
            edges.insert((i, j), u);
        }
    };
    for t in a.transitions() {
        let e = match &t.label {
            None => RatExpr::one(),
            Some(l) if filter(l) => RatExpr::Atom(l.clone()),
            Some(_) => continue,
        };
        add(&mut edges, t.from, t.to, e);
    }
    add(&mut edges, start, p, RatExpr::one());
    add(&mut edges, q, end, RatExpr::one());

    let mut alive: BTreeSet<usize> = (0..n).collect();
    while !alive.is_empty() {
        // lowest-degree state first
        let k = *alive
            .iter()
            .min_by_key(|&&s| {
                edges
                    .keys()
                    .filter(|(i, j)| (*i == s) != (*j == s))
                    .count()
            })
            .unwrap();
        alive.remove(&k);
        let self_loop = edges.remove(&(k, k));
        let loop_star = self_loop.map(RatExpr::star).unwrap_or_else(RatExpr::one);
        let ins: Vec<(usize, RatExpr<L>)> = edges
            .iter()
            .filter(|((_, j), _)| *j == k)
            .map(|((i, _), e)| (*i, e.clone()))
            .collect();
        let outs: Vec<(usize, RatExpr<L>)> = edges
            .iter()
            .filter(|((i, _), _)| *i == k)
            .map(|((_, j), e)| (*j, e.clone()))
            .collect();
        edges.retain(|(i, j), _| *i != k && *j != k);
        for (i, ei) in &ins {
            for (j, ej) in &outs {
                let e = RatExpr::concat(vec![ei.clone(), loop_star.clone(), ej.clone()]);
                add(&mut edges, *i, *j, e);
            }
        }
    }
    edges.remove(&(start, end)).unwrap_or(RatExpr::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linear::Mat2;
    use crate::oracle::{enumerate_products, eval_expr};

    fn t() -> Mat2 {
        Mat2::from_ints(1, 1, 0, 1)
    }
    fn s() -> Mat2 {
        Mat2::from_ints(0, -1, 1, 0)
    }

    fn prods(a: &LabeledNfa<Mat2>, len: usize) -> BTreeSet<Mat2> {
        enumerate_products(a, len, 1 << 20).unwrap().into_keys().collect()
    }

    #[test]
    fn expr_to_nfa_examples() {
        let e: RatExpr<Mat2> = RatExpr::Empty;
        assert!(expr_to_nfa(&e).is_empty());
        let a = expr_to_nfa(&RatExpr::Atom(t()));
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.transitions().len(), 1);
        let st = expr_to_nfa(&RatExpr::star(RatExpr::Atom(t())));
        let p = prods(&st, 3);
        let want: BTreeSet<Mat2> = (0..4).map(|k| t().pow(k)).collect();
        assert_eq!(p, want);
    }

    #[test]
    fn trim_examples() {
        let a = expr_to_nfa(&RatExpr::Concat(vec![RatExpr::Atom(t()), RatExpr::Atom(s())]));
        let tr = a.trim();
        assert_eq!(tr.trim(), tr);

        let mut b = a.clone();
        let dead = b.add_state();
        b.add_transition(dead, Some(t()), 0);
        let tb = b.trim();
        assert!(tb.num_states() < b.num_states());
        assert_eq!(prods(&tb, 4), prods(&b, 4));

        let mut c = LabeledNfa::<Mat2>::with_states(2);
        c.set_initial(0);
        c.add_transition(0, Some(t()), 1);
        assert_eq!(c.trim().num_states(), 0);
    }

    #[test]
    fn basis_examples() {
        let x = Mat2::from_ints(2, 0, 0, 1);
        let y = t();
        assert!(basis::<Mat2>(&RatExpr::Empty).is_empty());
        assert!(basis(&RatExpr::Concat(vec![RatExpr::Atom(x.clone()), RatExpr::Empty])).is_empty());
        let u = RatExpr::Union(vec![RatExpr::Atom(x.clone()), RatExpr::star(RatExpr::Atom(y.clone()))]);
        assert_eq!(basis(&u), BTreeSet::from([x, y]));
    }

    #[test]
    fn emptiness_examples() {
        assert!(!expr_to_nfa(&RatExpr::Atom(t())).trim().is_empty());
        assert!(expr_to_nfa::<Mat2>(&RatExpr::Empty).is_empty());
        assert!(!expr_to_nfa::<Mat2>(&RatExpr::Star(Box::new(RatExpr::Empty))).is_empty());
    }

    #[test]
    fn between_states_examples() {
        let mut a = LabeledNfa::<Mat2>::with_states(2);
        a.set_initial(0);
        a.set_final(1);
        assert!(between_states_expr(&a, 0, 0, |_| true).is_one());
        a.add_transition(0, Some(t()), 1);
        assert_eq!(between_states_expr(&a, 0, 1, |_| true), RatExpr::Atom(t()));
        a.add_transition(0, Some(s()), 1);
        let e = between_states_expr(&a, 0, 1, |_| true);
        let got: BTreeSet<Mat2> = eval_expr(&e, 3).into_keys().collect();
        assert_eq!(got, BTreeSet::from([t(), s()]));
        // filtered out label disappears
        let e = between_states_expr(&a, 0, 1, |m| *m != s());
        assert_eq!(e, RatExpr::Atom(t()));
    }

    #[test]
    fn between_states_with_loops_matches_sub_automaton() {
        // 0 -T-> 1 -S-> 2, loop T at 1, back edge 2 -S-> 0
        let mut a = LabeledNfa::<Mat2>::with_states(3);
        a.set_initial(0);
        a.set_final(2);
        a.add_transition(0, Some(t()), 1);
        a.add_transition(1, Some(t()), 1);
        a.add_transition(1, Some(s()), 2);
        a.add_transition(2, Some(s()), 0);
        for (p, q) in [(0, 2), (1, 0), (2, 2), (0, 1)] {
            let e = between_states_expr(&a, p, q, |_| true);
            let via_expr: BTreeSet<Mat2> = eval_expr(&e, 4).into_keys().collect();
            let sub = a.with_endpoints(&[p], &[q]);
            let via_nfa = prods(&sub, 4);
            // every short product of the sub-automaton is denoted, and
            // everything the expression denotes at length <= 4 is a product
            // of the sub-automaton at some length
            assert!(via_nfa.is_subset(&via_expr), "{p}->{q}");
            let longer = prods(&sub, 12);
            assert!(via_expr.is_subset(&longer), "{p}->{q}");
        }
    }
}
