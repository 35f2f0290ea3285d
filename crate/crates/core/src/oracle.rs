//! Brute-force ground truth: bounded-length enumeration of products.
//!
//! Nothing here calls into the decision procedures; it only multiplies
//! matrices along paths. It can prove membership, never non-membership.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automata::{LabeledNfa, RatExpr};
use crate::error::{Error, Result};
use crate::exact_linear::Mat2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    /// A label sequence whose product is the queried matrix.
    Member(Vec<Mat2>),
    NotFoundUpTo(usize),
}

pub fn product(labels: &[Mat2]) -> Mat2 {
    labels
        .iter()
        .fold(Mat2::identity(), |acc, m| acc.mul(m))
}

/// All products of accepted label sequences of length `≤ max_len`, each with
/// a shortest witness. `budget` bounds the number of (state, product)
/// configurations explored.
pub fn enumerate_products(
    a: &LabeledNfa<Mat2>,
    max_len: usize,
    budget: usize,
) -> Result<BTreeMap<Mat2, Vec<Mat2>>> {
    let mut seen: HashMap<(usize, Mat2), (usize, Vec<Mat2>)> = HashMap::new();
    let mut queue: VecDeque<(usize, Mat2)> = VecDeque::new();
    let mut out_edges: Vec<Vec<(Option<&Mat2>, usize)>> = vec![Vec::new(); a.num_states()];
    for t in a.transitions() {
        out_edges[t.from].push((t.label.as_ref(), t.to));
    }
    for &i in a.initial() {
        let key = (i, Mat2::identity());
        if !seen.contains_key(&key) {
            seen.insert(key.clone(), (0, Vec::new()));
            queue.push_back(key);
        }
    }
    // 0-1 BFS: ε edges cost nothing, labels cost one
    while let Some(key) = queue.pop_front() {
        let (len, wit) = seen[&key].clone();
        let (state, prod) = key;
        for &(label, to) in &out_edges[state] {
            let (nlen, nprod, nwit) = match label {
                None => (len, prod.clone(), wit.clone()),
                Some(m) => {
                    if len + 1 > max_len {
                        continue;
                    }
                    let mut w = wit.clone();
                    w.push(m.clone());
                    (len + 1, prod.mul(m), w)
                }
            };
            let nkey = (to, nprod);
            match seen.get(&nkey) {
                Some((l, _)) if *l <= nlen => continue,
                _ => {}
            }
            if seen.len() >= budget {
                return Err(Error::ResourceLimit {
                    what: "oracle configurations",
                    limit: budget,
                });
            }
            seen.insert(nkey.clone(), (nlen, nwit));
            if label.is_none() {
                queue.push_front(nkey);
            } else {
                queue.push_back(nkey);
            }
        }
    }
    let mut out: BTreeMap<Mat2, Vec<Mat2>> = BTreeMap::new();
    for ((state, prod), (_, wit)) in seen {
        if a.is_final(state) {
            match out.get(&prod) {
                Some(w) if w.len() <= wit.len() => {}
                _ => {
                    out.insert(prod, wit);
                }
            }
        }
    }
    Ok(out)
}

pub fn oracle_member(g: &Mat2, a: &LabeledNfa<Mat2>, max_len: usize) -> Result<OracleAnswer> {
    let all = enumerate_products(a, max_len, 1 << 22)?;
    Ok(match all.get(g) {
        Some(w) => OracleAnswer::Member(w.clone()),
        None => OracleAnswer::NotFoundUpTo(max_len),
    })
}

/// Direct evaluation of an expression: products of at most `max_len` atoms,
/// each with a shortest witness.
pub fn eval_expr(e: &RatExpr<Mat2>, max_len: usize) -> BTreeMap<Mat2, Vec<Mat2>> {
    match e {
        RatExpr::Empty => BTreeMap::new(),
        RatExpr::Atom(m) => {
            if max_len >= 1 {
                BTreeMap::from([(m.clone(), vec![m.clone()])])
            } else {
                BTreeMap::new()
            }
        }
        RatExpr::Union(v) => {
            let mut out = BTreeMap::new();
            for x in v {
                merge(&mut out, eval_expr(x, max_len));
            }
            out
        }
        RatExpr::Concat(v) => {
            let mut acc = BTreeMap::from([(Mat2::identity(), Vec::new())]);
            for x in v {
                let right = eval_expr(x, max_len);
                acc = combine(&acc, &right, max_len);
            }
            acc
        }
        RatExpr::Star(b) => {
            let body = eval_expr(b, max_len);
            let mut acc = BTreeMap::from([(Mat2::identity(), Vec::new())]);
            loop {
                let next = combine(&acc, &body, max_len);
                let before = fingerprint(&acc);
                merge(&mut acc, next);
                if fingerprint(&acc) == before {
                    break;
                }
            }
            acc
        }
    }
}

fn fingerprint(m: &BTreeMap<Mat2, Vec<Mat2>>) -> (usize, usize) {
    (m.len(), m.values().map(|w| w.len()).sum())
}

fn merge(into: &mut BTreeMap<Mat2, Vec<Mat2>>, from: BTreeMap<Mat2, Vec<Mat2>>) {
    for (k, w) in from {
        match into.get(&k) {
            Some(old) if old.len() <= w.len() => {}
            _ => {
                into.insert(k, w);
            }
        }
    }
}

fn combine(
    left: &BTreeMap<Mat2, Vec<Mat2>>,
    right: &BTreeMap<Mat2, Vec<Mat2>>,
    max_len: usize,
) -> BTreeMap<Mat2, Vec<Mat2>> {
    let mut out = BTreeMap::new();
    for (p, wp) in left {
        for (q, wq) in right {
            if wp.len() + wq.len() > max_len {
                continue;
            }
            let mut w = wp.clone();
            w.extend(wq.iter().cloned());
            merge(&mut out, BTreeMap::from([(p.mul(q), w)]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::expr_to_nfa;
    use std::collections::BTreeSet;

    fn t() -> Mat2 {
        Mat2::from_ints(1, 1, 0, 1)
    }

    #[test]
    fn enumerate_examples() {
        let a = expr_to_nfa(&RatExpr::star(RatExpr::Atom(t())));
        let got: BTreeSet<Mat2> = enumerate_products(&a, 3, 1000).unwrap().into_keys().collect();
        assert_eq!(got, (0..4).map(|k| t().pow(k)).collect());

        let e = expr_to_nfa::<Mat2>(&RatExpr::Empty);
        assert!(enumerate_products(&e, 3, 1000).unwrap().is_empty());

        let s0 = Mat2::from_ints(1, 0, 0, 0);
        let z = expr_to_nfa(&RatExpr::Concat(vec![
            RatExpr::Atom(s0),
            RatExpr::Atom(Mat2::from_ints(0, 0, 0, 1)),
        ]));
        let got: BTreeSet<Mat2> = enumerate_products(&z, 2, 1000).unwrap().into_keys().collect();
        assert_eq!(got, BTreeSet::from([Mat2::zero()]));
    }

    #[test]
    fn member_examples() {
        let a = expr_to_nfa(&RatExpr::star(RatExpr::Atom(t())));
        assert_eq!(
            oracle_member(&t().pow(2), &a, 3).unwrap(),
            OracleAnswer::Member(vec![t(), t()])
        );
        let d = expr_to_nfa(&RatExpr::star(RatExpr::Atom(Mat2::from_ints(1, 0, 0, 2))));
        assert_eq!(
            oracle_member(&Mat2::from_ints(1, 0, 0, 3), &d, 5).unwrap(),
            OracleAnswer::NotFoundUpTo(5)
        );
        assert_eq!(
            oracle_member(&Mat2::zero(), &a, 5).unwrap(),
            OracleAnswer::NotFoundUpTo(5)
        );
    }

    #[test]
    fn witnesses_remultiply_and_bounds_are_monotone() {
        let s = Mat2::from_ints(0, -1, 1, 0);
        let e = RatExpr::star(RatExpr::Union(vec![RatExpr::Atom(t()), RatExpr::Atom(s)]));
        let a = expr_to_nfa(&e);
        let small = enumerate_products(&a, 3, 1 << 16).unwrap();
        let large = enumerate_products(&a, 5, 1 << 16).unwrap();
        for (g, w) in &small {
            assert_eq!(&product(w), g);
            assert!(large.contains_key(g));
        }
        let direct = eval_expr(&e, 3);
        assert_eq!(
            direct.keys().collect::<Vec<_>>(),
            small.keys().collect::<Vec<_>>()
        );
    }
}
