//! Rational subsets of the free group on `{x, y}` as automata over the
//! letters `x, X = x⁻¹, y, Y = y⁻¹`.
//!
//! A [`WordNfa`] denotes the image of its accepted words in the free group.
//! After Benois saturation and restriction to reduced words, the accepted
//! words are exactly the reduced forms of that image, so Boolean operations
//! reduce to ordinary regular-language operations inside the reduced words.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::LabeledNfa;
use crate::error::{Error, Limits, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    XInv,
    Y,
    YInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::X, Letter::XInv, Letter::Y, Letter::YInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::Y => Letter::YInv,
            Letter::YInv => Letter::Y,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'x' => Some(Letter::X),
            'X' => Some(Letter::XInv),
            'y' => Some(Letter::Y),
            'Y' => Some(Letter::YInv),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::XInv => 'X',
            Letter::Y => 'y',
            Letter::YInv => 'Y',
        }
    }
}

/// Freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Option<ReducedWord> {
        let letters: Option<Vec<Letter>> = s.chars().map(Letter::from_char).collect();
        Some(reduce_word(&letters?))
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

pub fn reduce_word(w: &[Letter]) -> ReducedWord {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    ReducedWord(stack)
}

/// All reduced words of length at most `n`, shortlex order.
pub fn reduced_words_up_to(n: usize) -> Vec<ReducedWord> {
    let mut out = vec![ReducedWord::default()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in Letter::ALL {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(ReducedWord));
        layer = next;
    }
    out
}

/// Word automaton denoting a subset of the free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordNfa {
    pub nfa: LabeledNfa<Letter>,
    saturated: bool,
    reduced_language: bool,
}

impl WordNfa {
    pub fn new(nfa: LabeledNfa<Letter>) -> Self {
        WordNfa {
            nfa,
            saturated: false,
            reduced_language: false,
        }
    }

    pub fn empty() -> Self {
        WordNfa {
            nfa: LabeledNfa::new(),
            saturated: true,
            reduced_language: true,
        }
    }

    /// Automaton accepting exactly the given words (unreduced words allowed).
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a [Letter]>) -> Self {
        let mut nfa = LabeledNfa::with_states(1);
        nfa.set_initial(0);
        for w in words {
            let mut cur = 0;
            for &l in w {
                let next = nfa.add_state();
                nfa.add_transition(cur, Some(l), next);
                cur = next;
            }
            if w.is_empty() {
                nfa.set_final(0);
            } else {
                nfa.set_final(cur);
            }
        }
        WordNfa::new(nfa)
    }

    pub fn from_strs(words: &[&str]) -> Self {
        let parsed: Vec<Vec<Letter>> = words
            .iter()
            .map(|s| s.chars().map(|c| Letter::from_char(c).expect("letter")).collect())
            .collect();
        Self::from_words(parsed.iter().map(|w| w.as_slice()))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn is_reduced_language(&self) -> bool {
        self.reduced_language
    }

    pub fn is_empty(&self) -> bool {
        self.nfa.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.nfa.num_states()
    }

    /// Plain automaton acceptance of a letter sequence.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut cur = self.nfa.eps_closure(self.nfa.initial());
        for &l in w {
            let next: BTreeSet<usize> = self
                .nfa
                .transitions()
                .iter()
                .filter(|t| t.label == Some(l) && cur.contains(&t.from))
                .map(|t| t.to)
                .collect();
            if next.is_empty() {
                return false;
            }
            cur = self.nfa.eps_closure(&next);
        }
        cur.iter().any(|&s| self.nfa.is_final(s))
    }

    /// Saturate and restrict unless already in reduced form.
    pub fn normalized(&self, limits: &Limits) -> Result<WordNfa> {
        if self.reduced_language {
            return Ok(self.clone());
        }
        fg_restrict_reduced(&benois_saturate(self, limits)?)
    }

    /// Accepted words of length `≤ n` (as letter sequences, not reduced).
    pub fn words_up_to(&self, n: usize) -> BTreeSet<Vec<Letter>> {
        let mut out = BTreeSet::new();
        let mut seen: BTreeSet<(usize, Vec<Letter>)> = BTreeSet::new();
        let mut queue: VecDeque<(usize, Vec<Letter>)> = VecDeque::new();
        for &i in self.nfa.initial() {
            if seen.insert((i, Vec::new())) {
                queue.push_back((i, Vec::new()));
            }
        }
        while let Some((s, w)) = queue.pop_front() {
            if self.nfa.is_final(s) {
                out.insert(w.clone());
            }
            for t in self.nfa.transitions().iter().filter(|t| t.from == s) {
                let mut nw = w.clone();
                if let Some(l) = t.label {
                    if w.len() >= n {
                        continue;
                    }
                    nw.push(l);
                }
                if seen.insert((t.to, nw.clone())) {
                    queue.push_back((t.to, nw));
                }
            }
        }
        out
    }
}

/// Benois saturation: add `p –ε→ q` whenever `p –a→ r –ε*→ r' –a⁻¹→ q`,
/// until closure.
pub fn benois_saturate(a: &WordNfa, limits: &Limits) -> Result<WordNfa> {
    if a.saturated {
        return Ok(a.clone());
    }
    let nfa = a.nfa.trim();
    let n = nfa.num_states();
    let mut eps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    // letter adjacency, indexed by letter
    let mut fwd: Vec<[Vec<usize>; 4]> = vec![Default::default(); n];
    for t in nfa.transitions() {
        match t.label {
            None => {
                eps[t.from].insert(t.to);
            }
            Some(l) => fwd[t.from][l.index()].push(t.to),
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > limits.saturation {
            return Err(Error::ResourceLimit {
                what: "saturation rounds",
                limit: limits.saturation,
            });
        }
        let closure: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(x) = stack.pop() {
                    for &y in &eps[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                (0..n).filter(|&y| seen[y]).collect()
            })
            .collect();
        let mut added = Vec::new();
        for p in 0..n {
            for l in Letter::ALL {
                for &r in &fwd[p][l.index()] {
                    for &r2 in &closure[r] {
                        for &q in &fwd[r2][l.inverse().index()] {
                            if q != p && !eps[p].contains(&q) {
                                added.push((p, q));
                            }
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (p, q) in added {
            eps[p].insert(q);
        }
    }
    let mut out = LabeledNfa::with_states(n);
    for &i in nfa.initial() {
        out.set_initial(i);
    }
    for &f in nfa.finals() {
        out.set_final(f);
    }
    for t in nfa.transitions() {
        if t.label.is_some() {
            out.add_transition(t.from, t.label, t.to);
        }
    }
    for (p, qs) in eps.iter().enumerate() {
        for &q in qs {
            out.add_transition(p, None, q);
        }
    }
    Ok(WordNfa {
        nfa: out,
        saturated: true,
        reduced_language: false,
    })
}

/// Intersect a saturated automaton with the reduced words.
pub fn fg_restrict_reduced(a: &WordNfa) -> Result<WordNfa> {
    if !a.saturated {
        return Err(Error::Unsupported(
            "restriction to reduced words needs a saturated automaton".into(),
        ));
    }
    let src = a.nfa.remove_epsilon();
    // DFA of reduced words: state 4 = start, else index of last letter
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = LabeledNfa::new();
    let mut queue = VecDeque::new();
    fn get(
        index: &mut HashMap<(usize, usize), usize>,
        out: &mut LabeledNfa<Letter>,
        queue: &mut VecDeque<(usize, usize)>,
        key: (usize, usize),
    ) -> usize {
        *index.entry(key).or_insert_with(|| {
            queue.push_back(key);
            out.add_state()
        })
    }
    for &i in src.initial() {
        let id = get(&mut index, &mut out, &mut queue, (i, 4));
        out.set_initial(id);
    }
    let mut by_src: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); src.num_states()];
    for t in src.transitions() {
        by_src[t.from].push((t.label.unwrap(), t.to));
    }
    while let Some((p, last)) = queue.pop_front() {
        let id = index[&(p, last)];
        if src.is_final(p) {
            out.set_final(id);
        }
        for &(l, q) in &by_src[p] {
            if last != 4 && Letter::ALL[last] == l.inverse() {
                continue;
            }
            let nid = get(&mut index, &mut out, &mut queue, (q, l.index()));
            out.add_transition(id, Some(l), nid);
        }
    }
    Ok(WordNfa {
        nfa: out.trim(),
        saturated: true,
        reduced_language: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

pub fn fg_boolean(op: BoolOp, a: &WordNfa, b: &WordNfa, limits: &Limits) -> Result<WordNfa> {
    if !a.reduced_language || !b.reduced_language {
        return Err(Error::Unsupported(
            "Boolean operations need reduced-language automata".into(),
        ));
    }
    let nfa = match op {
        BoolOp::Union => a.nfa.union(&b.nfa),
        BoolOp::Intersection => intersect(&a.nfa.remove_epsilon(), &b.nfa.remove_epsilon(), limits)?,
        BoolOp::Difference => difference(&a.nfa.remove_epsilon(), &b.nfa.remove_epsilon(), limits)?,
    };
    Ok(WordNfa {
        nfa: nfa.trim(),
        saturated: true,
        reduced_language: true,
    })
}

fn letter_table(a: &LabeledNfa<Letter>) -> Vec<[Vec<usize>; 4]> {
    let mut tab: Vec<[Vec<usize>; 4]> = vec![Default::default(); a.num_states()];
    for t in a.transitions() {
        tab[t.from][t.label.unwrap().index()].push(t.to);
    }
    tab
}

fn intersect(a: &LabeledNfa<Letter>, b: &LabeledNfa<Letter>, limits: &Limits) -> Result<LabeledNfa<Letter>> {
    let ta = letter_table(a);
    let tb = letter_table(b);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = LabeledNfa::new();
    let mut queue = VecDeque::new();
    for &i in a.initial() {
        for &j in b.initial() {
            let id = out.add_state();
            index.insert((i, j), id);
            out.set_initial(id);
            queue.push_back((i, j));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let id = index[&(p, q)];
        if a.is_final(p) && b.is_final(q) {
            out.set_final(id);
        }
        for l in 0..4 {
            for &p2 in &ta[p][l] {
                for &q2 in &tb[q][l] {
                    let nid = match index.get(&(p2, q2)) {
                        Some(&x) => x,
                        None => {
                            if out.num_states() >= limits.states {
                                return Err(Error::ResourceLimit {
                                    what: "product states",
                                    limit: limits.states,
                                });
                            }
                            let x = out.add_state();
                            index.insert((p2, q2), x);
                            queue.push_back((p2, q2));
                            x
                        }
                    };
                    out.add_transition(id, Some(Letter::ALL[l]), nid);
                }
            }
        }
    }
    Ok(out)
}

/// `L(a) \ L(b)` by lazily determinizing `b`.
fn difference(a: &LabeledNfa<Letter>, b: &LabeledNfa<Letter>, limits: &Limits) -> Result<LabeledNfa<Letter>> {
    let ta = letter_table(a);
    let tb = letter_table(b);
    let mut subsets: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut subset_list: Vec<BTreeSet<usize>> = Vec::new();
    let mut intern = |s: BTreeSet<usize>, list: &mut Vec<BTreeSet<usize>>| -> usize {
        if let Some(&id) = subsets.get(&s) {
            return id;
        }
        let id = list.len();
        list.push(s.clone());
        subsets.insert(s, id);
        id
    };
    let start = intern(b.initial().clone(), &mut subset_list);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = LabeledNfa::new();
    let mut queue = VecDeque::new();
    for &i in a.initial() {
        let id = out.add_state();
        index.insert((i, start), id);
        out.set_initial(id);
        queue.push_back((i, start));
    }
    while let Some((p, sid)) = queue.pop_front() {
        let id = index[&(p, sid)];
        let subset = subset_list[sid].clone();
        if a.is_final(p) && !subset.iter().any(|&s| b.is_final(s)) {
            out.set_final(id);
        }
        for l in 0..4 {
            if ta[p][l].is_empty() {
                continue;
            }
            let next: BTreeSet<usize> = subset.iter().flat_map(|&s| tb[s][l].iter().copied()).collect();
            let nsid = intern(next, &mut subset_list);
            for &p2 in &ta[p][l] {
                let nid = match index.get(&(p2, nsid)) {
                    Some(&x) => x,
                    None => {
                        if out.num_states() >= limits.states {
                            return Err(Error::ResourceLimit {
                                what: "determinization states",
                                limit: limits.states,
                            });
                        }
                        let x = out.add_state();
                        index.insert((p2, nsid), x);
                        queue.push_back((p2, nsid));
                        x
                    }
                };
                out.add_transition(id, Some(Letter::ALL[l]), nid);
            }
        }
    }
    Ok(out)
}

/// Group-theoretic membership of a reduced word.
pub fn fg_member(w: &ReducedWord, a: &WordNfa, limits: &Limits) -> Result<bool> {
    if a.reduced_language || a.saturated {
        return Ok(a.accepts(w.letters()));
    }
    Ok(benois_saturate(a, limits)?.accepts(w.letters()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    fn norm(a: &WordNfa) -> WordNfa {
        a.normalized(&Limits::default()).unwrap()
    }

    fn accepted_reduced(a: &WordNfa, n: usize) -> BTreeSet<ReducedWord> {
        let r = norm(a);
        r.words_up_to(n).iter().map(|v| ReducedWord(v.clone())).collect()
    }

    #[test]
    fn reduce_examples() {
        assert!(w("xX").is_empty());
        assert_eq!(w("xyY"), w("x"));
        assert!(w("xYyX").is_empty());
        assert_eq!(reduce_word(&[Letter::Y, Letter::Y]).len(), 2);
    }

    #[test]
    fn saturation_examples() {
        let l = Limits::default();
        let a = WordNfa::from_strs(&["xX"]);
        let s = benois_saturate(&a, &l).unwrap();
        assert!(s.is_saturated());
        assert!(s.accepts(&[]));

        let mut cat = WordNfa::from_strs(&["xy"]).nfa;
        cat = cat.concat(&WordNfa::from_strs(&["Y"]).nfa);
        let b = WordNfa::new(cat);
        assert!(fg_member(&w("x"), &b, &l).unwrap());

        let mut star = LabeledNfa::with_states(1);
        star.set_initial(0);
        star.set_final(0);
        star.add_transition(0, Some(Letter::Y), 0);
        let c = WordNfa::new(star);
        let got = accepted_reduced(&c, 3);
        let want: BTreeSet<ReducedWord> = ["", "y", "yy", "yyy"].iter().map(|s| w(s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn restrict_examples() {
        let r = norm(&WordNfa::from_strs(&["xX"]));
        assert!(r.is_reduced_language());
        assert_eq!(r.words_up_to(4), BTreeSet::from([vec![]]));

        let r = norm(&WordNfa::from_strs(&["xy", "yx"]));
        assert_eq!(accepted_reduced(&r, 4), BTreeSet::from([w("xy"), w("yx")]));

        let r = norm(&WordNfa::from_strs(&["xxX"]));
        assert_eq!(accepted_reduced(&r, 4), BTreeSet::from([w("x")]));
    }

    #[test]
    fn boolean_examples() {
        let l = Limits::default();
        let a = norm(&WordNfa::from_strs(&["x", "y", "xy"]));
        assert!(fg_boolean(BoolOp::Difference, &a, &a, &l).unwrap().is_empty());

        let xy = norm(&WordNfa::from_strs(&["x", "y"]));
        let y = norm(&WordNfa::from_strs(&["y"]));
        let i = fg_boolean(BoolOp::Intersection, &xy, &y, &l).unwrap();
        assert_eq!(accepted_reduced(&i, 3), BTreeSet::from([w("y")]));

        // {x}* \ {xx}, checked against enumeration of reduced words
        let mut star = LabeledNfa::with_states(1);
        star.set_initial(0);
        star.set_final(0);
        star.add_transition(0, Some(Letter::X), 0);
        let xs = norm(&WordNfa::new(star));
        let xx = norm(&WordNfa::from_strs(&["xx"]));
        let d = fg_boolean(BoolOp::Difference, &xs, &xx, &l).unwrap();
        for word in reduced_words_up_to(6) {
            let expect = word.letters().iter().all(|&c| c == Letter::X) && word.len() != 2;
            assert_eq!(fg_member(&word, &d, &l).unwrap(), expect, "{word}");
        }
    }

    #[test]
    fn member_examples() {
        let l = Limits::default();
        let mut star = LabeledNfa::with_states(1);
        star.set_initial(0);
        star.set_final(0);
        star.add_transition(0, Some(Letter::X), 0);
        star.add_transition(0, Some(Letter::YInv), 0);
        assert!(fg_member(&w(""), &WordNfa::new(star), &l).unwrap());

        let mut y = LabeledNfa::with_states(1);
        y.set_initial(0);
        y.set_final(0);
        y.add_transition(0, Some(Letter::Y), 0);
        assert!(!fg_member(&w("x"), &WordNfa::new(y), &l).unwrap());
    }

    /// Reduced images of accepted paths along which every prefix reduces to
    /// a word of length `<= bound`.
    fn image_oracle(a: &WordNfa, bound: usize) -> BTreeSet<ReducedWord> {
        let mut seen: BTreeSet<(usize, ReducedWord)> = BTreeSet::new();
        let mut queue = VecDeque::new();
        for &i in a.nfa.initial() {
            seen.insert((i, ReducedWord::default()));
            queue.push_back((i, ReducedWord::default()));
        }
        while let Some((s, w)) = queue.pop_front() {
            for t in a.nfa.transitions().iter().filter(|t| t.from == s) {
                let mut v = w.letters().to_vec();
                v.extend(t.label);
                let nw = reduce_word(&v);
                if nw.len() <= bound && seen.insert((t.to, nw.clone())) {
                    queue.push_back((t.to, nw));
                }
            }
        }
        seen.into_iter()
            .filter(|(s, _)| a.nfa.is_final(*s))
            .map(|(_, w)| w)
            .collect()
    }

    fn arb_word_nfa() -> impl Strategy<Value = WordNfa> {
        (1usize..=5)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    prop::collection::vec((0..n, 0usize..5, 0..n), 0..=8),
                    prop::collection::vec(any::<bool>(), n),
                )
            })
            .prop_map(|(n, edges, fin)| {
                let mut a = LabeledNfa::with_states(n);
                a.set_initial(0);
                for (i, f) in fin.iter().enumerate() {
                    if *f {
                        a.set_final(i);
                    }
                }
                for (p, l, q) in edges {
                    let label = if l == 4 { None } else { Some(Letter::ALL[l]) };
                    a.add_transition(p, label, q);
                }
                WordNfa::new(a)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn member_agrees_with_reduction_oracle(a in arb_word_nfa()) {
            let l = Limits::default();
            let sound = image_oracle(&a, 6);
            let deep = image_oracle(&a, 10);
            let r = norm(&a);
            for word in reduced_words_up_to(4) {
                let got = fg_member(&word, &r, &l).unwrap();
                if sound.contains(&word) {
                    prop_assert!(got, "missing {}", word);
                }
                if got {
                    prop_assert!(deep.contains(&word), "spurious {}", word);
                }
            }
        }

        #[test]
        fn self_difference_is_empty(a in arb_word_nfa()) {
            let r = norm(&a);
            prop_assert!(fg_boolean(BoolOp::Difference, &r, &r, &Limits::default()).unwrap().is_empty());
        }

        #[test]
        fn intersection_is_a_minus_a_minus_b(a in arb_word_nfa(), b in arb_word_nfa()) {
            let l = Limits::default();
            let (a, b) = (norm(&a), norm(&b));
            let i = fg_boolean(BoolOp::Intersection, &a, &b, &l).unwrap();
            let amb = fg_boolean(BoolOp::Difference, &a, &b, &l).unwrap();
            let dm = fg_boolean(BoolOp::Difference, &a, &amb, &l).unwrap();
            for word in reduced_words_up_to(3) {
                prop_assert_eq!(fg_member(&word, &i, &l).unwrap(), fg_member(&word, &dm, &l).unwrap());
            }
        }
    }
}
