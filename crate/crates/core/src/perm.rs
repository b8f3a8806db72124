//! Permutations over arbitrary sets of positive element labels.
//!
//! Positions are always `1..=n`. A permutation is written in one-line form,
//! listing the element found in each position from left to right. Position
//! `n` is cyclically adjacent to position `1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element label. Labels are positive; `0` is rejected on construction.
pub type Element = u32;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Element>", into = "Vec<Element>")]
pub struct Permutation {
    /// `one_line[p - 1]` is the element in position `p`.
    one_line: Vec<Element>,
    /// Sorted label set.
    labels: Vec<Element>,
    /// `positions[r]` is the (1-based) position of `labels[r]`.
    positions: Vec<usize>,
}

/// The transposition of positions `p` and `p + 1`, where `n + 1` wraps to `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transposition {
    p: usize,
}

/// An ordered element swap. `i` moves clockwise (position `p` to `p + 1`),
/// `j` moves counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[Element; 2]", into = "[Element; 2]")]
pub struct Swap {
    pub i: Element,
    pub j: Element,
}

impl Transposition {
    pub fn new(p: usize) -> Self {
        Transposition { p }
    }

    pub fn position(self) -> usize {
        self.p
    }

    /// The position paired with `p` in a permutation of length `n`.
    pub fn partner(self, n: usize) -> usize {
        if self.p == n {
            1
        } else {
            self.p + 1
        }
    }

    fn check(self, n: usize) -> Result<()> {
        if n < 2 || self.p == 0 || self.p > n {
            return Err(Error::PositionOutOfRange { position: self.p, n });
        }
        Ok(())
    }
}

/// The distinct cyclically adjacent transpositions on `n` positions.
///
/// For `n = 2` the pair `(1, 2)` and the wrap pair `(2, 1)` are the same move
/// and only position 1 is returned; for `n < 2` the set is empty.
pub fn cyclic_transpositions(n: usize) -> Vec<Transposition> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![Transposition::new(1)],
        _ => (1..=n).map(Transposition::new).collect(),
    }
}

impl Swap {
    pub fn new(i: Element, j: Element) -> Self {
        Swap { i, j }
    }

    pub fn involves(self, k: Element) -> bool {
        self.i == k || self.j == k
    }

    pub fn reversed(self) -> Self {
        Swap { i: self.j, j: self.i }
    }
}

impl From<[Element; 2]> for Swap {
    fn from([i, j]: [Element; 2]) -> Self {
        Swap { i, j }
    }
}

impl From<Swap> for [Element; 2] {
    fn from(s: Swap) -> Self {
        [s.i, s.j]
    }
}

impl fmt::Display for Swap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

impl Permutation {
    /// Builds a permutation from one-line notation: `one_line[p - 1]` is the
    /// element in position `p`.
    pub fn from_one_line(one_line: Vec<Element>) -> Result<Self> {
        if one_line.is_empty() {
            return Err(Error::Empty);
        }
        if one_line.contains(&0) {
            return Err(Error::ZeroLabel);
        }
        let mut order: Vec<usize> = (0..one_line.len()).collect();
        order.sort_unstable_by_key(|&p| one_line[p]);
        if let Some(w) = order.windows(2).find(|w| one_line[w[0]] == one_line[w[1]]) {
            return Err(Error::Duplicate(one_line[w[0]]));
        }
        let labels = order.iter().map(|&p| one_line[p]).collect();
        let positions = order.iter().map(|&p| p + 1).collect();
        Ok(Permutation {
            one_line,
            labels,
            positions,
        })
    }

    /// The identity on `{1, ..., n}`.
    pub fn identity(n: usize) -> Self {
        Self::sorted(n, (1..=n as Element).collect())
    }

    /// The identity on an arbitrary label set: labels listed in increasing order.
    pub fn identity_on(labels: &[Element]) -> Result<Self> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        Self::from_one_line(sorted)
    }

    fn sorted(n: usize, labels: Vec<Element>) -> Self {
        Permutation {
            one_line: labels.clone(),
            labels,
            positions: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.one_line.len()
    }

    pub fn is_empty(&self) -> bool {
        self.one_line.is_empty()
    }

    pub fn one_line(&self) -> &[Element] {
        &self.one_line
    }

    /// The label set in increasing order.
    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    /// Whether the label set is exactly `{1, ..., n}`.
    pub fn has_standard_labels(&self) -> bool {
        self.labels.last().copied() == Some(self.len() as Element)
    }

    pub fn is_identity(&self) -> bool {
        self.one_line == self.labels
    }

    /// Index of `e` in the sorted label set, i.e. its 0-based target position.
    pub fn rank_of(&self, e: Element) -> Option<usize> {
        self.labels.binary_search(&e).ok()
    }

    fn require(&self, e: Element) -> Result<usize> {
        self.rank_of(e).ok_or(Error::UnknownElement(e))
    }

    pub fn contains(&self, e: Element) -> bool {
        self.rank_of(e).is_some()
    }

    /// Position (1-based) of element `e`.
    pub fn position_of(&self, e: Element) -> Result<usize> {
        Ok(self.positions[self.require(e)?])
    }

    /// Element in position `p` (1-based).
    pub fn element_at(&self, p: usize) -> Result<Element> {
        if p == 0 || p > self.len() {
            return Err(Error::PositionOutOfRange { position: p, n: self.len() });
        }
        Ok(self.one_line[p - 1])
    }

    /// The element cyclically following `e`.
    pub fn successor(&self, e: Element) -> Result<Element> {
        let p = self.position_of(e)?;
        Ok(self.one_line[p % self.len()])
    }

    /// `i ≺ j`: `j` sits in the position right after `i`, with the last
    /// position followed by the first.
    pub fn directly_before(&self, i: Element, j: Element) -> Result<bool> {
        if i == j {
            return Err(Error::SameElement(i));
        }
        let pi = self.position_of(i)?;
        let pj = self.position_of(j)?;
        Ok(pj == pi + 1 || (pi == self.len() && pj == 1))
    }

    pub fn apply_transposition(&self, t: Transposition) -> Result<Self> {
        t.check(self.len())?;
        let mut out = self.clone();
        out.exchange(t.position() - 1, t.partner(self.len()) - 1);
        Ok(out)
    }

    /// The element swap performed by `t` on this permutation.
    pub fn transposition_to_swap(&self, t: Transposition) -> Result<Swap> {
        t.check(self.len())?;
        Ok(Swap::new(
            self.one_line[t.position() - 1],
            self.one_line[t.partner(self.len()) - 1],
        ))
    }

    /// The transposition that realises `s`, if `s.i ≺ s.j`.
    pub fn swap_to_transposition(&self, s: Swap) -> Result<Transposition> {
        if !self.directly_before(s.i, s.j)? {
            return Err(Error::SwapNotApplicable { swap: s });
        }
        Ok(Transposition::new(self.position_of(s.i)?))
    }

    pub fn apply_swap(&self, s: Swap) -> Result<Self> {
        let t = self.swap_to_transposition(s)?;
        self.apply_transposition(t)
    }

    /// In-place swap application; leaves `self` untouched on error.
    pub(crate) fn apply_swap_mut(&mut self, s: Swap) -> Result<()> {
        let t = self.swap_to_transposition(s)?;
        let n = self.len();
        self.exchange(t.position() - 1, t.partner(n) - 1);
        Ok(())
    }

    /// Exchanges the contents of 0-based positions `a` and `b`.
    fn exchange(&mut self, a: usize, b: usize) {
        self.one_line.swap(a, b);
        for &p in &[a, b] {
            let r = self.rank_of(self.one_line[p]).expect("label present");
            self.positions[r] = p + 1;
        }
    }

    /// Canonical restriction to the label set without `k`: `k`'s slot is
    /// removed and the remaining elements close up in their original order.
    pub fn restrict(&self, k: Element) -> Result<Self> {
        self.require(k)?;
        if self.len() == 1 {
            return Err(Error::RestrictSingleton);
        }
        Self::from_one_line(self.one_line.iter().copied().filter(|&e| e != k).collect())
    }

    /// Whether `self` is one of the permutations corresponding to `perm`
    /// restricted to its labels without `k`: every `i ≺ j` of `perm` among the
    /// remaining elements, and every `i ≺ k ≺ j`, must give `i ≺ j` here.
    pub fn is_restriction_of(&self, perm: &Permutation, k: Element) -> Result<bool> {
        perm.require(k)?;
        let expected = perm.labels.iter().filter(|&&e| e != k);
        if self.len() + 1 != perm.len() || !expected.eq(self.labels.iter()) {
            return Err(Error::LabelMismatch);
        }
        for &i in &self.labels {
            let mut j = perm.successor(i)?;
            if j == k {
                j = perm.successor(k)?;
            }
            if j != i && !self.directly_before(i, j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pairs of elements out of order; the adjacent-only sorting distance.
    pub fn inversions(&self) -> u64 {
        let line = &self.one_line;
        let mut count = 0u64;
        for (p, &a) in line.iter().enumerate() {
            count += line[p + 1..].iter().filter(|&&b| b < a).count() as u64;
        }
        count
    }

    /// One-line form with labels replaced by their 0-based ranks.
    pub(crate) fn ranked_one_line(&self) -> Vec<usize> {
        self.one_line
            .iter()
            .map(|&e| self.rank_of(e).expect("label present"))
            .collect()
    }
}

impl TryFrom<Vec<Element>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<Element>) -> Result<Self> {
        Self::from_one_line(v)
    }
}

impl From<Permutation> for Vec<Element> {
    fn from(p: Permutation) -> Self {
        p.one_line
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses whitespace- or comma-separated positive integers, e.g. `"3 2 1 4"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Element>().map_err(|_| Error::Parse(t.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, e) in self.one_line.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        let id = p("1 2 3 4");
        assert!(id.is_identity());
        assert_eq!(id, Permutation::identity(4));

        let q = p("3 2 1 4");
        assert_eq!(q.position_of(3).unwrap(), 1);
        assert_eq!(q.position_of(1).unwrap(), 3);
        assert_eq!(q.element_at(1).unwrap(), 3);

        assert_eq!(p("3,2 , 1,4"), q);
        assert_eq!("3 2 2 4".parse::<Permutation>(), Err(Error::Duplicate(2)));
        assert_eq!("".parse::<Permutation>(), Err(Error::Empty));
        assert_eq!("3 x 1".parse::<Permutation>(), Err(Error::Parse("x".into())));
        assert_eq!("0 1".parse::<Permutation>(), Err(Error::ZeroLabel));
        assert_eq!("-1 2".parse::<Permutation>(), Err(Error::Parse("-1".into())));
    }

    #[test]
    fn arbitrary_labels() {
        let q = p("7 3 10");
        assert_eq!(q.labels(), &[3, 7, 10]);
        assert!(!q.has_standard_labels());
        assert_eq!(q.position_of(10).unwrap(), 3);
        assert!(q.directly_before(10, 7).unwrap());
        assert_eq!(q.position_of(4), Err(Error::UnknownElement(4)));
        assert!(Permutation::identity_on(&[10, 3, 7]).unwrap().is_identity());
    }

    #[test]
    fn directly_before() {
        let q = p("3 2 1 4");
        assert!(q.directly_before(3, 2).unwrap());
        assert!(q.directly_before(4, 3).unwrap());
        assert!(!q.directly_before(3, 1).unwrap());
        assert!(!q.directly_before(2, 3).unwrap());
        assert_eq!(q.directly_before(3, 3), Err(Error::SameElement(3)));
        assert_eq!(q.directly_before(3, 9), Err(Error::UnknownElement(9)));

        // with two elements each precedes the other
        let two = p("2 1");
        assert!(two.directly_before(1, 2).unwrap());
        assert!(two.directly_before(2, 1).unwrap());
    }

    #[test]
    fn transpositions() {
        let q = p("3 2 1 4");
        let t = |x| Transposition::new(x);
        assert_eq!(q.apply_transposition(t(1)).unwrap(), p("2 3 1 4"));
        assert_eq!(q.apply_transposition(t(4)).unwrap(), p("4 2 1 3"));
        assert_eq!(p("4 2 3 1").apply_transposition(t(4)).unwrap(), p("1 2 3 4"));
        assert_eq!(
            q.apply_transposition(t(5)),
            Err(Error::PositionOutOfRange { position: 5, n: 4 })
        );
        assert!(q.apply_transposition(t(0)).is_err());
        assert!(p("1").apply_transposition(t(1)).is_err());

        assert_eq!(q.transposition_to_swap(t(2)).unwrap(), Swap::new(2, 1));
        assert_eq!(q.transposition_to_swap(t(4)).unwrap(), Swap::new(4, 3));
        assert_eq!(
            Permutation::identity(4).transposition_to_swap(t(1)).unwrap(),
            Swap::new(1, 2)
        );
    }

    #[test]
    fn generator_sets() {
        assert!(cyclic_transpositions(1).is_empty());
        assert_eq!(cyclic_transpositions(2), vec![Transposition::new(1)]);
        assert_eq!(cyclic_transpositions(5).len(), 5);
        // the n = 2 wrap is the same move as position 1
        let two = p("2 1");
        assert_eq!(
            two.apply_transposition(Transposition::new(2)).unwrap(),
            two.apply_transposition(Transposition::new(1)).unwrap()
        );
    }

    #[test]
    fn swaps() {
        let q = p("3 2 1 4");
        assert_eq!(q.apply_swap(Swap::new(2, 1)).unwrap(), p("3 1 2 4"));
        assert_eq!(
            q.apply_swap(Swap::new(1, 2)),
            Err(Error::SwapNotApplicable { swap: Swap::new(1, 2) })
        );
        assert_eq!(p("3 4 1 2").apply_swap(Swap::new(4, 1)).unwrap(), p("3 1 4 2"));
        // wrap swap: 4 moves clockwise from position 4 to position 1
        assert_eq!(q.apply_swap(Swap::new(4, 3)).unwrap(), p("4 2 1 3"));
    }

    #[test]
    fn restriction() {
        let q = p("3 2 1 4");
        assert_eq!(q.restrict(2).unwrap(), p("3 1 4"));
        assert_eq!(Permutation::identity(4).restrict(4).unwrap(), Permutation::identity(3));
        assert_eq!(p("3 4 1 2").restrict(4).unwrap(), p("3 1 2"));
        assert_eq!(q.restrict(9), Err(Error::UnknownElement(9)));
        assert_eq!(p("5").restrict(5), Err(Error::RestrictSingleton));

        assert!(p("1 4 3").is_restriction_of(&q, 2).unwrap());
        assert!(p("4 3 1").is_restriction_of(&q, 2).unwrap());
        assert!(!p("1 3 4").is_restriction_of(&q, 2).unwrap());
        assert_eq!(p("1 3 4").is_restriction_of(&q, 3), Err(Error::LabelMismatch));
        assert_eq!(p("1 2 4").is_restriction_of(&q, 2), Err(Error::LabelMismatch));

        // a two-element permutation restricts to a single element
        let two = p("2 1");
        assert!(two.restrict(1).unwrap().is_restriction_of(&two, 1).unwrap());
    }

    #[test]
    fn inversions() {
        assert_eq!(Permutation::identity(4).inversions(), 0);
        assert_eq!(p("4 3 2 1").inversions(), 6);
        assert_eq!(p("3 2 1 4").inversions(), 3);
    }

    #[test]
    fn serde_one_line() {
        let q = p("3 2 1 4");
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, "[3,2,1,4]");
        assert_eq!(serde_json::from_str::<Permutation>(&json).unwrap(), q);
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
        assert_eq!(serde_json::to_string(&Swap::new(4, 1)).unwrap(), "[4,1]");
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n as Element).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_one_line(v).unwrap())
    }

    fn rotate(perm: &Permutation, by: usize) -> Permutation {
        let mut v = perm.one_line().to_vec();
        v.rotate_left(by);
        Permutation::from_one_line(v).unwrap()
    }

    proptest! {
        #[test]
        fn position_round_trip(q in arb_perm(12)) {
            for &e in q.labels() {
                prop_assert_eq!(q.element_at(q.position_of(e).unwrap()).unwrap(), e);
            }
            prop_assert_eq!(q.to_string().parse::<Permutation>().unwrap(), q);
        }

        #[test]
        fn transposition_is_involution(q in arb_perm(10), p in 1usize..=10) {
            prop_assume!(q.len() >= 2 && p <= q.len());
            let t = Transposition::new(p);
            let once = q.apply_transposition(t).unwrap();
            prop_assert_eq!(once.apply_transposition(t).unwrap(), q.clone());
            let s = q.transposition_to_swap(t).unwrap();
            prop_assert_eq!(q.apply_swap(s).unwrap(), once);
        }

        #[test]
        fn canonical_restriction_passes(q in arb_perm(10), k in 1u32..=10) {
            prop_assume!(q.len() >= 2 && (k as usize) <= q.len());
            let r = q.restrict(k).unwrap();
            prop_assert!(r.is_restriction_of(&q, k).unwrap());
            let passing = (0..r.len())
                .filter(|&by| rotate(&r, by).is_restriction_of(&q, k).unwrap())
                .count();
            prop_assert_eq!(passing, r.len());
        }
    }
}
