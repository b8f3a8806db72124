//! Net clockwise displacement vectors and net swap counts.
//!
//! A displacement vector assigns each element the signed number of positions
//! it travels clockwise over a sorting sequence. A vector is feasible for a
//! permutation when its entries sum to zero and every element lands on its
//! target position modulo `n`. Among feasible vectors, those whose spread
//! `max d - min d` is at most `n` belong to minimum-length sorting sequences.
//!
//! Elements are sorted onto positions by rank: on `{1, ..., n}` element `i`
//! belongs in position `i`, on other label sets the `r`-th smallest label
//! belongs in position `r`.

use crate::error::{Error, Result};
use crate::perm::{Element, Permutation};

/// Element-indexed displacement vector; the modulus is the number of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DisplacementVector {
    labels: Vec<Element>,
    values: Vec<i64>,
}

impl DisplacementVector {
    /// Vector on `{1, ..., values.len()}`; `values[i - 1]` is `d(i)`.
    pub fn from_values(values: Vec<i64>) -> Self {
        DisplacementVector {
            labels: (1..=values.len() as Element).collect(),
            values,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Element, i64)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable_by_key(|&(e, _)| e);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Duplicate(w[0].0));
        }
        Ok(DisplacementVector {
            labels: pairs.iter().map(|&(e, _)| e).collect(),
            values: pairs.iter().map(|&(_, v)| v).collect(),
        })
    }

    pub fn zeros(labels: &[Element]) -> Self {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        DisplacementVector {
            values: vec![0; labels.len()],
            labels,
        }
    }

    /// The modulus `n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    /// Entries in increasing label order.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, e: Element) -> Option<i64> {
        self.labels.binary_search(&e).ok().map(|r| self.values[r])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, i64)> + '_ {
        self.labels.iter().copied().zip(self.values.iter().copied())
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn abs_sum(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn square_sum(&self) -> i64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// `max d - min d`.
    pub fn spread(&self) -> i64 {
        self.max() - self.min()
    }

    /// Entries listed by the position their element occupies in `perm`.
    pub fn by_position(&self, perm: &Permutation) -> Result<Vec<i64>> {
        if perm.labels() != self.labels() {
            return Err(Error::LabelMismatch);
        }
        Ok(perm
            .one_line()
            .iter()
            .map(|&e| self.get(e).expect("labels match"))
            .collect())
    }

    pub(crate) fn add(&mut self, e: Element, delta: i64) {
        let r = self.labels.binary_search(&e).expect("known element");
        self.values[r] += delta;
    }
}

/// `d(i) = i - π(i)`: every element moves straight to its target without
/// using the wrap.
pub fn initial_displacement(perm: &Permutation) -> Result<DisplacementVector> {
    if !perm.has_standard_labels() {
        return Err(Error::NonContiguousLabels { n: perm.len() });
    }
    Ok(DisplacementVector::from_values(
        perm.labels()
            .iter()
            .map(|&e| e as i64 - perm.position_of(e).expect("own label") as i64)
            .collect(),
    ))
}

/// Zero sum, and `π(i) + d(i) ≡ target(i) (mod n)` for every element.
pub fn is_feasible(perm: &Permutation, d: &DisplacementVector) -> Result<bool> {
    if perm.labels() != d.labels() {
        return Err(Error::LabelMismatch);
    }
    let n = perm.len() as i64;
    if d.sum() != 0 {
        return Ok(false);
    }
    Ok(d.iter().enumerate().all(|(rank, (e, v))| {
        let pos = perm.position_of(e).expect("labels match") as i64;
        (pos + v).rem_euclid(n) == (rank as i64 + 1).rem_euclid(n)
    }))
}

/// `d(i) - d(j) <= n` for every pair.
pub fn satisfies_opt(d: &DisplacementVector) -> bool {
    d.spread() <= d.len() as i64
}

/// Shifts `n` units of displacement from the largest entry to the smallest
/// until the spread is at most `n`.
pub fn normalize(perm: &Permutation, d: &DisplacementVector) -> Result<DisplacementVector> {
    Ok(normalize_trace(perm, d)?.pop().expect("trace starts with the input"))
}

/// Every vector visited by [`normalize`], starting with `d` itself.
///
/// Each step picks the first maximal and the first minimal entry (lowest
/// label on ties); `Σ|d|` strictly decreases along the trace.
pub fn normalize_trace(
    perm: &Permutation,
    d: &DisplacementVector,
) -> Result<Vec<DisplacementVector>> {
    if !is_feasible(perm, d)? {
        return Err(Error::Infeasible);
    }
    let n = d.len() as i64;
    let mut trace = vec![d.clone()];
    let mut cur = d.clone();
    loop {
        let (hi, &max) = first_extreme(&cur.values, |a, b| a > b);
        let (lo, &min) = first_extreme(&cur.values, |a, b| a < b);
        if max - min <= n {
            return Ok(trace);
        }
        cur.values[hi] -= n;
        cur.values[lo] += n;
        trace.push(cur.clone());
    }
}

fn first_extreme(values: &[i64], better: impl Fn(i64, i64) -> bool) -> (usize, &i64) {
    let mut best = 0;
    for (idx, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best]) {
            best = idx;
        }
    }
    (best, &values[best])
}

/// `½ Σ |d(i)|`. Every swap moves one element clockwise and one
/// counterclockwise, so a feasible `d` needs at least this many swaps.
pub fn lower_bound(d: &DisplacementVector) -> Result<u64> {
    let sum = d.sum();
    if sum != 0 {
        return Err(Error::NonZeroSum(sum));
    }
    let total = d.abs_sum();
    // Σ|d| ≡ Σd (mod 2)
    assert_eq!(total % 2, 0, "zero-sum vector with odd absolute sum");
    Ok((total / 2) as u64)
}

/// Closed form for the net number of `(i, j)` swaps in any sequence that
/// sorts `perm` with net displacement `d`:
///
/// ```text
/// c(i,j) = [π(i) < π(j)] + max{ m : π(i) + d(i) > π(j) + d(j) + m·n }
/// ```
pub fn net_swap_count(
    perm: &Permutation,
    d: &DisplacementVector,
    i: Element,
    j: Element,
) -> Result<i64> {
    if i == j {
        return Err(Error::SameElement(i));
    }
    if !is_feasible(perm, d)? {
        return Err(Error::Infeasible);
    }
    let (pi, pj) = (perm.position_of(i)?, perm.position_of(j)?);
    let (di, dj) = (d.get(i).expect("feasible"), d.get(j).expect("feasible"));
    Ok(closed_form(perm.len(), pi, di, pj, dj))
}

/// [`net_swap_count`] for every ordered pair.
pub fn net_count_matrix(perm: &Permutation, d: &DisplacementVector) -> Result<NetCountMatrix> {
    if !is_feasible(perm, d)? {
        return Err(Error::Infeasible);
    }
    let n = perm.len();
    let pos: Vec<usize> = perm
        .labels()
        .iter()
        .map(|&e| perm.position_of(e).expect("own label"))
        .collect();
    let mut c = NetCountMatrix::zeros(perm.labels());
    for a in 0..n {
        for b in 0..n {
            if a != b {
                c.values[a * n + b] = closed_form(n, pos[a], d.values[a], pos[b], d.values[b]);
            }
        }
    }
    Ok(c)
}

fn closed_form(n: usize, pi: usize, di: i64, pj: usize, dj: i64) -> i64 {
    let n = n as i64;
    let gap = (pi as i64 + di) - (pj as i64 + dj);
    // largest m with m·n < gap
    let m = (gap - 1).div_euclid(n);
    if pi < pj {
        m + 1
    } else {
        m
    }
}

/// `c(i, j)`: occurrences of swap `(i, j)` minus occurrences of `(j, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetCountMatrix {
    labels: Vec<Element>,
    values: Vec<i64>,
}

impl NetCountMatrix {
    pub fn zeros(labels: &[Element]) -> Self {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        let n = labels.len();
        NetCountMatrix {
            labels,
            values: vec![0; n * n],
        }
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn index(&self, i: Element, j: Element) -> Option<usize> {
        let a = self.labels.binary_search(&i).ok()?;
        let b = self.labels.binary_search(&j).ok()?;
        Some(a * self.labels.len() + b)
    }

    pub fn get(&self, i: Element, j: Element) -> Option<i64> {
        self.index(i, j).map(|x| self.values[x])
    }

    /// Records one occurrence of swap `(i, j)`.
    pub(crate) fn record(&mut self, i: Element, j: Element) {
        let ij = self.index(i, j).expect("known element");
        let ji = self.index(j, i).expect("known element");
        self.values[ij] += 1;
        self.values[ji] -= 1;
    }

    /// Ordered pairs `(i, j, c(i, j))` with `i != j`, in label order.
    pub fn entries(&self) -> impl Iterator<Item = (Element, Element, i64)> + '_ {
        let n = self.labels.len();
        (0..n * n)
            .filter(move |x| x / n != x % n)
            .map(move |x| (self.labels[x / n], self.labels[x % n], self.values[x]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.entries()
            .all(|(i, j, v)| self.get(j, i) == Some(-v))
    }

    /// `d(i) = Σ_{j≠i} c(i, j)`.
    pub fn row_sums(&self) -> DisplacementVector {
        let n = self.labels.len();
        DisplacementVector {
            labels: self.labels.clone(),
            values: (0..n)
                .map(|a| self.values[a * n..(a + 1) * n].iter().sum())
                .collect(),
        }
    }

    /// `Σ_{i<j} |c(i, j)|`.
    pub fn abs_upper_sum(&self) -> u64 {
        self.entries()
            .filter(|&(i, j, _)| i < j)
            .map(|(_, _, v)| v.unsigned_abs())
            .sum()
    }
}
