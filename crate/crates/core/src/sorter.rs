//! Swap sequences and the greedy displacement-driven sorter.
//!
//! Given a feasible displacement vector, the sorter repeatedly exchanges a
//! cyclically adjacent pair whose left element still owes more clockwise
//! displacement than its right neighbour, moving one unit of displacement
//! from the left element to the right one. The sum of squared displacements
//! drops by at least 2 per exchange, so the loop terminates at the identity
//! with exactly the requested net displacement.
//!
//! The exchange is always taken at the lowest eligible position.

use std::collections::BTreeSet;
use std::fmt;

use crate::displacement::{
    initial_displacement, is_feasible, normalize, DisplacementVector, NetCountMatrix,
};
use crate::error::{Error, Result};
use crate::perm::{Permutation, Swap, Transposition};

/// A permutation together with a sequence of swaps applicable to it in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapSequence {
    initial: Permutation,
    swaps: Vec<Swap>,
    final_perm: Permutation,
}

impl SwapSequence {
    /// Replays `swaps` on `initial`; fails at the first inapplicable swap.
    pub fn new(initial: Permutation, swaps: Vec<Swap>) -> Result<Self> {
        let mut cur = initial.clone();
        for (step, &swap) in swaps.iter().enumerate() {
            cur.apply_swap_mut(swap)
                .map_err(|_| Error::InvalidSequence { step, swap })?;
        }
        Ok(SwapSequence {
            initial,
            swaps,
            final_perm: cur,
        })
    }

    pub fn empty(initial: Permutation) -> Self {
        SwapSequence {
            final_perm: initial.clone(),
            initial,
            swaps: Vec::new(),
        }
    }

    pub fn initial(&self) -> &Permutation {
        &self.initial
    }

    pub fn swaps(&self) -> &[Swap] {
        &self.swaps
    }

    pub fn final_perm(&self) -> &Permutation {
        &self.final_perm
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }

    /// Whether replaying the swaps ends at the identity.
    pub fn sorts(&self) -> bool {
        self.final_perm.is_identity()
    }

    /// The position-level view: the transposition executed at each step.
    pub fn transpositions(&self) -> Vec<Transposition> {
        let mut cur = self.initial.clone();
        self.swaps
            .iter()
            .map(|&s| {
                let t = cur.swap_to_transposition(s).expect("validated sequence");
                cur.apply_swap_mut(s).expect("validated sequence");
                t
            })
            .collect()
    }

    /// Whether no unordered pair of elements is exchanged more than once.
    pub fn each_pair_at_most_once(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.swaps.len());
        self.swaps
            .iter()
            .all(|s| seen.insert((s.i.min(s.j), s.i.max(s.j))))
    }

    pub fn net_counts(&self) -> (NetCountMatrix, DisplacementVector) {
        sequence_net_counts(self)
    }
}

/// Tallies `c(i, j)` (swaps `(i, j)` minus swaps `(j, i)`) and the net
/// clockwise displacement `d(i) = Σ_j c(i, j)`.
pub fn sequence_net_counts(seq: &SwapSequence) -> (NetCountMatrix, DisplacementVector) {
    let mut c = NetCountMatrix::zeros(seq.initial.labels());
    for s in &seq.swaps {
        c.record(s.i, s.j);
    }
    let d = c.row_sums();
    (c, d)
}

/// Why a raw swap list fails to take a permutation to a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceFault {
    NotApplicable { step: usize, swap: Swap },
    WrongTarget { reached: Permutation },
}

impl fmt::Display for SequenceFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFault::NotApplicable { step, swap } => {
                write!(f, "step {step}: swap {swap} is not cyclically adjacent")
            }
            SequenceFault::WrongTarget { reached } => write!(f, "sequence ends at {reached}"),
        }
    }
}

/// Checks that every swap applies in order and the replay reaches `target`.
pub fn validate_sequence(
    initial: &Permutation,
    swaps: &[Swap],
    target: &Permutation,
) -> Result<(), SequenceFault> {
    let mut cur = initial.clone();
    for (step, &swap) in swaps.iter().enumerate() {
        cur.apply_swap_mut(swap)
            .map_err(|_| SequenceFault::NotApplicable { step, swap })?;
    }
    if &cur != target {
        return Err(SequenceFault::WrongTarget { reached: cur });
    }
    Ok(())
}

/// Builds a sorting sequence whose net displacement is exactly `d`.
pub fn sort_by_displacement(perm: &Permutation, d: &DisplacementVector) -> Result<SwapSequence> {
    if !is_feasible(perm, d)? {
        return Err(Error::Infeasible);
    }
    Ok(greedy(perm, d, true))
}

/// Displacement vector of a minimum-length sort: `d(i) = i - π(i)`,
/// normalized to spread at most `n`.
pub fn optimal_displacement(perm: &Permutation) -> Result<DisplacementVector> {
    normalize(perm, &initial_displacement(perm)?)
}

/// A minimum-length sorting sequence of cyclically adjacent swaps.
pub fn optimal_sort(perm: &Permutation) -> Result<SwapSequence> {
    let d = optimal_displacement(perm)?;
    Ok(greedy(perm, &d, true))
}

/// Adjacent-only sorting: the greedy sorter driven by `d(i) = i - π(i)`
/// with the wrap pair excluded, which exchanges `(i, j)` exactly when `i > j`.
pub fn bubble_sort(perm: &Permutation) -> Result<SwapSequence> {
    let d = initial_displacement(perm)?;
    Ok(greedy(perm, &d, false))
}

/// `d` must be feasible for `perm`.
fn greedy(perm: &Permutation, d: &DisplacementVector, wrap: bool) -> SwapSequence {
    let n = perm.len();
    let labels = perm.labels();
    // rank of the element in each position, and displacement by rank
    let mut at = perm.ranked_one_line();
    let mut owed = d.values().to_vec();
    let pairs = if wrap && n >= 2 { n } else { n.saturating_sub(1) };
    let next = |p: usize| if p + 1 == n { 0 } else { p + 1 };
    let eligible = |at: &[usize], owed: &[i64], p: usize| owed[at[p]] > owed[at[next(p)]];

    let mut open: BTreeSet<usize> = (0..pairs).filter(|&p| eligible(&at, &owed, p)).collect();
    let mut swaps = Vec::new();
    while let Some(p) = open.pop_first() {
        let q = next(p);
        let (a, b) = (at[p], at[q]);
        swaps.push(Swap::new(labels[a], labels[b]));
        owed[a] -= 1;
        owed[b] += 1;
        at.swap(p, q);

        let before = if p == 0 { pairs.checked_sub(1).filter(|_| wrap) } else { Some(p - 1) };
        let after = if wrap { Some(q) } else { Some(p + 1).filter(|&x| x < pairs) };
        for x in [before, Some(p), after].into_iter().flatten() {
            if eligible(&at, &owed, x) {
                open.insert(x);
            } else {
                open.remove(&x);
            }
        }
    }
    debug_assert!(owed.iter().all(|&v| v == 0), "greedy stopped with {owed:?}");

    let final_perm = Permutation::from_one_line(at.iter().map(|&r| labels[r]).collect())
        .expect("rearrangement of a valid permutation");
    SwapSequence {
        initial: perm.clone(),
        swaps,
        final_perm,
    }
}
