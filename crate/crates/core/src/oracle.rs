//! Exact distances in the Cayley graph of `S_n` generated by the cyclically
//! adjacent transpositions, by breadth-first search.
//!
//! States are one-line arrays of element ranks packed 4 bits per position
//! into a `u64`, so `n` is limited to 16 by the encoding and to the
//! configured cap (default 10) by memory. Full tables index states by their
//! lexicographic rank.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::perm::{cyclic_transpositions, Element, Permutation};

pub const DEFAULT_CAP: usize = 10;
const PACK_LIMIT: usize = 16;
const UNSEEN: u8 = u8::MAX;

type Packed = u64;

fn pack(ranks: impl IntoIterator<Item = usize>) -> Packed {
    ranks
        .into_iter()
        .enumerate()
        .fold(0, |acc, (p, r)| acc | (r as Packed) << (4 * p))
}

fn nibble(s: Packed, p: usize) -> usize {
    ((s >> (4 * p)) & 0xF) as usize
}

fn exchange(s: Packed, a: usize, b: usize) -> Packed {
    let (x, y) = (s >> (4 * a) & 0xF, s >> (4 * b) & 0xF);
    let cleared = s & !(0xF << (4 * a)) & !(0xF << (4 * b));
    cleared | x << (4 * b) | y << (4 * a)
}

fn identity_state(n: usize) -> Packed {
    pack(0..n)
}

/// Position pairs (0-based) of the distinct generators.
fn generator_pairs(n: usize) -> Vec<(usize, usize)> {
    cyclic_transpositions(n)
        .into_iter()
        .map(|t| (t.position() - 1, t.partner(n) - 1))
        .collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a packed arrangement of `0..n`.
fn lex_rank(s: Packed, n: usize) -> usize {
    let mut unused: u32 = (1 << n) - 1;
    let mut rank = 0;
    for p in 0..n {
        let v = nibble(s, p);
        let smaller = (unused & ((1 << v) - 1)).count_ones() as usize;
        rank = rank * (n - p) + smaller;
        unused &= !(1 << v);
    }
    rank
}

fn lex_unrank(mut rank: usize, n: usize) -> Packed {
    let mut digits = vec![0; n];
    for (p, digit) in digits.iter_mut().enumerate().rev() {
        let base = n - p;
        *digit = rank % base;
        rank /= base;
    }
    let mut unused: Vec<usize> = (0..n).collect();
    pack(digits.into_iter().map(|d| unused.remove(d)))
}

fn to_permutation(s: Packed, n: usize) -> Permutation {
    Permutation::from_one_line((0..n).map(|p| nibble(s, p) as Element + 1).collect())
        .expect("packed state is a permutation")
}

/// All permutations of `{1, ..., n}` in lexicographic order of one-line form.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    assert!(n <= PACK_LIMIT, "n = {n} exceeds the packed encoding");
    (0..factorial(n)).map(move |r| to_permutation(lex_unrank(r, n), n))
}

/// The even-`n` permutation `(n/2+1, ..., n, 1, ..., n/2)`, which needs
/// `n²/4` moves.
pub fn feng_worst_case(n: usize) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::SizeOutOfRange { n, min: 2, max: usize::MAX });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    let half = (n / 2) as Element;
    Permutation::from_one_line((half + 1..=n as Element).chain(1..=half).collect())
}

/// Distances from the identity to every permutation of `{1, ..., n}`.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u8>,
    diameter: u32,
    witnesses: Vec<Permutation>,
}

impl DistanceTable {
    fn build(n: usize) -> Self {
        let total = factorial(n);
        let gens = generator_pairs(n);
        let mut dist = vec![UNSEEN; total];
        let start = identity_state(n);
        dist[lex_rank(start, n)] = 0;
        let mut frontier = vec![start];
        let mut depth = 0u8;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &s in &frontier {
                for &(a, b) in &gens {
                    let t = exchange(s, a, b);
                    let slot = &mut dist[lex_rank(t, n)];
                    if *slot == UNSEEN {
                        *slot = depth + 1;
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            depth += 1;
            frontier = next;
        }
        frontier.sort_unstable_by_key(|&s| lex_rank(s, n));
        DistanceTable {
            n,
            diameter: depth as u32,
            witnesses: frontier.into_iter().map(|s| to_permutation(s, n)).collect(),
            dist,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of states, `n!`.
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Every permutation at distance [`Self::diameter`], in lexicographic order.
    pub fn witnesses(&self) -> &[Permutation] {
        &self.witnesses
    }

    pub fn distance(&self, perm: &Permutation) -> Result<u32> {
        if perm.len() != self.n {
            return Err(Error::LabelMismatch);
        }
        Ok(self.dist[lex_rank(pack(perm.ranked_one_line()), self.n)] as u32)
    }

    /// Distance of the permutation with the given lexicographic rank.
    pub fn distance_at_rank(&self, rank: usize) -> u32 {
        self.dist[rank] as u32
    }

    /// Number of permutations at each distance.
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &d in &self.dist {
            *h.entry(d as u32).or_insert(0) += 1;
        }
        h
    }
}

/// Breadth-first distance oracle with a size cap and a per-`n` table cache.
#[derive(Debug)]
pub struct Oracle {
    cap: usize,
    tables: Mutex<BTreeMap<usize, Arc<DistanceTable>>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_CAP,
            tables: Mutex::default(),
        }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Result<Self> {
        if cap > PACK_LIMIT {
            return Err(Error::SizeOutOfRange { n: cap, min: 1, max: PACK_LIMIT });
        }
        Ok(Oracle {
            cap,
            tables: Mutex::default(),
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    /// The full distance table for `n`, built on first use and cached.
    pub fn table(&self, n: usize) -> Result<Arc<DistanceTable>> {
        if n < 1 {
            return Err(Error::SizeOutOfRange { n, min: 1, max: self.cap });
        }
        self.check_cap(n)?;
        if let Some(t) = self.tables.lock().expect("cache lock").get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(DistanceTable::build(n));
        self.tables
            .lock()
            .expect("cache lock")
            .entry(n)
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    /// Exact number of cyclically adjacent transpositions needed to sort
    /// `perm`. Labels are taken by rank.
    ///
    /// Uses a cached table when one exists, otherwise a bidirectional search
    /// between `perm` and the identity.
    pub fn bfs_distance(&self, perm: &Permutation) -> Result<u32> {
        let n = perm.len();
        self.check_cap(n)?;
        if let Some(t) = self.tables.lock().expect("cache lock").get(&n) {
            return Ok(t.dist[lex_rank(pack(perm.ranked_one_line()), n)] as u32);
        }
        Ok(bidirectional(pack(perm.ranked_one_line()), n))
    }

    /// The largest distance over `S_n` and every permutation attaining it.
    pub fn diameter(&self, n: usize) -> Result<(u32, Vec<Permutation>)> {
        self.require_size(n)?;
        let t = self.table(n)?;
        Ok((t.diameter(), t.witnesses().to_vec()))
    }

    pub fn distance_histogram(&self, n: usize) -> Result<BTreeMap<u32, u64>> {
        self.require_size(n)?;
        Ok(self.table(n)?.histogram())
    }

    fn require_size(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::SizeOutOfRange { n, min: 2, max: self.cap });
        }
        self.check_cap(n)
    }
}

fn bidirectional(start: Packed, n: usize) -> u32 {
    let goal = identity_state(n);
    if start == goal {
        return 0;
    }
    let gens = generator_pairs(n);
    let mut seen = [HashMap::from([(start, 0u32)]), HashMap::from([(goal, 0u32)])];
    let mut frontier = [vec![start], vec![goal]];
    let mut depth = [0u32, 0u32];
    loop {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let other = 1 - side;
        let mut next = Vec::new();
        let mut best: Option<u32> = None;
        for &s in &frontier[side] {
            for &(a, b) in &gens {
                let t = exchange(s, a, b);
                if let Some(&far) = seen[other].get(&t) {
                    let total = depth[side] + 1 + far;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if let std::collections::hash_map::Entry::Vacant(v) = seen[side].entry(t) {
                    v.insert(depth[side] + 1);
                    next.push(t);
                }
            }
        }
        if let Some(best) = best {
            return best;
        }
        assert!(!next.is_empty(), "Cayley graph is connected");
        depth[side] += 1;
        frontier[side] = next;
    }
}
