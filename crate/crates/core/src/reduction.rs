//! Checks of the structural facts behind the `⌊n²/4⌋` bound, run on concrete
//! permutations and swap sequences.
//!
//! A failed check is reported, not raised: every verifier returns a
//! [`VerificationReport`], and only malformed input (a sequence that does
//! not belong to the given permutation, an infeasible displacement vector)
//! is an error. A report whose hypotheses do not hold is marked rejected and
//! carries no checks.

use std::fmt::Write as _;

use serde::Serialize;

use crate::diameter_bound;
use crate::displacement::{
    is_feasible, net_count_matrix, satisfies_opt, DisplacementVector, NetCountMatrix,
};
use crate::error::{Error, Result};
use crate::perm::{Element, Permutation};
use crate::sorter::{sequence_net_counts, SwapSequence};

pub const LEMMA4A: &str = "lemma4a";
pub const LEMMA4B: &str = "lemma4b";
pub const LEMMA4C: &str = "lemma4c";
pub const LEMMA5: &str = "lemma5_valid_restriction";
pub const K_BOUND: &str = "thm3_k_bound";
pub const K_SWAP_COUNT: &str = "thm3_k_swap_count";
pub const SPREAD: &str = "thm3_spread";
pub const LENGTH_BOUND: &str = "thm3_length_bound";
pub const SKEW: &str = "appendix_skew";
pub const DECREMENT: &str = "appendix_decrement";

/// Violations listed in evidence strings before truncating.
const EVIDENCE_LIMIT: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected: Option<String>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            overall: true,
            rejected: None,
        }
    }

    pub fn rejected(subject: impl Into<String>, reason: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            overall: false,
            rejected: Some(reason.into()),
        }
    }

    pub fn push(&mut self, name: &str, passed: bool, evidence: impl Into<String>) {
        self.overall &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            evidence: evidence.into(),
        });
    }

    pub fn is_rejected(&self) -> bool {
        self.rejected.is_some()
    }

    /// First check with the given name.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Collects up to [`EVIDENCE_LIMIT`] violation descriptions.
#[derive(Default)]
struct Violations {
    count: usize,
    shown: String,
}

impl Violations {
    fn add(&mut self, what: impl FnOnce() -> String) {
        if self.count < EVIDENCE_LIMIT {
            if self.count > 0 {
                self.shown.push_str("; ");
            }
            self.shown.push_str(&what());
        }
        self.count += 1;
    }

    fn evidence(&self, checked: usize) -> String {
        if self.count == 0 {
            format!("{checked} pairs checked")
        } else if self.count > EVIDENCE_LIMIT {
            format!("{} violations: {}; ...", self.count, self.shown)
        } else {
            format!("{} violations: {}", self.count, self.shown)
        }
    }
}

fn subject_line(perm: &Permutation, seq: &SwapSequence) -> String {
    format!("[{perm}] with {} swaps", seq.len())
}

fn ensure_start(perm: &Permutation, seq: &SwapSequence) -> Result<()> {
    if seq.initial() != perm {
        return Err(Error::SequenceMismatch);
    }
    Ok(())
}

/// For a sequence whose net displacement has spread at most `n`:
/// (a) `d(i) >= d(j)` gives `c(i, j)` in `{0, 1}`, (b) `d(i) = d(j)` gives
/// `c(i, j) = 0`, (c) `d(i) - d(j) = n` gives `c(i, j) = 1`.
pub fn verify_lemma_prop(perm: &Permutation, seq: &SwapSequence) -> Result<VerificationReport> {
    ensure_start(perm, seq)?;
    let subject = subject_line(perm, seq);
    let (c, d) = sequence_net_counts(seq);
    let n = perm.len() as i64;
    if !satisfies_opt(&d) {
        return Ok(VerificationReport::rejected(
            subject,
            format!("net displacement spread {} exceeds n = {n}", d.spread()),
        ));
    }

    let (mut a, mut b, mut cc) = (Violations::default(), Violations::default(), Violations::default());
    let (mut na, mut nb, mut nc) = (0, 0, 0);
    for (i, j, v) in c.entries() {
        let (di, dj) = (d.get(i).expect("row"), d.get(j).expect("row"));
        let show = || format!("c({i},{j})={v} with d({i})={di}, d({j})={dj}");
        if di >= dj {
            na += 1;
            if !(0..=1).contains(&v) {
                a.add(show);
            }
        }
        if di == dj {
            nb += 1;
            if v != 0 {
                b.add(show);
            }
        }
        if di - dj == n {
            nc += 1;
            if v != 1 {
                cc.add(show);
            }
        }
    }
    let mut report = VerificationReport::new(subject);
    report.push(LEMMA4A, a.count == 0, a.evidence(na));
    report.push(LEMMA4B, b.count == 0, b.evidence(nb));
    report.push(LEMMA4C, cc.count == 0, cc.evidence(nc));
    Ok(report)
}

/// Drops every swap involving `k` and replays the rest on the canonical
/// restriction of the initial permutation.
///
/// An error here means the remaining swaps are not applicable to the
/// restriction.
pub fn delete_element_swaps(seq: &SwapSequence, k: Element) -> Result<SwapSequence> {
    let initial = seq.initial().restrict(k)?;
    let kept = seq.swaps().iter().copied().filter(|s| !s.involves(k)).collect();
    SwapSequence::new(initial, kept)
}

/// Deleting `k`'s swaps leaves a valid sequence for the restriction, ending
/// at a restriction of the original final permutation.
pub fn check_element_deletion(seq: &SwapSequence, k: Element) -> Result<Check> {
    let (passed, evidence) = match delete_element_swaps(seq, k) {
        Ok(reduced) => {
            let ok = reduced.final_perm().is_restriction_of(seq.final_perm(), k)?;
            let ev = if ok {
                format!("k={k}: {} swaps replay to [{}]", reduced.len(), reduced.final_perm())
            } else {
                format!(
                    "k={k}: replay ends at [{}], not a restriction of [{}]",
                    reduced.final_perm(),
                    seq.final_perm()
                )
            };
            (ok, ev)
        }
        Err(Error::InvalidSequence { step, swap }) => (
            false,
            format!("k={k}: swap {swap} at reduced step {step} is not applicable"),
        ),
        Err(e) => return Err(e),
    };
    Ok(Check {
        name: LEMMA5.to_string(),
        passed,
        evidence,
    })
}

/// The element removed by the induction step: the lowest-labelled maximum of
/// `d` when `2·max d <= n`, otherwise the lowest-labelled minimum.
pub fn induction_element(d: &DisplacementVector) -> Element {
    let n = d.len() as i64;
    let target = if 2 * d.max() <= n { d.max() } else { d.min() };
    d.iter()
        .find(|&(_, v)| v == target)
        .map(|(e, _)| e)
        .expect("non-empty vector")
}

/// One level of the induction on `n`. Hypotheses: every unordered pair is
/// swapped at most once and the net displacement has spread at most `n`.
///
/// The chosen element `k` must satisfy `|d(k)| <= n/2` and take part in
/// exactly `|d(k)|` swaps; after deleting its swaps the remaining elements
/// have `d'(i) = d(i) - c(i, k)` with spread at most `n - 1`, the reduced
/// sequence is valid for the restriction, and the length is at most `⌊n²/4⌋`.
pub fn verify_induction_step(
    perm: &Permutation,
    seq: &SwapSequence,
) -> Result<VerificationReport> {
    Ok(induction_level(perm, seq)?.0)
}

/// Applies [`verify_induction_step`] repeatedly to the reduced sequence down
/// to two elements. Check names repeat once per level, with the level's `n`
/// leading each evidence string.
pub fn verify_induction_chain(
    perm: &Permutation,
    seq: &SwapSequence,
) -> Result<VerificationReport> {
    ensure_start(perm, seq)?;
    let mut chain = VerificationReport::new(format!("{} (induction chain)", subject_line(perm, seq)));
    let mut level = Some(seq.clone());
    while let Some(cur) = level.take() {
        let n = cur.initial().len();
        let (report, reduced) = induction_level(cur.initial(), &cur)?;
        if let Some(reason) = report.rejected {
            chain.overall = false;
            chain.rejected = Some(format!("n={n}: {reason}"));
            break;
        }
        for c in report.checks {
            chain.push(&c.name, c.passed, format!("n={n}: {}", c.evidence));
        }
        if n > 2 {
            level = reduced;
        }
    }
    Ok(chain)
}

fn induction_level(
    perm: &Permutation,
    seq: &SwapSequence,
) -> Result<(VerificationReport, Option<SwapSequence>)> {
    ensure_start(perm, seq)?;
    let subject = subject_line(perm, seq);
    let n = perm.len();
    let m = seq.len() as u64;
    if !seq.each_pair_at_most_once() {
        return Ok((
            VerificationReport::rejected(subject, "some pair of elements is swapped more than once"),
            None,
        ));
    }
    let (c, d) = sequence_net_counts(seq);
    if !satisfies_opt(&d) {
        return Ok((
            VerificationReport::rejected(
                subject,
                format!("net displacement spread {} exceeds n = {n}", d.spread()),
            ),
            None,
        ));
    }
    let mut report = VerificationReport::new(subject);
    if n == 1 {
        report.push(LENGTH_BOUND, m == 0, format!("m={m} <= 0"));
        return Ok((report, None));
    }

    let k = induction_element(&d);
    let dk = d.get(k).expect("row");
    report.push(
        K_BOUND,
        2 * dk.unsigned_abs() <= n as u64,
        format!("k={k}, d(k)={dk}, n={n}"),
    );

    let with_k = seq.swaps().iter().filter(|s| s.involves(k)).count() as u64;
    report.push(
        K_SWAP_COUNT,
        with_k == dk.unsigned_abs(),
        format!("k={k} takes part in {with_k} swaps, |d(k)|={}", dk.abs()),
    );

    report.checks.push(check_element_deletion(seq, k)?);
    report.overall &= report.checks.last().expect("just pushed").passed;

    // d' two ways: from the full tally, and by tallying the kept swaps alone
    let predicted = DisplacementVector::from_pairs(
        d.iter()
            .filter(|&(e, _)| e != k)
            .map(|(e, v)| (e, v - c.get(e, k).expect("row"))),
    )?;
    let rest: Vec<Element> = perm.labels().iter().copied().filter(|&e| e != k).collect();
    let mut kept = NetCountMatrix::zeros(&rest);
    for s in seq.swaps().iter().filter(|s| !s.involves(k)) {
        kept.record(s.i, s.j);
    }
    let tallied = kept.row_sums();
    let spread = predicted.spread();
    let mut ev = String::new();
    write!(ev, "spread(d')={spread} <= {}", n - 1).expect("string write");
    if predicted != tallied {
        write!(ev, "; d(i)-c(i,k) = {:?} but kept swaps give {:?}", predicted.values(), tallied.values())
            .expect("string write");
    }
    report.push(SPREAD, predicted == tallied && spread < n as i64, ev);

    let reduced_len = m - with_k;
    let bound = diameter_bound(n);
    report.push(
        LENGTH_BOUND,
        m <= bound && m == reduced_len + dk.unsigned_abs(),
        format!("m={m} = {reduced_len} + |d(k)| <= {bound}"),
    );

    let reduced = delete_element_swaps(seq, k).ok();
    Ok((report, reduced))
}

/// The closed-form net counts are skew symmetric, and every transposition
/// changes them exactly as the corresponding swap would: `c(k, l)` drops by
/// one for the swapped pair `(k, l)` and every other pair keeps its value.
pub fn verify_appendix(perm: &Permutation, d: &DisplacementVector) -> Result<VerificationReport> {
    if !is_feasible(perm, d)? {
        return Err(Error::Infeasible);
    }
    let n = perm.len();
    let mut report = VerificationReport::new(format!("[{perm}] with d={:?}", d.values()));
    let c = net_count_matrix(perm, d)?;

    let mut skew = Violations::default();
    let mut skew_checked = 0;
    let mut decrement = Violations::default();
    let mut dec_checked = 0;
    let mut note_skew = |m: &NetCountMatrix, tag: &dyn Fn() -> String| {
        for (i, j, v) in m.entries() {
            skew_checked += 1;
            if m.get(j, i) != Some(-v) {
                skew.add(|| format!("{}: c({i},{j})={v}, c({j},{i})={:?}", tag(), m.get(j, i)));
            }
        }
    };
    note_skew(&c, &|| "initial".to_string());

    // for n = 2 both positions give distinct swaps
    let last = if n >= 2 { n } else { 0 };
    for p in 1..=last {
        let t = crate::perm::Transposition::new(p);
        let s = perm.transposition_to_swap(t)?;
        let next = perm.apply_transposition(t)?;
        let mut d_next = d.clone();
        d_next.add(s.i, -1);
        d_next.add(s.j, 1);
        let c_next = net_count_matrix(&next, &d_next)?;
        note_skew(&c_next, &|| format!("after p={p}"));
        for (i, j, v) in c.entries() {
            dec_checked += 1;
            let expected = if (i, j) == (s.i, s.j) {
                v - 1
            } else if (i, j) == (s.j, s.i) {
                v + 1
            } else {
                v
            };
            let got = c_next.get(i, j).expect("same labels");
            if got != expected {
                decrement.add(|| format!("p={p} swap {s}: c({i},{j}) {v} -> {got}, expected {expected}"));
            }
        }
    }
    report.push(SKEW, skew.count == 0, skew.evidence(skew_checked));
    report.push(DECREMENT, decrement.count == 0, decrement.evidence(dec_checked));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Swap;
    use crate::sorter::{optimal_displacement, optimal_sort};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn dv(v: &[i64]) -> DisplacementVector {
        DisplacementVector::from_values(v.to_vec())
    }

    fn example_b() -> SwapSequence {
        let swaps = [(4, 1), (3, 1), (4, 2), (3, 2)].map(|(i, j)| Swap::new(i, j));
        SwapSequence::new(p("3 4 1 2"), swaps.to_vec()).unwrap()
    }

    #[test]
    fn lemma_prop_examples() {
        let seq = example_b();
        let r = verify_lemma_prop(&p("3 4 1 2"), &seq).unwrap();
        assert!(r.overall, "{r:?}");
        assert_eq!(seq.net_counts().0.get(3, 1), Some(1));
        assert_eq!(r.check(LEMMA4C).unwrap().evidence, "4 pairs checked");

        let q = p("3 2 1 4");
        let seq = optimal_sort(&q).unwrap();
        let (c, d) = seq.net_counts();
        assert_eq!((d.get(2), d.get(4)), (Some(0), Some(0)));
        assert_eq!(c.get(2, 4), Some(0));
        assert!(verify_lemma_prop(&q, &seq).unwrap().overall);

        let id = Permutation::identity(4);
        let r = verify_lemma_prop(&id, &SwapSequence::empty(id.clone())).unwrap();
        assert!(r.overall && r.checks.len() == 3);
    }

    #[test]
    fn lemma_prop_rejects_wide_spread() {
        let seq = crate::sorter::sort_by_displacement(&Permutation::identity(3), &dv(&[3, -3, 0]))
            .unwrap();
        let r = verify_lemma_prop(seq.initial(), &seq).unwrap();
        assert!(r.is_rejected() && !r.overall && r.checks.is_empty());
        assert_eq!(
            verify_lemma_prop(&p("1 2 3"), &example_b()),
            Err(Error::SequenceMismatch)
        );
    }

    #[test]
    fn deletion_examples() {
        let reduced = delete_element_swaps(&example_b(), 4).unwrap();
        assert_eq!(reduced.initial(), &p("3 1 2"));
        assert_eq!(reduced.swaps(), &[Swap::new(3, 1), Swap::new(3, 2)]);
        assert!(reduced.final_perm().is_identity());

        // no swap involves 2 in [(1,4)]
        let seq = SwapSequence::new(p("4 2 3 1"), vec![Swap::new(1, 4)]).unwrap();
        let reduced = delete_element_swaps(&seq, 2).unwrap();
        assert_eq!(reduced.swaps(), seq.swaps());
        assert_eq!(reduced.initial(), &p("4 3 1"));

        let reduced = delete_element_swaps(&seq, 1).unwrap();
        assert!(reduced.is_empty());
        assert_eq!(reduced.initial(), &p("4 2 3"));
        assert!(check_element_deletion(&seq, 1).unwrap().passed);

        assert_eq!(delete_element_swaps(&seq, 9), Err(Error::UnknownElement(9)));
    }

    #[test]
    fn induction_examples() {
        let r = verify_induction_step(&p("3 4 1 2"), &example_b()).unwrap();
        assert!(r.overall, "{r:?}");
        assert_eq!(r.check(K_BOUND).unwrap().evidence, "k=3, d(k)=2, n=4");
        assert_eq!(r.check(K_SWAP_COUNT).unwrap().evidence, "k=3 takes part in 2 swaps, |d(k)|=2");
        assert_eq!(r.check(SPREAD).unwrap().evidence, "spread(d')=3 <= 3");

        let id = Permutation::identity(5);
        let r = verify_induction_step(&id, &SwapSequence::empty(id.clone())).unwrap();
        assert!(r.overall);
        assert_eq!(r.check(K_SWAP_COUNT).unwrap().evidence, "k=1 takes part in 0 swaps, |d(k)|=0");

        let q = p("4 2 3 1");
        let seq = optimal_sort(&q).unwrap();
        let r = verify_induction_step(&q, &seq).unwrap();
        assert!(r.overall);
        assert_eq!(r.check(K_BOUND).unwrap().evidence, "k=1, d(k)=1, n=4");

        let chain = verify_induction_chain(&p("3 4 1 2"), &example_b()).unwrap();
        assert!(chain.overall);
        // levels n = 4, 3, 2
        assert_eq!(chain.checks.iter().filter(|c| c.name == LENGTH_BOUND).count(), 3);
    }

    #[test]
    fn induction_rejects_repeated_pairs() {
        let id = Permutation::identity(3);
        let seq = SwapSequence::new(id.clone(), vec![Swap::new(1, 2), Swap::new(2, 1)]).unwrap();
        let r = verify_induction_step(&id, &seq).unwrap();
        assert!(r.is_rejected());
        assert!(!verify_induction_chain(&id, &seq).unwrap().overall);
    }

    #[test]
    fn min_branch_is_used_when_max_is_large() {
        // d = (1, 1, 1, -3): 2·max = 2 <= 4, so k is the first maximum, element 1
        assert_eq!(induction_element(&dv(&[1, 1, 1, -3])), 1);
        // d = (3, -1, -1, -1): 2·max = 6 > 4, so k is the first minimum, element 2
        assert_eq!(induction_element(&dv(&[3, -1, -1, -1])), 2);
    }

    #[test]
    fn appendix_examples() {
        let q = p("3 4 1 2");
        let d = dv(&[-2, -2, 2, 2]);
        let before = net_count_matrix(&q, &d).unwrap();
        let after = net_count_matrix(
            &q.apply_swap(Swap::new(4, 1)).unwrap(),
            &dv(&[-1, -2, 2, 1]),
        )
        .unwrap();
        assert_eq!((before.get(4, 1), after.get(4, 1)), (Some(1), Some(0)));
        assert!(verify_appendix(&q, &d).unwrap().overall);

        let q = p("4 2 3 1");
        let d = dv(&[1, 0, 0, -1]);
        let after = net_count_matrix(&Permutation::identity(4), &dv(&[0; 4])).unwrap();
        assert_eq!(net_count_matrix(&q, &d).unwrap().get(1, 4), Some(1));
        assert_eq!(after.get(1, 4), Some(0));
        assert!(verify_appendix(&q, &d).unwrap().overall);

        let id = Permutation::identity(4);
        let after = net_count_matrix(&p("2 1 3 4"), &dv(&[-1, 1, 0, 0])).unwrap();
        assert_eq!(net_count_matrix(&id, &dv(&[0; 4])).unwrap().get(1, 2), Some(0));
        assert_eq!((after.get(1, 2), after.get(2, 1)), (Some(-1), Some(1)));
        assert!(verify_appendix(&id, &dv(&[0; 4])).unwrap().overall);

        assert_eq!(verify_appendix(&q, &dv(&[0; 4])), Err(Error::Infeasible));
    }

    #[test]
    fn report_serialization_uses_stable_names() {
        let q = p("3 1 2 4");
        let seq = optimal_sort(&q).unwrap();
        let r = verify_induction_step(&q, &seq).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        let names: Vec<_> = json["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(names, [K_BOUND, K_SWAP_COUNT, LEMMA5, SPREAD, LENGTH_BOUND]);
        assert!(json.get("rejected").is_none());
        let d = optimal_displacement(&q).unwrap();
        let json = serde_json::to_value(verify_appendix(&q, &d).unwrap()).unwrap();
        assert_eq!(json["checks"][0]["name"], SKEW);
        assert_eq!(json["checks"][1]["name"], DECREMENT);
    }
}
