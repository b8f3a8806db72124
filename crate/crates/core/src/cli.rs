//! Command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns the text for
//! stdout and stderr together with the exit code, so commands can be driven
//! in-process. Exit codes: 0 success, 1 usage or input error, 2 a
//! verification failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diameter_bound;
use crate::displacement::{
    initial_displacement, lower_bound, net_count_matrix, DisplacementVector,
};
use crate::error::Error;
use crate::oracle::{all_permutations, feng_worst_case, Oracle, DEFAULT_CAP};
use crate::perm::{Element, Permutation};
use crate::reduction::{
    check_element_deletion, verify_appendix, verify_induction_chain, verify_lemma_prop,
};
use crate::sorter::{bubble_sort, optimal_displacement, optimal_sort, SwapSequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Largest `n` accepted by `verify` unless `--cap` raises it.
pub const VERIFY_GUARD: usize = 7;

#[derive(Debug, Parser)]
#[command(
    name = "circsort",
    version,
    about = "Sort permutations with the fewest cyclically adjacent transpositions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum-length sort; prints the swap sequence as JSON (or CSV steps).
    Sort(PermArgs),
    /// Adjacent-only sort without the wrap transposition.
    Bubble(PermArgs),
    /// Exact distance to the identity by breadth-first search.
    Distance {
        #[command(flatten)]
        perm: PermArgs,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Largest distance over all permutations of n, with one witness.
    Diameter(SizeArgs),
    /// Number of permutations of n at each distance.
    Histogram(SizeArgs),
    /// The even-n worst case (n/2+1 ... n 1 ... n/2) and its optimal sort.
    Worstcase(SizeArgs),
    /// Exhaustively checks the sorter and the bound machinery over S_n.
    Verify(SizeArgs),
    /// Sorts seeded random permutations and summarizes lengths.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct PermArgs {
    /// One-line permutation, e.g. "3 2 1 4"; read from stdin when omitted.
    perm: Vec<String>,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct SizeArgs {
    n: usize,
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    format: Format,
}

#[derive(Debug, Args)]
struct BenchArgs {
    n: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    format: Format,
}

/// Result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command. `stdin`
/// is read only when a permutation argument is omitted.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match cli.command {
        Command::Sort(a) => with_perm(&a, stdin, |perm| cmd_sort(perm, &a.format, Algorithm::Optimal)),
        Command::Bubble(a) => with_perm(&a, stdin, |perm| cmd_sort(perm, &a.format, Algorithm::Bubble)),
        Command::Distance { perm, cap } => {
            with_perm(&perm, stdin, |p| cmd_distance(p, cap, &perm.format))
        }
        Command::Diameter(a) => cmd_diameter(&a),
        Command::Histogram(a) => cmd_histogram(&a),
        Command::Worstcase(a) => cmd_worstcase(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn with_perm(
    args: &PermArgs,
    stdin: &mut dyn Read,
    f: impl FnOnce(&Permutation) -> Outcome,
) -> Outcome {
    let text = if args.perm.is_empty() {
        let mut buf = String::new();
        if let Err(e) = stdin.read_to_string(&mut buf) {
            return Outcome::usage(format!("reading stdin: {e}"));
        }
        buf
    } else {
        args.perm.join(" ")
    };
    match text.parse::<Permutation>() {
        Ok(perm) => f(&perm),
        Err(e) => Outcome::usage(e),
    }
}

fn oracle_for(n: usize, cap: Option<usize>) -> Result<Oracle, Error> {
    Oracle::with_cap(cap.unwrap_or(DEFAULT_CAP).max(n.min(DEFAULT_CAP)))
}

#[derive(Clone, Copy)]
enum Algorithm {
    Optimal,
    Bubble,
}

/// JSON view of a sorting run.
#[derive(Debug, Serialize)]
pub struct SortReport {
    pub n: usize,
    pub pi_inv: Vec<Element>,
    pub d_by_element: Vec<i64>,
    pub d_by_position: Vec<i64>,
    pub swaps: Vec<[Element; 2]>,
    pub transpositions: Vec<usize>,
    pub length: usize,
    pub upper_bound: u64,
    pub lower_bound: u64,
}

impl SortReport {
    pub fn new(seq: &SwapSequence, d: &DisplacementVector) -> Result<Self, Error> {
        let perm = seq.initial();
        Ok(SortReport {
            n: perm.len(),
            pi_inv: perm.one_line().to_vec(),
            d_by_element: d.values().to_vec(),
            d_by_position: d.by_position(perm)?,
            swaps: seq.swaps().iter().map(|&s| s.into()).collect(),
            transpositions: seq.transpositions().iter().map(|t| t.position()).collect(),
            length: seq.len(),
            upper_bound: diameter_bound(perm.len()),
            lower_bound: lower_bound(d)?,
        })
    }
}

fn sort_report(perm: &Permutation, algorithm: Algorithm) -> Result<SortReport, Error> {
    let (seq, d) = match algorithm {
        Algorithm::Optimal => (optimal_sort(perm)?, optimal_displacement(perm)?),
        Algorithm::Bubble => (bubble_sort(perm)?, initial_displacement(perm)?),
    };
    SortReport::new(&seq, &d)
}

fn steps_csv(report: &SortReport) -> String {
    let mut out = String::from("step,i,j,position\n");
    for (step, (s, t)) in report.swaps.iter().zip(&report.transpositions).enumerate() {
        writeln!(out, "{},{},{},{}", step + 1, s[0], s[1], t).expect("string write");
    }
    out
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_sort(perm: &Permutation, format: &Format, algorithm: Algorithm) -> Outcome {
    let report = match sort_report(perm, algorithm) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    if format.csv {
        Outcome::ok(steps_csv(&report))
    } else {
        Outcome::ok(to_json(&report))
    }
}

fn cmd_distance(perm: &Permutation, cap: usize, format: &Format) -> Outcome {
    let oracle = match Oracle::with_cap(cap) {
        Ok(o) => o,
        Err(e) => return Outcome::usage(e),
    };
    match oracle.bfs_distance(perm) {
        Ok(d) if format.json => Outcome::ok(to_json(&serde_json::json!({
            "pi_inv": perm.one_line(),
            "distance": d,
        }))),
        Ok(d) if format.csv => Outcome::ok(format!("pi_inv,distance\n{perm},{d}\n")),
        Ok(d) => Outcome::ok(format!("{d}\n")),
        Err(e) => Outcome::usage(e),
    }
}

fn cmd_diameter(a: &SizeArgs) -> Outcome {
    let result = oracle_for(a.n, a.cap).and_then(|o| o.diameter(a.n));
    let (diameter, witnesses) = match result {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let witness = &witnesses[0];
    let bound = diameter_bound(a.n);
    let out = if a.format.json {
        to_json(&serde_json::json!({
            "n": a.n,
            "diameter": diameter,
            "bound": bound,
            "witness": witness.one_line(),
            "witness_count": witnesses.len(),
        }))
    } else if a.format.csv {
        format!(
            "n,diameter,bound,witness,witness_count\n{},{diameter},{bound},{witness},{}\n",
            a.n,
            witnesses.len()
        )
    } else {
        format!("diameter {diameter}\nwitness {witness}\n")
    };
    Outcome::ok(out)
}

fn cmd_histogram(a: &SizeArgs) -> Outcome {
    let hist = match oracle_for(a.n, a.cap).and_then(|o| o.distance_histogram(a.n)) {
        Ok(h) => h,
        Err(e) => return Outcome::usage(e),
    };
    if a.format.json {
        let rows: Vec<_> = hist
            .iter()
            .map(|(d, c)| serde_json::json!({"distance": d, "count": c}))
            .collect();
        return Outcome::ok(to_json(&serde_json::json!({"n": a.n, "histogram": rows})));
    }
    Outcome::ok(histogram_csv(&hist))
}

fn histogram_csv(hist: &BTreeMap<u32, u64>) -> String {
    let mut out = String::from("distance,count\n");
    for (d, c) in hist {
        writeln!(out, "{d},{c}").expect("string write");
    }
    out
}

fn cmd_worstcase(a: &SizeArgs) -> Outcome {
    let report = match feng_worst_case(a.n).and_then(|p| sort_report(&p, Algorithm::Optimal)) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    if a.format.json {
        return Outcome::ok(to_json(&report));
    }
    if a.format.csv {
        return Outcome::ok(steps_csv(&report));
    }
    let line = |v: &[Element]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("{}\nlength {}\n", line(&report.pi_inv), report.length);
    for (s, t) in report.swaps.iter().zip(&report.transpositions) {
        writeln!(out, "swap ({}, {}) at position {t}", s[0], s[1]).expect("string write");
    }
    Outcome::ok(out)
}

/// Runs every per-permutation check; `Err` describes the first failure.
fn verify_one(perm: &Permutation, expected: u32) -> Result<usize, String> {
    let fail = |what: String| Err(format!("[{perm}]: {what}"));
    let seq = optimal_sort(perm).map_err(|e| e.to_string())?;
    let d = optimal_displacement(perm).map_err(|e| e.to_string())?;
    if !seq.sorts() {
        return fail(format!("sequence ends at [{}]", seq.final_perm()));
    }
    if seq.len() != expected as usize {
        return fail(format!("length {} but BFS distance {expected}", seq.len()));
    }
    if seq.len() as u64 > diameter_bound(perm.len()) {
        return fail(format!("length {} exceeds the bound", seq.len()));
    }
    let formula = net_count_matrix(perm, &d).map_err(|e| e.to_string())?;
    if seq.net_counts().0 != formula {
        return fail("tallied net counts differ from the closed form".into());
    }
    let reports = [
        verify_lemma_prop(perm, &seq),
        verify_induction_chain(perm, &seq),
        verify_appendix(perm, &d),
    ];
    for report in reports {
        let report = report.map_err(|e| e.to_string())?;
        if let Some(reason) = &report.rejected {
            return fail(format!("rejected: {reason}"));
        }
        let failed = report.failures().next().cloned();
        if let Some(c) = failed {
            return fail(format!("{} failed: {}", c.name, c.evidence));
        }
    }
    if perm.len() >= 2 {
        for &k in perm.labels() {
            let c = check_element_deletion(&seq, k).map_err(|e| e.to_string())?;
            if !c.passed {
                return fail(format!("{} failed: {}", c.name, c.evidence));
            }
        }
    }
    Ok(seq.len())
}

fn cmd_verify(a: &SizeArgs) -> Outcome {
    let guard = a.cap.unwrap_or(VERIFY_GUARD);
    if a.n < 2 || a.n > guard {
        return Outcome::usage(Error::SizeOutOfRange { n: a.n, min: 2, max: guard });
    }
    let table = match oracle_for(a.n, a.cap).and_then(|o| o.table(a.n)) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(e),
    };
    let perms: Vec<Permutation> = all_permutations(a.n).collect();
    let results: Vec<Result<usize, String>> = perms
        .par_iter()
        .enumerate()
        .map(|(rank, perm)| verify_one(perm, table.distance_at_rank(rank)))
        .collect();
    let total = perms.len();
    let passed = results.iter().filter(|r| r.is_ok()).count();
    let longest = results.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
    let bound = diameter_bound(a.n);
    let summary = format!("{passed}/{total} verified, diameter {longest}");

    let first_failure = results.iter().find_map(|r| r.as_ref().err()).cloned().or_else(|| {
        (longest as u64 != bound).then(|| format!("diameter {longest} differs from the bound {bound}"))
    });
    let ok = first_failure.is_none();
    let stdout = if a.format.json {
        to_json(&serde_json::json!({
            "n": a.n,
            "verified": passed,
            "total": total,
            "diameter": longest,
            "bound": bound,
            "counterexample": first_failure,
        }))
    } else {
        format!("{summary}\n")
    };
    Outcome {
        code: if ok { EXIT_OK } else { EXIT_VERIFY },
        stdout,
        stderr: first_failure
            .map(|f| format!("counterexample {f}\n"))
            .unwrap_or_default(),
    }
}

/// Exact mean of integer samples, printed as a reduced fraction and as a
/// decimal rounded half-up to 3 places.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mean {
    pub numerator: u64,
    pub denominator: u64,
}

impl Mean {
    pub fn of(total: u64, count: u64) -> Self {
        let g = gcd(total, count).max(1);
        Mean {
            numerator: total / g,
            denominator: count / g,
        }
    }

    pub fn fraction(&self) -> String {
        format!("{}/{}", self.numerator, self.denominator)
    }

    pub fn decimal(&self) -> String {
        let thousandths = (self.numerator * 2000 + self.denominator) / (2 * self.denominator);
        format!("{}.{:03}", thousandths / 1000, thousandths % 1000)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Serialize)]
pub struct BenchSample {
    pub sample: usize,
    pub pi_inv: Vec<Element>,
    pub length: usize,
    pub bubble_length: usize,
    pub lower_bound: u64,
}

#[derive(Debug, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub mean_length: String,
    pub mean_length_decimal: String,
    pub max_length: usize,
    pub mean_bubble_length: String,
    pub mean_bubble_length_decimal: String,
    pub bound: u64,
}

/// `samples` uniformly random permutations of `{1, ..., n}` from a seeded
/// ChaCha8 stream.
pub fn random_permutations(n: usize, samples: usize, seed: u64) -> Vec<Permutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut line: Vec<Element> = (1..=n as Element).collect();
            line.shuffle(&mut rng);
            Permutation::from_one_line(line).expect("shuffle of 1..=n")
        })
        .collect()
}

fn cmd_bench(a: &BenchArgs) -> Outcome {
    if a.n < 2 {
        return Outcome::usage(Error::SizeOutOfRange { n: a.n, min: 2, max: usize::MAX });
    }
    if a.samples < 1 {
        return Outcome::usage("--samples must be at least 1");
    }
    let perms = random_permutations(a.n, a.samples, a.seed);
    let rows: Vec<Result<BenchSample, String>> = perms
        .into_par_iter()
        .enumerate()
        .map(|(sample, perm)| {
            let seq = optimal_sort(&perm).map_err(|e| e.to_string())?;
            let bubble = bubble_sort(&perm).map_err(|e| e.to_string())?;
            let d = optimal_displacement(&perm).map_err(|e| e.to_string())?;
            if !seq.sorts() || !bubble.sorts() {
                return Err(format!("sample {sample} [{perm}] was not sorted"));
            }
            Ok(BenchSample {
                sample,
                length: seq.len(),
                bubble_length: bubble.len(),
                lower_bound: lower_bound(&d).map_err(|e| e.to_string())?,
                pi_inv: perm.one_line().to_vec(),
            })
        })
        .collect();
    let rows = match rows.into_iter().collect::<Result<Vec<_>, _>>() {
        Ok(rows) => rows,
        Err(e) => {
            return Outcome {
                code: EXIT_VERIFY,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };

    let bound = diameter_bound(a.n);
    let count = rows.len() as u64;
    let mean = Mean::of(rows.iter().map(|r| r.length as u64).sum(), count);
    let mean_bubble = Mean::of(rows.iter().map(|r| r.bubble_length as u64).sum(), count);
    let summary = BenchRecord {
        n: a.n,
        sample_count: rows.len(),
        seed: a.seed,
        mean_length: mean.fraction(),
        mean_length_decimal: mean.decimal(),
        max_length: rows.iter().map(|r| r.length).max().unwrap_or(0),
        mean_bubble_length: mean_bubble.fraction(),
        mean_bubble_length_decimal: mean_bubble.decimal(),
        bound,
    };
    let over: Vec<_> = rows.iter().filter(|r| r.length as u64 > bound).collect();

    let stdout = if a.format.json {
        to_json(&serde_json::json!({"samples": rows, "summary": summary}))
    } else {
        let mut out = String::from("sample,n,seed,length,bubble_length,lower_bound,bound\n");
        for r in &rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{bound}",
                r.sample, a.n, a.seed, r.length, r.bubble_length, r.lower_bound
            )
            .expect("string write");
        }
        out.push_str(
            "summary,n,sample_count,seed,mean_length,mean_length_decimal,max_length,\
             mean_bubble_length,mean_bubble_length_decimal,bound\n",
        );
        writeln!(
            out,
            "summary,{},{},{},{},{},{},{},{},{}",
            summary.n,
            summary.sample_count,
            summary.seed,
            summary.mean_length,
            summary.mean_length_decimal,
            summary.max_length,
            summary.mean_bubble_length,
            summary.mean_bubble_length_decimal,
            summary.bound
        )
        .expect("string write");
        out
    };
    Outcome {
        code: if over.is_empty() { EXIT_OK } else { EXIT_VERIFY },
        stdout,
        stderr: over
            .first()
            .map(|r| format!("sample {} exceeds the bound: length {}\n", r.sample, r.length))
            .unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        let mut argv = vec!["circsort"];
        argv.extend_from_slice(args);
        run(argv, &mut std::io::empty())
    }

    #[test]
    fn means() {
        let m = Mean::of(61700, 50);
        assert_eq!(m.fraction(), "1234/1");
        assert_eq!(m.decimal(), "1234.000");
        assert_eq!(Mean::of(2, 3).decimal(), "0.667");
        assert_eq!(Mean::of(1, 3).decimal(), "0.333");
        assert_eq!(Mean::of(1, 8).decimal(), "0.125");
        assert_eq!(Mean::of(1, 2000).decimal(), "0.001");
        assert_eq!(Mean::of(0, 5).fraction(), "0/1");
    }

    #[test]
    fn stdin_input() {
        let out = run(["circsort", "sort"], &mut "3 4 1 2\n".as_bytes());
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["length"], 4);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["sort", "3", "x", "1"]).code, EXIT_USAGE);
        assert!(run_args(&["sort", "3 x 1"]).stderr.contains("'x'"));
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "8"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["worstcase", "5"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["diameter", "11"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["bench", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["bench", "5", "--samples", "0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["sort", "--json", "--csv", "1 2"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn random_permutations_are_seeded() {
        let a = random_permutations(20, 5, 42);
        assert_eq!(a, random_permutations(20, 5, 42));
        assert_ne!(a, random_permutations(20, 5, 43));
        assert!(a.iter().all(|p| p.has_standard_labels()));
    }
}
