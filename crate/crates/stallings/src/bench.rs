//! Measurement support: iterated-logarithm arithmetic, seeded random
//! instances, oracle-equivalence campaigns and scaling runs.
//!
//! The folding loop is near-linear because disjoint-set lookups amortize to
//! `O(log* N)` per operation. Nothing here proves that; instead the forest
//! counts its parent-link hops and these helpers generate workloads and
//! check the counted totals against the bound (with a deliberately generous
//! constant — the claim under test is an upper bound, not a fit).

use std::ops::RangeInclusive;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::folding::{
    build_bouquet, canonical_form, compact, fold_in_place, naive_fold, FoldedGraph,
};
use crate::words::{Alphabet, Letter, Word};

/// Iterated base-2 logarithm: the least `k` such that applying `log2`
/// `k` times to `n` lands at or below 1. Panics on 0.
///
/// The iteration runs on the real logarithm, not a floor: `log*(10)` is 3
/// because `10 → 3.32… → 1.73… → 0.79…`, even though floored intermediate
/// values would say otherwise.
pub fn log_star(n: u128) -> u32 {
    assert!(n > 0, "log* is defined for positive integers only");
    let mut x = n as f64;
    let mut k = 0;
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// `log*(2^k)` computed via the identity `log*(2^k) = log*(k) + 1`, so
/// tower-sized arguments (like `2^65536`) never need materializing.
pub fn log_star_pow2(k: u128) -> u32 {
    log_star(k) + 1
}

/// The measured amortization claim: over any workload, parent-link hops
/// stay within `10 · (ops + nodes) · (log*(nodes) + 1)`.
pub fn within_amortized_bound(traversals: u64, ops: u64, nodes: usize) -> bool {
    assert!(nodes > 0, "a workload has at least one node");
    let bound = 10 * (ops + nodes as u64) * (u64::from(log_star(nodes as u128)) + 1);
    traversals <= bound
}

/// Uniformly random freely reduced word: the first letter is uniform over
/// all `2·rank` signed letters, each later letter uniform over the
/// `2·rank − 1` letters that do not cancel its predecessor.
pub fn random_reduced_word(len: usize, rank: usize, rng: &mut impl Rng) -> Word {
    let signed = 2 * rank;
    let letter_of = |s: usize| Letter::new((s % rank) as u8, s >= rank);
    let signed_of = |l: Letter| l.generator() + if l.is_inverse() { rank } else { 0 };
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let s = match letters.last() {
            None => rng.gen_range(0..signed),
            Some(&prev) => {
                let forbidden = signed_of(prev.inverted());
                let s = rng.gen_range(0..signed - 1);
                if s >= forbidden {
                    s + 1
                } else {
                    s
                }
            }
        };
        letters.push(letter_of(s));
    }
    Word::from_letters(letters)
}

/// One instance of the oracle campaign, with everything later checks need:
/// the generating words, both canonical forms, and the forest counters of
/// the fast fold.
#[derive(Clone, Debug)]
pub struct OracleTrial {
    pub trial: usize,
    pub rank: usize,
    pub words: Vec<Word>,
    pub total_letters: usize,
    pub fast_canonical: String,
    pub reference_canonical: String,
    pub folded: FoldedGraph,
    pub dsf_ops: u64,
    pub dsf_traversals: u64,
    pub dsf_nodes: usize,
}

impl OracleTrial {
    pub fn passed(&self) -> bool {
        self.fast_canonical == self.reference_canonical
    }
}

/// Outcome of [`verify_against_oracle`].
#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub trials: Vec<OracleTrial>,
}

impl OracleReport {
    pub fn passes(&self) -> usize {
        self.trials.iter().filter(|t| t.passed()).count()
    }

    pub fn failures(&self) -> Vec<&OracleTrial> {
        self.trials.iter().filter(|t| !t.passed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Folds `trials` random bouquets twice — once with the near-linear engine,
/// once with the quadratic rewrite oracle — and records both canonical
/// forms per trial. Rank, generator count and word lengths are drawn from
/// the given ranges; everything is a pure function of `seed`.
pub fn verify_against_oracle(
    trials: usize,
    ranks: RangeInclusive<usize>,
    generator_counts: RangeInclusive<usize>,
    lengths: RangeInclusive<usize>,
    seed: u64,
) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    for trial in 0..trials {
        let rank = rng.gen_range(ranks.clone());
        let alphabet = Alphabet::new(rank);
        let count = rng.gen_range(generator_counts.clone());
        let words: Vec<Word> = (0..count)
            .map(|_| random_reduced_word(rng.gen_range(lengths.clone()), rank, &mut rng))
            .collect();
        let total_letters = words.iter().map(Word::len).sum();

        let mut g = build_bouquet(&words, alphabet);
        let reference = naive_fold(&g);
        let dsf_nodes = g.forest().node_count();
        fold_in_place(&mut g);
        let folded = compact(&g);
        report.trials.push(OracleTrial {
            trial,
            rank,
            words,
            total_letters,
            fast_canonical: canonical_form(&folded).expect("fold output is folded"),
            reference_canonical: canonical_form(&reference).expect("oracle output is folded"),
            folded,
            dsf_ops: g.forest().op_count(),
            dsf_traversals: g.forest().traversal_count(),
            dsf_nodes,
        });
    }
    report
}

/// One scaling measurement: a fold of a size-`n` instance.
#[derive(Clone, Copy, Debug)]
pub struct ScalingRow {
    pub n: usize,
    pub time_ns: u128,
    pub ns_per_n: f64,
    /// Time divided by `n · (log*(n) + 1)` — flat when the bound is tight.
    pub ns_per_n_logstar: f64,
    pub dsf_traversals: u64,
}

/// Folds `reps` seeded single-word instances per size (total length `n`),
/// timing bouquet construction + folding + compaction, and emits one row
/// per instance in size order. Deterministic in `seed`.
pub fn run_scaling(sizes: &[usize], reps: usize, seed: u64) -> Vec<ScalingRow> {
    let mut rows = Vec::with_capacity(sizes.len() * reps);
    for &n in sizes {
        for rep in 0..reps {
            let instance_seed = seed ^ ((n as u64) << 20) ^ rep as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
            let word = random_reduced_word(n, 2, &mut rng);
            let alphabet = Alphabet::new(2);

            let start = Instant::now();
            let mut g = build_bouquet(&[word], alphabet);
            fold_in_place(&mut g);
            let folded = compact(&g);
            let time_ns = start.elapsed().as_nanos();
            std::hint::black_box(&folded);

            let denom = n as f64 * (f64::from(log_star(n as u128)) + 1.0);
            rows.push(ScalingRow {
                n,
                time_ns,
                ns_per_n: time_ns as f64 / n as f64,
                ns_per_n_logstar: time_ns as f64 / denom,
                dsf_traversals: g.forest().traversal_count(),
            });
        }
    }
    rows
}

/// TSV rendering of scaling rows, header included.
pub fn scaling_tsv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("N\ttime_ns\tns_per_N\tns_per_NlogstarN\tdsf_traversals\n");
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.3}\t{:.3}\t{}\n",
            row.n, row.time_ns, row.ns_per_n, row.ns_per_n_logstar, row.dsf_traversals
        ));
    }
    out
}
