//! Desk-scale verification harness: parameter sweeps that build and verify a
//! family for every admissible triple in a range, and exhaustive censuses
//! that classify every n-subset of the degree-d monomials.
//!
//! Work is chunked with a fixed chunk size so that reports — including the
//! truncation point under a work budget — are byte-identical regardless of
//! how many threads execute them.

use crate::combin::binomial;
use crate::construct::construct_family;
use crate::moduli::ser_bigint;
use crate::monomial::{enumerate_monomials, Family, Monomial};
use crate::stability::{classify, Verdict};
use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::Duration;
use thiserror::Error;

/// Default cap on the number of subsets a census will enumerate.
pub const CENSUS_LIMIT: u64 = 10_000_000;

/// Fixed scheduling quantum: budget checks happen between chunks, never
/// inside one, so truncation does not depend on thread count.
const CHUNK: usize = 8;
const CENSUS_CHUNK: usize = 8192;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("census would enumerate {total} subsets, over the limit {limit}")]
    LimitExceeded { total: String, limit: u64 },
    #[error("census needs n >= 1 and d >= 1; got d={d}, n={n}")]
    BadCensus { d: u32, n: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    #[serde(rename = "N")]
    pub n_proj: usize,
    pub d: u32,
    pub n: u64,
    pub recipe: String,
    pub verdict: Verdict,
    pub min_margin: Option<i64>,
    pub repaired: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepFailure {
    #[serde(rename = "N")]
    pub n_proj: usize,
    pub d: u32,
    pub n: u64,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// Verdict name -> number of entries, all three verdicts always present.
    pub summary: BTreeMap<String, u64>,
    pub failures: Vec<SweepFailure>,
    /// True when the work budget ran out before the ranges were exhausted.
    pub partial: bool,
    pub total_classify_calls: u64,
}

fn empty_summary() -> BTreeMap<String, u64> {
    [
        Verdict::Stable,
        Verdict::StrictlySemistable,
        Verdict::Unstable,
    ]
    .into_iter()
    .map(|v| (v.to_string(), 0))
    .collect()
}

/// Builds and verifies a family for every admissible (N, d, n) with N and d
/// in the given ranges and N+1 <= n <= C(d+N, N); on the line only the
/// triples where (n-1) | d are admissible, the rest are skipped. Entries are
/// ordered by (N, d, n). `budget` caps total classify calls: once a chunk
/// pushes past it the report is cut off there and flagged partial.
pub fn sweep(
    n_proj_range: RangeInclusive<usize>,
    d_range: RangeInclusive<u32>,
    budget: Option<u64>,
) -> SweepReport {
    let mut triples: Vec<(usize, u32, u64)> = Vec::new();
    for n_proj in n_proj_range {
        if n_proj < 1 {
            continue;
        }
        for d in d_range.clone() {
            if d < 1 {
                continue;
            }
            let top = binomial(d as u64 + n_proj as u64, n_proj as u64);
            let mut n = n_proj as u64 + 1;
            while BigInt::from(n) <= top {
                if n_proj > 1 || (d as u64).is_multiple_of(n - 1) {
                    triples.push((n_proj, d, n));
                }
                n += 1;
            }
        }
    }

    let mut report = SweepReport {
        entries: Vec::with_capacity(triples.len()),
        summary: empty_summary(),
        failures: Vec::new(),
        partial: false,
        total_classify_calls: 0,
    };
    for chunk in triples.chunks(CHUNK) {
        if let Some(b) = budget {
            if report.total_classify_calls > b {
                report.partial = true;
                break;
            }
        }
        let results: Vec<_> = chunk
            .par_iter()
            .map(|&(n_proj, d, n)| {
                let start = std::time::Instant::now();
                let r = construct_family(n_proj, d, n);
                (n_proj, d, n, r, start.elapsed())
            })
            .collect();
        for (n_proj, d, n, result, elapsed) in results {
            match result {
                Ok(r) => {
                    report.total_classify_calls += r.classify_calls;
                    *report
                        .summary
                        .get_mut(&r.verification.verdict.to_string())
                        .expect("summary pre-seeded") += 1;
                    report.entries.push(SweepEntry {
                        n_proj,
                        d,
                        n,
                        recipe: r.recipe,
                        verdict: r.verification.verdict,
                        min_margin: r.verification.min_margin(),
                        repaired: r.repaired,
                        elapsed,
                    });
                }
                Err(e) => {
                    report.total_classify_calls += 1;
                    report.failures.push(SweepFailure {
                        n_proj,
                        d,
                        n,
                        message: e.to_string(),
                    });
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusOrbit {
    pub family: Family,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    #[serde(rename = "N")]
    pub n_proj: usize,
    pub d: u32,
    pub n: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub total_families: BigInt,
    pub m_primary_count: u64,
    /// Verdict name -> number of m-primary families.
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_count: Option<u64>,
    /// One representative per coordinate-permutation orbit (the
    /// lexicographically least permuted form), present when deduping.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<CensusOrbit>>,
}

struct CensusAccumulator {
    m_primary: u64,
    counts: BTreeMap<String, u64>,
    orbits: Option<BTreeMap<Vec<Monomial>, CensusOrbit>>,
}

impl CensusAccumulator {
    fn new(orbit: bool) -> Self {
        CensusAccumulator {
            m_primary: 0,
            counts: empty_summary(),
            orbits: orbit.then(BTreeMap::new),
        }
    }

    fn merge(&mut self, other: CensusAccumulator) {
        self.m_primary += other.m_primary;
        for (k, v) in other.counts {
            *self.counts.get_mut(&k).expect("summary pre-seeded") += v;
        }
        if let (Some(mine), Some(theirs)) = (&mut self.orbits, other.orbits) {
            for (k, v) in theirs {
                mine.entry(k).or_insert(v);
            }
        }
    }
}

/// Advances `idx` to the next k-combination of 0..pool_len in lexicographic
/// order; false when the last combination was already reached.
fn next_combination(idx: &mut [usize], pool_len: usize) -> bool {
    let k = idx.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        if idx[pos] != pos + pool_len - k {
            idx[pos] += 1;
            for later in pos + 1..k {
                idx[later] = idx[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The lexicographically least coordinate permutation of a family: the
/// canonical orbit label under the symmetric group on the variables.
fn orbit_canonical(f: &Family) -> Vec<Monomial> {
    (0..f.vars())
        .permutations(f.vars())
        .map(|perm| f.permuted(&perm).monomials().to_vec())
        .min()
        .expect("at least the identity permutation")
}

/// Classifies every n-subset of the degree-d monomials in N+1 variables.
/// Non-m-primary subsets are skipped (they have no bundle to classify);
/// `up_to_symmetry` additionally groups the m-primary ones into orbits under
/// variable permutation and keeps one representative each.
pub fn census(
    n_proj: usize,
    d: u32,
    n: u64,
    up_to_symmetry: bool,
    limit: u64,
) -> Result<CensusReport, HarnessError> {
    if d < 1 || n < 1 || n_proj < 1 {
        return Err(HarnessError::BadCensus { d, n });
    }
    let pool = enumerate_monomials(n_proj + 1, d);
    let total = binomial(pool.len() as u64, n);
    if total > BigInt::from(limit) {
        return Err(HarnessError::LimitExceeded {
            total: total.to_string(),
            limit,
        });
    }

    let vars = n_proj + 1;
    let k = n as usize;
    let mut acc = CensusAccumulator::new(up_to_symmetry);
    let mut chunk: Vec<Vec<Monomial>> = Vec::with_capacity(CENSUS_CHUNK);
    let flush = |chunk: &mut Vec<Vec<Monomial>>, acc: &mut CensusAccumulator| {
        let partial = chunk
            .par_drain(..)
            .fold(
                || CensusAccumulator::new(up_to_symmetry),
                |mut a, members| {
                    let family = Family::new(vars, members).expect("subsets of the pool are valid");
                    if !family.is_m_primary() {
                        return a;
                    }
                    a.m_primary += 1;
                    let verdict = classify(&family)
                        .expect("m-primary families classify")
                        .verdict;
                    *a.counts.get_mut(&verdict.to_string()).expect("pre-seeded") += 1;
                    if let Some(orbits) = &mut a.orbits {
                        let canon = orbit_canonical(&family);
                        orbits.entry(canon.clone()).or_insert_with(|| CensusOrbit {
                            family: Family::new(vars, canon).expect("permuted family is valid"),
                            verdict,
                        });
                    }
                    a
                },
            )
            .reduce(
                || CensusAccumulator::new(up_to_symmetry),
                |mut a, b| {
                    a.merge(b);
                    a
                },
            );
        acc.merge(partial);
    };

    if k >= 1 && k <= pool.len() {
        // Walk index combinations in lexicographic order.
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            chunk.push(idx.iter().map(|&i| pool[i].clone()).collect());
            if chunk.len() == CENSUS_CHUNK {
                flush(&mut chunk, &mut acc);
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
        if !chunk.is_empty() {
            flush(&mut chunk, &mut acc);
        }
    }

    let (orbit_count, representatives) = match acc.orbits {
        Some(orbits) => (
            Some(orbits.len() as u64),
            Some(orbits.into_values().collect()),
        ),
        None => (None, None),
    };
    Ok(CensusReport {
        n_proj,
        d,
        n,
        total_families: total,
        m_primary_count: acc.m_primary,
        counts: acc.counts,
        orbit_count,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_of_five_quadrics_finds_one_semistable_orbit() {
        let r = census(2, 2, 5, true, CENSUS_LIMIT).unwrap();
        assert_eq!(r.total_families, BigInt::from(6));
        assert_eq!(r.m_primary_count, 3);
        assert_eq!(r.counts["stable"], 0);
        assert_eq!(r.counts["strictly-semistable"], 3);
        assert_eq!(r.counts["unstable"], 0);
        assert_eq!(r.orbit_count, Some(1));
        let reps = r.representatives.unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].verdict, Verdict::StrictlySemistable);
        assert_eq!(reps[0].family.len(), 5);
    }

    #[test]
    fn line_census_matches_divisibility() {
        // d=3, n=3: 2 does not divide 3, so nothing is even semistable.
        let r = census(1, 3, 3, false, CENSUS_LIMIT).unwrap();
        assert!(r.m_primary_count > 0);
        assert_eq!(r.counts["stable"], 0);
        assert_eq!(r.counts["strictly-semistable"], 0);
        assert_eq!(r.counts["unstable"], r.m_primary_count);

        // d=4, n=3: the even ladder is strictly semistable.
        let r = census(1, 4, 3, false, CENSUS_LIMIT).unwrap();
        assert!(r.counts["strictly-semistable"] >= 1);
        assert_eq!(r.counts["stable"], 0);
    }

    #[test]
    fn census_respects_limit() {
        assert!(matches!(
            census(2, 4, 7, false, 100),
            Err(HarnessError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn orbit_representatives_classify_like_their_members() {
        let r = census(2, 2, 4, true, CENSUS_LIMIT).unwrap();
        // Orbit totals must add up to the m-primary count when re-expanded:
        // here we just check every representative re-classifies to its verdict.
        for rep in r.representatives.unwrap() {
            assert_eq!(classify(&rep.family).unwrap().verdict, rep.verdict);
        }
    }

    #[test]
    fn sweep_small_plane_range_is_clean() {
        let r = sweep(2..=2, 1..=4, None);
        assert!(r.failures.is_empty());
        assert!(!r.partial);
        assert!(r.entries.iter().all(|e| !e.repaired));
        // Admissible n counts: d=1 -> 1, d=2 -> 4, d=3 -> 8, d=4 -> 13.
        assert_eq!(r.entries.len(), 1 + 4 + 8 + 13);
        let ss: Vec<_> = r
            .entries
            .iter()
            .filter(|e| e.verdict == Verdict::StrictlySemistable)
            .collect();
        assert_eq!(ss.len(), 1);
        assert_eq!((ss[0].d, ss[0].n), (2, 5));
        assert_eq!(r.summary["stable"], 25);
        assert_eq!(r.summary["strictly-semistable"], 1);
        assert_eq!(r.summary["unstable"], 0);
    }

    #[test]
    fn sweep_line_skips_non_divisible_sizes() {
        let r = sweep(1..=1, 1..=6, None);
        assert!(r.failures.is_empty());
        for e in &r.entries {
            assert_eq!(e.d as u64 % (e.n - 1), 0);
            let expect = if e.n == 2 {
                Verdict::Stable
            } else {
                Verdict::StrictlySemistable
            };
            assert_eq!(e.verdict, expect);
        }
        // d=6: n-1 in {1,2,3,6} -> n in {2,3,4,7}.
        assert_eq!(r.entries.iter().filter(|e| e.d == 6).count(), 4);
    }

    #[test]
    fn sweep_budget_truncates_deterministically() {
        let full = sweep(2..=2, 1..=6, None);
        let budget = full.total_classify_calls / 2;
        let a = sweep(2..=2, 1..=6, Some(budget));
        let b = sweep(2..=2, 1..=6, Some(budget));
        assert!(a.partial);
        assert_eq!(a.entries.len(), b.entries.len());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.entries.len() < full.entries.len());
    }

    #[test]
    fn sweep_entries_are_sorted_and_complete() {
        let r = sweep(2..=3, 1..=2, None);
        let keys: Vec<_> = r.entries.iter().map(|e| (e.n_proj, e.d, e.n)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // N=2: d=1 -> 1 triple, d=2 -> 4; N=3: d=1 -> 1, d=2 -> 7.
        assert_eq!(r.entries.len(), 1 + 4 + 1 + 7);
    }
}
