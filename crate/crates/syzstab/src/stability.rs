//! Three-way stability classification for syzygy bundles of monomial
//! families, in exact integer arithmetic.
//!
//! For a family f_1..f_n and a subset J of size k with gcd degree d_J, the
//! integer margin is
//!
//! ```text
//! G(J) = -S_I*(k-1) - (d_J - S_J)*(n-1)
//! ```
//!
//! where S_J sums the degrees in J and S_I sums all family degrees. The
//! bundle is unstable iff some proper subset (k >= 2) has negative margin,
//! strictly semistable iff the minimum margin over proper subsets is zero,
//! and stable iff every such margin is positive. For equal degrees d this
//! reduces to (d - d_J)*n + d_J - d*k.
//!
//! [`classify`] evaluates only saturated subsets of gcd-closure divisors
//! (provably margin-minimizing); [`classify_bruteforce`] enumerates every
//! subset and serves as the oracle the reduced algorithm is tested against.

use crate::monomial::{gcd_closure, Family, Monomial};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default family-size cap for the exhaustive subset oracle (~10^6 subsets).
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Stable => "stable",
            Verdict::StrictlySemistable => "strictly-semistable",
            Verdict::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

/// One evaluated subset: the divisor that selects it, the subset's gcd
/// degree, its size, the exact margin, and the members themselves.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SubsetWitness {
    pub divisor: Monomial,
    pub d_j: u64,
    pub k: usize,
    pub margin: i64,
    pub members: Vec<Monomial>,
}

impl SubsetWitness {
    /// Total order used for reporting: smallest margin first, then the
    /// canonically smallest divisor, smallest subset, lexicographically
    /// smallest member list (members ordered by degree, then canonically).
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.margin
            .cmp(&other.margin)
            .then_with(|| self.divisor.cmp(&other.divisor))
            .then_with(|| self.k.cmp(&other.k))
            .then_with(|| cmp_member_lists(&self.members, &other.members))
    }
}

fn degree_then_canonical(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.cmp(b))
}

fn cmp_member_lists(a: &[Monomial], b: &[Monomial]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = degree_then_canonical(x, y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

/// Classification outcome with reporting witnesses.
///
/// `worst_witness` is the minimal-margin subset (absent only when no subset
/// shares a divisor, e.g. pairwise coprime families, which are stable).
/// `zero_margin_witnesses` lists the margin-zero saturated subsets with
/// positive-degree divisors; it is populated only for the strictly
/// semistable verdict.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub worst_witness: Option<SubsetWitness>,
    pub zero_margin_witnesses: Vec<SubsetWitness>,
}

impl Classification {
    pub fn min_margin(&self) -> Option<i64> {
        self.worst_witness.as_ref().map(|w| w.margin)
    }

    /// The destabilizing subset, present exactly when the verdict is Unstable.
    pub fn violating_witness(&self) -> Option<&SubsetWitness> {
        match self.verdict {
            Verdict::Unstable => self.worst_witness.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("family has {0} monomials; classification needs at least 2")]
    TooSmall(usize),
    #[error("member {0} is constant; the family generates the unit ideal")]
    ConstantMember(String),
    #[error(
        "not primary to the irrelevant maximal ideal: no pure power of X{0} among the generators"
    )]
    NotMPrimary(usize),
    #[error("family size {n} exceeds the subset-enumeration limit {limit}")]
    OverBruteForceLimit { n: usize, limit: usize },
    #[error("subset has {0} members; a margin needs at least 2")]
    SubsetTooSmall(usize),
    #[error("monomial {0} is not a family member (or is repeated)")]
    NotASubset(String),
}

fn validate(f: &Family) -> Result<(), ClassifyError> {
    if f.len() < 2 {
        return Err(ClassifyError::TooSmall(f.len()));
    }
    if let Some(c) = f.iter().find(|m| m.is_constant()) {
        return Err(ClassifyError::ConstantMember(c.to_string()));
    }
    for v in 0..f.vars() {
        if !f.iter().any(|m| m.is_pure_power_of(v)) {
            return Err(ClassifyError::NotMPrimary(v));
        }
    }
    Ok(())
}

fn margin_i128(s_i: i128, n: usize, d_j: i128, s_j: i128, k: usize) -> i128 {
    -s_i * (k as i128 - 1) - (d_j - s_j) * (n as i128 - 1)
}

fn narrow_margin(m: i128) -> i64 {
    i64::try_from(m).expect("margin exceeds i64; inputs outside the supported degree/size range")
}

/// Exact margin of an explicit subset, using the subset's true gcd degree.
/// Errors when the subset has fewer than two members or strays outside f.
pub fn subset_margin(f: &Family, members: &[Monomial]) -> Result<i64, ClassifyError> {
    if members.len() < 2 {
        return Err(ClassifyError::SubsetTooSmall(members.len()));
    }
    let mut seen: Vec<&Monomial> = Vec::with_capacity(members.len());
    for m in members {
        if !f.contains(m) || seen.contains(&m) {
            return Err(ClassifyError::NotASubset(m.to_string()));
        }
        seen.push(m);
    }
    let h = Monomial::gcd_all(members.iter()).expect("non-empty");
    let s_j: u64 = members.iter().map(Monomial::degree).sum();
    let g = margin_i128(
        f.sum_degrees() as i128,
        f.len(),
        h.degree() as i128,
        s_j as i128,
        members.len(),
    );
    Ok(narrow_margin(g))
}

/// Accumulates witnesses: running minimum by the reporting order plus the
/// margin-zero entries (positive-degree divisors only).
struct Aggregator {
    best: Option<SubsetWitness>,
    zeros: Vec<SubsetWitness>,
}

impl Aggregator {
    fn new() -> Self {
        Aggregator {
            best: None,
            zeros: Vec::new(),
        }
    }

    fn push(&mut self, w: SubsetWitness) {
        if w.margin == 0 && w.d_j > 0 {
            self.zeros.push(w.clone());
        }
        match &self.best {
            Some(cur) if w.cmp_key(cur) != Ordering::Less => {}
            _ => self.best = Some(w),
        }
    }

    fn finish(mut self) -> Classification {
        let verdict = match self.best.as_ref().map(|w| w.margin) {
            Some(m) if m < 0 => Verdict::Unstable,
            Some(0) => Verdict::StrictlySemistable,
            _ => Verdict::Stable,
        };
        let zero_margin_witnesses = if verdict == Verdict::StrictlySemistable {
            self.zeros.sort_by(|a, b| a.cmp_key(b));
            self.zeros
        } else {
            Vec::new()
        };
        Classification {
            verdict,
            worst_witness: self.best,
            zero_margin_witnesses,
        }
    }
}

fn witness(divisor: Monomial, d_j: u64, members: Vec<Monomial>, margin: i128) -> SubsetWitness {
    let mut members = members;
    members.sort_by(degree_then_canonical);
    SubsetWitness {
        divisor,
        d_j,
        k: members.len(),
        margin: narrow_margin(margin),
        members,
    }
}

fn classify_from_candidates(f: &Family, candidates: &[Monomial]) -> Classification {
    let n = f.len();
    let s_i = f.sum_degrees() as i128;
    let equal_degree = f.equal_degree().is_some();
    let mut agg = Aggregator::new();

    for g in candidates {
        let mg = f.multiples_of(g);
        if mg.len() < 2 || mg.len() == n {
            // A positive-degree divisor of the whole family would contradict
            // primarity; fewer than two multiples carries no margin.
            continue;
        }
        let h = Monomial::gcd_all(mg.iter()).expect("non-empty");
        if &h != g {
            // Not saturated: the same subset reappears under its true gcd.
            continue;
        }
        let d_j = h.degree();
        if equal_degree {
            // With equal degrees the full saturated set minimizes the margin
            // for this divisor.
            let s_j: u64 = mg.iter().map(Monomial::degree).sum();
            let m = margin_i128(s_i, n, d_j as i128, s_j as i128, mg.len());
            agg.push(witness(h, d_j, mg, m));
        } else {
            // Mixed degrees: the k smallest member degrees minimize S_J, so
            // every prefix of the degree-sorted saturated set is extremal
            // for its size.
            let mut sorted = mg;
            sorted.sort_by(degree_then_canonical);
            let mut s_j: u64 = sorted[0].degree() + sorted[1].degree();
            for k in 2..=sorted.len() {
                if k > 2 {
                    s_j += sorted[k - 1].degree();
                }
                let m = margin_i128(s_i, n, d_j as i128, s_j as i128, k);
                agg.push(witness(h.clone(), d_j, sorted[..k].to_vec(), m));
            }
        }
    }

    if !equal_degree {
        // Subsets with coprime supports destabilize only through low degree
        // sums, never through a common factor; scan the trivial divisor too.
        // (With equal degrees their margin is d*(n-k) > 0, never decisive.)
        let one = Monomial::one(f.vars());
        let mut sorted: Vec<Monomial> = f.monomials().to_vec();
        sorted.sort_by(degree_then_canonical);
        let mut s_j: u64 = sorted[0].degree() + sorted[1].degree();
        for k in 2..n {
            if k > 2 {
                s_j += sorted[k - 1].degree();
            }
            let m = margin_i128(s_i, n, 0, s_j as i128, k);
            agg.push(witness(one.clone(), 0, sorted[..k].to_vec(), m));
        }
    }

    agg.finish()
}

/// Classifies via the reduced search space: saturated subsets of
/// gcd-closure divisors (plus degree-sorted prefixes for mixed degrees).
/// Exact and equivalent to the brute-force enumeration.
pub fn classify(f: &Family) -> Result<Classification, ClassifyError> {
    validate(f)?;
    let candidates = gcd_closure(f);
    Ok(classify_from_candidates(f, &candidates))
}

/// Diagnostic variant that offers every divisor of every pairwise gcd as a
/// candidate instead of just the closure. Same result by construction;
/// exists to cross-check the reduction.
pub fn classify_all_divisor_candidates(f: &Family) -> Result<Classification, ClassifyError> {
    validate(f)?;
    let mut cands: Vec<Monomial> = Vec::new();
    for g in gcd_closure(f) {
        push_divisors(&g, &mut cands);
    }
    cands.sort();
    cands.dedup();
    Ok(classify_from_candidates(f, &cands))
}

fn push_divisors(g: &Monomial, out: &mut Vec<Monomial>) {
    let vars = g.vars();
    let mut cur = vec![0u32; vars];
    loop {
        if cur.iter().any(|&e| e > 0) {
            out.push(Monomial::new(cur.clone()));
        }
        let mut i = 0;
        loop {
            if i == vars {
                return;
            }
            if cur[i] < g.exponents()[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive oracle: enumerates every subset of size >= 2 except the whole
/// family, computes its true gcd, and classifies from those margins.
/// Same contract as [`classify`]; family size capped by `BRUTE_FORCE_LIMIT`.
pub fn classify_bruteforce(f: &Family) -> Result<Classification, ClassifyError> {
    classify_bruteforce_with_limit(f, BRUTE_FORCE_LIMIT)
}

/// Oracle with a caller-chosen size cap (hard max 32).
pub fn classify_bruteforce_with_limit(
    f: &Family,
    limit: usize,
) -> Result<Classification, ClassifyError> {
    validate(f)?;
    let n = f.len();
    let limit = limit.min(32);
    if n > limit {
        return Err(ClassifyError::OverBruteForceLimit { n, limit });
    }
    let packable = f.vars() <= 8 && f.iter().all(|m| m.exponents().iter().all(|&e| e <= 255));
    let raw = if packable {
        brute_scan_packed(f)
    } else {
        brute_scan_generic(f)
    };
    Ok(materialize(f, raw))
}

/// Best/zero subsets recorded as member bitmasks during the scan; witnesses
/// are materialized afterwards so the hot loop stays allocation-free.
struct RawScan {
    best: Option<RawBest>,
    zero_masks: Vec<u64>,
}

#[derive(Clone, Copy)]
struct RawBest {
    margin: i128,
    mask: u64,
}

fn subset_members(f: &Family, mask: u64) -> Vec<Monomial> {
    (0..f.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| f.monomials()[i].clone())
        .collect()
}

fn mask_witness(f: &Family, mask: u64, s_i: i128) -> SubsetWitness {
    let members = subset_members(f, mask);
    let h = Monomial::gcd_all(members.iter()).expect("non-empty");
    let d_j = h.degree();
    let s_j: u64 = members.iter().map(Monomial::degree).sum();
    let m = margin_i128(s_i, f.len(), d_j as i128, s_j as i128, members.len());
    witness(h, d_j, members, m)
}

fn materialize(f: &Family, raw: RawScan) -> Classification {
    let s_i = f.sum_degrees() as i128;
    let mut agg = Aggregator::new();
    // Re-derive the zero witnesses through the aggregator, deduped per
    // (divisor, size) with the same tie-breaking the reduced algorithm uses.
    let min_margin = raw.best.as_ref().map(|b| b.margin);
    if min_margin == Some(0) {
        let best_w = mask_witness(f, raw.best.unwrap().mask, s_i);
        if best_w.d_j == 0 {
            // Coprime-support winner; the zero reps below won't cover it.
            agg.push(best_w);
        }
        let mut reps: BTreeMap<(Monomial, usize), SubsetWitness> = BTreeMap::new();
        for mask in raw.zero_masks {
            let w = mask_witness(f, mask, s_i);
            if w.d_j == 0 {
                continue;
            }
            let key = (w.divisor.clone(), w.k);
            match reps.get(&key) {
                Some(cur) if w.cmp_key(cur) != Ordering::Less => {}
                _ => {
                    reps.insert(key, w);
                }
            }
        }
        for (_, w) in reps {
            agg.push(w);
        }
    } else if let Some(best) = raw.best {
        agg.push(mask_witness(f, best.mask, s_i));
    }
    agg.finish()
}

/// Picks the scan winner: smaller margin, then canonically smaller divisor,
/// then smaller subset, then lexicographically smaller member list. The
/// divisor/member comparisons match `SubsetWitness::cmp_key`.
fn better_mask(f: &Family, cand: (i128, u64), cur: (i128, u64)) -> bool {
    match cand.0.cmp(&cur.0) {
        Ordering::Less => return true,
        Ordering::Greater => return false,
        Ordering::Equal => {}
    }
    let s_i = f.sum_degrees() as i128;
    let wc = mask_witness(f, cand.1, s_i);
    let wb = mask_witness(f, cur.1, s_i);
    wc.cmp_key(&wb) == Ordering::Less
}

fn brute_scan_packed(f: &Family) -> RawScan {
    let n = f.len();
    // One exponent per byte, X0 in the most significant position, so u64
    // minimum/comparison agree with componentwise gcd and canonical order.
    let packed: Vec<u64> = f
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &e)| acc | (u64::from(e) << (8 * (7 - i))))
        })
        .collect();
    let degs: Vec<u64> = f.iter().map(Monomial::degree).collect();
    let s_i = f.sum_degrees() as i128;
    let equal_degree = f.equal_degree().is_some();
    let n_i128 = n as i128;

    fn packed_min(a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        for byte in 0..8 {
            let sh = 8 * byte;
            let x = (a >> sh) & 0xff;
            let y = (b >> sh) & 0xff;
            out |= x.min(y) << sh;
        }
        out
    }

    fn packed_degree(p: u64) -> u64 {
        (0..8).map(|byte| (p >> (8 * byte)) & 0xff).sum()
    }

    let mut scan = RawScan {
        best: None,
        zero_masks: Vec::new(),
    };

    // Depth-first include/exclude walk; gcd and degree sum ride along.
    let mut stack: Vec<(usize, usize, u64, u64, u64)> = vec![(0, 0, u64::MAX, 0, 0)];
    while let Some((idx, count, gcd, s_j, mask)) = stack.pop() {
        if idx == n {
            if count < 2 || count == n {
                continue;
            }
            let d_j = packed_degree(gcd);
            if equal_degree && d_j == 0 {
                continue;
            }
            let m = -s_i * (count as i128 - 1) - (d_j as i128 - s_j as i128) * (n_i128 - 1);
            if m == 0 {
                scan.zero_masks.push(mask);
            }
            match scan.best {
                Some(b) if !better_mask(f, (m, mask), (b.margin, b.mask)) => {}
                _ => scan.best = Some(RawBest { margin: m, mask }),
            }
            continue;
        }
        stack.push((idx + 1, count, gcd, s_j, mask));
        let g = if count == 0 {
            packed[idx]
        } else {
            packed_min(gcd, packed[idx])
        };
        stack.push((idx + 1, count + 1, g, s_j + degs[idx], mask | (1 << idx)));
    }
    scan
}

fn brute_scan_generic(f: &Family) -> RawScan {
    let n = f.len();
    let s_i = f.sum_degrees() as i128;
    let equal_degree = f.equal_degree().is_some();
    let n_i128 = n as i128;
    let mut scan = RawScan {
        best: None,
        zero_masks: Vec::new(),
    };
    let mut stack: Vec<(usize, usize, Option<Monomial>, u64, u64)> = vec![(0, 0, None, 0, 0)];
    while let Some((idx, count, gcd, s_j, mask)) = stack.pop() {
        if idx == n {
            if count < 2 || count == n {
                continue;
            }
            let d_j = gcd.as_ref().map(Monomial::degree).unwrap_or(0);
            if equal_degree && d_j == 0 {
                continue;
            }
            let m = -s_i * (count as i128 - 1) - (d_j as i128 - s_j as i128) * (n_i128 - 1);
            if m == 0 {
                scan.zero_masks.push(mask);
            }
            match scan.best {
                Some(b) if !better_mask(f, (m, mask), (b.margin, b.mask)) => {}
                _ => scan.best = Some(RawBest { margin: m, mask }),
            }
            continue;
        }
        let member = &f.monomials()[idx];
        let g = match &gcd {
            None => member.clone(),
            Some(h) => h.gcd(member),
        };
        stack.push((idx + 1, count, gcd, s_j, mask));
        stack.push((
            idx + 1,
            count + 1,
            Some(g),
            s_j + member.degree(),
            mask | (1 << idx),
        ));
    }
    scan
}
