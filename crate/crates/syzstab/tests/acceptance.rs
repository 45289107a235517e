//! Acceptance suite: one test per contract criterion, each printing a
//! `PASS: ...` line on success (run with `-- --nocapture` to see them all).
//!
//! The criteria, in order: exact canonical examples; full plane coverage for
//! d ≤ 8; full space coverage for N = 3, 4; the line dichotomy in both
//! directions; uniqueness of the semistable quadric family; reduced-vs-
//! exhaustive oracle equivalence on random families; moduli formula
//! consistency; the interior recursion filling the whole simplex; and
//! byte-identical parallel reports.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use syzstab::construct::{construct_family, full_simplex, interior_recursion};
use syzstab::harness::{census, sweep};
use syzstab::moduli::moduli_report;
use syzstab::monomial::{enumerate_monomials, Family, Monomial};
use syzstab::stability::{classify, classify_bruteforce, Verdict};

fn fam(vars: usize, exps: &[&[u32]]) -> Family {
    let ms = exps.iter().map(|e| Monomial::new(e.to_vec())).collect();
    Family::new(vars, ms).expect("valid family")
}

fn pass(line: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{line}: took {elapsed:?}, budget {budget:?}"
    );
    println!("PASS: {line} ({elapsed:.2?})");
}

#[test]
fn canonical_examples_classify_exactly() {
    let start = Instant::now();

    let stable = fam(3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 1, 1]]);
    let c = classify(&stable).unwrap();
    assert_eq!(c.verdict, Verdict::Stable);
    assert_eq!(c.min_margin(), Some(2));

    let unstable = fam(3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[3, 1, 0]]);
    let c = classify(&unstable).unwrap();
    assert_eq!(c.verdict, Verdict::Unstable);
    let w = c.worst_witness.unwrap();
    assert_eq!((w.margin, w.d_j, w.k), (-1, 3, 2));
    assert_eq!(w.divisor, Monomial::new(vec![3, 0, 0]));

    let semistable = fam(
        3,
        &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0], &[1, 0, 1]],
    );
    let c = classify(&semistable).unwrap();
    assert_eq!(c.verdict, Verdict::StrictlySemistable);
    assert_eq!(c.min_margin(), Some(0));

    pass(
        "the three canonical quartic/quadric families classify exactly",
        start,
        Duration::from_secs(1),
    );
}

#[test]
fn plane_families_verify_for_all_small_degrees() {
    let start = Instant::now();
    let report = sweep(2..=2, 1..=8, None);
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    assert!(!report.partial);
    let cases = report.entries.len();
    let admissible: usize = (1u32..=8)
        .map(|d| enumerate_monomials(3, d).len() - 2)
        .sum();
    assert_eq!(
        cases, admissible,
        "sweep must cover every admissible (d, n)"
    );
    for e in &report.entries {
        let expected = if (e.d, e.n) == (2, 5) {
            Verdict::StrictlySemistable
        } else {
            Verdict::Stable
        };
        assert_eq!(
            e.verdict, expected,
            "(2,{},{}) got {} via {}",
            e.d, e.n, e.verdict, e.recipe
        );
        assert!(!e.repaired, "(2,{},{}) needed repair", e.d, e.n);
    }
    pass(
        &format!("all {cases} plane families for d ≤ 8 verify, (2,2,5) alone strictly semistable"),
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn space_families_verify_in_dimensions_three_and_four() {
    let start = Instant::now();
    let mut cases = 0;
    for (n_proj, d_max) in [(3usize, 6u32), (4, 5)] {
        let report = sweep(n_proj..=n_proj, 1..=d_max, None);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        for e in &report.entries {
            assert_eq!(
                e.verdict,
                Verdict::Stable,
                "({},{},{}) got {} via {}",
                e.n_proj,
                e.d,
                e.n,
                e.verdict,
                e.recipe
            );
            assert!(!e.repaired, "({},{},{}) needed repair", e.n_proj, e.d, e.n);
        }
        cases += report.entries.len();
    }
    pass(
        &format!("all {cases} families in P^3 (d ≤ 6) and P^4 (d ≤ 5) verify stable"),
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn line_families_exist_exactly_when_degree_divides() {
    let start = Instant::now();
    let mut constructed = 0;
    let mut censused = 0;
    for d in 1u32..=12 {
        for n in 2u64..=(d as u64 + 1) {
            if u64::from(d) % (n - 1) == 0 {
                let r = construct_family(1, d, n).unwrap();
                let expected = if n == 2 {
                    Verdict::Stable
                } else {
                    Verdict::StrictlySemistable
                };
                assert_eq!(r.verification.verdict, expected, "(1,{d},{n})");
                constructed += 1;
            } else {
                let report = census(1, d, n, false, 1_000_000).unwrap();
                let semistable = report.counts["stable"] + report.counts["strictly-semistable"];
                assert_eq!(
                    semistable, 0,
                    "(1,{d},{n}) should have no semistable m-primary family"
                );
                assert!(report.counts["unstable"] > 0 || report.m_primary_count == 0);
                censused += 1;
            }
        }
    }
    pass(
        &format!(
            "line dichotomy holds for d ≤ 12: {constructed} divisible sizes construct, \
             {censused} exhaustive scans find no semistable family"
        ),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn semistable_quadric_family_is_unique_up_to_symmetry() {
    let start = Instant::now();
    let report = census(2, 2, 5, true, 1_000_000).unwrap();
    assert_eq!(report.total_families.to_string(), "6");
    assert_eq!(report.m_primary_count, 3);
    assert_eq!(report.counts["stable"], 0);
    assert_eq!(report.counts["strictly-semistable"], 3);
    assert_eq!(report.counts["unstable"], 0);
    assert_eq!(report.orbit_count, Some(1));
    let reps = report.representatives.as_ref().unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(reps[0].verdict, Verdict::StrictlySemistable);
    pass(
        "five quadrics: 0 stable, 3 strictly semistable, a single permutation orbit",
        start,
        Duration::from_secs(1),
    );
}

/// Random m-primary family: every variable gets a pure power, the rest is
/// filled with distinct random monomials; equal-degree half the time.
fn random_m_primary(rng: &mut ChaCha8Rng) -> Family {
    let vars = rng.gen_range(2..=5usize);
    let n = rng.gen_range((vars + 1).max(3)..=16usize);
    let equal_degree = rng.gen_bool(0.5);
    let d_fixed = rng.gen_range(2..=8u32);
    let mut monomials: Vec<Monomial> = Vec::new();
    let push_unique = |monomials: &mut Vec<Monomial>, m: Monomial| {
        if !monomials.contains(&m) {
            monomials.push(m);
        }
    };
    for v in 0..vars {
        let d = if equal_degree {
            d_fixed
        } else {
            rng.gen_range(1..=8u32)
        };
        let mut e = vec![0u32; vars];
        e[v] = d;
        push_unique(&mut monomials, Monomial::new(e));
    }
    let mut guard = 0;
    while monomials.len() < n && guard < 1000 {
        guard += 1;
        let d = if equal_degree {
            d_fixed
        } else {
            rng.gen_range(1..=8u32)
        };
        // d spread over the variables by repeated random assignment.
        let mut e = vec![0u32; vars];
        for _ in 0..d {
            e[rng.gen_range(0..vars)] += 1;
        }
        push_unique(&mut monomials, Monomial::new(e));
    }
    Family::new(vars, monomials).expect("m-primary by construction")
}

#[test]
fn reduced_classifier_agrees_with_exhaustive_oracle_on_random_families() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5152_3353);
    let runs = 1200;
    let mut mixed = 0;
    for i in 0..runs {
        let f = random_m_primary(&mut rng);
        if f.equal_degree().is_none() {
            mixed += 1;
        }
        let fast = classify(&f).expect("reduced classifier");
        let slow = classify_bruteforce(&f).expect("exhaustive classifier");
        assert_eq!(fast, slow, "disagreement on run {i}: {f:?}");
    }
    assert!(
        mixed >= runs / 5,
        "want a healthy mixed-degree share, got {mixed}"
    );
    pass(
        &format!(
            "reduced and exhaustive classifiers agree on {runs} random families ({mixed} mixed-degree)"
        ),
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn moduli_formulas_are_consistent_across_swept_ranges() {
    let start = Instant::now();
    let mut cases = 0;
    for (n_proj, d_max) in [(2usize, 8u32), (3, 6), (4, 5)] {
        for d in 1..=d_max {
            let total = enumerate_monomials(n_proj + 1, d).len() as u64;
            for n in (n_proj as u64 + 1)..=total {
                if (n_proj, d, n) == (2, 2, 5) {
                    continue; // the one refused triple
                }
                let r = moduli_report(n_proj, d, n).unwrap();
                assert_eq!(&r.dim_component - &r.dim_stratum, r.codim);
                assert_eq!(r.chern[0], BigInt::from(-i64::from(d) * n as i64));
                if n_proj == 3 {
                    assert!(d < 4 || r.ext2 > BigInt::from(0));
                } else {
                    assert_eq!(r.ext2, BigInt::from(0));
                }
                cases += 1;
            }
        }
    }
    let spot = moduli_report(2, 4, 5).unwrap();
    assert_eq!(spot.dim_stratum, BigInt::from(50));
    assert_eq!(spot.codim, BigInt::from(15));
    pass(
        &format!("moduli formulas consistent on {cases} triples; (2,4,5) gives 50 + 15"),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn interior_recursion_fills_the_whole_simplex() {
    let start = Instant::now();
    let recursed = interior_recursion(3, 5, 56).unwrap();
    let simplex = full_simplex(3, 5);
    assert_eq!(recursed.monomials(), simplex.monomials());
    pass(
        "interior recursion at (3,5,56) reproduces the full degree-5 simplex",
        start,
        Duration::from_secs(10),
    );
}

#[test]
fn parallel_sweeps_serialize_byte_identically() {
    let start = Instant::now();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("pool builds");
        let report = pool.install(|| sweep(1..=3, 1..=4, None));
        serde_json::to_string_pretty(&report).expect("report serializes")
    };
    let one = run(1);
    let four = run(4);
    let again = run(4);
    assert_eq!(one, four, "thread count changed the report bytes");
    assert_eq!(four, again, "repeated run changed the report bytes");

    let budget = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("pool builds");
        let report = pool.install(|| sweep(2..=2, 1..=6, Some(25)));
        assert!(report.partial);
        serde_json::to_string_pretty(&report).expect("report serializes")
    };
    assert_eq!(budget(1), budget(3), "budget truncation depends on threads");

    pass(
        "sweep reports are byte-identical across thread counts, with and without budgets",
        start,
        Duration::from_secs(120),
    );
}
