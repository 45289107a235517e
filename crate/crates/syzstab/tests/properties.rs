//! Property-based laws: monomial gcd algebra, enumeration counts, candidate
//! closure soundness, permutation invariance of classification, the margin
//! formula against direct subset evaluation, and cross-module slope
//! consistency.

use num_traits::ToPrimitive;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::subsequence;
use syzstab::combin::monomial_count;
use syzstab::moduli::{bundle_numerics, slope};
use syzstab::monomial::{enumerate_monomials, gcd_closure, Family, Monomial};
use syzstab::stability::{classify, subset_margin, Verdict};

fn arb_monomial(vars: usize) -> impl Strategy<Value = Monomial> {
    vec(0..=6u32, vars).prop_map(Monomial::new)
}

/// m-primary family with arbitrary (mixed) degrees: one pure power per
/// variable plus up to six distinct extras.
fn arb_family() -> impl Strategy<Value = Family> {
    (2..=4usize).prop_flat_map(|vars| {
        (
            Just(vars),
            vec(1..=6u32, vars),
            vec(vec(0..=4u32, vars), 0..6),
        )
            .prop_map(|(vars, pures, extras)| {
                let mut ms: Vec<Monomial> = pures
                    .iter()
                    .enumerate()
                    .map(|(v, &e)| Monomial::pure_power(vars, v, e))
                    .collect();
                for e in extras {
                    let m = Monomial::new(e);
                    if !m.is_constant() && !ms.contains(&m) {
                        ms.push(m);
                    }
                }
                Family::new(vars, ms).expect("m-primary by construction")
            })
    })
}

/// m-primary family in which every member has the same degree.
fn arb_equal_degree_family() -> impl Strategy<Value = Family> {
    (2..=3usize, 2..=5u32).prop_flat_map(|(vars, d)| {
        let pool: Vec<Monomial> = enumerate_monomials(vars, d)
            .into_iter()
            .filter(|m| !(0..vars).any(|v| m.is_pure_power_of(v)))
            .collect();
        let cap = pool.len().min(6);
        subsequence(pool, 0..=cap).prop_map(move |extra| {
            let mut ms: Vec<Monomial> = (0..vars)
                .map(|v| Monomial::pure_power(vars, v, d))
                .collect();
            ms.extend(extra);
            Family::new(vars, ms).expect("m-primary by construction")
        })
    })
}

proptest! {
    #[test]
    fn gcd_is_commutative_associative_and_bounded(
        a in arb_monomial(4),
        b in arb_monomial(4),
        c in arb_monomial(4),
    ) {
        prop_assert_eq!(a.gcd(&b), b.gcd(&a));
        prop_assert_eq!(a.gcd(&b).gcd(&c), a.gcd(&b.gcd(&c)));
        prop_assert_eq!(a.gcd(&a), a.clone());
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert!(g.degree() <= a.degree().min(b.degree()));
    }

    #[test]
    fn divisibility_is_a_partial_order_witnessed_by_gcd(
        a in arb_monomial(3),
        b in arb_monomial(3),
    ) {
        prop_assert_eq!(a.divides(&b), a.gcd(&b) == a);
        if a.divides(&b) && b.divides(&a) {
            prop_assert_eq!(a.clone(), b.clone());
        }
        prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
        prop_assert!(a.divides(&a.mul(&b)));
    }

    #[test]
    fn enumeration_matches_the_stars_and_bars_count(
        vars in 1..=5usize,
        d in 0..=8u32,
    ) {
        let all = enumerate_monomials(vars, d);
        prop_assert_eq!(
            Some(all.len()),
            monomial_count(vars, u64::from(d)).to_usize()
        );
        prop_assert!(all.iter().all(|m| m.degree() == u64::from(d)));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, all);
    }

    #[test]
    fn candidate_closure_covers_pairwise_gcds(f in arb_family()) {
        let closure = gcd_closure(&f);
        for (i, a) in f.iter().enumerate() {
            for b in f.iter().skip(i + 1) {
                let g = a.gcd(b);
                if !g.is_constant() {
                    prop_assert!(
                        closure.contains(&g),
                        "missing pairwise gcd {:?}",
                        g
                    );
                }
            }
        }
        for g in &closure {
            prop_assert!(!g.is_constant());
            prop_assert!(
                f.iter().filter(|m| g.divides(m)).count() >= 2,
                "candidate {:?} saturates fewer than two members",
                g
            );
        }
    }

    #[test]
    fn classification_is_invariant_under_variable_permutation(
        f in arb_family(),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..f.vars()).collect();
        perm.shuffle(&mut rng);

        let base = classify(&f).unwrap();
        let image = classify(&f.permuted(&perm)).unwrap();
        prop_assert_eq!(base.verdict, image.verdict);
        prop_assert_eq!(base.min_margin(), image.min_margin());
        prop_assert_eq!(
            base.zero_margin_witnesses.len(),
            image.zero_margin_witnesses.len()
        );
        // Several subsets can tie for the minimum; the deterministic
        // tie-break may pick different ones under renaming, but the margin
        // itself is invariant.
        if let (Some(a), Some(b)) = (&base.worst_witness, &image.worst_witness) {
            prop_assert_eq!(a.margin, b.margin);
        }
    }

    #[test]
    fn equal_degree_margin_reduces_to_the_short_form(
        (f, pick) in arb_equal_degree_family().prop_flat_map(|f| {
            let members = f.monomials().to_vec();
            let n = members.len();
            (Just(f), subsequence(members, 2..=n))
        })
    ) {
        let d = f.equal_degree().unwrap() as i64;
        let n = f.len() as i64;
        let k = pick.len() as i64;
        let d_j = Monomial::gcd_all(pick.iter()).unwrap().degree() as i64;
        let short = (d - d_j) * n + d_j - d * k;
        prop_assert_eq!(subset_margin(&f, &pick).unwrap(), short);
    }

    #[test]
    fn reported_minimum_matches_direct_subset_enumeration(f in arb_family()) {
        let n = f.len();
        prop_assume!(n <= 10);
        let c = classify(&f).unwrap();
        let equal_degree = f.equal_degree().is_some();
        let mut best: Option<i64> = None;
        for mask in 0u32..(1 << n) {
            let k = mask.count_ones() as usize;
            if k < 2 || k == n {
                continue;
            }
            let members: Vec<Monomial> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| f.monomials()[i].clone())
                .collect();
            // Equal-degree subsets with coprime support have margin
            // d·(n−k) > 0 and are excluded from the candidate space;
            // mixed-degree coprime subsets can bind and stay in.
            if equal_degree && Monomial::gcd_all(members.iter()).unwrap().is_constant() {
                continue;
            }
            let m = subset_margin(&f, &members).unwrap();
            best = Some(best.map_or(m, |b| b.min(m)));
        }
        prop_assert_eq!(c.min_margin(), best);
        let verdict = match best {
            Some(m) if m < 0 => Verdict::Unstable,
            Some(0) => Verdict::StrictlySemistable,
            _ => Verdict::Stable,
        };
        prop_assert_eq!(c.verdict, verdict);
    }

    #[test]
    fn saturated_subsets_never_beat_the_reported_minimum(f in arb_family()) {
        let c = classify(&f).unwrap();
        let min = c.min_margin();
        for g in gcd_closure(&f) {
            let saturated = f.multiples_of(&g);
            if saturated.len() >= 2 && saturated.len() < f.len() {
                let m = subset_margin(&f, &saturated).unwrap();
                prop_assert!(
                    Some(m) >= min,
                    "saturated subset of {:?} has margin {} below reported {:?}",
                    g, m, min
                );
            }
        }
    }

    #[test]
    fn family_slope_agrees_with_bundle_numerics_on_equal_degrees(
        f in arb_equal_degree_family()
    ) {
        prop_assume!(f.len() >= 3);
        let d = f.equal_degree().unwrap() as u32;
        let n_proj = f.vars() - 1;
        prop_assume!(n_proj >= 2);
        let nums = bundle_numerics(n_proj, d, f.len() as u64).unwrap();
        prop_assert_eq!(slope(&f).unwrap(), nums.slope);
    }
}
