//! Exponent-vector arithmetic: degrees, divisibility, gcds, enumeration,
//! gcd-closure, and the pure-power primarity test for monomial families.

use crate::combin::monomial_count;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Exponent of one variable. Degrees are supported up to 2^16, so u32 leaves
/// ample headroom; wide arithmetic (margins, binomials) happens elsewhere.
pub type Exponent = u32;

/// A monomial over variables X0..X_{vars-1}, stored as its exponent vector.
///
/// Serializes as a bare array of exponents, e.g. `[2, 1, 1]` for X0^2*X1*X2.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<Exponent>);

impl Monomial {
    pub fn new(exponents: Vec<Exponent>) -> Self {
        assert!(
            !exponents.is_empty(),
            "monomial needs at least one variable"
        );
        Monomial(exponents)
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// The constant monomial 1 (all exponents zero).
    pub fn one(vars: usize) -> Self {
        Monomial::new(vec![0; vars])
    }

    /// X_var^e.
    pub fn pure_power(vars: usize, var: usize, e: Exponent) -> Self {
        let mut v = vec![0; vars];
        v[var] = e;
        Monomial::new(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        assert_eq!(self.vars(), other.vars(), "variable count mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.vars(), other.vars(), "variable count mismatch");
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// gcd-fold over a non-empty collection; `None` when empty.
    pub fn gcd_all<'a, I>(monomials: I) -> Option<Monomial>
    where
        I: IntoIterator<Item = &'a Monomial>,
    {
        let mut it = monomials.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.vars(), other.vars(), "variable count mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// True iff the monomial is X_var^e for some e >= 1.
    pub fn is_pure_power_of(&self, var: usize) -> bool {
        self.0[var] > 0 && self.0.iter().enumerate().all(|(i, &e)| i == var || e == 0)
    }

    /// Relabels variables: entry i of the result is the exponent of X_{perm[i]}.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        assert_eq!(perm.len(), self.vars());
        Monomial(perm.iter().map(|&j| self.0[j]).collect())
    }

    /// Appends a fresh variable with exponent zero.
    pub fn extended(&self) -> Monomial {
        let mut v = self.0.clone();
        v.push(0);
        Monomial(v)
    }
}

/// Canonical order: lexicographically descending exponent vectors, so
/// X0^d sorts before mixed monomials, which sort before powers of later
/// variables. Deterministic output and witness tie-breaking rely on it.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "X{i}")?;
            } else {
                write!(f, "X{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All degree-d monomials in `vars` variables, in canonical order.
/// Exactly C(d + vars - 1, vars - 1) of them.
pub fn enumerate_monomials(vars: usize, d: Exponent) -> Vec<Monomial> {
    assert!(vars >= 1, "need at least one variable");
    let capacity = monomial_count(vars, u64::from(d)).to_usize().unwrap_or(0);
    let mut out = Vec::with_capacity(capacity);
    let mut buf = vec![0; vars];
    fill_monomials(&mut out, &mut buf, 0, d);
    out
}

fn fill_monomials(
    out: &mut Vec<Monomial>,
    buf: &mut Vec<Exponent>,
    idx: usize,
    remaining: Exponent,
) {
    if idx + 1 == buf.len() {
        buf[idx] = remaining;
        out.push(Monomial(buf.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        buf[idx] = e;
        fill_monomials(out, buf, idx + 1, remaining - e);
    }
    buf[idx] = 0;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("a family needs at least two variables, got {0}")]
    TooFewVars(usize),
    #[error("a family needs at least one monomial")]
    Empty,
    #[error("monomial {monomial} has {found} exponents, family declares {expected} variables")]
    VarMismatch {
        monomial: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate monomial {0}")]
    Duplicate(String),
}

/// A set of distinct monomials over a shared variable count, kept in
/// canonical order. Constructors emit equal-degree families; the checker
/// accepts mixed degrees too.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    vars: usize,
    monomials: Vec<Monomial>,
}

impl Family {
    /// Validates and canonically sorts. Rejects fewer than two variables,
    /// empty input, mismatched exponent lengths, and duplicates.
    pub fn new(vars: usize, monomials: Vec<Monomial>) -> Result<Self, FamilyError> {
        if vars < 2 {
            return Err(FamilyError::TooFewVars(vars));
        }
        if monomials.is_empty() {
            return Err(FamilyError::Empty);
        }
        for m in &monomials {
            if m.vars() != vars {
                return Err(FamilyError::VarMismatch {
                    monomial: m.to_string(),
                    expected: vars,
                    found: m.vars(),
                });
            }
        }
        let mut monomials = monomials;
        monomials.sort();
        for w in monomials.windows(2) {
            if w[0] == w[1] {
                return Err(FamilyError::Duplicate(w[0].to_string()));
            }
        }
        Ok(Family { vars, monomials })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.monomials.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.binary_search(m).is_ok()
    }

    pub fn sum_degrees(&self) -> u64 {
        self.monomials.iter().map(Monomial::degree).sum()
    }

    pub fn max_degree(&self) -> u64 {
        self.monomials
            .iter()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// `Some(d)` when every member has degree d.
    pub fn equal_degree(&self) -> Option<u64> {
        let d = self.monomials.first()?.degree();
        self.monomials.iter().all(|m| m.degree() == d).then_some(d)
    }

    /// The ideal generated by the family is primary to the irrelevant
    /// maximal ideal iff a pure power of every variable is present.
    pub fn is_m_primary(&self) -> bool {
        (0..self.vars).all(|v| self.monomials.iter().any(|m| m.is_pure_power_of(v)))
    }

    /// Members divisible by g, in canonical order.
    pub fn multiples_of(&self, g: &Monomial) -> Vec<Monomial> {
        self.monomials
            .iter()
            .filter(|m| g.divides(m))
            .cloned()
            .collect()
    }

    /// Applies a variable relabeling and re-sorts canonically.
    pub fn permuted(&self, perm: &[usize]) -> Family {
        let mut monomials: Vec<Monomial> =
            self.monomials.iter().map(|m| m.permuted(perm)).collect();
        monomials.sort();
        Family {
            vars: self.vars,
            monomials,
        }
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            vars: usize,
            monomials: Vec<Monomial>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Family::new(raw.vars, raw.monomials).map_err(serde::de::Error::custom)
    }
}

/// Positive-degree divisors that can serve as subset gcds: all pairwise gcds
/// of family members, closed under further pairwise gcds. Every element
/// divides at least two members, and the gcd of any >= 2 members of positive
/// degree appears in the closure. Returned in canonical order.
pub fn gcd_closure(f: &Family) -> Vec<Monomial> {
    let mut set: BTreeSet<Monomial> = BTreeSet::new();
    let ms = f.monomials();
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            let g = ms[i].gcd(&ms[j]);
            if !g.is_constant() {
                set.insert(g);
            }
        }
    }
    // Close under pairwise gcd; new elements keep participating.
    let mut queue: Vec<Monomial> = set.iter().cloned().collect();
    while let Some(g) = queue.pop() {
        let snapshot: Vec<Monomial> = set.iter().cloned().collect();
        for h in snapshot {
            let gh = g.gcd(&h);
            if !gh.is_constant() && set.insert(gh.clone()) {
                queue.push(gh);
            }
        }
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[Exponent]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn fam(vars: usize, es: &[&[Exponent]]) -> Family {
        Family::new(vars, es.iter().map(|e| m(e)).collect()).unwrap()
    }

    #[test]
    fn degree_basics() {
        assert_eq!(m(&[0, 0, 0]).degree(), 0);
        assert_eq!(m(&[2, 1, 1]).degree(), 4);
        assert_eq!(m(&[4, 0, 0]).degree(), 4);
    }

    #[test]
    fn divisibility() {
        assert!(m(&[1, 0, 0]).divides(&m(&[2, 1, 1])));
        assert!(!m(&[3, 0, 0]).divides(&m(&[2, 1, 1])));
        let x = m(&[2, 1, 1]);
        assert!(x.divides(&x));
    }

    #[test]
    fn gcd_values() {
        assert_eq!(m(&[4, 0, 0]).gcd(&m(&[2, 1, 1])), m(&[2, 0, 0]));
        assert_eq!(m(&[4, 0, 0]).gcd(&m(&[3, 1, 0])), m(&[3, 0, 0]));
        let x = m(&[2, 1, 1]);
        assert_eq!(x.gcd(&x), x);
        let fold = Monomial::gcd_all([m(&[4, 0, 0]), m(&[2, 1, 1]), m(&[2, 2, 0])].iter());
        assert_eq!(fold, Some(m(&[2, 0, 0])));
        assert_eq!(Monomial::gcd_all(Vec::new().iter()), None);
    }

    #[test]
    fn canonical_order_is_lex_descending() {
        let mut v = vec![m(&[0, 0, 4]), m(&[2, 1, 1]), m(&[4, 0, 0]), m(&[0, 4, 0])];
        v.sort();
        assert_eq!(
            v,
            vec![m(&[4, 0, 0]), m(&[2, 1, 1]), m(&[0, 4, 0]), m(&[0, 0, 4])]
        );
    }

    #[test]
    fn enumeration_counts_and_order() {
        let quads = enumerate_monomials(3, 2);
        assert_eq!(quads.len(), 6);
        assert_eq!(
            quads,
            vec![
                m(&[2, 0, 0]),
                m(&[1, 1, 0]),
                m(&[1, 0, 1]),
                m(&[0, 2, 0]),
                m(&[0, 1, 1]),
                m(&[0, 0, 2]),
            ]
        );
        assert_eq!(enumerate_monomials(3, 5).len(), 21);
        assert_eq!(enumerate_monomials(2, 0), vec![m(&[0, 0])]);
    }

    #[test]
    fn enumeration_matches_binomial_for_small_ranges() {
        use crate::combin::monomial_count;
        use num_traits::ToPrimitive;
        for vars in 1..=6 {
            for d in 0..=12 {
                let listed = enumerate_monomials(vars, d);
                let expected = monomial_count(vars, u64::from(d)).to_usize().unwrap();
                assert_eq!(listed.len(), expected, "vars={vars} d={d}");
                let mut sorted = listed.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted, listed, "canonical order, no duplicates");
            }
        }
    }

    #[test]
    fn m_primarity() {
        // All three squares present: primary.
        assert!(fam(
            3,
            &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0], &[1, 0, 1]]
        )
        .is_m_primary());
        // No pure power of X0: common zero at [1:0:0].
        assert!(!fam(3, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).is_m_primary());
        // All variables.
        assert!(fam(
            4,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]
        )
        .is_m_primary());
    }

    #[test]
    fn m_primary_needs_at_least_vars_members() {
        let f = fam(3, &[&[2, 0, 0], &[0, 2, 0]]);
        assert!(!f.is_m_primary());
    }

    #[test]
    fn closure_of_quartic_family() {
        // {X0^4, X1^4, X2^4, X0^2 X1 X2}: the only positive-degree gcds are
        // X0^2, X1, X2, and further gcds among those are constant.
        let f = fam(3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 1, 1]]);
        let c = gcd_closure(&f);
        assert_eq!(c, vec![m(&[2, 0, 0]), m(&[0, 1, 0]), m(&[0, 0, 1])]);
    }

    #[test]
    fn closure_of_coprime_pair_is_empty() {
        let f = fam(2, &[&[6, 0], &[0, 6]]);
        assert!(gcd_closure(&f).is_empty());
    }

    #[test]
    fn closure_catches_linear_divisor_with_three_multiples() {
        let f = fam(
            3,
            &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0], &[1, 0, 1]],
        );
        let c = gcd_closure(&f);
        let x0 = m(&[1, 0, 0]);
        assert!(c.contains(&x0));
        assert_eq!(f.multiples_of(&x0).len(), 3);
    }

    #[test]
    fn closure_contains_every_subset_gcd() {
        // Brute force over all subsets of a family with rich divisibility.
        let f = fam(
            3,
            &[
                &[6, 0, 0],
                &[4, 2, 0],
                &[2, 4, 0],
                &[0, 6, 0],
                &[0, 0, 6],
                &[2, 2, 2],
                &[4, 0, 2],
            ],
        );
        let c = gcd_closure(&f);
        let n = f.len();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let members: Vec<&Monomial> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &f.monomials()[i])
                .collect();
            let g = Monomial::gcd_all(members).unwrap();
            if !g.is_constant() {
                assert!(c.contains(&g), "missing {g}");
            }
        }
    }

    #[test]
    fn family_validation() {
        assert_eq!(
            Family::new(1, vec![m(&[1])]).unwrap_err(),
            FamilyError::TooFewVars(1)
        );
        assert_eq!(Family::new(2, vec![]).unwrap_err(), FamilyError::Empty);
        assert!(matches!(
            Family::new(3, vec![m(&[1, 0])]).unwrap_err(),
            FamilyError::VarMismatch { .. }
        ));
        assert!(matches!(
            Family::new(2, vec![m(&[1, 0]), m(&[1, 0])]).unwrap_err(),
            FamilyError::Duplicate(_)
        ));
    }

    #[test]
    fn permutation_commutes_with_structure() {
        let f = fam(
            3,
            &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0], &[1, 0, 1]],
        );
        let perm = [2, 0, 1];
        let g = f.permuted(&perm);
        assert_eq!(g.len(), f.len());
        assert_eq!(g.sum_degrees(), f.sum_degrees());
        assert_eq!(g.is_m_primary(), f.is_m_primary());
        let c: BTreeSet<Monomial> = gcd_closure(&f)
            .into_iter()
            .map(|x| x.permuted(&perm))
            .collect();
        let c2: BTreeSet<Monomial> = gcd_closure(&g).into_iter().collect();
        assert_eq!(c, c2);
    }

    #[test]
    fn display_rendering() {
        assert_eq!(m(&[2, 1, 0]).to_string(), "X0^2*X1");
        assert_eq!(m(&[0, 0, 0]).to_string(), "1");
        assert_eq!(m(&[0, 0, 3]).to_string(), "X2^3");
    }

    #[test]
    fn serde_round_trip() {
        let f = fam(3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 1, 1]]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"vars":3,"monomials":[[4,0,0],[2,1,1],[0,4,0],[0,0,4]]}"#
        );
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
