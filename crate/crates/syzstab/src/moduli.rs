//! Exact numerical invariants: rank, Chern classes, and slope of the syzygy
//! bundle of a family, plus the dimension and cohomology bookkeeping for the
//! stratum such bundles sweep out in their moduli space.
//!
//! All arithmetic is exact (big integers and rationals); big values are
//! serialized as decimal strings.

use crate::combin::binomial;
use crate::monomial::Family;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuliError {
    #[error("need N >= 2, d >= 1 and N+1 <= n <= C(d+N,N); got N={n_proj}, d={d}, n={n}")]
    OutOfRange { n_proj: usize, d: u32, n: u64 },
    #[error(
        "the triple (2,2,5) is exceptional: its bundle is strictly semistable and \
         the stratum dimension formulas do not apply (rank/chern/slope remain available)"
    )]
    ExceptionalTriple,
    #[error("need at least two monomials, got {0}")]
    FamilyTooSmall(usize),
    #[error("family is not m-primary: some variable divides every member")]
    NotMPrimary,
}

/// Rank, Chern classes c_1..c_N, and slope: defined for every admissible
/// triple including the exceptional (2,2,5).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleNumerics {
    pub rank: u64,
    #[serde(serialize_with = "ser_bigint_seq")]
    pub chern: Vec<BigInt>,
    #[serde(serialize_with = "ser_ratio")]
    pub slope: BigRational,
}

/// Full invariant table for a stable triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub rank: u64,
    #[serde(serialize_with = "ser_bigint_seq")]
    pub chern: Vec<BigInt>,
    #[serde(serialize_with = "ser_ratio")]
    pub slope: BigRational,
    #[serde(serialize_with = "ser_bigint")]
    pub dim_stratum: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub dim_component: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub codim: BigInt,
    #[serde(rename = "h_E", serialize_with = "ser_bigint_seq")]
    pub h_e: Vec<BigInt>,
    #[serde(rename = "h_Ed", serialize_with = "ser_bigint_seq")]
    pub h_ed: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigint")]
    pub ext1: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub ext2: BigInt,
}

pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn ser_bigint_seq<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub(crate) fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn check_range(n_proj: usize, d: u32, n: u64) -> Result<(), ModuliError> {
    let ok = n_proj >= 2
        && d >= 1
        && n > n_proj as u64
        && BigInt::from(n) <= binomial(d as u64 + n_proj as u64, n_proj as u64);
    if ok {
        Ok(())
    } else {
        Err(ModuliError::OutOfRange { n_proj, d, n })
    }
}

/// Rank n-1, Chern classes c_i = C(n,i)·(-d)^i for i = 1..N (the Chern
/// polynomial lives in Z[t]/(t^{N+1}), so higher classes are truncated),
/// and slope c_1/(n-1).
pub fn bundle_numerics(n_proj: usize, d: u32, n: u64) -> Result<BundleNumerics, ModuliError> {
    check_range(n_proj, d, n)?;
    let rank = n - 1;
    let minus_d = BigInt::from(-i64::from(d));
    let chern: Vec<BigInt> = (1..=n_proj)
        .map(|i| binomial(n, i as u64) * minus_d.pow(i as u32))
        .collect();
    let slope = BigRational::new(chern[0].clone(), BigInt::from(rank));
    Ok(BundleNumerics { rank, chern, slope })
}

/// The full table: stratum dimension n·C(d+N,N) - n², component dimension
/// (stratum plus the codimension n·C(d-1,2) for N = 2, equal for N >= 3),
/// the h^0..h^3 rows for E and E(d), and the deformation numbers
/// ext1 = dim_component, ext2 = n·C(d-1,3) for N = 3 (0 otherwise).
///
/// Refuses the exceptional triple (2,2,5), whose bundle is strictly
/// semistable: use [`bundle_numerics`] for its rank/chern/slope.
pub fn moduli_report(n_proj: usize, d: u32, n: u64) -> Result<ModuliReport, ModuliError> {
    let nums = bundle_numerics(n_proj, d, n)?;
    if (n_proj, d, n) == (2, 2, 5) {
        return Err(ModuliError::ExceptionalTriple);
    }
    let nb = BigInt::from(n);
    let du = d as u64;
    let nn = n_proj as u64;
    let dim_stratum = nb.clone() * binomial(du + nn, nn) - nb.clone() * nb.clone();
    let codim = if n_proj == 2 {
        nb.clone() * binomial(du - 1, 2)
    } else {
        BigInt::from(0)
    };
    let dim_component = dim_stratum.clone() + codim.clone();
    let ext1 = dim_component.clone();
    let ext2 = if n_proj == 3 {
        nb.clone() * binomial(du - 1, 3)
    } else {
        BigInt::from(0)
    };
    let h_e = vec![
        BigInt::from(0),
        BigInt::from(1),
        codim.clone(),
        ext2.clone(),
    ];
    let h1_ed = binomial(nn + du, du) - nb;
    debug_assert!(h1_ed >= BigInt::from(0));
    let h_ed = vec![BigInt::from(0), h1_ed, BigInt::from(0), BigInt::from(0)];
    Ok(ModuliReport {
        rank: nums.rank,
        chern: nums.chern,
        slope: nums.slope,
        dim_stratum,
        dim_component,
        codim,
        h_e,
        h_ed,
        ext1,
        ext2,
    })
}

/// Slope of the syzygy bundle of an arbitrary m-primary family:
/// (-sum of degrees)/(n-1), in lowest terms. Depends only on the degree
/// multiset, not on which monomials realize it.
pub fn slope(f: &Family) -> Result<BigRational, ModuliError> {
    if f.len() < 2 {
        return Err(ModuliError::FamilyTooSmall(f.len()));
    }
    if !f.is_m_primary() {
        return Err(ModuliError::NotMPrimary);
    }
    Ok(BigRational::new(
        -BigInt::from(f.sum_degrees()),
        BigInt::from(f.len() as u64 - 1),
    ))
}
