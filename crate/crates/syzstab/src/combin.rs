//! Exact binomial coefficients. Counts like C(d+N, N) overflow 64 bits well
//! inside the supported parameter range, so everything routes through BigInt.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// C(n, k) as an exact big integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(n, k) as usize, when it fits.
pub fn binomial_usize(n: u64, k: u64) -> Option<usize> {
    binomial(n, k).to_usize()
}

/// Number of degree-d monomials in `vars` variables: C(d + vars - 1, vars - 1).
pub fn monomial_count(vars: usize, d: u64) -> BigInt {
    binomial(d + vars as u64 - 1, vars as u64 - 1)
}
