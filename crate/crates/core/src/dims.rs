//! Exact-rational leading-term formulas: the Siegel level-aspect constant,
//! the G2 weight-aspect polynomial, and the Bernoulli numbers they consume.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const MAX_BERNOULLI: u32 = 100;

fn binomial(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// `B_j` by the convolution recurrence
/// `Σ_{i=0}^{m} C(m+1, i) B_i = 0`; convention `B_1 = −1/2`.
pub fn bernoulli(j: u32) -> Result<BigRational> {
    if j > MAX_BERNOULLI {
        return Err(Error::InvalidParameter(format!(
            "Bernoulli numbers supported for j <= {MAX_BERNOULLI}, got {j}"
        )));
    }
    let mut b: Vec<BigRational> = Vec::with_capacity(j as usize + 1);
    b.push(BigRational::one());
    for m in 1..=j {
        let mut acc = BigRational::zero();
        for (i, bi) in b.iter().enumerate() {
            acc += BigRational::from(binomial(m + 1, i as u32)) * bi;
        }
        b.push(-acc / BigRational::from(BigInt::from(m + 1)));
    }
    Ok(b.pop().unwrap())
}

fn factorial(m: u32) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

/// Distinct prime factors of `N` by trial division (`N ≤ 10⁹` scale).
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Genus-`n` Bernoulli constant
/// `Π_{j=1}^n (j−1)!|B_{2j}|/((2j−1)! j) · 2^{−3n}`; for `n = 2` this is
/// `1/138240`.
pub fn siegel_constant(n: u32) -> Result<BigRational> {
    let mut out = BigRational::one();
    for j in 1..=n {
        let b2j = bernoulli(2 * j)?.abs();
        out *= BigRational::from(factorial(j - 1)) * b2j
            / BigRational::from(factorial(2 * j - 1) * BigInt::from(j));
    }
    out /= BigRational::from(BigInt::from(2).pow(3 * n));
    Ok(out)
}

/// Leading term of the Siegel level aspect:
/// `N^{n(2n+1)} Π_{p|N} Π_{j=1}^n (1−p^{−2j}) · Π_{1≤t≤u≤n}(2k−t−u) ·
/// siegel_constant(n)`.
pub fn siegel_leading_term(n: u32, k: u32, level: u64) -> Result<BigRational> {
    if k <= n + 1 {
        return Err(Error::InvalidParameter(format!(
            "siegel_leading_term needs weight k > n+1, got n={n}, k={k}"
        )));
    }
    if level <= 2 {
        return Err(Error::InvalidParameter(format!(
            "siegel_leading_term needs level N > 2, got {level}"
        )));
    }
    Ok(siegel_level_part(n, level) * siegel_weight_part(n, k) * siegel_constant(n)?)
}

/// `N^{n(2n+1)} Π_{p|N} Π_{j=1}^n (1−p^{−2j})` — independent of `k`.
pub fn siegel_level_part(n: u32, level: u64) -> BigRational {
    let mut out = BigRational::from(BigInt::from(level).pow(n * (2 * n + 1)));
    for p in prime_factors(level) {
        for j in 1..=n {
            let pw = BigInt::from(p).pow(2 * j);
            out *= BigRational::one() - Ratio::new(BigInt::one(), pw);
        }
    }
    out
}

/// `Π_{1≤t≤u≤n} (2k−t−u)` — independent of `N`.
pub fn siegel_weight_part(n: u32, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for t in 1..=n {
        for u in t..=n {
            out *= BigRational::from(BigInt::from(2 * k as i64 - t as i64 - u as i64));
        }
    }
    out
}

/// G2 weight-aspect leading term:
/// `(1/(2⁹·3⁴·5·7)) (k−1)k(2k−1)(3k−2)(3k−1) · index_ratio`.
pub fn g2_leading_term(k: u32, index_ratio: &BigRational) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::InvalidParameter(
            "g2_leading_term needs k >= 1".into(),
        ));
    }
    if !index_ratio.is_positive() {
        return Err(Error::InvalidParameter(
            "g2_leading_term needs a positive index ratio".into(),
        ));
    }
    let k = k as i64;
    let poly = BigInt::from(k - 1)
        * BigInt::from(k)
        * BigInt::from(2 * k - 1)
        * BigInt::from(3 * k - 2)
        * BigInt::from(3 * k - 1);
    let denom = BigInt::from(512i64 * 81 * 5 * 7); // 2⁹·3⁴·5·7 = 1451520
    Ok(Ratio::new(poly, denom) * index_ratio)
}
