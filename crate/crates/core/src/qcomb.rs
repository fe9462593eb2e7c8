//! q-analogue counting: Gaussian binomials, the Möbius function of the
//! subspace lattice, rank balls and the pair counts `ν_q`, `θ_q`.
//!
//! Everything is exact. `q` is a machine integer; results are big integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

pub fn q_pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// `[a b]_q`, the number of `b`-dimensional subspaces of `F_q^a`.
///
/// Zero when `a < 0`, `b < 0` or `b > a`. The product formula's numerator and
/// denominator are assembled in full and divided once.
pub fn q_binomial(a: i64, b: i64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if a < 0 || b < 0 || b > a {
        return Ok(BigUint::zero());
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..b {
        num *= q_pow(q, a) - q_pow(q, i);
        den *= q_pow(q, b) - q_pow(q, i);
    }
    Ok(num / den)
}

/// `[a b]_q [b c]_q = [a c]_q [a-c a-b]_q`.
pub fn q_binomial_identity_holds(a: i64, b: i64, c: i64, q: u64) -> Result<bool> {
    let lhs = q_binomial(a, b, q)? * q_binomial(b, c, q)?;
    let rhs = q_binomial(a, c, q)? * q_binomial(a - c, a - b, q)?;
    Ok(lhs == rhs)
}

/// `μ(A, B) = (-1)^{b-a} q^{C(b-a, 2)}` for subspaces `A ≤ B` of dimensions
/// `a ≤ b`.
pub fn moebius_coefficient(a: usize, b: usize, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if a > b {
        return Err(Error::InvalidParameters(format!(
            "Möbius coefficient needs a <= b, got a = {a}, b = {b}"
        )));
    }
    let d = (b - a) as u64;
    let mag = BigInt::from(q_pow(q, choose2(d)));
    Ok(if d.is_multiple_of(2) { mag } else { -mag })
}

/// Number of `n x m` matrices over `F_q` of rank at most `r`.
pub fn ball_size(n: usize, m: usize, r: usize, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if r > n {
        return Err(Error::InvalidParameters(format!("radius {r} exceeds n = {n}")));
    }
    let qm = q_pow(q, m as u64);
    let mut total = BigUint::zero();
    for i in 0..=r {
        let mut prod = BigUint::one();
        for j in 0..i {
            let qj = q_pow(q, j as u64);
            if qj > qm {
                prod = BigUint::zero();
                break;
            }
            prod *= &qm - qj;
        }
        total += q_binomial(n as i64, i as i64, q)? * prod;
    }
    Ok(total)
}

/// Number of `k`-dimensional subspaces of `F_q^{mn}` meeting both of two
/// `(mn-k)`-dimensional subspaces nontrivially, when those meet in dimension
/// `ell`:
///
/// `[mn k]_q - 2 q^{k(mn-k)} + q^{(2k-mn+ell)(mn-k)} Π_{i=ell}^{mn-k-1} (q^{mn-k} - q^i)`.
///
/// Defined only for `mn - 2k <= ell <= mn - k`.
pub fn nu(mn: usize, k: usize, ell: usize, q: u64) -> Result<BigUint> {
    check_q(q)?;
    let (mn_i, k_i, ell_i) = (mn as i64, k as i64, ell as i64);
    if k > mn || ell_i < mn_i - 2 * k_i || ell_i > mn_i - k_i {
        return Err(Error::FormulaDomain(format!(
            "nu(mn={mn}, k={k}, ell={ell}) needs mn-2k <= ell <= mn-k"
        )));
    }
    let c = (mn - k) as u64;
    let mut prod = BigUint::one();
    for i in ell as u64..c {
        prod *= q_pow(q, c) - q_pow(q, i);
    }
    let e = (2 * k + ell - mn) as u64 * c;
    let value = BigInt::from(q_binomial(mn_i, k_i, q)?) - BigInt::from(2u32) * BigInt::from(q_pow(q, k as u64 * c))
        + BigInt::from(q_pow(q, e) * prod);
    if value.is_negative() {
        return Err(Error::Invariant(format!("nu({mn}, {k}, {ell}) evaluated negative")));
    }
    Ok(value.magnitude().clone())
}

/// Number of ordered pairs `(U, U')` of `u`-dimensional subspaces of `F_q^n`
/// with `dim(U ∩ U') = i`.
pub fn theta(n: usize, u: usize, i: usize, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if u > n || i > u || (i as i64) < 2 * u as i64 - n as i64 {
        return Err(Error::InvalidParameters(format!(
            "theta(n={n}, u={u}, i={i}) needs u <= n and 2u-n <= i <= u"
        )));
    }
    let (n, u, i) = (n as i64, u as i64, i as i64);
    let base = BigInt::from(q_binomial(n, i, q)?);
    let mut total = BigInt::zero();
    for j in i..=u {
        let t = BigInt::from(q_pow(q, choose2((j - i) as u64)))
            * BigInt::from(q_binomial(n - i, j - i, q)?)
            * BigInt::from(num_traits::pow(q_binomial(n - j, u - j, q)?, 2));
        if (j - i) % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    let value = base * total;
    if value.is_negative() {
        return Err(Error::Invariant("theta evaluated negative".into()));
    }
    Ok(value.magnitude().clone())
}
