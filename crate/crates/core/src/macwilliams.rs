//! Closed-form identities on rank distributions.
//!
//! These work on distributions only, never on codes, so they can be checked
//! independently of codeword enumeration. Divisions are exact; a remainder
//! means the input was not the distribution of a code and is reported as an
//! error.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::code::RankDistribution;
use crate::error::{Error, Result};
use crate::qcomb::{q_binomial, q_pow};

fn qb(a: usize, b: usize, q: u64) -> BigInt {
    BigInt::from(q_binomial(a as i64, b as i64, q).expect("q checked by caller"))
}

fn qb_signed(a: i64, b: i64, q: u64) -> BigInt {
    BigInt::from(q_binomial(a, b, q).expect("q checked by caller"))
}

fn choose2(x: usize) -> u64 {
    (x * x.saturating_sub(1) / 2) as u64
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

fn check_len(w: &RankDistribution, n: usize) -> Result<()> {
    if w.counts().len() != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "distribution has {} entries, expected n + 1 = {}",
            w.counts().len(),
            n + 1
        )));
    }
    Ok(())
}

/// `log_q(size)` if `size` is a power of `q`.
pub fn code_dimension(size: &BigUint, q: u64) -> Result<usize> {
    check_q(q)?;
    let mut x = size.clone();
    let mut k = 0;
    let qb = BigUint::from(q);
    if x.is_zero() {
        return Err(Error::NotACodeSize(size.to_string()));
    }
    while x > BigUint::from(1u32) {
        let (d, r) = x.div_rem(&qb);
        if !r.is_zero() {
            return Err(Error::NotACodeSize(size.to_string()));
        }
        x = d;
        k += 1;
    }
    Ok(k)
}

fn to_natural(x: BigInt, what: &str) -> Result<BigUint> {
    if x.is_negative() {
        return Err(Error::NonIntegral(format!("{what} evaluated to the negative value {x}")));
    }
    Ok(x.magnitude().clone())
}

fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    let (quot, rem) = num.div_rem(den);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!("{what}: {num} / {den}")));
    }
    Ok(quot)
}

/// The signed summands `(-1)^{i-u} q^{mu + C(i-u,2)} [n-j u]_q [n-u i-u]_q`,
/// `u = 0..=i`, whose sum is the coefficient of `W_j(C)` in `|C| W_i(C⊥)`.
pub fn transform_kernel_terms(n: usize, m: usize, q: u64, i: usize, j: usize) -> Vec<BigInt> {
    (0..=i)
        .map(|u| {
            let t = BigInt::from(q_pow(q, (m * u) as u64 + choose2(i - u))) * qb(n - j, u, q) * qb(n - u, i - u, q);
            if (i - u).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .collect()
}

/// `W(C⊥)` from `W(C)`:
///
/// `W_i(C⊥) = (1/|C|) Σ_j W_j(C) Σ_{u=0}^{i} (-1)^{i-u} q^{mu + C(i-u,2)} [n-j u]_q [n-u i-u]_q`.
pub fn transform(w: &RankDistribution, n: usize, m: usize, q: u64) -> Result<RankDistribution> {
    check_len(w, n)?;
    let size = w.total();
    code_dimension(&size, q)?;
    let size = BigInt::from(size);
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut acc = BigInt::zero();
        for (j, wj) in w.counts().iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            let inner: BigInt = transform_kernel_terms(n, m, q, i, j).into_iter().sum();
            acc += BigInt::from(wj.clone()) * inner;
        }
        out.push(to_natural(exact_div(&acc, &size, "MacWilliams transform")?, "MacWilliams transform")?);
    }
    Ok(RankDistribution::new(out))
}

/// Whether `Σ_{j=0}^{n-s} W_j [n-j s]_q = (|C| / q^{ms}) Σ_{i=0}^{s} W⊥_i [n-i s-i]_q`.
pub fn binomial_moment_check(w: &RankDistribution, w_dual: &RankDistribution, n: usize, m: usize, q: u64, s: usize) -> Result<bool> {
    check_q(q)?;
    check_len(w, n)?;
    check_len(w_dual, n)?;
    if s > n {
        return Err(Error::InvalidParameters(format!("moment index {s} exceeds n = {n}")));
    }
    let lhs: BigInt = (0..=n - s).map(|j| BigInt::from(w.get(j).clone()) * qb(n - j, s, q)).sum();
    let rhs: BigInt = (0..=s).map(|i| BigInt::from(w_dual.get(i).clone()) * qb(n - i, s - i, q)).sum();
    Ok(lhs * BigInt::from(q_pow(q, (m * s) as u64)) == rhs * BigInt::from(w.total()))
}

/// `W(C⊥)` by solving the binomial-moment equations for `s = 0, ..., n` in
/// turn; the coefficient of `W⊥_s` in equation `s` is 1.
pub fn solve_dual_distribution_by_moments(w: &RankDistribution, n: usize, m: usize, q: u64) -> Result<RankDistribution> {
    check_len(w, n)?;
    let size = w.total();
    code_dimension(&size, q)?;
    let size = BigInt::from(size);
    let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let lhs: BigInt = (0..=n - s).map(|j| BigInt::from(w.get(j).clone()) * qb(n - j, s, q)).sum();
        let scaled = exact_div(&(lhs * BigInt::from(q_pow(q, (m * s) as u64))), &size, "binomial moment")?;
        let known: BigInt = out.iter().enumerate().map(|(i, wi)| wi * qb(n - i, s - i, q)).sum();
        out.push(scaled - known);
    }
    Ok(RankDistribution::new(
        out.into_iter().map(|x| to_natural(x, "binomial moment solve")).collect::<Result<_>>()?,
    ))
}

/// The rank distribution shared by all MRD codes with parameters `(n, m, d)`.
pub fn mrd_distribution(n: usize, m: usize, d: usize, q: u64) -> Result<RankDistribution> {
    check_q(q)?;
    if !(1 <= d && d <= n && n <= m) {
        return Err(Error::InvalidParameters(format!("need 1 <= d <= n <= m, got n = {n}, m = {m}, d = {d}")));
    }
    let mut out = vec![BigUint::zero(); n + 1];
    out[0] = BigUint::from(1u32);
    for (i, slot) in out.iter_mut().enumerate().skip(d) {
        let mut acc = BigInt::zero();
        for u in 0..=i {
            let mut e = choose2(i - u);
            if u >= d {
                e += (m * (u - d + 1)) as u64;
            }
            let t = BigInt::from(q_pow(q, e)) * qb(n, i, q) * qb(i, u, q);
            if (i - u) % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        *slot = to_natural(acc, "MRD distribution")?;
    }
    Ok(RankDistribution::new(out))
}

/// `W_i(C + M)` for `n - d⊥ + 1 <= i <= n` from the prefix
/// `W_0(C + M), ..., W_{n-d⊥}(C + M)`, where `d⊥ = d(C⊥)`:
///
/// `W_i = Σ_{k=0}^{n-d⊥} μ_{k,i} [n-k i-k]_q Σ_{j<=k} W_j [n-j k-j]_q
///      + Σ_{k=n-d⊥+1}^{i} μ_{k,i} [n-k i-k]_q [n k]_q |C| / q^{m(n-k)}`
///
/// with `μ_{k,i} = (-1)^{i-k} q^{C(i-k,2)}`. Both sums are Möbius inversions
/// over the subspace lattice of the counts `|(C+M)(U)|`, which equal
/// `|C| / q^{m(n-dim U)}` once `n - dim U < d⊥`.
pub fn translate_tail(prefix: &[BigUint], n: usize, m: usize, q: u64, code_size: &BigUint, d_dual: usize, i: usize) -> Result<BigUint> {
    check_q(q)?;
    if d_dual < 1 || d_dual > n + 1 {
        return Err(Error::InvalidParameters(format!("dual distance {d_dual} outside 1..={}", n + 1)));
    }
    let known = n + 1 - d_dual;
    if i < known || i > n {
        return Err(Error::InvalidParameters(format!("index {i} outside {known}..={n}")));
    }
    if prefix.len() < known {
        return Err(Error::InvalidParameters(format!(
            "need the first {known} entries of the translate distribution, got {}",
            prefix.len()
        )));
    }
    let size = BigInt::from(code_size.clone());
    let (n_i, i_i) = (n as i64, i as i64);
    let mut acc = BigInt::zero();
    for k in 0..=i {
        let inner = if k < known {
            (0..=k).map(|j| BigInt::from(prefix[j].clone()) * qb(n - j, k - j, q)).sum::<BigInt>()
        } else {
            let den = BigInt::from(q_pow(q, (m * (n - k)) as u64));
            qb(n, k, q) * exact_div(&size, &den, "translate tail")?
        };
        let k_i = k as i64;
        let t = BigInt::from(q_pow(q, choose2(i - k))) * qb_signed(n_i - k_i, i_i - k_i, q) * inner;
        if (i - k).is_multiple_of(2) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    to_natural(acc, "translate tail")
}

/// The full distribution of `C + M` from its prefix, extended with
/// [`translate_tail`].
pub fn translate_distribution(prefix: &[BigUint], n: usize, m: usize, q: u64, code_size: &BigUint, d_dual: usize) -> Result<RankDistribution> {
    let known = (n + 1).checked_sub(d_dual).ok_or_else(|| Error::InvalidParameters(format!("dual distance {d_dual} exceeds n + 1")))?;
    let mut out: Vec<BigUint> = prefix.iter().take(known).cloned().collect();
    for i in known..=n {
        out.push(translate_tail(prefix, n, m, q, code_size, d_dual, i)?);
    }
    Ok(RankDistribution::new(out))
}
