//! Dense polynomials over a prime field `F_p`, coefficients low-to-high.
//!
//! Only what field construction needs: products, remainders, gcd and the
//! distinct-degree irreducibility test.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - factor * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// Distinct-degree test: a degree-`n` polynomial is irreducible iff it shares
/// no factor with `x^(p^i) - x` for `1 <= i <= n/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = pow_rem(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute force: a polynomial of degree n over F_p is reducible iff it is a
    // product of two monic polynomials of positive degree.
    fn reducible_by_products(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        let monic = |deg: usize, idx: u64| {
            let mut c = Vec::with_capacity(deg + 1);
            let mut x = idx;
            for _ in 0..deg {
                c.push(x % p);
                x /= p;
            }
            c.push(1);
            c
        };
        for da in 1..n {
            let db = n - da;
            for ia in 0..p.pow(da as u32) {
                for ib in 0..p.pow(db as u32) {
                    if mul(&monic(da, ia), &monic(db, ib), p) == f {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn irreducibility_matches_factor_search() {
        for (p, n) in [(2u64, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
            for idx in 0..p.pow(n as u32) {
                let mut f = Vec::new();
                let mut x = idx;
                for _ in 0..n {
                    f.push(x % p);
                    x /= p;
                }
                f.push(1);
                assert_eq!(
                    is_irreducible(&f, p),
                    !reducible_by_products(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }
}
