//! Density of MRD codes among all codes of the same dimension.
//!
//! `δ_q(n×m, d)` is the fraction of `k = m(n-d+1)`-dimensional subspaces of
//! `F_q^{n×m}` with minimum distance exactly `d`. Small instances are counted
//! outright; otherwise the two closed-form upper bounds and the asymptotic
//! limits are evaluated in exact rational arithmetic. Infinite products come
//! back as [`Enclosure`]s with certified tails.

use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::code::{column_support_space, Budget, RankMetricCode};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{enumerate_subspaces, pivot_patterns, rank_of, Subspace, SubspacesWithPivots};
use crate::qcomb::{ball_size, nu, q_binomial, q_pow, theta};

/// Default ceiling on the number of subspaces a census may visit.
pub const CENSUS_BUDGET: u64 = 1_000_000;

/// Enclosure endpoints are rounded outward to multiples of `2^-PRECISION_BITS`.
const PRECISION_BITS: usize = 256;

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn check_params(q: u64, n: usize, m: usize, d: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be at least 2, got {q}")));
    }
    if !(2 <= n && n <= m && 1 <= d && d <= n) {
        return Err(Error::InvalidParameters(format!("need 2 <= n <= m and 1 <= d <= n, got n = {n}, m = {m}, d = {d}")));
    }
    Ok(())
}

/// `k = m(n - d + 1)`, the dimension of an MRD code.
pub fn mrd_dimension(n: usize, m: usize, d: usize) -> usize {
    m * (n + 1 - d)
}

/// Counts from one exhaustive pass over all `k`-dimensional codes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub total: u64,
    /// Codes with `d(C) = d`, by enumerating codewords.
    pub exact_distance: u64,
    /// Codes containing no nonzero matrix of rank at most `d - 1`.
    pub ball_avoiding: u64,
    /// Codes containing no nonzero matrix of rank at most `d`.
    pub deeper: u64,
    /// Common complements of all `F_q^{n×m}(U)`, `dim U = d - 1`.
    pub common_complements: u64,
}

impl Add for Census {
    type Output = Census;

    fn add(self, o: Census) -> Census {
        Census {
            total: self.total + o.total,
            exact_distance: self.exact_distance + o.exact_distance,
            ball_avoiding: self.ball_avoiding + o.ball_avoiding,
            deeper: self.deeper + o.deeper,
            common_complements: self.common_complements + o.common_complements,
        }
    }
}

impl Census {
    pub fn density(&self) -> BigRational {
        ratio(self.exact_distance, self.total)
    }

    /// The three counts must agree: `exact = ball - deeper`, `ball = cc`, and
    /// no code of MRD dimension can have distance above `d`.
    pub fn check_invariants(&self) -> Result<()> {
        if self.ball_avoiding != self.common_complements {
            return Err(Error::Invariant(format!(
                "ball-avoidance count {} differs from common-complement count {}",
                self.ball_avoiding, self.common_complements
            )));
        }
        if self.deeper != 0 {
            return Err(Error::Invariant(format!("{} codes of MRD dimension exceed distance d", self.deeper)));
        }
        if self.exact_distance != self.ball_avoiding - self.deeper {
            return Err(Error::Invariant(format!(
                "exact-distance count {} differs from {} - {}",
                self.exact_distance, self.ball_avoiding, self.deeper
            )));
        }
        Ok(())
    }
}

struct CensusContext {
    field: Field,
    n: usize,
    m: usize,
    d: usize,
    // nonzero matrices of rank <= d (up to scalars), sorted by rank
    ball: Vec<(usize, Vec<Elem>)>,
    anticodes: Vec<Subspace>,
}

impl CensusContext {
    fn new(field: &Field, n: usize, m: usize, d: usize) -> Self {
        let mn = n * m;
        let q = field.order();
        // with d = n every nonzero matrix lies in the radius-d ball, so only
        // radius d-1 is needed
        let radius = if d < n { d } else { d - 1 };
        let mut ball = Vec::new();
        let mut v = vec![0u32; mn];
        // odometer with the first coordinate fastest
        while let Some(i) = v.iter().position(|&x| x + 1 < q) {
            v[i] += 1;
            v[..i].fill(0);
            let lead = v.iter().rposition(|&x| x != 0).unwrap();
            if v[lead] != 1 {
                continue;
            }
            let elems: Vec<Elem> = v.iter().map(|&x| field.elem(x)).collect();
            let r = rank_of(field, n, m, &elems);
            if r <= radius {
                ball.push((r, elems));
            }
        }
        ball.sort_by_key(|(r, _)| *r);
        let anticodes = enumerate_subspaces(field, n, d - 1).map(|u| column_support_space(&u, m)).collect();
        CensusContext {
            field: field.clone(),
            n,
            m,
            d,
            ball,
            anticodes,
        }
    }

    fn classify(&self, space: Subspace) -> Result<Census> {
        let mn = self.n * self.m;
        let smallest = self.ball.iter().find(|(_, v)| space.contains(v)).map(|(r, _)| *r);
        let common_complement = self.anticodes.iter().all(|a| {
            let rows: Vec<Elem> = space.basis().iter().chain(a.basis()).flatten().copied().collect();
            rank_of(&self.field, space.dim() + a.dim(), mn, &rows) == mn
        });
        let code = RankMetricCode::from_subspace(self.n, self.m, space)?;
        let d = code.minimum_distance(Budget::new(u64::MAX))?;
        Ok(Census {
            total: 1,
            exact_distance: u64::from(d == self.d),
            ball_avoiding: u64::from(smallest.is_none_or(|r| r >= self.d)),
            deeper: u64::from(self.d < self.n && smallest.is_none()),
            common_complements: u64::from(common_complement),
        })
    }
}

/// Visits every `k`-dimensional subspace of `F_q^{n×m}`, split across
/// workers by RREF pivot pattern. Fails with "use bounds" past `budget`.
pub fn census(field: &Field, n: usize, m: usize, d: usize, budget: u64) -> Result<Census> {
    let q = u64::from(field.order());
    check_params(q, n, m, d)?;
    let mn = n * m;
    let k = mrd_dimension(n, m, d);
    let total = q_binomial(mn as i64, k as i64, q)?;
    if total > BigUint::from(budget) {
        return Err(Error::CensusTooLarge {
            needed: total.to_string(),
            budget,
        });
    }
    if d == 1 {
        // the ambient space alone, which meets every rank-1 matrix
        return Ok(Census {
            total: 1,
            exact_distance: 1,
            ball_avoiding: 1,
            deeper: 0,
            common_complements: 1,
        });
    }
    let ctx = CensusContext::new(field, n, m, d);
    pivot_patterns(mn, k)
        .into_par_iter()
        .map(|pivots| {
            SubspacesWithPivots::new(field, mn, pivots).try_fold(Census::default(), |acc, s| Ok(acc + ctx.classify(s)?))
        })
        .try_reduce(Census::default, |a, b| Ok(a + b))
}

/// `δ_q(n×m, d)` by census over the standard field of order `q`.
pub fn density_exact(q: u64, n: usize, m: usize, d: usize) -> Result<BigRational> {
    density_exact_with_budget(q, n, m, d, CENSUS_BUDGET)
}

pub fn density_exact_with_budget(q: u64, n: usize, m: usize, d: usize, budget: u64) -> Result<BigRational> {
    let c = census(&Field::with_order(q)?, n, m, d, budget)?;
    c.check_invariants()?;
    Ok(c.density())
}

/// Upper bound on `δ_q(n×m, d)` from MRD codes as common complements:
///
/// `1 - ν(mn,k,m(d-1))² [n d-1]² / ([mn k] Σ_i ν(mn,k,mi) θ(n,d-1,i))`.
///
/// Pairs with `i < 2(d-1) - n` do not exist and are left out of the sum.
/// For `d = 1` every term vanishes and the bound is 1.
pub fn density_bound_cc(q: u64, n: usize, m: usize, d: usize) -> Result<BigRational> {
    check_params(q, n, m, d)?;
    if d == 1 {
        return Ok(BigRational::one());
    }
    let mn = n * m;
    let k = mrd_dimension(n, m, d);
    let top = nu(mn, k, m * (d - 1), q)?;
    let g = q_binomial(n as i64, d as i64 - 1, q)?;
    let mut sum = BigUint::zero();
    for i in (2 * (d - 1)).saturating_sub(n)..d {
        sum += nu(mn, k, m * i, q)? * theta(n, d - 1, i, q)?;
    }
    if sum.is_zero() {
        return Ok(BigRational::one());
    }
    let total = q_binomial(mn as i64, k as i64, q)?;
    Ok(BigRational::one() - ratio(top.pow(2) * g.pow(2), total * sum))
}

/// Upper bound on `δ_q(n×m, d)` from MRD codes as spaces avoiding the ball
/// of radius `d - 1`, with `B = (|ball| - 1)/(q - 1)`:
///
/// `1 - B [mn-1 k-1]² / ([mn k]([mn-1 k-1] + (B-1)[mn-2 k-2]))`.
pub fn density_bound_ball(q: u64, n: usize, m: usize, d: usize) -> Result<BigRational> {
    check_params(q, n, m, d)?;
    let b = (ball_size(n, m, d - 1, q)? - 1u32) / (q - 1);
    if b.is_zero() {
        return Ok(BigRational::one());
    }
    let mn = n as i64 * m as i64;
    let k = mrd_dimension(n, m, d) as i64;
    let a1 = q_binomial(mn - 1, k - 1, q)?;
    let a2 = q_binomial(mn - 2, k - 2, q)?;
    let total = q_binomial(mn, k, q)?;
    let den = total * (&a1 + (&b - 1u32) * a2);
    Ok(BigRational::one() - ratio(b * a1.pow(2), den))
}

/// `[mn k]_q / q^{m²(d-1)(n-d+1)}`, which tends to `Π q^i/(q^i - 1)` as `m` grows.
pub fn qbinomial_growth_ratio(q: u64, n: usize, m: usize, d: usize) -> Result<BigRational> {
    check_params(q, n, m, d)?;
    let k = mrd_dimension(n, m, d);
    let e = (m * m * (d - 1) * (n + 1 - d)) as u64;
    Ok(ratio(q_binomial((n * m) as i64, k as i64, q)?, q_pow(q, e)))
}

/// A closed interval `[lo, hi]` certified to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn round_down(x: &BigRational) -> BigRational {
    let scale = BigInt::one() << PRECISION_BITS;
    ratio((x * &scale).floor().to_integer(), scale)
}

fn round_up(x: &BigRational) -> BigRational {
    let scale = BigInt::one() << PRECISION_BITS;
    ratio((x * &scale).ceil().to_integer(), scale)
}

impl Enclosure {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn exact(x: BigRational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    fn outward(lo: &BigRational, hi: &BigRational) -> Self {
        Enclosure::new(round_down(lo), round_up(hi))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Midpoint, for display.
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal_floor(&self.lo, 12), decimal_ceil(&self.hi, 12))
    }
}

fn decimal_with(x: &BigRational, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * &scale;
    let v = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (int, frac) = v.abs().div_rem(&scale);
    let sign = if v.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>digits$}")
}

/// `x` rounded down to `digits` decimal places.
pub fn decimal_floor(x: &BigRational, digits: usize) -> String {
    decimal_with(x, digits, false)
}

/// `x` rounded up to `digits` decimal places.
pub fn decimal_ceil(x: &BigRational, digits: usize) -> String {
    decimal_with(x, digits, true)
}

fn check_unit_interval(x: &BigRational) -> Result<()> {
    if !(x.is_positive() && x < &BigRational::one()) {
        return Err(Error::InvalidParameters(format!("x must lie in (0, 1), got {x}")));
    }
    Ok(())
}

/// `φ(x) = Π_{i>=1} (1 - x^i)` from the first `terms` factors. The partial
/// product bounds from above; the tail is at least `1 - x^{N+1}/(1-x)`.
pub fn euler_phi_truncated(x: &BigRational, terms: usize) -> Result<Enclosure> {
    check_unit_interval(x)?;
    if terms == 0 {
        return Err(Error::InvalidParameters("at least one factor is needed".into()));
    }
    let one = BigRational::one();
    let mut partial = one.clone();
    let mut power = one.clone();
    for _ in 0..terms {
        power *= x;
        partial *= &one - &power;
    }
    let tail = &power * x / (&one - x);
    let lo = if tail < one { &partial * (&one - tail) } else { BigRational::zero() };
    Ok(Enclosure::outward(&lo, &partial))
}

/// `φ(x)` from the pentagonal series `1 + Σ_{k=1}^{K} (-1)^k (x^{k(3k-1)/2} + x^{k(3k+1)/2})`.
/// Every omitted exponent is at least `(K+1)(3K+2)/2`, so the remainder is at
/// most `x^{(K+1)(3K+2)/2} / (1 - x)` in absolute value.
pub fn euler_phi_pentagonal(x: &BigRational, terms: usize) -> Result<Enclosure> {
    check_unit_interval(x)?;
    let one = BigRational::one();
    let mut sum = one.clone();
    for k in 1..=terms {
        let pair = num_traits::pow(x.clone(), k * (3 * k - 1) / 2) + num_traits::pow(x.clone(), k * (3 * k + 1) / 2);
        if k % 2 == 1 {
            sum -= pair;
        } else {
            sum += pair;
        }
    }
    let k = terms + 1;
    let rest = num_traits::pow(x.clone(), k * (3 * k - 1) / 2) / (&one - x);
    let lo = (&sum - &rest).max(BigRational::zero());
    Ok(Enclosure::outward(&lo, &(&sum + &rest)))
}

/// `Π_{i>=1} q^i/(q^i - 1) = 1/φ(1/q)`.
pub fn euler_product_inverse(q: u64, terms: usize) -> Result<Option<Enclosure>> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be at least 2, got {q}")));
    }
    let phi = euler_phi_truncated(&ratio(1, q), terms)?;
    if phi.lo.is_zero() {
        return Ok(None);
    }
    Ok(Some(Enclosure::outward(&phi.hi.recip(), &phi.lo.recip())))
}

/// The three regimes of `lim_{q→∞} δ_q(n×m, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QLimitKind {
    /// `d = 1`: every code of full dimension is MRD.
    Dense,
    /// `n = d = 2`: the limit is `Σ_{i=0}^{m} (-1)^i / i!`.
    Derangement,
    Sparse,
}

impl fmt::Display for QLimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QLimitKind::Dense => "dense (d = 1)",
            QLimitKind::Derangement => "n = d = 2, sum of (-1)^i/i! for i <= m",
            QLimitKind::Sparse => "sparse",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticQ {
    pub kind: QLimitKind,
    pub limit: BigRational,
    /// `δ_q ∈ O(q^{decay_exponent})`, `decay_exponent = 1 - (d-1)(n-d+1)`.
    pub decay_exponent: i64,
    /// `(Σ_{i=0}^{m} (-1)^i/i!)^{(d-1)(n-d+1)}`, an upper bound on the limsup.
    pub spectrum_free_bound: BigRational,
    /// `1/2` whenever `d >= 2`.
    pub partition_balanced_bound: Option<BigRational>,
}

fn derangement_sum(m: usize) -> BigRational {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..=m {
        if i > 0 {
            fact *= BigInt::from(i);
        }
        let t = BigRational::new(BigInt::one(), fact.clone());
        if i % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

/// `lim_{q→∞} δ_q(n×m, d)`: 1 for `d = 1`, `Σ_{i=0}^{m} (-1)^i/i!` for
/// `n = d = 2`, and 0 otherwise.
pub fn asymptotic_q_limit(n: usize, m: usize, d: usize) -> Result<AsymptoticQ> {
    check_params(2, n, m, d)?;
    let s = derangement_sum(m);
    let (kind, limit) = if d == 1 {
        (QLimitKind::Dense, BigRational::one())
    } else if n == 2 && d == 2 {
        (QLimitKind::Derangement, s.clone())
    } else {
        (QLimitKind::Sparse, BigRational::zero())
    };
    let e = (d - 1) * (n + 1 - d);
    Ok(AsymptoticQ {
        kind,
        limit,
        decay_exponent: 1 - e as i64,
        spectrum_free_bound: num_traits::pow(s, e),
        partition_balanced_bound: (d >= 2).then(|| ratio(1, 2)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticM {
    pub truncation: usize,
    /// `Π (1 - q^{-i})^{q(d-1)(n-d+1)+1}`.
    pub spectrum_free: Enclosure,
    /// `1 / ([n d-1]_q (Π q^i/(q^i-1) - 1) + 1)`.
    pub common_complement: Enclosure,
    /// `((q-1)(q-2)+1) / (2(q-1)²)`.
    pub partition_balanced: BigRational,
}

impl AsymptoticM {
    /// True when the common-complement bound is certainly the smaller one.
    pub fn common_complement_is_sharper(&self) -> bool {
        self.common_complement.hi < self.spectrum_free.lo
    }
}

/// Upper bounds on `limsup_{m→∞} δ_q(n×m, d)` with each infinite product
/// truncated after `truncation` factors and enclosed.
pub fn asymptotic_m_bounds(q: u64, n: usize, d: usize, truncation: usize) -> Result<AsymptoticM> {
    check_params(q, n, n, d)?;
    if d < 2 {
        return Err(Error::InvalidParameters("the m-asymptotic bounds need d >= 2".into()));
    }
    if truncation == 0 {
        return Err(Error::InvalidParameters("truncation must be at least 1".into()));
    }
    let phi = euler_phi_truncated(&ratio(1, q), truncation)?;
    let e = q as usize * (d - 1) * (n + 1 - d) + 1;
    let spectrum_free = Enclosure::outward(&num_traits::pow(phi.lo.clone(), e), &num_traits::pow(phi.hi.clone(), e));

    let g = BigRational::from_integer(q_binomial(n as i64, d as i64 - 1, q)?.into());
    let one = BigRational::one();
    let cc = |prod: &BigRational| (&g * (prod - &one) + &one).recip();
    let common_complement = match euler_product_inverse(q, truncation)? {
        Some(prod) => Enclosure::outward(&cc(&prod.hi), &cc(&prod.lo)),
        None => Enclosure::outward(&BigRational::zero(), &cc(&phi.hi.recip())),
    };
    let q1 = BigInt::from(q - 1);
    let partition_balanced = BigRational::new(&q1 * (&q1 - 1) + 1, BigInt::from(2) * &q1 * &q1);
    Ok(AsymptoticM {
        truncation,
        spectrum_free,
        common_complement,
        partition_balanced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub census: Option<Census>,
    pub exact: Option<BigRational>,
    pub bound_cc: BigRational,
    pub bound_ball: BigRational,
    pub asymptotic_q: AsymptoticQ,
    /// `None` for `d = 1`.
    pub asymptotic_m: Option<AsymptoticM>,
}

impl DensityReport {
    /// `0 <= exact <= min(bound_cc, bound_ball) <= 1`.
    pub fn check_invariants(&self) -> Result<()> {
        let one = BigRational::one();
        for (name, b) in [("common-complement", &self.bound_cc), ("ball", &self.bound_ball)] {
            if b.is_negative() || b > &one {
                return Err(Error::Invariant(format!("{name} bound {b} outside [0, 1]")));
            }
            if let Some(x) = &self.exact {
                if x.is_negative() || x > b {
                    return Err(Error::Invariant(format!("density {x} exceeds the {name} bound {b}")));
                }
            }
        }
        Ok(())
    }
}

/// Bounds and limits for `(q, n, m, d)`, plus the census when
/// `census_budget` is given. A census past the budget is an error.
pub fn density_report(q: u64, n: usize, m: usize, d: usize, census_budget: Option<u64>, truncation: usize) -> Result<DensityReport> {
    let field = Field::with_order(q)?;
    check_params(q, n, m, d)?;
    let census = census_budget.map(|b| census(&field, n, m, d, b)).transpose()?;
    if let Some(c) = &census {
        c.check_invariants()?;
    }
    let report = DensityReport {
        q,
        n,
        m,
        d,
        k: mrd_dimension(n, m, d),
        exact: census.as_ref().map(Census::density),
        census,
        bound_cc: density_bound_cc(q, n, m, d)?,
        bound_ball: density_bound_ball(q, n, m, d)?,
        asymptotic_q: asymptotic_q_limit(n, m, d)?,
        asymptotic_m: if d >= 2 { Some(asymptotic_m_bounds(q, n, d, truncation)?) } else { None },
    };
    report.check_invariants()?;
    Ok(report)
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q = {}, n = {}, m = {}, d = {}, k = {}", self.q, self.n, self.m, self.d, self.k)?;
        if let (Some(x), Some(c)) = (&self.exact, &self.census) {
            writeln!(f, "density            {x} ({} of {} codes)", c.exact_distance, c.total)?;
        }
        writeln!(f, "cc bound           {} ~ {}", self.bound_cc, decimal_ceil(&self.bound_cc, 12))?;
        writeln!(f, "ball bound         {} ~ {}", self.bound_ball, decimal_ceil(&self.bound_ball, 12))?;
        let a = &self.asymptotic_q;
        writeln!(f, "limit q -> inf     {} [{}], O(q^{})", a.limit, a.kind, a.decay_exponent)?;
        write!(f, "limsup q bound     {}", a.spectrum_free_bound)?;
        if let Some(b) = &self.asymptotic_m {
            writeln!(f)?;
            writeln!(f, "limsup m -> inf ({} factors)", b.truncation)?;
            writeln!(f, "  product bound    {}", b.spectrum_free)?;
            writeln!(f, "  cc bound         {}", b.common_complement)?;
            write!(f, "  1/2-type bound   {}", b.partition_balanced)?;
        }
        Ok(())
    }
}
