//! Finite fields `GF(p^e)`.
//!
//! A [`Field`] is a shared, immutable arithmetic context built from a
//! [`FieldSpec`]. Elements are [`Elem`] values: the integer encoding
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of the polynomial representative
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` modulo the field's modulus. For prime
//! fields the encoding is the residue itself.
//!
//! Fields of up to 2^16 elements use log/exp tables; larger ones fall back to
//! polynomial arithmetic.

mod poly;
mod tower;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use tower::ExtensionTower;

const LOG_TABLE_LIMIT: u64 = 1 << 16;
const ADD_TABLE_LIMIT: u64 = 256;
const ORDER_LIMIT: u64 = 1 << 31;

/// Description of `GF(p^e)`: characteristic, degree and defining modulus.
///
/// The modulus is stored low-to-high including the leading 1, and is empty
/// for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates an explicit description: `p` prime, `e >= 1`, and for `e > 1`
    /// a monic irreducible modulus of degree `e`.
    pub fn new(p: u64, e: u32, modulus: Vec<u32>) -> Result<Self> {
        check_characteristic(p, e)?;
        if e == 1 {
            if !modulus.is_empty() {
                return Err(Error::InvalidParameters(
                    "prime fields take no modulus".into(),
                ));
            }
        } else {
            if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
                return Err(Error::InvalidParameters(format!(
                    "modulus must be monic of degree {e}"
                )));
            }
            if modulus.iter().any(|&c| u64::from(c) >= p) {
                return Err(Error::InvalidParameters(format!(
                    "modulus coefficients must lie in [0, {p})"
                )));
            }
            let f: Vec<u64> = modulus.iter().map(|&c| u64::from(c)).collect();
            if !poly::is_irreducible(&f, p) {
                return Err(Error::InvalidParameters("modulus is reducible".into()));
            }
        }
        Ok(FieldSpec {
            p: p as u32,
            e,
            modulus,
        })
    }

    /// The deterministic choice for `GF(p^e)`: the first monic irreducible
    /// polynomial of degree `e` when monic polynomials are ordered by the
    /// integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of their lower coefficients.
    pub fn standard(p: u64, e: u32) -> Result<Self> {
        check_characteristic(p, e)?;
        if e == 1 {
            return Ok(FieldSpec {
                p: p as u32,
                e,
                modulus: Vec::new(),
            });
        }
        let count = p.pow(e);
        for idx in 0..count {
            let mut f = Vec::with_capacity(e as usize + 1);
            let mut x = idx;
            for _ in 0..e {
                f.push(x % p);
                x /= p;
            }
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return Ok(FieldSpec {
                    p: p as u32,
                    e,
                    modulus: f.into_iter().map(|c| c as u32).collect(),
                });
            }
        }
        Err(Error::Invariant(format!(
            "no irreducible polynomial of degree {e} over F_{p}"
        )))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        u64::from(self.p).pow(self.e)
    }
}

fn check_characteristic(p: u64, e: u32) -> Result<()> {
    if !poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::BadExponent(e));
    }
    match p.checked_pow(e) {
        Some(q) if q < ORDER_LIMIT => Ok(()),
        _ => Err(Error::FieldTooLarge(format!("{p}^{e}"))),
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            return write!(f, "GF({})", self.p);
        }
        let coeffs: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
        write!(f, "GF({}^{}; modulus={})", self.p, self.e, coeffs.join(","))
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses `GF(p)` or `GF(p^e; modulus=c_0,...,c_e)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("malformed field description `{s}`"));
        let body = s
            .trim()
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        if let Ok(p) = body.trim().parse::<u64>() {
            return FieldSpec::new(p, 1, Vec::new());
        }
        let (pe, modulus) = body.split_once(';').ok_or_else(bad)?;
        let (p, e) = pe.trim().split_once('^').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        let coeffs = modulus
            .trim()
            .strip_prefix("modulus=")
            .ok_or_else(bad)?
            .trim();
        let modulus = if coeffs.is_empty() {
            Vec::new()
        } else {
            coeffs
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        FieldSpec::new(p, e, modulus)
    }
}

/// A field element in its integer encoding. Only meaningful together with
/// the [`Field`] that produced it.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    p: u32,
    e: usize,
    tables: Option<Tables>,
    add_table: Option<Vec<u32>>,
}

/// Arithmetic context for `GF(p^e)`; cheap to clone and safe to share.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl Field {
    /// `GF(p^e)` with the modulus chosen by [`FieldSpec::standard`].
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Ok(Self::from_spec(FieldSpec::standard(p, e)?))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// The standard field with `q` elements; `q` must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        match poly::prime_factors(q).as_slice() {
            &[p] => {
                let (mut rest, mut e) = (q, 0);
                while rest > 1 {
                    rest /= p;
                    e += 1;
                }
                Self::new(p, e)
            }
            _ => Err(Error::InvalidParameters(format!("{q} is not a prime power"))),
        }
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        let q = spec.order() as u32;
        let p = spec.p;
        let e = spec.e as usize;
        let mut inner = Inner {
            spec,
            q,
            p,
            e,
            tables: None,
            add_table: None,
        };
        if u64::from(q) <= LOG_TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        if p != 2 && e > 1 && u64::from(q) <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(&inner, a, b);
                }
            }
            inner.add_table = Some(t);
        }
        Field {
            inner: Arc::new(inner),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.e as u32
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The element with integer encoding `index`.
    ///
    /// # Panics
    ///
    /// Panics if `index >= q`.
    pub fn elem(&self, index: u32) -> Elem {
        assert!(index < self.inner.q, "element index {index} out of range");
        Elem(index)
    }

    pub fn try_elem(&self, index: u32) -> Option<Elem> {
        (index < self.inner.q).then_some(Elem(index))
    }

    /// All `q` elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.inner.q).map(Elem)
    }

    pub fn element(&self, a: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }

    /// Coefficients `c_0..c_{e-1}` of the polynomial representative.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.inner.p;
        let mut x = a.0;
        (0..self.inner.e)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        let p = self.inner.p;
        if coeffs.len() > self.inner.e || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameters(format!(
                "coefficients {coeffs:?} do not describe an element of {}",
                self.inner.spec
            )));
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 {
            Elem(a.0 ^ b.0)
        } else if inner.e == 1 {
            let s = a.0 + b.0;
            Elem(if s >= inner.p { s - inner.p } else { s })
        } else if let Some(t) = &inner.add_table {
            Elem(t[(a.0 * inner.q + b.0) as usize])
        } else {
            Elem(digit_add(inner, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 || a.0 == 0 {
            a
        } else if inner.e == 1 {
            Elem(inner.p - a.0)
        } else {
            let p = inner.p;
            let mut x = a.0;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..inner.e {
                let c = x % p;
                x /= p;
                out += ((p - c) % p) * place;
                place *= p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.inner;
        match &inner.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => Elem(slow_mul(inner, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.inner;
        match &inner.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Some(Elem(t.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]))
            }
            None => Some(self.pow(a, u64::from(inner.q) - 2)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `k * 1` for an integer `k`, i.e. the image of `k mod p` in the prime field.
    pub fn from_int(&self, k: u64) -> Elem {
        Elem((k % u64::from(self.inner.p)) as u32)
    }

    pub(crate) fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.inner.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.spec.fmt(f)
    }
}

fn digit_add(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p;
    let (mut x, mut y) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..inner.e {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
    }
    out
}

fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = u64::from(inner.p);
    if inner.e == 1 {
        return (u64::from(a) * u64::from(b) % p) as u32;
    }
    let digits = |mut x: u32| -> Vec<u64> {
        (0..inner.e)
            .map(|_| {
                let c = u64::from(x) % p;
                x /= inner.p;
                c
            })
            .collect()
    };
    let m: Vec<u64> = inner.spec.modulus.iter().map(|&c| u64::from(c)).collect();
    let prod = poly::rem(&poly::mul(&digits(a), &digits(b), p), &m, p);
    prod.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = u64::from(q - 1);
    let factors = poly::prime_factors(order);
    let slow_pow = |a: u32, mut exp: u64| {
        let mut acc = 1u32;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = slow_mul(inner, acc, base);
            }
            base = slow_mul(inner, base, base);
            exp >>= 1;
        }
        acc
    };
    let generator = (1..q)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * n.max(1)];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i] = x;
        exp[i + n] = x;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, generator);
    }
    Tables { log, exp }
}

/// A field element bundled with its field, for the value-oriented API.
///
/// Arithmetic operators panic when the operands come from different fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(self.value).map(|v| self.field.element(v))
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.field.element(self.field.pow(self.value, exp))
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn binary(&self, rhs: &FieldElement, op: fn(&Field, Elem, Elem) -> Elem) -> FieldElement {
        assert!(
            self.field.same(&rhs.field),
            "field mismatch: {} vs {}",
            self.field,
            rhs.field
        );
        self.field.element(op(&self.field, self.value, rhs.value))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, Field::add)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, Field::sub)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, Field::mul)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_prime_field() {
            write!(f, "{}", self.value.0)
        } else {
            let c: Vec<String> = self.coeffs().iter().map(u32::to_string).collect();
            write!(f, "{}", c.join("."))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert!(f2.spec().modulus().is_empty());
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.order(), 3);
        // x^2, x^2+1, x^2+x reducible; x^2+x+1 is the only irreducible quadratic.
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.spec().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn with_order() {
        assert_eq!(Field::with_order(9).unwrap().spec(), Field::new(3, 2).unwrap().spec());
        assert!(Field::with_order(7).unwrap().is_prime_field());
        for q in [0, 1, 6, 12] {
            assert!(Field::with_order(q).is_err());
        }
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(Field::new(3, 0).unwrap_err(), Error::BadExponent(0));
        assert!(matches!(Field::new(2, 40), Err(Error::FieldTooLarge(_))));
        assert!(FieldSpec::new(2, 2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn spec_round_trips_through_text() {
        for (p, e) in [(2, 1), (3, 1), (2, 3), (3, 2), (5, 2)] {
            let spec = FieldSpec::standard(p, e).unwrap();
            let text = spec.to_string();
            assert_eq!(text.parse::<FieldSpec>().unwrap(), spec, "{text}");
        }
        assert_eq!(
            FieldSpec::standard(2, 2).unwrap().to_string(),
            "GF(2^2; modulus=1,1,1)"
        );
        assert_eq!(FieldSpec::standard(3, 1).unwrap().to_string(), "GF(3)");
        assert!("GF(2^2)".parse::<FieldSpec>().is_err());
    }

    fn axioms_exhaustive(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            assert_eq!(f.mul(a, Elem::ONE), a);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_fields() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (13, 1)] {
            axioms_exhaustive(&Field::new(p, e).unwrap());
        }
    }

    #[test]
    fn table_and_polynomial_arithmetic_agree() {
        let f = Field::new(3, 4).unwrap();
        let inner = &*f.inner;
        for a in 0..f.order() {
            for b in (0..f.order()).step_by(7) {
                assert_eq!(f.mul(Elem(a), Elem(b)).0, slow_mul(inner, a, b));
                assert_eq!(f.add(Elem(a), Elem(b)).0, digit_add(inner, a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(65537, 1).unwrap();
        assert!(f.inner.tables.is_none());
        let a = f.elem(12345);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        let g = Field::new(2, 17).unwrap();
        assert!(g.inner.tables.is_none());
        let x = g.elem(0b1011_0110_0101);
        assert_eq!(g.mul(x, g.inv(x).unwrap()), Elem::ONE);
        assert_eq!(g.pow(x, u64::from(g.order()) - 1), Elem::ONE);
    }

    #[test]
    fn coefficient_encoding() {
        let f9 = Field::new(3, 2).unwrap();
        let a = f9.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(a.index(), 2 + 3);
        assert_eq!(f9.coeffs(a), vec![2, 1]);
        assert!(f9.from_coeffs(&[3]).is_err());
        assert_eq!(f9.element(a).to_string(), "2.1");
    }
}
