//! Degree-`m` extensions `F_{q^m} / F_q`.
//!
//! The top field is built directly as `GF(p^{e m})` and the base field is
//! embedded into it once, by sending the generator `x` of the base modulus to
//! a root of that modulus in the top field. Basis and dual basis are stored as
//! top-field elements.

use std::collections::HashMap;

use super::{poly, Elem, Field, FieldElement};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct ExtensionTower {
    base: Field,
    top: Field,
    m: usize,
    // image of the base generator `x` in the top field (unused for prime bases)
    alpha: Elem,
    embed: Vec<Elem>,
    project: HashMap<Elem, Elem>,
    basis: Vec<Elem>,
    dual: Vec<Elem>,
}

impl ExtensionTower {
    /// The tower over `base` of degree `m`, with the polynomial basis
    /// `(1, γ, ..., γ^{m-1})` of the first element `γ` (in encoding order)
    /// for which these powers are `F_q`-independent.
    pub fn new(base: &Field, m: usize) -> Result<Self> {
        let mut tower = Self::skeleton(base, m)?;
        let top = tower.top.clone();
        for g in 1..top.order() {
            let gamma = Elem(g);
            let mut basis = Vec::with_capacity(m);
            let mut x = Elem::ONE;
            for _ in 0..m {
                basis.push(x);
                x = top.mul(x, gamma);
            }
            if let Ok(dual) = tower.dual_of(&basis) {
                tower.basis = basis;
                tower.dual = dual;
                return Ok(tower);
            }
        }
        Err(Error::Invariant("no polynomial basis found".into()))
    }

    /// The tower with an explicitly chosen ordered basis.
    pub fn with_basis(base: &Field, m: usize, basis: Vec<Elem>) -> Result<Self> {
        let mut tower = Self::skeleton(base, m)?;
        let dual = tower.dual_of(&basis)?;
        tower.basis = basis;
        tower.dual = dual;
        Ok(tower)
    }

    fn skeleton(base: &Field, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameters(
                "extension degree must be at least 1".into(),
            ));
        }
        let p = u64::from(base.characteristic());
        let e = base.degree();
        let total = e
            .checked_mul(m as u32)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^({e}*{m})")))?;
        let top = Field::new(p, total)?;
        let alpha = if e == 1 {
            Elem::ONE
        } else {
            find_root(&top, base)?
        };
        let mut embed = Vec::with_capacity(base.order() as usize);
        let mut project = HashMap::with_capacity(base.order() as usize);
        for a in base.elements() {
            let mut img = Elem::ZERO;
            let mut power = Elem::ONE;
            for c in base.coeffs(a) {
                img = top.add(img, top.mul(top.from_int(u64::from(c)), power));
                power = top.mul(power, alpha);
            }
            embed.push(img);
            project.insert(img, a);
        }
        Ok(ExtensionTower {
            base: base.clone(),
            top,
            m,
            alpha,
            embed,
            project,
            basis: Vec::new(),
            dual: Vec::new(),
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn dual_basis(&self) -> &[Elem] {
        &self.dual
    }

    /// Image of the base generator in the top field.
    pub fn base_generator_image(&self) -> Elem {
        self.alpha
    }

    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a.0 as usize]
    }

    /// The base-field element equal to `x`, if `x` lies in the embedded copy.
    pub fn project(&self, x: Elem) -> Option<Elem> {
        self.project.get(&x).copied()
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.top.pow(x, u64::from(self.base.order()))
    }

    /// `Σ_{i<m} x^{q^i}` as a base-field element.
    pub fn trace(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.top.add(acc, y);
            y = self.frobenius(y);
        }
        self.project(acc)
            .expect("trace of a top-field element lies in the base field")
    }

    pub fn trace_to_base(&self, x: &FieldElement) -> Result<FieldElement> {
        if !x.field().same(&self.top) {
            return Err(Error::FieldMismatch(format!(
                "{} is not the top field {}",
                x.field(),
                self.top
            )));
        }
        Ok(self.base.element(self.trace(x.value())))
    }

    /// Coordinates of `x` in the tower basis: `x = Σ_i c_i β_i`, `c_i = Tr(x β_i*)`.
    pub fn coordinates(&self, x: Elem) -> Vec<Elem> {
        self.dual
            .iter()
            .map(|&d| self.trace(self.top.mul(x, d)))
            .collect()
    }

    /// The dual of an arbitrary ordered basis: the unique `(β_j*)` with
    /// `Tr(β_i β_j*) = δ_ij`. Solves `G C = I` for the Gram matrix
    /// `G_ik = Tr(β_i β_k)` and sets `β_j* = Σ_k C_jk β_k`.
    pub fn dual_of(&self, basis: &[Elem]) -> Result<Vec<Elem>> {
        if basis.len() != self.m {
            return Err(Error::NotABasis(format!(
                "expected {} elements, got {}",
                self.m,
                basis.len()
            )));
        }
        if basis.iter().any(|b| b.0 >= self.top.order()) {
            return Err(Error::NotABasis("element outside the top field".into()));
        }
        let mut gram = Matrix::zeros(&self.base, self.m, self.m);
        for i in 0..self.m {
            for k in 0..self.m {
                gram.set(i, k, self.trace(self.top.mul(basis[i], basis[k])));
            }
        }
        let c = gram
            .inverse()
            .ok_or_else(|| Error::NotABasis("elements are linearly dependent".into()))?;
        Ok((0..self.m)
            .map(|j| {
                (0..self.m).fold(Elem::ZERO, |acc, k| {
                    self.top
                        .add(acc, self.top.mul(self.embed(c.get(j, k)), basis[k]))
                })
            })
            .collect())
    }
}

// Finds a root of the base modulus among the nonzero elements of the unique
// subfield of order q, i.e. among powers of h = g^((Q-1)/(q-1)).
fn find_root(top: &Field, base: &Field) -> Result<Elem> {
    let big = u64::from(top.order()) - 1;
    let small = u64::from(base.order()) - 1;
    let factors = poly::prime_factors(big);
    let g = (1..top.order())
        .map(Elem)
        .find(|&g| factors.iter().all(|&r| top.pow(g, big / r) != Elem::ONE))
        .ok_or_else(|| Error::Invariant("no primitive element".into()))?;
    let h = top.pow(g, big / small);
    let modulus: Vec<Elem> = base
        .spec()
        .modulus()
        .iter()
        .map(|&c| top.from_int(u64::from(c)))
        .collect();
    let mut x = Elem::ONE;
    for _ in 0..small {
        let value = modulus
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| top.add(top.mul(acc, x), c));
        if value.is_zero() {
            return Ok(x);
        }
        x = top.mul(x, h);
    }
    Err(Error::Invariant("base modulus has no root in the top field".into()))
}
