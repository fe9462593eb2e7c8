//! Linear rank-metric codes and their directly computed parameters.
//!
//! A code is stored as the canonical RREF basis of its row-major
//! vectorization in `F_q^{nm}`. Parameters that need the codewords
//! (distribution, distances, covering radius) enumerate them under a
//! [`Budget`], in parallel over deterministic index ranges.

pub mod io;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{rank_of, Matrix, Subspace};
use crate::qcomb::q_pow;

/// Upper limit on the number of matrices a single enumeration may visit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Budget(u64);

impl Budget {
    pub const DEFAULT: u64 = 1 << 24;

    pub const fn new(limit: u64) -> Self {
        Budget(limit)
    }

    pub fn limit(self) -> u64 {
        self.0
    }

    /// Returns `needed` as a `u64` if it fits in the budget.
    pub fn check(self, what: &str, needed: &BigUint) -> Result<u64> {
        match needed.to_u64() {
            Some(x) if x <= self.0 => Ok(x),
            _ => Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed: needed.to_string(),
                budget: self.0,
            }),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(Self::DEFAULT)
    }
}

/// `(W_0, ..., W_n)`: the number of codewords of each rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankDistribution(Vec<BigUint>);

impl RankDistribution {
    pub fn new(counts: Vec<BigUint>) -> Self {
        RankDistribution(counts)
    }

    pub fn from_u64s(counts: &[u64]) -> Self {
        RankDistribution(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.0[i]
    }

    /// `n`, one less than the number of entries.
    pub fn n(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// Smallest nonzero index with a positive count; `n + 1` if none.
    pub fn minimum_distance(&self) -> usize {
        (1..self.0.len()).find(|&i| !self.0[i].is_zero()).unwrap_or(self.0.len())
    }

    /// Largest index with a positive count.
    pub fn maximum_rank(&self) -> usize {
        (0..self.0.len()).rev().find(|&i| !self.0[i].is_zero()).unwrap_or(0)
    }
}

impl fmt::Display for RankDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(BigUint::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A set of matrix positions inside a `rows x cols` grid. Positions are
/// 0-based internally and printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntrySet {
    rows: usize,
    cols: usize,
    set: BTreeSet<(usize, usize)>,
}

impl EntrySet {
    pub fn new(rows: usize, cols: usize) -> Self {
        EntrySet {
            rows,
            cols,
            set: BTreeSet::new(),
        }
    }

    pub fn from_positions(rows: usize, cols: usize, positions: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Self::new(rows, cols);
        for p in positions {
            out.insert(p)?;
        }
        Ok(out)
    }

    /// Positions given as `(row, col)` with `1 <= row <= rows`, `1 <= col <= cols`.
    pub fn from_one_based(rows: usize, cols: usize, positions: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Self::new(rows, cols);
        for (i, j) in positions {
            if i == 0 || j == 0 {
                return Err(Error::InvalidParameters(format!("position ({i},{j}) is not 1-based")));
            }
            out.insert((i - 1, j - 1))?;
        }
        Ok(out)
    }

    pub fn insert(&mut self, (i, j): (usize, usize)) -> Result<()> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::InvalidParameters(format!(
                "position ({},{}) outside the {}x{} grid",
                i + 1,
                j + 1,
                self.rows,
                self.cols
            )));
        }
        self.set.insert((i, j));
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, pos: (usize, usize)) -> bool {
        self.set.contains(&pos)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.set.iter().copied()
    }

    pub fn is_subset_of_block(&self, rows: usize, cols: usize) -> bool {
        self.set.iter().all(|&(i, j)| i < rows && j < cols)
    }
}

impl fmt::Display for EntrySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.set.iter().map(|(i, j)| format!("({},{})", i + 1, j + 1)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Which side an optimal anticode is supported on.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Column,
    Row,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Column => "column",
            Side::Row => "row",
        })
    }
}

/// `C = {X : colsp(X) ⊆ U}` (column side) or `{X : rowsp(X) ⊆ U}` (row side).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticodeWitness {
    pub side: Side,
    pub space: Subspace,
}

/// An `F_q`-linear space of `n x m` matrices, `1 <= n <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMetricCode {
    n: usize,
    m: usize,
    space: Subspace,
}

impl RankMetricCode {
    /// Wraps a subspace of `F_q^{nm}` (row-major vectorizations).
    pub fn from_subspace(n: usize, m: usize, space: Subspace) -> Result<Self> {
        check_shape(n, m)?;
        if space.ambient_dim() != n * m {
            return Err(Error::ShapeMismatch(format!(
                "subspace of F^{} is not a space of {n}x{m} matrices",
                space.ambient_dim()
            )));
        }
        Ok(RankMetricCode { n, m, space })
    }

    /// The span of `generators`; dependent generators are absorbed.
    pub fn from_generators(field: &Field, n: usize, m: usize, generators: &[Matrix]) -> Result<Self> {
        check_shape(n, m)?;
        let mut vs = Vec::with_capacity(generators.len());
        for g in generators {
            if !g.field().same(field) {
                return Err(Error::FieldMismatch(format!("generator over {} in a code over {field}", g.field())));
            }
            if (g.rows(), g.cols()) != (n, m) {
                return Err(Error::ShapeMismatch(format!(
                    "generator is {}x{}, code is {n}x{m}",
                    g.rows(),
                    g.cols()
                )));
            }
            vs.push(g.vectorize().to_vec());
        }
        Ok(RankMetricCode {
            n,
            m,
            space: Subspace::from_spanning(field, n * m, &vs),
        })
    }

    pub fn zero(field: &Field, n: usize, m: usize) -> Result<Self> {
        Self::from_subspace(n, m, Subspace::zero(field, n * m))
    }

    pub fn ambient(field: &Field, n: usize, m: usize) -> Result<Self> {
        Self::from_subspace(n, m, Subspace::full(field, n * m))
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_ambient(&self) -> bool {
        self.dim() == self.n * self.m
    }

    /// `|C| = q^dim`.
    pub fn size(&self) -> BigUint {
        q_pow(u64::from(self.field().order()), self.dim() as u64)
    }

    /// The canonical basis as matrices.
    pub fn basis(&self) -> Vec<Matrix> {
        self.space
            .basis()
            .iter()
            .map(|v| Matrix::from_vector(self.field(), self.n, self.m, v).expect("basis vector has length nm"))
            .collect()
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        x.field().same(self.field()) && (x.rows(), x.cols()) == (self.n, self.m) && self.space.contains(x.vectorize())
    }

    /// Every codeword, ordered by coefficient vector (last coordinate fastest).
    pub fn codewords(&self, budget: Budget) -> Result<Codewords<'_>> {
        let total = budget.check("codewords", &self.size())?;
        Ok(Codewords {
            code: self,
            walker: Walker::new(self.field(), self.space.basis(), &vec![Elem::ZERO; self.n * self.m], 0),
            remaining: total,
        })
    }

    pub fn rank_distribution(&self, budget: Budget) -> Result<RankDistribution> {
        self.translate_rank_distribution_inner(None, budget, "rank distribution")
    }

    /// `d(C)`; `n + 1` for the zero code.
    pub fn minimum_distance(&self, budget: Budget) -> Result<usize> {
        if self.is_zero() {
            return Ok(self.n + 1);
        }
        Ok(self.rank_distribution(budget)?.minimum_distance())
    }

    /// `maxrk(C)`; `0` for the zero code.
    pub fn maximum_rank(&self, budget: Budget) -> Result<usize> {
        if self.is_zero() {
            return Ok(0);
        }
        Ok(self.rank_distribution(budget)?.maximum_rank())
    }

    /// `C⊥` with respect to the trace product.
    pub fn dual(&self) -> RankMetricCode {
        RankMetricCode {
            n: self.n,
            m: self.m,
            space: self.space.orthogonal(),
        }
    }

    /// `C(U) = {X ∈ C : colsp(X) ⊆ U}` for `U ≤ F_q^n`.
    pub fn shorten(&self, u: &Subspace) -> Result<RankMetricCode> {
        if u.ambient_dim() != self.n || !u.field().same(self.field()) {
            return Err(Error::ShapeMismatch(format!(
                "shortening subspace lives in F^{}, codewords have {} rows",
                u.ambient_dim(),
                self.n
            )));
        }
        let support = column_support_space(u, self.m);
        Ok(RankMetricCode {
            n: self.n,
            m: self.m,
            space: self.space.intersection(&support)?,
        })
    }

    /// Distribution of `rk(A + M)` over `A ∈ C`.
    pub fn translate_rank_distribution(&self, shift: &Matrix, budget: Budget) -> Result<RankDistribution> {
        if !shift.field().same(self.field()) || (shift.rows(), shift.cols()) != (self.n, self.m) {
            return Err(Error::ShapeMismatch(format!(
                "translate by a {}x{} matrix over {}",
                shift.rows(),
                shift.cols(),
                shift.field()
            )));
        }
        self.translate_rank_distribution_inner(Some(shift.vectorize()), budget, "translate distribution")
    }

    fn translate_rank_distribution_inner(&self, shift: Option<&[Elem]>, budget: Budget, what: &str) -> Result<RankDistribution> {
        let total = budget.check(what, &self.size())?;
        let (n, m) = (self.n, self.m);
        let field = self.field();
        let zero = vec![Elem::ZERO; n * m];
        let offset = shift.unwrap_or(&zero);
        let hist = par_fold(
            field,
            self.space.basis(),
            offset,
            total,
            || vec![0u64; n + 1],
            |h, v| h[rank_of(field, n, m, v)] += 1,
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
        Ok(RankDistribution(hist.into_iter().map(BigUint::from).collect()))
    }

    /// `in(C)`: the pivot positions of the canonical basis, as matrix entries.
    pub fn initial_set(&self) -> Result<EntrySet> {
        if self.is_zero() {
            return Err(Error::ZeroCode);
        }
        EntrySet::from_positions(self.n, self.m, self.space.pivots().iter().map(|&p| (p / self.m, p % self.m)))
    }

    /// `ρ(C)`, by scanning the `q^{nm-k}` cosets with representatives
    /// supported off the pivot coordinates. Needs `q^{nm}` within budget.
    pub fn covering_radius_exact(&self, budget: Budget) -> Result<usize> {
        let field = self.field();
        let q = u64::from(field.order());
        let (n, m) = (self.n, self.m);
        budget.check("covering radius", &q_pow(q, (n * m) as u64))?;
        if self.is_ambient() {
            return Ok(0);
        }
        let mut is_pivot = vec![false; n * m];
        for &p in self.space.pivots() {
            is_pivot[p] = true;
        }
        let units: Vec<Vec<Elem>> = (0..n * m)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![Elem::ZERO; n * m];
                v[c] = Elem::ONE;
                v
            })
            .collect();
        let cosets = q.pow(units.len() as u32);
        let words = q.pow(self.dim() as u32);
        let best = AtomicUsize::new(0);
        let chunk = chunk_size(cosets);
        let chunks = cosets.div_ceil(chunk);
        (0..chunks).into_par_iter().for_each(|c| {
            let start = c * chunk;
            let len = chunk.min(cosets - start);
            let mut reps = Walker::new(field, &units, &vec![Elem::ZERO; n * m], start);
            for _ in 0..len {
                if best.load(Ordering::Relaxed) == n {
                    return;
                }
                let mut words_walk = Walker::new(field, self.space.basis(), &reps.v, 0);
                let mut min = usize::MAX;
                for _ in 0..words {
                    let r = rank_of(field, n, m, &words_walk.v);
                    min = min.min(r);
                    if min <= best.load(Ordering::Relaxed) {
                        break;
                    }
                    words_walk.advance();
                }
                if min != usize::MAX {
                    best.fetch_max(min, Ordering::Relaxed);
                }
                reps.advance();
            }
        });
        Ok(best.into_inner())
    }

    /// `m(n - d + 1) - dim(C)`, non-negative by the Singleton-type bound.
    pub fn singleton_defect(&self, budget: Budget) -> Result<usize> {
        let d = self.minimum_distance(budget)?;
        let bound = self.m * (self.n + 1 - d);
        bound
            .checked_sub(self.dim())
            .ok_or_else(|| Error::Invariant(format!("dimension {} exceeds the Singleton-type bound {bound}", self.dim())))
    }

    /// Whether `dim(C) = m(n - d + 1)`. The zero code counts as MRD.
    pub fn is_mrd(&self, budget: Budget) -> Result<bool> {
        Ok(self.singleton_defect(budget)? == 0)
    }

    /// `m maxrk(C) - dim(C)`, non-negative by the anticode bound.
    pub fn anticode_defect(&self, budget: Budget) -> Result<usize> {
        let bound = self.m * self.maximum_rank(budget)?;
        bound
            .checked_sub(self.dim())
            .ok_or_else(|| Error::Invariant(format!("dimension {} exceeds the anticode bound {bound}", self.dim())))
    }

    pub fn is_optimal_anticode(&self, budget: Budget) -> Result<bool> {
        Ok(self.anticode_defect(budget)? == 0)
    }

    /// For an optimal anticode, the support space it is built on. Tries the
    /// column side first and the row side only for square codes. `None` when
    /// the code is not an optimal anticode.
    pub fn optimal_anticode_witness(&self, budget: Budget) -> Result<Option<AnticodeWitness>> {
        if !self.is_optimal_anticode(budget)? {
            return Ok(None);
        }
        let field = self.field();
        let basis = self.basis();
        let cols: Vec<Vec<Elem>> = basis.iter().flat_map(|b| b.column_space().basis().to_vec()).collect();
        let u = Subspace::from_spanning(field, self.n, &cols);
        if column_support_space(&u, self.m) == self.space {
            return Ok(Some(AnticodeWitness { side: Side::Column, space: u }));
        }
        if self.n == self.m {
            let rows: Vec<Vec<Elem>> = basis.iter().flat_map(|b| b.row_space().basis().to_vec()).collect();
            let u = Subspace::from_spanning(field, self.m, &rows);
            if row_support_space(&u, self.n) == self.space {
                return Ok(Some(AnticodeWitness { side: Side::Row, space: u }));
            }
        }
        Err(Error::Invariant(
            "optimal anticode matches neither a column- nor a row-support space".into(),
        ))
    }
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n < 1 || n > m {
        return Err(Error::InvalidParameters(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// `{X ∈ F_q^{n×m} : colsp(X) ⊆ U}` as a subspace of `F_q^{nm}`, `n = dim` of
/// the ambient of `U`.
pub(crate) fn column_support_space(u: &Subspace, m: usize) -> Subspace {
    let n = u.ambient_dim();
    let mut vs = Vec::with_capacity(u.dim() * m);
    for b in u.basis() {
        for j in 0..m {
            let mut v = vec![Elem::ZERO; n * m];
            for i in 0..n {
                v[i * m + j] = b[i];
            }
            vs.push(v);
        }
    }
    Subspace::from_spanning(u.field(), n * m, &vs)
}

/// `{X ∈ F_q^{n×m} : rowsp(X) ⊆ U}` for `U ≤ F_q^m`.
pub(crate) fn row_support_space(u: &Subspace, n: usize) -> Subspace {
    let m = u.ambient_dim();
    let mut vs = Vec::with_capacity(u.dim() * n);
    for b in u.basis() {
        for i in 0..n {
            let mut v = vec![Elem::ZERO; n * m];
            v[i * m..(i + 1) * m].copy_from_slice(b);
            vs.push(v);
        }
    }
    Subspace::from_spanning(u.field(), n * m, &vs)
}

/// Iterator over the codewords of a code.
pub struct Codewords<'a> {
    code: &'a RankMetricCode,
    walker: Walker<'a>,
    remaining: u64,
}

impl Iterator for Codewords<'_> {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if self.remaining == 0 {
            return None;
        }
        let out = Matrix::from_vector(self.code.field(), self.code.n, self.code.m, &self.walker.v).expect("walker vector has length nm");
        self.remaining -= 1;
        if self.remaining > 0 {
            self.walker.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

// Walks `offset + Σ_t c_t B_t` over coefficient vectors `c` in odometer order
// (last coordinate fastest), updating the sum by one scaled basis vector per
// digit change.
pub(crate) struct Walker<'a> {
    field: &'a Field,
    basis: &'a [Vec<Elem>],
    digits: Vec<u32>,
    steps: Vec<Elem>,
    pub(crate) v: Vec<Elem>,
}

impl<'a> Walker<'a> {
    pub(crate) fn new(field: &'a Field, basis: &'a [Vec<Elem>], offset: &[Elem], start: u64) -> Self {
        let q = field.order();
        let k = basis.len();
        let mut digits = vec![0u32; k];
        let mut x = start;
        for d in digits.iter_mut().rev() {
            *d = (x % u64::from(q)) as u32;
            x /= u64::from(q);
        }
        let mut v = offset.to_vec();
        for (d, b) in digits.iter().zip(basis) {
            if *d != 0 {
                axpy(field, &mut v, Elem(*d), b);
            }
        }
        let steps = (0..q).map(|c| field.sub(Elem((c + 1) % q), Elem(c))).collect();
        Walker {
            field,
            basis,
            digits,
            steps,
            v,
        }
    }

    pub(crate) fn advance(&mut self) {
        let q = self.field.order();
        for t in (0..self.digits.len()).rev() {
            let c = self.digits[t];
            axpy(self.field, &mut self.v, self.steps[c as usize], &self.basis[t]);
            self.digits[t] = (c + 1) % q;
            if self.digits[t] != 0 {
                break;
            }
        }
    }
}

#[inline]
fn axpy(field: &Field, v: &mut [Elem], a: Elem, b: &[Elem]) {
    if a == Elem::ONE {
        for (x, &y) in v.iter_mut().zip(b) {
            *x = field.add(*x, y);
        }
    } else {
        for (x, &y) in v.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = field.add(*x, field.mul(a, y));
            }
        }
    }
}

fn chunk_size(total: u64) -> u64 {
    let workers = rayon::current_num_threads() as u64;
    (total / (workers * 8)).clamp(256, 1 << 16)
}

/// Folds `visit` over all `total` sums `offset + Σ c_t B_t`, splitting the
/// index range into fixed chunks. `reduce` must be associative and
/// commutative for the result to be independent of scheduling.
pub(crate) fn par_fold<T, I, F, R>(field: &Field, basis: &[Vec<Elem>], offset: &[Elem], total: u64, init: I, visit: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &[Elem]) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let chunk = chunk_size(total);
    let chunks = total.div_ceil(chunk);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let len = chunk.min(total - start);
            let mut acc = init();
            let mut w = Walker::new(field, basis, offset, start);
            for i in 0..len {
                visit(&mut acc, &w.v);
                if i + 1 < len {
                    w.advance();
                }
            }
            acc
        })
        .reduce(&init, &reduce)
}
