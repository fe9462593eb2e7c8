//! Dense matrices over `F_q` and canonical subspaces of `F_q^a`.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A dense `rows x cols` matrix over a finite field, stored row-major.
///
/// Any shape is allowed here; the `n <= m` convention is enforced by the code
/// APIs.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut out = Self::zeros(field, n, n);
        for i in 0..n {
            out.set(i, i, Elem::ONE);
        }
        out
    }

    /// Builds a matrix from rows of integer element encodings.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            for &x in row {
                data.push(field.try_elem(x).ok_or_else(|| {
                    Error::InvalidParameters(format!("entry {x} is not an element of {field}"))
                })?);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_elems(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.0 >= field.order()) {
            return Err(Error::InvalidParameters(format!(
                "entry outside {field}"
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Inverse of [`Matrix::vectorize`]: rows are read off consecutively.
    pub fn from_vector(field: &Field, rows: usize, cols: usize, v: &[Elem]) -> Result<Self> {
        Self::from_elems(field, rows, cols, v.to_vec())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major concatenation of the rows, an element of `F_q^{rows*cols}`.
    pub fn vectorize(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if !self.field.same(&other.field) {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, a: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&x| f.mul(a, x)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if !self.field.same(&other.field) {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        Ok(Matrix::from_fn(f, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Elem::ZERO, |acc, k| f.add(acc, f.mul(self.get(i, k), other.get(k, j))))
        }))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.rows, self.cols, &self.data)
    }

    /// Reduced row-echelon form and its pivot columns. Zero rows are kept at
    /// the bottom so the shape is unchanged.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<Elem>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref_in_place(&self.field, &mut rows, self.cols);
        let mut data = Vec::with_capacity(self.data.len());
        for r in &rows {
            data.extend_from_slice(r);
        }
        data.resize(self.data.len(), Elem::ZERO);
        (Matrix { data, ..self.clone() }, pivots)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
                r
            })
            .collect();
        let pivots = rref_in_place(&self.field, &mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(&self.field, n, n, |i, j| aug[i][n + j]))
    }

    /// A basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let mut rows: Vec<Vec<Elem>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref_in_place(&self.field, &mut rows, self.cols);
        kernel_from_rref(&self.field, &rows, &pivots, self.cols)
    }

    /// `<X, Y> = Σ_{i,j} X_ij Y_ij`.
    pub fn trace_product(&self, other: &Matrix) -> Result<Elem> {
        self.check_same(other)?;
        Ok(dot(&self.field, &self.data, &other.data))
    }

    pub fn rank_distance(&self, other: &Matrix) -> Result<usize> {
        Ok(self.sub(other)?.rank())
    }

    pub fn column_space(&self) -> Subspace {
        Subspace::from_spanning(&self.field, self.rows, &self.transpose().as_rows())
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::from_spanning(&self.field, self.cols, &self.as_rows())
    }

    fn as_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// First nonzero position in row-major order, 0-based.
    pub fn initial_entry(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|x| !x.is_zero())
            .map(|k| (k / self.cols, k % self.cols))
    }

    /// Entry text: integers for prime fields, `c0.c1...` otherwise.
    pub fn format_entry(field: &Field, x: Elem) -> String {
        field.element(x).to_string()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&x| Matrix::format_entry(&self.field, x)).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.0.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Rank of a row-major `rows x cols` block.
pub(crate) fn rank_of(field: &Field, rows: usize, cols: usize, data: &[Elem]) -> usize {
    if field.order() == 2 && cols <= 64 {
        let mut packed: Vec<u64> = (0..rows)
            .map(|i| {
                data[i * cols..(i + 1) * cols]
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, x)| acc | (u64::from(x.0) << j))
            })
            .collect();
        return rank_gf2(&mut packed);
    }
    let mut scratch = data.to_vec();
    rank_generic(field, rows, cols, &mut scratch)
}

/// Rank of bit-packed rows over `F_2`; destroys the input.
pub(crate) fn rank_gf2(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let r = rows[i];
        if r == 0 {
            continue;
        }
        rank += 1;
        let low = r & r.wrapping_neg();
        for row in rows[i + 1..].iter_mut() {
            if *row & low != 0 {
                *row ^= r;
            }
        }
    }
    rank
}

/// Gaussian elimination rank on a scratch copy of a row-major block.
pub(crate) fn rank_generic(field: &Field, rows: usize, cols: usize, m: &mut [Elem]) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in c..cols {
                m.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = field.inv(m[rank * cols + c]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let x = m[r * cols + c];
            if x.is_zero() {
                continue;
            }
            let factor = field.neg(field.mul(x, inv));
            for j in c..cols {
                let v = m[rank * cols + j];
                m[r * cols + j] = field.add(m[r * cols + j], field.mul(factor, v));
            }
        }
        rank += 1;
    }
    rank
}

/// Reduces `rows` (each of length `cols`) to RREF, dropping zero rows, and
/// returns the pivot columns.
pub(crate) fn rref_in_place(field: &Field, rows: &mut Vec<Vec<Elem>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        if inv != Elem::ONE {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = field.neg(row[c]);
            for j in c..cols {
                row[j] = field.add(row[j], field.mul(factor, pivot_row[j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

// Kernel basis of an RREF system: one vector per free column.
fn kernel_from_rref(field: &Field, rows: &[Vec<Elem>], pivots: &[usize], cols: usize) -> Vec<Vec<Elem>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &p) in rows.iter().zip(pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// A subspace of `F_q^a` held by its reduced row-echelon basis.
///
/// The representation is canonical, so equality and hashing compare bases.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
            .collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of `vectors`, each of length `ambient`.
    ///
    /// # Panics
    ///
    /// Panics if a vector has the wrong length.
    pub fn from_spanning(field: &Field, ambient: usize, vectors: &[Vec<Elem>]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length differs from ambient dimension");
        let mut rows = vectors.to_vec();
        let pivots = rref_in_place(field, &mut rows, ambient);
        Subspace {
            field: field.clone(),
            ambient,
            basis: rows,
            pivots,
        }
    }

    // Caller guarantees `basis` is already in RREF with the given pivots.
    pub(crate) fn from_rref_unchecked(field: &Field, ambient: usize, basis: Vec<Vec<Elem>>, pivots: Vec<usize>) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            let factor = f.neg(c);
            for j in p..self.ambient {
                w[j] = f.add(w[j], f.mul(factor, row[j]));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// `U* = {v : v·u = 0 for all u in U}` for the standard inner product.
    pub fn orthogonal(&self) -> Subspace {
        let kernel = kernel_from_rref(&self.field, &self.basis, &self.pivots, self.ambient);
        Subspace::from_spanning(&self.field, self.ambient, &kernel)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Subspace::from_spanning(&self.field, self.ambient, &vs))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(self.orthogonal().sum(&other.orthogonal())?.orthogonal())
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if !self.field.same(&other.field) {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.ambient != other.ambient {
            return Err(Error::ShapeMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// All `q^dim` vectors of the subspace, in lexicographic order of their
    /// coefficient vectors with respect to the RREF basis.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let q = f.order() as usize;
        let k = self.dim();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u32; k];
        for _ in 0..total {
            let mut v = vec![Elem::ZERO; self.ambient];
            for (c, row) in coeffs.iter().zip(&self.basis) {
                if *c == 0 {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(Elem(*c), r));
                }
            }
            out.push(v);
            for c in coeffs.iter_mut().rev() {
                *c += 1;
                if *c < q as u32 {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "Subspace(F^{} <{}>)", self.ambient, rows.join("; "))
    }
}

/// All `u`-subsets of `0..a` in lexicographic order.
pub fn pivot_patterns(a: usize, u: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if u > a {
        return out;
    }
    let mut cur: Vec<usize> = (0..u).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..u).rev().find(|&i| cur[i] < a - u + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..u {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Every subspace of `F_q^a` whose RREF basis has the given pivot columns.
///
/// Free entries (right of each pivot, outside pivot columns) run through an
/// odometer whose last position changes fastest.
#[derive(Clone)]
pub struct SubspacesWithPivots {
    field: Field,
    ambient: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done: bool,
}

impl SubspacesWithPivots {
    pub fn new(field: &Field, ambient: usize, pivots: Vec<usize>) -> Self {
        let mut is_pivot = vec![false; ambient];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..ambient).filter(|&c| !is_pivot[c]).map(move |c| (r, c)).collect::<Vec<_>>())
            .collect();
        SubspacesWithPivots {
            field: field.clone(),
            ambient,
            counter: vec![0; free.len()],
            free,
            pivots,
            done: false,
        }
    }

    /// Number of subspaces this iterator yields, `q^{#free}`.
    pub fn count_hint(&self) -> u128 {
        u128::from(self.field.order()).pow(self.free.len() as u32)
    }
}

impl Iterator for SubspacesWithPivots {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let mut basis: Vec<Vec<Elem>> = self
            .pivots
            .iter()
            .map(|&p| {
                let mut row = vec![Elem::ZERO; self.ambient];
                row[p] = Elem::ONE;
                row
            })
            .collect();
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            basis[r][c] = Elem(v);
        }
        let q = self.field.order();
        self.done = true;
        for v in self.counter.iter_mut().rev() {
            *v += 1;
            if *v < q {
                self.done = false;
                break;
            }
            *v = 0;
        }
        Some(Subspace::from_rref_unchecked(&self.field, self.ambient, basis, self.pivots.clone()))
    }
}

/// Every `u`-dimensional subspace of `F_q^a` exactly once, ordered by pivot
/// pattern and then by free entries.
pub fn enumerate_subspaces(field: &Field, a: usize, u: usize) -> impl Iterator<Item = Subspace> + Clone {
    let field = field.clone();
    pivot_patterns(a, u)
        .into_iter()
        .flat_map(move |p| SubspacesWithPivots::new(&field, a, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomb::q_binomial;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn all_matrices(field: &Field, r: usize, c: usize) -> Vec<Matrix> {
        let q = field.order() as usize;
        let total = q.pow((r * c) as u32);
        (0..total)
            .map(|mut idx| {
                let mut data = Vec::with_capacity(r * c);
                for _ in 0..r * c {
                    data.push(Elem((idx % q) as u32));
                    idx /= q;
                }
                Matrix::from_elems(field, r, c, data).unwrap()
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Matrix::zeros(&f2, 3, 4).rank(), 0);
        let mut id = Matrix::zeros(&f2, 3, 5);
        for i in 0..3 {
            id.set(i, i, Elem::ONE);
        }
        assert_eq!(id.rank(), 3);
        let a = Matrix::from_rows(&f2, &[vec![0, 0, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 0, 0]]).unwrap();
        assert_eq!(a.rank(), 3);
        assert_eq!(a.initial_entry(), Some((0, 3)));
    }

    #[test]
    fn gf2_packed_rank_matches_generic() {
        let f2 = Field::prime(2).unwrap();
        for m in all_matrices(&f2, 3, 3) {
            let mut scratch = m.vectorize().to_vec();
            assert_eq!(m.rank(), rank_generic(&f2, 3, 3, &mut scratch));
        }
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let data: Vec<Elem> = (0..5 * 40)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    Elem((state & 1) as u32)
                })
                .collect();
            let m = Matrix::from_elems(&f2, 5, 40, data).unwrap();
            let mut scratch = m.vectorize().to_vec();
            assert_eq!(m.rank(), rank_generic(&f2, 5, 40, &mut scratch));
        }
    }

    #[test]
    fn rank_equals_space_dims_exhaustive_2x3() {
        for field in [Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
            let mats = all_matrices(&field, 2, 3);
            for m in mats.iter().step_by(if field.order() == 2 { 1 } else { 7 }) {
                let r = m.rank();
                assert_eq!(m.column_space().dim(), r);
                assert_eq!(m.row_space().dim(), r);
                assert_eq!(m.transpose().rank(), r);
            }
        }
    }

    #[test]
    fn metric_axioms_exhaustive_2x2() {
        let f2 = Field::prime(2).unwrap();
        let mats = all_matrices(&f2, 2, 2);
        for x in &mats {
            assert_eq!(x.rank_distance(x).unwrap(), 0);
            for y in &mats {
                let dxy = x.rank_distance(y).unwrap();
                assert_eq!(dxy, y.rank_distance(x).unwrap());
                assert_eq!(dxy == 0, x == y);
                for z in &mats {
                    assert!(x.rank_distance(z).unwrap() <= dxy + y.rank_distance(z).unwrap());
                }
            }
        }
    }

    #[test]
    fn trace_product_examples() {
        let f2 = Field::prime(2).unwrap();
        let id = Matrix::identity(&f2, 2);
        let ones = Matrix::from_rows(&f2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(id.trace_product(&ones).unwrap(), Elem::ZERO);
        assert_eq!(id.trace_product(&Matrix::zeros(&f2, 2, 2)).unwrap(), Elem::ZERO);
        let mats = all_matrices(&f2, 2, 2);
        for x in mats.iter().filter(|x| !x.is_zero()) {
            assert!(mats.iter().any(|y| !x.trace_product(y).unwrap().is_zero()));
        }
        assert!(id.trace_product(&Matrix::zeros(&f2, 2, 3)).is_err());
    }

    #[test]
    fn column_space_subadditive_exhaustive() {
        let f2 = Field::prime(2).unwrap();
        let mats = all_matrices(&f2, 2, 2);
        for a in &mats {
            for b in &mats {
                let s = a.add(b).unwrap().column_space();
                assert!(s.dim() <= a.column_space().dim() + b.column_space().dim());
                assert!(s.is_subspace_of(&a.column_space().sum(&b.column_space()).unwrap()));
            }
        }
    }

    #[test]
    fn inverse_and_nullspace() {
        let f3 = Field::prime(3).unwrap();
        let m = Matrix::from_rows(&f3, &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]).unwrap();
        match m.inverse() {
            Some(inv) => assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f3, 3)),
            None => assert!(m.rank() < 3),
        }
        let s = Matrix::from_rows(&f3, &[vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        assert!(s.inverse().is_none());
        let ns = s.nullspace();
        assert_eq!(ns.len(), 3 - s.rank());
        for v in &ns {
            let col = Matrix::from_elems(&f3, 3, 1, v.clone()).unwrap();
            assert!(s.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn orthogonal_involution_all_subspaces_f2_3() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Subspace::zero(&f2, 3).orthogonal(), Subspace::full(&f2, 3));
        for u in 0..=3 {
            for s in enumerate_subspaces(&f2, 3, u) {
                let o = s.orthogonal();
                assert_eq!(o.dim(), 3 - u);
                assert_eq!(o.orthogonal(), s);
                for a in s.basis() {
                    for b in o.basis() {
                        assert!(dot(&f2, a, b).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_match_q_binomial() {
        for q in [2u64, 3] {
            let field = Field::prime(q).unwrap();
            for a in 0..=4 {
                for u in 0..=a {
                    let all: Vec<Subspace> = enumerate_subspaces(&field, a, u).collect();
                    assert_eq!(BigUint::from(all.len()), q_binomial(a as i64, u as i64, q).unwrap());
                    let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(distinct.len(), all.len());
                    assert!(all.iter().all(|s| s.dim() == u));
                }
            }
        }
        let f2 = Field::prime(2).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 4, 2).count(), 35);
        assert_eq!(enumerate_subspaces(&f2, 4, 0).count(), 1);
        assert_eq!(enumerate_subspaces(&f2, 4, 4).next().unwrap(), Subspace::full(&f2, 4));
    }

    #[test]
    fn intersection_matches_membership() {
        let f2 = Field::prime(2).unwrap();
        let subs: Vec<Subspace> = (0..=3).flat_map(|u| enumerate_subspaces(&f2, 3, u)).collect();
        let vecs = Subspace::full(&f2, 3).vectors();
        for a in &subs {
            for b in &subs {
                let i = a.intersection(b).unwrap();
                for v in &vecs {
                    assert_eq!(i.contains(v), a.contains(v) && b.contains(v));
                }
            }
        }
    }

    fn arb_matrix(q: u32, r: usize, c: usize) -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0..q, r * c)
    }

    proptest! {
        #[test]
        fn trace_product_bilinear(x in arb_matrix(5, 2, 3), y in arb_matrix(5, 2, 3), z in arb_matrix(5, 2, 3), a in 0u32..5) {
            let f = Field::prime(5).unwrap();
            let mk = |v: &Vec<u32>| Matrix::from_elems(&f, 2, 3, v.iter().map(|&e| Elem(e)).collect()).unwrap();
            let (x, y, z) = (mk(&x), mk(&y), mk(&z));
            let lhs = x.scale(Elem(a)).add(&y).unwrap().trace_product(&z).unwrap();
            let rhs = f.add(f.mul(Elem(a), x.trace_product(&z).unwrap()), y.trace_product(&z).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(x.trace_product(&y).unwrap(), y.trace_product(&x).unwrap());
        }

        #[test]
        fn rank_consistency_random(x in arb_matrix(3, 3, 4)) {
            let f = Field::prime(3).unwrap();
            let m = Matrix::from_elems(&f, 3, 4, x.iter().map(|&e| Elem(e)).collect()).unwrap();
            let r = m.rank();
            prop_assert_eq!(m.column_space().dim(), r);
            prop_assert_eq!(m.row_space().dim(), r);
            prop_assert_eq!(m.nullspace().len(), 4 - r);
        }

        #[test]
        fn orthogonal_dimension(vs in proptest::collection::vec(arb_matrix(3, 1, 5), 0..5)) {
            let f = Field::prime(3).unwrap();
            let vs: Vec<Vec<Elem>> = vs.iter().map(|v| v.iter().map(|&e| Elem(e)).collect()).collect();
            let s = Subspace::from_spanning(&f, 5, &vs);
            prop_assert_eq!(s.orthogonal().dim(), 5 - s.dim());
            prop_assert_eq!(s.orthogonal().orthogonal(), s);
        }
    }
}
