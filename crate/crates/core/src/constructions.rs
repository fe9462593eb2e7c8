//! MRD codes from linearized polynomials, and optimal anticodes.

use crate::code::{column_support_space, row_support_space, RankMetricCode};
use crate::error::{Error, Result};
use crate::field::{Elem, ExtensionTower, Field};
use crate::matrix::{Matrix, Subspace};

/// An MRD code in `F_q^{n×m}` with minimum distance `d`, over the default
/// tower `F_{q^m} / F_q`.
pub fn build_mrd(field: &Field, n: usize, m: usize, d: usize) -> Result<RankMetricCode> {
    check_mrd_params(n, m, d)?;
    let tower = ExtensionTower::new(field, m)?;
    build_mrd_with_tower(&tower, n, d)
}

fn check_mrd_params(n: usize, m: usize, d: usize) -> Result<()> {
    if !(1 <= d && d <= n && n <= m) {
        return Err(Error::InvalidParameters(format!("need 1 <= d <= n <= m, got n = {n}, m = {m}, d = {d}")));
    }
    Ok(())
}

/// The code `{X(u) : u ∈ F_{q^m}^k}`, `k = n - d + 1`, where
/// `X(u)_ij = Tr(β_j L_u(β_i))` and `L_u(x) = Σ_ℓ u_ℓ x^{q^ℓ}`.
///
/// `X(u)` is the matrix of `L_u` restricted to `<β_1..β_n>` in the bases
/// `(β_i)` and `(β_j*)`. It is built from the `km` generators `u = β_t e_ℓ`,
/// ordered by coordinate `ℓ` and then basis index `t`.
pub fn build_mrd_with_tower(tower: &ExtensionTower, n: usize, d: usize) -> Result<RankMetricCode> {
    let m = tower.degree();
    check_mrd_params(n, m, d)?;
    let top = tower.top();
    let base = tower.base();
    let beta = tower.basis();
    let k = n - d + 1;
    // powers[ℓ][i] = β_i^{q^ℓ}
    let mut powers: Vec<Vec<Elem>> = vec![beta[..n].to_vec()];
    for l in 1..k {
        let next = powers[l - 1].iter().map(|&x| tower.frobenius(x)).collect();
        powers.push(next);
    }
    let mut generators = Vec::with_capacity(k * m);
    for row in powers.iter() {
        for &u in beta {
            generators.push(Matrix::from_fn(base, n, m, |i, j| tower.trace(top.mul(beta[j], top.mul(u, row[i])))));
        }
    }
    RankMetricCode::from_generators(base, n, m, &generators)
}

/// `F_q^{n×m}(U) = {X : colsp(X) ⊆ U}` for `U ≤ F_q^n`.
pub fn build_column_anticode(u: &Subspace, m: usize) -> Result<RankMetricCode> {
    RankMetricCode::from_subspace(u.ambient_dim(), m, column_support_space(u, m))
}

/// `{X ∈ F_q^{n×n} : rowsp(X) ⊆ U}` for `U ≤ F_q^n`; only square shapes are
/// classified this way.
pub fn build_row_anticode(u: &Subspace, n: usize) -> Result<RankMetricCode> {
    if u.ambient_dim() != n {
        return Err(Error::RequiresSquare);
    }
    RankMetricCode::from_subspace(n, n, row_support_space(u, n))
}
