//! Covering radius: line covers of entry sets and the three upper bounds.

use std::fmt;

use num_traits::Zero;

use crate::code::{Budget, EntrySet, RankMetricCode};
use crate::error::{Error, Result};
use crate::macwilliams::transform;

/// A maximum set of positions of `s` with pairwise distinct rows and
/// columns, found by augmenting paths.
pub fn maximum_rook_placement(s: &EntrySet) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); s.rows()];
    for (i, j) in s.iter() {
        adj[i].push(j);
    }
    let mut owner: Vec<Option<usize>> = vec![None; s.cols()];
    for r in 0..s.rows() {
        let mut seen = vec![false; s.cols()];
        augment(r, &adj, &mut owner, &mut seen);
    }
    let mut out: Vec<(usize, usize)> = owner.iter().enumerate().filter_map(|(c, r)| r.map(|r| (r, c))).collect();
    out.sort_unstable();
    out
}

fn augment(r: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if owner[c].is_none_or(|o| augment(o, adj, owner, seen)) {
            owner[c] = Some(r);
            return true;
        }
    }
    false
}

/// `λ(S)`: the fewest rows and columns covering every position of `S`,
/// equal to the size of a maximum rook placement.
pub fn lambda_cover(s: &EntrySet, rows: usize, cols: usize) -> Result<usize> {
    if !s.is_subset_of_block(rows, cols) {
        return Err(Error::InvalidParameters(format!("entry set {s} does not fit in a {rows}x{cols} grid")));
    }
    Ok(maximum_rook_placement(s).len())
}

fn dual_minimum_distance(code: &RankMetricCode, budget: Budget) -> Result<usize> {
    let dual = code.dual();
    if budget.check("dual code", &dual.size()).is_ok() {
        return dual.minimum_distance(budget);
    }
    let w = code.rank_distribution(budget)?;
    let q = u64::from(code.field().order());
    Ok(transform(&w, code.n(), code.m(), q)?.minimum_distance())
}

/// `n - d(C⊥) + 1`. Undefined for the ambient space, whose covering radius is 0.
pub fn dual_distance_bound(code: &RankMetricCode, budget: Budget) -> Result<usize> {
    if code.is_ambient() {
        return Err(Error::AmbientCode);
    }
    Ok(code.n() + 1 - dual_minimum_distance(code, budget)?)
}

/// The external distance `s(C) = #{1 <= i <= n : W_i(C⊥) > 0}`, from the
/// MacWilliams transform of `W(C)`.
pub fn external_distance_bound(code: &RankMetricCode, budget: Budget) -> Result<usize> {
    let w = code.rank_distribution(budget)?;
    let q = u64::from(code.field().order());
    let wd = transform(&w, code.n(), code.m(), q)?;
    Ok(wd.counts().iter().skip(1).filter(|x| !x.is_zero()).count())
}

/// `d - 1 + λ(S)` with `S = ([n-d+1] × [m]) \ in(C)`.
pub fn initial_set_bound(code: &RankMetricCode, budget: Budget) -> Result<usize> {
    let initial = code.initial_set()?;
    let d = code.minimum_distance(budget)?;
    let rows = code.n() + 1 - d;
    let rest = (0..rows).flat_map(|i| (0..code.m()).map(move |j| (i, j))).filter(|&p| !initial.contains(p));
    let s = EntrySet::from_positions(rows, code.m(), rest)?;
    Ok(d - 1 + lambda_cover(&s, rows, code.m())?)
}

/// `ceil((d - 1) / 2)`.
pub fn lower_bound(d: usize) -> usize {
    d.saturating_sub(1).div_ceil(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    pub minimum_distance: usize,
    pub exact: Option<usize>,
    /// `None` for the ambient space.
    pub dual_distance_bound: Option<usize>,
    pub external_distance_bound: usize,
    /// `None` for the zero code.
    pub initial_set_bound: Option<usize>,
    pub lower_bound: usize,
}

impl CoveringReport {
    pub fn upper_bounds(&self) -> impl Iterator<Item = usize> + '_ {
        self.dual_distance_bound
            .into_iter()
            .chain(Some(self.external_distance_bound))
            .chain(self.initial_set_bound)
    }

    pub fn best_upper_bound(&self) -> usize {
        self.upper_bounds().min().expect("the external distance bound is always present")
    }

    /// Checks `lower <= exact <= every upper bound` and `s(C) <= n - d⊥ + 1`.
    pub fn check_invariants(&self) -> Result<()> {
        if let Some(dd) = self.dual_distance_bound {
            if self.external_distance_bound > dd {
                return Err(Error::Invariant(format!(
                    "external distance bound {} exceeds dual distance bound {dd}",
                    self.external_distance_bound
                )));
            }
        }
        if let Some(r) = self.exact {
            if r < self.lower_bound {
                return Err(Error::Invariant(format!("covering radius {r} below the lower bound {}", self.lower_bound)));
            }
            if let Some(b) = self.upper_bounds().find(|&b| b < r) {
                return Err(Error::Invariant(format!("covering radius {r} exceeds the upper bound {b}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CoveringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<usize>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(f, "covering radius        {}", opt(self.exact))?;
        writeln!(f, "lower bound            {}", self.lower_bound)?;
        writeln!(f, "dual distance bound    {}", opt(self.dual_distance_bound))?;
        writeln!(f, "external distance      {}", self.external_distance_bound)?;
        write!(f, "initial set bound      {}", opt(self.initial_set_bound))
    }
}

/// All bounds, plus the exact covering radius when `q^{nm}` fits the budget.
/// Fails only when the rank distribution of the code itself is out of reach.
pub fn covering_report(code: &RankMetricCode, budget: Budget) -> Result<CoveringReport> {
    let d = code.minimum_distance(budget)?;
    let exact = match code.covering_radius_exact(budget) {
        Ok(r) => Some(r),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = CoveringReport {
        minimum_distance: d,
        exact,
        dual_distance_bound: if code.is_ambient() { None } else { Some(dual_distance_bound(code, budget)?) },
        external_distance_bound: external_distance_bound(code, budget)?,
        initial_set_bound: if code.is_zero() { None } else { Some(initial_set_bound(code, budget)?) },
        lower_bound: lower_bound(d),
    };
    report.check_invariants()?;
    Ok(report)
}
