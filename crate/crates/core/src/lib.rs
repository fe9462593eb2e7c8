//! Exact analysis of linear rank-metric codes.
//!
//! A rank-metric code is an `F_q`-linear space of `n x m` matrices (`n <= m`)
//! with distance `d(X, Y) = rk(X - Y)`. This crate computes the parameters of
//! such codes by exhaustive enumeration at small scale (rank distribution,
//! minimum distance, maximum rank, covering radius), evaluates the closed-form
//! identities relating them (MacWilliams transforms, MRD distributions,
//! translate distributions, covering-radius bounds, density bounds), and
//! builds MRD codes and optimal anticodes.
//!
//! Everything is exact: field arithmetic is table driven, counts are
//! arbitrary-precision integers and densities are reduced fractions.
//!
//! ```
//! use rankmetric::{Budget, Field, Matrix, RankMetricCode, macwilliams};
//!
//! let f3 = Field::prime(3).unwrap();
//! let a = Matrix::from_rows(&f3, &[vec![0, 0, 1], vec![2, 0, 0], vec![0, 0, 0]]).unwrap();
//! let b = Matrix::from_rows(&f3, &[vec![2, 0, 0], vec![1, 2, 1], vec![1, 0, 2]]).unwrap();
//! let code = RankMetricCode::from_generators(&f3, 3, 3, &[a, b]).unwrap();
//! let w = code.rank_distribution(Budget::default()).unwrap();
//! assert_eq!(w.to_string(), "(1, 0, 4, 4)");
//! let dual = macwilliams::transform(&w, 3, 3, 3).unwrap();
//! assert_eq!(dual.to_string(), "(1, 38, 888, 1260)");
//! ```

pub mod code;
pub mod constructions;
pub mod covering;
pub mod density;
mod error;
pub mod field;
pub mod macwilliams;
pub mod matrix;
pub mod qcomb;

pub use code::{Budget, EntrySet, RankDistribution, RankMetricCode};
pub use error::{Error, Result};
pub use field::{Elem, ExtensionTower, Field, FieldElement, FieldSpec};
pub use matrix::{Matrix, Subspace};
