use std::fs;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use rankmetric::code::io::parse_code;
use rankmetric::macwilliams::{transform, transform_kernel_terms};
use rankmetric::{Budget, Error, RankDistribution, Result};
use rankmetric_cli::verify::{self, Level, Options};

/// The MacWilliams transform with the sign of every odd-`u` summand flipped.
fn sign_flipped(w: &RankDistribution, n: usize, m: usize, q: u64) -> Result<RankDistribution> {
    let size = BigInt::from(w.total());
    let mut out = Vec::new();
    for i in 0..=n {
        let mut acc = BigInt::zero();
        for (j, wj) in w.counts().iter().enumerate() {
            let terms = transform_kernel_terms(n, m, q, i, j);
            let inner: BigInt = terms.into_iter().enumerate().map(|(u, t)| if u % 2 == 1 { -t } else { t }).sum();
            acc += BigInt::from(wj.clone()) * inner;
        }
        if !(&acc % &size).is_zero() || acc.is_negative() {
            return Err(Error::Invariant(format!("W_{i} = {acc}/{size}")));
        }
        out.push((acc / &size).to_biguint().unwrap());
    }
    Ok(RankDistribution::new(out))
}

fn options(level: Level, dir: &std::path::Path, transform: verify::TransformFn) -> Options {
    Options {
        level,
        seed: 1,
        dump_dir: dir.join("dump"),
        budget: Budget::new(Budget::DEFAULT),
        transform,
    }
}

#[test]
fn desk_level_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = verify::run(&options(Level::Desk, dir.path(), transform));
    assert!(report.passed(), "{report}");
    assert!(!dir.path().join("dump").exists());
}

#[test]
fn sign_mutation_is_caught_on_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let report = verify::run(&options(Level::Desk, dir.path(), sign_flipped));
    assert!(!report.passed());
    let mw = &report.checks[0];
    assert!(mw.name.contains("MacWilliams"));
    let first = &mw.failures[0];
    assert!(first.case.starts_with("worked example"), "{}", first.case);
    assert_eq!(first.expected, "(1, 38, 888, 1260)");
    let text = fs::read_to_string(first.file.as_ref().unwrap()).unwrap();
    let code = parse_code(&text).unwrap();
    let w = code.rank_distribution(Budget::new(1000)).unwrap();
    assert_eq!(w, RankDistribution::from_u64s(&[1, 0, 4, 4]));
    assert!(text.contains("expected (1, 38, 888, 1260)"));
}

#[test]
fn exhaustive_level_covers_every_subspace_of_the_2x2_binary_space() {
    let dir = tempfile::tempdir().unwrap();
    let report = verify::run(&options(Level::Exhaustive, dir.path(), transform));
    assert!(report.passed(), "{report}");
    // 3 fixed codes, 67 subspaces of F_2^{2x2}, 2825 of F_2^{2x3}
    assert_eq!(report.checks[0].cases, 3 + 67 + 2825);
}

#[test]
fn report_is_deterministic_in_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = verify::run(&options(Level::Desk, dir.path(), transform)).to_string();
    let b = verify::run(&options(Level::Desk, dir.path(), transform)).to_string();
    assert_eq!(a, b);
}
