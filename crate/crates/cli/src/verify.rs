//! Cross-oracle verification: closed forms against brute force.
//!
//! The MacWilliams transform is injectable so that a deliberately broken
//! one can be shown to be caught.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use rankmetric::code::io::write_code;
use rankmetric::constructions::build_mrd;
use rankmetric::covering::covering_report;
use rankmetric::density::{census, density_bound_ball, density_bound_cc};
use rankmetric::macwilliams::mrd_distribution;
use rankmetric::matrix::enumerate_subspaces;
use rankmetric::qcomb::{nu, q_binomial, theta};
use rankmetric::{Budget, Elem, Field, Matrix, RankDistribution, RankMetricCode, Result, Subspace};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Fixed examples plus seeded random samples; a few seconds.
    Desk,
    /// Every subspace of F_2^{2x2} and F_2^{2x3}, and larger fixed families.
    Exhaustive,
}

pub type TransformFn = fn(&RankDistribution, usize, usize, u64) -> Result<RankDistribution>;

pub struct Options {
    pub level: Level,
    pub seed: u64,
    pub dump_dir: PathBuf,
    pub budget: Budget,
    pub transform: TransformFn,
}

fn as_string<S: Serializer>(x: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub expected: String,
    pub actual: String,
    /// Code file reproducing the failure, when the case is a code.
    pub file: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    #[serde(serialize_with = "as_string")]
    pub cases: usize,
    pub failures: Vec<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.failures.is_empty() {
                writeln!(f, "PASS {} ({} cases)", c.name, c.cases)?;
                continue;
            }
            writeln!(f, "FAIL {} ({} of {} cases)", c.name, c.failures.len(), c.cases)?;
            for x in &c.failures {
                writeln!(f, "  {}: expected {}, got {}", x.case, x.expected, x.actual)?;
                if let Some(p) = &x.file {
                    writeln!(f, "    written to {}", p.display())?;
                }
            }
        }
        Ok(())
    }
}

struct Check<'a> {
    name: &'static str,
    slug: &'static str,
    dump_dir: &'a Path,
    cases: usize,
    failures: Vec<Counterexample>,
}

impl<'a> Check<'a> {
    fn new(name: &'static str, slug: &'static str, dump_dir: &'a Path) -> Self {
        Check {
            name,
            slug,
            dump_dir,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, case: &str, expected: String, actual: String, code: Option<&RankMetricCode>) {
        let file = code.and_then(|c| {
            let path = self.dump_dir.join(format!("{}-{}.rankcode", self.slug, self.failures.len() + 1));
            let comments = [
                format!("counterexample for {}: {case}", self.name),
                format!("expected {expected}"),
                format!("actual {actual}"),
            ];
            fs::create_dir_all(self.dump_dir).ok()?;
            fs::write(&path, write_code(c, &comments)).ok()?;
            Some(path)
        });
        self.failures.push(Counterexample {
            case: case.to_string(),
            expected,
            actual,
            file,
        });
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
        }
    }
}

fn show<T: fmt::Display>(r: &Result<T>) -> String {
    match r {
        Ok(x) => x.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn code_from(q: u64, n: usize, m: usize, gens: &[&[&[u32]]]) -> RankMetricCode {
    let field = Field::with_order(q).expect("fixed example field");
    let gens: Vec<Matrix> = gens
        .iter()
        .map(|g| Matrix::from_rows(&field, &g.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("fixed example matrix"))
        .collect();
    RankMetricCode::from_generators(&field, n, m, &gens).expect("fixed example code")
}

/// The worked examples first, then sampled or exhaustive families.
fn corpus(level: Level, seed: u64) -> Vec<(String, RankMetricCode)> {
    let mut out = vec![
        (
            "worked example (q=3, 3x3, dim 2)".to_string(),
            code_from(3, 3, 3, &[&[&[0, 0, 1], &[2, 0, 0], &[0, 0, 0]], &[&[2, 0, 0], &[1, 2, 1], &[1, 0, 2]]]),
        ),
        (
            "exrem (q=2, 2x3, dim 3)".to_string(),
            code_from(2, 2, 3, &[&[&[1, 0, 1], &[0, 1, 1]], &[&[1, 1, 1], &[1, 0, 1]], &[&[0, 1, 1], &[1, 0, 0]]]),
        ),
        (
            "coverbound (q=2, 3x3, dim 3)".to_string(),
            code_from(
                2,
                3,
                3,
                &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]], &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]], &[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]],
            ),
        ),
    ];
    let f2 = Field::prime(2).expect("F_2");
    match level {
        Level::Desk => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f3 = Field::prime(3).expect("F_3");
            for i in 0..40 {
                let (field, n, m) = if i % 2 == 0 { (&f2, 2, 3) } else { (&f3, 2, 2) };
                let q = field.order();
                let gens = rng.gen_range(0..=n * m);
                let vs: Vec<Vec<Elem>> = (0..gens).map(|_| (0..n * m).map(|_| field.elem(rng.gen_range(0..q))).collect()).collect();
                let s = Subspace::from_spanning(field, n * m, &vs);
                let code = RankMetricCode::from_subspace(n, m, s).expect("random code shape");
                out.push((format!("random #{i} (q={q}, {n}x{m}, dim {})", code.dim()), code));
            }
        }
        Level::Exhaustive => {
            for (n, m) in [(2, 2), (2, 3)] {
                for k in 0..=n * m {
                    for (i, s) in enumerate_subspaces(&f2, n * m, k).enumerate() {
                        let code = RankMetricCode::from_subspace(n, m, s).expect("subspace shape");
                        out.push((format!("F_2^{{{n}x{m}}} dim {k} #{i}"), code));
                    }
                }
            }
        }
    }
    out
}

fn check_macwilliams(opts: &Options, codes: &[(String, RankMetricCode)]) -> CheckOutcome {
    let mut c = Check::new("MacWilliams transform vs dual enumeration", "macwilliams", &opts.dump_dir);
    for (name, code) in codes {
        c.cases += 1;
        let q = u64::from(code.field().order());
        let (n, m) = (code.n(), code.m());
        let (w, wd) = match (code.rank_distribution(opts.budget), code.dual().rank_distribution(opts.budget)) {
            (Ok(w), Ok(wd)) => (w, wd),
            _ => continue,
        };
        let t = (opts.transform)(&w, n, m, q);
        if t.as_ref().ok() != Some(&wd) {
            c.record(name, wd.to_string(), show(&t), Some(code));
            continue;
        }
        let back = (opts.transform)(&wd, n, m, q);
        if back.as_ref().ok() != Some(&w) {
            c.record(&format!("{name}, transform applied twice"), w.to_string(), show(&back), Some(code));
        }
    }
    c.finish()
}

fn check_covering(opts: &Options, codes: &[(String, RankMetricCode)]) -> CheckOutcome {
    let mut c = Check::new("covering radius bounds vs exact radius", "covering", &opts.dump_dir);
    for (name, code) in codes {
        c.cases += 1;
        match covering_report(code, opts.budget) {
            Ok(r) => {
                if let Some(rho) = r.exact {
                    if rho < r.lower_bound || rho > r.best_upper_bound() {
                        c.record(
                            name,
                            format!("{} <= radius <= {}", r.lower_bound, r.best_upper_bound()),
                            rho.to_string(),
                            Some(code),
                        );
                    }
                }
            }
            Err(rankmetric::Error::BudgetExceeded { .. }) => {}
            Err(e) => c.record(name, "consistent bounds".into(), e.to_string(), Some(code)),
        }
    }
    c.finish()
}

fn check_mrd(opts: &Options) -> CheckOutcome {
    let mut c = Check::new("MRD distribution vs enumeration", "mrd", &opts.dump_dir);
    let qs: &[u64] = match opts.level {
        Level::Desk => &[2, 3],
        Level::Exhaustive => &[2, 3, 4, 5],
    };
    for &q in qs {
        let field = Field::with_order(q).expect("prime power");
        let max_m = if q <= 3 { 3 } else { 2 };
        for m in 1..=max_m {
            for n in 1..=m {
                for d in 1..=n {
                    c.cases += 1;
                    let case = format!("q={q} n={n} m={m} d={d}");
                    let code = match build_mrd(&field, n, m, d) {
                        Ok(code) => code,
                        Err(e) => {
                            c.record(&case, "an MRD code".into(), e.to_string(), None);
                            continue;
                        }
                    };
                    let w = code.rank_distribution(opts.budget);
                    let want = mrd_distribution(n, m, d, q);
                    if w.as_ref().ok() != want.as_ref().ok() || w.is_err() {
                        c.record(&case, show(&want), show(&w), Some(&code));
                    }
                }
            }
        }
    }
    c.finish()
}

fn check_census(opts: &Options) -> CheckOutcome {
    let mut c = Check::new("density census: ball avoidance vs common complements", "census", &opts.dump_dir);
    let instances: &[(u64, usize, usize, usize)] = match opts.level {
        Level::Desk => &[(2, 2, 2, 2), (3, 2, 2, 2)],
        Level::Exhaustive => &[(2, 2, 2, 2), (3, 2, 2, 2), (4, 2, 2, 2), (2, 2, 3, 2), (2, 2, 3, 1)],
    };
    for &(q, n, m, d) in instances {
        c.cases += 1;
        let case = format!("q={q} n={n} m={m} d={d}");
        let field = Field::with_order(q).expect("prime power");
        let result = census(&field, n, m, d, 1_000_000).and_then(|cen| {
            cen.check_invariants()?;
            Ok(cen)
        });
        match result {
            Ok(cen) => {
                let x = cen.density();
                let cc = density_bound_cc(q, n, m, d);
                let ball = density_bound_ball(q, n, m, d);
                match (cc, ball) {
                    (Ok(cc), Ok(ball)) if x <= cc && x <= ball => {}
                    (cc, ball) => c.record(&case, format!("density {x} below both bounds"), format!("{}, {}", show(&cc), show(&ball)), None),
                }
            }
            Err(e) => c.record(&case, "agreeing counts".into(), e.to_string(), None),
        }
    }
    c.finish()
}

fn meet_dim(a: &Subspace, b: &Subspace) -> usize {
    let both: Vec<Vec<Elem>> = a.basis().iter().chain(b.basis()).cloned().collect();
    a.dim() + b.dim() - Subspace::from_spanning(a.field(), a.ambient_dim(), &both).dim()
}

fn check_nu_theta(opts: &Options) -> CheckOutcome {
    let mut c = Check::new("nu and theta vs subspace counts", "nu-theta", &opts.dump_dir);
    let max = match opts.level {
        Level::Desk => 3,
        Level::Exhaustive => 4,
    };
    let f2 = Field::prime(2).expect("F_2");
    for big_n in 1..=max {
        let levels: Vec<Vec<Subspace>> = (0..=big_n).map(|k| enumerate_subspaces(&f2, big_n, k).collect()).collect();
        for (u, level) in levels.iter().enumerate() {
            let mut counts = vec![0usize; u + 1];
            for a in level {
                for b in level {
                    counts[meet_dim(a, b)] += 1;
                }
            }
            for (i, &brute) in counts.iter().enumerate().filter(|(i, _)| 2 * u <= big_n + i) {
                c.cases += 1;
                let t = theta(big_n, u, i, 2);
                if t.as_ref().map(|t| t.to_string()).ok() != Some(brute.to_string()) {
                    c.record(&format!("theta({big_n},{u},{i})"), brute.to_string(), show(&t), None);
                }
            }
            c.cases += 1;
            let g = q_binomial(big_n as i64, u as i64, 2).expect("q-binomial");
            if level.len().to_string() != g.to_string() {
                c.record(&format!("[{big_n} {u}]_2"), g.to_string(), level.len().to_string(), None);
            }
        }
        for k in 0..=big_n {
            let cdim = big_n - k;
            for a in &levels[cdim] {
                for b in &levels[cdim] {
                    c.cases += 1;
                    let ell = meet_dim(a, b);
                    let brute = levels[k].iter().filter(|w| meet_dim(w, a) > 0 && meet_dim(w, b) > 0).count();
                    let f = nu(big_n, k, ell, 2);
                    if f.as_ref().map(|x| x.to_string()).ok() != Some(brute.to_string()) {
                        c.record(&format!("nu({big_n},{k},{ell})"), brute.to_string(), show(&f), None);
                    }
                }
            }
        }
    }
    c.finish()
}

pub fn run(opts: &Options) -> Report {
    let codes = corpus(opts.level, opts.seed);
    Report {
        level: opts.level,
        checks: vec![
            check_macwilliams(opts, &codes),
            check_covering(opts, &codes),
            check_mrd(opts),
            check_census(opts),
            check_nu_theta(opts),
        ],
    }
}
