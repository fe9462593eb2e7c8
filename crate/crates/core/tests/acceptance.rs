//! Acceptance criteria, one PASS/FAIL line each. Oracles are brute force and
//! live here, independent of the library's closed forms.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankmetric::code::Side;
use rankmetric::constructions::{build_column_anticode, build_mrd};
use rankmetric::covering::{covering_report, dual_distance_bound, external_distance_bound, initial_set_bound, lambda_cover, lower_bound};
use rankmetric::density::{asymptotic_q_limit, census, density_bound_ball, density_bound_cc, density_exact};
use rankmetric::macwilliams::{mrd_distribution, transform, transform_kernel_terms, translate_distribution};
use rankmetric::matrix::enumerate_subspaces;
use rankmetric::qcomb::{nu, q_binomial, q_pow, theta};
use rankmetric::{Budget, Elem, EntrySet, Field, Matrix, RankDistribution, RankMetricCode, Subspace};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const B: Budget = Budget::new(Budget::DEFAULT);

fn code_from(q: u64, n: usize, m: usize, gens: &[&[&[u32]]]) -> RankMetricCode {
    let field = Field::with_order(q).unwrap();
    let gens: Vec<Matrix> = gens
        .iter()
        .map(|g| Matrix::from_rows(&field, &g.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap())
        .collect();
    RankMetricCode::from_generators(&field, n, m, &gens).unwrap()
}

fn all_matrices(field: &Field, n: usize, m: usize) -> Vec<Matrix> {
    let q = field.order();
    let total = (q as usize).pow((n * m) as u32);
    (0..total)
        .map(|mut idx| {
            Matrix::from_fn(field, n, m, |_, _| {
                let e = field.elem((idx % q as usize) as u32);
                idx /= q as usize;
                e
            })
        })
        .collect()
}

fn histogram(n: usize, ranks: impl Iterator<Item = usize>) -> RankDistribution {
    let mut h = vec![0u64; n + 1];
    for r in ranks {
        h[r] += 1;
    }
    RankDistribution::from_u64s(&h)
}

fn codewords(code: &RankMetricCode) -> Vec<Matrix> {
    code.codewords(B).unwrap().collect()
}

// The dual by filtering the whole ambient space through the trace product.
fn brute_dual_words(code: &RankMetricCode) -> Vec<Matrix> {
    let basis = code.basis();
    all_matrices(code.field(), code.n(), code.m())
        .into_iter()
        .filter(|x| basis.iter().all(|b| x.trace_product(b).unwrap().is_zero()))
        .collect()
}

fn brute_distance(n: usize, words: &[Matrix]) -> usize {
    words.iter().filter(|w| !w.is_zero()).map(Matrix::rank).min().unwrap_or(n + 1)
}

fn random_code(rng: &mut ChaCha8Rng, field: &Field, n: usize, m: usize, gens: usize) -> RankMetricCode {
    let q = field.order();
    let vs: Vec<Vec<Elem>> = (0..gens).map(|_| (0..n * m).map(|_| field.elem(rng.gen_range(0..q))).collect()).collect();
    RankMetricCode::from_subspace(n, m, Subspace::from_spanning(field, n * m, &vs)).unwrap()
}

fn c1_worked_example() -> Check {
    let c = code_from(3, 3, 3, &[&[&[0, 0, 1], &[2, 0, 0], &[0, 0, 0]], &[&[2, 0, 0], &[1, 2, 1], &[1, 0, 2]]]);
    let w = histogram(3, codewords(&c).iter().map(Matrix::rank));
    ensure!(w == RankDistribution::from_u64s(&[1, 0, 4, 4]), "W(C) = {w}");
    ensure!(c.rank_distribution(B).unwrap() == w, "library W(C) differs");
    let wd = transform(&w, 3, 3, 3).map_err(|e| e.to_string())?;
    ensure!(wd == RankDistribution::from_u64s(&[1, 38, 888, 1260]), "W(C⊥) = {wd}");
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    ensure!(transform_kernel_terms(3, 3, 3, 3, 0) == big(&[-27, 1053, -9477, 19683]), "j = 0 terms");
    ensure!(transform_kernel_terms(3, 3, 3, 3, 2) == big(&[-27, 81, 0, 0]), "j = 2 terms");
    ensure!(transform_kernel_terms(3, 3, 3, 3, 3) == big(&[-27, 0, 0, 0]), "j = 3 terms");
    let bracket: BigInt = [0usize, 2, 3]
        .iter()
        .map(|&j| BigInt::from(w.get(j).clone()) * transform_kernel_terms(3, 3, 3, 3, j).into_iter().sum::<BigInt>())
        .sum();
    ensure!(bracket == BigInt::from(9 * 1260), "(1/9)[...] bracket is {bracket}");
    let dual = histogram(3, brute_dual_words(&c).iter().map(Matrix::rank));
    ensure!(dual == wd, "brute-force dual distribution {dual}");
    Ok(())
}

fn c2_involution() -> Check {
    let f2 = Field::prime(2).unwrap();
    let mut count = 0;
    for k in 0..=4 {
        for s in enumerate_subspaces(&f2, 4, k) {
            count += 1;
            let c = RankMetricCode::from_subspace(2, 2, s).unwrap();
            let w = histogram(2, codewords(&c).iter().map(Matrix::rank));
            let dual = histogram(2, brute_dual_words(&c).iter().map(Matrix::rank));
            let t = transform(&w, 2, 2, 2).map_err(|e| e.to_string())?;
            ensure!(t == dual, "transform {t} vs dual {dual} for W = {w}");
            let back = transform(&t, 2, 2, 2).map_err(|e| e.to_string())?;
            ensure!(back == w, "transform twice gives {back} for {w}");
        }
    }
    ensure!(count == 67, "visited {count} subspaces");
    Ok(())
}

fn c3_mrd() -> Check {
    ensure!(mrd_distribution(2, 3, 2, 3).unwrap() == RankDistribution::from_u64s(&[1, 0, 26]), "(1,0,26) example");
    for q in [2u64, 3] {
        let field = Field::prime(q).unwrap();
        for m in 1..=3 {
            for n in 1..=m {
                for d in 1..=n {
                    let tag = format!("q={q} n={n} m={m} d={d}");
                    let c = build_mrd(&field, n, m, d).map_err(|e| format!("{tag}: {e}"))?;
                    ensure!(c.is_mrd(B).unwrap(), "{tag}: not MRD");
                    let words = codewords(&c);
                    ensure!(brute_distance(n, &words) == d, "{tag}: distance {}", brute_distance(n, &words));
                    let dual = brute_dual_words(&c);
                    ensure!(brute_distance(n, &dual) == n - d + 2, "{tag}: dual distance {}", brute_distance(n, &dual));
                    let w = histogram(n, words.iter().map(Matrix::rank));
                    ensure!(w == mrd_distribution(n, m, d, q).unwrap(), "{tag}: distribution {w}");
                }
            }
        }
    }
    Ok(())
}

fn c4_shortening() -> Check {
    for q in [2u64, 3] {
        let field = Field::prime(q).unwrap();
        for m in 1..=3 {
            for n in 1..=m {
                for d in 1..=n {
                    let c = build_mrd(&field, n, m, d).unwrap();
                    let spaces: Vec<Subspace> = codewords(&c).iter().map(Matrix::column_space).collect();
                    for u in d - 1..=n {
                        for s in enumerate_subspaces(&field, n, u) {
                            let brute = spaces.iter().filter(|cs| cs.is_subspace_of(&s)).count();
                            let want = q_pow(q, (m * (u + 1 - d)) as u64);
                            ensure!(BigUint::from(brute) == want, "q={q} n={n} m={m} d={d} u={u}: |C(U)| = {brute}");
                            ensure!(c.shorten(&s).unwrap().size() == want, "library shortening differs");
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn brute_covering_radius(code: &RankMetricCode) -> usize {
    let words = codewords(code);
    all_matrices(code.field(), code.n(), code.m())
        .iter()
        .map(|x| words.iter().map(|c| x.rank_distance(c).unwrap()).min().unwrap())
        .max()
        .unwrap()
}

fn c5_covering() -> Check {
    let exrem = code_from(2, 2, 3, &[&[&[1, 0, 1], &[0, 1, 1]], &[&[1, 1, 1], &[1, 0, 1]], &[&[0, 1, 1], &[1, 0, 0]]]);
    let bounds = |c: &RankMetricCode| {
        (
            dual_distance_bound(c, B).unwrap(),
            external_distance_bound(c, B).unwrap(),
            initial_set_bound(c, B).unwrap(),
        )
    };
    ensure!(bounds(&exrem) == (1, 1, 1), "exrem bounds {:?}", bounds(&exrem));
    ensure!(brute_covering_radius(&exrem) == 1, "exrem radius {}", brute_covering_radius(&exrem));
    ensure!(exrem.covering_radius_exact(B).unwrap() == 1, "library exrem radius");
    let coverbound = code_from(
        2,
        3,
        3,
        &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]], &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]], &[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]],
    );
    ensure!(bounds(&coverbound) == (3, 3, 2), "coverbound bounds {:?}", bounds(&coverbound));
    let f2 = Field::prime(2).unwrap();
    for k in 0..=4 {
        for s in enumerate_subspaces(&f2, 4, k) {
            let c = RankMetricCode::from_subspace(2, 2, s).unwrap();
            let rho = brute_covering_radius(&c);
            let r = covering_report(&c, B).map_err(|e| e.to_string())?;
            ensure!(r.exact == Some(rho), "library radius {:?} vs {rho}", r.exact);
            let d = brute_distance(2, &codewords(&c));
            ensure!(lower_bound(d) <= rho, "lower bound {} > {rho}", lower_bound(d));
            ensure!(rho <= r.best_upper_bound(), "radius {rho} above bounds {r:?}");
        }
    }
    Ok(())
}

fn c6_translate() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f2 = Field::prime(2).unwrap();
    let (n, m) = (2, 3);
    let ambient = all_matrices(&f2, n, m);
    let mut codes = 0;
    while codes < 50 {
        let k = rng.gen_range(1..=4);
        let c = random_code(&mut rng, &f2, n, m, k);
        if c.dim() != k {
            continue;
        }
        codes += 1;
        let words = codewords(&c);
        let d_dual = brute_distance(n, &brute_dual_words(&c));
        for _ in 0..10 {
            let shift = &ambient[rng.gen_range(0..ambient.len())];
            let coset = histogram(n, words.iter().map(|w| w.add(shift).unwrap().rank()));
            let known = (n + 1).saturating_sub(d_dual);
            let prefix = &coset.counts()[..known];
            let full = translate_distribution(prefix, n, m, 2, &c.size(), d_dual).map_err(|e| e.to_string())?;
            ensure!(full == coset, "dim {k}, d⊥ {d_dual}: predicted {full}, brute force {coset}");
        }
    }
    Ok(())
}

fn c7_anticodes() -> Check {
    for q in [2u64, 3] {
        let field = Field::prime(q).unwrap();
        let (n, m) = (3, 3);
        for u in 0..=n {
            for s in enumerate_subspaces(&field, n, u) {
                let c = build_column_anticode(&s, m).unwrap();
                let maxrk = codewords(&c).iter().map(Matrix::rank).max().unwrap();
                ensure!(c.dim() == m * maxrk, "dim {} vs m * maxrk {}", c.dim(), m * maxrk);
                ensure!(c.is_optimal_anticode(B).unwrap(), "not reported optimal");
                let w = c.optimal_anticode_witness(B).unwrap();
                if 0 < u && u < n {
                    let w = w.ok_or("no witness")?;
                    ensure!(w.side == Side::Column && w.space == s, "witness {w:?}");
                }
                ensure!(c.dual() == build_column_anticode(&s.orthogonal(), m).unwrap(), "dual is not the U* anticode");
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let mut tested = 0;
    while tested < 200 {
        let (field, n, m) = if tested % 2 == 0 { (&f2, 3, 4) } else { (&f3, 2, 3) };
        let gens = rng.gen_range(1..=n * m);
        let c = random_code(&mut rng, field, n, m, gens);
        if c.is_zero() {
            continue;
        }
        tested += 1;
        let maxrk = codewords(&c).iter().map(Matrix::rank).max().unwrap();
        let lam = lambda_cover(&c.initial_set().unwrap(), n, m).unwrap();
        ensure!(maxrk >= lam, "maxrk {maxrk} < λ(in(C)) {lam}");
    }
    Ok(())
}

// Fewest lines over every choice of row set and column set.
fn brute_line_cover(s: &EntrySet) -> usize {
    let (a, b) = (s.rows(), s.cols());
    let mut best = usize::MAX;
    for rows in 0u32..1 << a {
        for cols in 0u32..1 << b {
            if s.iter().all(|(i, j)| rows >> i & 1 == 1 || cols >> j & 1 == 1) {
                best = best.min((rows.count_ones() + cols.count_ones()) as usize);
            }
        }
    }
    best
}

fn set_from_mask(rows: usize, cols: usize, mask: u64) -> EntrySet {
    EntrySet::from_positions(rows, cols, (0..rows * cols).filter(|b| mask >> b & 1 == 1).map(|b| (b / cols, b % cols))).unwrap()
}

fn c8_lambda() -> Check {
    for a in 1..=3 {
        for b in 1..=3 {
            for mask in 0u64..1 << (a * b) {
                let s = set_from_mask(a, b, mask);
                let l = lambda_cover(&s, a, b).unwrap();
                ensure!(l == brute_line_cover(&s), "{s}: λ = {l}, brute force {}", brute_line_cover(&s));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let s = set_from_mask(5, 5, rng.gen_range(0..1u64 << 25));
        let l = lambda_cover(&s, 5, 5).unwrap();
        ensure!(l == brute_line_cover(&s), "{s}: λ = {l}, brute force {}", brute_line_cover(&s));
    }
    Ok(())
}

fn c9_density() -> Check {
    let f2 = Field::prime(2).unwrap();
    // brute force: 2-dim spaces of 2x2 binary matrices with all three nonzero elements invertible
    let words = all_matrices(&f2, 2, 2);
    let mut spaces = HashSet::new();
    let mut good = HashSet::new();
    for a in words.iter().filter(|w| !w.is_zero()) {
        for b in words.iter().filter(|w| !w.is_zero() && *w != a) {
            let s = Subspace::from_spanning(&f2, 4, &[a.vectorize().to_vec(), b.vectorize().to_vec()]);
            if [a.clone(), b.clone(), a.add(b).unwrap()].iter().all(|x| x.rank() == 2) {
                good.insert(s.clone());
            }
            spaces.insert(s);
        }
    }
    ensure!((spaces.len(), good.len()) == (35, 2), "brute force found {} of {}", good.len(), spaces.len());
    let c = census(&f2, 2, 2, 2, 1_000_000).map_err(|e| e.to_string())?;
    ensure!(c.total == 35 && c.exact_distance == 2, "census {c:?}");
    ensure!(c.ball_avoiding == c.common_complements, "oracles disagree: {c:?}");
    let delta = density_exact(2, 2, 2, 2).map_err(|e| e.to_string())?;
    let expected = BigRational::new(2.into(), 35.into());
    ensure!(delta == expected, "density {delta}");
    let cc = density_bound_cc(2, 2, 2, 2).unwrap();
    let ball = density_bound_ball(2, 2, 2, 2).unwrap();
    ensure!(cc >= delta && ball >= delta, "bounds {cc}, {ball} below {delta}");
    let a = asymptotic_q_limit(2, 2, 2).unwrap();
    let series = BigRational::one() - BigRational::one() + BigRational::new(1.into(), 2.into());
    ensure!(a.limit == series && a.limit == BigRational::new(1.into(), 2.into()), "limit {}", a.limit);
    Ok(())
}

// Every `k`-dimensional subspace of F_2^N, found as spans of vector tuples.
fn spans(field: &Field, big_n: usize, k: usize) -> Vec<Subspace> {
    let vectors: Vec<Vec<Elem>> = all_matrices(field, 1, big_n).iter().map(|v| v.vectorize().to_vec()).collect();
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let tuple: Vec<Vec<Elem>> = idx.iter().map(|&i| vectors[i].clone()).collect();
        let s = Subspace::from_spanning(field, big_n, &tuple);
        if s.dim() == k && found.insert(s.basis().to_vec()) {
            out.push(s);
        }
        let Some(p) = (0..k).find(|&p| idx[p] + 1 < vectors.len()) else { break };
        idx[p] += 1;
        idx[..p].fill(0);
    }
    out
}

fn meet_dim(a: &Subspace, b: &Subspace) -> usize {
    let both: Vec<Vec<Elem>> = a.basis().iter().chain(b.basis()).cloned().collect();
    a.dim() + b.dim() - Subspace::from_spanning(a.field(), a.ambient_dim(), &both).dim()
}

fn c10_nu_theta() -> Check {
    let f2 = Field::prime(2).unwrap();
    for big_n in 1..=4usize {
        let by_dim: Vec<Vec<Subspace>> = (0..=big_n).map(|k| spans(&f2, big_n, k)).collect();
        for (k, level) in by_dim.iter().enumerate() {
            let want = q_binomial(big_n as i64, k as i64, 2).unwrap();
            ensure!(BigUint::from(level.len()) == want, "[{big_n} {k}]_2 = {want}, found {}", level.len());
        }
        // theta: ordered pairs of u-spaces by intersection dimension
        for (u, level) in by_dim.iter().enumerate() {
            let mut counts = vec![0u64; u + 1];
            for a in level {
                for b in level {
                    counts[meet_dim(a, b)] += 1;
                }
            }
            let mut sum = BigUint::zero();
            for (i, &c) in counts.iter().enumerate() {
                if 2 * u > big_n + i {
                    ensure!(c == 0, "pairs with impossible intersection {i}");
                    continue;
                }
                let t = theta(big_n, u, i, 2).unwrap();
                ensure!(t == BigUint::from(c), "θ({big_n},{u},{i}) = {t}, brute force {c}");
                sum += t;
            }
            let g = q_binomial(big_n as i64, u as i64, 2).unwrap();
            ensure!(sum == &g * &g, "Σ θ({big_n},{u},·) = {sum}");
        }
        // nu: k-spaces meeting both of two (N-k)-spaces nontrivially
        for k in 0..=big_n {
            let c = big_n - k;
            for a in &by_dim[c] {
                for b in &by_dim[c] {
                    let ell = meet_dim(a, b);
                    let brute = by_dim[k].iter().filter(|w| meet_dim(w, a) > 0 && meet_dim(w, b) > 0).count();
                    let formula = nu(big_n, k, ell, 2).map_err(|e| e.to_string())?;
                    ensure!(formula == BigUint::from(brute), "ν({big_n},{k},{ell}) = {formula}, brute force {brute}");
                }
            }
        }
    }
    Ok(())
}

type Criterion = (u32, &'static str, fn() -> Check, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "MacWilliams worked example", c1_worked_example, Some(Duration::from_secs(1))),
        (2, "involution and duality on all 67 subspaces of F_2^{2x2}", c2_involution, Some(Duration::from_secs(10))),
        (3, "MRD construction for q in {2,3}, n <= m <= 3", c3_mrd, Some(Duration::from_secs(60))),
        (4, "shortening law for MRD codes", c4_shortening, None),
        (5, "covering radius bounds", c5_covering, Some(Duration::from_secs(30))),
        (6, "translate formula on random cosets", c6_translate, None),
        (7, "anticode suite and Meshulam inequality", c7_anticodes, None),
        (8, "lambda against exhaustive line covers", c8_lambda, None),
        (9, "density census at (2,2,2,2)", c9_density, Some(Duration::from_secs(5))),
        (10, "nu and theta against subspace counts", c10_nu_theta, None),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(()), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        let limit = limit.map_or_else(|| "no limit".to_string(), |l| format!("limit {l:?}"));
        match outcome {
            Ok(()) => println!("PASS {id:>2}  {name}  ({elapsed:.2?}, {limit})"),
            Err(e) => {
                failed += 1;
                println!("FAIL {id:>2}  {name}  ({elapsed:.2?}, {limit}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
