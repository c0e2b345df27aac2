//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mindist::bounds::{gv_experiment, GvExperimentConfig};
use mindist::ensemble::{
    compare_cdfs, enumerate_code_law, indicator_product_exact, sample_dmin, LawMode, SamplerConfig, DEFAULT_BUDGET,
};
use mindist::exact::{gumbel_sup_distance, rho, rho_ratio_bounds, DEFAULT_DIGITS};
use mindist::moments::{invert_moments, inversion_system, z_sample, ztilde_moment, MomentModel, MomentVector, TailBound, ZMethod};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Raw moments `1..=h` of a sum of `count` i.i.d. Bernoulli(p), by
/// binomial convolution and doubling.
fn binomial_moments(count: u64, p: &BigRational, h: usize) -> Vec<BigRational> {
    let binom: Vec<Vec<BigInt>> = (0..=h)
        .map(|m| {
            let mut row = vec![BigInt::one(); m + 1];
            for i in 1..m {
                row[i] = (0..i).fold(BigInt::one(), |acc, j| acc * (m - j) / (j + 1));
            }
            row
        })
        .collect();
    // index 0 holds E[X^0] = 1
    let convolve = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        (0..=h)
            .map(|m| {
                (0..=m)
                    .map(|i| BigRational::from_integer(binom[m][i].clone()) * &a[i] * &b[m - i])
                    .sum()
            })
            .collect()
    };
    let mut base: Vec<BigRational> = (0..=h).map(|m| if m == 0 { BigRational::one() } else { p.clone() }).collect();
    let mut acc: Vec<BigRational> = (0..=h).map(|m| if m == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    let mut c = count;
    while c > 0 {
        if c & 1 == 1 {
            acc = convolve(&acc, &base);
        }
        base = convolve(&base, &base);
        c >>= 1;
    }
    acc
}

fn binomial_model_identity() -> Outcome {
    let mut cases = 0;
    for q in [2u32, 3, 4] {
        for k in 1..=6usize {
            let classes = (q.pow(k as u32) as u64 - 1) / (q as u64 - 1);
            for n in k..=12usize {
                for d in 0..=n {
                    let p = rho(q, n, d).map_err(|e| e.to_string())?.into_inner();
                    let reference = binomial_moments(classes, &p, 6);
                    for m in 1..=6usize {
                        let scale = BigRational::from_integer(BigInt::from(q - 1).pow(m as u32));
                        let got = ztilde_moment(q, n, k, d, m).map_err(|e| e.to_string())?;
                        check(got == &reference[m] * scale, || format!("q={q} k={k} n={n} d={d} m={m}"))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} exact equalities"))
}

fn subspace_uniformity() -> Outcome {
    let mut grid: Vec<(u32, usize, usize)> = Vec::new();
    for n in 1..=5 {
        for k in 1..=3.min(n) {
            grid.push((2, n, k));
        }
    }
    for n in 1..=4 {
        for k in 1..=2.min(n) {
            grid.push((3, n, k));
        }
    }
    for &(q, n, k) in &grid {
        let m = enumerate_code_law(q, n, k, LawMode::AllMatrices).map_err(|e| e.to_string())?;
        let s = enumerate_code_law(q, n, k, LawMode::AllSubspaces).map_err(|e| e.to_string())?;
        check(m == s, || format!("laws differ at q={q} n={n} k={k}"))?;
    }
    Ok(format!("{} (q, n, k) triples", grid.len()))
}

fn ratio_sandwich() -> Outcome {
    let mut cases = 0;
    for q in [2u32, 3, 4, 5] {
        for n in 1..=200usize {
            let dmax = (0.9 * (1.0 - 1.0 / q as f64) * n as f64).floor() as usize;
            for d in 1..=dmax {
                let sqrt = (d as f64).sqrt().ceil() as usize;
                let mut ts = vec![1, 2, 3, sqrt];
                ts.sort_unstable();
                ts.dedup();
                for t in ts.into_iter().filter(|&t| t <= d) {
                    let b = rho_ratio_bounds(q, n, d, t).map_err(|e| format!("q={q} n={n} d={d} t={t}: {e}"))?;
                    check(b.holds(), || format!("sandwich fails at q={q} n={n} d={d} t={t}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} exact inequalities"))
}

fn moment_inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut recovered = 0;
    for h in 1..=8usize {
        for _ in 0..25 {
            let weights: Vec<i64> = (0..h).map(|_| rng.gen_range(0..50)).collect();
            let total: i64 = weights.iter().sum::<i64>().max(1);
            let masses: Vec<BigRational> = weights.iter().map(|&w| ratio(w, total)).collect();
            let u = MomentVector::from_masses(&masses, h);
            let v = invert_moments(&u, h, TailBound::None).map_err(|e| e.to_string())?;
            check(v.exact.as_deref() == Some(&masses[..]), || format!("h={h}: masses not recovered"))?;
            recovered += 1;
        }
    }
    for h in 1..=24 {
        let sys = inversion_system(h).map_err(|e| e.to_string())?;
        check(sys.product_is_identity(), || format!("B B^-1 != I at h={h}"))?;
        check(sys.closed_form_matches(), || format!("closed form differs at h={h}"))?;
    }
    let u = MomentVector::exact(MomentModel::Given, vec![ratio(2, 1), ratio(5, 1), ratio(14, 1)]);
    let v = invert_moments(&u, 3, TailBound::None).map_err(|e| e.to_string())?;
    check(v.exact == Some(vec![ratio(1, 2), BigRational::zero(), ratio(1, 2)]), || "two-point law".into())?;
    Ok(format!("{recovered} distributions recovered, B^-1 checked for h <= 24"))
}

fn indicator_products() -> Outcome {
    let tuples: Vec<(u32, Vec<Vec<u16>>)> = vec![
        (2, vec![vec![1]]),
        (2, vec![vec![1, 0], vec![0, 1]]),
        (2, vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]),
        (3, vec![vec![1, 2], vec![0, 1]]),
        (3, vec![vec![1, 0, 0], vec![1, 1, 0], vec![2, 0, 1]]),
        (4, vec![vec![1, 2], vec![1, 3]]),
    ];
    let mut cases = 0;
    for (q, vs) in &tuples {
        for n in 1..=4usize {
            for d in 0..=n {
                let got = indicator_product_exact(*q, n, d, vs).map_err(|e| e.to_string())?;
                let p = rho(*q, n, d).map_err(|e| e.to_string())?.into_inner();
                check(*got.value() == Pow::pow(&p, vs.len() as u32), || {
                    format!("q={q} n={n} d={d} tuple {vs:?}")
                })?;
                cases += 1;
            }
        }
    }
    let triple = indicator_product_exact(2, 2, 1, &[vec![1, 0], vec![0, 1], vec![1, 1]]).map_err(|e| e.to_string())?;
    let rho_sq = Pow::pow(rho(2, 2, 1).map_err(|e| e.to_string())?.into_inner(), 2u32);
    check(*triple.value() == ratio(7, 16), || format!("triple gave {triple}"))?;
    check(rho_sq == ratio(9, 16) && *triple.value() < rho_sq, || "suppression".into())?;
    Ok(format!("{cases} independent products; dependent triple 7/16 < 9/16"))
}

fn dmin_matches_wmin() -> Outcome {
    let cfg = SamplerConfig::new(2, 64, 32, 100_000, 20_240_601).workers(workers());
    let r = compare_cdfs(&cfg).map_err(|e| e.to_string())?;
    let peak_se = r.rows.iter().map(|row| row.stderr).fold(0.0, f64::max);
    check(r.sup <= 0.015, || format!("sup {:.5} at d={} exceeds 0.015", r.sup, r.argmax_d))?;
    Ok(format!("sup {:.5} at d={} (peak stderr {:.5})", r.sup, r.argmax_d, peak_se))
}

fn gumbel_convergence() -> Outcome {
    let frozen = [(128usize, 0.001_932_683_234_283_383), (1024, 0.000_207_647_616_881_91)];
    let mut sups = Vec::new();
    for (n, want) in frozen {
        let g = gumbel_sup_distance(2, n, n / 2, DEFAULT_DIGITS).map_err(|e| e.to_string())?;
        check((g.sup - want).abs() <= 1e-15, || format!("n={n}: sup {} differs from {want}", g.sup))?;
        sups.push(g.sup);
    }
    check(sups[1] < sups[0], || format!("{} is not below {}", sups[1], sups[0]))?;
    Ok(format!("sup {:.6e} at n=128 > {:.6e} at n=1024", sups[0], sups[1]))
}

fn gv_headroom() -> Outcome {
    let e = gv_experiment(&GvExperimentConfig {
        q: 2,
        n: 63,
        alpha: 0.25,
        d: Some(19),
        dim_bonus: 1,
        trials: 100_000,
        seed: 63_019,
        workers: workers(),
        budget: DEFAULT_BUDGET,
    })
    .map_err(|e| e.to_string())?;
    check(e.k_gv == 11 && e.k == 12, || format!("k_GV = {}, k = {}", e.k_gv, e.k))?;
    check(e.success_count >= 1, || "no sampled code reached d = 19".into())?;
    Ok(format!(
        "{} of {} codes of dimension {} reach d >= 19 (surrogate {:.4})",
        e.success_count, e.trials, e.k, e.surrogate
    ))
}

fn determinism() -> Outcome {
    let runs = [1usize, 4, 8];
    let sample: Vec<_> = runs
        .iter()
        .map(|&w| sample_dmin(&SamplerConfig::new(3, 16, 4, 3_000, 77).workers(w)).map(|e| (e.counts, e.redraws, e.visits)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(sample.windows(2).all(|p| p[0] == p[1]), || "sample-dmin counts differ".into())?;

    let compare: Vec<_> = runs
        .iter()
        .map(|&w| compare_cdfs(&SamplerConfig::new(2, 24, 12, 2_000, 5).workers(w)).map(|r| r.rows))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(compare.windows(2).all(|p| p[0] == p[1]), || "compare rows differ".into())?;

    let z: Vec<_> = runs
        .iter()
        .map(|&w| {
            z_sample(2, 12, 4, 3, ZMethod::MonteCarlo { trials: 3_000, seed: 11, workers: w }).map(|s| s.histogram)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(z.windows(2).all(|p| p[0] == p[1]), || "moment samples differ".into())?;

    let gv: Vec<_> = runs
        .iter()
        .map(|&w| {
            gv_experiment(&GvExperimentConfig {
                q: 2,
                n: 32,
                alpha: 0.25,
                d: None,
                dim_bonus: 1,
                trials: 2_000,
                seed: 3,
                workers: w,
                budget: DEFAULT_BUDGET,
            })
            .map(|e| e.success_count)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(gv.windows(2).all(|p| p[0] == p[1]), || "gv-experiment counts differ".into())?;
    Ok("sample-dmin, compare, moment sampling and gv-experiment agree for 1, 4, 8 workers".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("binomial-model moment identity", binomial_model_identity),
        ("full-rank matrices vs subspaces", subspace_uniformity),
        ("tail ratio sandwich", ratio_sandwich),
        ("moment inversion round trip", moment_inversion),
        ("independent products and dependent suppression", indicator_products),
        ("d_min law within 0.015 of w_min law (n=64, k=32)", dmin_matches_wmin),
        ("Gumbel distance decreases from n=128 to n=1024", gumbel_convergence),
        ("GV experiment at n=63, d=19, k_GV+1", gv_headroom),
        ("seeded runs identical across worker counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
