use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::law::{enumerate_code_law, LawMode};
use super::sampler::{sample_dmin, SamplerConfig};
use crate::exact::{rho, wmin_cdf_table, Regime, DEFAULT_DIGITS};
use crate::error::Result;

/// One row of a c.d.f. comparison, with the raw scale quantities that
/// locate `d` relative to the asymptotic regime.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub d: usize,
    pub code: f64,
    pub model: f64,
    pub diff: f64,
    /// Monte-Carlo standard error of `code`; 0 for exact comparisons.
    pub stderr: f64,
    /// `q^k rho_d`
    pub qk_rho: f64,
    /// `d^2 / n^{3/2}`
    pub d2_n32: f64,
    /// `d^4 / n^3`
    pub d4_n3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// `sup_d |F_dmin(d) - F_wmin(d)|`
    pub sup: f64,
    pub argmax_d: usize,
    /// Exact difference, when both laws are exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_exact: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub rows: Vec<CompareRow>,
}

fn rows(q: u32, n: usize, k: usize, code: &[f64], model: &[f64], stderr: &[f64]) -> Result<Vec<CompareRow>> {
    let qk = (q as f64).powi(k as i32);
    let nf = n as f64;
    (0..=n)
        .map(|d| {
            let df = d as f64;
            Ok(CompareRow {
                d,
                code: code[d],
                model: model[d],
                diff: (code[d] - model[d]).abs(),
                stderr: stderr[d],
                qk_rho: qk * rho(q, n, d)?.to_f64(),
                d2_n32: df * df / nf.powf(1.5),
                d4_n3: df.powi(4) / nf.powi(3),
            })
        })
        .collect()
}

fn argmax(rows: &[CompareRow]) -> (f64, usize) {
    rows.iter()
        .fold((0.0, 0), |(s, a), r| if r.diff > s { (r.diff, r.d) } else { (s, a) })
}

/// Monte-Carlo `d_min` law against the minimum-weight law.
pub fn compare_cdfs(cfg: &SamplerConfig) -> Result<CompareReport> {
    let emp = sample_dmin(cfg)?;
    let model = wmin_cdf_table(cfg.q, cfg.n, cfg.k, Regime::Auto, DEFAULT_DIGITS)?.to_f64_vec();
    let rows = rows(cfg.q, cfg.n, cfg.k, &emp.cdf(), &model, &emp.stderr())?;
    let (sup, argmax_d) = argmax(&rows);
    Ok(CompareReport {
        q: cfg.q,
        n: cfg.n,
        k: cfg.k,
        sup,
        argmax_d,
        sup_exact: None,
        trials: Some(cfg.trials),
        seed: Some(cfg.master_seed),
        rows,
    })
}

/// Exhaustive `d_min` law against the minimum-weight law, both exact.
pub fn compare_cdfs_exact(q: u32, n: usize, k: usize) -> Result<CompareReport> {
    let code = enumerate_code_law(q, n, k, LawMode::AllSubspaces)?;
    let model = wmin_cdf_table(q, n, k, Regime::Exact, DEFAULT_DIGITS)?;
    let (ce, me) = (
        code.exact_values().expect("exact law"),
        model.exact_values().expect("exact law"),
    );
    let diffs: Vec<BigRational> = ce.iter().zip(me).map(|(a, b)| (a - b).abs()).collect();
    let sup_exact = diffs.iter().max().cloned().expect("n >= 1");
    let rows = rows(q, n, k, &code.to_f64_vec(), &model.to_f64_vec(), &vec![0.0; n + 1])?;
    let argmax_d = diffs.iter().position(|x| *x == sup_exact).unwrap_or(0);
    Ok(CompareReport {
        q,
        n,
        k,
        sup: sup_exact.to_f64().unwrap_or(f64::NAN),
        argmax_d,
        sup_exact: Some(format!("{}/{}", sup_exact.numer(), sup_exact.denom())),
        trials: None,
        seed: None,
        rows,
    })
}
