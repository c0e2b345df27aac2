use mindist::bounds::{gv_classical, gv_experiment, gv_improved, GvExperimentConfig};
use mindist::ensemble::{code_law_counts, compare_cdfs, compare_cdfs_exact, sample_dmin, CompareReport, SamplerConfig};
use mindist::exact::{
    gumbel_params, gumbel_sup_distance, hp, regime_for, rho, rho_ratio_bounds, rho_step_ratio, wmin_cdf_table,
    wmin_cdf_with, wmin_ln_survival, Probability, Regime,
};
use mindist::moments::{invert_moments, z_sample, ztilde_moments, MomentModel, MomentValues, MomentVector, TailBound, ZMethod};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::error::{usage, CliError};
use crate::format::{ratio, sig12, sig12_from_ln, Csv};
use crate::manifest::RegimeInfo;

type R<T> = Result<T, CliError>;

/// What a command produced, before the manifest is attached.
pub struct Outcome {
    pub body: String,
    pub seed: Option<u64>,
    pub regime: Option<RegimeInfo>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(body: String) -> Self {
        Outcome {
            body,
            seed: None,
            regime: None,
            warnings: Vec::new(),
        }
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn regime(mut self, regime: RegimeInfo) -> Self {
        self.regime = Some(regime);
        self
    }
}

fn to_json<T: Serialize>(value: &T) -> R<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn scalar_only(fmt: Format) -> R<()> {
    match fmt {
        Format::Rational | Format::Decimal => Err(usage(format!(
            "--format {} applies to single values; use csv or json",
            if fmt == Format::Rational { "rational" } else { "decimal" }
        ))),
        _ => Ok(()),
    }
}

pub fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Compare(_) | Command::GvExperiment(_) => Format::Json,
        _ => Format::Csv,
    }
}

pub fn run(cmd: &Command, g: &Global) -> R<Outcome> {
    let fmt = g.format.unwrap_or_else(|| default_format(cmd));
    match cmd {
        Command::Rho(a) => rho_cmd(a, fmt),
        Command::WminCdf(a) => wmin_cmd(a, fmt, g.digits),
        Command::Gumbel(a) => gumbel_cmd(a, fmt, g.digits),
        Command::SampleDmin(a) => sample_cmd(a, fmt, g),
        Command::ExactDmin(a) => exact_dmin_cmd(a, fmt),
        Command::Compare(a) => compare_cmd(a, fmt, g),
        Command::Moments(a) => moments_cmd(a, fmt, g),
        Command::InvertMoments(a) => invert_cmd(a, fmt, g),
        Command::Gv(a) => gv_cmd(a, fmt),
        Command::GvExperiment(a) => gv_experiment_cmd(a, fmt, g),
        Command::Replay(_) => Err(usage("replay cannot be nested")),
    }
}

fn rho_cmd(a: &RhoArgs, fmt: Format) -> R<Outcome> {
    let body = match (a.d, a.t) {
        (Some(d), None) => {
            let p = rho(a.q, a.n, d)?;
            let (exact, dec) = (p.to_string(), sig12(p.to_f64()));
            match fmt {
                Format::Rational => exact + "\n",
                Format::Decimal => dec + "\n",
                Format::Json => to_json(&json!({"q": a.q, "n": a.n, "d": d, "rho": exact, "rho_decimal": p.to_f64()}))?,
                Format::Csv => {
                    let mut c = Csv::new(&["q", "n", "d", "rho_rational", "rho_decimal"]);
                    c.row(&[a.q.to_string(), a.n.to_string(), d.to_string(), exact, dec]);
                    c.finish()
                }
            }
        }
        (Some(d), Some(t)) => {
            scalar_only(fmt)?;
            let b = rho_ratio_bounds(a.q, a.n, d, t)?;
            // the step ratio needs d >= 1 and d + t <= n
            let step = rho_step_ratio(a.q, a.n, d, t).ok();
            if fmt == Format::Json {
                to_json(&json!({
                    "q": a.q, "n": a.n, "d": d, "t": t,
                    "lower": ratio(&b.lower), "exact": ratio(&b.exact), "upper": ratio(&b.upper),
                    "holds": b.holds(),
                    "step_ratio": step.as_ref().map(|s| ratio(&s.ratio)),
                    "step_reference": step.as_ref().map(|s| ratio(&s.reference)),
                    "step_relative_gap": step.as_ref().map(|s| s.relative_gap),
                }))?
            } else {
                let mut c = Csv::new(&[
                    "q", "n", "d", "t", "lower", "exact", "upper", "holds", "step_ratio", "step_reference",
                    "step_relative_gap",
                ]);
                let opt = |f: &dyn Fn(&mindist::exact::StepRatio) -> String| step.as_ref().map(f).unwrap_or_default();
                c.row(&[
                    a.q.to_string(),
                    a.n.to_string(),
                    d.to_string(),
                    t.to_string(),
                    ratio(&b.lower),
                    ratio(&b.exact),
                    ratio(&b.upper),
                    b.holds().to_string(),
                    opt(&|s| ratio(&s.ratio)),
                    opt(&|s| ratio(&s.reference)),
                    opt(&|s| sig12(s.relative_gap)),
                ]);
                c.finish()
            }
        }
        (None, _) => {
            scalar_only(fmt)?;
            let rows: Vec<_> = (0..=a.n).map(|d| rho(a.q, a.n, d)).collect::<Result<_, _>>()?;
            if fmt == Format::Json {
                let rows: Vec<_> = rows
                    .iter()
                    .enumerate()
                    .map(|(d, p)| json!({"d": d, "rho": p.to_string(), "rho_decimal": p.to_f64()}))
                    .collect();
                to_json(&json!({"q": a.q, "n": a.n, "rows": rows}))?
            } else {
                let mut c = Csv::new(&["d", "rho_rational", "rho_decimal"]);
                for (d, p) in rows.iter().enumerate() {
                    c.row(&[d.to_string(), p.to_string(), sig12(p.to_f64())]);
                }
                c.finish()
            }
        }
    };
    Ok(Outcome::new(body).regime(RegimeInfo::exact()))
}

fn prob_decimal(p: &Probability) -> String {
    match p {
        Probability::Exact(e) => sig12(e.to_f64()),
        Probability::Log(l) => sig12_from_ln(l.ln_f64()),
    }
}

fn wmin_cmd(a: &WminArgs, fmt: Format, digits: u32) -> R<Outcome> {
    let regime = match a.regime {
        RegimeArg::Auto => regime_for(a.q, a.n, a.k),
        r => r.into(),
    };
    let ds: Vec<usize> = match a.d {
        Some(d) => vec![d],
        None => (0..=a.n).collect(),
    };
    if a.d.is_none() {
        scalar_only(fmt)?;
    }
    if regime == Regime::Exact {
        let values: Vec<BigRational> = match a.d {
            Some(d) => {
                let p = wmin_cdf_with(a.q, a.n, a.k, d, Regime::Exact, digits)?;
                vec![p.as_exact().expect("exact regime").value().clone()]
            }
            None => wmin_cdf_table(a.q, a.n, a.k, Regime::Exact, digits)?
                .exact_values()
                .expect("exact regime")
                .to_vec(),
        };
        let dec = |v: &BigRational| sig12(num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN));
        let body = match fmt {
            Format::Rational => ratio(&values[0]) + "\n",
            Format::Decimal => dec(&values[0]) + "\n",
            Format::Json => {
                let rows: Vec<_> = ds
                    .iter()
                    .zip(&values)
                    .map(|(d, v)| json!({"d": d, "cdf": ratio(v), "cdf_decimal": dec(v)}))
                    .collect();
                to_json(&json!({"q": a.q, "n": a.n, "k": a.k, "regime": "exact", "rows": rows}))?
            }
            Format::Csv => {
                let mut c = Csv::new(&["d", "cdf_rational", "cdf_decimal"]);
                for (d, v) in ds.iter().zip(&values) {
                    c.row(&[d.to_string(), ratio(v), dec(v)]);
                }
                c.finish()
            }
        };
        return Ok(Outcome::new(body).regime(RegimeInfo::exact()));
    }

    if fmt == Format::Rational {
        return Err(usage("log-domain values are not exact; use --format decimal, csv or json"));
    }
    let mut rows = Vec::with_capacity(ds.len());
    for &d in &ds {
        let p = wmin_cdf_with(a.q, a.n, a.k, d, Regime::LogDomain, digits)?;
        let ln_s = wmin_ln_survival(a.q, a.n, a.k, d, digits)?
            .map(|x| sig12(hp::to_f64(&x)))
            .unwrap_or_else(|| "-inf".into());
        rows.push((d, prob_decimal(&p), ln_s));
    }
    let body = match fmt {
        Format::Decimal => rows[0].1.clone() + "\n",
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(d, c, l)| json!({"d": d, "cdf_decimal": c, "ln_survival": l}))
                .collect();
            to_json(&json!({"q": a.q, "n": a.n, "k": a.k, "regime": "log-domain", "digits": digits, "rows": rows}))?
        }
        _ => {
            let mut c = Csv::new(&["d", "cdf_decimal", "ln_survival"]);
            for (d, cdf, l) in &rows {
                c.row(&[&d.to_string(), cdf, l]);
            }
            c.finish()
        }
    };
    Ok(Outcome::new(body).regime(RegimeInfo::log(digits)))
}

fn gumbel_cmd(a: &CodeArgs, fmt: Format, digits: u32) -> R<Outcome> {
    scalar_only(fmt)?;
    let p = gumbel_params(a.q, a.n, a.k)?;
    let mut warnings = Vec::new();
    let dist = match gumbel_sup_distance(a.q, a.n, a.k, digits) {
        Ok(g) => Some(g),
        Err(e @ mindist::Error::Degenerate(_)) => {
            warnings.push(format!("sup distance not computed: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let body = if fmt == Format::Json {
        to_json(&json!({
            "q": a.q, "n": a.n, "k": a.k, "d0": p.d0, "u": ratio(&p.u),
            "slope": p.slope.is_finite().then_some(p.slope),
            "sup": dist.as_ref().map(|g| g.sup),
            "argmax_d": dist.as_ref().map(|g| g.argmax_d),
        }))?
    } else {
        let mut c = Csv::new(&["q", "n", "k", "d0", "u", "slope", "sup", "argmax_d"]);
        c.row(&[
            a.q.to_string(),
            a.n.to_string(),
            a.k.to_string(),
            p.d0.to_string(),
            ratio(&p.u),
            sig12(p.slope),
            dist.as_ref().map(|g| sig12(g.sup)).unwrap_or_default(),
            dist.as_ref().map(|g| g.argmax_d.to_string()).unwrap_or_default(),
        ]);
        c.finish()
    };
    let mut out = Outcome::new(body).regime(RegimeInfo::log(digits.max(50)));
    out.warnings = warnings;
    Ok(out)
}

fn sample_cmd(a: &SampleArgs, fmt: Format, g: &Global) -> R<Outcome> {
    scalar_only(fmt)?;
    let cfg = SamplerConfig::new(a.q, a.n, a.k, a.trials, a.seed)
        .workers(g.workers())
        .condition_full_rank(!a.unconditioned)
        .budget(g.budget);
    let e = sample_dmin(&cfg)?;
    let (cdf, se) = (e.cdf(), e.stderr());
    let body = if fmt == Format::Json {
        to_json(&json!({
            "q": a.q, "n": a.n, "k": a.k, "trials": a.trials, "seed": a.seed,
            "condition_full_rank": !a.unconditioned,
            "counts": e.counts, "cdf": cdf, "stderr": se,
            "redraws": e.redraws, "visits": e.visits,
        }))?
    } else {
        let mut c = Csv::new(&["d", "cdf", "stderr", "trials"]);
        for d in 0..=a.n {
            c.row(&[d.to_string(), sig12(cdf[d]), sig12(se[d]), a.trials.to_string()]);
        }
        c.finish()
    };
    Ok(Outcome::new(body).seed(a.seed).regime(RegimeInfo::monte_carlo()))
}

fn exact_dmin_cmd(a: &ExactDminArgs, fmt: Format) -> R<Outcome> {
    scalar_only(fmt)?;
    let counts = code_law_counts(a.q, a.n, a.k, a.mode.into())?;
    let table = counts.to_table();
    let values = table.exact_values().expect("exhaustive law");
    let dec = |v: &BigRational| sig12(num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN));
    let body = if fmt == Format::Json {
        to_json(&json!({
            "q": a.q, "n": a.n, "k": a.k, "mode": a.mode,
            "total": counts.total, "counts": counts.counts,
            "cdf": values.iter().map(ratio).collect::<Vec<_>>(),
            "cdf_decimal": values.iter().map(dec).collect::<Vec<_>>(),
        }))?
    } else {
        let mut c = Csv::new(&["d", "cdf_rational", "cdf_decimal"]);
        for (d, v) in values.iter().enumerate() {
            c.row(&[d.to_string(), ratio(v), dec(v)]);
        }
        c.finish()
    };
    Ok(Outcome::new(body).regime(RegimeInfo::exact()))
}

fn compare_cmd(a: &CompareArgs, fmt: Format, g: &Global) -> R<Outcome> {
    scalar_only(fmt)?;
    let (report, out): (CompareReport, Outcome) = if a.exact {
        (compare_cdfs_exact(a.q, a.n, a.k)?, Outcome::new(String::new()).regime(RegimeInfo::exact()))
    } else {
        let cfg = SamplerConfig::new(a.q, a.n, a.k, a.trials, a.seed)
            .workers(g.workers())
            .budget(g.budget);
        (
            compare_cdfs(&cfg)?,
            Outcome::new(String::new()).seed(a.seed).regime(RegimeInfo::monte_carlo()),
        )
    };
    let body = if fmt == Format::Json {
        to_json(&report)?
    } else {
        let mut c = Csv::new(&["d", "code", "model", "diff", "stderr", "qk_rho", "d2_n32", "d4_n3"]);
        for r in &report.rows {
            c.row(&[
                r.d.to_string(),
                sig12(r.code),
                sig12(r.model),
                sig12(r.diff),
                sig12(r.stderr),
                sig12(r.qk_rho),
                sig12(r.d2_n32),
                sig12(r.d4_n3),
            ]);
        }
        c.finish()
    };
    Ok(Outcome { body, ..out })
}

#[allow(clippy::too_many_arguments)]
fn moment_vector(
    q: u32,
    n: usize,
    k: usize,
    d: usize,
    h: usize,
    model: ModelArg,
    trials: Option<u64>,
    seed: u64,
    workers: usize,
) -> R<(MomentVector, RegimeInfo)> {
    Ok(match model {
        ModelArg::Independent => (ztilde_moments(q, n, k, d, h)?, RegimeInfo::exact()),
        ModelArg::Code => {
            let (method, regime) = match trials {
                Some(trials) => (ZMethod::MonteCarlo { trials, seed, workers }, RegimeInfo::monte_carlo()),
                None => (ZMethod::ExactTiny, RegimeInfo::exact()),
            };
            (z_sample(q, n, k, d, method)?.moments(h)?, regime)
        }
    })
}

fn moments_cmd(a: &MomentsArgs, fmt: Format, g: &Global) -> R<Outcome> {
    scalar_only(fmt)?;
    let (v, regime) = moment_vector(
        a.q,
        a.n,
        a.k,
        a.d,
        a.max_order,
        a.model,
        a.trials,
        a.seed,
        g.workers(),
    )?;
    let exact = match &v.values {
        MomentValues::Exact(x) => Some(x),
        MomentValues::Estimated { .. } => None,
    };
    let rows: Vec<(usize, String, f64, f64)> = (1..=a.max_order)
        .map(|m| (m, exact.map(|x| ratio(&x[m - 1])).unwrap_or_default(), v.get_f64(m), v.stderr(m)))
        .collect();
    let body = if fmt == Format::Json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(m, r, x, s)| json!({"m": m, "moment": (!r.is_empty()).then_some(r), "moment_decimal": x, "stderr": s}))
            .collect();
        to_json(&json!({"q": a.q, "n": a.n, "k": a.k, "d": a.d, "model": a.model, "moments": rows}))?
    } else {
        let mut c = Csv::new(&["m", "moment_rational", "moment_decimal", "stderr"]);
        for (m, r, x, s) in &rows {
            c.row(&[m.to_string(), r.clone(), sig12(*x), sig12(*s)]);
        }
        c.finish()
    };
    let mut out = Outcome::new(body).regime(regime);
    if a.model == ModelArg::Code && a.trials.is_some() {
        out.seed = Some(a.seed);
    }
    Ok(out)
}

/// Comma-separated moments; exact when every entry is an integer or `a/b`.
fn parse_moments(s: &str) -> R<MomentVector> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(usage("--moments is empty"));
    }
    if let Ok(v) = parts.iter().map(|p| p.parse::<BigRational>()).collect::<Result<Vec<_>, _>>() {
        return Ok(MomentVector::exact(MomentModel::Given, v));
    }
    let mean = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .ok()
                .or_else(|| p.parse::<BigRational>().ok().and_then(|r| num_traits::ToPrimitive::to_f64(&r)))
                .ok_or_else(|| usage(format!("cannot parse moment {p:?}")))
        })
        .collect::<R<Vec<f64>>>()?;
    let se = vec![0.0; mean.len()];
    Ok(MomentVector::estimated(MomentModel::Given, mean, se)?)
}

fn invert_cmd(a: &InvertArgs, fmt: Format, g: &Global) -> R<Outcome> {
    scalar_only(fmt)?;
    let tail = match a.tail {
        TailArg::None => TailBound::None,
        TailArg::Mass => TailBound::Mass {
            mass: a.tail_mass,
            max_value: a.tail_max,
        },
        TailArg::NextMoment => TailBound::NextMoment,
    };
    let needed = if a.tail == TailArg::NextMoment { a.h + 1 } else { a.h };
    let (u, regime) = match (&a.moments, a.q, a.n, a.k, a.d) {
        (Some(s), ..) => (parse_moments(s)?, RegimeInfo::exact()),
        (None, Some(q), Some(n), Some(k), Some(d)) => {
            moment_vector(q, n, k, d, needed, a.model, a.trials, a.seed, g.workers())?
        }
        _ => return Err(usage("give either --moments or all of --q, --n, --k, --d")),
    };
    let mv = invert_moments(&u, a.h, tail)?;
    let err = mv.err_bound();
    let body = if fmt == Format::Json {
        to_json(&json!({
            "h": a.h, "tail": mv.tail,
            "masses": mv.masses,
            "exact": mv.exact.as_ref().map(|x| x.iter().map(ratio).collect::<Vec<_>>()),
            "err_bound": err, "tail_error": mv.tail_error, "noise": mv.noise,
            "clipped": mv.clipped(),
        }))?
    } else {
        let mut c = Csv::new(&["r", "mass", "err_bound"]);
        for r in 0..a.h {
            c.row(&[(r + 1).to_string(), sig12(mv.masses[r]), sig12(err[r])]);
        }
        c.finish()
    };
    let mut out = Outcome::new(body).regime(regime);
    if a.moments.is_none() && a.model == ModelArg::Code && a.trials.is_some() {
        out.seed = Some(a.seed);
    }
    Ok(out)
}

fn gv_cmd(a: &GvArgs, fmt: Format) -> R<Outcome> {
    scalar_only(fmt)?;
    let mut warnings = Vec::new();
    let body = match a.alpha {
        None => {
            let r = gv_classical(a.q, a.n, a.d)?;
            if fmt == Format::Json {
                to_json(&r)?
            } else {
                let mut c = Csv::new(&[
                    "q", "n", "d", "classical_size", "classical_dimension", "improved_size_core", "sqrt_factor",
                    "entropy_rate",
                ]);
                c.row(&[
                    r.q.to_string(),
                    r.n.to_string(),
                    r.d.to_string(),
                    ratio(&r.classical_size),
                    r.classical_dimension.to_string(),
                    ratio(&r.improved_size_core),
                    sig12(r.sqrt_factor),
                    sig12(r.entropy_rate),
                ]);
                c.finish()
            }
        }
        Some(alpha) => {
            let g = gv_improved(a.q, a.n, a.d, alpha, a.shift_constant)?;
            warnings.extend(g.warning.clone());
            if fmt == Format::Json {
                to_json(&g)?
            } else {
                let r = &g.report;
                let mut c = Csv::new(&[
                    "q", "n", "d", "classical_size", "classical_dimension", "improved_size_core", "sqrt_factor",
                    "entropy_rate", "alpha", "window_lo", "window_hi", "in_window", "dimension_shift",
                ]);
                c.row(&[
                    r.q.to_string(),
                    r.n.to_string(),
                    r.d.to_string(),
                    ratio(&r.classical_size),
                    r.classical_dimension.to_string(),
                    ratio(&r.improved_size_core),
                    sig12(r.sqrt_factor),
                    sig12(r.entropy_rate),
                    sig12(alpha),
                    sig12(g.window.0),
                    sig12(g.window.1),
                    g.in_window.to_string(),
                    g.dimension_shift.map(|s| s.to_string()).unwrap_or_default(),
                ]);
                c.finish()
            }
        }
    };
    let mut out = Outcome::new(body).regime(RegimeInfo::exact());
    out.warnings = warnings;
    Ok(out)
}

fn gv_experiment_cmd(a: &GvExperimentArgs, fmt: Format, g: &Global) -> R<Outcome> {
    scalar_only(fmt)?;
    let e = gv_experiment(&GvExperimentConfig {
        q: a.q,
        n: a.n,
        alpha: a.alpha,
        d: a.d,
        dim_bonus: a.dim_bonus,
        trials: a.trials,
        seed: a.seed,
        workers: g.workers(),
        budget: g.budget,
    })?;
    let body = if fmt == Format::Json {
        to_json(&e)?
    } else {
        let mut c = Csv::new(&[
            "q", "n", "d", "k_gv", "k", "trials", "success_count", "success_rate", "stderr", "surrogate",
            "exp_neg_sqrt_n",
        ]);
        c.row(&[
            e.q.to_string(),
            e.n.to_string(),
            e.d.to_string(),
            e.k_gv.to_string(),
            e.k.to_string(),
            e.trials.to_string(),
            e.success_count.to_string(),
            sig12(e.success_rate),
            sig12(e.stderr),
            sig12(e.surrogate),
            sig12(e.exp_neg_sqrt_n),
        ]);
        c.finish()
    };
    Ok(Outcome::new(body).seed(a.seed).regime(RegimeInfo::monte_carlo()))
}
