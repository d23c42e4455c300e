//! Experiment driver: configures kernels, filters, and noise from flags, a
//! TOML config file, or a named preset; runs one experiment; writes the CSV
//! series and a versioned JSON report into the output directory.
//!
//! Exit codes: 0 success, 2 configuration/validation rejection, 3 numerical
//! failure, 4 resource cap.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use genhermite::chaos::{
    acf_asymptote, acf_exact, build_coefficients, simulate, ChaosConfig, NoiseLaw, NoiseSpec,
    SimMode,
};
use genhermite::fracfilter::{build_filter, build_filter_for, hurst_filtered, FilterFamily};
use genhermite::kernels::KernelSpec;
use genhermite::limits::{
    clt_ensemble, contraction_integral, default_probes, l2_discretization_error,
    multivariate_mixed_check, variance_scaling_exact, variance_scaling_filtered, BlockTag,
    MixedComponent,
};
use genhermite::presets;
use genhermite::report::{write_csv, Report};
use genhermite::spectral::{ghat_homogeneity_check, plancherel_check, spectral_ht, SpectralKernel};
use genhermite::Error;

#[derive(Parser)]
#[command(
    name = "genhermite",
    version,
    about = "generalized Hermite kernels and discrete chaos experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its artifacts.
    Run(Box<RunArgs>),
    /// Print the named presets and their parameters.
    ListPresets,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
enum Experiment {
    Validate,
    Simulate,
    Acf,
    Scaling,
    Clt,
    Filter,
    LimitKernel,
    Spectral,
    Multivariate,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KernelKind {
    Product,
    Normpower,
    Ratioproduct,
    Maxcombo,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum NoiseArg {
    Gaussian,
    Rademacher,
    CenteredUniform,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FilterFamilyArg {
    PurePower,
    Telescoping,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Which experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,
    /// TOML file mirroring the flags; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    kernel: Option<KernelKind>,
    /// Product exponents, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Ratio-product numerator exponents.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    #[arg(long)]
    b: Option<f64>,
    /// Truncation radius of the coefficient grid.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Path length, or a dyadic range "256..16384".
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long)]
    lags: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, value_enum)]
    filter_family: Option<FilterFamilyArg>,
    #[arg(long)]
    filter_length: Option<usize>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override for the experiment's pass/fail line.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_grid: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
}

/// The config-file mirror of the flags.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileArgs {
    preset: Option<String>,
    kernel: Option<KernelKind>,
    gamma: Option<Vec<f64>>,
    alpha: Option<f64>,
    k: Option<usize>,
    a: Option<Vec<f64>>,
    b: Option<f64>,
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "N")]
    n: Option<String>,
    lags: Option<usize>,
    reps: Option<usize>,
    seed: Option<u64>,
    beta: Option<f64>,
    filter_family: Option<FilterFamilyArg>,
    filter_length: Option<usize>,
    noise: Option<NoiseArg>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    max_grid: Option<usize>,
    t: Option<f64>,
}

fn merge(args: &mut RunArgs, file: FileArgs) {
    macro_rules! take {
        ($($f:ident),*) => { $( if args.$f.is_none() { args.$f = file.$f; } )* };
    }
    take!(
        preset,
        kernel,
        gamma,
        alpha,
        k,
        a,
        b,
        m,
        n,
        lags,
        reps,
        seed,
        beta,
        filter_family,
        filter_length,
        noise,
        out,
        tol,
        max_grid,
        t
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListPresets => {
            for p in presets::all() {
                let filter = match p.filter {
                    Some((beta, _, len)) => format!(" filter(beta={beta}, L={len})"),
                    None => String::new(),
                };
                println!(
                    "{:<20} M={:<7} M_scaling={:<7} N=2^{}..2^{}{}  {}",
                    p.name,
                    p.m_default,
                    p.m_scaling,
                    p.n_grid_log2.0,
                    p.n_grid_log2.1,
                    filter,
                    p.summary
                );
            }
            ExitCode::SUCCESS
        }
        Command::Run(mut args) => {
            if let Some(path) = args.config.clone() {
                let text = match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                };
                match toml::from_str::<FileArgs>(&text) {
                    Ok(file) => merge(&mut args, file),
                    Err(e) => {
                        eprintln!("error: config schema violation: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            match run(*args) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    let code = match e {
                        Error::ResourceCap(_) => 4,
                        Error::Quadrature(_) | Error::NotSrd(_) => 3,
                        _ => 2,
                    };
                    ExitCode::from(code)
                }
            }
        }
    }
}

fn parse_n_grid(spec: &str) -> Result<Vec<usize>, Error> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad N range start: {lo}")))?;
        let hi: usize = hi
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad N range end: {hi}")))?;
        if lo == 0 || hi < lo {
            return Err(Error::InvalidConfig(format!("bad N range {spec}")));
        }
        let mut grid = Vec::new();
        let mut n = lo;
        while n <= hi {
            grid.push(n);
            n *= 2;
        }
        Ok(grid)
    } else {
        let n: usize = spec
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad N: {spec}")))?;
        Ok(vec![n])
    }
}

struct Resolved {
    kernel: Option<KernelSpec>,
    preset: Option<presets::Preset>,
    noise: NoiseSpec,
    m: usize,
    n_grid: Vec<usize>,
    lags: usize,
    reps: usize,
    beta: Option<f64>,
    filter_length: usize,
    out: PathBuf,
    tol: Option<f64>,
    max_grid: Option<usize>,
    t: f64,
    seed: u64,
    params: serde_json::Value,
}

fn resolve(args: &RunArgs) -> Result<Resolved, Error> {
    let preset = match &args.preset {
        Some(name) => Some(
            presets::find(name)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown preset {name}")))?,
        ),
        None => None,
    };
    let kernel = match args.kernel {
        Some(KernelKind::Product) => {
            let gamma = args
                .gamma
                .clone()
                .ok_or_else(|| Error::InvalidConfig("--kernel product needs --gamma".into()))?;
            Some(KernelSpec::product(gamma))
        }
        Some(KernelKind::Normpower) => {
            let k = args.k.unwrap_or(1);
            let alpha = args
                .alpha
                .ok_or_else(|| Error::InvalidConfig("--kernel normpower needs --alpha".into()))?;
            Some(KernelSpec::norm_power(k, alpha))
        }
        Some(KernelKind::Ratioproduct) => {
            let a = args
                .a
                .clone()
                .ok_or_else(|| Error::InvalidConfig("--kernel ratioproduct needs --a".into()))?;
            let b = args
                .b
                .ok_or_else(|| Error::InvalidConfig("--kernel ratioproduct needs --b".into()))?;
            Some(KernelSpec::ratio_product(a, b))
        }
        Some(KernelKind::Maxcombo) => {
            let k = args.k.unwrap_or(2);
            let alpha = args
                .alpha
                .ok_or_else(|| Error::InvalidConfig("--kernel maxcombo needs --alpha".into()))?;
            Some(KernelSpec::max_combo(k, alpha))
        }
        None => preset.as_ref().and_then(|p| p.kernel().cloned()),
    };
    let seed = args.seed.unwrap_or(1);
    let law = match args.noise.unwrap_or(NoiseArg::Gaussian) {
        NoiseArg::Gaussian => NoiseLaw::Gaussian,
        NoiseArg::Rademacher => NoiseLaw::Rademacher,
        NoiseArg::CenteredUniform => NoiseLaw::CenteredUniform,
    };
    let noise = NoiseSpec::new(law, seed);
    let m = args
        .m
        .or(preset.as_ref().map(|p| p.m_default))
        .unwrap_or(4096);
    let n_grid = match &args.n {
        Some(spec) => parse_n_grid(spec)?,
        None => preset
            .as_ref()
            .map(|p| p.n_grid())
            .unwrap_or_else(|| vec![4096]),
    };
    let beta = args
        .beta
        .or(preset.as_ref().and_then(|p| p.filter.map(|f| f.0)));
    let filter_length = args
        .filter_length
        .or(preset.as_ref().and_then(|p| p.filter.map(|f| f.2)))
        .unwrap_or(2000);
    let params = serde_json::json!({
        "experiment": format!("{:?}", args.experiment),
        "preset": args.preset,
        "kernel": kernel.as_ref().map(|k| format!("{:?}", k.form)),
        "k": kernel.as_ref().map(|k| k.k),
        "alpha": kernel.as_ref().map(|k| k.alpha),
        "M": m,
        "N": n_grid,
        "lags": args.lags,
        "reps": args.reps,
        "seed": seed,
        "noise": format!("{law:?}"),
        "beta": beta,
        "filter_length": filter_length,
        "tol": args.tol,
    });
    Ok(Resolved {
        kernel,
        preset,
        noise,
        m,
        n_grid,
        lags: args.lags.unwrap_or(200),
        reps: args.reps.unwrap_or(1000),
        beta,
        filter_length,
        out: args.out.clone().unwrap_or_else(|| PathBuf::from("out")),
        tol: args.tol,
        max_grid: args.max_grid,
        t: args.t.unwrap_or(1.0),
        seed,
        params,
    })
}

fn chaos_config(r: &Resolved) -> Result<ChaosConfig, Error> {
    let mut cfg = match (&r.kernel, &r.preset) {
        (Some(k), _) => ChaosConfig::kernel(k.clone(), r.m, r.noise),
        (None, Some(p)) => p.chaos_config_with_m(r.m, r.noise),
        (None, None) => {
            return Err(Error::InvalidConfig(
                "no kernel: pass --kernel … or --preset …".into(),
            ))
        }
    };
    if let Some(cap) = r.max_grid {
        cfg = cfg.with_grid_cap(cap);
    }
    Ok(cfg)
}

fn scaling_config(r: &Resolved, args: &RunArgs) -> Result<ChaosConfig, Error> {
    // presets provide a dedicated scaling radius unless --M overrides
    match (&r.preset, args.m, args.kernel) {
        (Some(p), None, None) => Ok(p.scaling_config(r.noise)),
        _ => chaos_config(r),
    }
}

fn build_filter_arg(
    beta: f64,
    family: Option<FilterFamilyArg>,
    length: usize,
) -> Result<genhermite::fracfilter::FilterSpec, Error> {
    match family {
        Some(FilterFamilyArg::PurePower) => build_filter(beta, FilterFamily::PurePower, length),
        Some(FilterFamilyArg::Telescoping) => {
            build_filter(beta, FilterFamily::TelescopingZeroSum, length)
        }
        None => build_filter_for(beta, length),
    }
}

fn run(args: RunArgs) -> Result<ExitCode, Error> {
    let r = resolve(&args)?;
    let mut report = Report::new(&format!("{:?}", args.experiment), r.params.clone());
    report.seeds = vec![r.seed];
    let dir = r.out.clone();

    match args.experiment {
        Experiment::Validate => {
            let kernel = r
                .kernel
                .clone()
                .ok_or_else(|| Error::InvalidConfig("validate needs a kernel".into()))?;
            let vr = kernel.validate()?; // hard violations exit 2 via Err
            for c in &vr.checks {
                report.push_criterion(c.name, c.passed, f64::from(u8::from(c.passed)), &c.detail);
            }
            report.metrics = serde_json::json!({
                "hurst": kernel.hurst(),
                "passed": vr.passed(),
            });
            report.write(&dir)?;
            println!("validate: {}", if vr.passed() { "PASS" } else { "FAIL" });
            if !vr.passed() {
                return Ok(ExitCode::from(2));
            }
        }
        Experiment::Simulate => {
            let cfg = chaos_config(&r)?;
            let grid = build_coefficients(&cfg)?;
            let n = r.n_grid[0];
            let x = simulate(&cfg, &grid, n, SimMode::Auto)?;
            write_csv(
                &dir,
                "path.csv",
                "n,X",
                x.iter().enumerate().map(|(i, &v)| vec![(i + 1) as f64, v]),
            )?;
            let mean = x.iter().sum::<f64>() / n as f64;
            let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            report.metrics = serde_json::json!({
                "n": n,
                "sample_mean": mean,
                "sample_variance": var,
                "gamma0_exact": grid.gamma0(),
                "tail_bound": grid.tail_bound,
            });
            report.write(&dir)?;
            println!("simulate: wrote {n} samples");
        }
        Experiment::Acf => {
            let cfg = chaos_config(&r)?;
            let kernel = cfg.source.kernel().cloned().ok_or_else(|| {
                Error::InvalidConfig("acf experiment needs a kernel-driven config".into())
            })?;
            let acf = acf_exact(&cfg, None, r.lags)?;
            let mut rows = Vec::with_capacity(r.lags);
            let mut ratios = Vec::new();
            for lag in 1..=r.lags {
                let asym = acf_asymptote(&kernel, lag as f64)?;
                let ratio = acf.gamma[lag] / asym;
                ratios.push(ratio);
                rows.push(vec![
                    lag as f64,
                    acf.gamma[lag],
                    asym,
                    ratio,
                    acf.trunc_bound,
                ]);
            }
            write_csv(
                &dir,
                "acf.csv",
                "lag,gamma_exact,gamma_asymptote,ratio,trunc_bound",
                rows,
            )?;
            let first = ratios[(ratios.len() / 10).max(1) - 1];
            let last = *ratios.last().unwrap();
            report.push_criterion(
                "ratio-trend-toward-1",
                (1.0 - last).abs() <= (1.0 - first).abs() + 1e-9,
                last,
                "|1 - ratio| nonincreasing in lag",
            );
            report.metrics = serde_json::json!({
                "ratio_first_decile": first,
                "ratio_last": last,
                "trunc_bound": acf.trunc_bound,
            });
            report.write(&dir)?;
            println!("acf: ratio at max lag = {last:.4}");
        }
        Experiment::Scaling => {
            let cfg = scaling_config(&r, &args)?;
            let fit = match r.beta {
                None => variance_scaling_exact(&cfg, &r.n_grid)?,
                Some(beta) => {
                    let filter = build_filter_arg(beta, args.filter_family, r.filter_length)?;
                    variance_scaling_filtered(&cfg, &filter, &r.n_grid)?
                }
            };
            let kernel = cfg.source.kernel().cloned();
            let expected = kernel.as_ref().map(|k| match r.beta {
                None => 2.0 * k.hurst(),
                Some(beta) => 2.0 * hurst_filtered(k, beta),
            });
            write_csv(
                &dir,
                "scaling.csv",
                "N,variance",
                fit.n_grid
                    .iter()
                    .zip(&fit.variances)
                    .map(|(&n, &v)| vec![n as f64, v]),
            )?;
            if let Some(e) = expected {
                let tol = r.tol.unwrap_or(if r.beta.is_none() { 0.03 } else { 0.1 });
                report.push_criterion(
                    "slope-2h",
                    (fit.slope - e).abs() <= tol,
                    fit.slope,
                    &format!("{e} ± {tol}"),
                );
            }
            report.metrics = serde_json::json!({
                "slope": fit.slope,
                "intercept": fit.intercept,
                "expected": expected,
                "dropped_smallest": fit.dropped_smallest,
            });
            report.write(&dir)?;
            println!("scaling: slope = {:.4}", fit.slope);
        }
        Experiment::Clt => {
            let cfg = match (&r.kernel, &r.preset) {
                (None, None) => presets::find("srd-finite-k2")
                    .unwrap()
                    .chaos_config(r.noise),
                _ => chaos_config(&r)?,
            };
            let n = r.n_grid[0];
            let rep = clt_ensemble(&cfg, n, r.reps)?;
            write_csv(
                &dir,
                "clt_samples.csv",
                "r,Y",
                rep.samples
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| vec![i as f64, v]),
            )?;
            let tol = r.tol.unwrap_or(0.02);
            report.push_criterion("ks-normal", rep.ks < tol, rep.ks, &format!("< {tol}"));
            let var_ratio = rep.sample_variance / rep.sigma2;
            report.push_criterion(
                "variance-vs-sigma2",
                (var_ratio - 1.0).abs() < 0.05,
                var_ratio,
                "1 ± 0.05",
            );
            report.metrics = serde_json::json!({
                "sigma2": rep.sigma2,
                "sample_variance": rep.sample_variance,
                "ks": rep.ks,
                "skew_z": rep.skew_z,
                "kurt_z": rep.kurt_z,
            });
            report.write(&dir)?;
            println!("clt: KS = {:.4}, sigma^2 = {:.4}", rep.ks, rep.sigma2);
        }
        Experiment::Filter => {
            let beta = r
                .beta
                .ok_or_else(|| Error::InvalidConfig("filter experiment needs --beta".into()))?;
            let filter = build_filter_arg(beta, args.filter_family, r.filter_length)?;
            let coeffs = filter.coefficients();
            let mut rows = Vec::new();
            let mut psum = 0.0;
            let stride = (coeffs.len() / 64).max(1);
            for (i, &c) in coeffs.iter().enumerate() {
                psum += c;
                if i < 64 || (i + 1) % stride == 0 {
                    rows.push(vec![(i + 1) as f64, c, psum]);
                }
            }
            write_csv(&dir, "filter.csv", "n,C_n,partial_sum", rows)?;
            let l = filter.length;
            let rv = coeffs[l - 1] / (l as f64).powf(beta - 1.0);
            let (sq_tail, residual) = filter.tail_report();
            report.push_criterion(
                "regular-variation",
                (0.98..=1.02).contains(&rv),
                rv,
                "[0.98, 1.02]",
            );
            report.metrics = serde_json::json!({
                "beta": beta,
                "length": l,
                "cn_over_power_at_end": rv,
                "sq_tail": sq_tail,
                "zero_sum_residual": residual,
            });
            report.write(&dir)?;
            println!("filter: C_L/L^(beta-1) = {rv:.5}");
        }
        Experiment::LimitKernel => {
            let kernel = r
                .kernel
                .clone()
                .ok_or_else(|| Error::InvalidConfig("limit-kernel needs a kernel".into()))?;
            let mut rows = Vec::new();
            let mut errs = Vec::new();
            for &n in &r.n_grid {
                let e = l2_discretization_error(&kernel, r.t, n)?;
                errs.push(e.value);
                rows.push(vec![n as f64, e.value, e.window_t]);
            }
            write_csv(&dir, "limit_kernel.csv", "N,l2_error,window_t", rows)?;
            let mono = errs.windows(2).all(|w| w[1] <= w[0] * 1.01);
            report.push_criterion(
                "l2-error-nonincreasing",
                mono,
                *errs.last().unwrap(),
                "nonincreasing over the N grid (1% jitter)",
            );
            report.metrics = serde_json::json!({ "errors": errs });
            report.write(&dir)?;
            println!("limit-kernel: errors {errs:?}");
        }
        Experiment::Spectral => {
            let kernel = r
                .kernel
                .clone()
                .ok_or_else(|| Error::InvalidConfig("spectral needs a kernel".into()))?;
            let sk = SpectralKernel::new(kernel.clone())?;
            let mut rows = Vec::new();
            for i in 1..=64 {
                let u = 0.25 * i as f64;
                let uvec = vec![u; kernel.k];
                let g = sk.ghat(&uvec)?;
                let h = spectral_ht(&sk, r.t, &uvec)?;
                rows.push(vec![u, g.re, g.im, h.norm()]);
            }
            write_csv(&dir, "spectral.csv", "u,re_ghat,im_ghat,abs_ht", rows)?;
            let samples: Vec<Vec<f64>> =
                (1..=8).map(|i| vec![0.3 * i as f64; kernel.k]).collect();
            let dev = ghat_homogeneity_check(&sk, &samples)?;
            let tol = r.tol.unwrap_or(0.02);
            report.push_criterion("ghat-homogeneity", dev < tol, dev, &format!("< {tol}"));
            let mut metrics = serde_json::json!({ "homogeneity_deviation": dev });
            if let Ok(p) = plancherel_check(&kernel, r.t) {
                let ptol = if kernel.k == 1 { 1e-3 } else { 1e-2 };
                report.push_criterion("plancherel", p < ptol, p, &format!("< {ptol}"));
                metrics["plancherel_rel_error"] = serde_json::json!(p);
            }
            report.metrics = metrics;
            report.write(&dir)?;
            println!("spectral: homogeneity deviation = {dev:.3e}");
        }
        Experiment::Multivariate => {
            let noise = r.noise;
            let s1 = MixedComponent {
                tag: BlockTag::S1,
                config: presets::find("srd-iid-k1").unwrap().chaos_config(noise),
                filter: None,
            };
            let s2 = MixedComponent {
                tag: BlockTag::S2,
                config: presets::find("srd-finite-k2").unwrap().chaos_config(noise),
                filter: None,
            };
            let n = r.n_grid[0];
            let mixed = multivariate_mixed_check(&[s1, s2], n, r.reps)?;
            let mut rows = Vec::new();
            for (i, row) in mixed.correlations.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    rows.push(vec![i as f64, j as f64, c]);
                }
            }
            write_csv(&dir, "correlations.csv", "i,j,corr", rows)?;
            let tol = r.tol.unwrap_or(0.03);
            report.push_criterion(
                "s2-block-uncorrelated",
                mixed.s2_max_abs_corr < tol,
                mixed.s2_max_abs_corr,
                &format!("< {tol}"),
            );
            // positive-kernel pair: dependence must register on every probe
            let k1 = KernelSpec::product(vec![-0.7]).symmetrize()?;
            let k2 = KernelSpec::product(vec![-0.75, -0.625]).symmetrize()?;
            let probes = default_probes(k1.k + k2.k - 2);
            let vals = contraction_integral(&k1, &k2, 1.0, &probes)?;
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            report.push_criterion("positive-pair-contraction", min > 0.0, min, "> 0");
            report.metrics = serde_json::json!({
                "s2_max_abs_corr": mixed.s2_max_abs_corr,
                "contraction_min": min,
                "replications": r.reps,
            });
            report.write(&dir)?;
            println!(
                "multivariate: max |corr(S2, .)| = {:.4}",
                mixed.s2_max_abs_corr
            );
        }
    }
    if !report.criteria.is_empty() && !report.passed() {
        println!("one or more criteria failed; see report.json");
    }
    Ok(ExitCode::SUCCESS)
}
