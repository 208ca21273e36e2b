//! Verification harness: pointwise density/cdf comparisons, two-sample
//! Monte Carlo tests, coefficient-identity residuals, and a two-state
//! continuous-time chain check of the local-time identity.
//!
//! Every check is deterministic given `(config, seed)`: each check owns a
//! fixed stream id off the shared seed.

use std::time::Instant;

use crate::distributions::{sample_poisson, Transform};
use crate::mixtures::{
    altnormal_index_pgf, altnormal_representation_auto, altnormal_weights, classical_chisq,
    hypsec_component_pdf, hypsec_representation, logistic_representation,
    poisson_mixture_from_altnormal, sample_hypsec_phi_form, sample_logistic_construction,
    AltIndexSampler, AltSpec, LogisticConstruction, MixtureRepresentation,
};
use crate::quad::integrate;
use crate::rng::Rng;
use crate::series::{
    b_geometric_v1_binomial, b_geometric_v1_lah, alt_coefficients, BuiltinSpec,
};
use crate::special::{binom, CombinatorialCache};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

/// Outcome of one check: `pass` iff `metric <= threshold`.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub metric: f64,
    pub threshold: f64,
    pub pass: bool,
    pub seconds: f64,
    pub seed: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, metric: f64, threshold: f64, seed: u64) -> Self {
        CheckReport {
            name: name.into(),
            metric,
            threshold,
            pass: metric <= threshold,
            seconds: 0.0,
            seed,
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.seconds = start.elapsed().as_secs_f64();
        self
    }
}

/// CSV header matching [`csv_row`](CheckReport::csv_row).
pub const CSV_HEADER: &str = "name,metric,threshold,pass,seconds,seed";

impl CheckReport {
    /// One CSV row. The seconds column is emitted only when `with_timings`
    /// is set; by default it stays empty so identical configurations give
    /// byte-identical output.
    pub fn csv_row(&self, with_timings: bool) -> String {
        let seconds = if with_timings { format!("{:.3}", self.seconds) } else { String::new() };
        format!(
            "{},{:.16e},{:.16e},{},{},{}",
            self.name, self.metric, self.threshold, self.pass, seconds, self.seed
        )
    }
}

// ---------------------------------------------------------------------------
// statistics
// ---------------------------------------------------------------------------

/// One-sample Kolmogorov-Smirnov statistic against a cdf.
pub fn ks_one_sample(draws: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = draws.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        worst = worst.max((c - i as f64 / n).abs());
        worst = worst.max(((i + 1) as f64 / n - c).abs());
    }
    worst
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|x, y| x.partial_cmp(y).unwrap());
    sb.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (sa.len(), sb.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut worst = 0.0f64;
    while i < na && j < nb {
        let x = sa[i].min(sb[j]);
        while i < na && sa[i] <= x {
            i += 1;
        }
        while j < nb && sb[j] <= x {
            j += 1;
        }
        worst = worst.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    worst
}

/// Total variation distance between a pmf prefix and an empirical pmf; mass
/// outside the prefix counts in full.
pub fn tv_distance(exact: &[f64], empirical: &[f64]) -> f64 {
    let len = exact.len().max(empirical.len());
    let mut acc = 0.0;
    for n in 0..len {
        let a = exact.get(n).copied().unwrap_or(0.0);
        let b = empirical.get(n).copied().unwrap_or(0.0);
        acc += (a - b).abs();
    }
    0.5 * acc
}

/// Slack-adjusted 1% critical value for the equal-size two-sample KS test.
pub fn two_sample_threshold(n: usize) -> f64 {
    1.63 * (2.0 / n as f64).sqrt() * 1.5
}

/// Slack-adjusted 1% critical value for the one-sample KS test.
pub fn one_sample_threshold(n: usize) -> f64 {
    1.63 / (n as f64).sqrt() * 1.5
}

// ---------------------------------------------------------------------------
// individual checks
// ---------------------------------------------------------------------------

/// Evenly spaced grid on `[min, max]`.
pub fn grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    let step = (max - min) / (points - 1) as f64;
    (0..points).map(|i| min + step * i as f64).collect()
}

/// Max abs deviation between the mixture pdf and the direct pdf over a grid.
pub fn check_density_identity(
    rep: &MixtureRepresentation,
    xs: &[f64],
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &x in xs {
        worst = worst.max((rep.pdf(x)? - rep.target_pdf(x)?).abs());
    }
    Ok(CheckReport::new(format!("density[{}]", rep.descriptor()), worst, tol, seed).timed(start))
}

/// Max abs deviation between the mixture cdf and the direct cdf over a grid.
pub fn check_cdf_identity(
    rep: &MixtureRepresentation,
    xs: &[f64],
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &x in xs {
        worst = worst.max((rep.cdf(x) - rep.target_cdf(x)).abs());
    }
    Ok(CheckReport::new(format!("cdf[{}]", rep.descriptor()), worst, tol, seed).timed(start))
}

/// Two-sample KS between two samplers, each on its own stream.
pub fn check_two_sample(
    name: &str,
    n: usize,
    seed: u64,
    stream_a: u64,
    stream_b: u64,
    mut sampler_a: impl FnMut(&mut Rng) -> f64,
    mut sampler_b: impl FnMut(&mut Rng) -> f64,
) -> CheckReport {
    let start = Instant::now();
    let mut rng_a = Rng::new(seed, stream_a);
    let mut rng_b = Rng::new(seed, stream_b);
    let a: Vec<f64> = (0..n).map(|_| sampler_a(&mut rng_a)).collect();
    let b: Vec<f64> = (0..n).map(|_| sampler_b(&mut rng_b)).collect();
    CheckReport::new(name, ks_two_sample(&a, &b), two_sample_threshold(n), seed).timed(start)
}

/// Residual of the Poisson-family mixture identity up to `k_max`, with the
/// index law truncated at `n_max`.
pub fn check_poisson_mixture(
    spec: &AltSpec,
    eta: f64,
    k_max: usize,
    n_max: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mixture = poisson_mixture_from_altnormal(spec, eta, n_max, k_max, tol)?;
    let metric = mixture.residual(k_max);
    Ok(CheckReport::new(
        format!("poisson-mixture[{}, eta={eta}]", spec.label()),
        metric,
        tol,
        seed,
    )
    .timed(start))
}

/// Configuration of the two-state local-time check.
#[derive(Debug, Clone, Copy)]
pub struct RayKnightConfig {
    pub eta: f64,
    pub jump_rate: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl RayKnightConfig {
    pub fn new(eta: f64, jump_rate: f64, n_paths: usize, seed: u64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("eta must be > 0, got {eta}")));
        }
        if !(jump_rate > 0.0) {
            return Err(Error::Domain(format!("jump rate must be > 0, got {jump_rate}")));
        }
        if n_paths == 0 {
            return Err(Error::Domain("n_paths must be >= 1".into()));
        }
        Ok(RayKnightConfig { eta, jump_rate, n_paths, seed })
    }
}

/// Total time in state 1 before the local time at 0 reaches `eta`, by the
/// Poisson-count shortcut: visits to 1 arrive at unit rate in local time,
/// so their count is Poisson(eta) and each sojourn is exponential.
fn ray_knight_shortcut(cfg: &RayKnightConfig, rng: &mut Rng) -> f64 {
    let n = sample_poisson(cfg.eta * cfg.jump_rate, rng);
    (0..n).map(|_| rng.exponential() / cfg.jump_rate).sum()
}

/// Same quantity by raw pathwise simulation of the chain: alternate
/// exponential holding times, accumulating time at 0 until it reaches `eta`.
fn ray_knight_pathwise(cfg: &RayKnightConfig, rng: &mut Rng) -> f64 {
    let mut local = 0.0;
    let mut time_at_one = 0.0;
    loop {
        local += rng.exponential() / cfg.jump_rate;
        if local >= cfg.eta {
            return time_at_one;
        }
        time_at_one += rng.exponential() / cfg.jump_rate;
    }
}

/// Two-sample KS between `Y^2/2 + L` and `(Y + sqrt(2 eta))^2 / 2`, where
/// `L` is the time spent in state 1 before the local time at 0 hits `eta`.
/// Set `pathwise` to simulate the chain's holding times one by one instead
/// of using the Poisson-count shortcut.
pub fn ray_knight_two_state(cfg: &RayKnightConfig, pathwise: bool) -> CheckReport {
    let start = Instant::now();
    let mut rng_a = Rng::new(cfg.seed, 7_001);
    let mut rng_b = Rng::new(cfg.seed, 7_002);
    let shift = (2.0 * cfg.eta).sqrt();
    let left: Vec<f64> = (0..cfg.n_paths)
        .map(|_| {
            let l = if pathwise {
                ray_knight_pathwise(cfg, &mut rng_a)
            } else {
                ray_knight_shortcut(cfg, &mut rng_a)
            };
            let y = rng_a.standard_normal();
            0.5 * y * y + l
        })
        .collect();
    let right: Vec<f64> = (0..cfg.n_paths)
        .map(|_| {
            let y = rng_b.standard_normal() + shift;
            0.5 * y * y
        })
        .collect();
    let mode = if pathwise { "pathwise" } else { "shortcut" };
    CheckReport::new(
        format!("ray-knight[eta={}, {mode}]", cfg.eta),
        ks_two_sample(&left, &right),
        two_sample_threshold(cfg.n_paths),
        cfg.seed,
    )
    .timed(start)
}

/// Internal consistency: KS between the pathwise and shortcut `L` samples.
pub fn ray_knight_consistency(cfg: &RayKnightConfig) -> CheckReport {
    let start = Instant::now();
    let mut rng_a = Rng::new(cfg.seed, 7_003);
    let mut rng_b = Rng::new(cfg.seed, 7_004);
    let a: Vec<f64> = (0..cfg.n_paths).map(|_| ray_knight_pathwise(cfg, &mut rng_a)).collect();
    let b: Vec<f64> = (0..cfg.n_paths).map(|_| ray_knight_shortcut(cfg, &mut rng_b)).collect();
    CheckReport::new(
        format!("ray-knight-consistency[eta={}]", cfg.eta),
        ks_two_sample(&a, &b),
        two_sample_threshold(cfg.n_paths),
        cfg.seed,
    )
    .timed(start)
}

/// KS between `max(E_1..E_n)` and `sum_{j<=n} E_j/j` samples.
pub fn check_renyi_sukhatme(n: usize, draws: usize, seed: u64) -> CheckReport {
    check_two_sample(
        &format!("renyi-sukhatme[n={n}]"),
        draws,
        seed,
        7_101,
        7_102,
        move |rng| (0..n).map(|_| rng.exponential()).fold(0.0f64, f64::max),
        move |rng| (1..=n).map(|j| rng.exponential() / j as f64).sum(),
    )
}

/// One-sample analytic cross-check: empirical cdf of the scaled-sum
/// construction against `(1 - e^{-x})^n`.
pub fn check_renyi_sukhatme_analytic(n: usize, draws: usize, seed: u64) -> CheckReport {
    let start = Instant::now();
    let mut rng = Rng::new(seed, 7_103);
    let sample: Vec<f64> =
        (0..draws).map(|_| (1..=n).map(|j| rng.exponential() / j as f64).sum()).collect();
    let ks = ks_one_sample(&sample, |x| (-(-x).exp_m1()).powf(n as f64));
    CheckReport::new(
        format!("renyi-sukhatme-analytic[n={n}]"),
        ks,
        one_sample_threshold(draws),
        seed,
    )
    .timed(start)
}

/// TV distance between sampled index values and the exact weight pmf.
pub fn check_index_sampler_tv(
    spec: &AltSpec,
    theta: f64,
    draws: usize,
    tol: f64,
    seed: u64,
    stream: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let sampler = AltIndexSampler::new(spec, theta)?;
    let weights = altnormal_weights(spec, theta, 512, 1e-10)?;
    let mut rng = Rng::new(seed, stream);
    let mut counts = vec![0u64; weights.probs().len() + 1];
    for _ in 0..draws {
        let n = sampler.sample(&mut rng) as usize;
        let slot = n.min(counts.len() - 1);
        counts[slot] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / draws as f64).collect();
    let metric = tv_distance(weights.probs(), &empirical);
    Ok(CheckReport::new(
        format!("index-sampler-tv[{}, theta={theta}]", spec.label()),
        metric,
        tol,
        seed,
    )
    .timed(start))
}

/// Max deviation between the closed-form index pgf and the truncated weight
/// series over a small grid of arguments.
pub fn check_index_pgf(spec: &AltSpec, theta: f64, tol: f64, seed: u64) -> Result<CheckReport> {
    let start = Instant::now();
    let weights = altnormal_weights(spec, theta, 512, 1e-11)?;
    let mut worst = 0.0f64;
    for &t in &[0.0f64, 0.2, 0.5, 0.8, 0.95, 1.0] {
        let series: f64 =
            weights.probs().iter().enumerate().map(|(n, &w)| w * t.powi(n as i32)).sum();
        let closed = altnormal_index_pgf(spec, theta, t, 512)?;
        worst = worst.max((series - closed).abs());
    }
    Ok(CheckReport::new(format!("index-pgf[{}, theta={theta}]", spec.label()), worst, tol, seed)
        .timed(start))
}

// ---------------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------------

/// Named verification suites exposed by the frontend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Classical,
    Logistic,
    HypSec,
    AltnormalA,
    AltnormalB,
    AltnormalC,
    AltnormalD,
    PoissonMix,
    RayKnight,
    RenyiSukhatme,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "classical" => Suite::Classical,
            "logistic" => Suite::Logistic,
            "hypsec" => Suite::HypSec,
            "altnormal-a" => Suite::AltnormalA,
            "altnormal-b" => Suite::AltnormalB,
            "altnormal-c" => Suite::AltnormalC,
            "altnormal-d" => Suite::AltnormalD,
            "poisson-mix" => Suite::PoissonMix,
            "ray-knight" => Suite::RayKnight,
            "renyi-sukhatme" => Suite::RenyiSukhatme,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn names() -> &'static [&'static str] {
        &[
            "classical",
            "logistic",
            "hypsec",
            "altnormal-a",
            "altnormal-b",
            "altnormal-c",
            "altnormal-d",
            "poisson-mix",
            "ray-knight",
            "renyi-sukhatme",
            "all",
        ]
    }
}

/// Options shared by the suites. `n_samples` scales every Monte Carlo check.
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    pub n_samples: usize,
    pub eta: f64,
    pub n_paths: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 42, n_samples: 100_000, eta: 1.0, n_paths: 100_000 }
    }
}

fn suite_classical(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let xs = grid(1e-3, 10.0, 200);
    let mut reports = Vec::new();
    for &delta in &[0.3, 1.0, 2.5] {
        let rep = classical_chisq(delta)?;
        reports.push(check_density_identity(&rep, &xs, 1e-9, o.seed)?);
    }
    let rep = classical_chisq(1.0)?;
    let rep2 = rep.clone();
    reports.push(check_two_sample(
        "two-sample[classical, delta=1]",
        o.n_samples,
        o.seed,
        1_001,
        1_002,
        move |rng| rep.sample_direct(rng),
        move |rng| rep2.sample_mixture(rng),
    ));
    Ok(reports)
}

fn suite_logistic(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let xs = grid(1e-3, 12.0, 200);
    let mut reports = Vec::new();
    for &delta in &[0.3, -0.3, 1.0, -1.0, 2.5, -2.5] {
        let rep = logistic_representation(delta, Transform::Abs)?;
        reports.push(check_cdf_identity(&rep, &xs, 1e-10, o.seed)?);
        reports.push(check_density_identity(&rep, &xs, 1e-8, o.seed)?);
    }
    let rep = logistic_representation(1.0, Transform::Abs)?;
    for (construction, tag, sa, sb) in [
        (LogisticConstruction::Sum, "sum", 1_101u64, 1_102u64),
        (LogisticConstruction::Max, "max", 1_103, 1_104),
    ] {
        let ra = rep.clone();
        let rb = rep.clone();
        reports.push(check_two_sample(
            &format!("two-sample[logistic, {tag} vs direct]"),
            o.n_samples,
            o.seed,
            sa,
            sb,
            move |rng| sample_logistic_construction(&ra, construction, rng),
            move |rng| rb.sample_direct(rng),
        ));
    }
    Ok(reports)
}

fn suite_hypsec(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let xs = grid(1e-3, 8.0, 200);
    let mut reports = Vec::new();
    for &delta in &[0.3, 1.0, 2.0, 2.5] {
        let rep = hypsec_representation(delta, Transform::Abs)?;
        reports.push(check_density_identity(&rep, &xs, 1e-9, o.seed)?);
    }
    // component normalization, k <= 10
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..=10u64 {
        let f = |x: f64| hypsec_component_pdf(k, x).unwrap();
        let (mass, _) = integrate(&f, 1e-12, 40.0, 1e-11);
        worst = worst.max((mass - 1.0).abs());
    }
    reports.push(CheckReport::new("hypsec-component-mass[k<=10]", worst, 1e-8, o.seed).timed(start));
    let rep = hypsec_representation(1.0, Transform::Square)?;
    let ra = rep.clone();
    let rb = rep.clone();
    reports.push(check_two_sample(
        "two-sample[hypsec, phi-form vs direct]",
        o.n_samples,
        o.seed,
        1_201,
        1_202,
        move |rng| sample_hypsec_phi_form(&ra, rng),
        move |rng| rb.sample_direct(rng),
    ));
    Ok(reports)
}

fn builtin_for(suite: Suite) -> BuiltinSpec {
    match suite {
        Suite::AltnormalA => BuiltinSpec::Classical,
        Suite::AltnormalB => BuiltinSpec::Geometric { alpha: 0.0 },
        Suite::AltnormalC => BuiltinSpec::GeometricV1,
        Suite::AltnormalD => BuiltinSpec::LogSeries,
        _ => unreachable!("not an altnormal suite"),
    }
}

fn suite_altnormal(suite: Suite, o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let builtin = builtin_for(suite);
    let spec = AltSpec::Builtin(builtin);
    let xs = grid(1e-3, 10.0, 120);
    let mut reports = Vec::new();
    for &delta in &[0.5, 1.0, 2.0] {
        let rep = altnormal_representation_auto(&spec, delta)?;
        reports.push(check_density_identity(&rep, &xs, 1e-8, o.seed)?);
    }
    if builtin == BuiltinSpec::Classical {
        // the classical spec must reproduce the canonical Poisson weights
        let start = Instant::now();
        let mut worst = 0.0f64;
        for &delta in &[0.5, 1.0, 2.0] {
            let alt = altnormal_representation_auto(&spec, delta)?;
            let canonical = classical_chisq(delta)?;
            for k in 0..=canonical.mixing().truncation() {
                worst = worst.max((alt.mixing().pmf(2 * k) - canonical.mixing().pmf(k)).abs());
            }
        }
        reports.push(CheckReport::new("altnormal-classical-weights", worst, 1e-14, o.seed).timed(start));
    }
    // index pgf and sampler checks on a representative theta
    let theta = builtin.u_inv(1.0);
    reports.push(check_index_pgf(&spec, theta, 1e-10, o.seed)?);
    let tv_draws = (o.n_samples * 2).max(10_000);
    reports.push(check_index_sampler_tv(&spec, theta, tv_draws, 0.005, o.seed, 1_301)?);
    Ok(reports)
}

fn suite_poisson_mix(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for builtin in BuiltinSpec::all_default() {
        let spec = AltSpec::Builtin(builtin);
        for &eta in &[0.32, 0.5, 1.0] {
            reports.push(check_poisson_mixture(&spec, eta, 12, 240, 1e-9, o.seed)?);
        }
    }
    Ok(reports)
}

fn suite_ray_knight(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for &eta in &[0.5, o.eta] {
        let cfg = RayKnightConfig::new(eta, 1.0, o.n_paths, o.seed)?;
        reports.push(ray_knight_two_state(&cfg, false));
    }
    let cfg = RayKnightConfig::new(o.eta, 1.0, o.n_paths, o.seed)?;
    reports.push(ray_knight_two_state(&cfg, true));
    reports.push(ray_knight_consistency(&cfg));
    Ok(reports)
}

fn suite_renyi_sukhatme(o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    Ok(vec![
        check_renyi_sukhatme(1, o.n_samples, o.seed),
        check_renyi_sukhatme(5, o.n_samples, o.seed),
        check_renyi_sukhatme_analytic(5, o.n_samples, o.seed),
    ])
}

/// Run a suite with the given options.
pub fn run_suite(suite: Suite, o: &SuiteOptions) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Classical => suite_classical(o),
        Suite::Logistic => suite_logistic(o),
        Suite::HypSec => suite_hypsec(o),
        Suite::AltnormalA | Suite::AltnormalB | Suite::AltnormalC | Suite::AltnormalD => {
            suite_altnormal(suite, o)
        }
        Suite::PoissonMix => suite_poisson_mix(o),
        Suite::RayKnight => suite_ray_knight(o),
        Suite::RenyiSukhatme => suite_renyi_sukhatme(o),
        Suite::All => {
            let mut reports = Vec::new();
            for s in [
                Suite::Classical,
                Suite::Logistic,
                Suite::HypSec,
                Suite::AltnormalA,
                Suite::AltnormalB,
                Suite::AltnormalC,
                Suite::AltnormalD,
                Suite::PoissonMix,
                Suite::RayKnight,
                Suite::RenyiSukhatme,
            ] {
                reports.extend(run_suite(s, o)?);
            }
            Ok(reports)
        }
    }
}

/// Render reports as CSV (header + one row per report).
pub fn reports_to_csv(reports: &[CheckReport], with_timings: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row(with_timings));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// coefficient identity checks (used by the acceptance gate)
// ---------------------------------------------------------------------------

/// Identity residuals for the worked examples of the two-series family:
/// inner sums vs binomial coefficients, three routes to `b_n`, and the
/// coefficients of `u^2/2` for the log series.
pub fn coefficient_identity_residuals() -> Result<(f64, f64, f64)> {
    // (b): inner(k, n) = C(n + alpha, n - 2k) for the geometric spec
    let mut worst_b = 0.0f64;
    for &alpha in &[-0.5, 0.0, 1.0, 2.0] {
        let spec = BuiltinSpec::Geometric { alpha }.series_spec(20);
        let ac = alt_coefficients(&spec, 20)?;
        for n in 0..=20usize {
            for k in 0..=(n / 2) {
                let expect = binom(n as f64 + alpha, (n - 2 * k) as u64);
                worst_b = worst_b.max((ac.inner_sum(k, n) - expect).abs());
            }
        }
    }
    // (c): three routes to b_n for the v = 1 geometric spec
    let cache = CombinatorialCache::new(64);
    let spec = BuiltinSpec::GeometricV1.series_spec(20);
    let ac = alt_coefficients(&spec, 20)?;
    let mut worst_c = 0.0f64;
    for n in 0..=20usize {
        let direct = ac.b[n];
        let bin = b_geometric_v1_binomial(n);
        let lah = b_geometric_v1_lah(n, &cache);
        worst_c = worst_c.max((direct - bin).abs()).max((direct - lah).abs());
    }
    // (d): coefficients of u^2/2 are 2 H_{n-1} / n for u = -log(1-t)
    let spec = BuiltinSpec::LogSeries.series_spec(30);
    let sq = crate::series::conv_power(spec.p(), 2, 30)?;
    let mut worst_d = 0.0f64;
    for n in 2..=30usize {
        let expect = 2.0 * crate::special::harmonic((n - 1) as u64) / n as f64;
        worst_d = worst_d.max((sq.coeff(n) - expect).abs());
    }
    Ok((worst_b, worst_c, worst_d))
}
