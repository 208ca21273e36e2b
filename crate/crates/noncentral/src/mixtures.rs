//! Mixture representations: a mixing law on the nonnegative integers paired
//! with a component family of densities on the positive half-line, plus the
//! direct closed-form target density the pair must reproduce.
//!
//! Builders cover the classical Poisson/chi-squared mixture, the logistic and
//! hyperbolic secant representations, the two-series family of alternative
//! normal representations, and the induced mixtures of the Poisson family.

use crate::distributions::{
    beta_inc, chisq_cdf, chisq_pdf, noncentral_direct_cdf, noncentral_direct_pdf, sample_poisson,
    Family, Law, NoncentralParam, Transform,
};
use crate::rng::Rng;
use crate::series::{alt_coefficients, eval_series, tilted_pmf, BuiltinSpec, SeriesSpec};
use crate::special::log_gamma;
use crate::{Error, Result};

/// Hard cap on certified-truncation growth.
const TRUNCATION_CAP: usize = 4096;

/// Default tail tolerance for mixing-law truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// mixing laws
// ---------------------------------------------------------------------------

/// A pmf on the nonnegative integers stored up to a certified truncation:
/// the mass beyond the stored prefix is bounded by `tail_bound`.
#[derive(Debug, Clone)]
pub struct MixingLaw {
    probs: Vec<f64>,
    tail_bound: f64,
    descriptor: String,
}

impl MixingLaw {
    pub fn from_parts(probs: Vec<f64>, tail_bound: f64, descriptor: String) -> Self {
        MixingLaw { probs, tail_bound, descriptor }
    }

    pub fn pmf(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Highest stored index T.
    pub fn truncation(&self) -> usize {
        self.probs.len() - 1
    }

    /// Upper bound on the mass beyond the truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, &p)| n as f64 * p).sum()
    }

    /// Inverse-cdf walk; draws beyond the stored mass clamp to the last
    /// index with positive probability.
    pub fn sample(&self, rng: &mut Rng) -> usize {
        let u = rng.uniform();
        let mut cum = 0.0;
        let mut last_positive = 0;
        for (n, &p) in self.probs.iter().enumerate() {
            cum += p;
            if p > 0.0 {
                last_positive = n;
            }
            if u <= cum {
                return n;
            }
        }
        last_positive
    }

    /// Poisson(lambda) with tail bound `term(T+1)/(1 - lambda/(T+2))`.
    pub fn poisson(lambda: f64, tol: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::Domain(format!("Poisson parameter must be >= 0, got {lambda}")));
        }
        let mut probs = Vec::new();
        let mut term = (-lambda).exp();
        loop {
            probs.push(term);
            let n = probs.len(); // index of the next term
            term *= lambda / n as f64;
            if n as f64 > lambda {
                let ratio = lambda / (n as f64 + 1.0);
                let bound = term / (1.0 - ratio);
                if bound < tol {
                    return Ok(MixingLaw::from_parts(probs, bound, format!("poisson({lambda})")));
                }
            }
            if n > TRUNCATION_CAP {
                return Err(Error::Truncation(format!(
                    "Poisson({lambda}) tail bound {tol} not reached within {TRUNCATION_CAP} terms"
                )));
            }
        }
    }

    /// Negative binomial with parameters 1/2 and theta:
    /// `w(k) = C(2k,k) 4^{-k} (1-theta)^k theta^{1/2}`. The term ratio is
    /// bounded by `1 - theta`, giving the tail bound `term(T+1)/theta`.
    pub fn negative_binomial_half(theta: f64, tol: f64) -> Result<Self> {
        if !(0.0 < theta && theta < 1.0) {
            return Err(Error::Domain(format!("theta must lie in (0,1), got {theta}")));
        }
        let mut probs = Vec::new();
        let mut term = theta.sqrt();
        loop {
            probs.push(term);
            let k = probs.len(); // index of the next term
            // w(k)/w(k-1) = (2k-1)/(2k) * (1-theta)
            term *= (2.0 * k as f64 - 1.0) / (2.0 * k as f64) * (1.0 - theta);
            let bound = term / theta;
            if bound < tol {
                return Ok(MixingLaw::from_parts(
                    probs,
                    bound,
                    format!("negative-binomial(1/2, {theta})"),
                ));
            }
            if k > TRUNCATION_CAP {
                return Err(Error::Truncation(format!(
                    "negative binomial tail bound {tol} not reached within {TRUNCATION_CAP} terms"
                )));
            }
        }
    }

    /// Index law of the logistic representation:
    /// `P(N = n) = theta (1-theta)^n + (1-theta) theta^n` for `n >= 1`,
    /// with the exact tail `(1-theta)^{T+1} + theta^{T+1}`.
    pub fn logistic_index(theta: f64, tol: f64) -> Result<Self> {
        if !(0.0 < theta && theta < 1.0) {
            return Err(Error::Domain(format!("theta must lie in (0,1), got {theta}")));
        }
        let mut probs = vec![0.0];
        let mut pow_a = 1.0 - theta; // (1-theta)^n
        let mut pow_b = theta; // theta^n
        loop {
            probs.push(theta * pow_a + (1.0 - theta) * pow_b);
            pow_a *= 1.0 - theta;
            pow_b *= theta;
            let bound = pow_a + pow_b;
            if bound < tol {
                return Ok(MixingLaw::from_parts(probs, bound, format!("logistic-index({theta})")));
            }
            if probs.len() > TRUNCATION_CAP {
                return Err(Error::Truncation(format!(
                    "logistic index tail bound {tol} not reached within {TRUNCATION_CAP} terms"
                )));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// component families
// ---------------------------------------------------------------------------

/// An indexed family of densities/cdfs/samplers on the positive half-line.
#[derive(Debug, Clone)]
pub enum ComponentFamily {
    /// `pdf(n, .)` is the central chi-squared density with `step*n + offset`
    /// degrees of freedom. The classical mixture uses step 2, offset 1.
    ChiSq { step: u32, offset: u32 },
    /// Law of `max(E_1..E_n)` for iid mean-1 exponentials (equivalently, by
    /// the Renyi-Sukhatme identity, of `sum_{j<=n} E_j/j`), or of its square.
    MaxExp { transform: Transform },
    /// The hyperbolic secant component densities `g_k`, or their squared
    /// variant `g_k(sqrt(x)) / (2 sqrt(x))`.
    HypSec { transform: Transform },
    /// `h_n` stored as coefficient vectors over the odd chi-squared basis:
    /// `pdf(n, x) = sum_k coeffs[n][k] g_{2k+1}(x)`.
    OddChiSqMix { coeffs: Vec<Vec<f64>> },
}

/// Density of the hyperbolic secant mixture component `g_k`:
/// `(2^{2k+3/2} / (pi C(2k,k))) (cosh x / cosh 2x) (2 sinh^2 x / cosh 2x)^k`.
pub fn hypsec_component_pdf(k: u64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("hypsec component requires x > 0, got {x}")));
    }
    let base = x.cosh() / (2.0 * x).cosh();
    let ring = 2.0 * x.sinh() * x.sinh() / (2.0 * x).cosh();
    let log_central = log_gamma(2.0 * k as f64 + 1.0)? - 2.0 * log_gamma(k as f64 + 1.0)?;
    let log_norm = (2.0 * k as f64 + 1.5) * 2.0f64.ln() - std::f64::consts::PI.ln() - log_central;
    let log_ring = if k == 0 { 0.0 } else { k as f64 * ring.ln() };
    Ok((log_norm + base.ln() + log_ring).exp())
}

/// Distribution function of `g_k`: a random variable with density `g_k` is
/// `psi(Z)` with `Z ~ Beta(1/2, k + 1/2)` and `psi = (1/2) arcsech`, so
/// `P <= x` equals `1 - I_{sech(2x)}(1/2, k + 1/2)`.
pub fn hypsec_component_cdf(k: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = 1.0 / (2.0 * x).cosh();
    1.0 - beta_inc(0.5, k as f64 + 0.5, z)
}

/// `(1/2) arcsech(z)` for `z` in (0, 1].
pub fn half_arcsech(z: f64) -> f64 {
    0.5 * ((1.0 + (1.0 - z * z).max(0.0).sqrt()) / z).ln()
}

impl ComponentFamily {
    pub fn pdf(&self, n: usize, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("component density requires x > 0, got {x}")));
        }
        match self {
            ComponentFamily::ChiSq { step, offset } => {
                chisq_pdf(step * n as u32 + offset, x)
            }
            ComponentFamily::MaxExp { transform } => {
                if n == 0 {
                    return Ok(0.0);
                }
                let nf = n as f64;
                Ok(match transform {
                    Transform::Abs => {
                        nf * (-x).exp() * (-(-x).exp_m1()).powf(nf - 1.0)
                    }
                    Transform::Square => {
                        let r = x.sqrt();
                        nf * (-r).exp() * (-(-r).exp_m1()).powf(nf - 1.0) / (2.0 * r)
                    }
                })
            }
            ComponentFamily::HypSec { transform } => match transform {
                Transform::Abs => hypsec_component_pdf(n as u64, x),
                Transform::Square => {
                    let r = x.sqrt();
                    Ok(hypsec_component_pdf(n as u64, r)? / (2.0 * r))
                }
            },
            ComponentFamily::OddChiSqMix { coeffs } => {
                let row = coeffs.get(n).map(|r| r.as_slice()).unwrap_or(&[]);
                let mut acc = 0.0;
                for (k, &c) in row.iter().enumerate() {
                    if c > 0.0 {
                        acc += c * chisq_pdf(2 * k as u32 + 1, x)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    pub fn cdf(&self, n: usize, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            ComponentFamily::ChiSq { step, offset } => chisq_cdf(step * n as u32 + offset, x),
            ComponentFamily::MaxExp { transform } => {
                let y = match transform {
                    Transform::Abs => x,
                    Transform::Square => x.sqrt(),
                };
                (-(-y).exp_m1()).powf(n as f64)
            }
            ComponentFamily::HypSec { transform } => {
                let y = match transform {
                    Transform::Abs => x,
                    Transform::Square => x.sqrt(),
                };
                hypsec_component_cdf(n as u64, y)
            }
            ComponentFamily::OddChiSqMix { coeffs } => {
                let row = coeffs.get(n).map(|r| r.as_slice()).unwrap_or(&[]);
                row.iter()
                    .enumerate()
                    .map(|(k, &c)| c * chisq_cdf(2 * k as u32 + 1, x))
                    .sum()
            }
        }
    }

    pub fn sample(&self, n: usize, rng: &mut Rng) -> f64 {
        match self {
            ComponentFamily::ChiSq { step, offset } => {
                Law::ChiSq { k: step * n as u32 + offset }.sample(rng)
            }
            ComponentFamily::MaxExp { transform } => {
                // sum construction: same law as the max by Renyi-Sukhatme
                let s: f64 = (1..=n).map(|j| rng.exponential() / j as f64).sum();
                match transform {
                    Transform::Abs => s,
                    Transform::Square => s * s,
                }
            }
            ComponentFamily::HypSec { transform } => {
                let z = Law::Beta { a: 0.5, b: n as f64 + 0.5 }.sample(rng);
                let y = half_arcsech(z);
                match transform {
                    Transform::Abs => y,
                    Transform::Square => y * y,
                }
            }
            ComponentFamily::OddChiSqMix { coeffs } => {
                let row = coeffs.get(n).map(|r| r.as_slice()).unwrap_or(&[1.0]);
                let u = rng.uniform();
                let mut cum = 0.0;
                let mut pick = 0usize;
                for (k, &c) in row.iter().enumerate() {
                    cum += c;
                    if c > 0.0 {
                        pick = k;
                    }
                    if u <= cum {
                        pick = k;
                        break;
                    }
                }
                Law::ChiSq { k: 2 * pick as u32 + 1 }.sample(rng)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// mixture representations
// ---------------------------------------------------------------------------

/// The direct law a representation must reproduce.
#[derive(Debug, Clone, Copy)]
pub enum Target {
    Noncentral { param: NoncentralParam, transform: Transform },
    /// Noncentral chi-squared with k >= 2 degrees of freedom; no elementary
    /// closed form, the direct sampler sums shifted squared normals.
    ChiSqK { k: u32, delta_sq: f64 },
}

/// A mixing law paired with a component family and the target density.
#[derive(Debug, Clone)]
pub struct MixtureRepresentation {
    mixing: MixingLaw,
    components: ComponentFamily,
    target: Target,
    descriptor: String,
}

impl MixtureRepresentation {
    pub fn mixing(&self) -> &MixingLaw {
        &self.mixing
    }

    pub fn components(&self) -> &ComponentFamily {
        &self.components
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Truncated mixture density `sum_n w(n) pdf_n(x)`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (n, &w) in self.mixing.probs().iter().enumerate() {
            if w > 0.0 {
                acc += w * self.components.pdf(n, x)?;
            }
        }
        Ok(acc)
    }

    /// Truncated mixture distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        self.mixing
            .probs()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(n, &w)| w * self.components.cdf(n, x))
            .sum()
    }

    /// Closed-form density of the target law. For the k-degrees-of-freedom
    /// chi-squared target (k >= 2) there is no elementary form and the
    /// certified mixture itself is the reference.
    pub fn target_pdf(&self, x: f64) -> Result<f64> {
        match self.target {
            Target::Noncentral { param, transform } => {
                noncentral_direct_pdf(&param, transform, x)
            }
            Target::ChiSqK { .. } => self.pdf(x),
        }
    }

    pub fn target_cdf(&self, x: f64) -> f64 {
        match self.target {
            Target::Noncentral { param, transform } => noncentral_direct_cdf(&param, transform, x),
            Target::ChiSqK { .. } => self.cdf(x),
        }
    }

    /// Draw via the mixture: index from the mixing law, value from the
    /// selected component.
    pub fn sample_mixture(&self, rng: &mut Rng) -> f64 {
        let n = self.mixing.sample(rng);
        self.components.sample(n, rng)
    }

    /// Draw from the target law directly.
    pub fn sample_direct(&self, rng: &mut Rng) -> f64 {
        match self.target {
            Target::Noncentral { param, transform } => {
                crate::distributions::sample_noncentral_direct(&param, transform, rng)
            }
            Target::ChiSqK { k, delta_sq } => {
                // all noncentrality in the first coordinate
                let mut acc = {
                    let z = rng.standard_normal() + delta_sq.sqrt();
                    z * z
                };
                for _ in 1..k {
                    let z = rng.standard_normal();
                    acc += z * z;
                }
                acc
            }
        }
    }
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

/// The classical representation: Poisson(delta^2/2) mixture of the central
/// chi-squared densities with odd degrees of freedom.
pub fn classical_chisq(delta: f64) -> Result<MixtureRepresentation> {
    let param = NoncentralParam::new(Family::Normal, delta)?;
    Ok(MixtureRepresentation {
        mixing: MixingLaw::poisson(param.eta(), DEFAULT_TAIL_TOL)?,
        components: ComponentFamily::ChiSq { step: 2, offset: 1 },
        target: Target::Noncentral { param, transform: Transform::Square },
        descriptor: format!("classical-chisq(delta={delta})"),
    })
}

/// Noncentral chi-squared with `k` degrees of freedom: Poisson(delta^2/2)
/// mixture of `chi^2_{2n+k}`.
pub fn noncentral_chisq_k(k: u32, delta_sq: f64) -> Result<MixtureRepresentation> {
    if k == 0 {
        return Err(Error::Domain("degrees of freedom must be >= 1".into()));
    }
    if !(delta_sq > 0.0) {
        return Err(Error::Domain(format!("delta^2 must be > 0, got {delta_sq}")));
    }
    let target = if k == 1 {
        Target::Noncentral {
            param: NoncentralParam::new(Family::Normal, delta_sq.sqrt())?,
            transform: Transform::Square,
        }
    } else {
        Target::ChiSqK { k, delta_sq }
    };
    Ok(MixtureRepresentation {
        mixing: MixingLaw::poisson(0.5 * delta_sq, DEFAULT_TAIL_TOL)?,
        components: ComponentFamily::ChiSq { step: 2, offset: k },
        target,
        descriptor: format!("noncentral-chisq(k={k}, delta_sq={delta_sq})"),
    })
}

/// Index law of the logistic representation (a two-geometric mixture).
pub fn logistic_index_law(theta: f64) -> Result<MixingLaw> {
    MixingLaw::logistic_index(theta, DEFAULT_TAIL_TOL)
}

/// Which sampler realizes the logistic representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogisticConstruction {
    /// `sum_{j<=N} E_j / j`
    Sum,
    /// `max(E_1, ..., E_N)`
    Max,
}

/// Logistic representation: `|X+delta|` equals a random sum of scaled
/// exponentials, `(X+delta)^2` the max of N squared exponentials.
pub fn logistic_representation(delta: f64, transform: Transform) -> Result<MixtureRepresentation> {
    let param = NoncentralParam::new(Family::Logistic, delta)?;
    Ok(MixtureRepresentation {
        mixing: logistic_index_law(param.theta())?,
        components: ComponentFamily::MaxExp { transform },
        target: Target::Noncentral { param, transform },
        descriptor: format!("logistic(delta={delta}, {transform:?})"),
    })
}

/// Sample the logistic representation through a named construction.
pub fn sample_logistic_construction(
    rep: &MixtureRepresentation,
    construction: LogisticConstruction,
    rng: &mut Rng,
) -> f64 {
    let n = rep.mixing.sample(rng);
    let value = match construction {
        LogisticConstruction::Sum => (1..=n).map(|j| rng.exponential() / j as f64).sum(),
        LogisticConstruction::Max => (0..n).map(|_| rng.exponential()).fold(0.0f64, f64::max),
    };
    match rep.target {
        Target::Noncentral { transform: Transform::Square, .. } => value * value,
        _ => value,
    }
}

/// Mixing law of the hyperbolic secant representation: negative binomial
/// with parameters 1/2 and theta.
pub fn hypsec_mixing(theta: f64) -> Result<MixingLaw> {
    MixingLaw::negative_binomial_half(theta, DEFAULT_TAIL_TOL)
}

/// Hyperbolic secant representation of `|X+delta|` or `(X+delta)^2`.
pub fn hypsec_representation(delta: f64, transform: Transform) -> Result<MixtureRepresentation> {
    let param = NoncentralParam::new(Family::HypSec, delta)?;
    Ok(MixtureRepresentation {
        mixing: hypsec_mixing(param.theta())?,
        components: ComponentFamily::HypSec { transform },
        target: Target::Noncentral { param, transform },
        descriptor: format!("hypsec(delta={delta}, {transform:?})"),
    })
}

/// Sampler for the phi-form of the hyperbolic secant identity:
/// `(X+delta)^2 = psi(X_0^2 / (X_0^2 + X_1^2 + 2 sum_{j<=N} E_j))^2` with
/// `N` negative binomial(1/2, theta) and `psi = (1/2) arcsech`.
pub fn sample_hypsec_phi_form(rep: &MixtureRepresentation, rng: &mut Rng) -> f64 {
    let n = rep.mixing.sample(rng);
    let x0 = rng.standard_normal();
    let x1 = rng.standard_normal();
    let extra: f64 = (0..n).map(|_| 2.0 * rng.exponential()).sum();
    let ratio = x0 * x0 / (x0 * x0 + x1 * x1 + extra);
    let y = half_arcsech(ratio);
    match rep.target {
        Target::Noncentral { transform: Transform::Square, .. } => y * y,
        _ => y,
    }
}

// ---------------------------------------------------------------------------
// alternative normal representations
// ---------------------------------------------------------------------------

/// A representation spec: one of the four built-ins (closed-form `u`, `v`,
/// `u^{-1}`) or a user-supplied coefficient pair.
#[derive(Debug, Clone)]
pub enum AltSpec {
    Builtin(BuiltinSpec),
    Custom(SeriesSpec),
}

impl AltSpec {
    pub fn label(&self) -> String {
        match self {
            AltSpec::Builtin(b) => b.label(),
            AltSpec::Custom(_) => "custom".into(),
        }
    }

    pub fn theta_for_delta(&self, delta: f64, t_max: usize) -> Result<f64> {
        match self {
            AltSpec::Builtin(b) => b.theta_for_delta(delta),
            AltSpec::Custom(s) => {
                let _ = t_max;
                s.theta_for_delta(delta)
            }
        }
    }

    fn realized(&self, t_max: usize) -> SeriesSpec {
        match self {
            AltSpec::Builtin(b) => b.series_spec(t_max),
            AltSpec::Custom(s) => s.clone(),
        }
    }

    fn u_at(&self, theta: f64, t_max: usize) -> Result<f64> {
        match self {
            AltSpec::Builtin(b) => Ok(b.u(theta)),
            AltSpec::Custom(s) => {
                let _ = t_max;
                Ok(eval_series(s.p(), theta)?.value)
            }
        }
    }

    fn v_at(&self, theta: f64, t_max: usize) -> Result<f64> {
        match self {
            AltSpec::Builtin(b) => Ok(b.v(theta)),
            AltSpec::Custom(s) => {
                let _ = t_max;
                Ok(eval_series(s.q(), theta)?.value)
            }
        }
    }
}

/// Weights `w_theta(n) = v(theta)^{-1} exp(-u^2(theta)/2) b_n theta^n`,
/// truncated at `t_max`. The residual `1 - sum w` is the exact tail mass
/// (the weights sum to one over the full support), so it serves as the
/// certified bound; if it exceeds `tol` a truncation error is returned.
pub fn altnormal_weights(spec: &AltSpec, theta: f64, t_max: usize, tol: f64) -> Result<MixingLaw> {
    let realized = spec.realized(t_max);
    let ac = alt_coefficients(&realized, t_max)?;
    let u = spec.u_at(theta, t_max)?;
    let v = spec.v_at(theta, t_max)?;
    let scale = (-0.5 * u * u).exp() / v;
    let mut probs = Vec::with_capacity(t_max + 1);
    let mut power = 1.0;
    for n in 0..=t_max {
        probs.push(scale * ac.b[n] * power);
        power *= theta;
    }
    let total: f64 = probs.iter().sum();
    let tail = (1.0 - total).max(0.0);
    if !(tail < tol) {
        return Err(Error::Truncation(format!(
            "weight tail {tail:.3e} at truncation {t_max} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(MixingLaw::from_parts(probs, tail, format!("altnormal-{}(theta={theta})", spec.label())))
}

/// Build the alternative normal representation at an explicit truncation.
/// `theta = u^{-1}(|delta|)`; components `h_n` are stored as coefficient
/// vectors over the odd chi-squared basis.
pub fn altnormal_representation(
    spec: &AltSpec,
    delta: f64,
    t_max: usize,
) -> Result<MixtureRepresentation> {
    let theta = spec.theta_for_delta(delta, t_max)?;
    let mixing = altnormal_weights(spec, theta, t_max, DEFAULT_TAIL_TOL)?;
    let realized = spec.realized(t_max);
    let ac = alt_coefficients(&realized, t_max)?;
    let coeffs = component_coefficients(&ac, t_max);
    let param = NoncentralParam::new(Family::Normal, delta.abs())?;
    Ok(MixtureRepresentation {
        mixing,
        components: ComponentFamily::OddChiSqMix { coeffs },
        target: Target::Noncentral { param, transform: Transform::Square },
        descriptor: format!("altnormal-{}(delta={delta})", spec.label()),
    })
}

/// As [`altnormal_representation`] but growing the truncation geometrically
/// until the weight tail bound is certified, up to the hard cap.
pub fn altnormal_representation_auto(spec: &AltSpec, delta: f64) -> Result<MixtureRepresentation> {
    let mut t_max = 64;
    loop {
        match altnormal_representation(spec, delta, t_max) {
            Ok(rep) => return Ok(rep),
            Err(Error::Truncation(_)) if t_max < TRUNCATION_CAP => t_max *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// `c_n(k) = inner(k, n) / (b_n k! 2^k)` for `n` in the support; outside the
/// support `c_n` defaults to a point mass at 0 (any pmf is admissible there,
/// the weight is zero).
fn component_coefficients(ac: &crate::series::AltCoefficients, t_max: usize) -> Vec<Vec<f64>> {
    (0..=t_max)
        .map(|n| {
            if ac.b[n] > 0.0 {
                let mut weight = 1.0; // 1/(k! 2^k)
                let mut row = Vec::with_capacity(n / 2 + 1);
                for k in 0..=(n / 2) {
                    row.push(ac.inner_sum(k, n) * weight / ac.b[n]);
                    weight /= 2.0 * (k + 1) as f64;
                }
                row
            } else {
                vec![1.0]
            }
        })
        .collect()
}

/// Probability generating function of the index `N`:
/// `(v(theta t)/v(theta)) exp((u^2(theta)/2)[u^2(theta t)/u^2(theta) - 1])`.
pub fn altnormal_index_pgf(spec: &AltSpec, theta: f64, t: f64, t_max: usize) -> Result<f64> {
    let u_theta = spec.u_at(theta, t_max)?;
    let u_scaled = spec.u_at(theta * t, t_max)?;
    let v_theta = spec.v_at(theta, t_max)?;
    let v_scaled = spec.v_at(theta * t, t_max)?;
    Ok(v_scaled / v_theta * (0.5 * (u_scaled * u_scaled - u_theta * u_theta)).exp())
}

/// Compound decomposition sampler for the index `N`: `K` with pgf
/// `v(theta t)/v(theta)`, `M` Poisson with parameter `u^2(theta)/2`, and
/// `2M` draws with pgf `u(theta t)/u(theta)`; returns `K + sum L`.
///
/// The pgf forces exactly `2M` summands (the compound Poisson factor is
/// `exp(eta [u^2(theta t)/u^2(theta) - 1])`, and `u^2` tilts to a sum of two
/// independent `u`-tilted draws).
pub struct AltIndexSampler {
    k_law: MixingLaw,
    l_law: MixingLaw,
    eta: f64,
}

impl AltIndexSampler {
    pub fn new(spec: &AltSpec, theta: f64) -> Result<Self> {
        let mut t_max = 128;
        loop {
            let realized = spec.realized(t_max);
            let k_law = tilted_pmf(realized.q(), theta, t_max)?;
            let l_law = tilted_pmf(realized.p(), theta, t_max)?;
            if k_law.tail_bound() < 1e-12 && l_law.tail_bound() < 1e-12 {
                let u = spec.u_at(theta, t_max)?;
                return Ok(AltIndexSampler { k_law, l_law, eta: 0.5 * u * u });
            }
            if t_max >= TRUNCATION_CAP {
                return Err(Error::Truncation(
                    "tilted index laws not certified within the truncation cap".into(),
                ));
            }
            t_max *= 2;
        }
    }

    /// Poisson parameter `u^2(theta)/2` of the compound part.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sample(&self, rng: &mut Rng) -> u64 {
        let k = self.k_law.sample(rng) as u64;
        let m = sample_poisson(self.eta, rng);
        let l_sum: u64 = (0..2 * m).map(|_| self.l_law.sample(rng) as u64).sum();
        k + l_sum
    }
}

// ---------------------------------------------------------------------------
// mixtures of the Poisson family
// ---------------------------------------------------------------------------

/// A non-canonical mixture representation of the Poisson family:
/// `e^{-eta} eta^k / k! = sum_n m_eta(n) c_n(k)`.
#[derive(Debug, Clone)]
pub struct PoissonMixture {
    pub mixing: MixingLaw,
    /// `c[n][k]`; rows are pmfs on the k-index.
    pub components: Vec<Vec<f64>>,
    pub support: Vec<usize>,
    pub eta: f64,
}

impl PoissonMixture {
    /// `max_{k <= k_max} |sum_n m(n) c_n(k) - e^{-eta} eta^k / k!|`.
    pub fn residual(&self, k_max: usize) -> f64 {
        let mut worst = 0.0f64;
        let mut poisson_term = (-self.eta).exp();
        for k in 0..=k_max {
            let mixed: f64 = self
                .components
                .iter()
                .enumerate()
                .map(|(n, row)| self.mixing.pmf(n) * row.get(k).copied().unwrap_or(0.0))
                .sum();
            worst = worst.max((mixed - poisson_term).abs());
            poisson_term *= self.eta / (k as f64 + 1.0);
        }
        worst
    }
}

/// Build the Poisson mixture induced by a representation spec at parameter
/// `eta = u^2(theta)/2`, truncating the n-index at `n_max`. Errors if the
/// identity residual up to `k_max` exceeds `tol`.
pub fn poisson_mixture_from_altnormal(
    spec: &AltSpec,
    eta: f64,
    n_max: usize,
    k_max: usize,
    tol: f64,
) -> Result<PoissonMixture> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("eta must be > 0, got {eta}")));
    }
    let delta = (2.0 * eta).sqrt();
    let theta = spec.theta_for_delta(delta, n_max)?;
    let mixing = altnormal_weights(spec, theta, n_max, tol.max(DEFAULT_TAIL_TOL) * 0.1)?;
    let realized = spec.realized(n_max);
    let ac = alt_coefficients(&realized, n_max)?;
    let components = component_coefficients(&ac, n_max);
    let mixture = PoissonMixture { mixing, components, support: ac.support, eta };
    let residual = mixture.residual(k_max);
    if !(residual <= tol) {
        return Err(Error::Coverage(format!(
            "Poisson mixture residual {residual:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(mixture)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn classical_weights_and_density() {
        let rep = classical_chisq(2.0f64.sqrt()).unwrap();
        let e1 = (-1.0f64).exp();
        assert_close(rep.mixing().pmf(0), e1, 1e-15);
        assert_close(rep.mixing().pmf(1), e1, 1e-15);
        assert_close(rep.mixing().pmf(2), e1 / 2.0, 1e-15);
        for &x in &[0.001f64, 0.5, 1.0, 5.0, 10.0] {
            let mix = rep.pdf(x).unwrap();
            let direct = rep.target_pdf(x).unwrap();
            assert!((mix - direct).abs() < 1e-10, "x={x}: {mix} vs {direct}");
        }
    }

    #[test]
    fn classical_mode_condition() {
        // weight at n = 0 dominates iff delta^2 < 2 (Poisson mode at 0)
        let small = classical_chisq(1.2).unwrap(); // eta = 0.72 < 1
        assert!(small.mixing().pmf(0) > small.mixing().pmf(1));
        let large = classical_chisq(2.0).unwrap(); // eta = 2 > 1
        assert!(large.mixing().pmf(0) < large.mixing().pmf(1));
    }

    #[test]
    fn poisson_tail_bound_is_valid() {
        let law = MixingLaw::poisson(3.0, 1e-12).unwrap();
        let total = law.total();
        assert!(total <= 1.0 + 1e-15);
        assert!(total + law.tail_bound() >= 1.0 - 1e-15);
    }

    #[test]
    fn logistic_index_law_examples() {
        let law = logistic_index_law(0.5).unwrap();
        for n in 1..=10usize {
            assert_close(law.pmf(n), 0.5f64.powi(n as i32), 1e-15);
        }
        assert_eq!(law.pmf(0), 0.0);
        let theta = crate::distributions::logistic_cdf(1.0);
        let law = logistic_index_law(theta).unwrap();
        assert_close(law.pmf(1), 2.0 * theta * (1.0 - theta), 1e-12);
        assert_close(law.pmf(1), 0.393_223_866_483, 1e-9);
        assert_close(law.total(), 1.0, 1e-12);
    }

    #[test]
    fn logistic_cdf_series_identity() {
        let delta = 1.0;
        let rep = logistic_representation(delta, Transform::Abs).unwrap();
        for &x in &[0.5f64, 1.0, 2.0, 5.0] {
            assert_close(rep.cdf(x), rep.target_cdf(x), 1e-10);
        }
        // negative delta: theta flips to 1 - theta, same law
        let rep = logistic_representation(-delta, Transform::Abs).unwrap();
        for &x in &[0.5f64, 1.0, 2.0, 5.0] {
            assert_close(rep.cdf(x), rep.target_cdf(x), 1e-10);
        }
    }

    #[test]
    fn logistic_single_component_is_exponential() {
        let rep = logistic_representation(0.7, Transform::Abs).unwrap();
        for &x in &[0.2f64, 1.0, 3.0] {
            assert_close(rep.components().cdf(1, x), 1.0 - (-x).exp(), 1e-14);
        }
    }

    #[test]
    fn hypsec_mixing_examples() {
        let p = NoncentralParam::new(Family::HypSec, 1.0).unwrap();
        let law = hypsec_mixing(p.theta()).unwrap();
        assert_close(law.pmf(0), p.theta().sqrt(), 1e-15);
        assert_close(law.pmf(0), 0.458_244, 1e-6);
        assert_close(law.total(), 1.0, 1e-12);
        // theta -> 1 collapses to a point mass at 0
        let law = hypsec_mixing(1.0 - 1e-9).unwrap();
        assert!(law.pmf(0) > 1.0 - 1e-8);
    }

    #[test]
    fn hypsec_component_normalization() {
        assert_close(
            hypsec_component_pdf(0, 1e-9).unwrap(),
            2.0f64.powf(1.5) / std::f64::consts::PI,
            1e-7,
        );
        for &k in &[0u64, 1, 2, 5, 10] {
            let f = |x: f64| hypsec_component_pdf(k, x).unwrap();
            let (mass, _) = integrate(&f, 1e-12, 40.0, 1e-11);
            assert!((mass - 1.0).abs() < 1e-8, "k={k}: {mass}");
        }
        assert!(hypsec_component_pdf(1, 0.0).is_err());
    }

    #[test]
    fn hypsec_component_cdf_matches_density() {
        for &k in &[0u64, 2, 5] {
            for &x in &[0.3f64, 1.0, 2.5] {
                let h = 1e-6;
                let fd = (hypsec_component_cdf(k, x + h) - hypsec_component_cdf(k, x - h))
                    / (2.0 * h);
                assert_close(fd, hypsec_component_pdf(k, x).unwrap(), 1e-7);
            }
        }
    }

    #[test]
    fn hypsec_density_identity() {
        for &delta in &[0.5f64, 1.0, 2.0] {
            let rep = hypsec_representation(delta, Transform::Abs).unwrap();
            for i in 1..=60 {
                let x = 0.1 * i as f64;
                let mix = rep.pdf(x).unwrap();
                let direct = rep.target_pdf(x).unwrap();
                assert!((mix - direct).abs() < 1e-9, "delta={delta} x={x}");
            }
        }
    }

    #[test]
    fn hypsec_sign_symmetry() {
        let plus = hypsec_representation(1.3, Transform::Square).unwrap();
        let minus = hypsec_representation(-1.3, Transform::Square).unwrap();
        assert_eq!(plus.mixing().probs(), minus.mixing().probs());
    }

    #[test]
    fn altnormal_classical_matches_canonical() {
        let delta = 2.0f64.sqrt();
        let alt =
            altnormal_representation_auto(&AltSpec::Builtin(BuiltinSpec::Classical), delta).unwrap();
        let canonical = classical_chisq(delta).unwrap();
        // support is the even integers, weights line up with Poisson(eta)
        for k in 0..=canonical.mixing().truncation() {
            let w_alt = alt.mixing().pmf(2 * k);
            let w_can = canonical.mixing().pmf(k);
            assert!((w_alt - w_can).abs() < 1e-14, "k={k}: {w_alt} vs {w_can}");
            if 2 * k + 1 <= alt.mixing().truncation() {
                assert_eq!(alt.mixing().pmf(2 * k + 1), 0.0);
            }
        }
        for &x in &[0.01f64, 1.0, 4.0] {
            assert_close(alt.pdf(x).unwrap(), canonical.pdf(x).unwrap(), 1e-12);
        }
    }

    #[test]
    fn altnormal_geometric_v1_low_components() {
        let spec = AltSpec::Builtin(BuiltinSpec::GeometricV1);
        let rep = altnormal_representation_auto(&spec, 1.0).unwrap();
        // theta = 1/2; h_0 = g_1 and the n = 1 weight vanishes
        assert_eq!(rep.mixing().pmf(1), 0.0);
        for &x in &[0.2f64, 1.0, 3.0] {
            assert_close(
                rep.components().pdf(0, x).unwrap(),
                chisq_pdf(1, x).unwrap(),
                1e-14,
            );
        }
    }

    #[test]
    fn altnormal_density_identities() {
        let specs = [
            AltSpec::Builtin(BuiltinSpec::Geometric { alpha: 0.5 }),
            AltSpec::Builtin(BuiltinSpec::LogSeries),
        ];
        for spec in &specs {
            let rep = altnormal_representation_auto(spec, 1.0).unwrap();
            for i in 1..=20 {
                let x = 0.5 * i as f64;
                let mix = rep.pdf(x).unwrap();
                let direct = rep.target_pdf(x).unwrap();
                assert!(
                    (mix - direct).abs() < 1e-8,
                    "{} x={x}: {mix} vs {direct}",
                    spec.label()
                );
            }
        }
    }

    #[test]
    fn altnormal_truncation_error_is_reported() {
        let spec = AltSpec::Builtin(BuiltinSpec::LogSeries);
        assert!(matches!(
            altnormal_representation(&spec, 2.0, 16),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn altnormal_pgf_examples() {
        let spec = AltSpec::Builtin(BuiltinSpec::Geometric { alpha: 1.0 });
        // pgf at t = 1 is 1
        assert_close(altnormal_index_pgf(&spec, 0.4, 1.0, 0).unwrap(), 1.0, 1e-14);
        // classical spec: exp(eta (t^2 - 1))
        let classical = AltSpec::Builtin(BuiltinSpec::Classical);
        for &t in &[0.0f64, 0.3, 0.8] {
            let theta: f64 = 1.2;
            let eta = 0.5 * theta * theta;
            assert_close(
                altnormal_index_pgf(&classical, theta, t, 0).unwrap(),
                (eta * (t * t - 1.0)).exp(),
                1e-14,
            );
        }
        // closed form matches the truncated weight series
        let theta = 0.4;
        let weights = altnormal_weights(&spec, theta, 256, 1e-12).unwrap();
        for &t in &[0.2f64, 0.5, 0.9] {
            let series: f64 = weights
                .probs()
                .iter()
                .enumerate()
                .map(|(n, &w)| w * t.powi(n as i32))
                .sum();
            let closed = altnormal_index_pgf(&spec, theta, t, 0).unwrap();
            assert_close(series, closed, 1e-10);
        }
    }

    #[test]
    fn altnormal_pgf_mean_matches_weights() {
        // one-sided second-order difference of the pgf at t = 1
        for builtin in BuiltinSpec::all_default() {
            let spec = AltSpec::Builtin(builtin);
            let theta = 0.3;
            let weights = altnormal_weights(&spec, theta, 256, 1e-12).unwrap();
            let h = 1e-5;
            let p = |t: f64| altnormal_index_pgf(&spec, theta, t, 0).unwrap();
            let mean_pgf = (3.0 * p(1.0) - 4.0 * p(1.0 - h) + p(1.0 - 2.0 * h)) / (2.0 * h);
            assert!(
                (mean_pgf - weights.mean()).abs() < 1e-8,
                "{}: {mean_pgf} vs {}",
                builtin.label(),
                weights.mean()
            );
        }
    }

    #[test]
    fn altnormal_sampler_parity_classical() {
        let spec = AltSpec::Builtin(BuiltinSpec::Classical);
        let sampler = AltIndexSampler::new(&spec, 1.0).unwrap();
        let mut rng = Rng::new(12, 0);
        for _ in 0..2_000 {
            assert_eq!(sampler.sample(&mut rng) % 2, 0);
        }
    }

    #[test]
    fn altnormal_sampler_small_theta_degenerates() {
        let spec = AltSpec::Builtin(BuiltinSpec::GeometricV1);
        let sampler = AltIndexSampler::new(&spec, 1e-6).unwrap();
        let mut rng = Rng::new(4, 0);
        // eta ~ 5e-13: M = 0 almost surely, K = 0 since v = 1
        for _ in 0..1_000 {
            assert_eq!(sampler.sample(&mut rng), 0);
        }
    }

    #[test]
    fn poisson_mixture_classical_is_exact() {
        let spec = AltSpec::Builtin(BuiltinSpec::Classical);
        let mix = poisson_mixture_from_altnormal(&spec, 0.7, 80, 12, 1e-12).unwrap();
        assert!(mix.residual(12) < 1e-13);
        // c_{2k}(k) = 1
        for k in 0..=10usize {
            assert_close(mix.components[2 * k][k], 1.0, 1e-12);
        }
    }

    #[test]
    fn poisson_mixture_geometric_v1() {
        let spec = AltSpec::Builtin(BuiltinSpec::GeometricV1);
        let mix = poisson_mixture_from_altnormal(&spec, 0.5, 80, 12, 1e-10).unwrap();
        assert!(mix.residual(12) < 1e-10);
        // each c_n is a pmf on the support
        for &n in mix.support.iter().filter(|&&n| n <= 40) {
            let total: f64 = mix.components[n].iter().sum();
            assert_close(total, 1.0, 1e-12);
        }
    }

    #[test]
    fn mixture_sampler_clamps_and_replays() {
        let rep = classical_chisq(1.0).unwrap();
        let mut a = Rng::new(6, 3);
        let mut b = Rng::new(6, 3);
        for _ in 0..50 {
            assert_eq!(rep.sample_mixture(&mut a), rep.sample_mixture(&mut b));
        }
    }

    #[test]
    fn chisq_k_direct_sampler_matches_mixture_cdf() {
        let rep = noncentral_chisq_k(3, 2.0).unwrap();
        let mut rng = Rng::new(91, 0);
        let draws: Vec<f64> = (0..50_000).map(|_| rep.sample_direct(&mut rng)).collect();
        let ks = crate::verify::ks_one_sample(&draws, |x| rep.cdf(x));
        assert!(ks < 0.012, "ks = {ks}");
    }

    #[test]
    fn weights_sum_to_one_after_certification() {
        let reps = [
            classical_chisq(2.5).unwrap(),
            logistic_representation(-1.0, Transform::Abs).unwrap(),
            hypsec_representation(0.3, Transform::Square).unwrap(),
            altnormal_representation_auto(&AltSpec::Builtin(BuiltinSpec::LogSeries), 0.5).unwrap(),
        ];
        for rep in &reps {
            assert_close(rep.mixing().total(), 1.0, 1e-11);
        }
    }
}
