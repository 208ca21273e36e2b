//! Base symmetric laws (normal, logistic, hyperbolic secant), auxiliary
//! continuous laws, the direct closed-form noncentral densities they induce,
//! and the chi-squared test power function.

use crate::mixtures::{self, MixtureRepresentation};
use crate::rng::Rng;
use crate::special::log_gamma;
use crate::{Error, Result};

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

// ---------------------------------------------------------------------------
// regularized incomplete gamma / beta
// ---------------------------------------------------------------------------

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series expansion
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - log_gamma(a).expect("a > 0")).exp()
    } else {
        // Lentz continued fraction for Q(a, x)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (-x + a * x.ln() - log_gamma(a).expect("a > 0")).exp() * h;
        1.0 - q
    }
}

/// Regularized incomplete beta I_x(a, b), by the Lentz continued fraction.
pub fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln()
        + log_gamma(a + b).unwrap()
        - log_gamma(a).unwrap()
        - log_gamma(b).unwrap();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * betacf(a, b, x) / a
    } else {
        1.0 - beta_inc(b, a, 1.0 - x)
    }
}

fn betacf(a: f64, b: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

// ---------------------------------------------------------------------------
// scalar base-law functions
// ---------------------------------------------------------------------------

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_TWO_PI
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 + 0.5 * x.signum() * gamma_p(0.5, 0.5 * x * x)
}

/// Logistic distribution function `F(x) = 1/(1 + e^{-x})`.
pub fn logistic_cdf(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn logistic_pdf(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// Hyperbolic secant density `2 / (pi (e^x + e^{-x}))`.
pub fn hypsec_pdf(x: f64) -> f64 {
    2.0 / (std::f64::consts::PI * (x.exp() + (-x).exp()))
}

/// Hyperbolic secant distribution function `(2/pi) arctan(e^x)`.
pub fn hypsec_cdf(x: f64) -> f64 {
    2.0 / std::f64::consts::PI * x.exp().atan()
}

/// Central chi-squared density with `k` degrees of freedom,
/// i.e. the Gamma(k/2, 1/2) density.
pub fn chisq_pdf(k: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("chisq_pdf requires x > 0, got {x}")));
    }
    let half_k = 0.5 * k as f64;
    Ok((-0.5 * x + (half_k - 1.0) * x.ln() - half_k * 2.0f64.ln() - log_gamma(half_k)?).exp())
}

/// Central chi-squared distribution function.
pub fn chisq_cdf(k: u32, x: f64) -> f64 {
    gamma_p(0.5 * k as f64, 0.5 * x)
}

// ---------------------------------------------------------------------------
// laws
// ---------------------------------------------------------------------------

/// A continuous law with the uniform pdf/cdf/quantile/sample contract.
/// Quantiles are computed by bracketed bisection on the cdf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Normal,
    Logistic,
    HypSec,
    /// Exponential with the given rate.
    Exponential { rate: f64 },
    /// Square of a mean-1 exponential: Weibull with cdf `1 - e^{-sqrt(x)}`.
    WeibullHalf,
    Gamma { shape: f64, rate: f64 },
    ChiSq { k: u32 },
    Beta { a: f64, b: f64 },
}

impl Law {
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Law::Normal => normal_pdf(x),
            Law::Logistic => logistic_pdf(x),
            Law::HypSec => hypsec_pdf(x),
            Law::Exponential { rate } => {
                if x < 0.0 { 0.0 } else { rate * (-rate * x).exp() }
            }
            Law::WeibullHalf => {
                if x <= 0.0 { 0.0 } else { (-x.sqrt()).exp() / (2.0 * x.sqrt()) }
            }
            Law::Gamma { shape, rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x
                        - log_gamma(shape).expect("shape > 0"))
                    .exp()
                }
            }
            Law::ChiSq { k } => {
                if x <= 0.0 { 0.0 } else { chisq_pdf(k, x).expect("x > 0") }
            }
            Law::Beta { a, b } => {
                if x <= 0.0 || x >= 1.0 {
                    0.0
                } else {
                    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln()
                        + log_gamma(a + b).unwrap()
                        - log_gamma(a).unwrap()
                        - log_gamma(b).unwrap())
                    .exp()
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Law::Normal => normal_cdf(x),
            Law::Logistic => logistic_cdf(x),
            Law::HypSec => hypsec_cdf(x),
            Law::Exponential { rate } => {
                if x < 0.0 { 0.0 } else { -(-rate * x).exp_m1() }
            }
            Law::WeibullHalf => {
                if x < 0.0 { 0.0 } else { -(-x.sqrt()).exp_m1() }
            }
            Law::Gamma { shape, rate } => gamma_p(shape, rate * x.max(0.0)),
            Law::ChiSq { k } => chisq_cdf(k, x.max(0.0)),
            Law::Beta { a, b } => beta_inc(a, b, x),
        }
    }

    fn support_lower(&self) -> Option<f64> {
        match self {
            Law::Normal | Law::Logistic | Law::HypSec => None,
            _ => Some(0.0),
        }
    }

    /// Generalized inverse of the cdf, by bracketed bisection to 1e-12.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0 < u && u < 1.0) {
            return Err(Error::Domain(format!("quantile requires u in (0,1), got {u}")));
        }
        let (mut lo, mut hi) = match self.support_lower() {
            Some(l) => {
                let mut hi = 1.0;
                while self.cdf(hi) < u {
                    hi *= 2.0;
                }
                (l, hi)
            }
            None => {
                let mut lo = -1.0;
                let mut hi = 1.0;
                while self.cdf(lo) > u {
                    lo *= 2.0;
                }
                while self.cdf(hi) < u {
                    hi *= 2.0;
                }
                (lo, hi)
            }
        };
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match *self {
            Law::Normal => rng.standard_normal(),
            Law::Logistic => {
                let u = rng.uniform();
                (u / (1.0 - u)).ln()
            }
            Law::HypSec => (std::f64::consts::FRAC_PI_2 * rng.uniform()).tan().ln(),
            Law::Exponential { rate } => rng.exponential() / rate,
            Law::WeibullHalf => {
                let e = rng.exponential();
                e * e
            }
            Law::Gamma { shape, rate } => sample_gamma(shape, rate, rng),
            Law::ChiSq { k } => sample_gamma(0.5 * k as f64, 0.5, rng),
            Law::Beta { a, b } => {
                // beta as a ratio of gammas
                let x = sample_gamma(a, 1.0, rng);
                let y = sample_gamma(b, 1.0, rng);
                x / (x + y)
            }
        }
    }

    pub fn sample_n(&self, rng: &mut Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// Marsaglia-Tsang gamma sampler; shape < 1 handled by the boost
/// `Gamma(a) = Gamma(a+1) U^{1/a}`.
fn sample_gamma(shape: f64, rate: f64, rng: &mut Rng) -> f64 {
    if shape < 1.0 {
        let boost = sample_gamma(shape + 1.0, rate, rng);
        return boost * rng.uniform().powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (3.0 * d.sqrt());
    loop {
        let x = rng.standard_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v / rate;
        }
    }
}

/// Poisson draw by an on-the-fly inverse-cdf walk.
pub fn sample_poisson(lambda: f64, rng: &mut Rng) -> u64 {
    let u = rng.uniform();
    let mut k = 0u64;
    let mut term = (-lambda).exp();
    let mut cum = term;
    // cumulative mass clamps at 1 - 1e-15 worth of walked support
    while u > cum && k < 10_000 {
        k += 1;
        term *= lambda / k as f64;
        cum += term;
        if term < 1e-300 && cum > 1.0 - 1e-15 {
            break;
        }
    }
    k
}

// ---------------------------------------------------------------------------
// noncentral parameters and direct densities
// ---------------------------------------------------------------------------

/// Base family of a noncentral law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Normal,
    Logistic,
    HypSec,
}

impl Family {
    pub fn base_law(&self) -> Law {
        match self {
            Family::Normal => Law::Normal,
            Family::Logistic => Law::Logistic,
            Family::HypSec => Law::HypSec,
        }
    }
}

/// Which function of `X + delta` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `|X + delta|`
    Abs,
    /// `(X + delta)^2`
    Square,
}

/// Noncentrality parameter with its family-specific rescalings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralParam {
    family: Family,
    delta: f64,
}

impl NoncentralParam {
    /// `delta = 0` is rejected; the central limits appear only in tests.
    pub fn new(family: Family, delta: f64) -> Result<Self> {
        if delta == 0.0 || !delta.is_finite() {
            return Err(Error::Domain(format!(
                "noncentrality delta must be nonzero and finite, got {delta}"
            )));
        }
        Ok(NoncentralParam { family, delta })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Family-specific rescaled parameter:
    /// logistic `theta = e^d/(1+e^d)`, hyperbolic secant
    /// `theta = 2/(e^{-d}+e^d)^2`, normal `theta = |delta|` (`u(t) = t`).
    pub fn theta(&self) -> f64 {
        match self.family {
            Family::Normal => self.delta.abs(),
            Family::Logistic => logistic_cdf(self.delta),
            Family::HypSec => {
                let s = (-self.delta).exp() + self.delta.exp();
                2.0 / (s * s)
            }
        }
    }

    /// `eta = delta^2 / 2` (the Poisson parameter in the normal family).
    pub fn eta(&self) -> f64 {
        0.5 * self.delta * self.delta
    }
}

/// Density of `|X + delta|` (abs) or `(X + delta)^2` (square), from the
/// closed form `f(x - delta) + f(x + delta)` of the base density; the square
/// variant is `f_abs(sqrt(x)) / (2 sqrt(x))`.
pub fn noncentral_direct_pdf(p: &NoncentralParam, transform: Transform, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("noncentral density requires x > 0, got {x}")));
    }
    let base = p.family().base_law();
    let abs_pdf = |y: f64| base.pdf(y - p.delta()) + base.pdf(y + p.delta());
    Ok(match transform {
        Transform::Abs => abs_pdf(x),
        Transform::Square => {
            let r = x.sqrt();
            abs_pdf(r) / (2.0 * r)
        }
    })
}

/// Distribution function of the noncentral law,
/// `F(x - delta) - F(-x - delta)` in the abs variant.
pub fn noncentral_direct_cdf(p: &NoncentralParam, transform: Transform, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let base = p.family().base_law();
    let y = match transform {
        Transform::Abs => x,
        Transform::Square => x.sqrt(),
    };
    base.cdf(y - p.delta()) - base.cdf(-y - p.delta())
}

/// Draw from the noncentral law by transforming a base draw.
pub fn sample_noncentral_direct(p: &NoncentralParam, transform: Transform, rng: &mut Rng) -> f64 {
    let x = p.family().base_law().sample(rng) + p.delta();
    match transform {
        Transform::Abs => x.abs(),
        Transform::Square => x * x,
    }
}

// ---------------------------------------------------------------------------
// noncentral chi-squared with k degrees of freedom, and test power
// ---------------------------------------------------------------------------

/// Noncentral chi-squared with `k` degrees of freedom as the Poisson
/// mixture of `chi^2_{2n+k}`.
pub fn noncentral_chisq_k(k: u32, delta_sq: f64) -> Result<MixtureRepresentation> {
    mixtures::noncentral_chisq_k(k, delta_sq)
}

/// Power of the level-`alpha` chi-squared test of a zero mean vector in
/// dimension `d` against an alternative with squared norm `a_norm_sq`:
/// `1 - G_{d, ||a||^2}(chi^2_{d; 1 - alpha})`.
pub fn chisq_test_power(d: u32, a_norm_sq: f64, alpha: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension d must be >= 1".into()));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(a_norm_sq >= 0.0) {
        return Err(Error::Domain(format!("||a||^2 must be >= 0, got {a_norm_sq}")));
    }
    let critical = Law::ChiSq { k: d }.quantile(1.0 - alpha)?;
    if a_norm_sq == 0.0 {
        // central case: the test rejects with probability alpha
        return Ok(1.0 - chisq_cdf(d, critical));
    }
    let rep = noncentral_chisq_k(d, a_norm_sq)?;
    Ok(1.0 - rep.cdf(critical))
}
