//! Truncated nonnegative power-series algebra: convolution powers, the
//! `b_n` coefficient sequence behind the alternative normal representations,
//! exponential tilting, and generating-function evaluation with a certified
//! truncation-tail estimate.

use crate::mixtures::MixingLaw;
use crate::special::{binom, double_factorial_odd};
use crate::{Error, Result};

/// Finite prefix of a power series with nonnegative coefficients.
/// `coeffs[n]` is the coefficient of `t^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
    radius_hint: f64,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<f64>, radius_hint: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("series needs at least one coefficient".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !(**c >= 0.0)) {
            return Err(Error::InvalidSpec(format!("negative or NaN coefficient {c}")));
        }
        if !(radius_hint > 0.0) {
            return Err(Error::InvalidSpec(format!("radius hint must be positive, got {radius_hint}")));
        }
        Ok(TruncatedSeries { coeffs, radius_hint })
    }

    /// The series `1` (unit of convolution).
    pub fn unit(t_max: usize) -> Self {
        let mut coeffs = vec![0.0; t_max + 1];
        coeffs[0] = 1.0;
        TruncatedSeries { coeffs, radius_hint: f64::INFINITY }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Truncation order T (highest stored power).
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius_hint(&self) -> f64 {
        self.radius_hint
    }
}

/// Tail estimate attached to a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEstimate {
    /// Geometric-ratio majorant bound on the discarded tail.
    Bounded(f64),
    /// The ratio test on the last stored terms was inconclusive.
    Unreliable,
}

impl TailEstimate {
    pub fn bound(&self) -> Option<f64> {
        match self {
            TailEstimate::Bounded(b) => Some(*b),
            TailEstimate::Unreliable => None,
        }
    }
}

/// Result of evaluating a truncated series at a point.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub tail: TailEstimate,
}

/// Coefficient-wise product truncated at order `t_max`.
pub fn convolve(a: &TruncatedSeries, b: &TruncatedSeries, t_max: usize) -> TruncatedSeries {
    let mut coeffs = vec![0.0; t_max + 1];
    for (j, &aj) in a.coeffs.iter().enumerate().take(t_max + 1) {
        if aj == 0.0 {
            continue;
        }
        for (i, &bi) in b.coeffs.iter().enumerate().take(t_max + 1 - j) {
            coeffs[j + i] += aj * bi;
        }
    }
    TruncatedSeries {
        coeffs,
        radius_hint: a.radius_hint.min(b.radius_hint),
    }
}

/// k-th convolution power of a series with `p_0 = 0`; coefficients of
/// `u(t)^k`. For `k = 0` this is the unit series.
pub fn conv_power(p: &TruncatedSeries, k: usize, t_max: usize) -> Result<TruncatedSeries> {
    if p.coeff(0) != 0.0 {
        return Err(Error::InvalidSpec(format!(
            "conv_power requires p_0 = 0, got {}",
            p.coeff(0)
        )));
    }
    let mut acc = TruncatedSeries::unit(t_max);
    for _ in 0..k {
        acc = convolve(&acc, p, t_max);
    }
    acc.radius_hint = p.radius_hint;
    Ok(acc)
}

/// Evaluate the stored prefix at `t >= 0` and estimate the discarded tail
/// from the geometric ratio of the last two nonzero terms.
pub fn eval_series(s: &TruncatedSeries, t: f64) -> Result<SeriesValue> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("series argument must be >= 0, got {t}")));
    }
    if t >= s.radius_hint {
        return Err(Error::Radius { t, radius: s.radius_hint });
    }
    let mut value = 0.0;
    let mut power = 1.0;
    let mut last_terms: [Option<(usize, f64)>; 2] = [None, None];
    for (n, &c) in s.coeffs.iter().enumerate() {
        let term = c * power;
        value += term;
        if term > 0.0 {
            last_terms[0] = last_terms[1];
            last_terms[1] = Some((n, term));
        }
        power *= t;
    }
    let tail = match (last_terms[0], last_terms[1]) {
        (Some((n1, t1)), Some((n2, t2))) => {
            let ratio = (t2 / t1).powf(1.0 / (n2 - n1) as f64);
            if ratio < 1.0 {
                TailEstimate::Bounded(t2 * ratio / (1.0 - ratio))
            } else {
                TailEstimate::Unreliable
            }
        }
        // at most one nonzero term: nothing beyond the truncation to bound
        _ => TailEstimate::Bounded(0.0),
    };
    Ok(SeriesValue { value, tail })
}

/// Exponentially tilt a nonnegative sequence into a pmf:
/// `pmf(n) = s_n theta^n / Z` with `Z` the truncated series value at theta.
pub fn tilted_pmf(s: &TruncatedSeries, theta: f64, t_max: usize) -> Result<MixingLaw> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("tilt parameter must be > 0, got {theta}")));
    }
    let truncated = TruncatedSeries {
        coeffs: s.coeffs.iter().copied().take(t_max + 1).collect(),
        radius_hint: s.radius_hint,
    };
    let ev = eval_series(&truncated, theta)?;
    if !(ev.value > 0.0) || !ev.value.is_finite() {
        return Err(Error::DegenerateNormalizer(ev.value));
    }
    let mut probs = Vec::with_capacity(t_max + 1);
    let mut power = 1.0;
    for n in 0..=t_max {
        probs.push(truncated.coeff(n) * power / ev.value);
        power *= theta;
    }
    let tail_bound = match ev.tail {
        TailEstimate::Bounded(b) => b / ev.value,
        TailEstimate::Unreliable => 1.0,
    };
    Ok(MixingLaw::from_parts(probs, tail_bound, format!("tilted(theta={theta})")))
}

/// A pair `(p, q)` of coefficient sequences defining an alternative normal
/// representation; `u(t) = sum p_n t^n`, `v(t) = sum q_n t^n` on `[0, t0)`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    p: TruncatedSeries,
    q: TruncatedSeries,
    t0: f64,
}

impl SeriesSpec {
    /// Validates `p_0 = 0` and `v` not identically zero. That `u(t)` diverges
    /// as `t` approaches `t0` cannot be checked from a finite prefix; it is a
    /// caller obligation for user-supplied specs.
    pub fn new(p: TruncatedSeries, q: TruncatedSeries, t0: f64) -> Result<Self> {
        if p.coeff(0) != 0.0 {
            return Err(Error::InvalidSpec(format!("p_0 must be 0, got {}", p.coeff(0))));
        }
        if !q.coeffs.iter().any(|&c| c > 0.0) {
            return Err(Error::InvalidSpec("q must have a positive coefficient".into()));
        }
        if !(t0 > 0.0) {
            return Err(Error::InvalidSpec(format!("t0 must be positive, got {t0}")));
        }
        Ok(SeriesSpec { p, q, t0 })
    }

    pub fn p(&self) -> &TruncatedSeries {
        &self.p
    }

    pub fn q(&self) -> &TruncatedSeries {
        &self.q
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Invert the truncated `u` by bisection on `[0, t0)`, to 1e-13.
    /// `u` is strictly increasing since all `p_n >= 0` and `p != 0`.
    pub fn theta_for_delta(&self, delta: f64) -> Result<f64> {
        let target = delta.abs();
        if target == 0.0 {
            return Err(Error::Domain("delta must be nonzero".into()));
        }
        let u = |t: f64| eval_series(&self.p, t).map(|v| v.value);
        let mut lo = 0.0;
        let mut hi = if self.t0.is_finite() {
            self.t0 * (1.0 - 1e-12)
        } else {
            let mut h = 1.0;
            while u(h)? < target {
                h *= 2.0;
                if h > 1e12 {
                    return Err(Error::Domain(format!("|delta| = {target} not reached by truncated u")));
                }
            }
            h
        };
        if u(hi)? < target {
            return Err(Error::Domain(format!(
                "|delta| = {target} exceeds the range of the truncated u on [0, t0)"
            )));
        }
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if u(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// The four built-in representation specs, each with closed forms for
/// `u`, `v` and `u^{-1}` so the parameter map is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinSpec {
    /// `u(t) = t`, `v = 1`: the classical Poisson mixture.
    Classical,
    /// `u(t) = t/(1-t)`, `v(t) = (1-t)^{-(1+alpha)}`, `alpha > -1`.
    Geometric { alpha: f64 },
    /// `u(t) = t/(1-t)`, `v = 1` (the `alpha = -1` variant).
    GeometricV1,
    /// `u(t) = -log(1-t)`, `v = 1`.
    LogSeries,
}

impl BuiltinSpec {
    pub fn geometric(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::InvalidSpec(format!("geometric spec needs alpha > -1, got {alpha}")));
        }
        Ok(BuiltinSpec::Geometric { alpha })
    }

    pub fn all_default() -> [BuiltinSpec; 4] {
        [
            BuiltinSpec::Classical,
            BuiltinSpec::Geometric { alpha: 0.0 },
            BuiltinSpec::GeometricV1,
            BuiltinSpec::LogSeries,
        ]
    }

    pub fn label(&self) -> String {
        match self {
            BuiltinSpec::Classical => "classical".into(),
            BuiltinSpec::Geometric { alpha } => format!("geometric({alpha})"),
            BuiltinSpec::GeometricV1 => "geometric-v1".into(),
            BuiltinSpec::LogSeries => "logseries".into(),
        }
    }

    pub fn t0(&self) -> f64 {
        match self {
            BuiltinSpec::Classical => f64::INFINITY,
            _ => 1.0,
        }
    }

    pub fn u(&self, t: f64) -> f64 {
        match self {
            BuiltinSpec::Classical => t,
            BuiltinSpec::Geometric { .. } | BuiltinSpec::GeometricV1 => t / (1.0 - t),
            BuiltinSpec::LogSeries => -(1.0 - t).ln(),
        }
    }

    pub fn v(&self, t: f64) -> f64 {
        match self {
            BuiltinSpec::Geometric { alpha } => (1.0 - t).powf(-(1.0 + alpha)),
            _ => 1.0,
        }
    }

    /// Closed-form inverse of `u`, used to map `|delta|` to `theta` exactly.
    pub fn u_inv(&self, x: f64) -> f64 {
        match self {
            BuiltinSpec::Classical => x,
            BuiltinSpec::Geometric { .. } | BuiltinSpec::GeometricV1 => x / (1.0 + x),
            BuiltinSpec::LogSeries => 1.0 - (-x).exp(),
        }
    }

    pub fn theta_for_delta(&self, delta: f64) -> Result<f64> {
        if delta == 0.0 {
            return Err(Error::Domain("delta must be nonzero".into()));
        }
        Ok(self.u_inv(delta.abs()))
    }

    /// Realize the spec as coefficient prefixes up to order `t_max`.
    pub fn series_spec(&self, t_max: usize) -> SeriesSpec {
        let t0 = self.t0();
        let p_coeffs: Vec<f64> = (0..=t_max)
            .map(|n| match self {
                BuiltinSpec::Classical => {
                    if n == 1 { 1.0 } else { 0.0 }
                }
                BuiltinSpec::Geometric { .. } | BuiltinSpec::GeometricV1 => {
                    if n >= 1 { 1.0 } else { 0.0 }
                }
                BuiltinSpec::LogSeries => {
                    if n >= 1 { 1.0 / n as f64 } else { 0.0 }
                }
            })
            .collect();
        let q_coeffs: Vec<f64> = (0..=t_max)
            .map(|n| match self {
                BuiltinSpec::Geometric { alpha } => binom(n as f64 + alpha, n as u64),
                _ => {
                    if n == 0 { 1.0 } else { 0.0 }
                }
            })
            .collect();
        let p = TruncatedSeries::new(p_coeffs, t0).expect("builtin p is valid");
        let q = TruncatedSeries::new(q_coeffs, t0).expect("builtin q is valid");
        SeriesSpec::new(p, q, t0).expect("builtin spec is valid")
    }
}

/// The `b_n` sequence together with the inner sums it is built from:
/// `inner[k][n] = sum_{l=2k..n} p_l^{*2k} q_{n-l}` and
/// `b_n = sum_k inner[k][n] / (k! 2^k)`.
#[derive(Debug, Clone)]
pub struct AltCoefficients {
    pub inner: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub support: Vec<usize>,
}

impl AltCoefficients {
    /// `inner[k][n]`, zero outside the stored triangle.
    pub fn inner_sum(&self, k: usize, n: usize) -> f64 {
        self.inner
            .get(k)
            .and_then(|row| row.get(n))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Compute `b_n` for `n <= t_max` along with the support `B = {n : b_n > 0}`.
pub fn alt_coefficients(spec: &SeriesSpec, t_max: usize) -> Result<AltCoefficients> {
    let k_max = t_max / 2;
    let mut inner = Vec::with_capacity(k_max + 1);
    // p^{*2k} built incrementally as (p^{*2})^k to halve the convolutions
    let p_sq = convolve(spec.p(), spec.p(), t_max);
    let mut power = TruncatedSeries::unit(t_max);
    for k in 0..=k_max {
        if k > 0 {
            power = convolve(&power, &p_sq, t_max);
        }
        let row = convolve(&power, spec.q(), t_max);
        inner.push(row.coeffs().to_vec());
    }
    let mut b = vec![0.0; t_max + 1];
    for (n, bn) in b.iter_mut().enumerate() {
        let mut weight = 1.0; // 1/(k! 2^k)
        let mut acc = 0.0;
        for (k, row) in inner.iter().enumerate().take(n / 2 + 1) {
            acc += row[n] * weight;
            weight /= 2.0 * (k + 1) as f64;
        }
        *bn = acc;
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::Truncation(format!(
            "b_n overflowed f64 before reaching truncation {t_max}"
        )));
    }
    let support = (0..=t_max).filter(|&n| b[n] > 0.0).collect();
    Ok(AltCoefficients { inner, b, support })
}

/// `b_n` for the geometric-v1 spec via the direct binomial sum
/// `sum_k C(n-1, 2k-1) / (2^k k!)`, used as an internal cross-check.
pub fn b_geometric_v1_binomial(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 0.0,
        _ => {
            let mut acc = 0.0;
            let mut weight = 0.5; // 1/(2^k k!) at k = 1
            for k in 1..=(n / 2) {
                acc += binom(n as f64 - 1.0, (2 * k - 1) as u64) * weight;
                weight /= 2.0 * (k + 1) as f64;
            }
            acc
        }
    }
}

/// `b_n` for the geometric-v1 spec via Lah numbers,
/// `sum_k L(n, 2k) (2k-1)!! / n!`; the second independent route.
pub fn b_geometric_v1_lah(n: usize, cache: &crate::special::CombinatorialCache) -> f64 {
    match n {
        0 => 1.0,
        1 => 0.0,
        _ => {
            let inv_fact = (-cache.log_factorial(n)).exp();
            (1..=(n / 2))
                .map(|k| cache.lah(n, 2 * k) * double_factorial_odd(k as u64) * inv_fact)
                .sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{harmonic, CombinatorialCache};
    use proptest::prelude::*;

    fn ts(coeffs: &[f64]) -> TruncatedSeries {
        TruncatedSeries::new(coeffs.to_vec(), f64::INFINITY).unwrap()
    }

    #[test]
    fn convolve_basics() {
        // t * t = t^2
        let t = ts(&[0.0, 1.0]);
        let got = convolve(&t, &t, 4);
        assert_eq!(got.coeffs(), &[0.0, 0.0, 1.0, 0.0, 0.0]);
        // unit element
        let b = ts(&[0.3, 0.0, 2.0, 5.0]);
        let got = convolve(&TruncatedSeries::unit(3), &b, 3);
        assert_eq!(got.coeffs(), b.coeffs());
        // (t/(1-t))^2 = sum (n-1) t^n
        let geom = ts(&[0.0, 1.0, 1.0, 1.0, 1.0]);
        let got = convolve(&geom, &geom, 4);
        assert_eq!(got.coeffs(), &[0.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn conv_power_examples() {
        let classical = ts(&[0.0, 1.0]);
        let unit = conv_power(&classical, 0, 4).unwrap();
        assert_eq!(unit.coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let cube = conv_power(&classical, 3, 5).unwrap();
        assert_eq!(cube.coeffs(), &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        // compositions of 4 into 2 positive parts: 3
        let geom = ts(&[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(conv_power(&geom, 2, 4).unwrap().coeff(4), 3.0);
        // rejects p_0 != 0
        assert!(conv_power(&ts(&[1.0, 1.0]), 2, 4).is_err());
    }

    #[test]
    fn conv_power_matches_iterated_convolve() {
        // independent oracle: literal k-fold convolution
        let spec = BuiltinSpec::LogSeries.series_spec(24);
        let p = spec.p();
        for k in 0..=6usize {
            let fast = conv_power(p, k, 24).unwrap();
            let mut slow = TruncatedSeries::unit(24);
            for _ in 0..k {
                slow = convolve(&slow, p, 24);
            }
            for n in 0..=24 {
                let (a, b) = (fast.coeff(n), slow.coeff(n));
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn eval_series_examples() {
        let unit = TruncatedSeries::unit(8);
        assert_eq!(eval_series(&unit, 3.0).unwrap().value, 1.0);
        // classical u at t=2 (infinite radius)
        let classical = ts(&[0.0, 1.0]);
        assert_eq!(eval_series(&classical, 2.0).unwrap().value, 2.0);
        // geometric u at 0.5 with T=60: 0.5/(1-0.5) = 1 up to 1e-12
        let spec = BuiltinSpec::GeometricV1.series_spec(60);
        let got = eval_series(spec.p(), 0.5).unwrap();
        assert!((got.value - 1.0).abs() < 1e-12);
        match got.tail {
            TailEstimate::Bounded(b) => assert!(b < 1e-12),
            TailEstimate::Unreliable => panic!("geometric tail should be bounded"),
        }
        // radius violation
        assert!(matches!(eval_series(spec.p(), 1.0), Err(Error::Radius { .. })));
    }

    #[test]
    fn eval_series_flags_divergent_ratio() {
        let s = TruncatedSeries::new(vec![1.0, 1.0, 2.0, 4.0, 8.0], f64::INFINITY).unwrap();
        assert_eq!(eval_series(&s, 1.0).unwrap().tail, TailEstimate::Unreliable);
    }

    #[test]
    fn tilted_pmf_geometric_and_logseries() {
        let spec = BuiltinSpec::GeometricV1.series_spec(120);
        let law = tilted_pmf(spec.p(), 0.5, 120).unwrap();
        assert!((law.pmf(1) - 0.5).abs() < 1e-12);
        assert!((law.pmf(3) - 0.125).abs() < 1e-12);

        let spec = BuiltinSpec::LogSeries.series_spec(120);
        let law = tilted_pmf(spec.p(), 0.5, 120).unwrap();
        let expect = 0.5 / 2.0f64.ln();
        assert!((law.pmf(1) - expect).abs() < 1e-12, "{}", law.pmf(1));
    }

    #[test]
    fn tilted_pmf_degenerate_normalizer() {
        let zero = TruncatedSeries::new(vec![0.0, 0.0, 0.0], f64::INFINITY).unwrap();
        assert!(matches!(
            tilted_pmf(&zero, 0.5, 2),
            Err(Error::DegenerateNormalizer(_))
        ));
    }

    #[test]
    fn classical_b_sequence() {
        let spec = BuiltinSpec::Classical.series_spec(40);
        let ac = alt_coefficients(&spec, 40).unwrap();
        // b_{2k} = 1/(k! 2^k), b_odd = 0; so B = even integers
        let mut expect = 1.0;
        for k in 0..=20usize {
            assert!((ac.b[2 * k] - expect).abs() <= 1e-12 * expect, "k={k}");
            if 2 * k + 1 <= 40 {
                assert_eq!(ac.b[2 * k + 1], 0.0);
            }
            expect /= 2.0 * (k + 1) as f64;
        }
        assert!((ac.b[4] - 0.125).abs() < 1e-15);
        assert_eq!(ac.support, (0..=20).map(|k| 2 * k).collect::<Vec<_>>());
    }

    #[test]
    fn geometric_v1_b_values() {
        let spec = BuiltinSpec::GeometricV1.series_spec(20);
        let ac = alt_coefficients(&spec, 20).unwrap();
        assert_eq!(ac.b[0], 1.0);
        assert_eq!(ac.b[1], 0.0);
        assert!((ac.b[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn example_b_inner_sum_is_binomial() {
        // sum_l p_l^{*2k} q_{n-l} = C(n + alpha, n - 2k) for the geometric spec
        for &alpha in &[-0.5f64, 0.0, 0.5, 1.0, 2.0] {
            let spec = BuiltinSpec::Geometric { alpha }.series_spec(20);
            let ac = alt_coefficients(&spec, 20).unwrap();
            for n in 0..=20usize {
                for k in 0..=(n / 2) {
                    let expect = binom(n as f64 + alpha, (n - 2 * k) as u64);
                    let got = ac.inner_sum(k, n);
                    assert!(
                        (got - expect).abs() <= 1e-9 * expect.abs().max(1.0),
                        "alpha={alpha} n={n} k={k}: {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn geometric_v1_three_routes_agree() {
        let cache = CombinatorialCache::new(32);
        let spec = BuiltinSpec::GeometricV1.series_spec(20);
        let ac = alt_coefficients(&spec, 20).unwrap();
        for n in 0..=20usize {
            let defining = ac.b[n];
            let binomial = b_geometric_v1_binomial(n);
            let lah_form = b_geometric_v1_lah(n, &cache);
            let scale = defining.abs().max(1.0);
            assert!((defining - binomial).abs() <= 1e-10 * scale, "n={n}");
            assert!((defining - lah_form).abs() <= 1e-10 * scale, "n={n}");
        }
    }

    #[test]
    fn logseries_u_squared_coefficients() {
        // [t^n] u(t)^2 = 2 H_{n-1} / n for u = -log(1-t)
        let spec = BuiltinSpec::LogSeries.series_spec(30);
        let sq = conv_power(spec.p(), 2, 30).unwrap();
        for n in 2..=30usize {
            let expect = 2.0 * harmonic(n as u64 - 1) / n as f64;
            assert!((sq.coeff(n) - expect).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn builtin_theta_maps() {
        assert_eq!(BuiltinSpec::Classical.theta_for_delta(1.4).unwrap(), 1.4);
        assert!((BuiltinSpec::GeometricV1.theta_for_delta(1.0).unwrap() - 0.5).abs() < 1e-15);
        let theta = BuiltinSpec::LogSeries.theta_for_delta(-2.0).unwrap();
        assert!((theta - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        assert!(BuiltinSpec::Classical.theta_for_delta(0.0).is_err());
    }

    #[test]
    fn custom_theta_bisection_matches_closed_form() {
        for spec in [BuiltinSpec::GeometricV1, BuiltinSpec::LogSeries] {
            let realized = spec.series_spec(400);
            for &delta in &[0.3f64, 1.0, 2.0] {
                let got = realized.theta_for_delta(delta).unwrap();
                let expect = spec.u_inv(delta);
                assert!((got - expect).abs() < 1e-10, "{spec:?} delta={delta}: {got} vs {expect}");
            }
        }
        // classical has infinite t0, exercising the bracket expansion
        let realized = BuiltinSpec::Classical.series_spec(8);
        assert!((realized.theta_for_delta(3.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn series_spec_validation() {
        let bad_p = ts(&[0.5, 1.0]);
        let q = ts(&[1.0]);
        assert!(SeriesSpec::new(bad_p, q.clone(), 1.0).is_err());
        let p = ts(&[0.0, 1.0]);
        let zero_q = TruncatedSeries::new(vec![0.0, 0.0], f64::INFINITY).unwrap();
        assert!(SeriesSpec::new(p.clone(), zero_q, 1.0).is_err());
        assert!(SeriesSpec::new(p, q, 1.0).is_ok());
    }

    #[test]
    fn rejects_negative_coefficients() {
        assert!(TruncatedSeries::new(vec![1.0, -0.5], 1.0).is_err());
        assert!(TruncatedSeries::new(vec![], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn convolution_commutes(
            a in proptest::collection::vec(0.0f64..5.0, 1..8),
            b in proptest::collection::vec(0.0f64..5.0, 1..8),
        ) {
            let sa = TruncatedSeries::new(a, f64::INFINITY).unwrap();
            let sb = TruncatedSeries::new(b, f64::INFINITY).unwrap();
            let ab = convolve(&sa, &sb, 10);
            let ba = convolve(&sb, &sa, 10);
            for n in 0..=10 {
                prop_assert!((ab.coeff(n) - ba.coeff(n)).abs() <= 1e-12 * ab.coeff(n).abs().max(1.0));
            }
        }

        #[test]
        fn tilted_pmf_normalizes(theta in 0.05f64..0.9) {
            let spec = BuiltinSpec::LogSeries.series_spec(200);
            let law = tilted_pmf(spec.p(), theta, 200).unwrap();
            let total: f64 = (0..=200).map(|n| law.pmf(n)).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
