//! The Fejér law `P{X = n} = (m - |n|) / m²`, its i.i.d. sums `S_k`, and the
//! kernel integrals built from `(sin πmt / (m sin πt))^{2k}`.
//!
//! Exact distributions are carried as integer counts over the common
//! denominator `m^{2k}`: the generating function of `X` is
//! `z^{1-m} A_m(z)²` with `A_m(z) = 1 + z + … + z^{m-1}`, so the counts of
//! `S_k` are the coefficients of `A_m(z)^{2k}`, obtained by `2k` sliding
//! box sums.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::quad::{self, QuadError, QuadOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FejerError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("support of S_k needs {needed} points, cap is {cap}")]
    SupportCap { needed: u64, cap: u64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Knobs shared by the exact and quadrature routes.
#[derive(Debug, Clone, Copy)]
pub struct FejerConfig {
    /// Maximum number of support points `2(m-1)k + 1` for exact convolution.
    pub support_cap: u64,
    pub quad: QuadOptions,
}

impl Default for FejerConfig {
    fn default() -> Self {
        Self {
            support_cap: 1_000_000,
            quad: QuadOptions {
                rel_tol: 1e-10,
                abs_tol: 1e-300,
                max_subdivisions: 50_000,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FejerLaw {
    m: u32,
}

impl FejerLaw {
    pub fn new(m: u32) -> Result<Self, FejerError> {
        if m == 0 {
            return Err(FejerError::InvalidParameter("m must be >= 1".into()));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn pmf(&self, n: i64) -> BigRational {
        let m = i64::from(self.m);
        if n.abs() >= m {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(m - n.abs()), BigInt::from(m * m))
    }

    pub fn mean(&self) -> BigRational {
        let m = i64::from(self.m);
        (1 - m..m).map(|n| self.pmf(n) * BigInt::from(n)).sum()
    }

    /// `(m² - 1) / 6`, computed from the pmf rather than the closed form.
    pub fn variance(&self) -> BigRational {
        let m = i64::from(self.m);
        (1 - m..m).map(|n| self.pmf(n) * BigInt::from(n * n)).sum()
    }

    /// Characteristic function `E e(tX) = (sin πmt / (m sin πt))²`.
    pub fn char_fn(&self, t: f64) -> f64 {
        let r = kernel_ratio(self.m, t);
        r * r
    }
}

/// `sin(πmt) / (m sin πt)` with the removable singularity at integers set to 1.
pub fn kernel_ratio(m: u32, t: f64) -> f64 {
    let r = t - t.round();
    if r == 0.0 || m == 1 {
        return 1.0;
    }
    let mf = f64::from(m);
    (PI * mf * r).sin() / (mf * (PI * r).sin())
}

/// One evaluation of the Fejér power `φ_{S_k}(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation {
    pub t: f64,
    pub value: f64,
}

pub fn kernel_power(m: u32, k: u32, t: f64) -> KernelEvaluation {
    let r = kernel_ratio(m, t);
    KernelEvaluation {
        t: t - t.floor(),
        value: pow_even(r, k),
    }
}

fn pow_even(r: f64, k: u32) -> f64 {
    let sq = r * r;
    match i32::try_from(k) {
        Ok(k) => sq.powi(k),
        Err(_) => sq.powf(f64::from(k)),
    }
}

/// Exact law of `S_k = X_1 + … + X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDistribution {
    m: u32,
    k: u32,
    /// `counts[i]` is the numerator of `P{S_k = i - (m-1)k}`.
    counts: Vec<BigUint>,
    denominator: BigUint,
}

impl SumDistribution {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> i64 {
        i64::from(self.m - 1) * i64::from(self.k)
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Numerator of `P{S_k = ν}` over [`Self::denominator`].
    pub fn count(&self, nu: i64) -> BigUint {
        let r = self.radius();
        if nu.abs() > r {
            return BigUint::zero();
        }
        self.counts[(nu + r) as usize].clone()
    }

    pub fn pmf(&self, nu: i64) -> BigRational {
        BigRational::new(self.count(nu).into(), self.denominator.clone().into())
    }

    pub fn pmf_f64(&self, nu: i64) -> f64 {
        self.pmf(nu).to_f64().unwrap_or(0.0)
    }

    /// `(ν, P{S_k = ν})` over the full support, ascending in `ν`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        let r = self.radius();
        self.counts.iter().enumerate().map(move |(i, c)| {
            (
                i as i64 - r,
                BigRational::new(c.clone().into(), self.denominator.clone().into()),
            )
        })
    }

    pub fn total_mass(&self) -> BigRational {
        let total: BigUint = self.counts.iter().sum();
        BigRational::new(total.into(), self.denominator.clone().into())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.counts.len();
        (0..n / 2).all(|i| self.counts[i] == self.counts[n - 1 - i])
    }

    /// `φ_X(t)^k`, the closed form.
    pub fn char_fn(&self, t: f64) -> f64 {
        kernel_power(self.m, self.k, t).value
    }

    /// `Σ_ν P{S_k = ν} e(tν)`, evaluated from the stored distribution.
    /// The imaginary part cancels by symmetry.
    pub fn char_fn_fourier(&self, t: f64) -> f64 {
        let r = self.radius();
        self.counts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let nu = (i as i64 - r) as f64;
                ratio_to_f64(c, &self.denominator) * (2.0 * PI * t * nu).cos()
            })
            .sum()
    }

    /// Probabilities as floats, ascending in `ν`.
    pub fn probabilities_f64(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|c| ratio_to_f64(c, &self.denominator))
            .collect()
    }
}

/// `num / den` as a float even when both overflow `f64`.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(960);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

fn box_step(prev: &[BigUint], m: usize) -> Vec<BigUint> {
    let n = prev.len() + m - 1;
    let mut out = Vec::with_capacity(n);
    let mut window = BigUint::zero();
    for i in 0..n {
        if i < prev.len() {
            window += &prev[i];
        }
        if i >= m {
            window -= &prev[i - m];
        }
        out.push(window.clone());
    }
    out
}

fn support_points(m: u32, k: u32) -> u64 {
    2 * u64::from(m - 1) * u64::from(k) + 1
}

fn check_support(m: u32, k: u32, cap: u64) -> Result<(), FejerError> {
    let needed = support_points(m, k);
    if needed > cap {
        return Err(FejerError::SupportCap { needed, cap });
    }
    Ok(())
}

/// Exact `k`-fold self-convolution of the Fejér law.
pub fn convolve(law: FejerLaw, k: u32, cfg: &FejerConfig) -> Result<SumDistribution, FejerError> {
    if k == 0 {
        return Err(FejerError::InvalidParameter("k must be >= 1".into()));
    }
    let m = law.m;
    check_support(m, k, cfg.support_cap)?;
    let mut counts = vec![BigUint::one()];
    for _ in 0..2 * k {
        counts = box_step(&counts, m as usize);
    }
    Ok(SumDistribution {
        m,
        k,
        counts,
        denominator: BigUint::from(m).pow(2 * k),
    })
}

/// Exact `P{S_k = 0}` for every `k` in `1..=k_max`, sharing one sweep.
pub fn p_zero_exact_sequence(
    law: FejerLaw,
    k_max: u32,
    cfg: &FejerConfig,
) -> Result<Vec<BigRational>, FejerError> {
    let m = law.m;
    check_support(m, k_max, cfg.support_cap)?;
    let m2 = BigUint::from(m) * BigUint::from(m);
    let mut denominator = BigUint::one();
    let mut counts = vec![BigUint::one()];
    let mut out = Vec::with_capacity(k_max as usize);
    for _ in 0..k_max {
        counts = box_step(&counts, m as usize);
        counts = box_step(&counts, m as usize);
        denominator *= &m2;
        let centre = counts[counts.len() / 2].clone();
        out.push(BigRational::new(centre.into(), denominator.clone().into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PZeroMethod {
    Exact,
    Quadrature,
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PZero {
    Exact(BigRational),
    Approx(f64),
}

impl PZero {
    pub fn to_f64(&self) -> f64 {
        match self {
            PZero::Exact(q) => q.to_f64().unwrap_or(0.0),
            PZero::Approx(v) => *v,
        }
    }
}

fn validate_mk(m: u32, k: u32) -> Result<(), FejerError> {
    if m == 0 || k == 0 {
        return Err(FejerError::InvalidParameter(format!(
            "m and k must be >= 1 (got m={m}, k={k})"
        )));
    }
    Ok(())
}

pub fn p_zero(m: u32, k: u32, method: PZeroMethod, cfg: &FejerConfig) -> Result<PZero, FejerError> {
    validate_mk(m, k)?;
    match method {
        PZeroMethod::Exact => {
            let dist = convolve(FejerLaw { m }, k, cfg)?;
            Ok(PZero::Exact(dist.pmf(0)))
        }
        PZeroMethod::Quadrature => p_zero_quadrature(m, k, cfg).map(PZero::Approx),
        PZeroMethod::Asymptotic => Ok(PZero::Approx(p_zero_asymptotic(m, k))),
    }
}

/// `√(3/π) / (m √k)`.
pub fn p_zero_asymptotic(m: u32, k: u32) -> f64 {
    (3.0 / PI).sqrt() / (f64::from(m) * f64::from(k).sqrt())
}

/// Gaussian leading term `1/√(π k (m²-1)/3)` from the variance `(m²-1)/6`
/// of the law; `None` for `m = 1`. Tends to [`p_zero_asymptotic`] only as
/// `m → ∞`: the ratio of the two is `m/√(m²-1)`.
pub fn p_zero_local_limit(m: u32, k: u32) -> Option<f64> {
    let mf = f64::from(m);
    (m >= 2).then(|| 1.0 / (PI * f64::from(k) * (mf * mf - 1.0) / 3.0).sqrt())
}

/// Panels for `∫_0^{1/2}`: geometric refinement inside the central lobe,
/// whose width is about `1/(m√k)`, then one panel per side lobe.
fn p_zero_breakpoints(m: u32, k: u32) -> Vec<f64> {
    if m == 1 {
        return vec![0.0, 0.5];
    }
    let mf = f64::from(m);
    let lobe = 1.0 / mf;
    let width = (1.0 / (mf * f64::from(k).sqrt())).min(lobe);
    let mut pts = vec![0.0];
    let mut h = width / 64.0;
    while h < lobe {
        pts.push(h);
        h *= 2.0;
    }
    let mut j = 1;
    while f64::from(j) / mf < 0.5 {
        pts.push(f64::from(j) / mf);
        j += 1;
    }
    pts.push(0.5);
    pts
}

/// `∫_0^1 (sin πmt / (m sin πt))^{2k} dt` by adaptive quadrature.
pub fn p_zero_quadrature(m: u32, k: u32, cfg: &FejerConfig) -> Result<f64, FejerError> {
    validate_mk(m, k)?;
    let pts = p_zero_breakpoints(m, k);
    let res = quad::integrate_panels(|t| pow_even(kernel_ratio(m, t), k), &pts, cfg.quad)?;
    Ok(2.0 * res.value)
}

/// `C0 / (m √k)`.
pub fn p_zero_lower_bound(m: u32, k: u32, c0: f64) -> f64 {
    c0 / (f64::from(m) * f64::from(k).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub m: u32,
    pub k: u32,
    pub p_zero: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    /// Largest grid value below 1/4 admitting some `k0 <= k_max`; `None` if none does.
    pub c0: Option<f64>,
    pub k0: Option<u32>,
    /// `min p_zero · m √k` over the sweep.
    pub min_scaled_p_zero: f64,
    pub argmin: (u32, u32),
    /// Failures of the default pair `C0 = 0.2, k0 = 1`.
    pub default_violations: Vec<BoundViolation>,
    pub exact_points: usize,
    pub quadrature_points: usize,
}

pub const DEFAULT_C0: f64 = 0.2;
pub const DEFAULT_K0: u32 = 1;

/// Scaled values `p_zero(m, k) · m √k` for `k = 1..=k_max`, exact when the
/// support fits under the cap and by quadrature otherwise.
fn scaled_p_zero_row(m: u32, k_max: u32, cfg: &FejerConfig) -> Result<(Vec<f64>, bool), FejerError> {
    let law = FejerLaw::new(m)?;
    let exact = support_points(m, k_max) <= cfg.support_cap;
    let values = if exact {
        p_zero_exact_sequence(law, k_max, cfg)?
            .iter()
            .map(|q| q.to_f64().unwrap_or(0.0))
            .collect::<Vec<_>>()
    } else {
        (1..=k_max)
            .map(|k| p_zero_quadrature(m, k, cfg))
            .collect::<Result<Vec<_>, _>>()?
    };
    let scaled = values
        .iter()
        .enumerate()
        .map(|(i, p)| p * f64::from(m) * ((i + 1) as f64).sqrt())
        .collect();
    Ok((scaled, exact))
}

/// Searches a 0.01 grid of `C0 < 1/4` for the largest constant such that
/// `p_zero(m,k) >= C0/(m√k)` for all `m <= m_max` and `k0 <= k <= k_max`.
pub fn calibrate_c0(m_max: u32, k_max: u32, cfg: &FejerConfig) -> Result<Calibration, FejerError> {
    validate_mk(m_max, k_max)?;
    let ms: Vec<u32> = (1..=m_max).collect();
    #[cfg(feature = "parallel")]
    let rows: Vec<_> = {
        use rayon::prelude::*;
        ms.par_iter().map(|&m| scaled_p_zero_row(m, k_max, cfg)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<_> = ms.iter().map(|&m| scaled_p_zero_row(m, k_max, cfg)).collect();

    let mut table = Vec::with_capacity(rows.len());
    let (mut exact_points, mut quadrature_points) = (0, 0);
    for row in rows {
        let (scaled, exact) = row?;
        if exact {
            exact_points += scaled.len();
        } else {
            quadrature_points += scaled.len();
        }
        table.push(scaled);
    }

    // suffix_min[k-1] = min over m and k' >= k of the scaled value.
    let mut suffix_min = vec![f64::INFINITY; k_max as usize + 1];
    for k in (0..k_max as usize).rev() {
        let col = table.iter().map(|row| row[k]).fold(f64::INFINITY, f64::min);
        suffix_min[k] = suffix_min[k + 1].min(col);
    }

    let mut min_scaled = f64::INFINITY;
    let mut argmin = (1, 1);
    let mut default_violations = Vec::new();
    for (mi, row) in table.iter().enumerate() {
        let m = mi as u32 + 1;
        for (ki, &s) in row.iter().enumerate() {
            let k = ki as u32 + 1;
            if s < min_scaled {
                min_scaled = s;
                argmin = (m, k);
            }
            if k >= DEFAULT_K0 && s < DEFAULT_C0 {
                default_violations.push(BoundViolation {
                    m,
                    k,
                    p_zero: s / (f64::from(m) * f64::from(k).sqrt()),
                    bound: p_zero_lower_bound(m, k, DEFAULT_C0),
                });
            }
        }
    }

    let mut c0 = None;
    let mut k0 = None;
    for step in (1..=24).rev() {
        let candidate = f64::from(step) / 100.0;
        if let Some(idx) = (0..k_max as usize).find(|&i| suffix_min[i] >= candidate) {
            c0 = Some(candidate);
            k0 = Some(idx as u32 + 1);
            break;
        }
    }

    Ok(Calibration {
        c0,
        k0,
        min_scaled_p_zero: min_scaled,
        argmin,
        default_violations,
        exact_points,
        quadrature_points,
    })
}

/// Natural-log magnitudes of the kernel integral and its two comparison
/// bounds, with linear mirrors when they fit in an `f64`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelIntegralBounds {
    pub m: u32,
    pub k: u32,
    pub ln_lower: f64,
    pub ln_integral: f64,
    pub ln_upper: f64,
    pub lower: Option<f64>,
    pub integral: Option<f64>,
    pub upper: Option<f64>,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

fn linear_mirror(ln: f64) -> Option<f64> {
    (ln < 709.0).then(|| ln.exp())
}

/// Lower constant `e^{-1/5}/π` and upper `2^{2k+1} m^{4k²/(2k+1)}` around
/// `∫_0^1 (sin πmt / sin πt)^{2k} dt = m^{2k} P{S_k = 0}`.
pub fn kernel_integral_bounds(m: u32, k: u32, cfg: &FejerConfig) -> Result<KernelIntegralBounds, FejerError> {
    validate_mk(m, k)?;
    let (mf, kf) = (f64::from(m), f64::from(k));
    let ln_m = mf.ln();
    let p0 = p_zero_quadrature(m, k, cfg)?;
    let ln_integral = 2.0 * kf * ln_m + p0.ln();
    let ln_lower = -0.2 - PI.ln() + (2.0 * kf - 1.0) * ln_m - 0.5 * kf.ln();
    let ln_upper = (2.0 * kf + 1.0) * 2f64.ln() + (4.0 * kf * kf / (2.0 * kf + 1.0)) * ln_m;
    Ok(KernelIntegralBounds {
        m,
        k,
        ln_lower,
        ln_integral,
        ln_upper,
        lower: linear_mirror(ln_lower),
        integral: linear_mirror(ln_integral),
        upper: linear_mirror(ln_upper),
        lower_holds: ln_lower <= ln_integral,
        upper_holds: ln_integral <= ln_upper,
    })
}

/// Distance to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Right-hand side `min(1, (2m‖t‖)^{-2k})` of the decay estimate.
pub fn decay_bound(m: u32, k: u32, t: f64) -> f64 {
    let base = 2.0 * f64::from(m) * dist_to_int(t);
    if base <= 1.0 {
        1.0
    } else {
        pow_even(1.0 / base, k)
    }
}

/// `φ_{S_k}(t) <= min(1, (2m‖t‖)^{-2k})`. Both sides are `2k`-th powers,
/// so the comparison is made on the bases to avoid underflow.
pub fn decay_bound_check(m: u32, k: u32, t: f64) -> bool {
    let _ = k;
    let lhs = kernel_ratio(m, t).abs();
    let base = 2.0 * f64::from(m) * dist_to_int(t);
    let rhs = if base <= 1.0 { 1.0 } else { 1.0 / base };
    lhs <= rhs * (1.0 + 4.0 * f64::EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(FejerLaw::new(1).unwrap().pmf(0), q(1, 1));
        let law = FejerLaw::new(2).unwrap();
        assert_eq!(law.pmf(0), q(1, 2));
        assert_eq!(law.pmf(1), q(1, 4));
        assert_eq!(law.pmf(-1), q(1, 4));
        let law = FejerLaw::new(5).unwrap();
        assert!(law.pmf(5).is_zero() && law.pmf(-5).is_zero());
        assert!(FejerLaw::new(0).is_err());
    }

    #[test]
    fn moments_are_exact() {
        for m in 1..=12u32 {
            let law = FejerLaw::new(m).unwrap();
            assert!(law.mean().is_zero());
            let mi = i64::from(m);
            assert_eq!(law.variance(), q(mi * mi - 1, 6));
        }
    }

    #[test]
    fn char_fn_examples() {
        for m in 1..6 {
            assert_eq!(FejerLaw::new(m).unwrap().char_fn(0.0), 1.0);
            assert_eq!(FejerLaw::new(m).unwrap().char_fn(3.0), 1.0);
        }
        assert!(FejerLaw::new(2).unwrap().char_fn(0.5) < 1e-30);
        assert!(FejerLaw::new(3).unwrap().char_fn(1.0 / 3.0) < 1e-30);
    }

    #[test]
    fn convolve_examples() {
        let cfg = FejerConfig::default();
        let d = convolve(FejerLaw::new(1).unwrap(), 7, &cfg).unwrap();
        assert_eq!(d.radius(), 0);
        assert_eq!(d.pmf(0), q(1, 1));

        let d = convolve(FejerLaw::new(2).unwrap(), 2, &cfg).unwrap();
        assert_eq!(d.pmf(0), q(3, 8));
        assert_eq!(d.pmf(1), q(1, 4));
        assert_eq!(d.pmf(-1), q(1, 4));
        assert_eq!(d.pmf(2), q(1, 16));
        assert_eq!(d.pmf(-2), q(1, 16));
        assert!(d.pmf(3).is_zero());

        let law = FejerLaw::new(2).unwrap();
        let d = convolve(law, 1, &cfg).unwrap();
        for n in -3..=3 {
            assert_eq!(d.pmf(n), law.pmf(n));
        }
    }

    #[test]
    fn convolve_respects_support_cap() {
        let cfg = FejerConfig { support_cap: 100, ..Default::default() };
        let err = convolve(FejerLaw::new(11).unwrap(), 5, &cfg).unwrap_err();
        assert_eq!(err, FejerError::SupportCap { needed: 101, cap: 100 });
    }

    #[test]
    fn char_fn_sum_examples() {
        let cfg = FejerConfig::default();
        let d = convolve(FejerLaw::new(2).unwrap(), 2, &cfg).unwrap();
        assert_eq!(d.char_fn(0.0), 1.0);
        assert!(d.char_fn(0.5) < 1e-30);
        assert!((d.char_fn(0.25) - 0.25).abs() < 1e-15);
        assert!((d.char_fn_fourier(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn p_zero_examples() {
        let cfg = FejerConfig::default();
        let p = p_zero(1, 3, PZeroMethod::Exact, &cfg).unwrap();
        assert_eq!(p, PZero::Exact(q(1, 1)));
        let p = p_zero(2, 2, PZeroMethod::Exact, &cfg).unwrap();
        assert_eq!(p, PZero::Exact(q(3, 8)));
        let a = p_zero(2, 1, PZeroMethod::Asymptotic, &cfg).unwrap().to_f64();
        assert!((a - 0.488_602_511_902_919_9).abs() < 1e-12);
        let quad = p_zero(2, 2, PZeroMethod::Quadrature, &cfg).unwrap().to_f64();
        assert!((quad - 0.375).abs() < 1e-12);
    }

    #[test]
    fn p_zero_sequence_matches_convolution() {
        let cfg = FejerConfig::default();
        for m in 1..=6 {
            let law = FejerLaw::new(m).unwrap();
            let seq = p_zero_exact_sequence(law, 5, &cfg).unwrap();
            for k in 1..=5u32 {
                assert_eq!(seq[k as usize - 1], convolve(law, k, &cfg).unwrap().pmf(0));
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert!((p_zero_lower_bound(2, 1, 0.2) - 0.1).abs() < 1e-15);
        assert!((p_zero_lower_bound(1, 1, 0.2) - 0.2).abs() < 1e-15);
        assert!((p_zero_lower_bound(4, 100, 0.2) - 0.005).abs() < 1e-15);
    }

    #[test]
    fn calibrate_small_sweeps() {
        let cfg = FejerConfig::default();
        let c = calibrate_c0(1, 10, &cfg).unwrap();
        assert_eq!(c.c0, Some(0.24));
        assert_eq!(c.k0, Some(1));
        assert!(c.default_violations.is_empty());

        let c = calibrate_c0(8, 50, &cfg).unwrap();
        assert!(c.c0.unwrap() >= 0.2);
        assert_eq!(c.k0, Some(1));
        assert!(c.default_violations.is_empty());
        assert_eq!(c.quadrature_points, 0);
    }

    #[test]
    fn calibrate_falls_back_to_quadrature_past_cap() {
        let cfg = FejerConfig { support_cap: 50, ..Default::default() };
        let c = calibrate_c0(4, 12, &cfg).unwrap();
        assert!(c.quadrature_points > 0 && c.exact_points > 0);
        assert_eq!(c.c0, Some(0.24));
    }

    #[test]
    fn kernel_integral_examples() {
        let cfg = FejerConfig::default();
        let b = kernel_integral_bounds(1, 1, &cfg).unwrap();
        assert!((b.integral.unwrap() - 1.0).abs() < 1e-10);
        let b = kernel_integral_bounds(2, 1, &cfg).unwrap();
        assert!((b.integral.unwrap() - 2.0).abs() < 1e-9);
        let b = kernel_integral_bounds(4, 3, &cfg).unwrap();
        assert!(b.lower_holds && b.upper_holds);
        assert!(b.lower.unwrap() <= b.integral.unwrap() && b.integral.unwrap() <= b.upper.unwrap());
        // log-space past f64 range
        let b = kernel_integral_bounds(64, 400, &cfg).unwrap();
        assert!(b.integral.is_none() && b.ln_integral > 709.0);
        assert!(b.lower_holds && b.upper_holds);
    }

    #[test]
    fn decay_examples() {
        assert!(decay_bound_check(2, 1, 0.5));
        assert!(kernel_power(2, 1, 0.5).value <= decay_bound(2, 1, 0.5));
        assert!((decay_bound(2, 1, 0.5) - 0.25).abs() < 1e-15);
        for m in 1..5 {
            assert!(decay_bound_check(m, 3, 0.0));
        }
        assert!(decay_bound_check(3, 2, 0.1));
        let lhs = kernel_power(3, 2, 0.1).value;
        assert!(lhs <= decay_bound(3, 2, 0.1));
    }
}
