//! Exact finite-support replay of the proof's probabilistic objects.
//!
//! With `Y_1..Y_N` independent copies of `S_k`, `Z_N = Σ λ_ℓ Y_ℓ` has finite
//! support, so `Υ`, `H`, `H_j`, `E|sin(πT Z)/(πZ)|` and `P{|Z| < ε}` are
//! finite sums. Also here: `K(r)` and the `|x|^r` integral identity with the
//! Cauchy–Schwarz bound it yields for densities.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, ProofParameters, ProofStepCheck};
use crate::fejer::{self, FejerConfig, FejerError, FejerLaw, PZeroMethod, SumDistribution};
use crate::lattice::{self, Fixed, LatticeConfig, LatticeError, LinearFormInstance, ZeroClassifier};
use crate::quad::{self, QuadError, QuadOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{needed} support tuples exceed the cap of {cap}")]
    TupleCap { needed: u64, cap: u64 },
    #[error(transparent)]
    Fejer(#[from] FejerError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

impl From<bounds::BoundsError> for ReplayError {
    fn from(e: bounds::BoundsError) -> Self {
        match e {
            bounds::BoundsError::Domain(s) => ReplayError::Domain(s),
            bounds::BoundsError::Lattice(l) => ReplayError::Lattice(l),
            bounds::BoundsError::Fejer(f) => ReplayError::Fejer(f),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReplayConfig {
    pub fejer: FejerConfig,
    pub lattice: LatticeConfig,
    /// Maximum number of tuples `(2(m-1)k + 1)^N` enumerated.
    pub tuple_cap: u64,
    pub quad: QuadOptions,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        Self {
            fejer: FejerConfig::default(),
            lattice: LatticeConfig::default(),
            tuple_cap: 10_000_000,
            quad: QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_subdivisions: 200_000 },
        }
    }
}

fn tuple_count(radius: i64, n: usize, cap: u64) -> Result<u64, ReplayError> {
    let side = 2 * radius as u64 + 1;
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(side);
    }
    if total > cap {
        return Err(ReplayError::TupleCap { needed: total, cap });
    }
    Ok(total)
}

/// Calls `f(ν)` for every `ν ∈ [-R, R]^n`.
fn for_each_tuple(radius: i64, n: usize, mut f: impl FnMut(&[i64])) {
    let mut nu = vec![-radius; n];
    loop {
        f(&nu);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if nu[i] < radius {
                nu[i] += 1;
                break;
            }
            nu[i] = -radius;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedAtom {
    pub value: f64,
    #[serde(skip)]
    pub value_fixed: Fixed,
    /// Numerator over [`WeightedSumDistribution::denominator`].
    #[serde(serialize_with = "serialize_biguint")]
    pub numerator: BigUint,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact law of `Z_N = Σ λ_ℓ Y_ℓ`, atoms sorted by value.
///
/// Atoms closer than `2^{-precision/2}` are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSumDistribution {
    m: u32,
    k: u32,
    atoms: Vec<WeightedAtom>,
    denominator: BigUint,
    tuples: u64,
    threshold: BigInt,
    precision: u32,
}

impl WeightedSumDistribution {
    pub fn new(instance: &LinearFormInstance, dist: &SumDistribution, tuple_cap: u64) -> Result<Self, ReplayError> {
        let n = instance.len();
        let r = dist.radius();
        let tuples = tuple_count(r, n, tuple_cap)?;
        let counts: Vec<BigUint> = (-r..=r).map(|nu| dist.count(nu)).collect();
        let values = instance.values();
        let mut raw: Vec<(BigInt, BigUint)> = Vec::with_capacity(tuples as usize);
        for_each_tuple(r, n, |nu| {
            let mut s = BigInt::zero();
            let mut p = BigUint::one();
            for (v, &c) in values.iter().zip(nu) {
                s += v.raw() * c;
                p *= &counts[(c + r) as usize];
            }
            if !p.is_zero() {
                raw.push((s, p));
            }
        });
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let precision = instance.precision();
        let threshold = Fixed::half_precision_threshold(precision).raw().clone();
        let mut atoms: Vec<WeightedAtom> = Vec::new();
        let mut anchor: Option<BigInt> = None;
        for (s, p) in raw {
            match (&anchor, atoms.last_mut()) {
                (Some(a), Some(last)) if &s - a < threshold => last.numerator += p,
                _ => {
                    anchor = Some(s.clone());
                    let value_fixed = Fixed::from_raw(s, precision);
                    atoms.push(WeightedAtom { value: value_fixed.to_f64(), value_fixed, numerator: p });
                }
            }
        }
        let denominator = dist.denominator().pow(n as u32);
        Ok(Self { m: dist.m(), k: dist.k(), atoms, denominator, tuples, threshold, precision })
    }

    pub fn from_parameters(
        instance: &LinearFormInstance,
        m: u32,
        k: u32,
        cfg: &ReplayConfig,
    ) -> Result<Self, ReplayError> {
        let dist = fejer::convolve(FejerLaw::new(m)?, k, &cfg.fejer)?;
        Self::new(instance, &dist, cfg.tuple_cap)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn atoms(&self) -> &[WeightedAtom] {
        &self.atoms
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn tuples(&self) -> u64 {
        self.tuples
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn probability(&self, atom: &WeightedAtom) -> BigRational {
        BigRational::new(atom.numerator.clone().into(), self.denominator.clone().into())
    }

    pub fn probability_f64(&self, atom: &WeightedAtom) -> f64 {
        fejer::ratio_to_f64(&atom.numerator, &self.denominator)
    }

    pub fn total_mass(&self) -> BigRational {
        let total: BigUint = self.atoms.iter().map(|a| &a.numerator).sum();
        BigRational::new(total.into(), self.denominator.clone().into())
    }

    fn is_zero(&self, atom: &WeightedAtom) -> bool {
        atom.value_fixed.raw().abs() < self.threshold
    }

    /// Atoms with a nonzero value.
    pub fn nonzero_atoms(&self) -> impl Iterator<Item = &WeightedAtom> {
        self.atoms.iter().filter(|a| !self.is_zero(a))
    }

    /// Smallest nonzero `|value|` in the support.
    pub fn min_nonzero_abs(&self) -> Option<f64> {
        self.nonzero_atoms().map(|a| a.value.abs()).min_by(f64::total_cmp)
    }

    pub fn max_abs(&self) -> f64 {
        self.atoms.iter().map(|a| a.value.abs()).fold(0.0, f64::max)
    }
}

/// `E |sin(πT Z)/(πZ)| 1{Z ≠ 0}`.
pub fn sinc_expectation(wsd: &WeightedSumDistribution, t: f64) -> f64 {
    wsd.nonzero_atoms()
        .map(|a| wsd.probability_f64(a) * sinc_abs(t, a.value))
        .sum()
}

fn sinc_abs(t: f64, s: f64) -> f64 {
    ((PI * t * s).sin() / (PI * s)).abs()
}

/// `E[1/(π|Z|); Z ≠ 0]`, the first majorant of [`sinc_expectation`].
pub fn inverse_moment(wsd: &WeightedSumDistribution) -> f64 {
    wsd.nonzero_atoms()
        .map(|a| wsd.probability_f64(a) / (PI * a.value.abs()))
        .sum()
}

/// `P{|Z| < ε}`, exactly.
pub fn small_deviation(wsd: &WeightedSumDistribution, epsilon: f64) -> Result<BigRational, ReplayError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(ReplayError::Domain(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let eps = Fixed::from_f64(epsilon, wsd.precision);
    let total: BigUint = wsd
        .atoms
        .iter()
        .filter(|a| a.value_fixed.cmp_abs(&eps).is_lt())
        .map(|a| &a.numerator)
        .sum();
    Ok(BigRational::new(total.into(), wsd.denominator.clone().into()))
}

/// `Υ(t, β) = Π_ℓ φ_{S_k}(tλ_ℓ − β_ℓ)`, skipping `excluded` (giving `Υ_j`).
pub fn upsilon(dist: &SumDistribution, lambdas: &[f64], betas: &[f64], t: f64, excluded: Option<usize>) -> f64 {
    lambdas
        .iter()
        .zip(betas)
        .enumerate()
        .filter(|(i, _)| Some(*i) != excluded)
        .map(|(_, (&l, &b))| dist.char_fn(t * l - b))
        .product()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HTerm {
    pub excluded: Option<usize>,
    /// `∫_d^{d+T} Υ dt − T P{S_k = 0}^{N'}` from the exact antiderivative.
    pub h: f64,
    /// `Σ P(ν) |sin(πTs)/(πs)|` over tuples with `s = Σ λ_ℓ ν_ℓ ≠ 0`.
    pub sinc_majorant: f64,
    /// Mass of nonzero tuples with `s` classified as zero (0 under independence).
    pub resonant_mass: f64,
    pub t_p_zero_power: f64,
    /// `1/(πΞ)` with Ξ over coefficients up to `(m-1)k`; `None` when that range is empty.
    pub bound: Option<f64>,
    pub within_bound: bool,
    pub margin: Option<f64>,
}

fn sub_instance(instance: &LinearFormInstance, excluded: Option<usize>) -> Option<LinearFormInstance> {
    let keep: Vec<usize> = (0..instance.len()).filter(|&i| Some(i) != excluded).collect();
    (!keep.is_empty()).then(|| instance.permuted(&keep))
}

/// `1/(πΞ)` with Ξ over `max|u_ℓ| <= (m-1)k` for the full instance.
fn xi_bound(instance: &LinearFormInstance, radius: i64, cfg: &LatticeConfig) -> Result<Option<f64>, ReplayError> {
    if radius == 0 {
        return Ok(None);
    }
    match lattice::xi(instance, radius as u64, cfg) {
        Ok(r) => Ok(Some(1.0 / (PI * r.value))),
        Err(LatticeError::NoNonzeroCombination { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn h_exact(
    dist: &SumDistribution,
    instance: &LinearFormInstance,
    betas: &[f64],
    d: f64,
    t_len: f64,
    excluded: Option<usize>,
    cfg: &ReplayConfig,
) -> Result<(f64, f64, f64, f64), ReplayError> {
    let Some(sub) = sub_instance(instance, excluded) else {
        return Ok((0.0, 0.0, 0.0, t_len));
    };
    let sub_betas: Vec<f64> = (0..instance.len()).filter(|&i| Some(i) != excluded).map(|i| betas[i]).collect();
    let n = sub.len();
    let r = dist.radius();
    tuple_count(r, n, cfg.tuple_cap)?;
    let classifier = ZeroClassifier::for_instance(&sub, cfg.lattice.zero_policy)?;
    let probs: Vec<f64> = (-r..=r).map(|nu| dist.pmf_f64(nu)).collect();
    let p0 = dist.pmf_f64(0);
    let mut h = 0.0;
    let mut majorant = 0.0;
    let mut resonant = 0.0;
    for_each_tuple(r, n, |nu| {
        if nu.iter().all(|&v| v == 0) {
            return;
        }
        let p: f64 = nu.iter().map(|&v| probs[(v + r) as usize]).product();
        if p == 0.0 {
            return;
        }
        let s_raw: BigInt = sub.values().iter().zip(nu).map(|(v, &c)| v.raw() * c).sum();
        let phase: f64 = sub_betas.iter().zip(nu).map(|(&b, &c)| b * c as f64).sum();
        if classifier.is_zero(nu, &s_raw) {
            resonant += p;
            h += p * t_len * (2.0 * PI * phase).cos();
            return;
        }
        let s = Fixed::from_raw(s_raw, sub.precision()).to_f64();
        let a = 2.0 * PI * (d * s - phase);
        let b = 2.0 * PI * ((d + t_len) * s - phase);
        h += p * (b.sin() - a.sin()) / (2.0 * PI * s);
        majorant += p * sinc_abs(t_len, s);
    });
    Ok((h, majorant, resonant, t_len * p0.powi(n as i32)))
}

/// `H` (or `H_j` when `excluded = Some(j)`) with its bound `1/(πΞ)`.
#[allow(clippy::too_many_arguments)]
pub fn h_term(
    m: u32,
    k: u32,
    instance: &LinearFormInstance,
    betas: &[f64],
    d: f64,
    t_len: f64,
    excluded: Option<usize>,
    cfg: &ReplayConfig,
) -> Result<HTerm, ReplayError> {
    check_target(instance, betas, t_len)?;
    let dist = fejer::convolve(FejerLaw::new(m)?, k, &cfg.fejer)?;
    let bound = xi_bound(instance, dist.radius(), &cfg.lattice)?;
    h_term_with(&dist, instance, betas, d, t_len, excluded, bound, cfg)
}

#[allow(clippy::too_many_arguments)]
fn h_term_with(
    dist: &SumDistribution,
    instance: &LinearFormInstance,
    betas: &[f64],
    d: f64,
    t_len: f64,
    excluded: Option<usize>,
    bound: Option<f64>,
    cfg: &ReplayConfig,
) -> Result<HTerm, ReplayError> {
    let (h, sinc_majorant, resonant_mass, t_p_zero_power) = h_exact(dist, instance, betas, d, t_len, excluded, cfg)?;
    let margin = bound.map(|b| b - h.abs());
    let within_bound = match bound {
        Some(b) => h.abs() <= b,
        None => h.abs() == 0.0,
    };
    Ok(HTerm { excluded, h, sinc_majorant, resonant_mass, t_p_zero_power, bound, within_bound, margin })
}

fn check_target(instance: &LinearFormInstance, betas: &[f64], t_len: f64) -> Result<(), ReplayError> {
    if betas.len() != instance.len() {
        return Err(ReplayError::Domain(format!(
            "need {} betas, got {}",
            instance.len(),
            betas.len()
        )));
    }
    if !(t_len > 0.0 && t_len.is_finite()) {
        return Err(ReplayError::Domain(format!("T must be positive, got {t_len}")));
    }
    Ok(())
}

/// `∫_d^{d+T} Υ dt` by adaptive quadrature, with panels shorter than the
/// fastest oscillation of `Υ`.
pub fn upsilon_integral_quadrature(
    dist: &SumDistribution,
    lambdas: &[f64],
    betas: &[f64],
    d: f64,
    t_len: f64,
    excluded: Option<usize>,
    opts: QuadOptions,
) -> Result<f64, ReplayError> {
    let freq: f64 = lambdas.iter().map(|l| l.abs()).sum::<f64>() * dist.radius() as f64;
    let width = 0.25 / (1.0 + freq);
    let pts = quad::uniform_breakpoints(d, d + t_len, width);
    let r = quad::integrate_panels(|t| upsilon(dist, lambdas, betas, t, excluded), &pts, opts)?;
    Ok(r.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionCheck {
    pub excluded: Option<usize>,
    pub integral_quadrature: f64,
    pub t_p_zero_power_plus_h: f64,
    pub residual: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyInequalityReport {
    pub m: u32,
    pub k: u32,
    pub h: HTerm,
    pub h_j: Vec<HTerm>,
    pub decomposition: Vec<DecompositionCheck>,
    pub proof_step: Option<ProofStepCheck>,
    pub passes: bool,
}

pub const DECOMPOSITION_TOLERANCE: f64 = 1e-8;

/// Checks the unconditional pieces of the proof at `(m, k)`: the
/// decomposition `∫Υ = T P{S_k=0}^N + H` (and its `Υ_j` analogues) against
/// quadrature, `|H|, |H_j| <= 1/(πΞ)`, and, when `proof` is given, the
/// parameter inequality `(ω/2m)^{2k} N <= ½ P{S_k = 0}`.
#[allow(clippy::too_many_arguments)]
pub fn key_inequality_check(
    m: u32,
    k: u32,
    instance: &LinearFormInstance,
    betas: &[f64],
    d: f64,
    t_len: f64,
    proof: Option<&ProofParameters>,
    cfg: &ReplayConfig,
) -> Result<KeyInequalityReport, ReplayError> {
    check_target(instance, betas, t_len)?;
    let dist = fejer::convolve(FejerLaw::new(m)?, k, &cfg.fejer)?;
    let bound = xi_bound(instance, dist.radius(), &cfg.lattice)?;
    let lambdas = instance.values_f64();
    let n = instance.len();
    let h = h_term_with(&dist, instance, betas, d, t_len, None, bound, cfg)?;
    let h_j = if n > 1 {
        (0..n)
            .map(|j| h_term_with(&dist, instance, betas, d, t_len, Some(j), bound, cfg))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let mut decomposition = Vec::new();
    for term in std::iter::once(&h).chain(&h_j) {
        let integral = upsilon_integral_quadrature(&dist, &lambdas, betas, d, t_len, term.excluded, cfg.quad)?;
        let rhs = term.t_p_zero_power + term.h;
        let residual = (integral - rhs).abs();
        decomposition.push(DecompositionCheck {
            excluded: term.excluded,
            integral_quadrature: integral,
            t_p_zero_power_plus_h: rhs,
            residual,
            passes: residual < DECOMPOSITION_TOLERANCE,
        });
    }
    let proof_step = proof.map(|p| bounds::proof_step_check(p, &cfg.fejer)).transpose()?;
    let passes = h.within_bound
        && h_j.iter().all(|t| t.within_bound)
        && decomposition.iter().all(|c| c.passes)
        && proof_step.is_none_or(|c| c.holds);
    Ok(KeyInequalityReport { m, k, h, h_j, decomposition, proof_step, passes })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KOfR {
    pub r: f64,
    pub value: f64,
    /// Set when `r` is within `1e-6` of a pole (`r → 0⁺` or `r → 2⁻`).
    pub near_pole: bool,
}

/// `K(r) = Γ(2−r) sin((1−r)π/2) / (r(1−r))`, continuous through `r = 1`.
pub fn k_of_r(r: f64) -> Result<KOfR, ReplayError> {
    if !(r > 0.0 && r < 2.0) {
        return Err(ReplayError::Domain(format!("K(r) needs 0 < r < 2, got {r}")));
    }
    let x = (1.0 - r) * PI / 2.0;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    let value = libm::tgamma(2.0 - r) / r * (PI / 2.0) * sinc;
    let near_pole = r < 1e-6 || r > 2.0 - 1e-6 || !value.is_finite();
    Ok(KOfR { r, value, near_pole })
}

/// `∫_0^∞ sin²(xt/2) / t^{r+1} dt`, split at `t = 1` with an analytic tail.
fn half_line_sin2_integral(x: f64, r: f64, opts: QuadOptions) -> Result<f64, ReplayError> {
    let x = x.abs();
    if x == 0.0 {
        return Ok(0.0);
    }
    let f = |t: f64| {
        let s = (0.5 * x * t).sin();
        s * s / t.powf(r + 1.0)
    };
    // [0, 1] with t = s^p, p = 2/(2-r): the integrand becomes ~ s near 0.
    let p = 2.0 / (2.0 - r);
    let head_panels = quad::uniform_breakpoints(0.0, 1.0, (PI / x).min(0.25).powf(1.0 / p));
    let head = quad::integrate_panels(
        |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            let t = s.powf(p);
            f(t) * p * s.powf(p - 1.0)
        },
        &head_panels,
        opts,
    )?
    .value;
    // tail: ∫_L^∞ = L^{-r}/(2r) − ½ ∫_L^∞ cos(xt) t^{-a} dt with a = r + 1,
    // two integrations by parts, remainder <= a L^{-a-1} / (2x²)
    let a = r + 1.0;
    let target = 1e-13;
    let l_min = (a / (2.0 * x * x * target)).powf(1.0 / (a + 1.0));
    let period = 2.0 * PI / x;
    let l = 1.0 + (((l_min - 1.0).max(0.0)) / period).ceil() * period;
    let body = if l > 1.0 {
        let pts = quad::uniform_breakpoints(1.0, l, 0.5 * period);
        quad::integrate_panels(f, &pts, opts)?.value
    } else {
        0.0
    };
    let cos_tail = -(x * l).sin() * l.powf(-a) / x + a * (x * l).cos() * l.powf(-a - 1.0) / (x * x);
    let tail = l.powf(-r) / (2.0 * r) - 0.5 * cos_tail;
    Ok(head + body + tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsPowerIdentity {
    pub x: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

/// `|x|^r` against `(1/K(r)) ∫_ℝ sin²(xt/2)/|t|^{r+1} dt`.
pub fn absr_identity_check(x: f64, r: f64, opts: QuadOptions) -> Result<AbsPowerIdentity, ReplayError> {
    let k = k_of_r(r)?;
    if !x.is_finite() {
        return Err(ReplayError::Domain(format!("x must be finite, got {x}")));
    }
    let lhs = x.abs().powf(r);
    let rhs = 2.0 * half_line_sin2_integral(x, r, opts)? / k.value;
    let relative_error = if lhs == 0.0 { rhs.abs() } else { (rhs - lhs).abs() / lhs };
    Ok(AbsPowerIdentity { x, r, lhs, rhs, relative_error })
}

/// Symmetric density on `[-a, a]`, tabulated on `[0, a]` and linearly
/// interpolated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedDensity {
    pub name: String,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(name: impl Into<String>, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self, ReplayError> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(ReplayError::Domain("need at least two nodes with matching values".into()));
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ReplayError::Domain("nodes must start at 0 and increase".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(ReplayError::Domain("density values must be non-negative".into()));
        }
        Ok(Self { name: name.into(), nodes, values })
    }

    /// Uniform density on `[-1, 1]`.
    pub fn uniform() -> Self {
        Self::new("uniform", vec![0.0, 1.0], vec![0.5, 0.5]).expect("valid table")
    }

    /// Triangular density `1 - |t|` on `[-1, 1]`.
    pub fn triangular() -> Self {
        Self::new("triangular", vec![0.0, 1.0], vec![1.0, 0.0]).expect("valid table")
    }

    pub fn support(&self) -> f64 {
        *self.nodes.last().expect("non-empty")
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        if t > self.support() {
            return 0.0;
        }
        let i = self.nodes.partition_point(|&n| n <= t).clamp(1, self.nodes.len() - 1);
        let (t0, t1) = (self.nodes[i - 1], self.nodes[i]);
        let (g0, g1) = (self.values[i - 1], self.values[i]);
        g0 + (g1 - g0) * (t - t0) / (t1 - t0)
    }

    fn panels(&self, extra_period: Option<f64>) -> Vec<f64> {
        let mut pts = self.nodes.clone();
        if let Some(h) = extra_period {
            let mut z = h;
            while z < self.support() {
                pts.push(z);
                z += h;
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn total_mass(&self, opts: QuadOptions) -> Result<f64, ReplayError> {
        Ok(2.0 * quad::integrate_panels(|t| self.eval(t), &self.panels(None), opts)?.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchySchwarzCheck {
    pub density: String,
    pub x: f64,
    pub r: f64,
    /// `E |sin(xU)/U|`.
    pub lhs: f64,
    /// `√(K(r) |2x|^r) · (∫ |t|^{r-1} G² dt)^{1/2}`.
    pub rhs: f64,
    /// The same bound with `|2x|^r / (2K(r))` under the root, as often printed.
    pub rhs_printed: f64,
    pub holds: bool,
    pub printed_holds: bool,
}

/// Cauchy–Schwarz bound on `E|sin(xU)/U|` for `U` with density `G`.
pub fn cauchy_schwarz_bound_check(
    density: &TabulatedDensity,
    x: f64,
    r: f64,
    opts: QuadOptions,
) -> Result<CauchySchwarzCheck, ReplayError> {
    if !(r > 1.0 && r < 2.0) {
        return Err(ReplayError::Domain(format!("need 1 < r < 2, got {r}")));
    }
    let k = k_of_r(r)?.value;
    let lhs = if x == 0.0 {
        0.0
    } else {
        let pts = density.panels(Some(PI / x.abs()));
        let f = |t: f64| {
            if t == 0.0 {
                x.abs() * density.eval(0.0)
            } else {
                ((x * t).sin() / t).abs() * density.eval(t)
            }
        };
        2.0 * quad::integrate_panels(f, &pts, opts)?.value
    };
    let moment = 2.0
        * quad::integrate_panels(|t| t.powf(r - 1.0) * density.eval(t).powi(2), &density.panels(None), opts)?.value;
    let pow = (2.0 * x).abs().powf(r);
    let rhs = (k * pow).sqrt() * moment.sqrt();
    let rhs_printed = (pow / (2.0 * k)).sqrt() * moment.sqrt();
    let slack = 1e-12 * rhs.max(1.0);
    Ok(CauchySchwarzCheck {
        density: density.name.clone(),
        x,
        r,
        lhs,
        rhs,
        rhs_printed,
        holds: lhs <= rhs + slack,
        printed_holds: lhs <= rhs_printed + slack,
    })
}

/// `P{S_k = 0}` by exact convolution when the support fits, else quadrature.
pub fn p_zero_f64(m: u32, k: u32, cfg: &FejerConfig) -> Result<f64, ReplayError> {
    let method = if 2 * u64::from(m - 1) * u64::from(k) < cfg.support_cap {
        PZeroMethod::Exact
    } else {
        PZeroMethod::Quadrature
    };
    Ok(fejer::p_zero(m, k, method, cfg)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FrequencyKind;

    fn inst(values: &[f64]) -> LinearFormInstance {
        LinearFormInstance::from_f64(values, 128).unwrap()
    }

    fn golden() -> LinearFormInstance {
        let phi = Fixed::sqrt_int(5, 256).add(&Fixed::from_int(1, 256)).half();
        LinearFormInstance::from_values(vec![Fixed::from_int(1, 256), phi]).unwrap()
    }

    fn dist(m: u32, k: u32) -> SumDistribution {
        fejer::convolve(FejerLaw::new(m).unwrap(), k, &FejerConfig::default()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn upsilon_examples() {
        let d = dist(2, 1);
        assert_eq!(upsilon(&d, &[1.0, 2.0], &[0.0, 0.0], 3.0, None), 1.0);
        assert!((upsilon(&d, &[1.0], &[0.0], 0.25, None) - 0.5).abs() < 1e-15);
        assert_eq!(upsilon(&d, &[1.0], &[0.0], 0.3, Some(0)), 1.0);
    }

    #[test]
    fn h_examples() {
        let cfg = ReplayConfig::default();
        let h = h_term(1, 3, &inst(&[1.0]), &[0.0], 0.0, 1.0, None, &cfg).unwrap();
        assert_eq!(h.h, 0.0);
        let h = h_term(2, 1, &inst(&[1.0]), &[0.0], 0.0, 1.0, None, &cfg).unwrap();
        assert!(h.h.abs() < 1e-15);
        let h = h_term(2, 1, &inst(&[1.0]), &[0.0], 0.0, 0.5, None, &cfg).unwrap();
        let quad = upsilon_integral_quadrature(&dist(2, 1), &[1.0], &[0.0], 0.0, 0.5, None, cfg.quad).unwrap();
        assert!((quad - (0.25 + h.h)).abs() < 1e-12);
        assert!(h.h.abs() < 1e-15);
        assert!((h.sinc_majorant - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn key_check_golden() {
        let cfg = ReplayConfig::default();
        let r = key_inequality_check(2, 2, &golden(), &[0.0, 0.0], 0.0, 10.0, None, &cfg).unwrap();
        assert!(r.passes, "{r:#?}");
        assert_eq!(r.h_j.len(), 2);
    }

    #[test]
    fn key_check_degenerate() {
        let cfg = ReplayConfig::default();
        let r = key_inequality_check(1, 1, &inst(&[1.0]), &[0.3], 2.0, 5.0, None, &cfg).unwrap();
        assert!(r.passes);
        assert_eq!(r.h.h, 0.0);
        assert!((r.decomposition[0].integral_quadrature - 5.0).abs() < 1e-12);
    }

    #[test]
    fn key_check_with_proof_step() {
        let cfg = ReplayConfig::default();
        let p = ProofParameters::choose(5, 4, 0.2).unwrap();
        let c = bounds::proof_step_check(&p, &cfg.fejer).unwrap();
        assert!((c.lhs - 5.0 / 4096.0).abs() < 1e-15);
        assert!(c.holds);
    }

    #[test]
    fn sinc_examples() {
        let cfg = ReplayConfig::default();
        let w = WeightedSumDistribution::from_parameters(&inst(&[1.0]), 1, 4, &cfg).unwrap();
        assert_eq!(sinc_expectation(&w, 0.5), 0.0);
        let w = WeightedSumDistribution::from_parameters(&inst(&[1.0]), 2, 1, &cfg).unwrap();
        assert!(sinc_expectation(&w, 1.0).abs() < 1e-16);
        assert!((sinc_expectation(&w, 0.5) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn small_deviation_examples() {
        let cfg = ReplayConfig::default();
        let w = WeightedSumDistribution::from_parameters(&inst(&[1.0]), 2, 1, &cfg).unwrap();
        assert_eq!(small_deviation(&w, 0.5).unwrap(), rat(1, 2));
        assert_eq!(small_deviation(&w, 1.5).unwrap(), rat(1, 1));
        let w = WeightedSumDistribution::from_parameters(&golden(), 2, 1, &cfg).unwrap();
        assert_eq!(small_deviation(&w, 0.4).unwrap(), rat(1, 4));
        assert_eq!(w.total_mass(), rat(1, 1));
        assert_eq!(w.tuples(), 9);
    }

    #[test]
    fn dependent_values_merge() {
        let cfg = ReplayConfig::default();
        let w = WeightedSumDistribution::from_parameters(&inst(&[1.0, 2.0]), 2, 1, &cfg).unwrap();
        assert_eq!(w.atoms().len(), 7);
        assert_eq!(w.total_mass(), rat(1, 1));
        assert_eq!(small_deviation(&w, 0.5).unwrap(), rat(1, 4));
    }

    #[test]
    fn exact_log_values() {
        let cfg = ReplayConfig::default();
        let i = LinearFormInstance::from_specs(&[FrequencyKind::Log(2), FrequencyKind::Log(4)], 128).unwrap();
        let w = WeightedSumDistribution::from_parameters(&i, 2, 1, &cfg).unwrap();
        assert_eq!(w.total_mass(), rat(1, 1));
        assert!(w.atoms().len() < 9);
    }

    #[test]
    fn tuple_cap() {
        let cfg = ReplayConfig { tuple_cap: 10, ..Default::default() };
        let err = WeightedSumDistribution::from_parameters(&golden(), 2, 2, &cfg).unwrap_err();
        assert_eq!(err, ReplayError::TupleCap { needed: 25, cap: 10 });
    }

    #[test]
    fn k_values() {
        assert!((k_of_r(0.5).unwrap().value - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((k_of_r(1.0).unwrap().value - PI / 2.0).abs() < 1e-15);
        assert!((k_of_r(1.0 + 1e-9).unwrap().value - PI / 2.0).abs() < 1e-8);
        assert!((k_of_r(1.5).unwrap().value - 1.671_085_52).abs() < 1e-8);
        assert!(k_of_r(1e-9).unwrap().near_pole);
        assert!(k_of_r(2.0 - 1e-9).unwrap().near_pole);
        assert!(k_of_r(0.0).is_err());
        assert!(k_of_r(2.0).is_err());
    }

    #[test]
    fn abs_power_identity() {
        let opts = ReplayConfig::default().quad;
        for (x, r) in [(1.0, 0.5), (2.0, 1.0), (3.0, 1.5), (-2.5, 0.8)] {
            let c = absr_identity_check(x, r, opts).unwrap();
            assert!(c.relative_error < 1e-7, "{c:?}");
        }
        let c = absr_identity_check(0.0, 1.2, opts).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    }

    #[test]
    fn densities() {
        let opts = ReplayConfig::default().quad;
        for d in [TabulatedDensity::uniform(), TabulatedDensity::triangular()] {
            assert!((d.total_mass(opts).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(TabulatedDensity::triangular().eval(0.25), 0.75);
        assert_eq!(TabulatedDensity::uniform().eval(1.5), 0.0);
    }

    #[test]
    fn cauchy_schwarz() {
        let opts = ReplayConfig::default().quad;
        let c = cauchy_schwarz_bound_check(&TabulatedDensity::uniform(), PI, 1.5, opts).unwrap();
        assert!(c.holds, "{c:?}");
        assert!((c.lhs - 1.851_937).abs() < 1e-5, "{c:?}");
        let c = cauchy_schwarz_bound_check(&TabulatedDensity::triangular(), 2.0 * PI, 1.25, opts).unwrap();
        assert!(c.holds, "{c:?}");
        let c = cauchy_schwarz_bound_check(&TabulatedDensity::uniform(), 0.0, 1.5, opts).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    }
}
