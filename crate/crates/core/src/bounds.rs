//! Proof parameters and the localization / accuracy bounds of Theorem 1 and
//! the classical results it is compared against (Bacon, Chen, Dirichlet,
//! Turán), plus the log-prime lower bound for Ξ.
//!
//! Bounds routinely overflow `f64` (Turán's bound is `e^{3605}` already at
//! `N = 10`), so every bound is a [`Magnitude`]: a natural logarithm with a
//! linear mirror when it is representable.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::fejer::{self, FejerConfig, FejerError, PZeroMethod};
use crate::lattice::{self, LatticeConfig, LatticeError, LinearFormInstance, XiResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fejer(#[from] FejerError),
}

/// A positive quantity stored as `ln x`, with `x` itself when it fits in `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Magnitude {
    pub ln: f64,
    pub linear: Option<f64>,
}

impl Magnitude {
    pub fn from_ln(ln: f64) -> Self {
        let v = ln.exp();
        let linear = (v.is_finite() && (v > 0.0 || ln == f64::NEG_INFINITY)).then_some(v);
        Self { ln, linear }
    }

    pub fn from_linear(x: f64) -> Self {
        Self::from_ln(x.ln())
    }

    /// Linear value, saturating to `inf` / `0` outside the `f64` range.
    pub fn value(&self) -> f64 {
        self.linear.unwrap_or(self.ln.exp())
    }
}

/// `m` and `k` as chosen in the proof for given `N`, `ω`, `C0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofParameters {
    pub n: usize,
    pub omega: u64,
    pub c0: f64,
    pub m: u32,
    pub k: u32,
}

fn check_c0(c0: f64) -> Result<(), BoundsError> {
    if c0 > 0.0 && c0 < 0.25 {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("C0 must lie in (0, 1/4), got {c0}")))
    }
}

impl ProofParameters {
    /// `m = 2ω` and `k` the least `j >= 1` with `Nω/C0 <= 4^{2j-1}/√j`.
    pub fn choose(n: usize, omega: u64, c0: f64) -> Result<Self, BoundsError> {
        if n == 0 || omega == 0 {
            return Err(BoundsError::Domain("N and omega must be >= 1".into()));
        }
        check_c0(c0)?;
        let m = u32::try_from(2 * omega).map_err(|_| BoundsError::Domain(format!("omega {omega} too large")))?;
        let ln_x = Self::ln_x_of(n, omega, c0);
        let mut j: u32 = 1;
        while ln_x > f64::from(2 * j - 1) * 4f64.ln() - 0.5 * f64::from(j).ln() {
            j += 1;
        }
        Ok(Self { n, omega, c0, m, k: j })
    }

    fn ln_x_of(n: usize, omega: u64, c0: f64) -> f64 {
        (n as f64).ln() + (omega as f64).ln() - c0.ln()
    }

    /// `ln(Nω/C0)`.
    pub fn ln_x(&self) -> f64 {
        Self::ln_x_of(self.n, self.omega, self.c0)
    }

    /// Both sides of the defining inequality for `k` and of its predecessor,
    /// and the cap `k <= 3 ln(Nω/C0)`.
    pub fn satisfies_definition(&self) -> bool {
        let side = |j: u32| f64::from(2 * j - 1) * 4f64.ln() - 0.5 * f64::from(j).ln();
        let ln_x = self.ln_x();
        let minimal = self.k == 1 || ln_x > side(self.k - 1);
        ln_x <= side(self.k) && minimal && self.k >= 2 && f64::from(self.k) <= 3.0 * ln_x
    }

    /// The tuple-coefficient range `(m - 1) k` reached by the proof's sums.
    pub fn proof_coefficient_range(&self) -> u64 {
        u64::from(self.m - 1) * u64::from(self.k)
    }
}

/// `T = (3/(πΞ)) (2√3 ω √(ln(Nω/C0)) / C0)^N`.
pub fn theorem1_bound(params: &ProofParameters, xi: f64) -> Result<Magnitude, BoundsError> {
    positive_xi(xi)?;
    let base = (2.0 * 3f64.sqrt() * params.omega as f64 * params.ln_x().sqrt() / params.c0).ln();
    Ok(Magnitude::from_ln((3.0 / PI).ln() - xi.ln() + params.n as f64 * base))
}

/// `(4ω √(ln(Nω/C0)) / C0)^N / Ξ`, the form quoted in the abstract.
pub fn abstract_bound(params: &ProofParameters, xi: f64) -> Result<Magnitude, BoundsError> {
    positive_xi(xi)?;
    let base = (4.0 * params.omega as f64 * params.ln_x().sqrt() / params.c0).ln();
    Ok(Magnitude::from_ln(params.n as f64 * base - xi.ln()))
}

fn positive_xi(xi: f64) -> Result<(), BoundsError> {
    if xi > 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("Xi must be positive and finite, got {xi}")))
    }
}

/// `c(N)/M` with `c(N) = ½ (N-1)^{3/2} (125/48)^{(N³-N)/12}`.
///
/// Bacon's hypothesis bounds `|u_1| + … + |u_N| <= M` (an ℓ¹ box), unlike the
/// ℓ^∞ box of Theorem 1.
pub fn bacon_bound(n: usize, m: u64) -> Result<Magnitude, BoundsError> {
    if n < 2 || m == 0 {
        return Err(BoundsError::Domain("Bacon's bound needs N >= 2 and M >= 1".into()));
    }
    let nf = n as f64;
    let ln_c = 0.5f64.ln() + 1.5 * (nf - 1.0).ln() + (nf * nf * nf - nf) / 12.0 * (125.0f64 / 48.0).ln();
    Ok(Magnitude::from_ln(ln_c - (m as f64).ln()))
}

/// `(π²/16) N / (M+1)²`, a bound on the sum (not the sup) of discrepancies.
pub fn chen_accuracy(n: usize, m: u64) -> Result<f64, BoundsError> {
    if n == 0 || m == 0 {
        return Err(BoundsError::Domain("Chen's accuracy needs N, M >= 1".into()));
    }
    let mp1 = m as f64 + 1.0;
    Ok(PI * PI / 16.0 * n as f64 / (mp1 * mp1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChenLocalization {
    pub epsilon: f64,
    pub m0: u64,
    pub lambda: XiResult,
    pub t0: Magnitude,
}

/// `M0 = floor(√(Nπ²/(8ε)))`, `Λ` the lattice minimum at `M0`, and
/// `T0 = N M0^N / (2πΛ)`.
pub fn chen_localization(
    instance: &LinearFormInstance,
    epsilon: f64,
    cfg: &LatticeConfig,
) -> Result<ChenLocalization, BoundsError> {
    if !(epsilon > 0.0) {
        return Err(BoundsError::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = instance.len();
    let m0 = (n as f64 * PI * PI / (8.0 * epsilon)).sqrt().floor() as u64;
    let lambda = lattice::chen_lambda(instance, m0, cfg)?;
    let ln_t0 = (n as f64).ln() + n as f64 * (m0 as f64).ln() - (2.0 * PI).ln() - lambda.value.ln();
    Ok(ChenLocalization {
        epsilon,
        m0,
        lambda,
        t0: Magnitude::from_ln(ln_t0),
    })
}

/// `ω^N`, the interval length from Dirichlet's theorem.
pub fn dirichlet_bound(n: usize, omega: u64) -> Magnitude {
    Magnitude::from_ln(n as f64 * (omega as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuranBound {
    pub value: Magnitude,
    /// Turán's range `4 <= ω <= N`; his "N large enough" is not quantified.
    pub in_range: bool,
}

/// `e^{17 ω N (ln N)²}`.
pub fn turan_bound(n: usize, omega: u64) -> TuranBound {
    let ln_n = (n.max(1) as f64).ln();
    TuranBound {
        value: Magnitude::from_ln(17.0 * omega as f64 * n as f64 * ln_n * ln_n),
        in_range: omega >= 4 && omega <= n as u64,
    }
}

/// `exp(-(1+ε) ω N ln(Nω/C0) ln N)`; asserted only for `N >= N(ε)`.
pub fn xi_logprime_lower_bound(n: usize, omega: u64, c0: f64, epsilon: f64) -> Result<Magnitude, BoundsError> {
    if n == 0 || omega == 0 {
        return Err(BoundsError::Domain("N and omega must be >= 1".into()));
    }
    check_c0(c0)?;
    if !(epsilon > 0.0) {
        return Err(BoundsError::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let nf = n as f64;
    let ln_x = (nf * omega as f64 / c0).ln();
    Ok(Magnitude::from_ln(-(1.0 + epsilon) * omega as f64 * nf * ln_x * nf.ln()))
}

/// The numeric step `(ω/(2m))^{2k} N <= ½ P{S_k = 0}` of the proof.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofStepCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn proof_step_check(params: &ProofParameters, cfg: &FejerConfig) -> Result<ProofStepCheck, BoundsError> {
    let method = if 2 * params.proof_coefficient_range() + 1 <= cfg.support_cap {
        PZeroMethod::Exact
    } else {
        PZeroMethod::Quadrature
    };
    let p0 = fejer::p_zero(params.m, params.k, method, cfg)?.to_f64();
    let ratio = params.omega as f64 / (2.0 * f64::from(params.m));
    let lhs = (2.0 * f64::from(params.k) * ratio.ln() + (params.n as f64).ln()).exp();
    let rhs = 0.5 * p0;
    Ok(ProofStepCheck { lhs, rhs, holds: lhs <= rhs })
}

#[derive(Debug, Clone, Copy)]
pub struct CompareOptions {
    /// ε of the log-prime lower bound for Ξ.
    pub epsilon: f64,
    /// ε of Chen's localization; defaults to `1/ω`.
    pub chen_epsilon: Option<f64>,
    /// `M` at which Bacon's and Chen's accuracies are quoted; defaults to `U`.
    pub comparison_m: Option<u64>,
    /// Coefficient range at which Ξ is taken.
    pub convention: CoefficientConvention,
    pub lattice: LatticeConfig,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            chen_epsilon: None,
            comparison_m: None,
            convention: CoefficientConvention::Theorem,
            lattice: LatticeConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientConvention {
    /// `floor(6 ω ln(Nω/C0))`
    Theorem,
    /// `(m - 1) k`
    Proof,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub parameters: ProofParameters,
    pub coefficient_bound: u64,
    pub coefficient_convention: CoefficientConvention,
    pub xi: XiResult,
    pub t_theorem1: Magnitude,
    pub t_abstract: Magnitude,
    pub comparison_m: u64,
    pub bacon_accuracy: Option<Magnitude>,
    pub chen_accuracy: f64,
    pub chen: ChenLocalization,
    pub dirichlet_t: Magnitude,
    pub turan: TuranBound,
    pub xi_logprime_lower: Magnitude,
    pub xi_above_logprime_lower: bool,
    pub notes: Vec<String>,
}

/// Every bound for one instance, with Ξ computed at the theorem's `U`
/// (or at `(m-1)k` under the proof convention).
pub fn compare_bounds(
    instance: &LinearFormInstance,
    omega: u64,
    c0: f64,
    opts: &CompareOptions,
) -> Result<BoundReport, BoundsError> {
    let n = instance.len();
    let parameters = ProofParameters::choose(n, omega, c0)?;
    let u = match opts.convention {
        CoefficientConvention::Theorem => lattice::coefficient_bound(n, omega, c0)?,
        CoefficientConvention::Proof => parameters.proof_coefficient_range(),
    };
    let xi = lattice::xi(instance, u, &opts.lattice)?;
    let t_theorem1 = theorem1_bound(&parameters, xi.value)?;
    let t_abstract = abstract_bound(&parameters, xi.value)?;
    let comparison_m = opts.comparison_m.unwrap_or(u);
    let mut notes = Vec::new();
    let bacon_accuracy = if n >= 2 {
        Some(bacon_bound(n, comparison_m)?)
    } else {
        notes.push("Bacon's bound needs N >= 2".to_string());
        None
    };
    notes.push("Bacon's hypothesis is an l1 coefficient bound; Theorem 1 uses l-infinity".to_string());
    notes.push("Chen's accuracy and T0 bound the sum of discrepancies, not the sup".to_string());
    let chen_accuracy = chen_accuracy(n, comparison_m)?;
    let chen = chen_localization(instance, opts.chen_epsilon.unwrap_or(1.0 / omega as f64), &opts.lattice)?;
    let turan = turan_bound(n, omega);
    if !turan.in_range {
        notes.push(format!("Turan's bound is stated for 4 <= omega <= N; here omega = {omega}, N = {n}"));
    }
    let xi_logprime_lower = xi_logprime_lower_bound(n, omega, c0, opts.epsilon)?;
    let xi_above_logprime_lower = xi.value.ln() >= xi_logprime_lower.ln;
    if instance.log_payloads().is_none() {
        notes.push("log-prime lower bound for Xi only applies to logarithms of primes".to_string());
    }
    if !xi_above_logprime_lower {
        notes.push("Xi is below the log-prime lower bound (which is only asserted for N >= N(eps))".to_string());
    }
    Ok(BoundReport {
        parameters,
        coefficient_bound: u,
        coefficient_convention: opts.convention,
        xi,
        t_theorem1,
        t_abstract,
        comparison_m,
        bacon_accuracy,
        chen_accuracy,
        chen,
        dirichlet_t: dirichlet_bound(n, omega),
        turan,
        xi_logprime_lower,
        xi_above_logprime_lower,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FrequencyKind, Fixed};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn golden() -> LinearFormInstance {
        let phi = Fixed::sqrt_int(5, 256).add(&Fixed::from_int(1, 256)).half();
        LinearFormInstance::from_values(vec![Fixed::from_int(1, 256), phi]).unwrap()
    }

    #[test]
    fn parameter_examples() {
        let p = ProofParameters::choose(5, 4, 0.2).unwrap();
        assert_eq!((p.m, p.k), (8, 3));
        let p = ProofParameters::choose(1, 1, 0.2).unwrap();
        assert_eq!((p.m, p.k), (2, 2));
        assert!(ProofParameters::choose(1, 1, 0.25).is_err());
    }

    #[test]
    fn parameters_satisfy_definition_on_grid() {
        for n in 1..=100 {
            for omega in 1..=100 {
                let p = ProofParameters::choose(n, omega, 0.2).unwrap();
                assert!(p.satisfies_definition(), "{p:?}");
            }
        }
    }

    #[test]
    fn theorem1_examples() {
        let p = ProofParameters::choose(2, 4, 0.2).unwrap();
        let t = theorem1_bound(&p, 0.236_068).unwrap();
        assert!(close(t.value(), 71_625.88, 1e-5), "{t:?}");
        let p = ProofParameters::choose(1, 1, 0.2).unwrap();
        assert!(close(theorem1_bound(&p, 1.0).unwrap().value(), 20.983, 1e-4));
        let a = theorem1_bound(&p, 0.3).unwrap().value();
        let b = theorem1_bound(&p, 0.03).unwrap().value();
        assert!(close(b / a, 10.0, 1e-12));
    }

    #[test]
    fn abstract_values() {
        let p = ProofParameters::choose(1, 1, 0.2).unwrap();
        let v = abstract_bound(&p, 1.0).unwrap().value();
        assert!(close(v, 20.0 * 5f64.ln().sqrt(), 1e-12));
        assert!(close(v, 25.372_72, 1e-5));
        let p = ProofParameters::choose(2, 4, 0.2).unwrap();
        assert!(close(abstract_bound(&p, 0.236_068).unwrap().value(), 100_008.6, 1e-5));
    }

    #[test]
    fn classical_bounds() {
        assert!(close(bacon_bound(2, 1).unwrap().value(), 0.806_872, 1e-5));
        assert!(close(bacon_bound(2, 10).unwrap().value(), 0.080_687_2, 1e-5));
        assert!(close(bacon_bound(3, 1).unwrap().value(), 9.590_7, 1e-4));
        assert!(close(chen_accuracy(1, 1).unwrap(), PI * PI / 64.0, 1e-15));
        assert!(close(chen_accuracy(16, 3).unwrap(), PI * PI / 16.0, 1e-15));
        assert_eq!(dirichlet_bound(3, 10).value().round(), 1000.0);
        assert_eq!(dirichlet_bound(10, 4).value().round(), 1_048_576.0);
        assert_eq!(dirichlet_bound(1, 1).value(), 1.0);
    }

    #[test]
    fn turan_examples() {
        let t = turan_bound(10, 4);
        assert!(close(t.value.ln, 3605.2907, 1e-7));
        assert!(t.value.linear.is_none());
        assert!(t.in_range);
        assert!(!turan_bound(3, 4).in_range);
        let t = turan_bound(1, 7);
        assert_eq!(t.value.ln, 0.0);
        assert!(!t.in_range);
    }

    #[test]
    fn logprime_examples() {
        assert_eq!(xi_logprime_lower_bound(1, 3, 0.2, 0.1).unwrap().value(), 1.0);
        let v = xi_logprime_lower_bound(3, 1, 0.2, 0.1).unwrap();
        assert!(close(v.ln, -1.1 * 3.0 * 15f64.ln() * 3f64.ln(), 1e-12));
        assert!(close(v.value(), 5.447e-5, 1e-3));
    }

    #[test]
    fn chen_examples() {
        let cfg = LatticeConfig::default();
        let c = chen_localization(&golden(), 0.5, &cfg).unwrap();
        assert_eq!(c.m0, 2);
        assert!(close(c.lambda.value, 2.0 - 1.618_033_988_749_895, 1e-12));
        assert!(close(c.t0.value(), 3.333_384, 1e-5));
        let one = LinearFormInstance::from_specs(&[FrequencyKind::Log(2)], 128).unwrap();
        assert_eq!(chen_localization(&one, PI * PI / 8.0, &cfg).unwrap().m0, 1);
    }

    #[test]
    fn proof_step_holds_on_grid() {
        let cfg = FejerConfig::default();
        for n in 1..=20 {
            for omega in 1..=20 {
                let p = ProofParameters::choose(n, omega, 0.2).unwrap();
                let c = proof_step_check(&p, &cfg).unwrap();
                assert!(c.holds, "{p:?} {c:?}");
            }
        }
    }

    #[test]
    fn compare_report_logs() {
        let inst = LinearFormInstance::from_specs(&[FrequencyKind::Log(2), FrequencyKind::Log(3)], 256).unwrap();
        let r = compare_bounds(&inst, 4, 0.2, &CompareOptions::default()).unwrap();
        assert_eq!(r.coefficient_bound, 88);
        assert!(close(r.xi.value, 0.002_088_132_4, 1e-6));
        assert!(r.t_theorem1.value() <= r.t_abstract.value());
        assert!(r.notes.iter().any(|n| n.contains("Turan")));
    }

    #[test]
    fn single_frequency_report() {
        let inst = LinearFormInstance::from_specs(&[FrequencyKind::Sqrt(2)], 256).unwrap();
        let r = compare_bounds(&inst, 1, 0.2, &CompareOptions::default()).unwrap();
        assert!(r.bacon_accuracy.is_none());
        assert_eq!(r.coefficient_bound, 9);
        assert!(close(r.xi.value, 2f64.sqrt(), 1e-12));
    }
}
