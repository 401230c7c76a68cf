//! Minima of integer linear forms `|Σ u_j λ_j|` over bounded coefficient
//! boxes, and detection of vanishing combinations.

mod enumerate;
pub mod precise;
pub mod spec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use enumerate::Enumerator;
pub use precise::Fixed;
pub use spec::{parse_frequency_file, FrequencyKind, FrequencySpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid frequency: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("every combination with max |u_j| <= {bound} is classified as zero")]
    NoNonzeroCombination { bound: u64 },
    #[error("enumeration visited more than {cap} nodes")]
    EnumerationCapExceeded { cap: u64 },
    #[error("exact-multiplicative zero test needs every frequency to be `log <int>`")]
    PolicyNotApplicable,
}

/// How a combination is decided to be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroPolicy {
    /// `|Σ u_j λ_j| < 2^{-precision/2}`.
    Threshold,
    /// For `λ_j = ln p_j`: `Π p_j^{u_j} = 1` as an integer identity.
    ExactMultiplicative,
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeConfig {
    pub enumeration_cap: u64,
    /// `None` picks exact-multiplicative when every frequency is a logarithm.
    pub zero_policy: Option<ZeroPolicy>,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            enumeration_cap: 1_000_000_000,
            zero_policy: None,
        }
    }
}

/// The frequencies `λ_1..λ_N`, evaluated at a common binary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormInstance {
    precision: u32,
    specs: Option<Vec<FrequencySpec>>,
    values: Vec<Fixed>,
}

impl LinearFormInstance {
    pub fn from_specs(kinds: &[FrequencyKind], precision: u32) -> Result<Self, LatticeError> {
        let specs = kinds
            .iter()
            .map(|k| FrequencySpec::new(k.clone(), precision))
            .collect::<Result<Vec<_>, _>>()?;
        let values = specs.iter().map(FrequencySpec::evaluate).collect();
        Ok(Self {
            precision,
            specs: Some(specs),
            values,
        })
    }

    /// Instance from already evaluated reals (all at the same precision).
    pub fn from_values(values: Vec<Fixed>) -> Result<Self, LatticeError> {
        let Some(first) = values.first() else {
            return Err(LatticeError::Domain("no frequencies".into()));
        };
        let precision = first.bits();
        if values.iter().any(|v| v.bits() != precision) {
            return Err(LatticeError::Domain("mixed precisions".into()));
        }
        Ok(Self {
            precision,
            specs: None,
            values,
        })
    }

    pub fn from_f64(values: &[f64], precision: u32) -> Result<Self, LatticeError> {
        Self::from_values(values.iter().map(|&v| Fixed::from_f64(v, precision)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn specs(&self) -> Option<&[FrequencySpec]> {
        self.specs.as_deref()
    }

    pub fn values(&self) -> &[Fixed] {
        &self.values
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(Fixed::to_f64).collect()
    }

    /// Integer payloads when every frequency is `log <int>`.
    pub fn log_payloads(&self) -> Option<Vec<u64>> {
        self.specs
            .as_ref()?
            .iter()
            .map(|s| match s.kind {
                FrequencyKind::Log(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            precision: self.precision,
            specs: None,
            values: self.values.iter().map(Fixed::neg).collect(),
        }
    }

    /// `result[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            precision: self.precision,
            specs: self
                .specs
                .as_ref()
                .map(|s| perm.iter().map(|&i| s[i].clone()).collect()),
            values: perm.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    /// `Σ u_j λ_j`, exact in the fixed-point representation.
    pub fn combination(&self, u: &[i64]) -> Fixed {
        assert_eq!(u.len(), self.values.len());
        let raw = self
            .values
            .iter()
            .zip(u)
            .fold(BigInt::default(), |acc, (v, &c)| acc + v.raw() * c);
        Fixed::from_raw(raw, self.precision)
    }

    pub fn default_policy(&self) -> ZeroPolicy {
        if self.log_payloads().is_some() {
            ZeroPolicy::ExactMultiplicative
        } else {
            ZeroPolicy::Threshold
        }
    }

    fn resolve_policy(&self, requested: Option<ZeroPolicy>) -> Result<ZeroPolicy, LatticeError> {
        match requested {
            None => Ok(self.default_policy()),
            Some(ZeroPolicy::ExactMultiplicative) if self.log_payloads().is_none() => {
                Err(LatticeError::PolicyNotApplicable)
            }
            Some(p) => Ok(p),
        }
    }
}

/// Zero test for one combination under a fixed policy.
pub(crate) struct ZeroClassifier {
    policy: ZeroPolicy,
    threshold: BigInt,
    payloads: Option<Vec<u64>>,
}

impl ZeroClassifier {
    pub(crate) fn new(instance: &LinearFormInstance, policy: ZeroPolicy) -> Self {
        Self {
            policy,
            threshold: Fixed::half_precision_threshold(instance.precision()).raw().clone(),
            payloads: instance.log_payloads(),
        }
    }

    pub(crate) fn for_instance(
        instance: &LinearFormInstance,
        requested: Option<ZeroPolicy>,
    ) -> Result<Self, LatticeError> {
        Ok(Self::new(instance, instance.resolve_policy(requested)?))
    }

    pub(crate) fn policy(&self) -> ZeroPolicy {
        self.policy
    }

    pub(crate) fn threshold(&self) -> &BigInt {
        &self.threshold
    }

    /// `value_raw` is the fixed-point raw value of `Σ u_j λ_j`.
    pub(crate) fn is_zero(&self, u: &[i64], value_raw: &BigInt) -> bool {
        if value_raw.abs() >= self.threshold {
            return false;
        }
        match self.policy {
            ZeroPolicy::Threshold => true,
            ZeroPolicy::ExactMultiplicative => {
                let payloads = self.payloads.as_ref().expect("policy checked against instance");
                multiplicative_relation_holds(payloads, u)
            }
        }
    }
}

/// `Π p_j^{u_j} == 1`, i.e. `Π_{u_j > 0} p_j^{u_j} == Π_{u_j < 0} p_j^{-u_j}`.
pub fn multiplicative_relation_holds(payloads: &[u64], u: &[i64]) -> bool {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (&p, &c) in payloads.iter().zip(u) {
        let pw = BigUint::from(p).pow(c.unsigned_abs() as u32);
        if c > 0 {
            num *= pw;
        } else if c < 0 {
            den *= pw;
        }
    }
    num == den
}

/// Flips the sign so the first nonzero coefficient is positive.
pub fn canonical_sign(mut u: Vec<i64>) -> Vec<i64> {
    if u.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        u.iter_mut().for_each(|c| *c = -*c);
    }
    u
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiResult {
    /// `|Σ u_j λ_j|` at the witness, as a decimal string at full precision.
    pub value_decimal: String,
    pub value: f64,
    pub witness: Vec<i64>,
    pub bound: u64,
    pub zero_policy: ZeroPolicy,
    pub nodes_visited: u64,
    #[serde(skip)]
    pub value_fixed: Fixed,
}

/// `floor(6 ω ln(Nω/C0))`.
pub fn coefficient_bound(n: usize, omega: u64, c0: f64) -> Result<u64, LatticeError> {
    if n == 0 || omega == 0 {
        return Err(LatticeError::Domain("N and omega must be >= 1".into()));
    }
    if !(c0 > 0.0 && c0 < 0.25) {
        return Err(LatticeError::Domain(format!("C0 must lie in (0, 1/4), got {c0}")));
    }
    let x = n as f64 * omega as f64 / c0;
    if x <= 1.0 {
        return Err(LatticeError::Domain(format!("N*omega/C0 = {x} must exceed 1")));
    }
    Ok((6.0 * omega as f64 * x.ln()).floor() as u64)
}

/// Smallest nonzero `|Σ u_j λ_j|` over `0 < max |u_j| <= bound`.
///
/// Ties are broken by the lexicographically smallest sign-normalized witness.
pub fn xi(instance: &LinearFormInstance, bound: u64, cfg: &LatticeConfig) -> Result<XiResult, LatticeError> {
    let classifier = ZeroClassifier::for_instance(instance, cfg.zero_policy)?;
    if bound == 0 {
        return Err(LatticeError::NoNonzeroCombination { bound });
    }
    let mut en = Enumerator::new(instance, bound, cfg.enumeration_cap);
    let mut best: Option<BigInt> = None;
    let mut witnesses: Vec<Vec<i64>> = Vec::new();
    en.run(None, &mut |u, s| {
        if classifier.is_zero(u, s) {
            return None;
        }
        let a = s.abs();
        match &best {
            Some(b) if a > *b => {}
            Some(b) if a == *b => witnesses.push(canonical_sign(u.to_vec())),
            _ => {
                witnesses.clear();
                witnesses.push(canonical_sign(u.to_vec()));
                best = Some(a.clone());
            }
        }
        best.clone()
    })?;
    let Some(best) = best else {
        return Err(LatticeError::NoNonzeroCombination { bound });
    };
    let witness = witnesses.into_iter().min().expect("at least one witness");
    let value_fixed = Fixed::from_raw(best, instance.precision());
    Ok(XiResult {
        value_decimal: format!("{:.30}", value_fixed),
        value: value_fixed.to_f64(),
        witness,
        bound,
        zero_policy: classifier.policy(),
        nodes_visited: en.visited(),
        value_fixed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "witness", rename_all = "kebab-case")]
pub enum Independence {
    Independent,
    Violated(Vec<i64>),
}

/// Looks for a nonzero `u` with `max |u_j| <= bound` and `Σ u_j λ_j = 0`.
pub fn independence_check(
    instance: &LinearFormInstance,
    bound: u64,
    cfg: &LatticeConfig,
) -> Result<Independence, LatticeError> {
    let classifier = ZeroClassifier::for_instance(instance, cfg.zero_policy)?;
    if bound == 0 {
        return Ok(Independence::Independent);
    }
    let mut en = Enumerator::new(instance, bound, cfg.enumeration_cap);
    let limit = classifier.threshold() - BigInt::one();
    let mut zeros: Vec<Vec<i64>> = Vec::new();
    en.run(Some(limit.clone()), &mut |u, s| {
        if classifier.is_zero(u, s) {
            zeros.push(canonical_sign(u.to_vec()));
        }
        Some(limit.clone())
    })?;
    Ok(match zeros.into_iter().min() {
        Some(w) => Independence::Violated(w),
        None => Independence::Independent,
    })
}

/// `Λ`: same minimum as [`xi`] with coefficient bound `M0`.
pub fn chen_lambda(instance: &LinearFormInstance, m0: u64, cfg: &LatticeConfig) -> Result<XiResult, LatticeError> {
    xi(instance, m0, cfg)
}
