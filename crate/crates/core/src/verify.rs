//! Numerical check suites for the Fejér law and the proof replay, each
//! reported as pass/fail with a margin (positive = room to spare).

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundsError, ProofParameters};
use crate::fejer::{self, FejerConfig, FejerError, FejerLaw, PZeroMethod, DEFAULT_C0};
use crate::lattice::{self, FrequencyKind, LatticeError, LinearFormInstance};
use crate::replay::{self, ReplayConfig, ReplayError, TabulatedDensity, WeightedSumDistribution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Fejer(#[from] FejerError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Smallest slack over all evaluated points.
    pub margin: f64,
    pub points: u64,
    /// Reported but not counted towards the suite verdict.
    pub informational: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub quick: bool,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, quick: bool, checks: Vec<CheckOutcome>) -> Self {
        let passed = checks.iter().filter(|c| !c.informational).all(|c| c.passed);
        Self { suite: suite.to_string(), quick, checks, passed }
    }

    pub fn merge(suite: &str, quick: bool, parts: Vec<SuiteReport>) -> Self {
        Self::new(suite, quick, parts.into_iter().flat_map(|p| p.checks).collect())
    }
}

struct Tracker {
    margin: f64,
    points: u64,
    worst: String,
}

impl Tracker {
    fn new() -> Self {
        Self { margin: f64::INFINITY, points: 0, worst: String::new() }
    }

    fn record(&mut self, margin: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        if margin < self.margin || margin.is_nan() {
            self.margin = margin;
            self.worst = at();
        }
    }

    fn finish(self, name: &str) -> CheckOutcome {
        CheckOutcome {
            name: name.to_string(),
            passed: self.margin >= 0.0,
            margin: self.margin,
            points: self.points,
            informational: false,
            detail: if self.worst.is_empty() { String::new() } else { format!("tightest at {}", self.worst) },
        }
    }
}

/// Exact mass, the Fourier identity, route agreement, the local limit, the
/// lower bound with its calibration, decay, and the kernel-integral bounds.
pub fn verify_fejer(quick: bool, cfg: &FejerConfig) -> Result<SuiteReport, VerifyError> {
    let (m_exact, k_exact) = if quick { (5, 4) } else { (8, 6) };
    let mut checks = Vec::new();

    let mut mass = Tracker::new();
    let mut symmetry = Tracker::new();
    let mut routes = Tracker::new();
    for m in 1..=m_exact {
        for k in 1..=k_exact {
            let dist = fejer::convolve(FejerLaw::new(m)?, k, cfg)?;
            let ok = dist.total_mass() == BigRational::one();
            mass.record(if ok { 0.0 } else { -1.0 }, || format!("m={m} k={k}"));
            symmetry.record(if dist.is_symmetric() { 0.0 } else { -1.0 }, || format!("m={m} k={k}"));
            let exact = fejer::p_zero(m, k, PZeroMethod::Exact, cfg)?.to_f64();
            let quad = fejer::p_zero_quadrature(m, k, cfg)?;
            routes.record(1e-9 - (exact - quad).abs(), || format!("m={m} k={k}"));
        }
    }
    checks.push(mass.finish("exact total mass"));
    checks.push(symmetry.finish("symmetry"));
    checks.push(routes.finish("p_zero exact vs quadrature"));

    let mut fourier = Tracker::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2_1);
    let samples = if quick { 20 } else { 100 };
    for m in 1..=6 {
        for k in 1..=4 {
            let dist = fejer::convolve(FejerLaw::new(m)?, k, cfg)?;
            for _ in 0..samples {
                let t: f64 = rng.random();
                let err = (dist.char_fn_fourier(t) - dist.char_fn(t)).abs();
                fourier.record(1e-12 - err, || format!("m={m} k={k} t={t}"));
            }
        }
    }
    checks.push(fourier.finish("Fourier identity"));

    let mut local = Tracker::new();
    let mut headline = Tracker::new();
    let k_ll = if quick { 1_000 } else { 10_000 };
    for m in [2u32, 4, 8] {
        let p = fejer::p_zero_quadrature(m, k_ll, cfg)?;
        if let Some(g) = fejer::p_zero_local_limit(m, k_ll) {
            let ratio = p / g;
            local.record(0.01 - (ratio - 1.0).abs(), || format!("m={m} k={k_ll} ratio={ratio}"));
        }
        let ratio = p / fejer::p_zero_asymptotic(m, k_ll);
        headline.record(0.01 - (ratio - 1.0).abs(), || format!("m={m} k={k_ll} ratio={ratio}"));
    }
    checks.push(local.finish("local limit 1/√(πk(m²-1)/3)"));
    let mut headline = headline.finish("local limit √(3/π)/(m√k)");
    headline.informational = true;
    checks.push(headline);

    let (m_max, k_max) = if quick { (16, 50) } else { (64, 200) };
    let cal = fejer::calibrate_c0(m_max, k_max, cfg)?;
    let (am, ak) = cal.argmin;
    checks.push(CheckOutcome {
        name: "lower bound with C0 = 0.2, k0 = 1".into(),
        passed: cal.default_violations.is_empty(),
        margin: cal.min_scaled_p_zero - DEFAULT_C0,
        points: u64::from(m_max) * u64::from(k_max),
        informational: false,
        detail: format!(
            "min p_zero·m√k = {} at m={am} k={ak}; calibrated C0 = {:?}, k0 = {:?}",
            cal.min_scaled_p_zero, cal.c0, cal.k0
        ),
    });

    let mut decay = Tracker::new();
    let grid = if quick { 1_000 } else { 10_000 };
    for m in [2u32, 4, 8] {
        for k in [1u32, 2, 5] {
            for i in 1..=grid {
                let t = 0.5 * f64::from(i) / f64::from(grid);
                let ok = fejer::decay_bound_check(m, k, t);
                let slack = fejer::decay_bound(m, k, t) - fejer::kernel_power(m, k, t).value;
                decay.record(if ok { slack.max(0.0) } else { slack.min(-f64::MIN_POSITIVE) }, || {
                    format!("m={m} k={k} t={t}")
                });
            }
        }
    }
    checks.push(decay.finish("decay bound"));

    let mut lower = Tracker::new();
    let mut upper = Tracker::new();
    for m in 2..=m_exact {
        for k in 1..=k_exact {
            let b = fejer::kernel_integral_bounds(m, k, cfg)?;
            lower.record(b.ln_integral - b.ln_lower, || format!("m={m} k={k}"));
            upper.record(b.ln_upper - b.ln_integral, || format!("m={m} k={k}"));
        }
    }
    checks.push(lower.finish("kernel integral lower bound (log margin)"));
    let mut upper = upper.finish("kernel integral upper bound (log margin)");
    upper.informational = true;
    checks.push(upper);

    Ok(SuiteReport::new("fejer", quick, checks))
}

struct ReplayInstance {
    label: &'static str,
    instance: LinearFormInstance,
    betas: Vec<f64>,
    d: f64,
    t_len: f64,
    m: u32,
    k: u32,
}

fn replay_instances(quick: bool) -> Result<Vec<ReplayInstance>, VerifyError> {
    let golden = LinearFormInstance::from_specs(&[FrequencyKind::Decimal("1".into()), FrequencyKind::Sqrt(5)], 256)?;
    let golden = LinearFormInstance::from_values(vec![
        golden.values()[0].clone(),
        golden.values()[1].add(&golden.values()[0]).half(),
    ])?;
    let logs = LinearFormInstance::from_specs(&[FrequencyKind::Log(2), FrequencyKind::Log(3)], 256)?;
    let mut out = vec![
        ReplayInstance { label: "(1, φ) m=2 k=2 T=10", instance: golden.clone(), betas: vec![0.0, 0.0], d: 0.0, t_len: 10.0, m: 2, k: 2 },
        ReplayInstance { label: "(ln2, ln3) m=2 k=1 T=5", instance: logs.clone(), betas: vec![0.3, 0.7], d: 2.5, t_len: 5.0, m: 2, k: 1 },
        ReplayInstance {
            label: "(1) m=3 k=2 T=7.3",
            instance: LinearFormInstance::from_f64(&[1.0], 256)?,
            betas: vec![0.2],
            d: 1.0,
            t_len: 7.3,
            m: 3,
            k: 2,
        },
    ];
    if !quick {
        let three = LinearFormInstance::from_specs(
            &[FrequencyKind::Log(2), FrequencyKind::Log(3), FrequencyKind::Log(5)],
            256,
        )?;
        out.push(ReplayInstance { label: "(ln2, ln3) m=3 k=2 T=20", instance: logs, betas: vec![0.5, 0.25], d: 10.0, t_len: 20.0, m: 3, k: 2 });
        out.push(ReplayInstance { label: "(1, φ) m=3 k=1 T=12", instance: golden, betas: vec![0.1, 0.9], d: 3.0, t_len: 12.0, m: 3, k: 1 });
        out.push(ReplayInstance {
            label: "(ln2, ln3, ln5) m=2 k=2 T=6",
            instance: three,
            betas: vec![0.4, 0.1, 0.8],
            d: 0.5,
            t_len: 6.0,
            m: 2,
            k: 2,
        });
    }
    Ok(out)
}

/// The decomposition identity, `|H|, |H_j| <= 1/(πΞ)`, the parameter
/// inequality, the sinc chain, small deviations, `K(r)`, the `|x|^r`
/// identity and the Cauchy–Schwarz bound.
pub fn verify_replay(quick: bool, cfg: &ReplayConfig) -> Result<SuiteReport, VerifyError> {
    let mut checks = Vec::new();
    let mut decomposition = Tracker::new();
    let mut h_bound = Tracker::new();
    let mut sinc_chain = Tracker::new();
    let mut smalldev = Tracker::new();
    for inst in replay_instances(quick)? {
        let r = replay::key_inequality_check(inst.m, inst.k, &inst.instance, &inst.betas, inst.d, inst.t_len, None, cfg)?;
        for c in &r.decomposition {
            decomposition.record(replay::DECOMPOSITION_TOLERANCE - c.residual, || format!("{} excluded={:?}", inst.label, c.excluded));
        }
        for h in std::iter::once(&r.h).chain(&r.h_j) {
            let margin = match (h.margin, h.within_bound) {
                (Some(m), _) => m,
                (None, true) => f64::INFINITY,
                (None, false) => -1.0,
            };
            h_bound.record(margin, || format!("{} excluded={:?}", inst.label, h.excluded));
        }

        let wsd = WeightedSumDistribution::from_parameters(&inst.instance, inst.m, inst.k, cfg)?;
        let sinc = replay::sinc_expectation(&wsd, inst.t_len);
        let inv = replay::inverse_moment(&wsd);
        let radius = u64::from(inst.m - 1) * u64::from(inst.k);
        let xi = lattice::xi(&inst.instance, radius, &cfg.lattice)?;
        let top = 1.0 / (PI * xi.value);
        let slack = 1e-12 * top;
        sinc_chain.record((inv - sinc).min(top - inv) + slack, || inst.label.to_string());

        let max = wsd.max_abs();
        let mut prev = BigRational::from_integer(0.into());
        let mut ok = true;
        for i in 1..=40 {
            let eps = (max + 1.0) * f64::from(i) / 40.0;
            let p = replay::small_deviation(&wsd, eps)?;
            ok &= p >= prev;
            prev = p;
        }
        ok &= prev == BigRational::one();
        smalldev.record(if ok { 0.0 } else { -1.0 }, || inst.label.to_string());
    }
    checks.push(decomposition.finish("decomposition identity"));
    checks.push(h_bound.finish("|H|, |H_j| <= 1/(πΞ)"));
    checks.push(sinc_chain.finish("sinc <= inverse moment <= 1/(πΞ)"));
    checks.push(smalldev.finish("small deviation monotone, reaches 1"));

    let mut step = Tracker::new();
    let top = if quick { 8 } else { 20 };
    for n in 1..=top {
        for omega in 1..=top as u64 {
            let p = ProofParameters::choose(n, omega, DEFAULT_C0)?;
            let c = bounds::proof_step_check(&p, &cfg.fejer)?;
            let margin = if c.holds { (c.rhs - c.lhs).max(0.0) } else { (c.rhs - c.lhs).min(-f64::MIN_POSITIVE) };
            step.record(margin, || format!("N={n} ω={omega} m={} k={}", p.m, p.k));
        }
    }
    checks.push(step.finish("parameter inequality"));

    let mut kr = Tracker::new();
    let k_half = replay::k_of_r(0.5)?.value;
    kr.record(1e-9 - (k_half - (2.0 * PI).sqrt()).abs(), || "r=1/2".into());
    let k_one = replay::k_of_r(1.0)?.value;
    kr.record(1e-12 - (k_one - PI / 2.0).abs(), || "r=1".into());
    checks.push(kr.finish("K(r) closed forms"));

    let mut identity = Tracker::new();
    let mut points = vec![(1.0, 0.5), (2.0, 1.0), (3.0, 1.5)];
    if !quick {
        points.extend([(0.5, 0.25), (5.0, 1.75), (-2.0, 1.2)]);
    }
    for (x, r) in points {
        let id = replay::absr_identity_check(x, r, cfg.quad)?;
        identity.record(1e-6 - id.relative_error, || format!("x={x} r={r}"));
    }
    checks.push(identity.finish("|x|^r integral identity"));

    let mut cs = Tracker::new();
    let mut printed = Tracker::new();
    let cases = [
        (TabulatedDensity::uniform(), PI, 1.5),
        (TabulatedDensity::triangular(), 2.0 * PI, 1.25),
        (TabulatedDensity::uniform(), 0.0, 1.5),
    ];
    for (density, x, r) in &cases {
        let c = replay::cauchy_schwarz_bound_check(density, *x, *r, cfg.quad)?;
        cs.record(c.rhs - c.lhs, || format!("{} x={x} r={r}", density.name));
        printed.record(c.rhs_printed - c.lhs, || format!("{} x={x} r={r}", density.name));
    }
    checks.push(cs.finish("Cauchy–Schwarz bound"));
    let mut printed = printed.finish("Cauchy–Schwarz bound, constant |2x|^r/(2K)");
    printed.informational = true;
    checks.push(printed);

    Ok(SuiteReport::new("replay", quick, checks))
}

pub fn verify_all(quick: bool, fejer_cfg: &FejerConfig, replay_cfg: &ReplayConfig) -> Result<SuiteReport, VerifyError> {
    let f = verify_fejer(quick, fejer_cfg)?;
    let r = verify_replay(quick, replay_cfg)?;
    Ok(SuiteReport::merge("all", quick, vec![f, r]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_fejer_suite_passes() {
        let r = verify_fejer(true, &FejerConfig::default()).unwrap();
        assert!(r.passed, "{r:#?}");
        assert!(r.checks.iter().all(|c| c.points > 0));
        let headline = r.checks.iter().find(|c| c.informational && c.name.starts_with("local limit")).unwrap();
        assert!(!headline.passed);
    }

    #[test]
    fn quick_replay_suite_passes() {
        let r = verify_replay(true, &ReplayConfig::default()).unwrap();
        assert!(r.passed, "{r:#?}");
        let printed = r.checks.iter().find(|c| c.informational).unwrap();
        assert!(!printed.passed);
    }
}
