//! Browser bindings for the kronloc demo page.
//!
//! Every export returns plain `f64` arrays so the page can draw them on a canvas.

use std::f64::consts::PI;

use kronloc_core::fejer::{self, FejerConfig, FejerLaw, PZeroMethod};
use kronloc_core::poly::DirichletPolynomial;
use kronloc_core::search::{find_witness, SearchMode, SearchOptions, TargetInstance};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

const MAX_CURVE: usize = 20_000;
const MAX_DIRICHLET_L: u32 = 2_000;
const WEB_SEARCH_CAP: u64 = 50_000_000;

fn check_samples(samples: usize) -> Result<(), String> {
    if samples < 2 || samples > MAX_CURVE {
        return Err(format!("samples must be in 2..={MAX_CURVE}, got {samples}"));
    }
    Ok(())
}

/// Probabilities of `S_k` on `-(m-1)k..=(m-1)k`, followed by `P{S_k = 0}`.
#[wasm_bindgen]
pub fn fejer_pmf(m: u32, k: u32) -> Result<Vec<f64>, String> {
    let law = FejerLaw::new(m).map_err(|e| e.to_string())?;
    let cfg = FejerConfig { support_cap: 20_001, ..FejerConfig::default() };
    let dist = fejer::convolve(law, k, &cfg).map_err(|e| e.to_string())?;
    let mut out = dist.probabilities_f64();
    out.push(dist.pmf_f64(0));
    Ok(out)
}

/// `φ(t)^k` for the Fejér law at `samples` points of `[0, 1/2]`.
#[wasm_bindgen]
pub fn fejer_kernel_curve(m: u32, k: u32, samples: usize) -> Result<Vec<f64>, String> {
    check_samples(samples)?;
    if m == 0 || k == 0 {
        return Err("m and k must be >= 1".into());
    }
    let step = 0.5 / (samples - 1) as f64;
    Ok((0..samples).map(|i| fejer::kernel_power(m, k, i as f64 * step).value).collect())
}

/// `[exact or quadrature p_zero, C0/(m√k)]` for the page's readout.
#[wasm_bindgen]
pub fn fejer_p_zero(m: u32, k: u32, c0: f64) -> Result<Vec<f64>, String> {
    let cfg = FejerConfig { support_cap: 20_001, ..FejerConfig::default() };
    let method = if u64::from(m.saturating_sub(1)) * u64::from(k) <= 10_000 {
        PZeroMethod::Exact
    } else {
        PZeroMethod::Quadrature
    };
    let p = fejer::p_zero(m, k, method, &cfg).map_err(|e| e.to_string())?;
    Ok(vec![p.to_f64(), fejer::p_zero_lower_bound(m, k, c0)])
}

/// `|D_L(t)|` with `α_n ≡ 1` at `samples` points of `[t0, t1]`.
#[wasm_bindgen]
pub fn dirichlet_curve(l: u32, t0: f64, t1: f64, samples: usize) -> Result<Vec<f64>, String> {
    check_samples(samples)?;
    if l == 0 || l > MAX_DIRICHLET_L {
        return Err(format!("L must be in 1..={MAX_DIRICHLET_L}"));
    }
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err("need finite t0 < t1".into());
    }
    let poly = DirichletPolynomial::new(vec![Complex64::new(1.0, 0.0); l as usize]).map_err(|e| e.to_string())?;
    let step = (t1 - t0) / (samples - 1) as f64;
    Ok((0..samples).map(|i| poly.evaluate(t0 + i as f64 * step).norm()).collect())
}

/// `[|Q(θ)|, |D_L(2πτ)|, (2π/ω)Σ Ω(n), N]` with `θ` the lift of `τ`.
#[wasm_bindgen]
pub fn dirichlet_lift(l: u32, tau: f64, omega: u32) -> Result<Vec<f64>, String> {
    if l == 0 || l > MAX_DIRICHLET_L {
        return Err(format!("L must be in 1..={MAX_DIRICHLET_L}"));
    }
    let poly = DirichletPolynomial::new(vec![Complex64::new(1.0, 0.0); l as usize]).map_err(|e| e.to_string())?;
    let theta = poly.lift_point(tau);
    let q = poly.bohr_lift(&theta).norm();
    let bound = poly.approx_error_bound(u64::from(omega)).map_err(|e| e.to_string())?;
    let d = poly.evaluate(2.0 * PI * tau).norm();
    Ok(vec![q, d, bound, theta.len() as f64])
}

/// First `t ∈ [d, d+T]` with `‖tλ_j − β_j‖ <= 1/ω` for two frequencies.
///
/// Returns `[t, ‖tλ_1 − β_1‖, ‖tλ_2 − β_2‖, points scanned]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn witness_2d(l1: f64, l2: f64, b1: f64, b2: f64, omega: u32, d: f64, length: f64) -> Result<Vec<f64>, String> {
    let target =
        TargetInstance::new(vec![l1, l2], vec![b1, b2], d, length, u64::from(omega)).map_err(|e| e.to_string())?;
    let opts = SearchOptions { slack: None, max_points: WEB_SEARCH_CAP };
    let w = find_witness(&target, SearchMode::FirstHit, &opts).map_err(|e| e.to_string())?;
    Ok(vec![w.t, w.discrepancies[0], w.discrepancies[1], w.points_scanned as f64])
}

/// Interleaved `(frac(tλ_1), frac(tλ_2))` along `[t0, t1]`, for the torus plot.
#[wasm_bindgen]
pub fn orbit_2d(l1: f64, l2: f64, t0: f64, t1: f64, samples: usize) -> Result<Vec<f64>, String> {
    check_samples(samples)?;
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err("need finite t0 <= t1".into());
    }
    let step = (t1 - t0) / (samples - 1) as f64;
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let t = t0 + i as f64 * step;
        out.push((t * l1).rem_euclid(1.0));
        out.push((t * l2).rem_euclid(1.0));
    }
    Ok(out)
}
