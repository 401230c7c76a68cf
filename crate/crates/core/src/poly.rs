//! Dirichlet polynomials `D_L(t) = Σ α_n n^{it}`, their Bohr lift to the
//! torus, generalized polynomials `Σ α_n e^{it b(n)}` with `b(n) = Σ a_j(n) λ_j`,
//! and the transfer of torus values to real `t` through Kronecker witnesses.
//!
//! Polynomial file:
//!
//! ```text
//! # Dirichlet: header, then `n re im` (missing n have α_n = 0)
//! L 4
//! 1 1 0
//! 2 0 1
//!
//! # generalized: a frequency file reference, then `a_1 … a_N re im`
//! freq logs23.freq
//! 1 0 1 0
//! 0 1 0.5 -0.5
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundsError, ProofParameters};
use crate::fejer::DEFAULT_C0;
use crate::lattice::{self, FrequencyKind, Independence, LatticeConfig, LatticeError, LinearFormInstance};
use crate::search::{self, SearchError, SearchMode, SearchOptions, TargetInstance, WitnessResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Prime factorizations of `1..=L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorTable {
    pub primes: Vec<u64>,
    /// `exponents[n - 1][j]` is the exponent of `primes[j]` in `n`.
    pub exponents: Vec<Vec<u32>>,
    /// `Ω(n)`, prime factors counted with multiplicity.
    pub big_omega: Vec<u32>,
}

impl FactorTable {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents_of(&self, n: u64) -> &[u32] {
        &self.exponents[(n - 1) as usize]
    }

    pub fn big_omega_of(&self, n: u64) -> u32 {
        self.big_omega[(n - 1) as usize]
    }
}

pub fn factorize_table(l: u64) -> Result<FactorTable, PolyError> {
    if l == 0 {
        return Err(PolyError::Domain("L must be >= 1".into()));
    }
    let size = l as usize;
    let mut is_composite = vec![false; size + 1];
    let mut primes = Vec::new();
    for p in 2..=size {
        if !is_composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= size {
                is_composite[q] = true;
                q += p;
            }
        }
    }
    let mut exponents = Vec::with_capacity(size);
    let mut big_omega = Vec::with_capacity(size);
    for n in 1..=l {
        let mut rest = n;
        let e: Vec<u32> = primes
            .iter()
            .map(|&p| {
                let mut c = 0;
                while rest % p == 0 {
                    rest /= p;
                    c += 1;
                }
                c
            })
            .collect();
        debug_assert_eq!(rest, 1);
        big_omega.push(e.iter().sum());
        exponents.push(e);
    }
    Ok(FactorTable { primes, exponents, big_omega })
}

/// `Σ α_n e^{it b(n)}` with `b(n) = Σ_j a_j(n) λ_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedPolynomial {
    pub lambdas: Vec<f64>,
    pub exponents: Vec<Vec<i64>>,
    pub coefficients: Vec<Complex64>,
}

impl GeneralizedPolynomial {
    pub fn new(lambdas: Vec<f64>, exponents: Vec<Vec<i64>>, coefficients: Vec<Complex64>) -> Result<Self, PolyError> {
        if lambdas.is_empty() {
            return Err(PolyError::Domain("need at least one frequency".into()));
        }
        if exponents.len() != coefficients.len() {
            return Err(PolyError::Domain("one exponent vector per coefficient".into()));
        }
        if let Some(e) = exponents.iter().find(|e| e.len() != lambdas.len()) {
            return Err(PolyError::Domain(format!(
                "exponent vector {e:?} has length {}, expected {}",
                e.len(),
                lambdas.len()
            )));
        }
        Ok(Self { lambdas, exponents, coefficients })
    }

    pub fn n_frequencies(&self) -> usize {
        self.lambdas.len()
    }

    /// `b(n)` for every term.
    pub fn frequencies(&self) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|a| a.iter().zip(&self.lambdas).map(|(&c, &l)| c as f64 * l).sum())
            .collect()
    }

    /// `Σ_j |a_j(n)|` for every term (`Ω(n)` for Dirichlet polynomials).
    pub fn weights(&self) -> Vec<u64> {
        self.exponents.iter().map(|a| a.iter().map(|c| c.unsigned_abs()).sum()).collect()
    }

    /// `A = max_{n, j} |a_j(n)|`.
    pub fn max_exponent(&self) -> u64 {
        self.exponents.iter().flatten().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(a, &alpha)| {
                let b: f64 = a.iter().zip(&self.lambdas).map(|(&c, &l)| c as f64 * l).sum();
                alpha * Complex64::from_polar(1.0, t * b)
            })
            .sum()
    }

    /// `Q(θ) = Σ α_n e^{2πi Σ_j a_j(n) θ_j}`.
    pub fn bohr_lift(&self, theta: &[f64]) -> Complex64 {
        assert_eq!(theta.len(), self.lambdas.len(), "theta has the wrong dimension");
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(a, &alpha)| {
                let phase: f64 = a.iter().zip(theta).map(|(&c, &th)| c as f64 * th).sum();
                alpha * Complex64::from_polar(1.0, 2.0 * PI * phase)
            })
            .sum()
    }

    /// `(2π/ω) Σ |α_n| Σ_j |a_j(n)|`.
    pub fn approx_error_bound(&self, omega: u64) -> Result<f64, PolyError> {
        if omega == 0 {
            return Err(PolyError::Domain("omega must be >= 1".into()));
        }
        let s: f64 = self.coefficients.iter().zip(self.weights()).map(|(a, w)| a.norm() * w as f64).sum();
        Ok(2.0 * PI / omega as f64 * s)
    }

    /// Checks that no nonzero `u` with `max|u_j| <= 2A` annihilates the
    /// frequencies, which makes `n ↦ b(n)` injective.
    pub fn injectivity_check(&self, instance: &LinearFormInstance, cfg: &LatticeConfig) -> Result<Independence, PolyError> {
        if instance.len() != self.lambdas.len() {
            return Err(PolyError::Domain("instance does not match the frequency system".into()));
        }
        Ok(lattice::independence_check(instance, 2 * self.max_exponent(), cfg)?)
    }
}

/// `D_L(t) = Σ_{n<=L} α_n n^{it}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletPolynomial {
    pub table: FactorTable,
    pub poly: GeneralizedPolynomial,
}

impl DirichletPolynomial {
    /// `coefficients[n - 1] = α_n`.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self, PolyError> {
        let table = factorize_table(coefficients.len() as u64)?;
        let lambdas: Vec<f64> = if table.primes.is_empty() {
            vec![2f64.ln()]
        } else {
            table.primes.iter().map(|&p| (p as f64).ln()).collect()
        };
        let exponents: Vec<Vec<i64>> = table
            .exponents
            .iter()
            .map(|e| {
                let mut v: Vec<i64> = e.iter().map(|&c| i64::from(c)).collect();
                v.resize(lambdas.len(), 0);
                v
            })
            .collect();
        let poly = GeneralizedPolynomial::new(lambdas, exponents, coefficients)?;
        Ok(Self { table, poly })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.poly.evaluate(t)
    }

    pub fn bohr_lift(&self, theta: &[f64]) -> Complex64 {
        self.poly.bohr_lift(theta)
    }

    pub fn approx_error_bound(&self, omega: u64) -> Result<f64, PolyError> {
        self.poly.approx_error_bound(omega)
    }

    /// `(frac(τ ln p_1), …, frac(τ ln p_N))`, so that `D_L(2πτ) = Q(θ)`.
    pub fn lift_point(&self, tau: f64) -> Vec<f64> {
        self.poly.lambdas.iter().map(|l| (tau * l).rem_euclid(1.0)).collect()
    }

    /// The primes as `log p` frequency specs.
    pub fn frequency_kinds(&self) -> Vec<FrequencyKind> {
        if self.table.primes.is_empty() {
            vec![FrequencyKind::Log(2)]
        } else {
            self.table.primes.iter().map(|&p| FrequencyKind::Log(p)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSup {
    pub value: f64,
    pub argmax: f64,
    pub points: u64,
}

fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iterations: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        for cand in [(c, fc), (d, fd)] {
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    best
}

/// Lower bound for `sup_{t ∈ [d, d+T]} |P(t)|` from a grid plus golden-section
/// refinement around the best grid point.
pub fn sup_interval(
    poly: &GeneralizedPolynomial,
    d: f64,
    length: f64,
    step: f64,
    max_points: u64,
) -> Result<IntervalSup, PolyError> {
    if !(step > 0.0) || !(length >= 0.0) {
        return Err(PolyError::Domain("need step > 0 and T >= 0".into()));
    }
    let intervals = (length / step).ceil().max(1.0);
    if intervals + 1.0 > max_points as f64 {
        return Err(PolyError::Domain(format!(
            "grid of {} points exceeds the cap of {max_points}",
            intervals + 1.0
        )));
    }
    let intervals = intervals as u64;
    let f = |t: f64| poly.evaluate(t).norm();
    let mut best = (d, f(d));
    for i in 1..=intervals {
        let t = d + length * (i as f64 / intervals as f64);
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let h = length / intervals as f64;
    let lo = (best.0 - h).max(d);
    let hi = (best.0 + h).min(d + length);
    if hi > lo {
        let r = golden_max(f, lo, hi, 80);
        if r.1 > best.1 {
            best = r;
        }
    }
    Ok(IntervalSup { value: best.1, argmax: best.0, points: intervals + 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusSampler {
    /// `per_axis^N` lattice points `i / per_axis`.
    Grid { per_axis: u64 },
    /// `budget` points from a seeded ChaCha8 stream.
    Random { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusSup {
    pub value: f64,
    pub argmax: Vec<f64>,
    pub samples: u64,
}

/// Coordinate-wise golden-section ascent of `|Q|` around `theta`.
fn refine_torus(poly: &GeneralizedPolynomial, theta: &mut [f64], value: &mut f64, radius: f64) {
    for _ in 0..20 {
        let start = *value;
        for j in 0..theta.len() {
            let base = theta[j];
            let f = |x: f64| {
                let mut th = theta.to_vec();
                th[j] = x;
                poly.bohr_lift(&th).norm()
            };
            let (x, v) = golden_max(f, base - radius, base + radius, 40);
            if v > *value {
                *value = v;
                theta[j] = x.rem_euclid(1.0);
            }
        }
        if *value <= start {
            break;
        }
    }
}

const RANDOM_REFINE_RADIUS: f64 = 0.05;

/// Lower bound for `sup_{θ ∈ T^N} |Q(θ)|`. Each new record is refined before
/// sampling continues, so larger budgets never give smaller values.
pub fn sup_torus(poly: &GeneralizedPolynomial, sampler: TorusSampler, max_samples: u64) -> Result<TorusSup, PolyError> {
    sup_torus_from(poly, &[], sampler, max_samples)
}

/// As [`sup_torus`], with `starts` examined (and refined) before sampling.
pub fn sup_torus_from(
    poly: &GeneralizedPolynomial,
    starts: &[Vec<f64>],
    sampler: TorusSampler,
    max_samples: u64,
) -> Result<TorusSup, PolyError> {
    let n = poly.n_frequencies();
    if let Some(s) = starts.iter().find(|s| s.len() != n) {
        return Err(PolyError::Domain(format!("start point has {} coordinates, expected {n}", s.len())));
    }
    let mut best_theta = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;
    let samples;
    let consider = |theta: Vec<f64>, radius: f64, best: &mut f64, best_theta: &mut Vec<f64>| {
        let v = poly.bohr_lift(&theta).norm();
        if v > *best {
            let mut th = theta;
            let mut val = v;
            refine_torus(poly, &mut th, &mut val, radius);
            *best = val;
            *best_theta = th;
        }
    };
    let radius = match sampler {
        TorusSampler::Grid { per_axis } => 0.5 / per_axis.max(1) as f64,
        TorusSampler::Random { .. } => RANDOM_REFINE_RADIUS,
    };
    consider(vec![0.0; n], radius, &mut best, &mut best_theta);
    for s in starts {
        consider(s.iter().map(|x| x.rem_euclid(1.0)).collect(), radius, &mut best, &mut best_theta);
    }
    match sampler {
        TorusSampler::Grid { per_axis } => {
            if per_axis == 0 {
                return Err(PolyError::Domain("grid needs at least one point per axis".into()));
            }
            let total = (per_axis as f64).powi(n as i32);
            if total > max_samples as f64 {
                return Err(PolyError::Domain(format!("{total} grid points exceed the cap of {max_samples}")));
            }
            let total = total as u64;
            for idx in 1..total {
                let mut rest = idx;
                let theta: Vec<f64> = (0..n)
                    .map(|_| {
                        let i = rest % per_axis;
                        rest /= per_axis;
                        i as f64 / per_axis as f64
                    })
                    .collect();
                consider(theta, radius, &mut best, &mut best_theta);
            }
            samples = total;
        }
        TorusSampler::Random { budget, seed } => {
            if budget == 0 {
                return Err(PolyError::Domain("budget must be >= 1".into()));
            }
            if budget > max_samples {
                return Err(PolyError::Domain(format!("budget {budget} exceeds the cap of {max_samples}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 1..budget {
                let theta: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                consider(theta, radius, &mut best, &mut best_theta);
            }
            samples = budget;
        }
    }
    Ok(TorusSup { value: best, argmax: best_theta, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub theta_target: Vec<f64>,
    pub omega: u64,
    pub interval: (f64, f64),
    pub interval_from_theorem: bool,
    pub witness: WitnessResult,
    pub tau: f64,
    pub d_value: (f64, f64),
    pub q_value: (f64, f64),
    pub gap: f64,
    pub bound: f64,
    pub margin: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct TransferOptions {
    pub c0: f64,
    pub precision: u32,
    pub lattice: LatticeConfig,
    pub search: SearchOptions,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self {
            c0: DEFAULT_C0,
            precision: 256,
            lattice: LatticeConfig::default(),
            search: SearchOptions::default(),
        }
    }
}

/// Length of `[d, d + T]` that Theorem 1 guarantees for the frequencies of
/// `instance`, with Ξ at the theorem's coefficient bound.
pub fn theorem_interval(instance: &LinearFormInstance, omega: u64, opts: &TransferOptions) -> Result<f64, PolyError> {
    let n = instance.len();
    let u = lattice::coefficient_bound(n, omega, opts.c0)?;
    let xi = lattice::xi(instance, u, &opts.lattice)?;
    let params = ProofParameters::choose(n, omega, opts.c0)?;
    Ok(bounds::theorem1_bound(&params, xi.value)?.value())
}

/// Finds `τ ∈ [d, d+T]` with `‖τ λ_j − θ_j‖ <= 1/ω` and compares `P(2πτ)`
/// with `Q(θ)` against `(2π/ω) Σ |α_n| Σ_j |a_j(n)|`. `T = None` takes the
/// Theorem 1 length, which needs the exact `instance`.
pub fn transfer_check(
    poly: &GeneralizedPolynomial,
    instance: Option<&LinearFormInstance>,
    theta_target: &[f64],
    omega: u64,
    d: f64,
    length: Option<f64>,
    opts: &TransferOptions,
) -> Result<TransferReport, PolyError> {
    let n = poly.n_frequencies();
    if theta_target.len() != n {
        return Err(PolyError::Domain(format!("theta needs {n} coordinates, got {}", theta_target.len())));
    }
    let (t_len, from_theorem) = match (length, instance) {
        (Some(t), _) => (t, false),
        (None, Some(inst)) => (theorem_interval(inst, omega, opts)?, true),
        (None, None) => return Err(PolyError::Domain("an automatic T needs the exact frequency system".into())),
    };
    let target = TargetInstance::new(poly.lambdas.clone(), theta_target.to_vec(), d, t_len, omega)?;
    let witness = search::find_witness(&target, SearchMode::FirstHit, &opts.search)?;
    let tau = witness.t;
    let pv = poly.evaluate(2.0 * PI * tau);
    let qv = poly.bohr_lift(theta_target);
    let gap = (pv - qv).norm();
    let bound = poly.approx_error_bound(omega)?;
    Ok(TransferReport {
        theta_target: theta_target.to_vec(),
        omega,
        interval: (d, d + t_len),
        interval_from_theorem: from_theorem,
        witness,
        tau,
        d_value: (pv.re, pv.im),
        q_value: (qv.re, qv.im),
        gap,
        bound,
        margin: bound - gap,
        passes: gap <= bound,
    })
}

/// [`transfer_check`] for `D_L` with `λ_j = ln p_j`.
pub fn kronecker_transfer_check(
    poly: &DirichletPolynomial,
    theta_target: &[f64],
    omega: u64,
    d: f64,
    length: Option<f64>,
    opts: &TransferOptions,
) -> Result<TransferReport, PolyError> {
    let instance = match length {
        Some(_) => None,
        None => Some(LinearFormInstance::from_specs(&poly.frequency_kinds(), opts.precision)?),
    };
    transfer_check(&poly.poly, instance.as_ref(), theta_target, omega, d, length, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolyFile {
    Dirichlet { coefficients: Vec<Complex64> },
    Generalized { frequency_file: String, exponents: Vec<Vec<i64>>, coefficients: Vec<Complex64> },
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, PolyError> {
    tok.parse().map_err(|_| PolyError::Parse { line, message: format!("expected a number, got {tok:?}") })
}

pub fn parse_poly_file(text: &str) -> Result<PolyFile, PolyError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((hline, header)) = lines.next() else {
        return Err(PolyError::Parse { line: 0, message: "empty polynomial file".into() });
    };
    let mut head = header.split_whitespace();
    match (head.next(), head.next(), head.next()) {
        (Some("L"), Some(l), None) => {
            let l: usize = l
                .parse()
                .ok()
                .filter(|&l| l >= 1)
                .ok_or_else(|| PolyError::Parse { line: hline, message: format!("bad L {l:?}") })?;
            let mut coefficients = vec![Complex64::new(0.0, 0.0); l];
            for (line, content) in lines {
                let toks: Vec<&str> = content.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(PolyError::Parse { line, message: "expected `n re im`".into() });
                }
                let n: usize = toks[0]
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1 && n <= l)
                    .ok_or_else(|| PolyError::Parse { line, message: format!("index {:?} outside 1..={l}", toks[0]) })?;
                coefficients[n - 1] = Complex64::new(parse_f64(toks[1], line)?, parse_f64(toks[2], line)?);
            }
            Ok(PolyFile::Dirichlet { coefficients })
        }
        (Some("freq"), Some(path), None) => {
            let mut exponents = Vec::new();
            let mut coefficients = Vec::new();
            for (line, content) in lines {
                let toks: Vec<&str> = content.split_whitespace().collect();
                if toks.len() < 3 {
                    return Err(PolyError::Parse { line, message: "expected `a_1 … a_N re im`".into() });
                }
                let (a, c) = toks.split_at(toks.len() - 2);
                let a = a
                    .iter()
                    .map(|t| t.parse::<i64>().map_err(|_| PolyError::Parse { line, message: format!("bad exponent {t:?}") }))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(prev) = exponents.first().map(Vec::len) {
                    if prev != a.len() {
                        return Err(PolyError::Parse { line, message: "inconsistent number of exponents".into() });
                    }
                }
                exponents.push(a);
                coefficients.push(Complex64::new(parse_f64(c[0], line)?, parse_f64(c[1], line)?));
            }
            Ok(PolyFile::Generalized { frequency_file: path.to_string(), exponents, coefficients })
        }
        _ => Err(PolyError::Parse { line: hline, message: "expected `L <n>` or `freq <path>` header".into() }),
    }
}
