//! Grid search for points `t` with `‖tλ_j − β_j‖ <= 1/ω` inside `[d, d + T]`,
//! and running-minimum traces of the liminf quantities.
//!
//! A true witness `t*` keeps `sup_j ‖tλ_j − β_j‖ <= 1/ω + |t − t*| max|λ_j|`
//! nearby, so a grid of step `slack / Σ|λ_j|` meets every witness that has
//! margin `slack`.

use serde::Serialize;
use thiserror::Error;

use crate::fejer::dist_to_int;

const CHUNK: u64 = 1 << 14;
const BATCH: u64 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid needs {needed} points, above the cap of {cap}")]
    PointsCapExceeded { needed: u64, cap: u64 },
    #[error("no grid point reached accuracy {accuracy}; best sup-discrepancy {:.6} at t = {}", best.sup_discrepancy, best.t)]
    NotFound { accuracy: f64, best: Box<WitnessResult> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub sup: f64,
    pub sum: f64,
}

/// `‖tλ_j − β_j‖` for every `j`, with their maximum and sum.
pub fn discrepancy(t: f64, lambdas: &[f64], betas: &[f64]) -> (Vec<f64>, Discrepancy) {
    let per: Vec<f64> = lambdas.iter().zip(betas).map(|(&l, &b)| dist_to_int(t * l - b)).collect();
    let sup = per.iter().copied().fold(0.0, f64::max);
    let sum = per.iter().sum();
    (per, Discrepancy { sup, sum })
}

fn sup_discrepancy(t: f64, lambdas: &[f64], betas: &[f64]) -> f64 {
    lambdas
        .iter()
        .zip(betas)
        .map(|(&l, &b)| dist_to_int(t * l - b))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetInstance {
    pub lambdas: Vec<f64>,
    pub betas: Vec<f64>,
    pub d: f64,
    pub length: f64,
    pub omega: u64,
}

impl TargetInstance {
    pub fn new(lambdas: Vec<f64>, betas: Vec<f64>, d: f64, length: f64, omega: u64) -> Result<Self, SearchError> {
        if lambdas.is_empty() || lambdas.len() != betas.len() {
            return Err(SearchError::Domain(format!(
                "need as many betas as frequencies (got {} and {})",
                betas.len(),
                lambdas.len()
            )));
        }
        if !(length > 0.0 && length.is_finite()) || !d.is_finite() {
            return Err(SearchError::Domain(format!("interval [{d}, {d} + {length}] is not valid")));
        }
        if omega == 0 {
            return Err(SearchError::Domain("omega must be >= 1".into()));
        }
        if lambdas.iter().chain(&betas).any(|x| !x.is_finite()) {
            return Err(SearchError::Domain("frequencies and betas must be finite".into()));
        }
        Ok(Self { lambdas, betas, d, length, omega })
    }

    pub fn accuracy(&self) -> f64 {
        1.0 / self.omega as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    FirstHit,
    BestInInterval,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Grid margin; `None` means `0.1/ω`.
    pub slack: Option<f64>,
    /// Points scanned in first-hit mode; grid size in best-in-interval mode.
    pub max_points: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { slack: None, max_points: 1_000_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessResult {
    pub t: f64,
    pub discrepancies: Vec<f64>,
    pub sup_discrepancy: f64,
    pub sum_discrepancy: f64,
    pub grid_step: f64,
    pub points_scanned: u64,
    pub interval: (f64, f64),
    pub accuracy: f64,
    pub refined: bool,
    /// Indices with `λ_j = 0`, excluded by the theorem's hypotheses.
    pub degenerate_coordinates: Vec<usize>,
}

struct Grid {
    d: f64,
    length: f64,
    intervals: u64,
}

impl Grid {
    fn point(&self, i: u64) -> f64 {
        if i == self.intervals {
            self.d + self.length
        } else {
            self.d + self.length * (i as f64 / self.intervals as f64)
        }
    }

    fn points(&self) -> u64 {
        self.intervals + 1
    }

    fn step(&self) -> f64 {
        self.length / self.intervals as f64
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    index: u64,
}

impl Best {
    fn better(self, other: Self) -> Self {
        if other.value < self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

fn scan_chunk_first(target: &TargetInstance, grid: &Grid, lo: u64, hi: u64) -> (Option<u64>, Best) {
    let acc = target.accuracy();
    let mut best = Best { value: f64::INFINITY, index: lo };
    for i in lo..hi {
        let v = sup_discrepancy(grid.point(i), &target.lambdas, &target.betas);
        best = best.better(Best { value: v, index: i });
        if v <= acc {
            return (Some(i), best);
        }
    }
    (None, best)
}

fn scan_chunk_best(target: &TargetInstance, grid: &Grid, lo: u64, hi: u64) -> Best {
    let mut best = Best { value: f64::INFINITY, index: lo };
    for i in lo..hi {
        let v = sup_discrepancy(grid.point(i), &target.lambdas, &target.betas);
        best = best.better(Best { value: v, index: i });
    }
    best
}

#[cfg(feature = "parallel")]
fn map_chunks<R: Send, F: Fn(u64, u64) -> R + Sync>(lo: u64, hi: u64, f: F) -> Vec<R> {
    use rayon::prelude::*;
    let n = (hi - lo).div_ceil(CHUNK);
    (0..n)
        .into_par_iter()
        .map(|c| f(lo + c * CHUNK, (lo + (c + 1) * CHUNK).min(hi)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<R, F: Fn(u64, u64) -> R>(lo: u64, hi: u64, f: F) -> Vec<R> {
    let n = (hi - lo).div_ceil(CHUNK);
    (0..n).map(|c| f(lo + c * CHUNK, (lo + (c + 1) * CHUNK).min(hi))).collect()
}

/// Golden-section minimisation of the sup-discrepancy on `[a, b]`.
fn golden_refine(target: &TargetInstance, a: f64, b: f64, iterations: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| sup_discrepancy(t, &target.lambdas, &target.betas);
    let (mut a, mut b) = (a, b);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iterations {
        if fc <= fd {
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
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    best
}

fn build_result(target: &TargetInstance, t: f64, grid: &Grid, scanned: u64, refined: bool) -> WitnessResult {
    let (per, agg) = discrepancy(t, &target.lambdas, &target.betas);
    WitnessResult {
        t,
        discrepancies: per,
        sup_discrepancy: agg.sup,
        sum_discrepancy: agg.sum,
        grid_step: grid.step(),
        points_scanned: scanned,
        interval: (target.d, target.d + target.length),
        accuracy: target.accuracy(),
        refined,
        degenerate_coordinates: target
            .lambdas
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == 0.0)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// Searches `[d, d + T]` for `t` with `sup_j ‖tλ_j − β_j‖ <= 1/ω`.
///
/// A `NotFound` error only says the grid missed; it carries the best point.
pub fn find_witness(
    target: &TargetInstance,
    mode: SearchMode,
    opts: &SearchOptions,
) -> Result<WitnessResult, SearchError> {
    let slack = opts.slack.unwrap_or(0.1 / target.omega as f64);
    if !(slack > 0.0) {
        return Err(SearchError::Domain(format!("slack must be positive, got {slack}")));
    }
    let total: f64 = target.lambdas.iter().map(|l| l.abs()).sum();
    let intervals = if total == 0.0 { 1.0 } else { (target.length * total / slack).ceil().max(1.0) };
    let intervals = intervals.min((1u64 << 62) as f64) as u64;
    let grid = Grid { d: target.d, length: target.length, intervals };
    let n = grid.points();
    match mode {
        SearchMode::FirstHit => {
            let mut best = Best { value: f64::INFINITY, index: 0 };
            let mut lo = 0;
            while lo < n {
                if lo >= opts.max_points {
                    return Err(SearchError::PointsCapExceeded { needed: n, cap: opts.max_points });
                }
                let hi = (lo + CHUNK * BATCH).min(n).min(opts.max_points.max(lo + 1));
                let results = map_chunks(lo, hi, |a, b| scan_chunk_first(target, &grid, a, b));
                for (_, b) in &results {
                    best = best.better(*b);
                }
                if let Some(i) = results.iter().filter_map(|(h, _)| *h).min() {
                    return Ok(build_result(target, grid.point(i), &grid, i + 1, false));
                }
                lo = hi;
            }
            let r = build_result(target, grid.point(best.index), &grid, n, false);
            Err(SearchError::NotFound { accuracy: target.accuracy(), best: Box::new(r) })
        }
        SearchMode::BestInInterval => {
            if n > opts.max_points {
                return Err(SearchError::PointsCapExceeded { needed: n, cap: opts.max_points });
            }
            let best = map_chunks(0, n, |a, b| scan_chunk_best(target, &grid, a, b))
                .into_iter()
                .fold(Best { value: f64::INFINITY, index: 0 }, Best::better);
            let t0 = grid.point(best.index);
            let lo = (t0 - grid.step()).max(target.d);
            let hi = (t0 + grid.step()).min(target.d + target.length);
            let (t1, v1) = golden_refine(target, lo, hi, 80);
            let (t, refined) = if v1 < best.value { (t1, true) } else { (t0, false) };
            let r = build_result(target, t, &grid, n, refined);
            if r.sup_discrepancy <= target.accuracy() {
                Ok(r)
            } else {
                Err(SearchError::NotFound { accuracy: target.accuracy(), best: Box::new(r) })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiminfGrid {
    /// `t = 3, 4, …, t_max`.
    Integers,
    /// `samples` equally spaced points on `[e, t_max]`.
    Uniform { samples: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfPoint {
    pub t: f64,
    pub f: f64,
    pub running_min: f64,
    /// `t‖tλ_1‖/√(ln t)` (N = 1) or `t‖tλ_1‖‖tλ_2‖/ln t` (N = 2).
    pub product: Option<f64>,
    pub product_running_min: Option<f64>,
}

/// Running minima of `t^{1/N} / √(ln t) · sup_j ‖tλ_j − β_j‖`.
pub fn liminf_scan(lambdas: &[f64], betas: &[f64], t_max: f64, grid: LiminfGrid) -> Result<Vec<LiminfPoint>, SearchError> {
    if lambdas.is_empty() || lambdas.len() != betas.len() {
        return Err(SearchError::Domain("need as many betas as frequencies".into()));
    }
    if !(t_max > std::f64::consts::E) {
        return Err(SearchError::Domain(format!("t_max must exceed e, got {t_max}")));
    }
    let ts: Vec<f64> = match grid {
        LiminfGrid::Integers => (3..=t_max.floor() as u64).map(|t| t as f64).collect(),
        LiminfGrid::Uniform { samples } => {
            let s = samples.max(2);
            let e = std::f64::consts::E;
            (0..s).map(|i| e + (t_max - e) * i as f64 / (s - 1) as f64).collect()
        }
    };
    let n = lambdas.len();
    let mut running = f64::INFINITY;
    let mut prod_running = f64::INFINITY;
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let ln_t = t.ln();
        let sup = sup_discrepancy(t, lambdas, betas);
        let f = t.powf(1.0 / n as f64) / ln_t.sqrt() * sup;
        running = running.min(f);
        let product = match n {
            1 => Some(t * dist_to_int(t * lambdas[0]) / ln_t.sqrt()),
            2 => Some(t * dist_to_int(t * lambdas[0]) * dist_to_int(t * lambdas[1]) / ln_t),
            _ => None,
        };
        let product_running_min = product.map(|p| {
            prod_running = prod_running.min(p);
            prod_running
        });
        out.push(LiminfPoint { t, f, running_min: running, product, product_running_min });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn discrepancy_examples() {
        let (per, agg) = discrepancy(0.25, &[1.0], &[0.25]);
        assert_eq!(per, vec![0.0]);
        assert_eq!((agg.sup, agg.sum), (0.0, 0.0));
        let (per, _) = discrepancy(0.0, &[1.0, 2.5], &[0.5, 0.5]);
        assert_eq!(per, vec![0.5, 0.5]);
        let (per, agg) = discrepancy(1.0 / 3.0, &[1.0, 2.0], &[0.0, 0.0]);
        assert!((per[0] - 1.0 / 3.0).abs() < 1e-15 && (per[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((agg.sum - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn first_hit_boundary() {
        let t = TargetInstance::new(vec![1.0], vec![0.25], 0.0, 1.0, 4).unwrap();
        let r = find_witness(&t, SearchMode::FirstHit, &SearchOptions::default()).unwrap();
        assert_eq!(r.t, 0.0);
        assert_eq!(r.points_scanned, 1);
    }

    #[test]
    fn vacuous_accuracy() {
        let t = TargetInstance::new(vec![1.0], vec![0.5], 7.5, 3.0, 2).unwrap();
        let r = find_witness(&t, SearchMode::FirstHit, &SearchOptions::default()).unwrap();
        assert_eq!(r.t, 7.5);
    }

    #[test]
    fn best_refines() {
        let t = TargetInstance::new(vec![2f64.ln(), 3f64.ln()], vec![0.5, 0.5], 0.0, 200.0, 4).unwrap();
        let r = find_witness(&t, SearchMode::BestInInterval, &SearchOptions::default()).unwrap();
        let first = find_witness(&t, SearchMode::FirstHit, &SearchOptions::default()).unwrap();
        assert!(r.sup_discrepancy <= first.sup_discrepancy);
        let (_, agg) = discrepancy(r.t, &t.lambdas, &t.betas);
        assert!((agg.sup - r.sup_discrepancy).abs() < 1e-12);
    }

    #[test]
    fn not_found_carries_best() {
        let t = TargetInstance::new(vec![1.0], vec![0.5], 0.0, 0.1, 10).unwrap();
        match find_witness(&t, SearchMode::FirstHit, &SearchOptions::default()) {
            Err(SearchError::NotFound { best, .. }) => assert!(best.sup_discrepancy > 0.1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn points_cap() {
        let t = TargetInstance::new(vec![1.0], vec![0.5], 0.0, 1e6, 10).unwrap();
        let opts = SearchOptions { max_points: 1000, ..Default::default() };
        assert!(matches!(
            find_witness(&t, SearchMode::BestInInterval, &opts),
            Err(SearchError::PointsCapExceeded { cap: 1000, .. })
        ));
    }

    #[test]
    fn mismatched_betas() {
        assert!(TargetInstance::new(vec![1.0, 2.0], vec![0.5], 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn liminf_golden() {
        let trace = liminf_scan(&[PHI], &[0.0], 1e4, LiminfGrid::Integers).unwrap();
        assert!(trace.windows(2).all(|w| w[1].running_min <= w[0].running_min));
        let (mut a, mut b) = (1u64, 2u64);
        while b <= 10_000 {
            if b >= 3 {
                let p = &trace[(b - 3) as usize];
                assert_eq!(p.t, b as f64);
                assert!(p.f < 1.0, "{p:?}");
                assert!((p.f * p.t.ln().sqrt() - 1.0 / 5f64.sqrt()).abs() < 0.2);
            }
            (a, b) = (b, a + b);
        }
    }

    #[test]
    fn liminf_integer_frequency() {
        let trace = liminf_scan(&[2.0], &[0.0], 100.0, LiminfGrid::Integers).unwrap();
        assert!(trace.iter().all(|p| p.f == 0.0 && p.running_min == 0.0));
    }
}
