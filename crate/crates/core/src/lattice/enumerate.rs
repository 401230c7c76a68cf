//! Pruned enumeration of the box `max |u_j| <= U` modulo `u ~ -u`.
//!
//! Frequencies are reordered so the one of largest magnitude is last. Inner
//! levels keep only coefficients for which the remaining levels could still
//! bring the partial sum back under the bound; the last level starts from
//! the real minimiser of `|s + u λ|` and walks outwards while under it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{LatticeError, LinearFormInstance};

pub(crate) struct Enumerator {
    perm: Vec<usize>,
    weights: Vec<BigInt>,
    suffix_abs: Vec<BigInt>,
    bound: i64,
    cap: u64,
    visited: u64,
    current: Vec<i64>,
    original: Vec<i64>,
    limit: Option<BigInt>,
}

impl Enumerator {
    pub(crate) fn new(instance: &LinearFormInstance, bound: u64, cap: u64) -> Self {
        let n = instance.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| instance.values()[a].cmp_abs(&instance.values()[b]).then(a.cmp(&b)));
        let weights: Vec<BigInt> = perm.iter().map(|&i| instance.values()[i].raw().clone()).collect();
        let bound = i64::try_from(bound).unwrap_or(i64::MAX / 4);
        // suffix_abs[i] = U * Σ_{j > i} |w_j|
        let mut suffix_abs = vec![BigInt::zero(); n];
        for i in (0..n.saturating_sub(1)).rev() {
            suffix_abs[i] = &suffix_abs[i + 1] + weights[i + 1].abs() * bound;
        }
        Self {
            perm,
            weights,
            suffix_abs,
            bound,
            cap,
            visited: 0,
            current: vec![0; n],
            original: vec![0; n],
            limit: None,
        }
    }

    pub(crate) fn visited(&self) -> u64 {
        self.visited
    }

    /// Calls `visit(u, Σ u_j λ_j)` for every canonical `u` whose combination
    /// may lie within the running limit. The visitor returns a new limit,
    /// or `None` to keep the current one.
    pub(crate) fn run<F>(&mut self, limit: Option<BigInt>, visit: &mut F) -> Result<(), LatticeError>
    where
        F: FnMut(&[i64], &BigInt) -> Option<BigInt>,
    {
        self.limit = limit;
        if self.weights.is_empty() {
            return Ok(());
        }
        self.level(0, BigInt::zero(), true, visit)
    }

    fn tick(&mut self) -> Result<(), LatticeError> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(LatticeError::EnumerationCapExceeded { cap: self.cap });
        }
        Ok(())
    }

    fn emit<F>(&mut self, s: &BigInt, visit: &mut F)
    where
        F: FnMut(&[i64], &BigInt) -> Option<BigInt>,
    {
        for (k, &p) in self.perm.iter().enumerate() {
            self.original[p] = self.current[k];
        }
        if let Some(new) = visit(&self.original, s) {
            self.limit = Some(new);
        }
    }

    fn within(&self, value: &BigInt, slack: &BigInt) -> bool {
        match &self.limit {
            None => true,
            Some(b) => value.abs() <= b + slack,
        }
    }

    /// Integer range of `u` with `|s + u w| <= limit + slack`, clipped to `[lo, hi]`.
    fn feasible(&self, s: &BigInt, w: &BigInt, slack: &BigInt, lo: i64, hi: i64) -> (i64, i64) {
        let Some(b) = &self.limit else { return (lo, hi) };
        if w.is_zero() {
            return (lo, hi);
        }
        let r = b + slack;
        // s + u w in [-r, r]  <=>  u in [(-r - s)/w, (r - s)/w] (swapped if w < 0)
        let (a, c) = if w.is_positive() {
            ((-&r - s).div_ceil(w), (&r - s).div_floor(w))
        } else {
            ((&r - s).div_ceil(w), (-&r - s).div_floor(w))
        };
        let clamp = |x: BigInt| x.to_i64().unwrap_or(if x.is_negative() { i64::MIN } else { i64::MAX });
        (clamp(a).max(lo), clamp(c).min(hi))
    }

    fn level<F>(&mut self, i: usize, s: BigInt, leading: bool, visit: &mut F) -> Result<(), LatticeError>
    where
        F: FnMut(&[i64], &BigInt) -> Option<BigInt>,
    {
        let n = self.weights.len();
        let w = self.weights[i].clone();
        if i + 1 == n {
            let lo = if leading { 1 } else { -self.bound };
            return self.last_level(&s, &w, lo, self.bound, visit);
        }
        let slack = self.suffix_abs[i].clone();
        let lo0 = if leading { 0 } else { -self.bound };
        let (lo, hi) = self.feasible(&s, &w, &slack, lo0, self.bound);
        let mut u = lo;
        while u <= hi {
            let t = &s + &w * u;
            if self.within(&t, &slack) {
                self.tick()?;
                self.current[i] = u;
                self.level(i + 1, t, leading && u == 0, visit)?;
            }
            u += 1;
        }
        self.current[i] = 0;
        Ok(())
    }

    fn last_level<F>(&mut self, s: &BigInt, w: &BigInt, lo: i64, hi: i64, visit: &mut F) -> Result<(), LatticeError>
    where
        F: FnMut(&[i64], &BigInt) -> Option<BigInt>,
    {
        let i = self.weights.len() - 1;
        if lo > hi {
            return Ok(());
        }
        if w.is_zero() {
            for u in lo..=hi {
                self.tick()?;
                self.current[i] = u;
                self.emit(s, visit);
            }
            self.current[i] = 0;
            return Ok(());
        }
        let zero = BigInt::zero();
        // floor of the real minimiser -s / w
        let v = (-s).div_floor(w).to_i64().unwrap_or(if (-s).is_negative() == w.is_negative() {
            i64::MAX
        } else {
            i64::MIN
        });
        let mut u = v.min(hi);
        while u >= lo {
            let t = s + w * u;
            if !self.within(&t, &zero) {
                break;
            }
            self.tick()?;
            self.current[i] = u;
            self.emit(&t, visit);
            u -= 1;
        }
        let mut u = v.saturating_add(1).max(lo);
        while u <= hi {
            let t = s + w * u;
            if !self.within(&t, &zero) {
                break;
            }
            self.tick()?;
            self.current[i] = u;
            self.emit(&t, visit);
            u += 1;
        }
        self.current[i] = 0;
        Ok(())
    }
}
