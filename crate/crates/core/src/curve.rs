//! Ratio curves `t ↦ (lhs(t), rhs(t))` and the grids they are sampled on.

use serde::Serialize;

use crate::scalar::Real;

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count <= 1 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / T::from_usize_lossy(count - 1);
    let mut out: Vec<T> = (0..count).map(|k| (a + step * T::from_usize_lossy(k)).exp()).collect();
    out[0] = lo;
    out[count - 1] = hi;
    out
}

/// One sampled inequality `lhs(t) ≤ C · rhs(t)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RatioCurve<T> {
    pub t: Vec<T>,
    pub lhs: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> RatioCurve<T> {
    pub fn new() -> Self {
        Self { t: Vec::new(), lhs: Vec::new(), rhs: Vec::new() }
    }

    pub fn push(&mut self, t: T, lhs: T, rhs: T) {
        self.t.push(t);
        self.lhs.push(lhs);
        self.rhs.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `lhs/rhs` at sample `i`: 0 when both vanish, infinite when only `rhs` does.
    pub fn ratio(&self, i: usize) -> T {
        ratio(self.lhs[i], self.rhs[i])
    }

    /// `sup_t lhs/rhs`.
    pub fn sup_ratio(&self) -> T {
        (0..self.len()).fold(T::zero(), |m, i| m.max(self.ratio(i)))
    }

    /// Rows `(t, lhs, rhs, ratio)`.
    pub fn rows(&self) -> Vec<[T; 4]> {
        (0..self.len()).map(|i| [self.t[i], self.lhs[i], self.rhs[i], self.ratio(i)]).collect()
    }
}

pub(crate) fn ratio<T: Real>(lhs: T, rhs: T) -> T {
    if rhs > T::zero() {
        lhs / rhs
    } else if lhs > T::zero() {
        T::infinity()
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-4f64, 1.0, 5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[4], 1.0);
        assert!((g[2] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn ratios_handle_zeros() {
        let mut c = RatioCurve::new();
        c.push(0.1f64, 0.0, 0.0);
        c.push(0.2, 1.0, 2.0);
        assert_eq!(c.sup_ratio(), 0.5);
        c.push(0.3, 1.0, 0.0);
        assert!(c.sup_ratio().is_infinite());
    }
}
