use std::sync::Arc;

use log::debug;

use super::GridDomain;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::RISpaceSpec;
use crate::stepfn::{rearrange_pairs, MonotoneStep};

/// One value per cell of a shared [`GridDomain`].
#[derive(Debug, Clone)]
pub struct SampledFunction<T> {
    domain: Arc<GridDomain<T>>,
    values: Vec<T>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(domain: Arc<GridDomain<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidSample(format!(
                "{} values for {} cells",
                values.len(),
                domain.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!("value at cell {i} is not finite")));
        }
        Ok(Self { domain, values })
    }

    /// Samples `f` at the cell centers.
    pub fn from_fn(domain: Arc<GridDomain<T>>, mut f: impl FnMut([T; 2]) -> T) -> Result<Self> {
        let values = domain.centers().iter().map(|&c| f(c)).collect();
        Self::new(domain, values)
    }

    pub fn constant(domain: Arc<GridDomain<T>>, c: T) -> Result<Self> {
        let values = vec![c; domain.len()];
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Arc<GridDomain<T>> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.domain.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(|v| v.abs()).collect() }
    }

    /// `f − c`.
    pub fn shift(&self, c: T) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(|&v| v - c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.domain, &other.domain) && self.values.len() != other.values.len() {
            return Err(Error::InvalidSample("functions live on different domains".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect();
        Self::new(self.domain.clone(), values)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `|∇f|` by central differences, one-sided at boundary cells.
    pub fn gradient_magnitude(&self) -> Self {
        let (g, isolated) = self.gradient_with_diagnostics();
        if isolated > 0 {
            debug!("{isolated} cell axes without neighbours; derivative set to 0 there");
        }
        g
    }

    /// Gradient magnitude plus the number of `(cell, axis)` pairs without any
    /// neighbour on that axis.
    pub fn gradient_with_diagnostics(&self) -> (Self, usize) {
        let d = &*self.domain;
        let h = d.spacing();
        let two_h = h + h;
        let mut isolated = 0;
        let values = (0..d.len())
            .map(|c| {
                let mut sq = T::zero();
                for axis in 0..d.dim() {
                    let [minus, plus] = d.neighbors(c)[axis];
                    let slope = match (minus, plus) {
                        (Some(m), Some(p)) => (self.values[p] - self.values[m]) / two_h,
                        (None, Some(p)) => (self.values[p] - self.values[c]) / h,
                        (Some(m), None) => (self.values[c] - self.values[m]) / h,
                        (None, None) => {
                            isolated += 1;
                            T::zero()
                        }
                    };
                    sq += slope * slope;
                }
                sq.sqrt()
            })
            .collect();
        (Self { domain: self.domain.clone(), values }, isolated)
    }

    fn checked_weights<'a>(&'a self, weights: Option<&'a [T]>) -> Result<&'a [T]> {
        let Some(w) = weights else {
            return Ok(self.domain.measures());
        };
        if w.len() != self.values.len() {
            return Err(Error::InvalidSample(format!(
                "{} weights for {} cells",
                w.len(),
                self.values.len()
            )));
        }
        if w.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return Err(Error::InvalidSample("weights must be positive".into()));
        }
        let total = w.iter().fold(T::zero(), |a, &x| a + x);
        if (total - T::one()).abs() > T::lit(1e-10).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::InvalidSample(format!("weights sum to {total}, not 1")));
        }
        Ok(w)
    }

    /// Decreasing rearrangement of `|f|` on `(0, 1]` with respect to the cell
    /// measures, or to `weights` when given.
    pub fn rearrange(&self, weights: Option<&[T]>) -> Result<MonotoneStep<T>> {
        let w = self.checked_weights(weights)?;
        let pairs = self.values.iter().zip(w).map(|(&v, &m)| (v.abs(), m)).collect();
        rearrange_pairs(pairs)
    }

    /// `Σ f_i w_i`, summed in cell order.
    pub fn mean_value(&self, weights: Option<&[T]>) -> Result<T> {
        let w = self.checked_weights(weights)?;
        Ok(self.values.iter().zip(w).fold(T::zero(), |acc, (&v, &m)| acc + v * m))
    }

    /// Smallest `r` with `μ{f ≤ r} ≥ 1/2`; then also `μ{f ≥ r} ≥ 1/2`.
    pub fn median_constant(&self) -> T {
        self.median_constant_weighted(None).expect("cell measures are valid weights")
    }

    pub fn median_constant_weighted(&self, weights: Option<&[T]>) -> Result<T> {
        let w = self.checked_weights(weights)?;
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].partial_cmp(&self.values[b]).unwrap());
        let target = T::lit(0.5) - T::lit(1e-12);
        let mut acc = T::zero();
        for (k, &i) in order.iter().enumerate() {
            acc += w[i];
            let last_of_value =
                order.get(k + 1).is_none_or(|&j| self.values[j] != self.values[i]);
            if last_of_value && acc >= target {
                return Ok(self.values[i]);
            }
        }
        Ok(self.values[*order.last().unwrap()])
    }

    /// The layer of `f` between `t1` and `t2`: `min(max(f − t1, 0), t2 − t1)`.
    pub fn truncate(&self, t1: T, t2: T) -> Result<Self> {
        if !(t1 >= T::zero()) || !(t1 < t2) {
            return Err(Error::InvalidParams(format!("truncation needs 0 ≤ t1 < t2, got ({t1}, {t2})")));
        }
        if let Some(i) = self.values.iter().position(|&v| v < T::zero()) {
            return Err(Error::InvalidSample(format!("negative value at cell {i}")));
        }
        let values = self
            .values
            .iter()
            .map(|&v| {
                if v > t2 {
                    t2 - t1
                } else if v > t1 {
                    v - t1
                } else {
                    T::zero()
                }
            })
            .collect();
        Ok(Self { domain: self.domain.clone(), values })
    }

    /// `‖f‖_X` with respect to the cell measures.
    pub fn norm(&self, x: &RISpaceSpec<T>) -> Result<T> {
        x.norm_atoms(&self.values, self.domain.measures())
    }

    /// `(f − c)⁺` and `(c − f)⁺`.
    pub fn split_at(&self, c: T) -> (Self, Self) {
        let zero = T::zero();
        let u = self.values.iter().map(|&v| if v >= c { v - c } else { zero }).collect();
        let w = self.values.iter().map(|&v| if v <= c { c - v } else { zero }).collect();
        (
            Self { domain: self.domain.clone(), values: u },
            Self { domain: self.domain.clone(), values: w },
        )
    }

    /// Measure of the cells where `pred` holds.
    pub fn measure_where(&self, pred: impl Fn(T) -> bool) -> T {
        self.values
            .iter()
            .zip(self.domain.measures())
            .filter(|(&v, _)| pred(v))
            .fold(T::zero(), |a, (_, &m)| a + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_domain, Shape};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn interval(n: usize) -> Arc<GridDomain<f64>> {
        Arc::new(make_domain(Shape::Interval, n).unwrap())
    }

    fn square(n: usize) -> Arc<GridDomain<f64>> {
        Arc::new(make_domain(Shape::Square, n).unwrap())
    }

    #[test]
    fn gradient_of_linear_functions() {
        let f = SampledFunction::from_fn(interval(100), |x| x[0]).unwrap();
        let g = f.gradient_magnitude();
        assert!(g.values()[1..99].iter().all(|&v| (v - 1.0).abs() < 1e-10));
        let f = SampledFunction::from_fn(square(32), |x| x[0] + 2.0 * x[1]).unwrap();
        let g = f.gradient_magnitude();
        let five = 5f64.sqrt();
        assert!(g.values().iter().all(|&v| (v - five).abs() < 1e-8));
        let c = SampledFunction::constant(square(16), 3.0).unwrap();
        assert!(c.gradient_magnitude().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn median_examples() {
        let d = interval(8);
        let f = SampledFunction::new(d.clone(), vec![-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        // Admissible interval is [−1, 1]; its left end is returned.
        assert_eq!(f.median_constant(), -1.0);
        let odd = SampledFunction::from_fn(d.clone(), |x| x[0] - 0.5).unwrap();
        let r = odd.median_constant();
        assert!(odd.measure_where(|v| v >= r) >= 0.5 && odd.measure_where(|v| v <= r) >= 0.5);
        assert_eq!(SampledFunction::constant(d, 2.5).unwrap().median_constant(), 2.5);
    }

    #[test]
    fn median_of_two_halves_is_left_endpoint() {
        let d = interval(8);
        let f = SampledFunction::new(d, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.median_constant(), 0.0);
    }

    #[test]
    fn truncation_cases() {
        let d = interval(8);
        let mut v = vec![0.5, 1.5, 3.0];
        v.extend([0.0; 5]);
        let f = SampledFunction::new(d, v).unwrap();
        let t = f.truncate(1.0, 2.0).unwrap();
        assert_eq!(&t.values()[..3], &[0.0, 0.5, 1.0]);
        assert!(f.truncate(2.0, 1.0).is_err());
        assert!(f.shift(1.0).truncate(0.5, 1.0).is_err());
        assert!(f.truncate(5.0, 6.0).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rearrange_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = Arc::new(make_domain::<f64>(Shape::Interval, 10).unwrap());
        for _ in 0..50 {
            let vals: Vec<f64> = (0..10).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let f = SampledFunction::new(d.clone(), vals.clone()).unwrap();
            let r = f.rearrange(None).unwrap();
            let mut sorted: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_eq!(r.values(), &sorted[..]);
            for (k, &b) in r.breakpoints().iter().enumerate().skip(1).take(9) {
                assert!((b - k as f64 / 10.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn weighted_rearrangement_and_mean() {
        let d = interval(10);
        let f = SampledFunction::from_fn(d.clone(), |x| if x[0] < 0.3 { 1.0 } else { 0.0 }).unwrap();
        let r = f.rearrange(None).unwrap();
        assert_eq!(r.values(), &[1.0, 0.0]);
        assert!((r.breakpoints()[1] - 0.3).abs() < 1e-15);
        assert!((f.mean_value(None).unwrap() - 0.3).abs() < 1e-15);
        let w: Vec<f64> = (0..10).map(|i| (i + 1) as f64 / 55.0).collect();
        let mean = f.mean_value(Some(&w)).unwrap();
        assert!((mean - 6.0 / 55.0).abs() < 1e-15);
        assert!(f.rearrange(Some(&[0.1; 9])).is_err());
        let mut neg = vec![0.1; 10];
        neg[0] = -0.1;
        neg[1] = 0.3;
        assert!(f.rearrange(Some(&neg)).is_err());
    }

    #[test]
    fn mean_matches_pairwise_summation() {
        fn pairwise(xs: &[f64]) -> f64 {
            if xs.len() <= 2 {
                return xs.iter().sum();
            }
            let (a, b) = xs.split_at(xs.len() / 2);
            pairwise(a) + pairwise(b)
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = square(32);
        let f = SampledFunction::from_fn(d.clone(), |_| rng.gen_range(-1.0..1.0)).unwrap();
        let terms: Vec<f64> = f.values().iter().zip(d.measures()).map(|(v, m)| v * m).collect();
        assert!((f.mean_value(None).unwrap() - pairwise(&terms)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rearrangement_ignores_cell_permutation(
            vals in proptest::collection::vec(-5.0f64..5.0, 16),
            seed in any::<u64>(),
        ) {
            let d = interval(16);
            let f = SampledFunction::new(d.clone(), vals.clone()).unwrap();
            let mut perm = vals;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let g = SampledFunction::new(d, perm).unwrap();
            prop_assert_eq!(f.rearrange(None).unwrap(), g.rearrange(None).unwrap());
        }

        #[test]
        fn median_satisfies_both_halves(vals in proptest::collection::vec(-5i32..5, 12)) {
            let d = interval(12);
            let f = SampledFunction::new(d, vals.iter().map(|&v| v as f64).collect()).unwrap();
            let r = f.median_constant();
            prop_assert!(f.measure_where(|v| v >= r) >= 0.5 - 1e-12);
            prop_assert!(f.measure_where(|v| v <= r) >= 0.5 - 1e-12);
            // No smaller admissible value exists.
            prop_assert!(f.measure_where(|v| v < r) < 0.5 - 1e-12);
        }
    }
}
