//! Exact calculus for piecewise-constant functions on `(0, 1]`.
//!
//! A [`StepFunction`] takes the value `values[i]` on `(breakpoints[i], breakpoints[i + 1]]`.
//! A [`MonotoneStep`] is a nonnegative, nonincreasing step function; it is the
//! home of decreasing rearrangements `f*`, and carries prefix sums so that
//! `∫₀ᵗ f*`, `f**` and `f** − f*` are evaluated without quadrature error.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Piecewise-constant function on `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> StepFunction<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidStep("no pieces".into()));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidStep(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != T::zero() || *breakpoints.last().unwrap() != T::one() {
            return Err(Error::InvalidStep("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStep("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidStep("values must be finite".into()));
        }
        Ok(Self { breakpoints, values })
    }

    /// Equal-length pieces `(i/m, (i+1)/m]`.
    pub fn uniform(values: Vec<T>) -> Result<Self> {
        let m = values.len();
        let mf = T::from_usize_lossy(m);
        let breakpoints = (0..=m).map(|i| T::from_usize_lossy(i) / mf).collect();
        Self::new(breakpoints, values)
    }

    pub fn constant(c: T) -> Self {
        Self { breakpoints: vec![T::zero(), T::one()], values: vec![c] }
    }

    /// `χ_(0, m]` for `0 < m ≤ 1`.
    pub fn indicator(m: T) -> Result<Self> {
        if !(m > T::zero() && m <= T::one()) {
            return Err(Error::OutOfRange(format!("indicator measure {m} not in (0,1]")));
        }
        if m == T::one() {
            return Ok(Self::constant(T::one()));
        }
        Self::new(vec![T::zero(), m, T::one()], vec![T::one(), T::zero()])
    }

    /// Samples `f` at the midpoints of `m` equal pieces.
    pub fn from_fn(m: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let mf = T::from_usize_lossy(m);
        let half = T::lit(0.5);
        let values = (0..m).map(|i| f((T::from_usize_lossy(i) + half) / mf)).collect();
        Self::uniform(values)
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn piece_length(&self, i: usize) -> T {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    /// Index of the piece `(t_i, t_{i+1}]` containing `t ∈ (0, 1]`.
    pub fn piece_index(&self, t: T) -> usize {
        piece_of(&self.breakpoints, t)
    }

    /// Value at `t`; zero outside `(0, 1]`.
    pub fn eval(&self, t: T) -> T {
        if t <= T::zero() || t > T::one() {
            return T::zero();
        }
        self.values[self.piece_index(t)]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= T::zero())
    }

    /// `∫ₐᵇ f`, with `f` extended by zero outside `(0, 1]`.
    pub fn integral_between(&self, a: T, b: T) -> T {
        let lo = a.max(T::zero());
        let hi = b.min(T::one());
        if !(lo < hi) {
            return T::zero();
        }
        let mut acc = T::zero();
        for (i, &v) in self.values.iter().enumerate() {
            let l = self.breakpoints[i].max(lo);
            let r = self.breakpoints[i + 1].min(hi);
            if l < r {
                acc += v * (r - l);
            }
        }
        acc
    }

    pub fn integral(&self) -> T {
        self.integral_between(T::zero(), T::one())
    }

    /// `measure{|f| > τ}`.
    pub fn measure_above(&self, tau: T) -> T {
        let mut acc = T::zero();
        for (i, &v) in self.values.iter().enumerate() {
            if v.abs() > tau {
                acc += self.piece_length(i);
            }
        }
        acc
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.breakpoints.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Decreasing rearrangement of `|f|`.
    pub fn rearrange(&self) -> MonotoneStep<T> {
        rearrange_step(self)
    }
}

/// Index `i` with `bps[i] < t ≤ bps[i + 1]`, clamped to the valid range.
pub(crate) fn piece_of<T: Real>(bps: &[T], t: T) -> usize {
    let k = bps.partition_point(|&b| b < t);
    k.clamp(1, bps.len() - 1) - 1
}

/// Decreasing rearrangement of `|f|`: stable sort of `(|value|, length)` by value,
/// merging equal values and accumulating lengths into breakpoints.
pub fn rearrange_step<T: Real>(f: &StepFunction<T>) -> MonotoneStep<T> {
    let pairs: Vec<(T, T)> =
        (0..f.len()).map(|i| (f.values[i].abs(), f.piece_length(i))).collect();
    rearrange_pairs(pairs).expect("valid step function rearranges")
}

/// Builds the decreasing rearrangement of a finite list of `(value, measure)`
/// atoms whose measures sum to one. Values must be nonnegative; ties keep
/// their input order (stable sort) and are merged into a single piece.
pub(crate) fn rearrange_pairs<T: Real>(mut pairs: Vec<(T, T)>) -> Result<MonotoneStep<T>> {
    if pairs.is_empty() {
        return Err(Error::InvalidStep("nothing to rearrange".into()));
    }
    if pairs.iter().any(|&(v, w)| !v.is_finite() || v < T::zero() || !(w >= T::zero())) {
        return Err(Error::InvalidStep("atoms must be finite and nonnegative".into()));
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

    // Breakpoints are running sums over the atoms in sorted order, so they
    // agree bit for bit with a cell-by-cell accumulation.
    let mut values: Vec<T> = Vec::with_capacity(pairs.len());
    let mut ends: Vec<T> = Vec::with_capacity(pairs.len());
    let mut acc = T::zero();
    for (v, w) in pairs {
        if w == T::zero() {
            continue;
        }
        acc += w;
        match values.last() {
            Some(&last) if last == v => *ends.last_mut().unwrap() = acc,
            _ => {
                values.push(v);
                ends.push(acc);
            }
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidStep("all atoms have zero measure".into()));
    }

    let mut breakpoints = Vec::with_capacity(values.len() + 1);
    breakpoints.push(T::zero());
    let mut kept = 0;
    for &end in &ends[..ends.len() - 1] {
        if end >= T::one() {
            break;
        }
        breakpoints.push(end);
        kept += 1;
    }
    values.truncate(kept + 1);
    breakpoints.push(T::one());
    MonotoneStep::from_step(StepFunction::new(breakpoints, values)?)
}

/// Nonnegative, nonincreasing step function with cached prefix integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneStep<T> {
    step: StepFunction<T>,
    /// `prefix[i] = ∫₀^{t_i} f`.
    prefix: Vec<T>,
}

impl<T: Real> MonotoneStep<T> {
    pub fn from_step(step: StepFunction<T>) -> Result<Self> {
        if step.values.iter().any(|&v| v < T::zero()) {
            return Err(Error::InvalidStep("monotone step must be nonnegative".into()));
        }
        if step.values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidStep("monotone step must be nonincreasing".into()));
        }
        let mut prefix = Vec::with_capacity(step.breakpoints.len());
        let mut acc = T::zero();
        prefix.push(acc);
        for i in 0..step.len() {
            acc += step.values[i] * step.piece_length(i);
            prefix.push(acc);
        }
        Ok(Self { step, prefix })
    }

    pub fn constant(c: T) -> Result<Self> {
        Self::from_step(StepFunction::constant(c.abs()))
    }

    pub fn as_step(&self) -> &StepFunction<T> {
        &self.step
    }

    pub fn into_step(self) -> StepFunction<T> {
        self.step
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.step.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.step.values
    }

    pub fn len(&self) -> usize {
        self.step.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step.is_empty()
    }

    /// Prefix integrals at the breakpoints.
    pub fn prefix_sums(&self) -> &[T] {
        &self.prefix
    }

    /// `f*(t)`; zero beyond 1.
    pub fn eval(&self, t: T) -> T {
        self.step.eval(t)
    }

    /// `∫₀¹ f`.
    pub fn total(&self) -> T {
        *self.prefix.last().unwrap()
    }

    /// Exact `∫₀ᵗ f(s) ds` for `t ∈ (0, 1]`.
    pub fn prefix_integral(&self, t: T) -> Result<T> {
        if !(t > T::zero() && t <= T::one()) {
            return Err(Error::OutOfRange(format!("prefix integral at t = {t} outside (0,1]")));
        }
        Ok(self.prefix_unchecked(t))
    }

    /// `∫₀ᵗ f` for any `t ≥ 0`, with `f` extended by zero beyond 1.
    pub fn prefix_unchecked(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t >= T::one() {
            return self.total();
        }
        let i = self.step.piece_index(t);
        self.prefix[i] + self.step.values[i] * (t - self.step.breakpoints[i])
    }

    /// `f**(t) = (1/t)∫₀ᵗ f`, evaluated as `v_i + β_i / t` so that `f** ≥ f*` holds
    /// exactly in floating point.
    pub fn double_star(&self, t: T) -> T {
        if t <= T::zero() {
            return self.step.values[0];
        }
        if t > T::one() {
            return self.total() / t;
        }
        let i = self.step.piece_index(t);
        self.step.values[i] + self.osc_coefficient(i) / t
    }

    /// `f**(t) − f*(t)`, computed from the piece form `β_i / t` so that it is
    /// exactly nonnegative.
    pub fn oscillation_at(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t > T::one() {
            return self.total() / t;
        }
        let i = self.step.piece_index(t);
        self.osc_coefficient(i) / t
    }

    /// `β_i = ∫₀^{t_i} f − v_i t_i` with `t_i` the left end of piece `i`;
    /// on that piece `f** = v_i + β_i / t`.
    pub fn osc_coefficient(&self, i: usize) -> T {
        let b = self.prefix[i] - self.step.values[i] * self.step.breakpoints[i];
        b.max(T::zero())
    }

    pub fn maximal_average(&self) -> MaximalAverage<'_, T> {
        MaximalAverage { f: self }
    }

    pub fn oscillation(&self) -> Oscillation<'_, T> {
        Oscillation { f: self }
    }

    /// Lorentz-type norm of `f = f*`.
    ///
    /// `Classical`: `(∫₀¹ (t^{1/p} f*(t))^q dt/t)^{1/q}`, the supremum form for `q = ∞`.
    /// `Oscillation`: `(∫₀¹ (f** − f*)^q t^{q/p} dt/t)^{1/q}`; `p = ∞` drops the weight.
    /// Every piece integrates in closed form.
    pub fn lorentz_norm(&self, p: T, q: T, flavor: Flavor) -> Result<T> {
        check_lorentz_indices(p, q, flavor)?;
        let bps = self.breakpoints();
        let vals = self.values();
        let inv_p = if p.is_infinite() { T::zero() } else { p.recip() };
        match flavor {
            Flavor::Classical => {
                if q.is_infinite() {
                    if p.is_infinite() {
                        return Ok(vals[0]);
                    }
                    let mut best = T::zero();
                    for i in 0..vals.len() {
                        best = best.max(vals[i] * bps[i + 1].pow_real(inv_p));
                    }
                    return Ok(best);
                }
                let e = q * inv_p;
                let mut acc = T::zero();
                for i in 0..vals.len() {
                    if vals[i] == T::zero() {
                        continue;
                    }
                    acc += vals[i].powf(q) * pow_diff(bps[i], bps[i + 1], e) / e;
                }
                Ok(acc.powf(q.recip()))
            }
            Flavor::Oscillation => {
                // On piece i the oscillation is β_i / t and β_0 = 0.
                if q.is_infinite() {
                    let e = inv_p - T::one();
                    let mut best = T::zero();
                    for i in 1..vals.len() {
                        best = best.max(self.osc_coefficient(i) * bps[i].pow_real(e));
                    }
                    return Ok(best);
                }
                let e1 = q * (inv_p - T::one());
                let mut acc = T::zero();
                for i in 1..vals.len() {
                    let b = self.osc_coefficient(i);
                    if b == T::zero() {
                        continue;
                    }
                    let piece = if e1 == T::zero() {
                        (bps[i + 1] / bps[i]).ln()
                    } else {
                        pow_diff(bps[i], bps[i + 1], e1) / e1
                    };
                    acc += b.powf(q) * piece;
                }
                Ok(acc.powf(q.recip()))
            }
        }
    }

    /// Rows `(t, f*(t), f**(t), f**(t) − f*(t))` on the given grid.
    pub fn table(&self, grid: &[T]) -> Vec<[T; 4]> {
        grid.iter()
            .map(|&t| [t, self.eval(t), self.double_star(t), self.oscillation_at(t)])
            .collect()
    }
}

/// `b^e − a^e` for `0 ≤ a < b`, accurate when `a` and `b` are close.
pub(crate) fn pow_diff<T: Real>(a: T, b: T, e: T) -> T {
    if a == T::zero() {
        return b.pow_real(e);
    }
    a.pow_real(e) * (e * ((b - a) / a).ln_1p()).exp_m1()
}

/// Which quantity a Lorentz norm weighs: `f*` itself or `f** − f*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Classical,
    Oscillation,
}

pub(crate) fn check_lorentz_indices<T: Real>(p: T, q: T, flavor: Flavor) -> Result<()> {
    if p.is_nan() || q.is_nan() || p < T::one() || q < T::one() {
        return Err(Error::NonNormable(format!("indices (p, q) = ({p}, {q}) must lie in [1, ∞]")));
    }
    if flavor == Flavor::Classical && p.is_infinite() && q.is_finite() {
        return Err(Error::NonNormable(format!(
            "classical L^(∞,{q}) is trivial; use the oscillation flavor for p = ∞"
        )));
    }
    Ok(())
}

/// `t ↦ f**(t)`; on piece `i` it has the form `α_i + β_i / t`.
#[derive(Debug, Clone, Copy)]
pub struct MaximalAverage<'a, T> {
    f: &'a MonotoneStep<T>,
}

impl<T: Real> MaximalAverage<'_, T> {
    pub fn eval(&self, t: T) -> T {
        self.f.double_star(t)
    }

    /// `(left, right, α, β)` per piece.
    pub fn pieces(&self) -> Vec<(T, T, T, T)> {
        let bps = self.f.breakpoints();
        (0..self.f.len())
            .map(|i| (bps[i], bps[i + 1], self.f.values()[i], self.f.osc_coefficient(i)))
            .collect()
    }
}

/// `t ↦ f**(t) − f*(t)`; on piece `i` it equals `β_i / t`.
#[derive(Debug, Clone, Copy)]
pub struct Oscillation<'a, T> {
    f: &'a MonotoneStep<T>,
}

impl<T: Real> Oscillation<'_, T> {
    pub fn eval(&self, t: T) -> T {
        self.f.oscillation_at(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_monotone(rng: &mut ChaCha8Rng, m: usize) -> MonotoneStep<f64> {
        let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(0.0..1.0)).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut bps = vec![0.0];
        bps.extend(cuts);
        bps.push(1.0);
        let mut vals: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..5.0)).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        MonotoneStep::from_step(StepFunction::new(bps, vals).unwrap()).unwrap()
    }

    /// Midpoint Riemann sum over a grid refined inside every piece, so the
    /// grid never straddles a jump.
    fn riemann_prefix(f: &MonotoneStep<f64>, t: f64, points: usize) -> f64 {
        let bps = f.breakpoints();
        let per_piece = (points / f.len()).max(1);
        let mut acc = 0.0;
        for i in 0..f.len() {
            let a = bps[i];
            let b = bps[i + 1].min(t);
            if a >= b {
                break;
            }
            let h = (b - a) / per_piece as f64;
            for k in 0..per_piece {
                acc += f.eval(a + (k as f64 + 0.5) * h) * h;
            }
        }
        acc
    }

    #[test]
    fn rearrange_sorts_values() {
        let f = StepFunction::uniform(vec![1.0, 3.0, 2.0]).unwrap();
        let r: MonotoneStep<f64> = f.rearrange();
        assert_eq!(r.values(), &[3.0, 2.0, 1.0]);
        for (a, b) in r.breakpoints().iter().zip([0.0f64, 1.0 / 3.0, 2.0 / 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rearrange_constant_and_indicator() {
        let r = StepFunction::constant(-2.5f64).rearrange();
        assert_eq!(r.values(), &[2.5]);
        let ind = StepFunction::new(vec![0.0, 0.25, 1.0], vec![1.0, 0.0]).unwrap();
        let r = ind.rearrange();
        assert_eq!(r.values(), &[1.0, 0.0]);
        assert_eq!(r.breakpoints(), &[0.0, 0.25, 1.0]);
    }

    #[test]
    fn rejects_malformed_steps() {
        assert!(StepFunction::new(vec![0.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(StepFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
        let s = StepFunction::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(MonotoneStep::from_step(s).is_err());
    }

    #[test]
    fn prefix_integral_examples() {
        let ind = StepFunction::indicator(0.25).unwrap().rearrange();
        assert_eq!(ind.prefix_integral(0.5).unwrap(), 0.25);
        let c = MonotoneStep::constant(3.0f64).unwrap();
        assert!((c.prefix_integral(0.7).unwrap() - 2.1).abs() < 1e-15);
        assert!(c.prefix_integral(0.0).is_err());
        assert!(c.prefix_integral(1.5).is_err());
    }

    #[test]
    fn prefix_integral_matches_riemann_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_monotone(&mut rng, 64);
        let oracle = riemann_prefix(&f, 0.37, 1_000_000);
        assert!((f.prefix_integral(0.37).unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn maximal_average_examples() {
        let ind = StepFunction::indicator(0.25).unwrap().rearrange();
        let ma = ind.maximal_average();
        assert_eq!(ma.eval(0.1), 1.0);
        assert_eq!(ma.eval(0.5), 0.5);
        let c = MonotoneStep::constant(1.5).unwrap();
        assert_eq!(c.double_star(0.3), 1.5);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_monotone(&mut rng, 32);
        for &t in &[0.013, 0.2, 0.5, 0.93] {
            let oracle = riemann_prefix(&f, t, 1_000_000) / t;
            assert!((ma_eval(&f, t) - oracle).abs() < 1e-9);
        }
    }

    fn ma_eval(f: &MonotoneStep<f64>, t: f64) -> f64 {
        f.maximal_average().eval(t)
    }

    #[test]
    fn oscillation_examples() {
        let c = MonotoneStep::constant(4.0).unwrap();
        assert_eq!(c.oscillation().eval(0.3), 0.0);
        let ind = StepFunction::indicator(0.25f64).unwrap().rearrange();
        assert!((ind.oscillation_at(0.8) - 0.25 / 0.8).abs() < 1e-15);
        assert_eq!(ind.oscillation_at(0.2), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_monotone(&mut rng, 50);
        for k in 1..=1000 {
            let t = k as f64 / 1000.0;
            assert!(f.oscillation_at(t) >= 0.0);
            assert!(f.double_star(t) >= f.eval(t));
        }
    }

    #[test]
    fn lorentz_indicator_classical_p1() {
        let m: f64 = 0.3;
        let ind = StepFunction::indicator(m).unwrap().rearrange();
        for &p in &[1.0, 1.5, 2.0, 4.0] {
            let n = ind.lorentz_norm(p, 1.0, Flavor::Classical).unwrap();
            assert!((n - p * m.powf(1.0 / p)).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn lorentz_constant_oscillation_is_zero() {
        let c = MonotoneStep::constant(2.0).unwrap();
        for &(p, q) in &[(1.0, 1.0), (2.0, 3.0), (f64::INFINITY, 2.0), (2.0, f64::INFINITY)] {
            assert_eq!(c.lorentz_norm(p, q, Flavor::Oscillation).unwrap(), 0.0);
        }
    }

    #[test]
    fn lorentz_rejects_trivial_classical_infinity() {
        let c = MonotoneStep::constant(1.0).unwrap();
        assert!(c.lorentz_norm(f64::INFINITY, 2.0, Flavor::Classical).is_err());
        assert!(c.lorentz_norm(0.5, 2.0, Flavor::Classical).is_err());
        assert_eq!(c.lorentz_norm(f64::INFINITY, f64::INFINITY, Flavor::Classical).unwrap(), 1.0);
    }

    /// Dense midpoint quadrature per piece for the (2,2) norms; the running
    /// mass is accumulated by the oracle itself.
    #[test]
    fn lorentz_22_matches_dense_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = random_monotone(&mut rng, 40);
        let bps = f.breakpoints().to_vec();
        let vals = f.values().to_vec();
        let per = 25_000;
        let (mut classical, mut osc, mut mass) = (0.0, 0.0, 0.0);
        for i in 0..vals.len() {
            let h = (bps[i + 1] - bps[i]) / per as f64;
            for k in 0..per {
                let t = bps[i] + (k as f64 + 0.5) * h;
                classical += vals[i] * vals[i] * h;
                let o = (mass + vals[i] * (t - bps[i])) / t - vals[i];
                osc += o * o * h;
            }
            mass += vals[i] * (bps[i + 1] - bps[i]);
        }
        let c = f.lorentz_norm(2.0, 2.0, Flavor::Classical).unwrap();
        let o = f.lorentz_norm(2.0, 2.0, Flavor::Oscillation).unwrap();
        assert!((c - classical.sqrt()).abs() / c < 1e-6);
        assert!((o - osc.sqrt()).abs() / o < 1e-6);
    }

    #[test]
    fn lebesgue_is_lorentz_pp() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_monotone(&mut rng, 20);
        let l3: f64 = (0..f.len())
            .map(|i| f.values()[i].powi(3) * f.as_step().piece_length(i))
            .sum::<f64>()
            .powf(1.0 / 3.0);
        assert!((f.lorentz_norm(3.0, 3.0, Flavor::Classical).unwrap() - l3).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let f = StepFunction::<f32>::uniform(vec![0.5, -2.0, 1.0, 0.0]).unwrap();
        let r = f.rearrange();
        assert_eq!(r.values(), &[2.0, 1.0, 0.5, 0.0]);
        assert!((r.total() - 0.875).abs() < 1e-6);
    }

    fn arb_step() -> impl Strategy<Value = StepFunction<f64>> {
        (1usize..40).prop_flat_map(|m| {
            (
                proptest::collection::vec(0.01f64..1.0, m),
                proptest::collection::vec(-10.0f64..10.0, m),
            )
                .prop_map(|(lens, vals)| {
                    let total: f64 = lens.iter().sum();
                    let mut bps = vec![0.0];
                    let mut acc = 0.0;
                    for l in &lens[..lens.len() - 1] {
                        acc += l / total;
                        bps.push(acc);
                    }
                    bps.push(1.0);
                    StepFunction::new(bps, vals).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn rearrangement_is_equimeasurable(f in arb_step(), tau in 0.0f64..10.0) {
            let r = f.rearrange();
            prop_assert!((f.measure_above(tau) - r.as_step().measure_above(tau)).abs() < 1e-12);
            let mass: f64 = (0..f.len()).map(|i| f.values()[i].abs() * f.piece_length(i)).sum();
            prop_assert!((mass - r.total()).abs() < 1e-12);
        }

        #[test]
        fn double_star_dominates_and_decreases(f in arb_step()) {
            let r = f.rearrange();
            let mut prev = f64::INFINITY;
            for k in 1..=200 {
                let t = k as f64 / 200.0;
                let ds = r.double_star(t);
                prop_assert!(ds + 1e-12 >= r.eval(t));
                prop_assert!(ds <= prev + 1e-12);
                prev = ds;
            }
        }

        #[test]
        fn rearrangement_is_identity_on_monotone(f in arb_step()) {
            let r = f.rearrange();
            let again = r.as_step().rearrange();
            prop_assert_eq!(r.values(), again.values());
        }
    }
}
