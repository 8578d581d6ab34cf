//! Piecewise power sums on `(0, 1]`.
//!
//! Hardy-operator outputs, maximal averages and the weighted oscillations
//! `s^γ (f** − f*)(s)` are not step functions, but on every piece of the
//! underlying partition they are finite sums `Σ c_k t^{e_k}`. A [`Profile`]
//! stores exactly that, so integrals over pieces stay in closed form and only
//! genuinely non-polynomial integrands (powers of sums) go through quadrature.

use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::Real;
use crate::stepfn::{piece_of, pow_diff, MonotoneStep, StepFunction};

/// `Σ coef · t^exp` on one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSum<T> {
    terms: Vec<(T, T)>,
}

impl<T: Real> PowerSum<T> {
    pub fn new(terms: Vec<(T, T)>) -> Self {
        let terms = terms.into_iter().filter(|&(c, _)| c != T::zero()).collect();
        Self { terms }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![(c, T::zero())])
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// `(coefficient, exponent)` pairs with nonzero coefficients.
    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    pub fn eval(&self, t: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, &(c, e)| acc + c * t.pow_real(e))
    }

    /// Multiplies by `t^e`.
    pub fn mul_power(&self, e: T) -> Self {
        Self { terms: self.terms.iter().map(|&(c, x)| (c, x + e)).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.terms.iter().map(|&(c, x)| (c * s, x)).collect())
    }

    /// `∫ₐᵇ` of the sum for `0 ≤ a < b`; infinite when a term is not integrable at 0.
    pub fn integral(&self, a: T, b: T) -> T {
        let mut acc = T::zero();
        for &(c, e) in &self.terms {
            let e1 = e + T::one();
            let part = if a == T::zero() && e1 <= T::zero() {
                T::infinity() * c.signum()
            } else if e1 == T::zero() {
                c * (b / a).ln()
            } else {
                c * pow_diff(a, b, e1) / e1
            };
            acc += part;
        }
        acc
    }

    /// Behaviour of `t^w · |sum|` as `t → 0+`, from the dominant term.
    fn limit_at_zero(&self, w: T) -> T {
        let Some(e) = self.terms.iter().map(|t| t.1).reduce(|a, b| a.min(b)) else {
            return T::zero();
        };
        let lead: T = self.terms.iter().filter(|t| t.1 == e).fold(T::zero(), |s, t| s + t.0);
        let x = e + w;
        if lead == T::zero() {
            T::zero()
        } else if x < T::zero() {
            T::infinity()
        } else if x == T::zero() {
            lead.abs()
        } else {
            T::zero()
        }
    }
}

/// Piecewise power sum on a partition of `(0, 1]`; zero beyond 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    breakpoints: Vec<T>,
    pieces: Vec<PowerSum<T>>,
    /// `cumulative[i] = ∫₀^{t_i}`.
    cumulative: Vec<T>,
    nonincreasing: bool,
    nonnegative: bool,
}

impl<T: Real> Profile<T> {
    pub fn new(breakpoints: Vec<T>, pieces: Vec<PowerSum<T>>) -> Result<Self> {
        let mut p = Self::assemble(breakpoints, pieces, false)?;
        p.nonincreasing = p.detect_nonincreasing();
        Ok(p)
    }

    /// For constructions whose monotonicity is known analytically.
    pub(crate) fn new_nonincreasing(breakpoints: Vec<T>, pieces: Vec<PowerSum<T>>) -> Result<Self> {
        let p = Self::assemble(breakpoints, pieces, true)?;
        debug_assert!(p.detect_nonincreasing(), "profile declared nonincreasing is not");
        Ok(p)
    }

    fn assemble(breakpoints: Vec<T>, pieces: Vec<PowerSum<T>>, nonincreasing: bool) -> Result<Self> {
        // Reuse the step-function partition checks.
        StepFunction::new(breakpoints.clone(), vec![T::zero(); pieces.len()])?;
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        let mut acc = T::zero();
        cumulative.push(acc);
        for (i, piece) in pieces.iter().enumerate() {
            acc += piece.integral(breakpoints[i], breakpoints[i + 1]);
            cumulative.push(acc);
        }
        let mut p = Self { breakpoints, pieces, cumulative, nonincreasing, nonnegative: true };
        p.nonnegative = p.sample_points().into_iter().all(|(i, t)| p.pieces[i].eval(t) >= T::zero());
        Ok(p)
    }

    pub fn from_monotone(f: &MonotoneStep<T>) -> Self {
        let pieces = f.values().iter().map(|&v| PowerSum::constant(v)).collect();
        Self::assemble(f.breakpoints().to_vec(), pieces, true).expect("valid partition")
    }

    pub fn from_step(f: &StepFunction<T>) -> Self {
        let pieces = f.values().iter().map(|&v| PowerSum::constant(v)).collect();
        let mut p = Self::assemble(f.breakpoints().to_vec(), pieces, false).expect("valid partition");
        p.nonincreasing = f.values().windows(2).all(|w| w[1] <= w[0]);
        p
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[PowerSum<T>] {
        &self.pieces
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.nonincreasing
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn eval(&self, t: T) -> T {
        if t <= T::zero() || t > T::one() {
            return T::zero();
        }
        let i = piece_of(&self.breakpoints, t);
        self.pieces[i].eval(t)
    }

    /// `∫₀ᵗ`, with the function extended by zero beyond 1.
    pub fn prefix(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t >= T::one() {
            return *self.cumulative.last().unwrap();
        }
        let i = piece_of(&self.breakpoints, t);
        self.cumulative[i] + self.pieces[i].integral(self.breakpoints[i], t)
    }

    pub fn total(&self) -> T {
        *self.cumulative.last().unwrap()
    }

    /// `(1/t) ∫₀ᵗ − g(t)`.
    pub fn oscillation_at(&self, t: T) -> T {
        self.prefix(t) / t - self.eval(t)
    }

    pub fn mul_power(&self, e: T) -> Result<Self> {
        let pieces = self.pieces.iter().map(|p| p.mul_power(e)).collect();
        Self::new(self.breakpoints.clone(), pieces)
    }

    /// `∫₀¹ |g(t)|^q t^w dt`.
    pub fn abs_pow_integral(&self, q: T, w: T, rel_tol: T) -> T {
        let f = |i: usize, t: T| self.pieces[i].eval(t).abs().powf(q) * t.pow_real(w);
        let exact = |i: usize| match self.pieces[i].terms() {
            [] => Some(T::zero()),
            [(c, e)] => Some(
                PowerSum::new(vec![(c.abs().powf(q), *e * q + w)])
                    .integral(self.breakpoints[i], self.breakpoints[i + 1]),
            ),
            _ => None,
        };
        self.integrate_pieces(f, exact, rel_tol)
    }

    /// Sums `∫` of `f(i, ·)` over every piece `i`, using `exact(i)` when it
    /// has a closed form. The quadrature gets an absolute floor tied to a
    /// coarse estimate of the whole integral, so pieces where the integrand is
    /// rounding noise around zero terminate.
    fn integrate_pieces(
        &self,
        f: impl Fn(usize, T) -> T,
        exact: impl Fn(usize) -> Option<T>,
        rel_tol: T,
    ) -> T {
        let closed: Vec<Option<T>> = (0..self.pieces.len()).map(&exact).collect();
        let mut scale = T::zero();
        for (i, t) in self.sample_points() {
            if closed[i].is_none() {
                let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
                let v = f(i, t).abs();
                if v.is_finite() {
                    scale += v * (b - a) / T::lit(9.0);
                }
            }
        }
        scale += closed.iter().flatten().fold(T::zero(), |s, v| s + v.abs());
        let floor = scale * rel_tol * T::lit(1e-3);
        let mut acc = T::zero();
        for (i, c) in closed.into_iter().enumerate() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            acc += match c {
                Some(v) => v,
                None if a == T::zero() => {
                    quad::integrate_from_zero_with_floor(|t| f(i, t), b, rel_tol, floor)
                }
                None => quad::integrate_with_floor(|t| f(i, t), a, b, rel_tol, floor),
            };
        }
        acc
    }

    /// `sup_t t^w |g(t)|`, with left endpoints taken as one-sided limits.
    pub fn sup_weighted(&self, w: T) -> T {
        let mut best = T::zero();
        for (i, piece) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let f = |t: T| t.pow_real(w) * piece.eval(t).abs();
            let local = if a == T::zero() {
                let lim = piece.limit_at_zero(w);
                if lim.is_infinite() {
                    return T::infinity();
                }
                quad::maximize(f, b * T::lit(1e-12), b).max(lim)
            } else {
                quad::maximize(f, a, b)
            };
            best = best.max(local);
        }
        best
    }

    /// Oscillation-flavor integral `∫₀¹ (g** − g)^q t^w dt`; only meaningful when
    /// `g` is nonincreasing.
    pub fn oscillation_pow_integral(&self, q: T, w: T, rel_tol: T) -> T {
        let f = |i: usize, t: T| self.piece_oscillation(i, t).max(T::zero()).powf(q) * t.pow_real(w);
        self.integrate_pieces(f, |_| None, rel_tol)
    }

    /// `sup_t t^w (g** − g)(t)`.
    pub fn oscillation_sup_weighted(&self, w: T) -> T {
        let mut best = T::zero();
        for i in 0..self.pieces.len() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let lo = if a == T::zero() { b * T::lit(1e-12) } else { a };
            let f = |t: T| t.pow_real(w) * self.piece_oscillation(i, t).max(T::zero());
            best = best.max(quad::maximize(f, lo, b));
        }
        best
    }

    fn piece_oscillation(&self, i: usize, t: T) -> T {
        let mass = self.cumulative[i] + self.pieces[i].integral(self.breakpoints[i], t);
        mass / t - self.pieces[i].eval(t)
    }

    /// Cell-average discretization onto at least `min_pieces` pieces.
    pub fn discretize(&self, min_pieces: usize) -> Result<StepFunction<T>> {
        let per = min_pieces.div_ceil(self.pieces.len()).max(1);
        let perf = T::from_usize_lossy(per);
        let mut bps = Vec::with_capacity(self.pieces.len() * per + 1);
        let mut vals = Vec::with_capacity(self.pieces.len() * per);
        bps.push(T::zero());
        for (i, piece) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let h = (b - a) / perf;
            let mut left = a;
            for k in 0..per {
                let right = if k + 1 == per { b } else { a + h * T::from_usize_lossy(k + 1) };
                if !(right > left) {
                    continue;
                }
                let avg = piece.integral(left, right) / (right - left);
                if !avg.is_finite() {
                    return Err(Error::Degenerate("profile is not integrable near 0".into()));
                }
                vals.push(avg);
                bps.push(right);
                left = right;
            }
        }
        StepFunction::new(bps, vals)
    }

    /// Decreasing rearrangement of `|g|`, via [`Profile::discretize`] when `g` is not
    /// already nonincreasing and nonnegative.
    pub fn rearranged(&self, min_pieces: usize) -> Result<MonotoneStep<T>> {
        Ok(self.discretize(min_pieces)?.rearrange())
    }

    fn sample_points(&self) -> Vec<(usize, T)> {
        let mut out = Vec::with_capacity(self.pieces.len() * 9);
        let eight = T::lit(8.0);
        for i in 0..self.pieces.len() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let start = if a == T::zero() { 1 } else { 0 };
            for k in start..=8 {
                out.push((i, a + (b - a) * T::from_usize_lossy(k) / eight));
            }
        }
        out
    }

    fn detect_nonincreasing(&self) -> bool {
        let mut prev = T::infinity();
        for (i, t) in self.sample_points() {
            let v = self.pieces[i].eval(t);
            let slack = T::lit(1e-10) * v.abs().max(T::one());
            if v > prev + slack {
                return false;
            }
            prev = v;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sum_integrals() {
        let p = PowerSum::new(vec![(2.0f64, 1.0), (3.0, 0.0)]);
        assert!((p.integral(0.0, 1.0) - 4.0).abs() < 1e-15);
        let inv = PowerSum::new(vec![(1.0f64, -1.0)]);
        assert!((inv.integral(0.5, 1.0) - 2f64.ln()).abs() < 1e-15);
        assert!(inv.integral(0.0, 1.0).is_infinite());
    }

    #[test]
    fn prefix_matches_quadrature() {
        let bps = vec![0.0, 0.3, 1.0];
        let pieces = vec![
            PowerSum::new(vec![(1.0, 0.0), (-0.5, 0.5)]),
            PowerSum::new(vec![(0.2, -1.0), (0.1, 0.0)]),
        ];
        let g = Profile::new(bps, pieces).unwrap();
        for &t in &[0.1, 0.3, 0.7, 1.0] {
            let q = quad::integrate_from_zero(|s: f64| g.eval(s), t, 1e-12);
            assert!((g.prefix(t) - q).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn monotone_detection() {
        let dec = Profile::new(vec![0.0, 1.0], vec![PowerSum::new(vec![(1.0f64, -0.5)])]).unwrap();
        assert!(dec.is_nonincreasing());
        let inc = Profile::new(vec![0.0, 1.0], vec![PowerSum::new(vec![(1.0f64, 1.0)])]).unwrap();
        assert!(!inc.is_nonincreasing());
    }

    #[test]
    fn sup_of_singular_profile_is_infinite() {
        let g = Profile::new(vec![0.0, 1.0], vec![PowerSum::new(vec![(1.0f64, -0.5)])]).unwrap();
        assert!(g.sup_weighted(0.0).is_infinite());
        assert!((g.sup_weighted(0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discretization_preserves_mass() {
        let g = Profile::new(vec![0.0, 0.5, 1.0], vec![
            PowerSum::new(vec![(1.0f64, -0.5)]),
            PowerSum::new(vec![(2.0, 1.0)]),
        ])
        .unwrap();
        let s = g.discretize(1000).unwrap();
        assert!((s.integral() - g.total()).abs() < 1e-12);
    }
}
