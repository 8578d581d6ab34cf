//! One-dimensional Hardy operators and the power-weight boundedness criterion.
//!
//! `H_α g(t) = ∫_t^1 s^α g(s) ds/s` maps step functions to piecewise power
//! sums, so everything here is evaluated in closed form.

use std::sync::Arc;

use serde::Serialize;

use crate::domain::{GridDomain, SampledFunction};
use crate::error::{Error, Result};
use crate::profile::{PowerSum, Profile};
use crate::scalar::Real;
use crate::stepfn::{pow_diff, StepFunction};

/// Exponents of the Hardy operator `Hg(t) = ∫_t^1 u^{−(n−1)s/n} g(u) du`
/// acting `L^t → L^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyParams<T> {
    /// `1 − (n−1)s/n`, so that `H = H_α`.
    pub alpha: T,
    pub n: usize,
    pub s: T,
    pub t_exp: T,
    pub r_exp: T,
}

impl<T: Real> HardyParams<T> {
    /// Requires `n ≥ 2`, `s ≥ 1`, `t > 1` and `s > (t − 1)/(n − 1)`; the target
    /// exponent is `r = nt / ((n−1)s + 1 − t)`.
    pub fn new(n: usize, s: T, t: T) -> Result<Self> {
        let (nf, n1) = Self::check_common(n, s, t)?;
        let denom = n1 * s + T::one() - t;
        if !(denom > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "need s > (t − 1)/(n − 1) for r = nt/((n−1)s + 1 − t); got n={n}, s={s}, t={t}"
            )));
        }
        Self::with_target_exponent(n, s, t, nf * t / denom).inspect(|p| {
            debug_assert!(p.r_exp > t);
        })
    }

    /// Same operator with an explicitly chosen target exponent `r > 1`.
    pub fn with_target_exponent(n: usize, s: T, t: T, r: T) -> Result<Self> {
        let (nf, n1) = Self::check_common(n, s, t)?;
        if !(r > T::one()) {
            return Err(Error::InvalidParams(format!("target exponent r = {r} must exceed 1")));
        }
        Ok(Self { alpha: T::one() - n1 * s / nf, n, s, t_exp: t, r_exp: r })
    }

    fn check_common(n: usize, s: T, t: T) -> Result<(T, T)> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("dimension n = {n} must be at least 2")));
        }
        if !(s >= T::one()) || !s.is_finite() {
            return Err(Error::InvalidParams(format!("John exponent s = {s} must be ≥ 1")));
        }
        if !(t > T::one()) || !t.is_finite() {
            return Err(Error::InvalidParams(format!("source exponent t = {t} must exceed 1")));
        }
        let nf = T::from_usize_lossy(n);
        Ok((nf, nf - T::one()))
    }

    /// `κ = (n−1)st / (n(t−1))`, the power in the inner integral `∫_a^1 u^{−κ}`.
    pub fn kappa(&self) -> T {
        let nf = T::from_usize_lossy(self.n);
        (nf - T::one()) * self.s * self.t_exp / (nf * (self.t_exp - T::one()))
    }

    /// `(n−1)(1−t)(s−1)/(nt)`: the growth exponent of the criterion near 0.
    pub fn predicted_exponent(&self) -> T {
        let nf = T::from_usize_lossy(self.n);
        (nf - T::one()) * (T::one() - self.t_exp) * (self.s - T::one()) / (nf * self.t_exp)
    }

    /// `log` of `a^{1/r} (∫_a^1 u^{−κ} du)^{(t−1)/t}`, evaluated without overflow.
    pub fn log_criterion(&self, a: T) -> T {
        let ln_a = a.ln();
        let e = T::one() - self.kappa();
        let ln_inner = if a >= T::one() {
            T::neg_infinity()
        } else if e.abs() < T::epsilon() {
            (-ln_a).ln()
        } else if e < T::zero() {
            // (a^e − 1)/(−e) = a^e (1 − a^{−e}) / (−e)
            e * ln_a + (-(-e * ln_a).exp_m1()).ln() - (-e).ln()
        } else {
            (-(e * ln_a).exp_m1()).ln() - e.ln()
        };
        ln_a / self.r_exp + ln_inner * (self.t_exp - T::one()) / self.t_exp
    }

    pub fn criterion_value(&self, a: T) -> T {
        self.log_criterion(a).exp()
    }
}

/// `H_α g(t) = ∫_t^1 s^{α−1} g(s) ds` as an exact piecewise power sum.
pub fn hardy_apply<T: Real>(g: &StepFunction<T>, alpha: T) -> Result<Profile<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!("Hardy exponent α = {alpha} must be positive")));
    }
    if !g.is_nonnegative() {
        return Err(Error::InvalidStep("Hardy operator input must be nonnegative".into()));
    }
    let bps = g.breakpoints();
    let vals = g.values();
    let m = vals.len();
    // tail[i] = ∫_{t_i}^1 s^{α−1} g.
    let mut tail = vec![T::zero(); m + 1];
    for i in (0..m).rev() {
        tail[i] = tail[i + 1] + vals[i] * pow_diff(bps[i], bps[i + 1], alpha) / alpha;
    }
    let pieces = (0..m)
        .map(|i| {
            let c = vals[i] / alpha;
            PowerSum::new(vec![(tail[i + 1] + c * bps[i + 1].powf(alpha), T::zero()), (-c, alpha)])
        })
        .collect();
    Profile::new_nonincreasing(bps.to_vec(), pieces)
}

/// `T_α g(t) = t^{−α−1} ∫₀ᵗ s^α |g(s)| ds`, the averaging operator whose norm
/// on r.i. spaces is at most `1/α`.
pub fn weighted_average<T: Real>(g: &StepFunction<T>, alpha: T) -> Result<Profile<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!("exponent α = {alpha} must be positive")));
    }
    let bps = g.breakpoints();
    let a1 = alpha + T::one();
    let mut head = T::zero();
    let mut pieces = Vec::with_capacity(g.len());
    for (i, &v) in g.values().iter().enumerate() {
        let v = v.abs();
        let left = bps[i];
        let lead = head - v * left.powf(a1) / a1;
        pieces.push(PowerSum::new(vec![(lead, -a1), (v / a1, T::zero())]));
        head += v * pow_diff(left, bps[i + 1], a1) / a1;
    }
    Profile::new(bps.to_vec(), pieces)
}

/// `∫₀ᵗ s^α g(s) ds`, the right side of the Fubini identity for `H_α`.
pub fn weighted_prefix<T: Real>(g: &StepFunction<T>, alpha: T, t: T) -> T {
    let bps = g.breakpoints();
    let a1 = alpha + T::one();
    let mut acc = T::zero();
    for (i, &v) in g.values().iter().enumerate() {
        if bps[i] >= t {
            break;
        }
        acc += v * pow_diff(bps[i], bps[i + 1].min(t), a1) / a1;
    }
    acc
}

/// Largest deviation from `h** − h* = (1/t) ∫₀ᵗ s^α g` over `t_grid`, with
/// `h = H_α g`.
pub fn fubini_residual<T: Real>(g: &StepFunction<T>, alpha: T, t_grid: &[T]) -> Result<T> {
    let h = hardy_apply(g, alpha)?;
    Ok(t_grid.iter().fold(T::zero(), |worst, &t| {
        let lhs = h.oscillation_at(t);
        let rhs = weighted_prefix(g, alpha, t) / t;
        worst.max((lhs - rhs).abs())
    }))
}

/// Geometric grid `1, ratio, ratio², …` down to `lo` (inclusive bound).
pub fn geometric_grid<T: Real>(lo: T, ratio: T) -> Vec<T> {
    let mut out = Vec::new();
    let ln_r = ratio.ln();
    let mut k = 0;
    loop {
        let a = (ln_r * T::from_usize_lossy(k)).exp();
        if a < lo * (T::one() - T::lit(1e-9)) {
            break;
        }
        out.push(a);
        k += 1;
    }
    out
}

/// The grid used by default: ratio 0.8 from 1 down to `1e-40`. The deep floor
/// lets exponents as small as `−1/24` show a tenfold rise above the value at
/// `a = 10⁻²`.
pub fn default_a_grid<T: Real>() -> Vec<T> {
    geometric_grid(T::lit(1e-40), T::lit(0.8))
}

/// Result of scanning the power-weight criterion over a grid of `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MazyaCriterion<T> {
    /// Supremum over the grid; `None` when the scan diverges.
    pub sup: Option<T>,
    pub grid_max: T,
    pub argmax_a: T,
    pub diverging: bool,
    /// Value at the smallest grid point divided by the value at `a = 10⁻²`.
    pub growth: T,
    pub samples: Vec<(T, T)>,
}

fn check_grid<T: Real>(a_grid: &[T]) -> Result<()> {
    if a_grid.is_empty() {
        return Err(Error::InvalidParams("empty a-grid".into()));
    }
    if a_grid.iter().any(|&a| !(a > T::zero() && a <= T::one())) {
        return Err(Error::InvalidParams("a-grid must lie in (0, 1]".into()));
    }
    if a_grid.len() > 1 {
        let mut sorted = a_grid.to_vec();
        sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
        if sorted.windows(2).any(|w| !(w[1] <= T::lit(0.9) * w[0] * (T::one() + T::lit(1e-9)))) {
            return Err(Error::InvalidParams("a-grid ratio must be at most 0.9".into()));
        }
        if *sorted.last().unwrap() > T::lit(1e-6) {
            return Err(Error::InvalidParams("a-grid must reach down to 1e-6".into()));
        }
    }
    Ok(())
}

/// Evaluates `a^{1/r} (∫_a^1 u^{−κ} du)^{(t−1)/t}` on `a_grid` and flags
/// divergence when the value at the smallest `a` exceeds ten times the value
/// at `a = 10⁻²`.
pub fn mazya_criterion_sup<T: Real>(params: &HardyParams<T>, a_grid: &[T]) -> Result<MazyaCriterion<T>> {
    check_grid(a_grid)?;
    let samples: Vec<(T, T)> = a_grid.iter().map(|&a| (a, params.criterion_value(a))).collect();
    if samples.iter().any(|s| s.1.is_nan()) {
        return Err(Error::Degenerate("criterion undefined on the grid".into()));
    }
    let (argmax_a, grid_max) =
        samples.iter().fold((a_grid[0], T::neg_infinity()), |b, &(a, v)| if v > b.1 { (a, v) } else { b });
    let smallest = samples.iter().fold(samples[0], |b, &s| if s.0 < b.0 { s } else { b });
    let reference = params.log_criterion(T::lit(1e-2));
    let growth = (params.log_criterion(smallest.0) - reference).exp();
    let diverging = !grid_max.is_finite() || growth > T::lit(10.0);
    Ok(MazyaCriterion {
        sup: if diverging { None } else { Some(grid_max) },
        grid_max,
        argmax_a,
        diverging,
        growth,
        samples,
    })
}

/// Least-squares slope of `log value` against `log a` over `a ∈ [10⁻⁶, 10⁻⁴]`.
pub fn blowup_exponent<T: Real>(params: &HardyParams<T>, a_grid: &[T]) -> Result<T> {
    let crit = mazya_criterion_sup(params, a_grid)?;
    if !crit.diverging {
        return Err(Error::InvalidParams("criterion does not diverge on this grid".into()));
    }
    let (lo, hi) = (T::lit(1e-6) * (T::one() - T::lit(1e-9)), T::lit(1e-4) * (T::one() + T::lit(1e-9)));
    let pts: Vec<(T, T)> = a_grid
        .iter()
        .filter(|&&a| a >= lo && a <= hi)
        .map(|&a| (a.ln(), params.log_criterion(a)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidParams("fewer than 3 grid points in [1e-6, 1e-4]".into()));
    }
    let k = T::from_usize_lossy(pts.len());
    let mx = pts.iter().fold(T::zero(), |s, p| s + p.0) / k;
    let my = pts.iter().fold(T::zero(), |s, p| s + p.1) / k;
    let (sxy, sxx) = pts.iter().fold((T::zero(), T::zero()), |(sxy, sxx), p| {
        let dx = p.0 - mx;
        (sxy + dx * (p.1 - my), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    if slope >= T::lit(-1e-3) {
        return Err(Error::InvalidParams(format!("fitted slope {slope} shows no blow-up")));
    }
    Ok(slope)
}

/// `u(x) = ∫_{γ_n|x−x₀|ⁿ}^1 g(s) s^{1/n − 1} ds` at the cell centers, `x₀` the
/// domain anchor. `g` must vanish beyond the inscribed-ball measure `σ`.
pub fn radial_test_function<T: Real>(
    g: &StepFunction<T>,
    domain: Arc<GridDomain<T>>,
) -> Result<SampledFunction<T>> {
    let sigma = domain.sigma();
    let bps = g.breakpoints();
    for (i, &v) in g.values().iter().enumerate() {
        if v != T::zero() && bps[i + 1] > sigma * (T::one() + T::lit(1e-12)) {
            return Err(Error::InvalidParams(format!(
                "g is supported beyond the inscribed ball measure σ = {sigma}"
            )));
        }
    }
    let alpha = T::one() / T::from_usize_lossy(domain.dim());
    let h = hardy_apply(g, alpha)?;
    let values = (0..domain.len()).map(|c| h.eval(domain.ball_measure_at(c))).collect();
    SampledFunction::new(domain, values)
}
