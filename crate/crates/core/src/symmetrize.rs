//! Spherical decreasing rearrangement, median-shifted Pólya–Szegő comparisons
//! and moduli of continuity in r.i. norms.

use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{log_grid, ratio, RatioCurve};
use crate::domain::{make_domain, GridDomain, SampledFunction, Shape};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::RISpaceSpec;
use crate::stepfn::MonotoneStep;

/// Unit-measure ball grid of the same dimension and resolution as `domain`.
pub fn ball_for<T: Real>(domain: &GridDomain<T>) -> Result<Arc<GridDomain<T>>> {
    let shape = if domain.dim() == 1 { Shape::Interval } else { Shape::Disk };
    Ok(Arc::new(make_domain(shape, domain.resolution().max(8))?))
}

/// `f°` on the ball grid: cells are ranked by distance to the ball center
/// (ties in cell order) and the `k`-th cell receives the average of `f*` over
/// its slot `[M_{k−1}, M_k]` of cumulative measure.
pub fn spherical_rearrangement<T: Real>(
    f: &SampledFunction<T>,
    ball: &Arc<GridDomain<T>>,
) -> Result<SampledFunction<T>> {
    if ball.dim() != f.domain().dim() {
        return Err(Error::InvalidDomain(format!(
            "ball grid has dimension {} but f lives in dimension {}",
            ball.dim(),
            f.domain().dim()
        )));
    }
    if !matches!(ball.shape(), Shape::Disk | Shape::Interval) {
        return Err(Error::InvalidDomain(format!("{} is not a ball grid", ball.shape())));
    }
    let fstar = f.rearrange(None)?;
    Ok(place_radially(&fstar, ball))
}

fn place_radially<T: Real>(fstar: &MonotoneStep<T>, ball: &Arc<GridDomain<T>>) -> SampledFunction<T> {
    let meas = ball.measures();
    let mut values = vec![T::zero(); ball.len()];
    let mut lo = T::zero();
    for &c in ball.radial_order() {
        let hi = (lo + meas[c]).min(T::one());
        values[c] = if hi > lo {
            (fstar.prefix_unchecked(hi) - fstar.prefix_unchecked(lo)) / (hi - lo)
        } else {
            fstar.values()[fstar.len() - 1]
        };
        lo = hi;
    }
    SampledFunction::new(ball.clone(), values).expect("averages of finite data are finite")
}

/// `sup_τ |μ{a > τ} − μ{b > τ}|` over all levels.
pub fn distribution_gap<T: Real>(a: &MonotoneStep<T>, b: &MonotoneStep<T>) -> T {
    let mut levels: Vec<T> = a.values().iter().chain(b.values()).copied().collect();
    levels.push(T::zero());
    levels.into_iter().fold(T::zero(), |gap, tau| {
        gap.max((a.as_step().measure_above(tau) - b.as_step().measure_above(tau)).abs())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyaReport<T> {
    pub median: T,
    /// `sup_t ∫₀ᵗ |∇(f − c)°|* / ∫₀ᵗ |∇f|*`.
    pub measured_constant: T,
    /// `‖∇(f − c)°‖_X / ‖∇f‖_X`.
    pub norm_constant: T,
    /// Set when `∇f ≡ 0`; the constants are then reported as 0.
    pub degenerate: bool,
    pub curve: RatioCurve<T>,
}

/// Median-shifted Pólya–Szegő comparison of `f` with `(f − r_f)°` on `ball`.
pub fn polya_szego_check<T: Real>(
    f: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    ball: &Arc<GridDomain<T>>,
) -> Result<PolyaReport<T>> {
    let c = f.median_constant();
    let grad = f.gradient_magnitude();
    let gstar = grad.rearrange(None)?;
    if gstar.total() == T::zero() {
        return Ok(PolyaReport {
            median: c,
            measured_constant: T::zero(),
            norm_constant: T::zero(),
            degenerate: true,
            curve: RatioCurve::new(),
        });
    }
    let sym = spherical_rearrangement(&f.shift(c), ball)?;
    let sgrad = sym.gradient_magnitude();
    let sstar = sgrad.rearrange(None)?;
    let lo = min_cell(f.domain()).max(min_cell(ball));
    let mut curve = RatioCurve::new();
    for t in log_grid(lo, T::one(), 200) {
        curve.push(t, sstar.prefix_unchecked(t), gstar.prefix_unchecked(t));
    }
    let norm_constant = ratio(sgrad.norm(x)?, grad.norm(x)?);
    Ok(PolyaReport {
        median: c,
        measured_constant: curve.sup_ratio(),
        norm_constant,
        degenerate: false,
        curve,
    })
}

pub(crate) fn min_cell<T: Real>(d: &GridDomain<T>) -> T {
    d.measures().iter().fold(T::infinity(), |m, &v| m.min(v))
}

/// Lattice direction of a shift.
pub type Direction = [i64; 2];

/// `±` axes in one dimension; `±` axes and diagonals in two.
pub fn default_directions(n: usize) -> Vec<Direction> {
    if n == 1 {
        vec![[1, 0], [-1, 0]]
    } else {
        vec![[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1], [1, -1], [-1, 1]]
    }
}

/// `ω_X(f, ·)` sampled at every lattice shift `k·d` up to a maximal length.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusCurve<T> {
    /// `(|h|, ‖(f(· + h) − f) χ_{Ω(h)}‖_X)` sorted by `|h|`, with the norm
    /// replaced by its running maximum.
    pub samples: Vec<(T, T)>,
}

impl<T: Real> ModulusCurve<T> {
    /// `ω(t)`: the largest sampled norm over shifts with `|h| ≤ t`.
    pub fn at(&self, t: T) -> T {
        let cut = t * (T::one() + T::lit(1e-9));
        let k = self.samples.partition_point(|s| s.0 <= cut);
        if k == 0 {
            T::zero()
        } else {
            self.samples[k - 1].1
        }
    }
}

/// Number of consecutive steps along `d` that stay inside the domain, per cell.
fn reach<T: Real>(domain: &GridDomain<T>, d: Direction) -> Vec<usize> {
    const UNKNOWN: usize = usize::MAX;
    let mut out = vec![UNKNOWN; domain.len()];
    let mut chain = Vec::new();
    for start in 0..domain.len() {
        if out[start] != UNKNOWN {
            continue;
        }
        chain.clear();
        let mut c = start;
        let base = loop {
            chain.push(c);
            let [i, j] = domain.lattice()[c];
            match domain.cell_at([i + d[0], j + d[1]]) {
                Some(next) if out[next] != UNKNOWN => break out[next] + 1,
                Some(next) => c = next,
                None => break 0,
            }
        };
        for (k, &cell) in chain.iter().rev().enumerate() {
            out[cell] = base + k;
        }
    }
    out
}

/// Sweeps all lattice shifts `k·d` with `|h| ≤ t_max` and `d` in `directions`.
pub fn modulus_sweep<T: Real>(
    f: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    t_max: T,
    directions: &[Direction],
) -> Result<ModulusCurve<T>> {
    if directions.is_empty() {
        return Err(Error::InvalidParams("no shift directions".into()));
    }
    let dom = f.domain();
    let h = dom.spacing();
    let jobs: Vec<(Direction, Arc<Vec<usize>>, usize, T)> = directions
        .iter()
        .flat_map(|&d| {
            let len = T::lit(((d[0] * d[0] + d[1] * d[1]) as f64).sqrt()) * h;
            let kmax = (t_max / len + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
            let r = Arc::new(reach(dom, d));
            let top = kmax.min(r.iter().copied().max().unwrap_or(0));
            (1..=top).map(move |k| (d, r.clone(), k, len * T::from_usize_lossy(k)))
        })
        .collect();
    let vals = f.values();
    let norms: Vec<Result<(T, T)>> = jobs
        .par_iter()
        .map(|(d, r, k, len)| {
            let diff: Vec<T> = (0..dom.len())
                .map(|c| {
                    if r[c] < *k {
                        return T::zero();
                    }
                    let [i, j] = dom.lattice()[c];
                    let kk = *k as i64;
                    let target = dom.cell_at([i + kk * d[0], j + kk * d[1]]).expect("inside by reach");
                    vals[target] - vals[c]
                })
                .collect();
            Ok((*len, x.norm_atoms(&diff, dom.measures())?))
        })
        .collect();
    let mut samples = norms.into_iter().collect::<Result<Vec<_>>>()?;
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut run = T::zero();
    for s in &mut samples {
        run = run.max(s.1);
        s.1 = run;
    }
    Ok(ModulusCurve { samples })
}

/// `ω_X(f, t) = sup_{|h| ≤ t} ‖(f(· + h) − f) χ_{Ω(h)}‖_X`, over lattice shifts
/// along `directions`. Returns 0 with a warning when `t` is below one cell.
pub fn modulus_of_continuity<T: Real>(
    f: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    t: T,
    directions: &[Direction],
) -> Result<T> {
    if !(t > T::zero() && t < T::one()) {
        return Err(Error::InvalidParams(format!("modulus needs t in (0, 1), got {t}")));
    }
    if t < f.domain().spacing() {
        warn!("t = {t} is below the grid spacing; modulus reported as 0");
        return Ok(T::zero());
    }
    Ok(modulus_sweep(f, x, t, directions)?.at(t))
}

/// Constants `{r_f, f_Ω, 0}` over which `inf_c` is taken.
pub fn candidate_constants<T: Real>(f: &SampledFunction<T>) -> Result<[T; 3]> {
    Ok([f.median_constant(), f.mean_value(None)?, T::zero()])
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport<T> {
    pub measured_constant: T,
    pub degenerate: bool,
    /// `lhs = min_c [(f−c)** − (f−c)*](t) φ_X(t)`, `rhs = ω_X(f, t^{1/n})`.
    pub curve: RatioCurve<T>,
}

/// Measures `sup_t inf_c [(f−c)**(t) − (f−c)*(t)] φ_X(t) / ω_X(f, t^{1/n})`.
pub fn corollary_check<T: Real>(
    f: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    t_grid: &[T],
) -> Result<CorollaryReport<T>> {
    if t_grid.iter().any(|&t| !(t > T::zero() && t < T::lit(0.5))) {
        return Err(Error::InvalidParams("t-grid must lie in (0, 1/2)".into()));
    }
    let n = f.domain().dim();
    let inv_n = T::one() / T::from_usize_lossy(n);
    let t_top = t_grid.iter().fold(T::zero(), |m, &t| m.max(t));
    let omega = modulus_sweep(f, x, t_top.powf(inv_n), &default_directions(n))?;
    if omega.samples.last().is_none_or(|s| s.1 == T::zero()) {
        return Ok(CorollaryReport {
            measured_constant: T::zero(),
            degenerate: true,
            curve: RatioCurve::new(),
        });
    }
    let shifted: Vec<MonotoneStep<T>> = candidate_constants(f)?
        .iter()
        .map(|&c| f.shift(c).rearrange(None))
        .collect::<Result<_>>()?;
    let mut curve = RatioCurve::new();
    for &t in t_grid {
        let rhs = omega.at(t.powf(inv_n));
        if rhs == T::zero() {
            continue;
        }
        let osc = shifted.iter().fold(T::infinity(), |m, g| m.min(g.oscillation_at(t)));
        curve.push(t, osc * x.fundamental(t)?, rhs);
    }
    Ok(CorollaryReport { measured_constant: curve.sup_ratio(), degenerate: false, curve })
}

/// Measures `sup_t inf_c ω_X((f − c)°, t) / ω_X(f, t)` on `t_grid`.
pub fn tmodulo_check<T: Real>(
    f: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    t_grid: &[T],
    ball: &Arc<GridDomain<T>>,
) -> Result<RatioCurve<T>> {
    let n = f.domain().dim();
    let dirs = default_directions(n);
    let t_top = t_grid.iter().fold(T::zero(), |m, &t| m.max(t));
    let base = modulus_sweep(f, x, t_top, &dirs)?;
    let sym: Vec<ModulusCurve<T>> = candidate_constants(f)?
        .iter()
        .map(|&c| modulus_sweep(&spherical_rearrangement(&f.shift(c), ball)?, x, t_top, &dirs))
        .collect::<Result<_>>()?;
    let mut curve = RatioCurve::new();
    for &t in t_grid {
        let rhs = base.at(t);
        if rhs == T::zero() {
            continue;
        }
        let lhs = sym.iter().fold(T::infinity(), |m, w| m.min(w.at(t)));
        curve.push(t, lhs, rhs);
    }
    Ok(curve)
}

/// `‖f° − g°‖_X / ‖f − g‖_X` (0 when `f = g`).
pub fn nonexpansive_ratio<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    x: &RISpaceSpec<T>,
    ball: &Arc<GridDomain<T>>,
) -> Result<T> {
    let lhs = spherical_rearrangement(f, ball)?.sub(&spherical_rearrangement(g, ball)?)?.norm(x)?;
    let rhs = f.sub(g)?.norm(x)?;
    Ok(ratio(lhs, rhs))
}
