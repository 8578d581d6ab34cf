//! Theorem-level measurements. Every constant is a maximum over a battery and
//! therefore a lower bound for the true constant.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::{log_grid, ratio, RatioCurve};
use crate::domain::{make_domain, GridDomain, SampledFunction, Shape};
use crate::error::{Error, Result};
use crate::hardy::{
    blowup_exponent, default_a_grid, hardy_apply, mazya_criterion_sup, radial_test_function, HardyParams,
};
use crate::profile::{PowerSum, Profile};
use crate::space::RISpaceSpec;
use crate::stepfn::{Flavor, MonotoneStep, StepFunction};
use crate::symmetrize::{ball_for, corollary_check, min_cell, polya_szego_check};

use super::battery::{standard_battery, Battery};

/// Growth factor between two refinement levels above which a constant is
/// reported as diverging.
pub const DIVERGENCE_GROWTH: f64 = 1.25;

/// `|a − b| / max(|a|, |b|)`, 0 when both vanish.
pub fn relative_drift(fine: f64, coarse: f64) -> f64 {
    let scale = fine.abs().max(coarse.abs());
    if scale == 0.0 {
        0.0
    } else if !scale.is_finite() {
        f64::INFINITY
    } else {
        (fine - coarse).abs() / scale
    }
}

/// Largest ratio over a battery, skipping members where the ratio is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryMax {
    pub constant: f64,
    pub argmax: Option<String>,
    pub evaluated: usize,
    pub skipped: usize,
}

fn battery_max(battery: &Battery, mut ratio_of: impl FnMut(&SampledFunction<f64>) -> Result<Option<f64>>) -> Result<BatteryMax> {
    let mut out = BatteryMax { constant: 0.0, argmax: None, evaluated: 0, skipped: 0 };
    for m in battery.iter() {
        match ratio_of(&m.f)? {
            Some(r) => {
                out.evaluated += 1;
                if r > out.constant || out.argmax.is_none() {
                    out.constant = out.constant.max(r);
                    out.argmax = Some(m.name.clone());
                }
            }
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

fn critical_exponent(n: usize) -> f64 {
    if n <= 1 {
        f64::INFINITY
    } else {
        n as f64 / (n as f64 - 1.0)
    }
}

fn check_p(p: f64, n: usize, open_left: bool) -> Result<()> {
    let ok_left = if open_left { p > 1.0 } else { p >= 1.0 };
    if !(ok_left && p <= critical_exponent(n) * (1.0 + 1e-12)) {
        let lb = if open_left { "(1" } else { "[1" };
        return Err(Error::InvalidParams(format!("p = {p} outside {lb}, {}]", critical_exponent(n))));
    }
    Ok(())
}

/// `t ↦ t^w (f** − f*)(t)` as a piecewise power sum.
pub fn oscillation_profile(f: &MonotoneStep<f64>, w: f64) -> Result<Profile<f64>> {
    let pieces = (0..f.len()).map(|i| PowerSum::new(vec![(f.osc_coefficient(i), w - 1.0)])).collect();
    Profile::new(f.breakpoints().to_vec(), pieces)
}

fn gradient_or_none(f: &SampledFunction<f64>) -> Option<SampledFunction<f64>> {
    if f.is_constant() {
        return None;
    }
    let g = f.gradient_magnitude();
    if g.values().iter().all(|&v| v == 0.0) {
        None
    } else {
        Some(g)
    }
}

/// `max (∫|f − f_Ω|^p dμ)^{1/p} / ∫|∇f| dμ` over the battery.
pub fn poincare_constant(domain: &GridDomain<f64>, battery: &Battery, p: f64) -> Result<BatteryMax> {
    check_p(p, domain.dim(), false)?;
    let lp = RISpaceSpec::lebesgue(p)?;
    let l1 = RISpaceSpec::lebesgue(1.0)?;
    battery_max(battery, |f| {
        let Some(grad) = gradient_or_none(f) else { return Ok(None) };
        let num = f.shift(f.mean_value(None)?).norm(&lp)?;
        Ok(Some(num / grad.norm(&l1)?))
    })
}

/// `‖f − f_Ω‖_{L^p} / ‖∇f‖_{L^t}` over the battery (the Poincaré form of the
/// embedding `Y = L^r`, `X = L^t` when `p = r`).
pub fn poincare_constant_between(battery: &Battery, r: f64, t: f64) -> Result<BatteryMax> {
    let lr = RISpaceSpec::lebesgue(r)?;
    let lt = RISpaceSpec::lebesgue(t)?;
    battery_max(battery, |f| {
        let Some(grad) = gradient_or_none(f) else { return Ok(None) };
        Ok(Some(f.shift(f.mean_value(None)?).norm(&lr)? / grad.norm(&lt)?))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PointwiseRatios {
    pub r_f: f64,
    pub sup_ratio_b: f64,
    pub sup_ratio_c: f64,
    /// `t^{1/p−1}[(f−r_f)** − (f−r_f)*](t)` against `|∇f|**(t)`.
    pub curve_b: RatioCurve<f64>,
    /// `∫₀ᵗ s^{1/p−1}[(f−r_f)** − (f−r_f)*](s) ds` against `∫₀ᵗ |∇f|*`.
    pub curve_c: RatioCurve<f64>,
}

struct MedianData {
    r_f: f64,
    fstar: MonotoneStep<f64>,
    grad: SampledFunction<f64>,
}

fn median_data(f: &SampledFunction<f64>) -> Result<MedianData> {
    let grad = f.gradient_magnitude();
    if grad.values().iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("|∇f| vanishes identically".into()));
    }
    let r_f = f.median_constant();
    let fstar = f.shift(r_f).rearrange(None)?;
    Ok(MedianData { r_f, fstar, grad })
}

/// Median-shifted pointwise and integrated oscillation ratios on a
/// logarithmic grid of 200 points from one cell measure to 1.
pub fn theorem_a_pointwise(f: &SampledFunction<f64>, p: f64) -> Result<PointwiseRatios> {
    check_p(p, f.domain().dim(), true)?;
    let MedianData { r_f, fstar, grad } = median_data(f)?;
    let gstar = grad.rearrange(None)?;
    let w = 1.0 / p - 1.0;
    let prof = oscillation_profile(&fstar, w)?;
    let mut curve_b = RatioCurve::new();
    let mut curve_c = RatioCurve::new();
    for t in log_grid(min_cell(f.domain()), 1.0, 200) {
        curve_b.push(t, t.powf(w) * fstar.oscillation_at(t), gstar.double_star(t));
        curve_c.push(t, prof.prefix(t), gstar.prefix_unchecked(t));
    }
    Ok(PointwiseRatios { r_f, sup_ratio_b: curve_b.sup_ratio(), sup_ratio_c: curve_c.sup_ratio(), curve_b, curve_c })
}

/// `‖s^{1/p−1}[(f−r_f)** − (f−r_f)*]‖_X̂ / ‖∇f‖_X`.
pub fn theorem_a_norm(f: &SampledFunction<f64>, p: f64, x: &RISpaceSpec<f64>) -> Result<f64> {
    check_p(p, f.domain().dim(), true)?;
    let MedianData { fstar, grad, .. } = median_data(f)?;
    let num = x.norm_profile(&oscillation_profile(&fstar, 1.0 / p - 1.0)?)?;
    Ok(ratio(num, grad.norm(x)?))
}

/// Relative gap between the `L¹` form `∫₀¹ s^{1/p−1}(F** − F*)` and the
/// oscillation `L^{p,1}` norm of `F = (f − r_f)*`.
pub fn identity_residual(f: &SampledFunction<f64>, p: f64) -> Result<f64> {
    let fstar = f.shift(f.median_constant()).rearrange(None)?;
    let l1 = RISpaceSpec::lebesgue(1.0)?.norm_profile(&oscillation_profile(&fstar, 1.0 / p - 1.0)?)?;
    let lp1 = fstar.lorentz_norm(p, 1.0, Flavor::Oscillation)?;
    Ok(relative_drift(l1, lp1))
}

/// Battery maxima of both pointwise ratios, the norm ratio in `X`, and the
/// worst identity residual. Curves belong to the maximizing members.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremAResult {
    pub ratio_b: BatteryMax,
    pub ratio_c: BatteryMax,
    pub norm_ratio: BatteryMax,
    pub identity_residual: f64,
    #[serde(skip)]
    pub curve_b: RatioCurve<f64>,
    #[serde(skip)]
    pub curve_c: RatioCurve<f64>,
}

pub fn theorem_a_battery(battery: &Battery, p: f64, x: &RISpaceSpec<f64>) -> Result<TheoremAResult> {
    let mut curves: Vec<(String, PointwiseRatios)> = Vec::new();
    let mut residual: f64 = 0.0;
    for m in battery.iter() {
        if gradient_or_none(&m.f).is_none() {
            continue;
        }
        curves.push((m.name.clone(), theorem_a_pointwise(&m.f, p)?));
        residual = residual.max(identity_residual(&m.f, p)?);
    }
    let pick = |use_b: bool| -> (BatteryMax, RatioCurve<f64>) {
        let skipped = battery.len() - curves.len();
        let mut best = BatteryMax { constant: 0.0, argmax: None, evaluated: curves.len(), skipped };
        let mut curve = RatioCurve::new();
        for (name, r) in &curves {
            let v = if use_b { r.sup_ratio_b } else { r.sup_ratio_c };
            if best.argmax.is_none() || v > best.constant {
                best.constant = v;
                best.argmax = Some(name.clone());
                curve = if use_b { r.curve_b.clone() } else { r.curve_c.clone() };
            }
        }
        (best, curve)
    };
    let (ratio_b, curve_b) = pick(true);
    let (ratio_c, curve_c) = pick(false);
    let norm_ratio = battery_max(battery, |f| {
        if gradient_or_none(f).is_none() {
            return Ok(None);
        }
        theorem_a_norm(f, p, x).map(Some)
    })?;
    Ok(TheoremAResult { ratio_b, ratio_c, norm_ratio, identity_residual: residual, curve_b, curve_c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnConstants {
    /// `max ‖f − f_Ω‖_{L^{p,1}} / ‖∇f‖_{L¹}`.
    pub strong: BatteryMax,
    /// `max ‖f − f_Ω‖_{L^{p,∞}} / ‖∇f‖_{L¹}`.
    pub weak: BatteryMax,
    /// Weak ratio at most the strong ratio for every member.
    pub weak_le_strong: bool,
}

pub fn gn_sharp_constant(domain: &GridDomain<f64>, battery: &Battery, p: f64) -> Result<GnConstants> {
    check_p(p, domain.dim(), false)?;
    let strong_x = RISpaceSpec::lorentz(p, 1.0, Flavor::Classical)?;
    let weak_x = RISpaceSpec::lorentz(p, f64::INFINITY, Flavor::Classical)?;
    let l1 = RISpaceSpec::lebesgue(1.0)?;
    let mut weak_ratios = Vec::new();
    let strong = battery_max(battery, |f| {
        let Some(grad) = gradient_or_none(f) else { return Ok(None) };
        let centered = f.shift(f.mean_value(None)?);
        let den = grad.norm(&l1)?;
        let s = centered.norm(&strong_x)? / den;
        weak_ratios.push((s, centered.norm(&weak_x)? / den));
        Ok(Some(s))
    })?;
    let weak_le_strong = weak_ratios.iter().all(|&(s, w)| w <= s * (1.0 + 1e-12));
    let mut it = weak_ratios.into_iter();
    let weak = battery_max(battery, |f| Ok(gradient_or_none(f).and_then(|_| it.next().map(|p| p.1))))?;
    Ok(GnConstants { strong, weak, weak_le_strong })
}

/// Largest `max_c`-free median Pólya–Szegő prefix ratio over the battery.
pub fn polya_battery(battery: &Battery, x: &RISpaceSpec<f64>, ball: &Arc<GridDomain<f64>>) -> Result<BatteryMax> {
    battery_max(battery, |f| {
        let r = polya_szego_check(f, x, ball)?;
        Ok(if r.degenerate { None } else { Some(r.measured_constant) })
    })
}

/// `t`-grid for the modulus comparison: 40 points from the first shift that
/// can register (`t^{1/n}` one cell) up to 0.45.
pub fn corollary_grid(domain: &GridDomain<f64>) -> Vec<f64> {
    let lo = domain.spacing().powi(domain.dim() as i32) * (1.0 + 1e-9);
    log_grid(lo, 0.45, 40)
}

pub fn corollary_battery(battery: &Battery, x: &RISpaceSpec<f64>) -> Result<(BatteryMax, RatioCurve<f64>)> {
    let mut curve = RatioCurve::new();
    let mut best = 0.0;
    let m = battery_max(battery, |f| {
        if f.is_constant() {
            return Ok(None);
        }
        let r = corollary_check(f, x, &corollary_grid(f.domain()))?;
        if r.degenerate {
            return Ok(None);
        }
        if r.measured_constant >= best {
            best = r.measured_constant;
            curve = r.curve;
        }
        Ok(Some(r.measured_constant))
    })?;
    Ok((m, curve))
}

/// Step functions for the one-dimensional side of the embedding theorem.
#[derive(Debug, Clone)]
pub struct HardyBattery {
    pub steps: Vec<StepFunction<f64>>,
    pub monotone: Vec<MonotoneStep<f64>>,
    /// Profiles `g` supported in `(0, σ]` for radial test functions.
    pub radial: Vec<StepFunction<f64>>,
}

impl HardyBattery {
    fn check(&self) -> Result<()> {
        if self.steps.is_empty() || self.monotone.is_empty() || self.radial.is_empty() {
            return Err(Error::InvalidParams("theorem battery has an empty component".into()));
        }
        Ok(())
    }
}

fn random_unit_step(rng: &mut ChaCha8Rng, scale: f64) -> Result<StepFunction<f64>> {
    let m = rng.gen_range(2..=8);
    let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.gen_range(0.02..0.98)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut bps = vec![0.0];
    bps.extend(cuts.iter().map(|c| c * scale));
    bps.push(scale);
    let mut vals: Vec<f64> = (0..bps.len() - 1).map(|_| rng.gen_range(0.1..2.0)).collect();
    if scale < 1.0 {
        bps.push(1.0);
        vals.push(0.0);
    }
    StepFunction::new(bps, vals)
}

/// Indicators `χ_(0,m]` with `m = 2^{−k}` down to a floor tied to the cell
/// size, plus seeded random steps. The floor makes the battery grow with
/// resolution, which is how unbounded constants show up.
pub fn hardy_battery(domain: &GridDomain<f64>, seed: u64) -> Result<HardyBattery> {
    let floor = min_cell(domain) * if domain.dim() == 1 { 8.0 } else { 64.0 };
    let sigma = domain.sigma();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::new();
    let mut radial = Vec::new();
    let mut m = 0.5;
    while m >= floor {
        steps.push(StepFunction::indicator(m)?);
        m *= 0.5;
    }
    let mut m = sigma;
    while m >= floor {
        radial.push(StepFunction::indicator(m)?);
        m *= 0.5;
    }
    for _ in 0..8 {
        steps.push(random_unit_step(&mut rng, 1.0)?);
    }
    for _ in 0..4 {
        radial.push(random_unit_step(&mut rng, sigma)?);
    }
    let monotone = steps.iter().map(|s| s.rearrange()).collect();
    Ok(HardyBattery { steps, monotone, radial })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBConstants {
    pub c_i: f64,
    pub c_ii: f64,
    pub c_iii: f64,
}

impl TheoremBConstants {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c_i, self.c_ii, self.c_iii]
    }
}

fn check_pair(x: &RISpaceSpec<f64>, y: &RISpaceSpec<f64>) -> Result<()> {
    for s in [x, y] {
        if let RISpaceSpec::Lorentz { flavor: Flavor::Oscillation, .. } = s {
            return Err(Error::InvalidParams(format!("{s} is not a rearrangement-invariant norm")));
        }
    }
    Ok(())
}

/// The three constants of the embedding equivalence on one domain.
pub fn theorem_b_constants(
    x: &RISpaceSpec<f64>,
    y: &RISpaceSpec<f64>,
    domain: &Arc<GridDomain<f64>>,
    battery: &HardyBattery,
) -> Result<TheoremBConstants> {
    check_pair(x, y)?;
    battery.check()?;
    let alpha = 1.0 / domain.dim() as f64;
    let mut c_ii: f64 = 0.0;
    for g in &battery.steps {
        c_ii = c_ii.max(ratio(y.norm_profile(&hardy_apply(g, alpha)?)?, x.norm_step(g)?));
    }
    let mut c_i: f64 = 0.0;
    for f in &battery.monotone {
        let den = x.norm_profile(&oscillation_profile(f, -alpha)?)? + f.total();
        c_i = c_i.max(ratio(y.norm_monotone(f)?, den));
    }
    let mut c_iii: f64 = 0.0;
    for g in &battery.radial {
        let u = radial_test_function(g, domain.clone())?;
        let centered = u.shift(u.mean_value(None)?);
        c_iii = c_iii.max(ratio(centered.norm(y)?, u.gradient_magnitude().norm(x)?));
    }
    Ok(TheoremBConstants { c_i, c_ii, c_iii })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremBReport {
    pub x: String,
    pub y: String,
    pub resolution: usize,
    pub coarse_resolution: usize,
    pub fine: TheoremBConstants,
    pub coarse: TheoremBConstants,
    /// Fine over coarse, per constant.
    pub growth: [f64; 3],
    pub diverging: [bool; 3],
    /// All three diverge together or none does.
    pub agree: bool,
}

/// Measures the constants on `domain` and on the half-resolution grid of the
/// same shape; a constant growing by more than [`DIVERGENCE_GROWTH`] is
/// flagged as diverging.
pub fn theorem_b_roundtrip(
    x: &RISpaceSpec<f64>,
    y: &RISpaceSpec<f64>,
    domain: &Arc<GridDomain<f64>>,
    seed: u64,
) -> Result<TheoremBReport> {
    check_pair(x, y)?;
    let coarse_res = domain.resolution() / 2;
    let coarse_dom = Arc::new(make_domain(domain.shape(), coarse_res)?);
    let fine = theorem_b_constants(x, y, domain, &hardy_battery(domain, seed)?)?;
    let coarse = theorem_b_constants(x, y, &coarse_dom, &hardy_battery(&coarse_dom, seed)?)?;
    let (f, c) = (fine.as_array(), coarse.as_array());
    let growth: [f64; 3] = std::array::from_fn(|k| ratio(f[k], c[k]));
    let diverging = growth.map(|g| !(g <= DIVERGENCE_GROWTH));
    let agree = diverging.iter().all(|&d| d == diverging[0]);
    Ok(TheoremBReport {
        x: x.to_string(),
        y: y.to_string(),
        resolution: domain.resolution(),
        coarse_resolution: coarse_res,
        fine,
        coarse,
        growth,
        diverging,
        agree,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarReport {
    pub n: usize,
    pub s: f64,
    pub t: f64,
    pub r: f64,
    pub resolutions: [usize; 2],
    /// `max ‖f − f_Ω‖_{L^r} / ‖∇f‖_{L^t}` at each resolution.
    pub poincare: [f64; 2],
    pub drift: f64,
    pub criterion_grid_max: f64,
    pub criterion_growth: f64,
    pub diverging: bool,
    pub fitted_exponent: Option<f64>,
    pub predicted_exponent: f64,
    pub inequality_holds: bool,
    pub criterion_fails: bool,
}

/// On the `s`-John domain the Poincaré inequality with `Y = L^r`, `X = L^t`
/// holds, yet the power-weight Hardy criterion diverges.
pub fn proposition_har_demo(
    n: usize,
    s: f64,
    t: f64,
    resolutions: [usize; 2],
    seed: u64,
    drift_tolerance: f64,
) -> Result<HarReport> {
    if n != 2 {
        return Err(Error::InvalidParams("the s-John demo domain is planar (n = 2)".into()));
    }
    let nf = n as f64;
    if !(s > 1.0 && s < nf / (nf - 1.0)) {
        return Err(Error::InvalidParams(format!("s = {s} outside (1, n/(n−1))")));
    }
    if !(t > 1.0 && s > (t - 1.0) / (nf - 1.0)) {
        return Err(Error::InvalidParams(format!("need t > 1 and s > (t−1)/(n−1), got t = {t}")));
    }
    let params = HardyParams::new(n, s, t)?;
    let mut poincare = [0.0; 2];
    for (k, &res) in resolutions.iter().enumerate() {
        let d = Arc::new(make_domain(Shape::SJohn(s), res)?);
        poincare[k] = poincare_constant_between(&standard_battery(&d, seed)?, params.r_exp, t)?.constant;
    }
    let drift = relative_drift(poincare[1], poincare[0]);
    let grid = default_a_grid();
    let crit = mazya_criterion_sup(&params, &grid)?;
    let fitted = blowup_exponent(&params, &grid).ok();
    let inequality_holds = poincare.iter().all(|v| v.is_finite()) && drift <= drift_tolerance;
    Ok(HarReport {
        n,
        s,
        t,
        r: params.r_exp,
        resolutions,
        poincare,
        drift,
        criterion_grid_max: crit.grid_max,
        criterion_growth: crit.growth,
        diverging: crit.diverging,
        fitted_exponent: fitted,
        predicted_exponent: params.predicted_exponent(),
        inequality_holds,
        criterion_fails: crit.diverging,
    })
}

/// Ball grid matching `domain`, for the symmetrization harnesses.
pub fn ball_grid(domain: &GridDomain<f64>) -> Result<Arc<GridDomain<f64>>> {
    ball_for(domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::battery::constant_battery;

    fn dom(shape: Shape<f64>, res: usize) -> Arc<GridDomain<f64>> {
        Arc::new(make_domain(shape, res).unwrap())
    }

    fn single(f: SampledFunction<f64>) -> Battery {
        Battery { members: vec![super::super::battery::Member { name: "f".into(), f }] }
    }

    #[test]
    fn poincare_of_identity_on_interval() {
        let d = dom(Shape::Interval, 64);
        let b = single(SampledFunction::from_fn(d.clone(), |[x, _]| x).unwrap());
        let c = poincare_constant(&d, &b, 1.0).unwrap();
        assert!((c.constant - 0.25).abs() < 1e-12, "{}", c.constant);
    }

    #[test]
    fn constants_are_skipped() {
        let d = dom(Shape::Square, 16);
        let b = constant_battery(&d).unwrap();
        let c = poincare_constant(&d, &b, 2.0).unwrap();
        assert_eq!((c.constant, c.evaluated, c.skipped), (0.0, 0, 3));
        assert!(theorem_a_pointwise(&b.members[1].f, 2.0).is_err());
        assert!(poincare_constant(&d, &b, 3.0).is_err());
    }

    #[test]
    fn gn_constant_of_identity_on_interval() {
        let d = dom(Shape::Interval, 64);
        let b = single(SampledFunction::from_fn(d.clone(), |[x, _]| x).unwrap());
        let g = gn_sharp_constant(&d, &b, 1.0).unwrap();
        assert!((g.strong.constant - 0.25).abs() < 1e-12);
        assert!(g.weak_le_strong);
    }

    #[test]
    fn identity_and_sup_forms() {
        let d = dom(Shape::Disk, 32);
        let b = standard_battery(&d, 1).unwrap();
        for m in b.iter().filter(|m| !m.f.is_constant()) {
            assert!(identity_residual(&m.f, 2.0).unwrap() < 1e-8, "{}", m.name);
            let l1 = theorem_a_norm(&m.f, 2.0, &RISpaceSpec::lebesgue(1.0).unwrap()).unwrap();
            let linf = theorem_a_norm(&m.f, 2.0, &RISpaceSpec::Sup).unwrap();
            assert!(l1.is_finite() && linf.is_finite());
        }
    }

    #[test]
    fn steep_radial_step_is_finite() {
        let d = dom(Shape::Disk, 48);
        let f = SampledFunction::from_fn(d, |[x, y]: [f64; 2]| (-(x * x + y * y).sqrt() * 40.0 + 8.0).tanh()).unwrap();
        let r = theorem_a_pointwise(&f, 2.0).unwrap();
        assert!(r.sup_ratio_b.is_finite() && r.sup_ratio_c.is_finite());
        assert_eq!(r.curve_b.len(), 200);
    }

    #[test]
    fn theorem_b_rejects_oscillation_spaces_and_empty_batteries() {
        let d = dom(Shape::Disk, 32);
        let osc = RISpaceSpec::lorentz(2.0, 1.0, Flavor::Oscillation).unwrap();
        let l1 = RISpaceSpec::lebesgue(1.0).unwrap();
        assert!(theorem_b_roundtrip(&l1, &osc, &d, 1).is_err());
        let empty = HardyBattery { steps: vec![], monotone: vec![], radial: vec![] };
        assert!(theorem_b_constants(&l1, &RISpaceSpec::Sup, &d, &empty).is_err());
    }

    #[test]
    fn har_demo_rejects_bad_parameters() {
        assert!(proposition_har_demo(2, 1.0, 1.2, [32, 64], 1, 0.15).is_err());
        assert!(proposition_har_demo(3, 1.2, 1.2, [32, 64], 1, 0.15).is_err());
        assert!(proposition_har_demo(2, 1.5, 0.9, [32, 64], 1, 0.15).is_err());
    }
}
