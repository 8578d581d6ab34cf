//! Finite checks of the level-set facts behind the median-based Poincaré
//! argument, by enumeration over the (finite) value set of a sampled function.

use super::SampledFunction;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `inf_c μ{|w − c| ≥ t/2}` for the atoms `(values, weights)`.
///
/// The complement is an open window of length `t`; its largest measure is
/// attained in the limit by windows `[w_i, w_i + t)`, so the infimum equals
/// `1 − max_i μ{w_i ≤ w < w_i + t}`.
pub fn inf_far_measure<T: Real>(values: &[T], weights: &[T], t: T) -> T {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let sorted: Vec<T> = order.iter().map(|&i| values[i]).collect();
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    let mut acc = T::zero();
    prefix.push(acc);
    for &i in &order {
        acc += weights[i];
        prefix.push(acc);
    }
    let mut best = T::zero();
    let mut hi = 0;
    for lo in 0..sorted.len() {
        if lo > 0 && sorted[lo] == sorted[lo - 1] {
            continue;
        }
        hi = hi.max(lo);
        while hi < sorted.len() && sorted[hi] < sorted[lo] + t {
            hi += 1;
        }
        best = best.max(prefix[hi] - prefix[lo]);
    }
    (acc - best).max(T::zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedianHalvingReport<T> {
    pub levels_checked: usize,
    /// `max_t μ{w ≥ t} / (2 inf_c μ{|w − c| ≥ t/2})`; at most 1 when the
    /// halving inequality holds.
    pub worst_ratio: T,
    pub holds: bool,
}

/// Checks `μ{w ≥ t} ≤ 2 inf_c μ{|w − c| ≥ t/2}` at every level where either
/// side can change: the distinct positive values of `w` and their pairwise gaps.
pub fn median_halving_check<T: Real>(w: &SampledFunction<T>) -> Result<MedianHalvingReport<T>> {
    let vals = w.values();
    let meas = w.domain().measures();
    if vals.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidSample("halving check needs w ≥ 0".into()));
    }
    let zero_mass = w.measure_where(|v| v == T::zero());
    if zero_mass < T::lit(0.5) - T::lit(1e-12) {
        return Err(Error::Hypotheses(format!("μ{{w = 0}} = {zero_mass} < 1/2")));
    }
    let mut distinct: Vec<T> = vals.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    let mut levels: Vec<T> = distinct.iter().copied().filter(|&v| v > T::zero()).collect();
    for (i, &a) in distinct.iter().enumerate() {
        for &b in &distinct[i + 1..] {
            levels.push(b - a);
        }
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();

    let mut worst = T::zero();
    let mut holds = true;
    for &t in &levels {
        let lhs = w.measure_where(|v| v >= t);
        let rhs = T::lit(2.0) * inf_far_measure(vals, meas, t);
        if lhs > rhs + T::lit(1e-12) {
            holds = false;
        }
        if lhs > T::zero() {
            worst = worst.max(if rhs > T::zero() { lhs / rhs } else { T::infinity() });
        }
    }
    Ok(MedianHalvingReport { levels_checked: levels.len(), worst_ratio: worst, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingReport<T> {
    pub median: T,
    pub pointwise_ok: bool,
    pub level_pairs_checked: usize,
    pub level_sets_ok: bool,
}

impl<T> SplittingReport<T> {
    pub fn holds(&self) -> bool {
        self.pointwise_ok && self.level_sets_ok
    }
}

/// With `u = (f − r_f)⁺`, `v = (r_f − f)⁺`: checks `|f − r_f| = u + v` cellwise
/// and `{β > u + v ≥ α} = {β > u ≥ α} ∪ {β > v ≥ α}` for all `0 < α < β`
/// drawn from the values of `|f − r_f|` and their midpoints.
pub fn splitting_identity_check<T: Real>(f: &SampledFunction<T>) -> SplittingReport<T> {
    let r = f.median_constant();
    let (u, v) = f.split_at(r);
    let (u, v) = (u.values(), v.values());
    let dev: Vec<T> = f.values().iter().map(|&x| (x - r).abs()).collect();
    let pointwise_ok = dev.iter().zip(u.iter().zip(v)).all(|(&d, (&a, &b))| d == a + b);

    let mut levels: Vec<T> = dev.iter().copied().filter(|&x| x > T::zero()).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let mids: Vec<T> = levels.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5)).collect();
    levels.extend(mids);
    if let Some(&top) = levels.iter().max_by(|a, b| a.partial_cmp(b).unwrap()) {
        levels.push(top + T::one());
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut pairs = 0;
    let mut level_sets_ok = true;
    for (i, &alpha) in levels.iter().enumerate() {
        for &beta in &levels[i + 1..] {
            pairs += 1;
            let inside = |x: T| beta > x && x >= alpha;
            let same = (0..dev.len()).all(|c| inside(u[c] + v[c]) == (inside(u[c]) || inside(v[c])));
            level_sets_ok &= same;
        }
    }
    SplittingReport { median: r, pointwise_ok, level_pairs_checked: pairs, level_sets_ok }
}
