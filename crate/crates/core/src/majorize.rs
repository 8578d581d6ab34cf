//! Majorization of prefix integrals from a pointwise and an averaged bound,
//! with constructive certificates for finite interval families.
//!
//! Given `g ≤ C₁ h**` and `∫₀ᵗ g ≤ C₂ ∫₀ᵗ h*`, every finite family of disjoint
//! intervals satisfies `Σ ∫_{aᵢ}^{bᵢ} g ≤ 4 max(C₁, C₂) ∫₀^{Σ(bᵢ−aᵢ)} h*`.
//! Functions live on `(0, 1]` and are extended by zero beyond 1.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::ratio;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stepfn::{MonotoneStep, StepFunction};

/// Ordered disjoint intervals `0 < a₁ < b₁ ≤ a₂ < … < b_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamily<T> {
    intervals: Vec<(T, T)>,
}

impl<T: Real> IntervalFamily<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidFamily("family needs at least one interval".into()));
        }
        if !(intervals[0].0 > T::zero()) {
            return Err(Error::InvalidFamily("first endpoint must be positive".into()));
        }
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !(a < b) || !b.is_finite() {
                return Err(Error::InvalidFamily(format!("interval {i} is not (a, b) with a < b < ∞")));
            }
            if i > 0 && a < intervals[i - 1].1 {
                return Err(Error::InvalidFamily(format!("interval {i} overlaps its predecessor")));
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `Σ_{i ≥ j} log(bᵢ/aᵢ)`.
    pub fn log_tail(&self, j: usize) -> T {
        self.intervals[j..].iter().fold(T::zero(), |s, &(a, b)| s + (b / a).ln())
    }

    /// `Σ_{i ≥ j} (bᵢ − aᵢ)`.
    pub fn length_tail(&self, j: usize) -> T {
        self.intervals[j..].iter().fold(T::zero(), |s, &(a, b)| s + (b - a))
    }

    /// `Σ_{i ≥ j} ∫_{aᵢ}^{bᵢ} g`.
    pub fn integral_tail(&self, g: &StepFunction<T>, j: usize) -> T {
        self.intervals[j..].iter().fold(T::zero(), |s, &(a, b)| s + g.integral_between(a, b))
    }
}

/// Hypothesis constants `C₁ = sup g/h**` and `C₂ = sup ∫₀ᵗ g / ∫₀ᵗ h*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hypotheses<T> {
    pub c1: T,
    pub c2: T,
}

impl<T: Real> Hypotheses<T> {
    pub fn constant(&self) -> T {
        self.c1.max(self.c2)
    }

    pub fn finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }
}

/// Sorted union of two partitions of `(0, 1]`.
fn refinement<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a.iter().chain(b).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup();
    out
}

/// `sup_t G(t)/H(t)` for prefix integrals of step functions. Both are linear
/// on each piece of the common refinement, so the ratio is monotone there and
/// the supremum sits at a breakpoint (the limit at 0 equals the value at the
/// first breakpoint).
fn prefix_ratio_sup<T: Real>(g: &StepFunction<T>, h: &MonotoneStep<T>) -> T {
    let bps = refinement(g.breakpoints(), h.breakpoints());
    bps[1..]
        .iter()
        .fold(T::zero(), |m, &t| m.max(ratio(g.integral_between(T::zero(), t), h.prefix_unchecked(t))))
}

/// Computes `C₁` and `C₂` exactly over the piece structure; infinite when
/// `h ≡ 0` but `g ≢ 0`.
pub fn check_hypotheses<T: Real>(g: &StepFunction<T>, h: &StepFunction<T>) -> Result<Hypotheses<T>> {
    if !g.is_nonnegative() || !h.is_nonnegative() {
        return Err(Error::Hypotheses("g and h must be nonnegative".into()));
    }
    let hs = h.rearrange();
    // h** is nonincreasing, so g/h** peaks at the right end of each piece.
    let bps = refinement(g.breakpoints(), hs.breakpoints());
    let mut c1 = T::zero();
    for w in bps.windows(2) {
        let mid = (w[0] + w[1]) * T::lit(0.5);
        c1 = c1.max(ratio(g.eval(mid), hs.double_star(w[1])));
    }
    let c2 = prefix_ratio_sup(g, &hs);
    Ok(Hypotheses { c1, c2 })
}

/// `sup_t ∫₀ᵗ g* / ∫₀ᵗ h*`.
pub fn majorization_constant<T: Real>(g: &StepFunction<T>, h: &StepFunction<T>) -> T {
    prefix_ratio_sup(g.rearrange().as_step(), &h.rearrange())
}

/// Left and right sides of the single-family estimate
/// `Σ_{i≥j} ∫ g ≤ C₁ (1 + Σ_{i≥j} log(bᵢ/aᵢ)) ∫₀^{Σ_{i≥j}(bᵢ−aᵢ)} h*`.
pub fn dd_bound<T: Real>(
    g: &StepFunction<T>,
    h: &StepFunction<T>,
    family: &IntervalFamily<T>,
    j: usize,
    c1: T,
) -> (T, T) {
    let hs = h.rearrange();
    let lhs = family.integral_tail(g, j);
    let rhs = c1 * (T::one() + family.log_tail(j)) * hs.prefix_unchecked(family.length_tail(j).min(T::one()));
    (lhs, rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `Σ log(bᵢ/aᵢ) ≤ 1`: the family estimate applies to the whole family.
    DirectJ1,
    /// The family is split at `c_{j₀}` inside interval `j₀`.
    SplitJ0,
}

/// One inequality `lhs ≤ rhs` of the final chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubBound<T> {
    pub name: String,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationCertificate<T> {
    pub branch: Branch,
    /// Zero-based index of the split interval.
    pub j0: Option<usize>,
    pub c_j0: Option<T>,
    /// `log(b_{j₀}/c_{j₀}) + Σ_{i>j₀} log(bᵢ/aᵢ)` (the whole log sum on the
    /// direct branch).
    pub log_sum: T,
    pub c1: T,
    pub c2: T,
    pub sub_bounds: Vec<SubBound<T>>,
}

const BISECTION_STEPS: usize = 60;

fn prefix_h<T: Real>(hs: &MonotoneStep<T>, len: T) -> T {
    hs.prefix_unchecked(len.min(T::one()))
}

/// Builds the certificate for `family`: the direct branch when the log sum is
/// at most 1, otherwise the split at the last interval where the running log
/// sum (from the right) exceeds 1, with `c_{j₀}` bisected so that the split log
/// sum lands on 2 (or on the full sum when that is below 2).
pub fn interval_bound_certificate<T: Real>(
    g: &StepFunction<T>,
    h: &StepFunction<T>,
    family: &IntervalFamily<T>,
) -> Result<MajorizationCertificate<T>> {
    let hyp = check_hypotheses(g, h)?;
    if !hyp.finite() {
        return Err(Error::Hypotheses("hypothesis constants are infinite".into()));
    }
    let hs = h.rearrange();
    let c = hyp.constant();
    let four = T::lit(4.0);
    let total_len = family.length_tail(0);
    let total = family.integral_tail(g, 0);
    let log_total = family.log_tail(0);

    if log_total <= T::one() {
        let h_total = prefix_h(&hs, total_len);
        return Ok(MajorizationCertificate {
            branch: Branch::DirectJ1,
            j0: None,
            c_j0: None,
            log_sum: log_total,
            c1: hyp.c1,
            c2: hyp.c2,
            sub_bounds: vec![
                SubBound { name: "dd".into(), lhs: total, rhs: hyp.c1 * (T::one() + log_total) * h_total },
                SubBound { name: "total".into(), lhs: total, rhs: four * c * h_total },
            ],
        });
    }

    let m = family.len();
    let j0 = (0..m).rev().find(|&j| family.log_tail(j) > T::one()).expect("log sum exceeds 1");
    let (a, b) = family.intervals()[j0];
    let tail = family.log_tail(j0 + 1);
    let two = T::lit(2.0);
    let split = |x: T| (b / x).ln() + tail;
    let cj = if split(a) <= two {
        a
    } else {
        // split is decreasing in x; keep `hi` on the side where split ≤ 2.
        let (mut lo, mut hi) = (a, b);
        for _ in 0..BISECTION_STEPS {
            let mid = (lo + hi) * T::lit(0.5);
            if split(mid) > two {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let log_sum = split(cj);
    let l_tail = (b - cj) + family.length_tail(j0 + 1);
    let h_tail = prefix_h(&hs, l_tail);
    let head: T = family.intervals()[..j0].iter().fold(T::zero(), |s, &(x, y)| s + g.integral_between(x, y))
        + g.integral_between(a, cj);
    let tail_mass = g.integral_between(cj, b) + family.integral_tail(g, j0 + 1);
    Ok(MajorizationCertificate {
        branch: Branch::SplitJ0,
        j0: Some(j0),
        c_j0: Some(cj),
        log_sum,
        c1: hyp.c1,
        c2: hyp.c2,
        sub_bounds: vec![
            SubBound { name: "head".into(), lhs: head, rhs: hyp.c2 * h_tail },
            SubBound { name: "tail".into(), lhs: tail_mass, rhs: hyp.c1 * (T::one() + log_sum) * h_tail },
            SubBound { name: "total".into(), lhs: total, rhs: four * c * prefix_h(&hs, total_len) },
        ],
    })
}

/// Outcome of an independent certificate audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub first_violation: Option<String>,
}

impl CertificateCheck {
    fn fail(what: impl Into<String>) -> Self {
        Self { valid: false, first_violation: Some(what.into()) }
    }
}

fn leq<T: Real>(lhs: T, rhs: T) -> bool {
    lhs <= rhs + T::lit(1e-12) * rhs.abs().max(T::one())
}

/// Recomputes every quantity of `cert` from `g`, `h` and `family` and checks
/// all claimed inequalities. The first failure is named.
pub fn verify_certificate<T: Real>(
    cert: &MajorizationCertificate<T>,
    g: &StepFunction<T>,
    h: &StepFunction<T>,
    family: &IntervalFamily<T>,
) -> CertificateCheck {
    let hyp = match check_hypotheses(g, h) {
        Ok(hyp) if hyp.finite() => hyp,
        _ => return CertificateCheck::fail("h1/h2"),
    };
    if !leq(hyp.c1, cert.c1) {
        return CertificateCheck::fail("h1");
    }
    if !leq(hyp.c2, cert.c2) {
        return CertificateCheck::fail("h2");
    }
    let hs = h.rearrange();
    let c = cert.c1.max(cert.c2);
    let four = T::lit(4.0);
    let total_len = family.length_tail(0);
    let total = family.integral_tail(g, 0);
    let h_total = prefix_h(&hs, total_len);
    let log_total = family.log_tail(0);

    match cert.branch {
        Branch::DirectJ1 => {
            if log_total > T::one() {
                return CertificateCheck::fail("direct branch with log sum above 1");
            }
            if !leq(total, cert.c1 * (T::one() + log_total) * h_total) {
                return CertificateCheck::fail("dd");
            }
        }
        Branch::SplitJ0 => {
            let (Some(j0), Some(cj)) = (cert.j0, cert.c_j0) else {
                return CertificateCheck::fail("split branch without j0 / c_j0");
            };
            if j0 >= family.len() {
                return CertificateCheck::fail("j0 out of range");
            }
            let (a, b) = family.intervals()[j0];
            if !(cj >= a && cj <= b) {
                return CertificateCheck::fail("c_j0 outside [a_j0, b_j0]");
            }
            let log_sum = (b / cj).ln() + family.log_tail(j0 + 1);
            if !(log_sum > T::one() && log_sum <= T::lit(2.0) * (T::one() + T::lit(1e-12))) {
                return CertificateCheck::fail("dd1");
            }
            let l_tail = (b - cj) + family.length_tail(j0 + 1);
            if !(cj < l_tail) {
                return CertificateCheck::fail("aa1");
            }
            let h_tail = prefix_h(&hs, l_tail);
            let head = family.intervals()[..j0]
                .iter()
                .fold(T::zero(), |s, &(x, y)| s + g.integral_between(x, y))
                + g.integral_between(a, cj);
            // ∫₀^c g ≤ C₂ ∫₀^c h* ≤ C₂ ∫₀^{L} h*, using c < L.
            if !leq(head, g.integral_between(T::zero(), cj))
                || !leq(g.integral_between(T::zero(), cj), cert.c2 * prefix_h(&hs, cj))
                || !leq(head, cert.c2 * h_tail)
            {
                return CertificateCheck::fail("head");
            }
            let tail_mass = g.integral_between(cj, b) + family.integral_tail(g, j0 + 1);
            if !leq(tail_mass, cert.c1 * (T::one() + log_sum) * h_tail)
                || !leq(tail_mass, T::lit(3.0) * cert.c1 * h_tail)
            {
                return CertificateCheck::fail("tail");
            }
            if !leq(head + tail_mass, four * c * h_tail) {
                return CertificateCheck::fail("total");
            }
        }
    }
    if !leq(total, four * c * h_total) {
        return CertificateCheck::fail("total");
    }
    for sb in &cert.sub_bounds {
        if !leq(sb.lhs, sb.rhs) {
            return CertificateCheck::fail(sb.name.clone());
        }
    }
    CertificateCheck { valid: true, first_violation: None }
}

/// Summary of a randomized audit of the majorization bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub pairs: usize,
    /// `max majorization_constant / max(C₁, C₂)` over the battery.
    pub max_ratio: f64,
    /// The proven bound on that ratio.
    pub bound: f64,
    pub certificates: usize,
    pub split_certificates: usize,
    pub certificate_failures: usize,
    pub pass: bool,
}

/// Random nonnegative step function with up to `max_pieces` pieces on a
/// random partition.
pub fn random_step<R: Rng>(rng: &mut R, max_pieces: usize) -> StepFunction<f64> {
    let m = rng.gen_range(1..=max_pieces.max(1));
    let mut cuts: Vec<f64> = (0..m.saturating_sub(1)).map(|_| rng.gen_range(0.0..1.0)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut bps = vec![0.0];
    bps.extend(cuts);
    bps.push(1.0);
    bps.dedup();
    let vals = (0..bps.len() - 1)
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.0..5.0) })
        .collect();
    StepFunction::new(bps, vals).expect("sorted cuts form a partition")
}

/// Random ordered family inside `(0, 1]`, often with a tiny first endpoint so
/// the log sum exceeds 1.
pub fn random_family<R: Rng>(rng: &mut R) -> IntervalFamily<f64> {
    let m = rng.gen_range(1..=5);
    let lo: f64 = if rng.gen_bool(0.7) { 10f64.powf(rng.gen_range(-4.0..-1.0)) } else { rng.gen_range(0.05..0.5) };
    let mut pts: Vec<f64> = (0..2 * m).map(|_| rng.gen_range(lo..1.0)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() % 2 == 1 {
        pts.pop();
    }
    if pts.len() < 2 {
        pts = vec![lo, 1.0];
    }
    let intervals = pts.chunks(2).map(|c| (c[0], c[1])).collect();
    IntervalFamily::new(intervals).expect("sorted points form an ordered family")
}

/// Random `(g, h)` pair: independent steps, permutations, and maximal averages.
pub fn random_pair<R: Rng>(rng: &mut R) -> (StepFunction<f64>, StepFunction<f64>) {
    let h = random_step(rng, 12);
    let h = if h.integral() == 0.0 { StepFunction::constant(1.0) } else { h };
    let g = match rng.gen_range(0..4) {
        0 => random_step(rng, 12),
        1 => h.rearrange().into_step(),
        2 => {
            // g = h** sampled on a fine partition (stays below h**).
            let hs = h.rearrange();
            StepFunction::from_fn(64, |t| hs.double_star(t + 1.0 / 64.0)).expect("finite")
        }
        _ => {
            let mut v = h.values().to_vec();
            v.reverse();
            let mut lens: Vec<f64> = (0..h.len()).map(|i| h.piece_length(i)).collect();
            lens.reverse();
            let mut bps = vec![0.0];
            let mut acc = 0.0;
            for l in &lens[..lens.len() - 1] {
                acc += l;
                bps.push(acc);
            }
            bps.push(1.0);
            StepFunction::new(bps, v).unwrap_or_else(|_| h.clone())
        }
    };
    (g, h)
}

/// Checks `majorization_constant ≤ 4 max(C₁, C₂)` and certifies a random
/// family for each of `pairs` random pairs drawn from `seed`.
pub fn audit(pairs: usize, seed: u64) -> AuditSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    let mut certificates = 0;
    let mut split = 0;
    let mut failures = 0;
    let mut counted = 0;
    for _ in 0..pairs {
        let (g, h) = random_pair(&mut rng);
        let Ok(hyp) = check_hypotheses(&g, &h) else { continue };
        if !hyp.finite() {
            continue;
        }
        counted += 1;
        let c = hyp.constant();
        if c > 0.0 {
            max_ratio = max_ratio.max(majorization_constant(&g, &h) / c);
        }
        let family = random_family(&mut rng);
        match interval_bound_certificate(&g, &h, &family) {
            Ok(cert) => {
                certificates += 1;
                if cert.branch == Branch::SplitJ0 {
                    split += 1;
                }
                if !verify_certificate(&cert, &g, &h, &family).valid {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let bound = 4.0;
    AuditSummary {
        pairs: counted,
        max_ratio,
        bound,
        certificates,
        split_certificates: split,
        certificate_failures: failures,
        pass: max_ratio <= bound * (1.0 + 1e-12) && failures == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::RISpaceSpec;
    use crate::stepfn::Flavor;

    fn step(v: Vec<f64>) -> StepFunction<f64> {
        StepFunction::uniform(v).unwrap()
    }

    #[test]
    fn hypotheses_examples() {
        let h = step(vec![1.0, 3.0, 2.0, 0.5]);
        let hs = h.rearrange().into_step();
        let hyp = check_hypotheses(&hs, &h).unwrap();
        assert!(hyp.c1 <= 1.0 + 1e-15);
        assert!((hyp.c2 - 1.0).abs() < 1e-15);
        let zero = StepFunction::constant(0.0);
        assert_eq!(check_hypotheses(&zero, &h).unwrap(), Hypotheses { c1: 0.0, c2: 0.0 });
        let inf = check_hypotheses(&h, &zero).unwrap();
        assert!(inf.c1.is_infinite() && inf.c2.is_infinite());
    }

    #[test]
    fn averaged_majorant() {
        let h = step(vec![4.0, 1.0, 1.0, 0.0]);
        let hs = h.rearrange();
        let g = StepFunction::from_fn(512, |t| hs.double_star(t + 1.0 / 512.0)).unwrap();
        let hyp = check_hypotheses(&g, &h).unwrap();
        assert!(hyp.c1 <= 1.0 + 1e-12 && hyp.c1 > 0.9);
        assert!(hyp.c2.is_finite() && hyp.c2 >= 1.0);
    }

    #[test]
    fn majorization_constant_examples() {
        let h = step(vec![1.0, 3.0, 2.0, 0.5]);
        assert!((majorization_constant(&h, &h) - 1.0).abs() < 1e-15);
        let perm = step(vec![0.5, 2.0, 1.0, 3.0]);
        assert!((majorization_constant(&perm, &h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn direct_branch_for_short_family() {
        let h = step(vec![2.0, 1.0]);
        let fam = IntervalFamily::new(vec![(0.4, 0.9)]).unwrap();
        let cert = interval_bound_certificate(&h, &h, &fam).unwrap();
        assert_eq!(cert.branch, Branch::DirectJ1);
        assert!(verify_certificate(&cert, &h, &h, &fam).valid);
    }

    #[test]
    fn split_branch_example() {
        let h = step(vec![3.0, 1.0, 2.0, 0.5]);
        let g = step(vec![1.0, 2.0, 0.5, 1.0]);
        let fam = IntervalFamily::new(vec![(0.01, 0.5), (0.6, 0.9)]).unwrap();
        assert!(fam.log_tail(0) > 1.0);
        let cert = interval_bound_certificate(&g, &h, &fam).unwrap();
        assert_eq!(cert.branch, Branch::SplitJ0);
        assert!(cert.log_sum > 1.0 && cert.log_sum <= 2.0 + 1e-12);
        let check = verify_certificate(&cert, &g, &h, &fam);
        assert!(check.valid, "{check:?}");
    }

    #[test]
    fn perturbed_split_point_is_caught() {
        let h = step(vec![3.0, 1.0, 2.0, 0.5]);
        let fam = IntervalFamily::new(vec![(0.01, 0.5), (0.6, 0.9)]).unwrap();
        let mut cert = interval_bound_certificate(&h, &h, &fam).unwrap();
        cert.c_j0 = Some(0.011);
        let check = verify_certificate(&cert, &h, &h, &fam);
        assert!(!check.valid);
        assert_eq!(check.first_violation.as_deref(), Some("dd1"));
    }

    #[test]
    fn malformed_families_are_rejected() {
        assert!(IntervalFamily::<f64>::new(vec![]).is_err());
        assert!(IntervalFamily::new(vec![(0.0, 0.5)]).is_err());
        assert!(IntervalFamily::new(vec![(0.2, 0.5), (0.4, 0.6)]).is_err());
        assert!(IntervalFamily::new(vec![(0.5, 0.2)]).is_err());
    }

    #[test]
    fn family_estimate_holds_on_random_tails() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let (g, h) = random_pair(&mut rng);
            let hyp = check_hypotheses(&g, &h).unwrap();
            let fam = random_family(&mut rng);
            for j in 0..fam.len() {
                let (lhs, rhs) = dd_bound(&g, &h, &fam, j, hyp.c1);
                assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-15, "{lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn norms_inherit_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let spaces: Vec<RISpaceSpec<f64>> = vec![
            RISpaceSpec::lebesgue(1.0).unwrap(),
            RISpaceSpec::lebesgue(2.0).unwrap(),
            RISpaceSpec::Sup,
            RISpaceSpec::lorentz(3.0, 2.0, Flavor::Classical).unwrap(),
        ];
        for _ in 0..100 {
            let (g, h) = random_pair(&mut rng);
            let c = check_hypotheses(&g, &h).unwrap().constant();
            for x in spaces.iter().filter(|x| x.respects_majorization()) {
                let lhs = x.norm_step(&g).unwrap();
                let rhs = 4.0 * c * x.norm_step(&h).unwrap();
                assert!(lhs <= rhs * (1.0 + 1e-12), "{x}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn audit_passes() {
        let s = audit(200, 5);
        assert!(s.pass, "{s:?}");
        assert!(s.split_certificates > 0);
    }
}
