//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// One G7/K15 panel: `(kronrod estimate, |kronrod − gauss|)`.
fn panel<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        k += s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g += s * T::lit(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `∫ₐᵇ f` to relative tolerance `rel_tol` by recursive bisection.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, rel_tol: T) -> T {
    integrate_with_floor(f, a, b, rel_tol, T::zero())
}

/// As [`integrate`], but also accepts an absolute error of `abs_tol`. Needed
/// when the integrand may be pure rounding noise around zero.
pub fn integrate_with_floor<T: Real>(f: impl Fn(T) -> T, a: T, b: T, rel_tol: T, abs_tol: T) -> T {
    if !(a < b) {
        return T::zero();
    }
    let (whole, err) = panel(&f, a, b);
    let tol = (whole.abs() * rel_tol).max(abs_tol).max(T::min_positive_value());
    refine(&f, a, b, whole, err, tol, 0)
}

fn refine<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, whole: T, err: T, tol: T, depth: u32) -> T {
    if err <= tol || depth >= MAX_DEPTH || !err.is_finite() {
        return whole;
    }
    let m = (a + b) * T::lit(0.5);
    let (l, el) = panel(f, a, m);
    let (r, er) = panel(f, m, b);
    let half_tol = tol * T::lit(0.5);
    refine(f, a, m, l, el, half_tol, depth + 1) + refine(f, m, b, r, er, half_tol, depth + 1)
}

/// `∫₀ᵇ f` for integrands that may be singular (but integrable) at 0: the
/// range is split geometrically `[b/2^{k+1}, b/2^k]` until the dyadic
/// contributions are negligible.
pub fn integrate_from_zero<T: Real>(f: impl Fn(T) -> T, b: T, rel_tol: T) -> T {
    integrate_from_zero_with_floor(f, b, rel_tol, T::zero())
}

pub fn integrate_from_zero_with_floor<T: Real>(f: impl Fn(T) -> T, b: T, rel_tol: T, abs_tol: T) -> T {
    if !(b > T::zero()) {
        return T::zero();
    }
    let half = T::lit(0.5);
    let mut acc = T::zero();
    let mut hi = b;
    let mut quiet = 0;
    let mut floor = abs_tol * half;
    for _ in 0..4000 {
        let lo = hi * half;
        if !(lo > T::min_positive_value()) {
            break;
        }
        let part = integrate_with_floor(&f, lo, hi, rel_tol, floor);
        acc += part;
        if part.abs() <= (acc.abs() * rel_tol * T::lit(1e-3)).max(floor) {
            quiet += 1;
            if quiet >= 8 {
                break;
            }
        } else {
            quiet = 0;
        }
        floor *= half;
        hi = lo;
    }
    acc
}

/// Maximizes `f` on `[a, b]` by golden-section search seeded with the endpoints.
pub fn maximize<T: Real>(f: impl Fn(T) -> T, a: T, b: T) -> T {
    let mut best = f(a).max(f(b));
    if !(a < b) {
        return best;
    }
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        best = best.max(f1).max(f2);
        if hi - lo <= T::epsilon() * hi.abs() {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_smooth_functions() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-10);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn handles_endpoint_singularity() {
        let v = integrate_from_zero(|x: f64| x.powf(-0.5), 1.0, 1e-10);
        assert!((v - 2.0).abs() < 1e-8, "{v}");
        let w = integrate_from_zero(|x: f64| x.ln().abs(), 1.0, 1e-10);
        assert!((w - 1.0).abs() < 1e-8, "{w}");
    }

    #[test]
    fn golden_section_finds_interior_max() {
        let m = maximize(|x: f64| -(x - 0.3).powi(2) + 1.0, 0.0, 1.0);
        assert!((m - 1.0).abs() < 1e-12);
    }
}
