//! Parametrized rearrangement-invariant norms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;
use crate::stepfn::{check_lorentz_indices, rearrange_pairs, Flavor, MonotoneStep, StepFunction};

/// Relative tolerance for norms that need quadrature.
pub const QUAD_REL_TOL: f64 = 1e-8;

/// Pieces used when a non-monotone profile must be rearranged numerically.
pub const REARRANGE_PIECES: usize = 1 << 12;

/// An r.i. norm on `(0, 1]` (and, through rearrangement, on any unit-measure domain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RISpaceSpec<T> {
    /// `L^p`, `1 ≤ p < ∞`.
    Lebesgue(T),
    Lorentz { p: T, q: T, flavor: Flavor },
    /// `L^∞`.
    Sup,
}

impl<T: Real> RISpaceSpec<T> {
    pub fn lebesgue(p: T) -> Result<Self> {
        if p.is_infinite() {
            return Ok(Self::Sup);
        }
        Self::Lebesgue(p).validated()
    }

    pub fn lorentz(p: T, q: T, flavor: Flavor) -> Result<Self> {
        Self::Lorentz { p, q, flavor }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Self::Lebesgue(p) if !(p >= T::one()) || p.is_infinite() => {
                Err(Error::NonNormable(format!("Lebesgue exponent {p} must lie in [1, ∞)")))
            }
            Self::Lorentz { p, q, flavor } => check_lorentz_indices(p, q, flavor).map(|_| self),
            _ => Ok(self),
        }
    }

    /// Whether Hardy's lemma applies: the norm is monotone under `∫₀ᵗ g* ≤ ∫₀ᵗ h*`.
    /// True for `L^p`, `L^∞` and classical `L^{p,q}` with `q ≤ p`.
    pub fn respects_majorization(&self) -> bool {
        match *self {
            Self::Lebesgue(_) | Self::Sup => true,
            Self::Lorentz { p, q, flavor } => flavor == Flavor::Classical && q <= p,
        }
    }

    pub fn norm_monotone(&self, f: &MonotoneStep<T>) -> Result<T> {
        match *self {
            Self::Lebesgue(p) => f.lorentz_norm(p, p, Flavor::Classical),
            Self::Sup => Ok(f.values()[0]),
            Self::Lorentz { p, q, flavor } => f.lorentz_norm(p, q, flavor),
        }
    }

    pub fn norm_step(&self, f: &StepFunction<T>) -> Result<T> {
        self.norm_monotone(&f.rearrange())
    }

    /// Norm of `|values|` with respect to the atom measures `weights` (summing to 1).
    pub fn norm_atoms(&self, values: &[T], weights: &[T]) -> Result<T> {
        match *self {
            Self::Lebesgue(p) => {
                let mut acc = T::zero();
                for (&v, &w) in values.iter().zip(weights) {
                    acc += v.abs().powf(p) * w;
                }
                Ok(acc.powf(p.recip()))
            }
            Self::Sup => Ok(values.iter().fold(T::zero(), |m, v| m.max(v.abs()))),
            Self::Lorentz { .. } => {
                let pairs = values.iter().zip(weights).map(|(&v, &w)| (v.abs(), w)).collect();
                self.norm_monotone(&rearrange_pairs(pairs)?)
            }
        }
    }

    /// Norm of a piecewise power sum. Monotone profiles are handled in closed
    /// form or by quadrature; others are discretized and rearranged first.
    pub fn norm_profile(&self, g: &Profile<T>) -> Result<T> {
        let tol = T::lit(QUAD_REL_TOL);
        match *self {
            Self::Lebesgue(p) => Ok(g.abs_pow_integral(p, T::zero(), tol).powf(p.recip())),
            Self::Sup => Ok(g.sup_weighted(T::zero())),
            Self::Lorentz { p, q, flavor } => {
                if !(g.is_nonincreasing() && g.is_nonnegative()) {
                    return self.norm_monotone(&g.rearranged(REARRANGE_PIECES)?);
                }
                let inv_p = if p.is_infinite() { T::zero() } else { p.recip() };
                match (flavor, q.is_infinite()) {
                    (Flavor::Classical, true) => Ok(g.sup_weighted(inv_p)),
                    (Flavor::Classical, false) => {
                        Ok(g.abs_pow_integral(q, q * inv_p - T::one(), tol).powf(q.recip()))
                    }
                    (Flavor::Oscillation, true) => Ok(g.oscillation_sup_weighted(inv_p)),
                    (Flavor::Oscillation, false) => Ok(g
                        .oscillation_pow_integral(q, q * inv_p - T::one(), tol)
                        .powf(q.recip())),
                }
            }
        }
    }

    /// Fundamental function `φ(s) = ‖χ_E‖` for `|E| = s ∈ (0, 1]`, evaluated as
    /// the exact norm of an indicator.
    pub fn fundamental(&self, s: T) -> Result<T> {
        let ind = StepFunction::indicator(s)?.rearrange();
        self.norm_monotone(&ind)
    }

    /// Closed-form fundamental function where one exists: `s^{1/p}` for `L^p`,
    /// `(p/q)^{1/q} s^{1/p}` for classical `L^{p,q}`, `1` for `L^∞`.
    pub fn fundamental_closed_form(&self, s: T) -> Option<T> {
        match *self {
            Self::Lebesgue(p) => Some(s.powf(p.recip())),
            Self::Sup => Some(T::one()),
            Self::Lorentz { p, q, flavor: Flavor::Classical } => {
                if q.is_infinite() {
                    Some(if p.is_infinite() { T::one() } else { s.powf(p.recip()) })
                } else {
                    Some((p / q).powf(q.recip()) * s.powf(p.recip()))
                }
            }
            Self::Lorentz { .. } => None,
        }
    }
}

fn fmt_index<T: Real>(x: T) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x}")
    }
}

impl<T: Real> fmt::Display for RISpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Lebesgue(p) => write!(f, "lebesgue:{}", fmt_index(p)),
            Self::Sup => write!(f, "sup"),
            Self::Lorentz { p, q, flavor: Flavor::Classical } => {
                write!(f, "lorentz:{},{}", fmt_index(p), fmt_index(q))
            }
            Self::Lorentz { p, q, flavor: Flavor::Oscillation } => {
                write!(f, "lorentz-osc:{},{}", fmt_index(p), fmt_index(q))
            }
        }
    }
}

fn parse_index<T: Real>(s: &str) -> Result<T> {
    let s = s.trim();
    if matches!(s, "inf" | "infinity" | "∞") {
        return Ok(T::infinity());
    }
    s.parse::<f64>()
        .map(T::lit)
        .map_err(|_| Error::InvalidParams(format!("bad exponent '{s}'")))
}

/// Parses `lebesgue:P`, `lorentz:P,Q`, `lorentz-osc:P,Q` or `sup`
/// (exponents may be `inf`).
impl<T: Real> FromStr for RISpaceSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "sup" || s == "linf" {
            return Ok(Self::Sup);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParams(format!("unknown space '{s}'")))?;
        match kind {
            "lebesgue" => Self::lebesgue(parse_index(rest)?),
            "lorentz" | "lorentz-osc" => {
                let (p, q) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidParams(format!("'{s}' needs P,Q")))?;
                let flavor =
                    if kind == "lorentz" { Flavor::Classical } else { Flavor::Oscillation };
                Self::lorentz(parse_index(p)?, parse_index(q)?, flavor)
            }
            _ => Err(Error::InvalidParams(format!("unknown space '{s}'"))),
        }
    }
}
