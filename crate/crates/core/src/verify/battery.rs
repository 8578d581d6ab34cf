//! Named test-function batteries on grid domains.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{GridDomain, SampledFunction};
use crate::error::{Error, Result};
use crate::hardy::radial_test_function;
use crate::stepfn::StepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BatteryKind {
    #[default]
    Full,
    /// Constants only; every harness skips them.
    Constants,
}

#[derive(Debug, Clone)]
pub struct Member {
    pub name: String,
    pub f: SampledFunction<f64>,
}

#[derive(Debug, Clone)]
pub struct Battery {
    pub members: Vec<Member>,
}

impl Battery {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Member> {
        self.members.iter()
    }
}

/// Lattice distance (in units of length) from each cell to the outside.
fn boundary_distance(d: &GridDomain<f64>) -> Vec<f64> {
    let mut hops = vec![usize::MAX; d.len()];
    let mut queue = VecDeque::new();
    for c in 0..d.len() {
        let nb = d.neighbors(c);
        if (0..d.dim()).any(|axis| nb[axis][0].is_none() || nb[axis][1].is_none()) {
            hops[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        let nb = *d.neighbors(c);
        for next in nb[..d.dim()].iter().flatten().flatten() {
            if hops[*next] == usize::MAX {
                hops[*next] = hops[c] + 1;
                queue.push_back(*next);
            }
        }
    }
    hops.into_iter().map(|k| (k as f64 + 0.5) * d.spacing()).collect()
}

/// At least 20 functions: affine, quadratic, radial bumps, tensor sinusoids,
/// distance-to-boundary powers, seeded low-frequency Fourier sums and two
/// radial Hardy test functions. Random members depend on `seed` only, so the
/// same battery is drawn at every resolution.
pub fn standard_battery(domain: &Arc<GridDomain<f64>>, seed: u64) -> Result<Battery> {
    let [x0, y0] = domain.anchor();
    let mut out: Vec<Member> = Vec::new();
    let mut push = |name: String, f: SampledFunction<f64>| out.push(Member { name, f });
    let d = domain.clone();
    let gen = |g: &dyn Fn(f64, f64) -> f64| SampledFunction::from_fn(d.clone(), |[x, y]| g(x, y));

    push("affine_x".into(), gen(&|x, _| x)?);
    push("affine_mixed".into(), gen(&|x, y| 0.5 * x + y - 0.2)?);
    push("affine_tilt".into(), gen(&|x, y| 2.0 * x - y + 0.3)?);
    push("quadratic".into(), gen(&|x, y| (x - x0).powi(2) + (y - y0).powi(2))?);
    for (k, r) in [0.2, 0.35, 0.5].into_iter().enumerate() {
        let bump = move |x: f64, y: f64| {
            let q = ((x - x0).powi(2) + (y - y0).powi(2)) / (r * r);
            (1.0 - q).max(0.0).powi(2)
        };
        push(format!("bump_{k}"), gen(&bump)?);
    }
    push("gaussian".into(), gen(&|x, y| (-((x - x0).powi(2) + (y - y0).powi(2)) / 0.05).exp())?);
    for (k, l) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
        let s = move |x: f64, y: f64| (PI * (k * x + l * y) + 0.3 * l).sin() * (PI * l * y).cos();
        push(format!("sinusoid_{k}_{l}"), gen(&s)?);
    }
    let dist = boundary_distance(domain);
    for e in [0.5, 1.0, 2.0] {
        let values = dist.iter().map(|&v| v.powf(e)).collect();
        push(format!("boundary_power_{e}"), SampledFunction::new(domain.clone(), values)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in 0..6 {
        let mut coef = [[0.0; 4]; 4];
        for (k, row) in coef.iter_mut().enumerate() {
            for (l, c) in row.iter_mut().enumerate() {
                *c = rng.gen_range(-1.0..1.0) / (1.0 + (k + l) as f64).powi(2);
            }
        }
        coef[0][0] = 0.0;
        coef[1][0] += 0.5;
        let fourier = move |x: f64, y: f64| {
            let mut acc = 0.0;
            for (k, row) in coef.iter().enumerate() {
                for (l, c) in row.iter().enumerate() {
                    acc += c * (PI * k as f64 * x).cos() * (PI * l as f64 * y).cos();
                }
            }
            acc
        };
        push(format!("fourier_{m}"), gen(&fourier)?);
    }
    let sigma = domain.sigma();
    let ind = StepFunction::new(vec![0.0, 0.5 * sigma, 1.0], vec![1.0, 0.0])?;
    push("hardy_indicator".into(), radial_test_function(&ind, domain.clone())?);
    let two = if sigma < 1.0 {
        StepFunction::new(vec![0.0, 0.25 * sigma, sigma, 1.0], vec![2.0, 1.0, 0.0])?
    } else {
        StepFunction::new(vec![0.0, 0.25, 1.0], vec![2.0, 1.0])?
    };
    push("hardy_two_step".into(), radial_test_function(&two, domain.clone())?);
    Ok(Battery { members: out })
}

/// Three constants.
pub fn constant_battery(domain: &Arc<GridDomain<f64>>) -> Result<Battery> {
    let members = [0.0, 1.0, -2.5]
        .into_iter()
        .enumerate()
        .map(|(k, c)| Ok(Member { name: format!("constant_{k}"), f: SampledFunction::constant(domain.clone(), c)? }))
        .collect::<Result<_>>()?;
    Ok(Battery { members })
}

pub fn battery(domain: &Arc<GridDomain<f64>>, kind: BatteryKind, seed: u64) -> Result<Battery> {
    let b = match kind {
        BatteryKind::Full => standard_battery(domain, seed)?,
        BatteryKind::Constants => constant_battery(domain)?,
    };
    if b.is_empty() {
        return Err(Error::InvalidParams("empty battery".into()));
    }
    Ok(b)
}
