//! Discretized model domains of unit measure in one and two dimensions.
//!
//! A [`GridDomain`] is a set of lattice cells (spacing `1 / resolution`) whose
//! centers lie inside a reference shape. Every cell carries the measure `1/N`,
//! so the total is exactly one up to rounding. Functions on a domain are
//! [`SampledFunction`]s: one value per cell.

mod checks;
mod sampled;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use checks::{
    inf_far_measure, median_halving_check, splitting_identity_check, MedianHalvingReport,
    SplittingReport,
};
pub use sampled::SampledFunction;

use crate::error::{Error, Result};
use crate::scalar::{unit_ball_volume, Real};

/// Reference shapes, each scaled to unit measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape<T> {
    /// `[0, 1]`.
    Interval,
    /// `[0, 1]²`.
    Square,
    /// Disk of radius `1/√π` centered at the origin.
    Disk,
    /// `{0 < x < 1, |y| < x^β}`, rescaled to unit area.
    BetaCusp(T),
    /// Square room of area 0.8 with a corridor of area 0.2 whose half-width
    /// decays like `d^s` toward its far end.
    SJohn(T),
}

impl<T: Real> Shape<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Interval => 1,
            _ => 2,
        }
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Self::BetaCusp(b) if !(b >= T::one()) || !b.is_finite() => {
                Err(Error::InvalidDomain(format!("beta_cusp needs β ≥ 1, got {b}")))
            }
            Self::SJohn(s) if !(s > T::one()) || !s.is_finite() => {
                Err(Error::InvalidDomain(format!("s_john needs s > 1, got {s}")))
            }
            _ => Ok(self),
        }
    }

    /// Whether the shape is starshaped with respect to a ball.
    pub fn is_lipschitz(&self) -> bool {
        matches!(self, Self::Interval | Self::Square | Self::Disk)
    }

    fn contains(&self, x: T, y: T) -> bool {
        let zero = T::zero();
        match *self {
            Self::Interval => x > zero && x < T::one(),
            Self::Square => x > zero && x < T::one() && y > zero && y < T::one(),
            Self::Disk => x * x + y * y < T::FRAC_1_PI(),
            Self::BetaCusp(beta) => {
                let k = cusp_scale(beta);
                x > zero && x < k && y.abs() < k * (x / k).powf(beta)
            }
            Self::SJohn(s) => {
                let a = room_side::<T>();
                let in_room = x > zero && x < a && y > zero && y < a;
                let in_corridor = x >= a && x < a + a && {
                    let w0 = T::lit(0.1) * (s + T::one()) / a;
                    let half = w0 * ((a + a - x) / a).powf(s);
                    (y - a * T::lit(0.5)).abs() < half
                };
                in_room || in_corridor
            }
        }
    }

    /// Lattice index ranges `(x_lo..x_hi, y_lo..y_hi)` covering the shape.
    fn lattice_box(&self, h: T) -> ([i64; 2], [i64; 2]) {
        let idx = |v: T| (v / h).floor().to_i64().unwrap_or(0);
        match *self {
            Self::Interval => ([-1, idx(T::one()) + 1], [0, 0]),
            Self::Square => ([-1, idx(T::one()) + 1], [-1, idx(T::one()) + 1]),
            Self::Disk => {
                let m = idx(T::FRAC_1_PI().sqrt()) + 2;
                ([-m - 1, m], [-m - 1, m])
            }
            Self::BetaCusp(beta) => {
                let m = idx(cusp_scale(beta)) + 2;
                ([-1, m], [-m - 1, m])
            }
            Self::SJohn(_) => {
                let a = room_side::<T>();
                ([-1, idx(a + a) + 2], [-1, idx(a) + 2])
            }
        }
    }
}

fn cusp_scale<T: Real>(beta: T) -> T {
    ((beta + T::one()) / T::lit(2.0)).sqrt()
}

fn room_side<T: Real>() -> T {
    T::lit(0.8).sqrt()
}

impl<T: Real> fmt::Display for Shape<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Interval => write!(f, "interval"),
            Self::Square => write!(f, "square"),
            Self::Disk => write!(f, "disk"),
            Self::BetaCusp(b) => write!(f, "beta_cusp:{b}"),
            Self::SJohn(s) => write!(f, "s_john:{s}"),
        }
    }
}

/// Parses `interval`, `square`, `disk`, `beta_cusp:β` or `s_john:s`.
impl<T: Real> FromStr for Shape<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let param = |what: &str| -> Result<T> {
            let a = arg.ok_or_else(|| Error::InvalidDomain(format!("{name} needs {what}")))?;
            a.trim()
                .parse::<f64>()
                .map(T::lit)
                .map_err(|_| Error::InvalidDomain(format!("bad {what} '{a}'")))
        };
        let shape = match (name, arg) {
            ("interval", None) => Self::Interval,
            ("square", None) => Self::Square,
            ("disk", None) => Self::Disk,
            ("beta_cusp", _) => Self::BetaCusp(param("β")?),
            ("s_john", _) => Self::SJohn(param("s")?),
            _ => return Err(Error::InvalidDomain(format!("unknown shape '{s}'"))),
        };
        shape.validated()
    }
}

/// Per-axis neighbours of a cell: `[axis][0 = minus, 1 = plus]`.
pub type Neighbors = [[Option<usize>; 2]; 2];

/// Finite-measure domain discretized on a square lattice.
#[derive(Debug, Clone)]
pub struct GridDomain<T> {
    shape: Shape<T>,
    n: usize,
    resolution: usize,
    spacing: T,
    centers: Vec<[T; 2]>,
    lattice: Vec<[i64; 2]>,
    measures: Vec<T>,
    neighbors: Vec<Neighbors>,
    index: HashMap<[i64; 2], usize>,
    anchor: [T; 2],
    sigma: T,
    radial_order: Vec<usize>,
}

/// Builds the lattice discretization of `shape` with `resolution` cells per
/// unit length.
pub fn make_domain<T: Real>(shape: Shape<T>, resolution: usize) -> Result<GridDomain<T>> {
    let shape = shape.validated()?;
    if resolution < 8 {
        return Err(Error::InvalidDomain(format!("resolution {resolution} < 8")));
    }
    let h = T::one() / T::from_usize_lossy(resolution);
    let half = T::lit(0.5);
    let ([x0, x1], [y0, y1]) = shape.lattice_box(h);
    let mut lattice = Vec::new();
    let mut centers = Vec::new();
    for j in y0..=y1 {
        for i in x0..=x1 {
            let x = (T::lit(i as f64) + half) * h;
            let y = if shape.dim() == 1 { T::zero() } else { (T::lit(j as f64) + half) * h };
            if shape.contains(x, y) {
                lattice.push([i, j]);
                centers.push([x, y]);
            }
        }
    }
    let n_cells = centers.len();
    let measures = vec![T::one() / T::from_usize_lossy(n_cells); n_cells];
    GridDomain::assemble(shape, resolution, h, centers, lattice, measures)
}

impl<T: Real> GridDomain<T> {
    /// Assembles a domain from explicit cells; `lattice` holds integer cell
    /// coordinates (second entry 0 in one dimension).
    pub fn from_cells(
        shape: Shape<T>,
        spacing: T,
        centers: Vec<[T; 2]>,
        lattice: Vec<[i64; 2]>,
        measures: Vec<T>,
    ) -> Result<Self> {
        let resolution = (T::one() / spacing).round().to_usize().unwrap_or(0);
        Self::assemble(shape.validated()?, resolution, spacing, centers, lattice, measures)
    }

    fn assemble(
        shape: Shape<T>,
        resolution: usize,
        spacing: T,
        centers: Vec<[T; 2]>,
        lattice: Vec<[i64; 2]>,
        measures: Vec<T>,
    ) -> Result<Self> {
        let n_cells = centers.len();
        if n_cells == 0 {
            return Err(Error::InvalidDomain(format!("{shape} has no cells at this resolution")));
        }
        if lattice.len() != n_cells || measures.len() != n_cells {
            return Err(Error::InvalidDomain("cell arrays have different lengths".into()));
        }
        if !(spacing > T::zero()) {
            return Err(Error::InvalidDomain("spacing must be positive".into()));
        }
        if measures.iter().any(|&m| !(m > T::zero()) || !m.is_finite()) {
            return Err(Error::InvalidDomain("cell measures must be positive".into()));
        }
        let total = measures.iter().fold(T::zero(), |a, &m| a + m);
        if (total - T::one()).abs() > T::lit(1e-10).max(T::epsilon() * T::lit(64.0)) {
            return Err(Error::InvalidDomain(format!("cell measures sum to {total}, not 1")));
        }

        let mut index = HashMap::with_capacity(n_cells);
        for (c, &l) in lattice.iter().enumerate() {
            if index.insert(l, c).is_some() {
                return Err(Error::InvalidDomain(format!("duplicate lattice cell {l:?}")));
            }
        }
        let n = shape.dim();
        let neighbors = lattice
            .iter()
            .map(|&[i, j]| {
                let mut nb: Neighbors = [[None; 2]; 2];
                for axis in 0..n {
                    for (side, d) in [-1i64, 1].into_iter().enumerate() {
                        let key = if axis == 0 { [i + d, j] } else { [i, j + d] };
                        nb[axis][side] = index.get(&key).copied();
                    }
                }
                nb
            })
            .collect();

        let mut dom = Self {
            shape,
            n,
            resolution,
            spacing,
            centers,
            lattice,
            measures,
            neighbors,
            index,
            anchor: [T::zero(); 2],
            sigma: T::zero(),
            radial_order: Vec::new(),
        };
        let excluded = dom.excluded_positions();
        dom.anchor = match shape {
            Shape::Interval => [T::lit(0.5), T::zero()],
            Shape::Square => [T::lit(0.5); 2],
            Shape::Disk => [T::zero(); 2],
            Shape::BetaCusp(_) | Shape::SJohn(_) => dom.deepest_center(&excluded),
        };
        let reach = dom.clearance(dom.anchor, &excluded);
        dom.sigma = (unit_ball_volume::<T>(n) * reach.powi(n as i32)).min(T::one());
        let mut order: Vec<usize> = (0..n_cells).collect();
        let dist: Vec<T> = dom.centers.iter().map(|&c| dom.distance_to_anchor(c)).collect();
        order.sort_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap());
        dom.radial_order = order;
        Ok(dom)
    }

    /// Centers of lattice positions outside the domain that touch a domain
    /// cell (including diagonally).
    fn excluded_positions(&self) -> Vec<[T; 2]> {
        let mut seen = HashMap::new();
        let dys: &[i64] = if self.n == 1 { &[0] } else { &[-1, 0, 1] };
        for &[i, j] in &self.lattice {
            for di in [-1i64, 0, 1] {
                for &dj in dys {
                    let key = [i + di, j + dj];
                    if !self.index.contains_key(&key) {
                        seen.entry(key).or_insert(());
                    }
                }
            }
        }
        let mut keys: Vec<[i64; 2]> = seen.into_keys().collect();
        keys.sort_unstable();
        keys.into_iter().map(|k| self.position_of(k)).collect()
    }

    /// Center of lattice position `k`, extrapolated from the cell grid.
    fn position_of(&self, k: [i64; 2]) -> [T; 2] {
        let [i0, j0] = self.lattice[0];
        let c0 = self.centers[0];
        let x = c0[0] + T::lit((k[0] - i0) as f64) * self.spacing;
        let y = if self.n == 1 { T::zero() } else { c0[1] + T::lit((k[1] - j0) as f64) * self.spacing };
        [x, y]
    }

    fn clearance(&self, p: [T; 2], excluded: &[[T; 2]]) -> T {
        excluded.iter().fold(T::infinity(), |m, &e| m.min(dist(p, e)))
    }

    fn deepest_center(&self, excluded: &[[T; 2]]) -> [T; 2] {
        let mut best = (T::neg_infinity(), self.centers[0]);
        for &c in &self.centers {
            let r = self.clearance(c, excluded);
            if r > best.0 {
                best = (r, c);
            }
        }
        best.1
    }

    pub fn shape(&self) -> Shape<T> {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[[T; 2]] {
        &self.centers
    }

    pub fn measures(&self) -> &[T] {
        &self.measures
    }

    pub fn lattice(&self) -> &[[i64; 2]] {
        &self.lattice
    }

    pub fn neighbors(&self, cell: usize) -> &Neighbors {
        &self.neighbors[cell]
    }

    /// Cell at integer lattice position `k`, if it belongs to the domain.
    pub fn cell_at(&self, k: [i64; 2]) -> Option<usize> {
        self.index.get(&k).copied()
    }

    /// Designated interior point the inscribed ball is centered at.
    pub fn anchor(&self) -> [T; 2] {
        self.anchor
    }

    /// Measure of the largest ball around the anchor containing no outside
    /// lattice position, capped at 1.
    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// `γ_n`.
    pub fn gamma(&self) -> T {
        unit_ball_volume(self.n)
    }

    pub fn distance_to_anchor(&self, p: [T; 2]) -> T {
        dist(p, self.anchor)
    }

    /// `γ_n |x − anchor|^n` at the center of `cell`.
    pub fn ball_measure_at(&self, cell: usize) -> T {
        self.gamma() * self.distance_to_anchor(self.centers[cell]).powi(self.n as i32)
    }

    /// Cells ordered by distance of their centers to the anchor (stable).
    pub fn radial_order(&self) -> &[usize] {
        &self.radial_order
    }

    pub fn total_measure(&self) -> T {
        self.measures.iter().fold(T::zero(), |a, &m| a + m)
    }
}

fn dist<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
