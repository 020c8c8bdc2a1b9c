//! Achievable codebook-rate regions when both transmitters may choose their
//! codeword length and power: per-state polyhedra in the `(R_c1, R_c2)`
//! plane, their union over a power grid, and the symmetric special case.

mod polygon;
pub mod sym;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{Affine, Strict, NU2, R1, R2};
use crate::constraints::SymbolicLayout;
use crate::error::{domain, Result};
use crate::geometry::{enumerate_states, mild_check, BurstLayout, ChannelState, Shape, User, DEFAULT_TOL};
use crate::model::{cap, power_cap, rate_pair, RatePair, UserParams};
use crate::numeric::bisect;
use crate::reliability::decompose;

pub use polygon::{clip_polygon, polygon_area};
pub use sym::{j_star_cells, rc_max_single, sym_curves, sym_region, sym_region_general, JStarCells, SymCurves, SymParams};

/// `a·R_c1 + b·R_c2 < c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.a * x + self.b * y < self.c
    }
}

/// Intersection of strict half-planes. `infeasible` records a constant row
/// that can never hold.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Polyhedron {
    pub rows: Vec<HalfPlane>,
    pub infeasible: bool,
}

impl Polyhedron {
    fn push_form(&mut self, f: &Affine, alpha: f64) {
        let a = f.coef[R1];
        let b = f.coef[R2];
        let c = -(f.constant + f.coef[NU2] * alpha);
        if a == 0.0 && b == 0.0 {
            if !(0.0 < c) {
                self.infeasible = true;
            }
        } else {
            self.rows.push(HalfPlane { a, b, c });
        }
    }

    fn from_strict(rows: &[Strict], alpha: f64) -> Self {
        let mut p = Self::default();
        for r in rows {
            p.push_form(&r.0, alpha);
        }
        p
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        !self.infeasible && self.rows.iter().all(|h| h.contains(x, y))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Polyhedron { rows, infeasible: self.infeasible || other.infeasible }
    }

    /// The polyhedron cut to a box, as a counterclockwise polygon; `None`
    /// when the result has no area.
    pub fn clip_to_box(&self, bbox: [(f64, f64); 2]) -> Option<Vec<(f64, f64)>> {
        if self.infeasible {
            return None;
        }
        let [(x0, x1), (y0, y1)] = bbox;
        let mut poly = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
        for h in &self.rows {
            poly = clip_polygon(&poly, h.a, h.b, h.c);
            if poly.len() < 3 {
                return None;
            }
        }
        let scale = (x1 - x0) * (y1 - y0);
        (polygon_area(&poly) > 1e-12 * scale).then_some(poly)
    }

    pub fn is_empty_in(&self, bbox: [(f64, f64); 2]) -> bool {
        self.clip_to_box(bbox).is_none()
    }
}

fn indicator(n: u32) -> f64 {
    if n > 1 {
        1.0
    } else {
        0.0
    }
}

/// Endpoint-ordering constraints of state `s` plus `R_ci > λ_i` for users
/// with more than one codeword.
#[allow(clippy::too_many_arguments)]
pub fn geom_polyhedron(
    s: &ChannelState,
    theta1: f64,
    theta2: f64,
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    n1: u32,
    n2: u32,
) -> Polyhedron {
    let sym = SymbolicLayout::rate_spacing([theta1, theta2], [lambda1, lambda2], [n1, n2]);
    let mut p = Polyhedron::from_strict(&sym.geometric(s), alpha);
    if n1 > 1 {
        p.rows.push(HalfPlane { a: -1.0, b: 0.0, c: -lambda1 });
    }
    if n2 > 1 {
        p.rows.push(HalfPlane { a: 0.0, b: -1.0, c: -lambda2 });
    }
    p
}

/// Decoding conditions of every codeword under state `s` at fixed powers,
/// plus the two average-power rows.
#[allow(clippy::too_many_arguments)]
pub fn rel_polyhedron(
    s: &ChannelState,
    theta: [f64; 2],
    lambda: [f64; 2],
    alpha: f64,
    gamma: [f64; 2],
    gain: [f64; 2],
    count: [u32; 2],
    power: [f64; 2],
) -> Result<Polyhedron> {
    let rp = [rate_pair(gamma[0], gamma[1], gain[1])?, rate_pair(gamma[1], gamma[0], gain[0])?];
    let sym = SymbolicLayout::rate_spacing(theta, lambda, count);
    let payload = [Affine::var(R1, theta[0]), Affine::var(R2, theta[1])];
    let mut p = Polyhedron::from_strict(&sym.reliability(s, payload, rp), alpha);
    for i in 0..2 {
        let c = lambda[i] * (1.0 / count[i] as f64 - gamma[i] / power[i]);
        let (a, b) = if i == 0 { (-1.0, 0.0) } else { (0.0, -1.0) };
        p.rows.push(HalfPlane { a, b, c });
    }
    Ok(p)
}

/// Largest codebook rate meeting the power budget at full power:
/// the positive root of `R = C((1/N + R/λ) P)`.
pub fn rbar_c(u: &UserParams, n: u32) -> Result<f64> {
    rbar_c_raw(u.lambda(), u.power(), n)
}

pub fn rbar_c_raw(lambda: f64, p: f64, n: u32) -> Result<f64> {
    if n == 0 || !(lambda > 0.0) || !(p > 0.0) {
        return domain("need N >= 1, lambda > 0 and P > 0");
    }
    let f = |r: f64| cap(power_cap(n, r, lambda, p)) - r;
    let mut hi = 64.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    bisect(f, 0.0, hi, 1e-10)
}

/// Occupancy grid or polygon list in the `(R_c1, R_c2)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Region2D {
    Grid {
        bbox: [(f64, f64); 2],
        h: f64,
        nx: usize,
        ny: usize,
        /// Row-major, `mask[iy * nx + ix]` for the cell centred at
        /// `(x0 + (ix + 0.5) h, y0 + (iy + 0.5) h)`.
        mask: Vec<bool>,
    },
    Polygons {
        bbox: [(f64, f64); 2],
        polygons: Vec<Vec<(f64, f64)>>,
    },
}

impl Region2D {
    pub fn cell_center(bbox: &[(f64, f64); 2], h: f64, ix: usize, iy: usize) -> (f64, f64) {
        (bbox[0].0 + (ix as f64 + 0.5) * h, bbox[1].0 + (iy as f64 + 0.5) * h)
    }

    /// `(R_c1, R_c2, member)` for every grid cell; polygon regions report
    /// their vertices with member = 1.
    pub fn points(&self) -> Vec<(f64, f64, bool)> {
        match self {
            Region2D::Grid { bbox, h, nx, ny, mask } => (0..*ny)
                .flat_map(|iy| (0..*nx).map(move |ix| (ix, iy)))
                .map(|(ix, iy)| {
                    let (x, y) = Self::cell_center(bbox, *h, ix, iy);
                    (x, y, mask[iy * nx + ix])
                })
                .collect(),
            Region2D::Polygons { polygons, .. } => {
                polygons.iter().flatten().map(|&(x, y)| (x, y, true)).collect()
            }
        }
    }

    pub fn member_count(&self) -> usize {
        match self {
            Region2D::Grid { mask, .. } => mask.iter().filter(|&&b| b).count(),
            Region2D::Polygons { polygons, .. } => polygons.len(),
        }
    }
}

/// All inputs of an achievable-region computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionProblem {
    pub users: [UserParams; 2],
    pub count: [u32; 2],
    pub theta: [f64; 2],
    pub alpha: f64,
    pub m_grid: u32,
}

impl RegionProblem {
    pub fn new(
        users: [UserParams; 2],
        count: [u32; 2],
        theta: [f64; 2],
        alpha: f64,
        m_grid: u32,
    ) -> Result<Self> {
        if m_grid < 2 {
            return domain("the power grid needs m >= 2");
        }
        if count.contains(&0) || !theta.iter().all(|&t| t > 0.0) {
            return domain("need N_i >= 1 and theta_i > 0");
        }
        if !alpha.is_finite() {
            return domain("alpha must be finite");
        }
        Ok(Self { users, count, theta, alpha, m_grid })
    }

    pub fn lambda(&self) -> [f64; 2] {
        self.users.map(|u| u.lambda())
    }

    pub fn rbar(&self) -> Result<[f64; 2]> {
        Ok([rbar_c(&self.users[0], self.count[0])?, rbar_c(&self.users[1], self.count[1])?])
    }

    pub fn bbox(&self) -> Result<[(f64, f64); 2]> {
        let rb = self.rbar()?;
        let l = self.lambda();
        Ok([0, 1].map(|i| (l[i] * indicator(self.count[i]), rb[i])))
    }

    /// `Γ_i = {(l/m) γ̄_i : 1 ≤ l ≤ m − 1}`.
    pub fn gamma_grid(&self, i: usize) -> Result<Vec<f64>> {
        let rb = self.rbar()?[i];
        let gbar = power_cap(self.count[i], rb, self.users[i].lambda(), self.users[i].power());
        let m = self.m_grid;
        Ok((1..m).map(|l| l as f64 / m as f64 * gbar).collect())
    }

    fn shapes_at(&self, r: [f64; 2]) -> Option<[Shape; 2]> {
        let l = self.lambda();
        let mut out = [Shape { spacing: 0.0, length: 0.0, count: 0 }; 2];
        for i in 0..2 {
            out[i] = Shape::new(self.theta[i] * r[i] / l[i], self.theta[i], self.count[i]).ok()?;
        }
        Some(out)
    }

    /// Layout of the bursts at codebook rates `r`.
    pub fn layout_at(&self, r: [f64; 2]) -> Option<BurstLayout> {
        let shapes = self.shapes_at(r)?;
        mild_check(&shapes, 0.0, self.alpha, DEFAULT_TOL).then_some(BurstLayout { shapes, offsets: [0.0, self.alpha] })
    }

    /// A power pair from the grid under which `r` is achievable, if any.
    pub fn witness(&self, r: [f64; 2], grids: &[Vec<f64>; 2]) -> Option<(f64, f64)> {
        let lam = self.lambda();
        if (0..2).any(|i| self.count[i] > 1 && r[i] <= lam[i]) || r.iter().any(|&x| !(x > 0.0)) {
            return None;
        }
        let layout = self.layout_at(r)?;
        let worst = User::BOTH.map(|u| {
            (1..=layout.count(u))
                .map(|j| decompose(&layout, u, j).map(|d| d.len_interf).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max)
        });
        let caps: [f64; 2] = [0, 1].map(|i| power_cap(self.count[i], r[i], lam[i], self.users[i].power()));
        let gain = [self.users[0].cross_gain(), self.users[1].cross_gain()];
        for &g1 in grids[0].iter().filter(|&&g| g < caps[0]) {
            for &g2 in grids[1].iter().filter(|&&g| g < caps[1]) {
                let rp1 = crate::model::rate_pair_unchecked(g1, g2, gain[1]);
                let rp2 = crate::model::rate_pair_unchecked(g2, g1, gain[0]);
                if reliable(self.theta[0], r[0], worst[0], rp1) && reliable(self.theta[1], r[1], worst[1], rp2) {
                    return Some((g1, g2));
                }
            }
        }
        None
    }

    pub fn member(&self, r: [f64; 2]) -> Result<bool> {
        let grids = [self.gamma_grid(0)?, self.gamma_grid(1)?];
        Ok(self.witness(r, &grids).is_some())
    }

    /// Occupancy grid with square cells of side `h`.
    pub fn grid(&self, h: f64) -> Result<Region2D> {
        if !(h > 0.0) {
            return domain("grid resolution must be positive");
        }
        let bbox = self.bbox()?;
        let nx = ((bbox[0].1 - bbox[0].0) / h).ceil().max(1.0) as usize;
        let ny = ((bbox[1].1 - bbox[1].0) / h).ceil().max(1.0) as usize;
        let grids = [self.gamma_grid(0)?, self.gamma_grid(1)?];
        let mask = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (x, y) = Region2D::cell_center(&bbox, h, k % nx, k / nx);
                self.witness([x, y], &grids).is_some()
            })
            .collect();
        Ok(Region2D::Grid { bbox, h, nx, ny, mask })
    }

    /// Exact per-state polygons `geom ∩ rel(γ1, γ2)` over the power grid.
    pub fn polygons(&self) -> Result<Region2D> {
        let bbox = self.bbox()?;
        let grids = [self.gamma_grid(0)?, self.gamma_grid(1)?];
        let lam = self.lambda();
        let states = enumerate_states(self.count[0], self.count[1])?;
        let gains = [self.users[0].cross_gain(), self.users[1].cross_gain()];
        let powers = [self.users[0].power(), self.users[1].power()];
        let polygons: Vec<Vec<(f64, f64)>> = states
            .par_iter()
            .map(|s| {
                let g = geom_polyhedron(s, self.theta[0], self.theta[1], lam[0], lam[1], self.alpha, self.count[0], self.count[1]);
                let mut out = Vec::new();
                if g.is_empty_in(bbox) {
                    return Ok(out);
                }
                for &g1 in &grids[0] {
                    for &g2 in &grids[1] {
                        let rel = rel_polyhedron(s, self.theta, lam, self.alpha, [g1, g2], gains, self.count, powers)?;
                        if let Some(p) = g.intersect(&rel).clip_to_box(bbox) {
                            out.push(p);
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(Region2D::Polygons { bbox, polygons })
    }
}

fn reliable(theta: f64, r: f64, worst_len: f64, rp: RatePair) -> bool {
    theta * r < theta * rp.phi - worst_len * (rp.phi - rp.psi)
}

#[allow(clippy::too_many_arguments)]
pub fn region(
    u1: &UserParams,
    u2: &UserParams,
    n1: u32,
    n2: u32,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    m_grid: u32,
    resolution: f64,
) -> Result<Region2D> {
    RegionProblem::new([*u1, *u2], [n1, n2], [theta1, theta2], alpha, m_grid)?.grid(resolution)
}
