//! Both users with the same `N`, `θ`, `λ`, cross gain `a`, budget `P` and
//! per-symbol power `γ`; Tx 2 activates `α` after Tx 1. The rate region
//! then reduces to a set of rates on the diagonal.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::interval::IntervalUnion;
use crate::model::cap;
use crate::numeric::bisect;

use super::rbar_c_raw;

/// Points of the power sweep between 0 and the largest useful `γ`.
pub const GAMMA_SWEEP: usize = 2048;
const SNAP: f64 = 1e-9;

/// Union over `γ` of the intervals `at(γ)`. Between neighbouring sweep
/// points whose intervals fail to overlap, the step is halved until they do
/// or the depth limit is hit, so shrinking tips do not leave grid gaps.
fn sweep_union(gs: &[f64], at: impl Fn(f64) -> Vec<(f64, f64)>) -> IntervalUnion {
    fn linked(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        let hits = |x: &(f64, f64), ys: &[(f64, f64)]| ys.iter().any(|y| x.0 < y.1 && y.0 < x.1);
        a.iter().all(|x| hits(x, b)) && b.iter().all(|y| hits(y, a))
    }
    fn refine(
        at: &impl Fn(f64) -> Vec<(f64, f64)>,
        (a, fa): (f64, &[(f64, f64)]),
        (b, fb): (f64, &[(f64, f64)]),
        depth: u32,
        out: &mut Vec<(f64, f64)>,
    ) {
        if depth == 0 || linked(fa, fb) {
            return;
        }
        let m = 0.5 * (a + b);
        let fm = at(m);
        out.extend_from_slice(&fm);
        refine(at, (a, fa), (m, &fm), depth - 1, out);
        refine(at, (m, &fm), (b, fb), depth - 1, out);
    }
    let vals: Vec<Vec<(f64, f64)>> = gs.iter().map(|&g| at(g)).collect();
    let mut out: Vec<(f64, f64)> = vals.iter().flatten().copied().collect();
    for k in 1..gs.len() {
        refine(&at, (gs[k - 1], &vals[k - 1]), (gs[k], &vals[k]), 40, &mut out);
    }
    IntervalUnion::from_intervals(out).snapped(SNAP)
}

fn nonempty(iv: (f64, f64)) -> Vec<(f64, f64)> {
    if iv.0 < iv.1 {
        vec![iv]
    } else {
        Vec::new()
    }
}

fn phi(g: f64) -> f64 {
    cap(g)
}

fn psi(g: f64, a: f64) -> f64 {
    if g.is_infinite() {
        return if a == 0.0 { g } else { cap(1.0 / a) };
    }
    cap(g / (1.0 + a * g))
}

/// Smallest root of an increasing-at-infinity `h` with `h(0) < 0`, or `∞`
/// when `h` stays negative up to a very large `γ`.
fn first_root(h: impl Fn(f64) -> f64) -> Result<f64> {
    let mut hi = 1.0;
    while h(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e15 {
            return Ok(f64::INFINITY);
        }
    }
    bisect(h, 0.0, hi, 1e-12 * hi.max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymParams {
    pub n: u32,
    pub theta: f64,
    pub lambda: f64,
    pub a: f64,
    pub p: f64,
    pub alpha: f64,
}

impl SymParams {
    pub fn new(n: u32, theta: f64, lambda: f64, a: f64, p: f64, alpha: f64) -> Result<Self> {
        if n == 0 || !(theta > 0.0) || !(lambda > 0.0) || !(a >= 0.0) || !(p > 0.0) {
            return domain("need N >= 1, theta > 0, lambda > 0, a >= 0 and P > 0");
        }
        if !alpha.is_finite() {
            return domain("alpha must be finite");
        }
        // Swapping the users turns a negative offset into a positive one.
        Ok(Self { n, theta, lambda, a, p, alpha: alpha.abs() })
    }

    pub fn phi(&self, g: f64) -> f64 {
        phi(g)
    }

    pub fn psi(&self, g: f64) -> f64 {
        psi(g, self.a)
    }

    /// `(γ/P − 1/N) λ`: rates below this line break the power budget.
    pub fn power_line(&self, g: f64) -> f64 {
        (g / self.p - 1.0 / self.n as f64) * self.lambda
    }

    pub fn rbar(&self) -> Result<f64> {
        rbar_c_raw(self.lambda, self.p, self.n)
    }

    /// Largest `γ` worth sweeping: at full power for the largest rate.
    pub fn gamma_max(&self) -> Result<f64> {
        Ok((1.0 / self.n as f64 + self.rbar()? / self.lambda) * self.p)
    }

    /// `{R > λ·1{N>1} : (1 − (x/λ)(φ−ψ)) R < ψ − (φ−ψ) y/θ, R > power line}`.
    pub fn p_set(&self, x: f64, y: f64, g: f64) -> (f64, f64) {
        let (k, kp) = (self.phi(g), self.psi(g));
        let loss = k - kp;
        let c = 1.0 - x / self.lambda * loss;
        let d = kp - loss * y / self.theta;
        let floor = if self.n > 1 { self.lambda } else { 0.0 };
        let mut lo = floor.max(self.power_line(g));
        let mut hi = f64::INFINITY;
        if c > 0.0 {
            hi = d / c;
        } else if c < 0.0 {
            lo = lo.max(d / c);
        } else if d <= 0.0 {
            hi = lo;
        }
        (lo, hi)
    }

    fn sweep(&self, extra: &[f64]) -> Result<Vec<f64>> {
        let gmax = self.gamma_max()?;
        let mut gs: Vec<f64> = (1..=GAMMA_SWEEP).map(|k| gmax * k as f64 / GAMMA_SWEEP as f64).collect();
        for &b in extra.iter().filter(|b| b.is_finite() && **b > 0.0 && **b < gmax) {
            gs.extend([b * (1.0 - 1e-9), b, b * (1.0 + 1e-9)]);
        }
        gs.sort_by(f64::total_cmp);
        Ok(gs)
    }
}

/// `γ0`, `γ1`, `γ2` and the two boundary curves of the closed form, valid
/// when `α < θ` and `N ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymCurves {
    pub params: SymParams,
    /// `2ψ = φ`; `∞` when `a = 0`.
    pub gamma0: f64,
    /// `ψ = λ`, or `∞` if `ψ` never reaches `λ`.
    pub gamma1: f64,
    /// `ψ + (α/θ)(φ − ψ) = (1 + α/θ) λ`.
    pub gamma2: f64,
    /// `λ < ψ(γ0)`.
    pub low_branch: bool,
}

pub fn sym_curves(n: u32, theta: f64, lambda: f64, a: f64, p: f64, alpha: f64) -> Result<SymCurves> {
    let params = SymParams::new(n, theta, lambda, a, p, alpha)?;
    if params.alpha >= theta {
        return domain("the closed-form curves need alpha < theta");
    }
    let gamma0 = if a == 0.0 { f64::INFINITY } else { (1.0 + (1.0 + 4.0 * a * a).sqrt()) / (2.0 * a * a) };
    let e = 2f64.powf(2.0 * lambda) - 1.0;
    let den = 1.0 - a * e;
    let gamma1 = if den > 0.0 { e / den } else { f64::INFINITY };
    let r = params.alpha / theta;
    let gamma2 = first_root(|g| params.psi(g) + r * (params.phi(g) - params.psi(g)) - (1.0 + r) * lambda)?;
    let low_branch = lambda < params.psi(gamma0);
    Ok(SymCurves { params, gamma0, gamma1, gamma2, low_branch })
}

impl SymCurves {
    fn both_ends(&self, g: f64) -> f64 {
        let p = &self.params;
        let (k, kp) = (p.phi(g), p.psi(g));
        (2.0 * kp - k) / (1.0 - (k - kp) / p.lambda)
    }

    fn tail(&self, g: f64) -> f64 {
        let p = &self.params;
        p.psi(g) + p.alpha / p.theta * (p.phi(g) - p.psi(g))
    }

    pub fn f(&self, g: f64) -> f64 {
        let lam = self.params.lambda;
        if self.low_branch {
            if g <= self.gamma1 {
                0.0
            } else {
                lam
            }
        } else if g <= self.gamma2 {
            0.0
        } else if g <= self.gamma1 {
            self.both_ends(g)
        } else {
            lam
        }
    }

    pub fn g(&self, g: f64) -> f64 {
        if self.low_branch {
            if g <= self.gamma1 {
                0.0
            } else if g <= self.gamma2 {
                self.both_ends(g)
            } else {
                self.tail(g)
            }
        } else if g <= self.gamma2 {
            0.0
        } else {
            self.tail(g)
        }
    }

    /// Achievable rates at power `γ`.
    pub fn interval_at(&self, g: f64) -> (f64, f64) {
        (self.f(g).max(self.params.power_line(g)), self.g(g))
    }

    /// `(γ, f, g, power line)` on the sweep grid.
    pub fn table(&self) -> Result<Vec<[f64; 4]>> {
        let gs = self.params.sweep(&[self.gamma0, self.gamma1, self.gamma2])?;
        Ok(gs.into_iter().map(|g| [g, self.f(g), self.g(g), self.params.power_line(g)]).collect())
    }

    pub fn region(&self) -> Result<IntervalUnion> {
        let gs = self.params.sweep(&[self.gamma0, self.gamma1, self.gamma2])?;
        Ok(sweep_union(&gs, |g| nonempty(self.interval_at(g))))
    }
}

/// Largest rate for a single codeword per user.
pub fn rc_max_single(p: &SymParams) -> Result<f64> {
    if p.alpha >= p.theta {
        return p.rbar();
    }
    let r = p.alpha / p.theta;
    let h = |g: f64| (g / p.p - 1.0) * p.lambda - (p.psi(g) + r * (p.phi(g) - p.psi(g)));
    let gstar = first_root(h)?;
    Ok(p.power_line(gstar))
}

/// The set of symmetric codebook rates for which all `2N` codewords are
/// sent immediately, meet the power budget and decode reliably.
pub fn sym_region(n: u32, theta: f64, lambda: f64, a: f64, p: f64, alpha: f64) -> Result<IntervalUnion> {
    let params = SymParams::new(n, theta, lambda, a, p, alpha)?;
    if n == 1 {
        return Ok(IntervalUnion::interval(0.0, rc_max_single(&params)?));
    }
    if params.alpha < theta {
        return sym_curves(n, theta, lambda, a, p, alpha)?.region();
    }
    sym_region_general(&params)
}

/// Where the first burst of Tx 2 starts relative to the bursts of Tx 1,
/// split into the four interference patterns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JStarCells {
    pub j_star: u32,
    /// Rate intervals of the both-ends, left-only, right-only and
    /// interference-free patterns.
    pub cells: [(f64, f64); 4],
}

pub fn j_star_cells(p: &SymParams) -> Vec<JStarCells> {
    let (alpha, theta) = (p.alpha, p.theta);
    let last = (alpha / theta).floor() as u32 + 1;
    let to_rate = |mu: f64| mu * p.lambda / theta;
    (1..=last)
        .map(|j| {
            let jf = j as f64;
            let lo = alpha / jf;
            let hi = if j == 1 { f64::INFINITY } else { alpha / (jf - 1.0) };
            // The condition bounded by (α − θ)/(j* − 1) reads α − (j*−1)μ < θ.
            let am = if j == 1 {
                if alpha < theta {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                (alpha - theta) / (jf - 1.0)
            };
            let ap = (alpha + theta) / jf;
            let floor = theta;
            let mk = |l: f64, h: f64| (to_rate(l.max(floor)), to_rate(h));
            JStarCells {
                j_star: j,
                cells: [
                    mk(am.max(lo), ap.min(hi)),
                    mk(lo, am.min(ap)),
                    mk(am.max(ap), hi),
                    mk(ap.max(lo), am.min(hi)),
                ],
            }
        })
        .collect()
}

fn meet(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.min(b.1))
}

/// The symmetric rate set assembled from the four interference patterns
/// at every `j*`, for any `α ≥ 0` and `N ≥ 2`.
pub fn sym_region_general(p: &SymParams) -> Result<IntervalUnion> {
    if p.n < 2 {
        return domain("the pattern decomposition needs N >= 2");
    }
    let n = p.n;
    let (alpha, theta) = (p.alpha, p.theta);
    let cells = j_star_cells(p);
    let gs = p.sweep(&[])?;
    let at = |g: f64| {
        let clear = p.p_set(0.0, -theta, g);
        let mut parts = Vec::new();
        for c in &cells {
            let j = c.j_star as f64;
            let right = p.p_set(1.0 - j, -alpha, g);
            let sets = [
                if c.j_star < n {
                    meet(p.p_set(1.0, theta, g), right)
                } else if c.j_star == n {
                    right
                } else {
                    clear
                },
                if c.j_star < n { p.p_set(j, alpha, g) } else { clear },
                if c.j_star <= n { right } else { clear },
                clear,
            ];
            for (cell, set) in c.cells.iter().zip(sets) {
                parts.extend(nonempty(meet(*cell, set)));
            }
        }
        parts
    };
    Ok(sweep_union(&gs, at))
}
