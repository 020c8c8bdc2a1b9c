//! System design without power control: which numbers of codewords are
//! feasible for given average rates, which activation offsets lead to
//! reliable decoding, and which choice minimises the outage probability when
//! both offsets are uniform on `[0, d]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{Affine, NU1, NU2};
use crate::constraints::SymbolicLayout;
use crate::error::{domain, Error, Result};
use crate::geometry::{alpha_breakpoints, state_of, BurstLayout, BurstShape, ChannelState, Shape};
use crate::interval::IntervalUnion;
use crate::model::{cap, derive_scheme_v, rate_pair_unchecked, in_rate_window, RatePair, SchemeV, UserParams};
use crate::numeric::bisect;

/// Gap below which two admissible pieces are treated as one (the missing
/// point between them carries no probability).
const SNAP: f64 = 1e-9;

/// Largest design rate `R` for which a codeword can be decoded with no
/// interference at all, for `n` codewords per block.
pub fn rbar_target(u: &UserParams, n: u32) -> Result<f64> {
    if n == 0 {
        return domain("number of codewords must be at least 1");
    }
    let lam = u.lambda();
    let q = u.q();
    let eta = u.k() as f64 / n as f64;
    let ppn = u.power() / n as f64;
    let h = |r: f64| (lam / r - 1.0) / q * cap(ppn * lam / (lam - r)) - eta;
    let lo = lam * 1e-9;
    let hi = lam * (1.0 - 1e-13);
    if h(lo) <= 0.0 {
        return Err(Error::InfeasibleRate(format!("no feasible rate for N = {n}")));
    }
    bisect(h, lo, hi, 1e-10 * lam.max(1e-3))
}

/// Numbers of codewords compatible with average rate `r` for one user.
pub fn feasible_counts(u: &UserParams, r: f64) -> Result<Vec<u32>> {
    if !(r > 0.0 && r < u.lambda()) {
        return domain(format!("rate {r} outside (0, {})", u.lambda()));
    }
    let mut out = Vec::new();
    let mut n = 1;
    loop {
        if !in_rate_window(u.lambda(), n, r) {
            break;
        }
        if r < rbar_target(u, n)? {
            out.push(n);
        }
        n += 1;
    }
    Ok(out)
}

pub fn active_set(u1: &UserParams, u2: &UserParams, r1: f64, r2: f64) -> Result<Vec<(u32, u32)>> {
    let a = feasible_counts(u1, r1)?;
    let b = feasible_counts(u2, r2)?;
    Ok(a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect())
}

/// Both users' schemes for a given `(N1, N2)` together with their rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignPair {
    pub schemes: [SchemeV; 2],
    pub rates: [RatePair; 2],
}

impl DesignPair {
    pub fn new(u1: &UserParams, u2: &UserParams, n: (u32, u32), r1: f64, r2: f64) -> Result<Self> {
        let s1 = derive_scheme_v(u1, n.0, r1)?;
        let s2 = derive_scheme_v(u2, n.1, r2)?;
        let rates = [
            rate_pair_unchecked(s1.gamma(), s2.gamma(), u2.cross_gain()),
            rate_pair_unchecked(s2.gamma(), s1.gamma(), u1.cross_gain()),
        ];
        Ok(Self { schemes: [s1, s2], rates })
    }

    pub fn shapes(&self) -> [Shape; 2] {
        self.schemes.map(|s| s.shape())
    }

    /// `η_i / (θ_i ψ_i)`: at least one means worst-case interference breaks
    /// decoding of user `i`.
    pub fn worst_case_ratio(&self, i: usize) -> f64 {
        self.schemes[i].eta() / (self.schemes[i].theta() * self.rates[i].psi)
    }
}

/// True iff every feasible design can be broken by interference for some
/// offsets.
pub fn please1_holds(u1: &UserParams, u2: &UserParams, r1: f64, r2: f64) -> Result<bool> {
    let set = active_set(u1, u2, r1, r2)?;
    if set.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let mut best = f64::INFINITY;
    for n in set {
        let d = DesignPair::new(u1, u2, n, r1, r2)?;
        best = best.min(d.worst_case_ratio(0).max(d.worst_case_ratio(1)));
    }
    Ok(best >= 1.0)
}

/// A maximal α-range with a constant channel state, and its admissible part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaCell {
    pub lo: f64,
    pub hi: f64,
    pub state: ChannelState,
    pub admissible: IntervalUnion,
}

/// Per-cell admissible offsets, α = ν2 − ν1.
pub fn alpha_cells(d: &DesignPair) -> Result<Vec<AlphaCell>> {
    let shapes = d.shapes();
    let bps = alpha_breakpoints(&shapes);
    let sym = SymbolicLayout::fixed_spacing(&shapes);
    let payload = d.schemes.map(|s| Affine::constant(s.eta()));
    let mut edges = Vec::with_capacity(bps.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(&bps);
    edges.push(f64::INFINITY);
    edges
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mid = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (false, true) => hi - 1.0,
                (true, false) => lo + 1.0,
                (false, false) => 0.0,
            };
            let state = state_of(&BurstLayout::new(shapes, [0.0, mid])?)?;
            let mut set = IntervalUnion::interval(lo, hi);
            for c in sym.reliability(&state, payload, d.rates) {
                set = set.intersect(&half_line(&c.0)?);
            }
            Ok(AlphaCell { lo, hi, state, admissible: set })
        })
        .collect()
}

/// `{α : f(ν1 = 0, ν2 = α) < 0}` for a form depending on the offsets only
/// through their difference.
fn half_line(f: &Affine) -> Result<IntervalUnion> {
    let (c1, c2) = (f.coef[NU1], f.coef[NU2]);
    let scale = 1.0 + c1.abs().max(c2.abs());
    if (c1 + c2).abs() > 1e-9 * scale {
        return Err(Error::Domain(format!(
            "constraint depends on offsets beyond their difference: {c1} vs {c2}"
        )));
    }
    let slope = c2;
    let c0 = f.constant;
    Ok(if slope.abs() <= 1e-15 * scale {
        if c0 < 0.0 {
            IntervalUnion::real_line()
        } else {
            IntervalUnion::empty()
        }
    } else if slope > 0.0 {
        IntervalUnion::interval(f64::NEG_INFINITY, -c0 / slope)
    } else {
        IntervalUnion::interval(-c0 / slope, f64::INFINITY)
    })
}

pub fn admissible_alpha(
    u1: &UserParams,
    u2: &UserParams,
    n1: u32,
    n2: u32,
    r1: f64,
    r2: f64,
) -> Result<IntervalUnion> {
    let d = DesignPair::new(u1, u2, (n1, n2), r1, r2)?;
    admissible_from_design(&d)
}

pub fn admissible_from_design(d: &DesignPair) -> Result<IntervalUnion> {
    let cells = alpha_cells(d)?;
    Ok(cells.iter().fold(IntervalUnion::empty(), |acc, c| acc.union(&c.admissible)))
}

/// CDF of ν2 − ν1 for independent uniform offsets on `[0, d]`.
fn triangular_cdf(x: f64, d: f64) -> f64 {
    if x <= -d {
        0.0
    } else if x <= 0.0 {
        (x + d).powi(2) / (2.0 * d * d)
    } else if x < d {
        1.0 - (d - x).powi(2) / (2.0 * d * d)
    } else {
        1.0
    }
}

/// Probability that α = ν2 − ν1 falls outside `adm`.
pub fn outage(adm: &IntervalUnion, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return domain(format!("offset spread d = {d} must be positive"));
    }
    let inside: f64 = adm
        .parts()
        .iter()
        .map(|&(lo, hi)| triangular_cdf(hi, d) - triangular_cdf(lo, d))
        .sum();
    Ok((1.0 - inside).clamp(0.0, 1.0))
}

/// Distance from α = 0 to the nearest inadmissible α of positive measure;
/// infinite when nothing is inadmissible.
pub fn d_max_of(adm: &IntervalUnion) -> f64 {
    let bad = adm.snapped(SNAP).complement_within(f64::NEG_INFINITY, f64::INFINITY);
    bad.parts()
        .iter()
        .map(|&(lo, hi)| {
            if lo < 0.0 && hi > 0.0 {
                0.0
            } else if hi <= 0.0 {
                -hi
            } else {
                lo
            }
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn d_max(u1: &UserParams, u2: &UserParams, n1: u32, n2: u32, r1: f64, r2: f64) -> Result<f64> {
    Ok(d_max_of(&admissible_alpha(u1, u2, n1, n2, r1, r2)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageCurve {
    pub n1: u32,
    pub n2: u32,
    pub samples: Vec<(f64, f64)>,
}

/// Admissible sets for every member of the active set.
pub fn active_admissible(
    u1: &UserParams,
    u2: &UserParams,
    r1: f64,
    r2: f64,
) -> Result<Vec<((u32, u32), IntervalUnion)>> {
    let set = active_set(u1, u2, r1, r2)?;
    if set.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    set.into_par_iter()
        .map(|n| Ok((n, admissible_alpha(u1, u2, n.0, n.1, r1, r2)?)))
        .collect()
}

pub fn outage_curves(
    u1: &UserParams,
    u2: &UserParams,
    r1: f64,
    r2: f64,
    ds: &[f64],
) -> Result<Vec<OutageCurve>> {
    active_admissible(u1, u2, r1, r2)?
        .into_iter()
        .map(|((n1, n2), adm)| {
            let samples = ds.iter().map(|&d| Ok((d, outage(&adm, d)?))).collect::<Result<_>>()?;
            Ok(OutageCurve { n1, n2, samples })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub best: (u32, u32),
    pub table: Vec<((u32, u32), f64)>,
}

/// Minimum-outage choice among precomputed admissible sets.
pub fn pick_optimum(sets: &[((u32, u32), IntervalUnion)], d: f64) -> Result<Optimum> {
    if sets.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let table = sets
        .iter()
        .map(|(n, adm)| Ok((*n, outage(adm, d)?)))
        .collect::<Result<Vec<_>>>()?;
    let best = table
        .iter()
        .copied()
        .min_by(|a, b| {
            let tol = 1e-12;
            if (a.1 - b.1).abs() > tol {
                a.1.total_cmp(&b.1)
            } else {
                (a.0 .0 + a.0 .1, a.0 .0).cmp(&(b.0 .0 + b.0 .1, b.0 .0))
            }
        })
        .map(|x| x.0)
        .expect("nonempty");
    Ok(Optimum { best, table })
}

pub fn optimize_n(u1: &UserParams, u2: &UserParams, r1: f64, r2: f64, d: f64) -> Result<Optimum> {
    pick_optimum(&active_admissible(u1, u2, r1, r2)?, d)
}

/// Values of `d` in `(lo, hi)` where the optimal choice changes, located by
/// a scan with `steps` points refined by bisection.
pub fn optimum_switches(
    sets: &[((u32, u32), IntervalUnion)],
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<(f64, (u32, u32), (u32, u32))>> {
    let best = |d: f64| pick_optimum(sets, d).map(|o| o.best);
    let mut out = Vec::new();
    let mut prev_d = lo;
    let mut prev = best(lo)?;
    for k in 1..=steps {
        let d = lo + (hi - lo) * k as f64 / steps as f64;
        let cur = best(d)?;
        if cur != prev {
            let (mut a, mut b) = (prev_d, d);
            while b - a > 1e-9 {
                let m = 0.5 * (a + b);
                if best(m)? == prev {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push((0.5 * (a + b), prev, cur));
        }
        prev = cur;
        prev_d = d;
    }
    Ok(out)
}
