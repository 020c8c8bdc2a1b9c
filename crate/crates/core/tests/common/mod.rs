//! Oracles shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use burstic::geometry::{mild_check, overlap_profile, BurstLayout, OverlapTriple, Shape, User};
use burstic::model::RatePair;
use burstic::reliability::{closed_form_bound, rate_bound, ClosedFormParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Which closed form applies: no end hit, both ends, left only, right only.
pub fn case_of(t: &OverlapTriple) -> usize {
    match (t.w_minus, t.w_plus) {
        (0, 0) => 0,
        (a, b) if a != 0 && b != 0 => 1,
        (_, 0) => 2,
        _ => 3,
    }
}

pub struct RandomLayout {
    pub layout: BurstLayout,
    pub params: ClosedFormParams,
    pub rates: [RatePair; 2],
}

/// A layout satisfying the mild assumption, with payloads and rates.
pub fn random_layout(r: &mut ChaCha8Rng) -> RandomLayout {
    loop {
        let n = [r.random_range(1..=4u32), r.random_range(1..=4u32)];
        let mu = [r.random_range(0.3..2.0), r.random_range(0.3..2.0)];
        let theta = [mu[0] * r.random_range(0.05..0.95), mu[1] * r.random_range(0.05..0.95)];
        let nu = [r.random_range(-1.0..1.0), r.random_range(-2.5..2.5)];
        let shapes = [
            Shape::new(mu[0], theta[0], n[0]).unwrap(),
            Shape::new(mu[1], theta[1], n[1]).unwrap(),
        ];
        if !mild_check(&shapes, nu[0], nu[1], 1e-9) {
            continue;
        }
        let eta = [r.random_range(0.1..3.0), r.random_range(0.1..3.0f64)];
        let rates = [0, 1].map(|_| {
            let phi = r.random_range(0.1..4.0);
            RatePair { phi, psi: phi * r.random_range(0.0..1.0) }
        });
        return RandomLayout {
            layout: BurstLayout::new(shapes, nu).unwrap(),
            params: ClosedFormParams { eta, lambda: [eta[0] / mu[0], eta[1] / mu[1]], theta, nu },
            rates,
        };
    }
}

/// Largest |closed form − geometric| over every codeword, and the cases seen.
pub fn closed_form_gap(x: &RandomLayout) -> (f64, [bool; 4]) {
    let p = overlap_profile(&x.layout).unwrap();
    let mut worst = 0.0f64;
    let mut seen = [false; 4];
    for u in User::BOTH {
        let i = u.index();
        for (k, t) in p[i].iter().enumerate() {
            let j = k as u32 + 1;
            let g = rate_bound(&x.layout, u, j, x.rates[i]).unwrap();
            let c = closed_form_bound(*t, &x.params, u, j, x.rates[i]).unwrap();
            worst = worst.max((g - c).abs());
            seen[case_of(t)] = true;
        }
    }
    (worst, seen)
}

/// `(ω⁻, ω⁺)` of codeword `j` of `u` in the symmetric layout from the
/// closed-form index rules, given `j*` with `α/j* < μ < α/(j* − 1)`.
pub fn sym_ends(u: User, j: u32, n: u32, mu: f64, alpha: f64, theta: f64, js: u32) -> (u32, u32) {
    let lower = if js == 1 {
        if alpha < theta { f64::NEG_INFINITY } else { f64::INFINITY }
    } else {
        (alpha - theta) / (js - 1) as f64
    };
    let upper = (alpha + theta) / js as f64;
    match u {
        User::Tx1 => {
            let wm = if j >= js + 1 && mu < upper { j - js } else { 0 };
            let wp = if j >= js && mu > lower { j - js + 1 } else { 0 };
            (wm, wp)
        }
        User::Tx2 => {
            let wm = if j + js <= n + 1 && mu > lower { j + js - 1 } else { 0 };
            let wp = if j + js <= n && mu < upper { j + js } else { 0 };
            (wm, wp)
        }
    }
}

/// A symmetric layout with the given `j*`; returns `(layout, μ, α, θ, N)`.
pub fn random_sym_layout(r: &mut ChaCha8Rng, js: u32) -> (BurstLayout, f64, f64, f64, u32) {
    loop {
        let n = r.random_range(2..=6u32);
        let mu = r.random_range(0.3..2.0);
        let theta = mu * r.random_range(0.05..0.95);
        let alpha = mu * r.random_range((js - 1) as f64..js as f64);
        if alpha <= 0.0 {
            continue;
        }
        let shapes = [Shape::new(mu, theta, n).unwrap(); 2];
        if !mild_check(&shapes, 0.0, alpha, 1e-9) {
            continue;
        }
        return (BurstLayout::new(shapes, [0.0, alpha]).unwrap(), mu, alpha, theta, n);
    }
}

/// True iff the closed-form end indices agree with the layout.
pub fn sym_ends_agree(l: &BurstLayout, mu: f64, alpha: f64, theta: f64, n: u32, js: u32) -> bool {
    let p = overlap_profile(l).unwrap();
    User::BOTH.iter().all(|&u| {
        (1..=n).all(|j| {
            let t = p[u.index()][j as usize - 1];
            sym_ends(u, j, n, mu, alpha, theta, js) == (t.w_minus, t.w_plus)
        })
    })
}

/// Runs of member points on the diagonal `R_c1 = R_c2`, sampled at cell
/// centres of width `h` from `lo`, as cell-edge intervals.
pub fn diagonal_runs(p: &burstic::region::RegionProblem, lo: f64, hi: f64, h: f64) -> Vec<(f64, f64)> {
    use rayon::prelude::*;
    let n = ((hi - lo) / h).ceil() as usize;
    let hits: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|k| {
            let r = lo + (k as f64 + 0.5) * h;
            p.member([r, r]).unwrap()
        })
        .collect();
    let mut runs = Vec::new();
    let mut start = None;
    for (k, &m) in hits.iter().chain(std::iter::once(&false)).enumerate() {
        match (m, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                runs.push((lo + s as f64 * h, lo + k as f64 * h));
                start = None;
            }
            _ => {}
        }
    }
    runs
}

/// Same number of pieces with every endpoint within `tol`.
pub fn intervals_close(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
}

/// Every codeword decodable at offset α, straight from the interval bounds;
/// `None` on a measure-zero coincidence of endpoints.
pub fn reliable_at(d: &burstic::design::DesignPair, alpha: f64) -> Option<bool> {
    let shapes = d.shapes();
    if !mild_check(&shapes, 0.0, alpha, 1e-9) {
        return None;
    }
    let l = BurstLayout::new(shapes, [0.0, alpha]).unwrap();
    Some(User::BOTH.iter().all(|&u| {
        let i = u.index();
        (1..=l.count(u)).all(|j| d.schemes[i].eta() < rate_bound(&l, u, j, d.rates[i]).unwrap())
    }))
}
