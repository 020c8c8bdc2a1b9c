mod common;

use rand::Rng;

use burstic::geometry::{enumerate_states, state_of, BurstLayout, Shape, User};
use burstic::model::{rate_pair, UserParams};
use burstic::region::*;
use burstic::reliability::rate_bound;
use common::*;

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

fn fig17_user() -> UserParams {
    UserParams::new(2, 0.3, 100.0, 0.5).unwrap()
}

fn problem(alpha: f64, n: u32, m: u32) -> RegionProblem {
    let u = fig17_user();
    RegionProblem::new([u, u], [n, n], [1.0, 1.0], alpha, m).unwrap()
}

fn mask(r: &Region2D) -> &[bool] {
    match r {
        Region2D::Grid { mask, .. } => mask,
        _ => panic!("grid expected"),
    }
}

/// Rows match up to order.
fn same_rows(got: &Polyhedron, want: &[(f64, f64, f64)]) -> bool {
    got.rows.len() == want.len()
        && want.iter().all(|w| {
            got.rows.iter().any(|h| (h.a - w.0).abs() < 1e-12 && (h.b - w.1).abs() < 1e-12 && (h.c - w.2).abs() < 1e-12)
        })
}

#[test]
fn rbar_c_fig17() {
    let r = rbar_c(&fig17_user(), 2).unwrap();
    assert!((r - 4.8774).abs() < 1e-3, "{r}");
    let mut prev = 0.0;
    for p in [10.0, 100.0, 1000.0] {
        let r = rbar_c_raw(0.6, p, 2).unwrap();
        assert!((r - c((0.5 + r / 0.6) * p)).abs() < 1e-8);
        assert!(r > prev);
        prev = r;
    }
}

#[test]
fn paper_state_rows() {
    // S = {(1;1,2),(2;2,4)} with N1 = N2 = 2 on the t̄-axis.
    let s = burstic::geometry::ChannelState::new(2, vec![(1, 2), (2, 4)]).unwrap();
    let (t1, t2, l1, l2, a) = (1.0, 0.7, 0.6, 0.5, 0.3);
    let (x, y) = (t1 / l1, t2 / l2);
    let g = geom_polyhedron(&s, t1, t2, l1, l2, a, 2, 2);
    let want = [
        (-x, y, -a),
        (x, -y, t2 + a),
        (-x, 2.0 * y, t1 - a),
        (2.0 * x, -2.0 * y, t2 + a),
        (-2.0 * x, 2.0 * y, t1 - t2 - a),
        (-1.0, 0.0, -l1),
        (0.0, -1.0, -l2),
    ];
    assert!(same_rows(&g, &want), "{:?}", g.rows);

    let (g1, g2, p1, p2) = (5.0, 4.0, 100.0, 100.0);
    let (a1, a2) = (0.5, 0.7);
    let (phi1, psi1) = (c(g1), c(g1 / (1.0 + a2 * g2)));
    let (phi2, psi2) = (c(g2), c(g2 / (1.0 + a1 * g1)));
    let (d1, d2) = (phi1 - psi1, phi2 - psi2);
    let rel = rel_polyhedron(&s, [t1, t2], [l1, l2], a, [g1, g2], [a1, a2], [2, 2], [p1, p2]).unwrap();
    let want = [
        (t1, -d1 / l2 * t2, t1 * psi1 - t2 * d1),
        ((1.0 - 2.0 / l1 * d1) * t1, 2.0 / l2 * d1 * t2, t1 * phi1 - (a + t2) * d1),
        (-d2 / l1 * t1, (1.0 + d2 / l2) * t2, t2 * psi2 - a * d2),
        (-d2 / l1 * t1, t2, t2 * psi2 - t1 * d2),
        (-1.0, 0.0, l1 * (0.5 - g1 / p1)),
        (0.0, -1.0, l2 * (0.5 - g2 / p2)),
    ];
    assert!(same_rows(&rel, &want), "{:?}", rel.rows);
}

#[test]
fn geom_polyhedron_matches_layout_state() {
    let mut r = rng(31);
    let (t, l, alpha) = ([1.0, 0.8], [0.6, 0.5], 0.37);
    for n in [(1u32, 1u32), (2, 2), (3, 2)] {
        let states = enumerate_states(n.0, n.1).unwrap();
        for _ in 0..1000 {
            let rc = [l[0] + r.random_range(0.0..4.0), l[1] + r.random_range(0.0..4.0)];
            let shapes = [0, 1].map(|i| Shape::new(t[i] * rc[i] / l[i], t[i], [n.0, n.1][i]).unwrap());
            let Ok(truth) = state_of(&BurstLayout::new(shapes, [0.0, alpha]).unwrap()) else { continue };
            let other = &states[r.random_range(0..states.len())];
            for s in [&truth, other] {
                let inside = geom_polyhedron(s, t[0], t[1], l[0], l[1], alpha, n.0, n.1).contains(rc[0], rc[1]);
                assert_eq!(inside, *s == truth, "{n:?} {rc:?}");
            }
        }
    }
}

#[test]
fn rel_polyhedron_matches_rate_bound() {
    let mut r = rng(32);
    let (t, l, gain, pw, alpha) = ([1.0, 0.8], [0.6, 0.5], [0.5, 0.7], [100.0, 50.0], -0.4);
    let n = [2u32, 3];
    let mut both = [0usize; 2];
    for _ in 0..1000 {
        let rc = [l[0] + r.random_range(0.0..3.0), l[1] + r.random_range(0.0..3.0)];
        let g = [r.random_range(0.0..200.0), r.random_range(0.0..200.0)];
        let shapes = [0, 1].map(|i| Shape::new(t[i] * rc[i] / l[i], t[i], n[i]).unwrap());
        let layout = BurstLayout::new(shapes, [0.0, alpha]).unwrap();
        let Ok(s) = state_of(&layout) else { continue };
        let rp = [rate_pair(g[0], g[1], gain[1]).unwrap(), rate_pair(g[1], g[0], gain[0]).unwrap()];
        let decodes = User::BOTH.iter().all(|&u| {
            let i = u.index();
            (1..=n[i]).all(|j| t[i] * rc[i] < rate_bound(&layout, u, j, rp[i]).unwrap())
        });
        let powered = (0..2).all(|i| g[i] < (1.0 / n[i] as f64 + rc[i] / l[i]) * pw[i]);
        let want = decodes && powered;
        let got = rel_polyhedron(&s, t, l, alpha, g, gain, n, pw).unwrap().contains(rc[0], rc[1]);
        assert_eq!(got, want, "{rc:?} {g:?}");
        both[want as usize] += 1;
    }
    assert!(both[0] > 50 && both[1] > 50, "{both:?}");
}

#[test]
fn no_cross_gain_leaves_clean_rows() {
    let s = burstic::geometry::ChannelState::new(2, vec![(1, 2), (2, 4)]).unwrap();
    let g = [5.0, 4.0];
    let p = rel_polyhedron(&s, [1.0, 0.7], [0.6, 0.5], 0.3, g, [0.0, 0.0], [2, 2], [100.0, 100.0]).unwrap();
    for h in &p.rows[..p.rows.len() - 2] {
        let (i, coef) = if h.b == 0.0 { (0, h.a) } else { (1, h.b) };
        assert!(h.a == 0.0 || h.b == 0.0, "{h:?}");
        assert!((h.c / coef - c(g[i])).abs() < 1e-12);
    }
}

#[test]
fn finer_power_grid_gives_superset() {
    let coarse = problem(0.3, 2, 5).grid(0.1).unwrap();
    let fine = problem(0.3, 2, 10).grid(0.1).unwrap();
    let (a, b) = (mask(&coarse), mask(&fine));
    assert!(a.iter().zip(b).all(|(x, y)| !x || *y));
    assert!(fine.member_count() > coarse.member_count());
}

#[test]
fn more_codewords_shrink_region() {
    let pts: Vec<[f64; 2]> = (0..50)
        .flat_map(|i| (0..50).map(move |j| [0.06 + 0.12 * i as f64, 0.06 + 0.12 * j as f64]))
        .collect();
    let member = |n: u32| -> Vec<bool> {
        let p = problem(0.0, n, 40);
        pts.iter().map(|&r| p.member(r).unwrap()).collect()
    };
    let mut prev = member(1);
    for n in 2..=4 {
        let cur = member(n);
        assert!(cur.iter().zip(&prev).all(|(x, y)| !x || *y), "N={n} not contained");
        assert!(cur.iter().filter(|&&x| x).count() < prev.iter().filter(|&&x| x).count());
        prev = cur;
    }
}

#[test]
fn large_offset_approaches_square() {
    let interior_miss = |alpha: f64| {
        let g = problem(alpha, 2, 50).grid(0.05).unwrap();
        let Region2D::Grid { nx, ny, mask, .. } = &g else { unreachable!() };
        (1..ny - 1).flat_map(|iy| (1..nx - 1).map(move |ix| iy * nx + ix)).filter(|&k| !mask[k]).count()
    };
    let m: Vec<usize> = [5.0, 10.0, 20.0].iter().map(|&a| interior_miss(a)).collect();
    assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");
    assert_eq!(m[2], 0);
}

#[test]
fn accepted_points_are_sound() {
    let p = problem(0.3, 2, 30);
    let grids = [p.gamma_grid(0).unwrap(), p.gamma_grid(1).unwrap()];
    let bbox = p.bbox().unwrap();
    let lam = p.lambda();
    let u = fig17_user();
    let mut r = rng(33);
    let mut seen = 0;
    while seen < 100 {
        let rc = [r.random_range(bbox[0].0..bbox[0].1), r.random_range(bbox[1].0..bbox[1].1)];
        let Some((g1, g2)) = p.witness(rc, &grids) else { continue };
        seen += 1;
        let layout = p.layout_at(rc).unwrap();
        let rp = [rate_pair(g1, g2, 0.5).unwrap(), rate_pair(g2, g1, 0.5).unwrap()];
        for usr in User::BOTH {
            let i = usr.index();
            for j in 1..=2 {
                assert!(rc[i] < rate_bound(&layout, usr, j, rp[i]).unwrap());
            }
        }
        for (i, g) in [g1, g2].into_iter().enumerate() {
            assert!(g < (0.5 + rc[i] / lam[i]) * u.power());
        }
        let s = state_of(&layout).unwrap();
        let geom = geom_polyhedron(&s, 1.0, 1.0, lam[0], lam[1], 0.3, 2, 2);
        let rel = rel_polyhedron(&s, [1.0, 1.0], lam, 0.3, [g1, g2], [0.5, 0.5], [2, 2], [100.0, 100.0]).unwrap();
        assert!(geom.intersect(&rel).contains(rc[0], rc[1]));
    }
}

#[test]
fn grid_agrees_with_polygons() {
    let p = problem(0.3, 1, 6);
    let grid = p.grid(0.1).unwrap();
    let Region2D::Polygons { polygons, .. } = p.polygons().unwrap() else { unreachable!() };
    let inside = |x: f64, y: f64| {
        polygons.iter().any(|poly| {
            (0..poly.len()).all(|k| {
                let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) > 1e-9
            })
        })
    };
    let mut agree = 0;
    let pts = grid.points();
    for &(x, y, m) in &pts {
        agree += (inside(x, y) == m) as usize;
    }
    assert!(agree as f64 >= 0.99 * pts.len() as f64, "{agree}/{}", pts.len());
}

#[test]
fn gamma0_and_gamma1() {
    let s = sym_curves(4, 1.0, 0.5722, 0.5, 10f64.powf(0.3617), 0.5).unwrap();
    assert!((10.0 * s.gamma0.log10() - 6.84).abs() < 0.01);
    assert!((s.params.psi(s.gamma0) - 0.6358).abs() < 1e-3);
    assert!(s.low_branch);
    assert!(s.gamma1 < s.gamma2);
    assert!((sym_curves(2, 1.0, 0.5, 0.5, 100.0, 0.3).unwrap().gamma1 - 2.0).abs() < 1e-12);
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((sym_curves(2, 1.0, 0.5, 1.0, 100.0, 0.3).unwrap().gamma0 - golden).abs() < 1e-12);
    let high = sym_curves(4, 1.0, 0.7629, 0.5, 10.0, 0.5).unwrap();
    assert!(!high.low_branch && high.gamma2 <= high.gamma1);
}

#[test]
fn fig20_region_starts_above_lambda() {
    for (lam, p) in [(0.5722, 10f64.powf(0.3617)), (0.7629, 10.0)] {
        let r = sym_region(4, 1.0, lam, 0.5, p, 0.5).unwrap();
        let inf = r.inf().expect("nonempty");
        assert!(inf > lam + 1e-6, "λ={lam}: inf {inf}");
    }
}

#[test]
fn large_power_gives_full_interval() {
    let (n, theta, lam, a, alpha, p) = (2u32, 1.0, 0.6, 0.5, 0.3, 1000.0);
    let s = sym_curves(n, theta, lam, a, p, alpha).unwrap();
    assert!(p > n as f64 * s.gamma1.max(s.gamma2));
    let r = sym_region(n, theta, lam, a, p, alpha).unwrap();
    assert_eq!(r.parts().len(), 1);
    // Upper end where the power line meets ψ + (α/θ)(φ − ψ).
    let tail = |g: f64| c(g / (1.0 + a * g)) + alpha / theta * (c(g) - c(g / (1.0 + a * g)));
    let (mut lo, mut hi) = (1.0, 1e6);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if (m / p - 1.0 / n as f64) * lam < tail(m) { lo = m } else { hi = m }
    }
    let top = tail(lo);
    let (a0, b0) = r.parts()[0];
    assert!((a0 - lam).abs() < 1e-6, "{a0}");
    assert!((b0 - top).abs() < 1e-6, "{b0} vs {top}");
}

#[test]
fn single_codeword_far_apart() {
    let r = sym_region(1, 1.0, 0.6, 0.5, 100.0, 1.5).unwrap();
    assert_eq!(r.parts(), &[(0.0, rbar_c_raw(0.6, 100.0, 1).unwrap())]);
}

#[test]
fn fig19a_diagonal_is_two_intervals() {
    let h = 0.02;
    let sym = sym_region(2, 1.0, 0.6, 0.5, 100.0, 5.0).unwrap();
    assert_eq!(sym.parts().len(), 2);
    let p = problem(5.0, 2, 200);
    let rb = p.rbar().unwrap()[0];
    let runs = diagonal_runs(&p, 0.6, rb, h);
    assert!(intervals_close(&runs, sym.parts(), h + 1e-9), "{runs:?} vs {:?}", sym.parts());
}
