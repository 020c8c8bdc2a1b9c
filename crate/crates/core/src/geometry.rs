//! Large-n burst positions on the scaled time axis, overlap classification
//! and channel states.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::model::{SchemeV, SchemeVI};

/// Tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest number of states [`enumerate_states`] will materialise.
pub const STATE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum User {
    Tx1,
    Tx2,
}

impl User {
    pub const BOTH: [User; 2] = [User::Tx1, User::Tx2];

    pub fn index(self) -> usize {
        match self {
            User::Tx1 => 0,
            User::Tx2 => 1,
        }
    }

    pub fn other(self) -> User {
        match self {
            User::Tx1 => User::Tx2,
            User::Tx2 => User::Tx1,
        }
    }

    pub fn from_number(i: u32) -> Result<User> {
        match i {
            1 => Ok(User::Tx1),
            2 => Ok(User::Tx2),
            _ => Err(Error::IndexOutOfRange(format!("user {i}"))),
        }
    }
}

/// Offset-free burst pattern of one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shape {
    pub spacing: f64,
    pub length: f64,
    pub count: u32,
}

impl Shape {
    pub fn new(spacing: f64, length: f64, count: u32) -> Result<Self> {
        if !(spacing > 0.0 && length > 0.0) || count == 0 {
            return domain(format!("invalid burst shape mu={spacing}, theta={length}, N={count}"));
        }
        if count > 1 && spacing <= length {
            return domain(format!(
                "bursts of one user overlap: spacing {spacing} <= length {length}"
            ));
        }
        Ok(Self { spacing, length, count })
    }
}

/// Anything that determines a burst pattern.
pub trait BurstShape {
    fn shape(&self) -> Shape;
}

impl BurstShape for Shape {
    fn shape(&self) -> Shape {
        *self
    }
}

impl BurstShape for SchemeV {
    fn shape(&self) -> Shape {
        Shape { spacing: self.mu(), length: self.theta(), count: self.n_codewords() }
    }
}

impl BurstShape for SchemeVI {
    fn shape(&self) -> Shape {
        Shape { spacing: self.mu(), length: self.theta(), count: self.n_codewords() }
    }
}

/// Both users' interval patterns plus their activation offsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BurstLayout {
    pub shapes: [Shape; 2],
    pub offsets: [f64; 2],
}

pub fn layout_of(s1: &impl BurstShape, s2: &impl BurstShape, nu1: f64, nu2: f64) -> Result<BurstLayout> {
    BurstLayout::new([s1.shape(), s2.shape()], [nu1, nu2])
}

impl BurstLayout {
    pub fn new(shapes: [Shape; 2], offsets: [f64; 2]) -> Result<Self> {
        for s in &shapes {
            Shape::new(s.spacing, s.length, s.count)?;
        }
        if !offsets.iter().all(|v| v.is_finite()) {
            return domain("offsets must be finite");
        }
        Ok(Self { shapes, offsets })
    }

    pub fn shape(&self, u: User) -> &Shape {
        &self.shapes[u.index()]
    }

    pub fn count(&self, u: User) -> u32 {
        self.shapes[u.index()].count
    }

    /// `ν2 − ν1`.
    pub fn alpha(&self) -> f64 {
        self.offsets[1] - self.offsets[0]
    }

    /// Interval `(jμ + ν, jμ + ν + θ)` of codeword `j` (1-based).
    pub fn interval(&self, u: User, j: u32) -> (f64, f64) {
        let s = &self.shapes[u.index()];
        let start = j as f64 * s.spacing + self.offsets[u.index()];
        (start, start + s.length)
    }

    pub fn check_index(&self, u: User, j: u32) -> Result<()> {
        if j == 0 || j > self.count(u) {
            return Err(Error::IndexOutOfRange(format!(
                "codeword {j} of {u:?} (has {})",
                self.count(u)
            )));
        }
        Ok(())
    }

    pub fn translated(&self, c: f64) -> Self {
        Self { shapes: self.shapes, offsets: [self.offsets[0] + c, self.offsets[1] + c] }
    }
}

/// Indices of the other user's bursts covering a codeword's start
/// (`w_minus`) and end (`w_plus`), and how many lie strictly inside it
/// (`w_in`). Zero means none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OverlapTriple {
    pub w_minus: u32,
    pub w_plus: u32,
    pub w_in: u32,
}

/// Values of `j2μ2 − j1μ1 + α` that are forbidden, shifted into α-space.
pub fn alpha_breakpoints(shapes: &[Shape; 2]) -> Vec<f64> {
    let [s1, s2] = shapes;
    let mut out = Vec::with_capacity(4 * (s1.count * s2.count) as usize);
    for j1 in 1..=s1.count {
        for j2 in 1..=s2.count {
            let base = j1 as f64 * s1.spacing - j2 as f64 * s2.spacing;
            for c in [0.0, s1.length, -s2.length, s1.length - s2.length] {
                out.push(base + c);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    out
}

/// True iff no endpoint of one user coincides (within `tol`) with an
/// endpoint of the other.
pub fn mild_check(shapes: &[Shape; 2], nu1: f64, nu2: f64, tol: f64) -> bool {
    let [s1, s2] = shapes;
    let alpha = nu2 - nu1;
    for j1 in 1..=s1.count {
        for j2 in 1..=s2.count {
            let e = j2 as f64 * s2.spacing - j1 as f64 * s1.spacing + alpha;
            for f in [0.0, s1.length, -s2.length, s1.length - s2.length] {
                if (e - f).abs() <= tol {
                    return false;
                }
            }
        }
    }
    true
}

fn require_mild(l: &BurstLayout) -> Result<()> {
    if mild_check(&l.shapes, l.offsets[0], l.offsets[1], DEFAULT_TOL) {
        Ok(())
    } else {
        Err(Error::DegenerateLayout(format!(
            "endpoints of the two users coincide at alpha = {}",
            l.alpha()
        )))
    }
}

/// Overlap triples of every codeword, Tx1 first.
pub fn overlap_profile(l: &BurstLayout) -> Result<[Vec<OverlapTriple>; 2]> {
    require_mild(l)?;
    Ok(User::BOTH.map(|u| (1..=l.count(u)).map(|j| triple_of(l, u, j)).collect()))
}

fn triple_of(l: &BurstLayout, u: User, j: u32) -> OverlapTriple {
    let (s, e) = l.interval(u, j);
    let o = u.other();
    let mut t = OverlapTriple { w_minus: 0, w_plus: 0, w_in: 0 };
    for m in 1..=l.count(o) {
        let (s2, e2) = l.interval(o, m);
        if s2 < s && s < e2 {
            t.w_minus = m;
        }
        if s2 < e && e < e2 {
            t.w_plus = m;
        }
        if s < s2 && e2 < e {
            t.w_in += 1;
        }
    }
    t
}

/// For each Tx2 codeword, the cells of the Tx1 partition `I_1 … I_{2N1+1}`
/// holding its start and end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelState {
    n1: u32,
    pairs: Vec<(u32, u32)>,
}

impl Serialize for ChannelState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.flat().serialize(s)
    }
}

impl ChannelState {
    pub fn new(n1: u32, pairs: Vec<(u32, u32)>) -> Result<Self> {
        let top = 2 * n1 + 1;
        let mut prev = 1;
        for &(u, v) in &pairs {
            if u < prev || v < u || v > top {
                return domain(format!("state {pairs:?} is not nondecreasing within 1..={top}"));
            }
            prev = v;
        }
        Ok(Self { n1, pairs })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `(u_1, v_1, u_2, v_2, …)`.
    pub fn flat(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    /// Overlap triples implied by the state alone.
    pub fn overlap_profile(&self) -> [Vec<OverlapTriple>; 2] {
        let tx1 = (1..=self.n1)
            .map(|l| {
                let mut t = OverlapTriple { w_minus: 0, w_plus: 0, w_in: 0 };
                for (j, &(u, v)) in self.pairs.iter().enumerate() {
                    let j = j as u32 + 1;
                    if u < 2 * l && v >= 2 * l {
                        t.w_minus = j;
                    }
                    if u <= 2 * l && v > 2 * l {
                        t.w_plus = j;
                    }
                    if u == 2 * l && v == 2 * l {
                        t.w_in += 1;
                    }
                }
                t
            })
            .collect();
        let tx2 = self
            .pairs
            .iter()
            .map(|&(u, v)| OverlapTriple {
                w_minus: if u % 2 == 0 { u / 2 } else { 0 },
                w_plus: if v % 2 == 0 { v / 2 } else { 0 },
                w_in: (1..=self.n1).filter(|&l| u < 2 * l && v > 2 * l).count() as u32,
            })
            .collect();
        [tx1, tx2]
    }
}

/// Cell index (1-based) of `x` in the partition cut by Tx1's endpoints.
fn cell_of(l: &BurstLayout, x: f64) -> u32 {
    let mut cell = 1;
    for m in 1..=l.count(User::Tx1) {
        let (a, b) = l.interval(User::Tx1, m);
        if a < x {
            cell += 1;
        }
        if b < x {
            cell += 1;
        }
    }
    cell
}

pub fn state_of(l: &BurstLayout) -> Result<ChannelState> {
    require_mild(l)?;
    let pairs = (1..=l.count(User::Tx2))
        .map(|j| {
            let (b, e) = l.interval(User::Tx2, j);
            (cell_of(l, b), cell_of(l, e))
        })
        .collect();
    Ok(ChannelState { n1: l.count(User::Tx1), pairs })
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn state_count(n1: u32, n2: u32) -> Option<u128> {
    binomial(2 * (n1 as u64 + n2 as u64), 2 * n2 as u64)
}

/// All states for `(N1, N2)`, via the bijection between nondecreasing
/// sequences over `1..=m` and compositions `x_1 ≥ 1, x_2.. ≥ 0` of `m`.
pub fn enumerate_states(n1: u32, n2: u32) -> Result<Vec<ChannelState>> {
    if n1 == 0 || n2 == 0 {
        return domain("N1 and N2 must be at least 1");
    }
    let count = state_count(n1, n2).unwrap_or(u128::MAX);
    if count > STATE_LIMIT {
        return Err(Error::TooManyStates { count, limit: STATE_LIMIT });
    }
    let m = 2 * n1 + 1;
    let len = 2 * n2 as usize;
    let mut out = Vec::with_capacity(count as usize);
    let mut x = vec![0u32; len + 1];
    compositions(&mut x, 0, m, &mut |x| {
        let mut acc = 0;
        let seq: Vec<u32> = x[..len]
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect();
        let pairs = seq.chunks(2).map(|c| (c[0], c[1])).collect();
        out.push(ChannelState { n1, pairs });
    });
    Ok(out)
}

fn compositions(x: &mut Vec<u32>, pos: usize, left: u32, f: &mut impl FnMut(&[u32])) {
    if pos + 1 == x.len() {
        x[pos] = left;
        f(x);
        return;
    }
    let min = if pos == 0 { 1 } else { 0 };
    for v in min..=left {
        x[pos] = v;
        compositions(x, pos + 1, left - v, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(mu: f64, th: f64, n: u32) -> Shape {
        Shape::new(mu, th, n).unwrap()
    }

    #[test]
    fn first_interval() {
        let l = BurstLayout::new([shape(1.0, 0.4, 1), shape(1.0, 0.4, 1)], [0.0, 0.0]).unwrap();
        assert_eq!(l.interval(User::Tx1, 1), (1.0, 1.4));
    }

    #[test]
    fn left_end_only() {
        let l = BurstLayout::new([shape(1.0, 0.4, 1), shape(0.7, 0.3, 1)], [0.0, 0.05]).unwrap();
        let p = overlap_profile(&l).unwrap();
        assert_eq!(p[0][0], OverlapTriple { w_minus: 1, w_plus: 0, w_in: 0 });
    }

    #[test]
    fn breakpoints_example() {
        let b = alpha_breakpoints(&[shape(1.0, 0.5, 1), shape(1.0, 0.5, 1)]);
        assert_eq!(b, vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_states(1, 1).unwrap().len(), 6);
        assert_eq!(enumerate_states(2, 2).unwrap().len(), 70);
        assert_eq!(enumerate_states(3, 5).unwrap().len(), 8008);
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(enumerate_states(20, 20), Err(Error::TooManyStates { .. })));
    }

    #[test]
    fn far_away_tx2() {
        let l = BurstLayout::new([shape(1.0, 0.4, 3), shape(1.0, 0.4, 2)], [0.0, 100.0]).unwrap();
        let s = state_of(&l).unwrap();
        assert_eq!(s.pairs(), &[(7, 7), (7, 7)]);
        let p = overlap_profile(&l).unwrap();
        assert!(p.iter().flatten().all(|t| *t == OverlapTriple { w_minus: 0, w_plus: 0, w_in: 0 }));
    }

    #[test]
    fn coincidence_rejected() {
        let l = BurstLayout::new([shape(1.0, 0.5, 1), shape(1.0, 0.5, 1)], [0.0, 0.5]).unwrap();
        assert!(matches!(state_of(&l), Err(Error::DegenerateLayout(_))));
    }
}
