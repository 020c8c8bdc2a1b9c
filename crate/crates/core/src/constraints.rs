//! Endpoint orderings and interference lengths of a channel state, written
//! as affine forms in `(R1, R2, ν1, ν2)`.

use crate::affine::{Affine, Strict, NU1, NU2, R1, R2};
use crate::geometry::{ChannelState, Shape, User};
use crate::model::RatePair;

/// Burst pattern whose endpoints are affine in `(R1, R2, ν1, ν2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolicLayout {
    spacing: [Affine; 2],
    length: [f64; 2],
    count: [u32; 2],
}

impl SymbolicLayout {
    /// Spacings fixed by the design; only the offsets vary.
    pub fn fixed_spacing(shapes: &[Shape; 2]) -> Self {
        Self {
            spacing: shapes.map(|s| Affine::constant(s.spacing)),
            length: shapes.map(|s| s.length),
            count: shapes.map(|s| s.count),
        }
    }

    /// Spacing `θ_i R_i / λ_i`, linear in the codebook rate.
    pub fn rate_spacing(theta: [f64; 2], lambda: [f64; 2], count: [u32; 2]) -> Self {
        Self {
            spacing: [Affine::var(R1, theta[0] / lambda[0]), Affine::var(R2, theta[1] / lambda[1])],
            length: theta,
            count,
        }
    }

    pub fn count(&self, u: User) -> u32 {
        self.count[u.index()]
    }

    pub fn start(&self, u: User, j: u32) -> Affine {
        let i = u.index();
        self.spacing[i] * j as f64 + Affine::var([NU1, NU2][i], 1.0)
    }

    pub fn end(&self, u: User, j: u32) -> Affine {
        self.start(u, j) + self.length[u.index()]
    }

    /// Strict orderings between consecutive endpoints of different users, in
    /// the merged order the state prescribes.
    pub fn geometric(&self, s: &ChannelState) -> Vec<Strict> {
        #[derive(Clone, Copy, PartialEq)]
        enum Owner {
            A,
            B,
        }
        let n1 = self.count[0];
        let mut tx2_points: Vec<(u32, Affine)> = Vec::with_capacity(2 * s.pairs().len());
        for (j, &(u, v)) in s.pairs().iter().enumerate() {
            let j = j as u32 + 1;
            tx2_points.push((u, self.start(User::Tx2, j)));
            tx2_points.push((v, self.end(User::Tx2, j)));
        }
        let mut merged: Vec<(Owner, Affine)> = Vec::with_capacity(tx2_points.len() + 2 * n1 as usize);
        let mut it = tx2_points.into_iter().peekable();
        for cell in 1..=2 * n1 + 1 {
            while let Some(&(c, _)) = it.peek() {
                if c != cell {
                    break;
                }
                merged.push((Owner::B, it.next().unwrap().1));
            }
            if cell <= 2 * n1 {
                let l = cell.div_ceil(2);
                let p = if cell % 2 == 1 { self.start(User::Tx1, l) } else { self.end(User::Tx1, l) };
                merged.push((Owner::A, p));
            }
        }
        merged
            .windows(2)
            .filter(|w| w[0].0 != w[1].0)
            .map(|w| Strict(w[0].1 - w[1].1))
            .collect()
    }

    /// Interfered length of codeword `j` of `u` under state `s`.
    pub fn interference(&self, s: &ChannelState, u: User, j: u32) -> Affine {
        let mut acc = Affine::constant(0.0);
        match u {
            User::Tx1 => {
                for (m, &(a, b)) in s.pairs().iter().enumerate() {
                    acc = acc + self.overlap(j, m as u32 + 1, a, b).unwrap_or_default();
                }
            }
            User::Tx2 => {
                let (a, b) = s.pairs()[j as usize - 1];
                for l in 1..=self.count[0] {
                    acc = acc + self.overlap(l, j, a, b).unwrap_or_default();
                }
            }
        }
        acc
    }

    /// Overlap of Tx1 codeword `l` with Tx2 codeword `m` whose endpoints lie
    /// in cells `(a, b)`.
    fn overlap(&self, l: u32, m: u32, a: u32, b: u32) -> Option<Affine> {
        let cell = 2 * l;
        if a > cell || b < cell {
            return None;
        }
        let lo = if a < cell { self.start(User::Tx1, l) } else { self.start(User::Tx2, m) };
        let hi = if b > cell { self.end(User::Tx1, l) } else { self.end(User::Tx2, m) };
        Some(hi - lo)
    }

    /// `payload − (θφ − len_interf·(φ − ψ)) < 0` for every codeword of both
    /// users. `payload[i]` is the bits per block length of user `i`.
    pub fn reliability(&self, s: &ChannelState, payload: [Affine; 2], rp: [RatePair; 2]) -> Vec<Strict> {
        let mut out = Vec::new();
        for u in User::BOTH {
            let i = u.index();
            let r = rp[i];
            for j in 1..=self.count[i] {
                let bound = self.interference(s, u, j) * (-(r.phi - r.psi)) + self.length[i] * r.phi;
                out.push(Strict(payload[i] - bound));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_sized_geometric_rows() {
        let l = SymbolicLayout::rate_spacing([1.0, 1.0], [0.6, 0.6], [2, 2]);
        let s = ChannelState::new(2, vec![(1, 2), (2, 4)]).unwrap();
        assert_eq!(l.geometric(&s).len(), 5);
    }
}
