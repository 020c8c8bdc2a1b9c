//! Affine forms over the four free quantities of a two-user layout:
//! the codebook rates `(R1, R2)` and the offsets `(ν1, ν2)`.

use std::ops::{Add, Mul, Neg, Sub};

pub const R1: usize = 0;
pub const R2: usize = 1;
pub const NU1: usize = 2;
pub const NU2: usize = 3;

/// `coef · (R1, R2, ν1, ν2) + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Affine {
    pub coef: [f64; 4],
    pub constant: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Self { coef: [0.0; 4], constant: c }
    }

    pub fn var(idx: usize, scale: f64) -> Self {
        let mut coef = [0.0; 4];
        coef[idx] = scale;
        Self { coef, constant: 0.0 }
    }

    pub fn eval(&self, x: [f64; 4]) -> f64 {
        self.coef.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coef.iter().all(|&c| c == 0.0)
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        let mut coef = self.coef;
        for (c, d) in coef.iter_mut().zip(o.coef) {
            *c += d;
        }
        Affine { coef, constant: self.constant + o.constant }
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        self + (-o)
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        self * -1.0
    }
}

impl Mul<f64> for Affine {
    type Output = Affine;
    fn mul(self, s: f64) -> Affine {
        Affine { coef: self.coef.map(|c| c * s), constant: self.constant * s }
    }
}

impl Add<f64> for Affine {
    type Output = Affine;
    fn add(self, s: f64) -> Affine {
        Affine { coef: self.coef, constant: self.constant + s }
    }
}

/// Strict linear constraint `form < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strict(pub Affine);

impl Strict {
    pub fn holds(&self, x: [f64; 4]) -> bool {
        self.0.eval(x) < 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Affine::var(R1, 2.0) + 1.0;
        let b = Affine::var(NU2, 1.0) - Affine::var(NU1, 1.0);
        let c = a - b * 3.0;
        assert_eq!(c.eval([1.0, 0.0, 1.0, 2.0]), 2.0 + 1.0 - 3.0);
        assert!(!c.is_constant());
        assert!(Affine::constant(4.0).is_constant());
    }
}
