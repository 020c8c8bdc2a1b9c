//! Sufficient conditions for decoding a codeword that is partly hit by the
//! other user's bursts.
//!
//! [`rate_bound`] measures the interfered part of the codeword directly on
//! the layout and is the reference. [`closed_form_bound`] evaluates the same
//! threshold from the overlap triple and is kept as an independent check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BurstLayout, OverlapTriple, User};
use crate::model::{RatePair, SchemeV, SchemeVI};

/// Split of a codeword into parts with and without interference, in scaled
/// time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateDecomp {
    pub len_clear: f64,
    pub len_interf: f64,
}

pub fn decompose(l: &BurstLayout, u: User, j: u32) -> Result<RateDecomp> {
    l.check_index(u, j)?;
    let (s, e) = l.interval(u, j);
    let o = u.other();
    let len_interf: f64 = (1..=l.count(o))
        .map(|m| {
            let (s2, e2) = l.interval(o, m);
            (e.min(e2) - s.max(s2)).max(0.0)
        })
        .sum();
    let theta = e - s;
    let len_interf = len_interf.min(theta);
    Ok(RateDecomp { len_clear: theta - len_interf, len_interf })
}

/// Number of bits per block length that codeword `j` of `u` can carry:
/// `len_interf·ψ + len_clear·φ`. Decoding is reliable iff the payload is
/// strictly below this value.
pub fn rate_bound(l: &BurstLayout, u: User, j: u32, rp: RatePair) -> Result<f64> {
    let d = decompose(l, u, j)?;
    Ok(d.len_interf * rp.psi + d.len_clear * rp.phi)
}

/// Per-user quantities needed by the closed forms. `eta / lambda` is the
/// burst spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormParams {
    pub eta: [f64; 2],
    pub lambda: [f64; 2],
    pub theta: [f64; 2],
    pub nu: [f64; 2],
}

impl ClosedFormParams {
    pub fn from_scheme_v(s: [&SchemeV; 2], nu: [f64; 2]) -> Self {
        Self {
            eta: s.map(|s| s.eta()),
            lambda: s.map(|s| s.lambda()),
            theta: s.map(|s| s.theta()),
            nu,
        }
    }

    pub fn from_scheme_vi(s: [&SchemeVI; 2], nu: [f64; 2]) -> Self {
        // The payload of a codeword is θ·R_c; spacing is θ·R_c/λ.
        Self {
            eta: s.map(|s| s.theta() * s.rate_c()),
            lambda: s.map(|s| s.theta() * s.rate_c() / s.mu()),
            theta: s.map(|s| s.theta()),
            nu,
        }
    }
}

/// Threshold `T` in the condition `η_u < T` for codeword `j`, from its
/// overlap triple.
pub fn closed_form_bound(
    t: OverlapTriple,
    p: &ClosedFormParams,
    u: User,
    j: u32,
    rp: RatePair,
) -> Result<f64> {
    let (i, o) = (u.index(), u.other().index());
    let (th, th_o) = (p.theta[i], p.theta[o]);
    let (eta, eta_o) = (p.eta[i], p.eta[o]);
    let (lam, lam_o) = (p.lambda[i], p.lambda[o]);
    let (nu, nu_o) = (p.nu[i], p.nu[o]);
    let loss = rp.phi - rp.psi;
    let w = t.w_in as f64;
    let jf = j as f64;
    let bad = |why: &str| Err(Error::InconsistentTriple(format!("{t:?} for {u:?} codeword {j}: {why}")));
    match (t.w_minus, t.w_plus) {
        (0, 0) => Ok(th * rp.phi - th_o * w * loss),
        (m, p_) if m != 0 && p_ != 0 => {
            if m == p_ {
                if t.w_in != 0 {
                    return bad("codeword inside one burst cannot contain others");
                }
                Ok(th * rp.psi)
            } else if p_ == m + t.w_in + 1 {
                Ok(th * rp.psi - (1.0 + w) * th_o * loss + (1.0 + w) * (eta_o / lam_o) * loss)
            } else {
                bad("bursts at the two ends must enclose exactly the contained ones")
            }
        }
        (m, 0) => {
            let m = m as f64;
            Ok(th * rp.phi - (nu_o - nu + th_o * (1.0 + w)) * loss - (m / lam_o) * loss * eta_o
                + (jf / lam) * loss * eta)
        }
        (0, p_) => {
            let p_ = p_ as f64;
            Ok(th * rp.psi + (nu_o - nu - th_o * w) * loss + (p_ / lam_o) * loss * eta_o
                - (jf / lam) * loss * eta)
        }
        _ => unreachable!(),
    }
}

/// Worst/best case classification of a codeword's payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecodingClass {
    /// Reliable whatever the overlap.
    AlwaysReliable,
    /// Depends on how much of the codeword is interfered.
    Depends,
    /// Unreliable even without interference.
    Impossible,
}

pub fn corollary1_class(eta: f64, theta: f64, rp: RatePair) -> DecodingClass {
    if eta < theta * rp.psi {
        DecodingClass::AlwaysReliable
    } else if eta >= theta * rp.phi {
        DecodingClass::Impossible
    } else {
        DecodingClass::Depends
    }
}
