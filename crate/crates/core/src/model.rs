//! Parameter containers, the Gaussian capacity function and the closed-form
//! design maps used by the rest of the crate.

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// `0.5 * log2(1 + x)`, the per-symbol capacity of a unit-noise AWGN channel.
pub fn capacity_c(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("capacity of negative or NaN SNR {x}"));
    }
    Ok(cap(x))
}

#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// Arrival and channel parameters of one transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UserParams {
    k: u32,
    q: f64,
    power: f64,
    cross_gain: f64,
}

impl UserParams {
    /// `k` bits arrive per event with probability `q` per slot. `cross_gain`
    /// is this transmitter's power gain at the other receiver.
    pub fn new(k: u32, q: f64, power: f64, cross_gain: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return domain(format!("arrival probability {q} outside (0, 1)"));
        }
        Self::build(k, q, power, cross_gain)
    }

    /// Same as [`UserParams::new`] but with `q = 1`, i.e. an arrival in every
    /// slot. Only meaningful for the arrival simulator.
    pub fn deterministic(k: u32, power: f64, cross_gain: f64) -> Result<Self> {
        Self::build(k, 1.0, power, cross_gain)
    }

    fn build(k: u32, q: f64, power: f64, cross_gain: f64) -> Result<Self> {
        if k == 0 {
            return domain("k must be at least 1");
        }
        if !(power > 0.0) || !power.is_finite() {
            return domain(format!("power budget {power} must be positive"));
        }
        if !(cross_gain >= 0.0) || !cross_gain.is_finite() {
            return domain(format!("cross gain {cross_gain} must be nonnegative"));
        }
        Ok(Self { k, q, power, cross_gain })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn power(&self) -> f64 {
        self.power
    }
    pub fn cross_gain(&self) -> f64 {
        self.cross_gain
    }
    /// Average arrival rate in bits per slot.
    pub fn lambda(&self) -> f64 {
        self.k as f64 * self.q
    }
}

/// Interference-free and interference-limited per-symbol rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePair {
    pub phi: f64,
    pub psi: f64,
}

impl RatePair {
    /// `phi - psi`, the rate lost while the other user is active.
    pub fn loss(&self) -> f64 {
        self.phi - self.psi
    }
}

/// Rates of a user transmitting at `gamma_own` while the other user transmits
/// at `gamma_other` and reaches this receiver with gain `a_other`.
pub fn rate_pair(gamma_own: f64, gamma_other: f64, a_other: f64) -> Result<RatePair> {
    for (name, v) in [("gamma_own", gamma_own), ("gamma_other", gamma_other), ("a_other", a_other)] {
        if !(v >= 0.0) {
            return domain(format!("{name} = {v} must be nonnegative"));
        }
    }
    Ok(rate_pair_unchecked(gamma_own, gamma_other, a_other))
}

#[inline]
pub(crate) fn rate_pair_unchecked(gamma_own: f64, gamma_other: f64, a_other: f64) -> RatePair {
    let phi = cap(gamma_own);
    let psi = cap(gamma_own / (1.0 + a_other * gamma_other));
    RatePair { phi, psi: psi.min(phi) }
}

/// Design of one user without power control: `θ` and `γ` are fixed by the
/// target average rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeV {
    n_codewords: u32,
    rate: f64,
    k: u32,
    q: f64,
    power: f64,
}

/// Open window `(λN/(N+1), λ)` of design rates for `N` codewords (lower end
/// 0 for `N = 1`).
pub(crate) fn rate_window(lambda: f64, n: u32) -> (f64, f64) {
    let lo = if n > 1 { lambda * n as f64 / (n as f64 + 1.0) } else { 0.0 };
    (lo, lambda)
}

/// Membership in [`rate_window`]. Rates within rounding of the lower end
/// (where spacing equals codeword length) are rejected.
pub(crate) fn in_rate_window(lambda: f64, n: u32, r: f64) -> bool {
    let (lo, hi) = rate_window(lambda, n);
    r > lo * (1.0 + 1e-12) && r < hi
}

pub fn derive_scheme_v(u: &UserParams, n: u32, rate: f64) -> Result<SchemeV> {
    if n == 0 {
        return domain("number of codewords must be at least 1");
    }
    if !in_rate_window(u.lambda(), n, rate) {
        let (lo, hi) = rate_window(u.lambda(), n);
        return Err(Error::InfeasibleRate(format!(
            "R = {rate} outside ({lo}, {hi}) for N = {n}"
        )));
    }
    Ok(SchemeV { n_codewords: n, rate, k: u.k, q: u.q, power: u.power })
}

impl SchemeV {
    pub fn n_codewords(&self) -> u32 {
        self.n_codewords
    }
    pub fn rate(&self) -> f64 {
        self.rate
    }
    pub fn lambda(&self) -> f64 {
        self.k as f64 * self.q
    }
    /// Bits per codeword normalised by the block length, `k / N`.
    pub fn eta(&self) -> f64 {
        self.k as f64 / self.n_codewords as f64
    }
    /// Codeword length as a fraction of the block length.
    pub fn theta(&self) -> f64 {
        (self.lambda() / self.rate - 1.0) / self.q
    }
    /// Per-symbol transmit power.
    pub fn gamma(&self) -> f64 {
        let l = self.lambda();
        self.power / self.n_codewords as f64 * l / (l - self.rate)
    }
    /// Spacing between consecutive burst starts, `1 / (N q)`.
    pub fn mu(&self) -> f64 {
        1.0 / (self.n_codewords as f64 * self.q)
    }
    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Long-run average power and rate of a user sending `n` bursts of length
/// `theta` at power `gamma`.
pub fn limit_power_rate_raw(n: u32, gamma: f64, q: f64, theta: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0) {
        return domain(format!("codeword length {theta} must be positive"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return domain(format!("arrival probability {q} outside (0, 1]"));
    }
    let qt = q * theta;
    Ok((n as f64 * gamma / (1.0 + 1.0 / qt), lambda / (1.0 + qt)))
}

pub fn limit_power_rate(s: &SchemeV, u: &UserParams) -> Result<(f64, f64)> {
    limit_power_rate_raw(s.n_codewords, s.gamma(), u.q(), s.theta(), u.lambda())
}

/// Design of one user in the power-controlled setting where the codebook
/// rate and codeword length are free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeVI {
    n_codewords: u32,
    theta: f64,
    rate_c: f64,
    gamma: f64,
    lambda: f64,
}

impl SchemeVI {
    pub fn new(u: &UserParams, n: u32, theta: f64, rate_c: f64, gamma: f64) -> Result<Self> {
        if n == 0 {
            return domain("number of codewords must be at least 1");
        }
        if !(theta > 0.0) {
            return domain(format!("codeword length {theta} must be positive"));
        }
        if !(rate_c > 0.0) {
            return domain(format!("codebook rate {rate_c} must be positive"));
        }
        if !(gamma >= 0.0) {
            return domain(format!("power {gamma} must be nonnegative"));
        }
        let lambda = u.lambda();
        let cap_gamma = power_cap(n, rate_c, lambda, u.power());
        if gamma > cap_gamma {
            return domain(format!("gamma = {gamma} exceeds average power cap {cap_gamma}"));
        }
        Ok(Self { n_codewords: n, theta, rate_c, gamma, lambda })
    }
    pub fn n_codewords(&self) -> u32 {
        self.n_codewords
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn rate_c(&self) -> f64 {
        self.rate_c
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.theta * self.rate_c / self.lambda
    }
}

/// Largest per-symbol power meeting the average budget `p`.
pub(crate) fn power_cap(n: u32, rate_c: f64, lambda: f64, p: f64) -> f64 {
    (1.0 / n as f64 + rate_c / lambda) * p
}

/// Immediate-transmission condition.
pub trait Stability {
    fn stability_ok(&self) -> bool;
}

impl Stability for SchemeV {
    fn stability_ok(&self) -> bool {
        self.n_codewords == 1 || self.mu() > self.theta()
    }
}

impl Stability for SchemeVI {
    fn stability_ok(&self) -> bool {
        self.n_codewords == 1 || self.rate_c > self.lambda
    }
}

/// Stability test from raw quantities: `N = 1` or `1 / (N q) > θ`.
pub fn stability_ok_raw(n: u32, q: f64, theta: f64) -> bool {
    n == 1 || 1.0 / (n as f64 * q) > theta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity_c(0.0).unwrap(), 0.0);
        assert!((capacity_c(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((capacity_c(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(capacity_c(-0.1).is_err());
    }

    #[test]
    fn halving_identity() {
        let u = UserParams::new(3, 0.3, 1000.0, 0.5).unwrap();
        let s = derive_scheme_v(&u, 1, 0.45).unwrap();
        assert!((s.theta() - 10.0 / 3.0).abs() < 1e-12);
        assert!((s.gamma() - 2000.0).abs() < 1e-9);
        assert!((s.mu() - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rate_window_enforced() {
        let u = UserParams::new(2, 0.3, 100.0, 0.5).unwrap();
        assert!(derive_scheme_v(&u, 2, 0.39).is_err());
        assert!(derive_scheme_v(&u, 2, 0.6).is_err());
        let s = derive_scheme_v(&u, 2, 0.42).unwrap();
        assert!(s.stability_ok());
    }

    #[test]
    fn stability_examples() {
        assert!(stability_ok_raw(1, 0.3, 100.0));
        assert!(!stability_ok_raw(2, 0.3, 2.0));
        assert!(stability_ok_raw(2, 0.3, 1.5));
    }
}
