//! Slot-level simulation of Bernoulli arrivals and of the two burst
//! schedulers: the asynchronous one that transmits as soon as a codeword's
//! worth of bits is buffered, and the synchronous reference that can only
//! start transmissions at multiples of the codeword length.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::model::UserParams;
use crate::rng::{self, tag, Stream};

/// Per-slot arrival indicators for slots `1..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalTrace {
    arrivals: Vec<u8>,
    seed: u64,
}

impl ArrivalTrace {
    /// Builds a trace from explicit indicators (each 0 or 1).
    pub fn from_indicators(arrivals: Vec<u8>, seed: u64) -> Result<Self> {
        if arrivals.iter().any(|&a| a > 1) {
            return domain("arrival indicators must be 0 or 1");
        }
        Ok(Self { arrivals, seed })
    }

    pub fn horizon(&self) -> u64 {
        self.arrivals.len() as u64
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Indicator of slot `t` (1-based).
    pub fn at(&self, t: u64) -> u8 {
        self.arrivals[(t - 1) as usize]
    }

    pub fn indicators(&self) -> &[u8] {
        &self.arrivals
    }
}

pub fn simulate_arrivals(u: &UserParams, horizon: i64, seed: u64) -> Result<ArrivalTrace> {
    if horizon <= 0 {
        return domain(format!("horizon {horizon} must be positive"));
    }
    let mut s = rng::stream(seed, &[tag::ARRIVALS]);
    Ok(trace_from_stream(u.q(), horizon as u64, seed, &mut s))
}

pub(crate) fn trace_from_stream(q: f64, horizon: u64, seed: u64, s: &mut Stream) -> ArrivalTrace {
    let arrivals = if q >= 1.0 {
        vec![1; horizon as usize]
    } else {
        // P(next_u64 < t) = t / 2^64 = q.
        let t = (q * 18_446_744_073_709_551_616.0) as u64;
        (0..horizon).map(|_| (s.next_u64() < t) as u8).collect()
    };
    ArrivalTrace { arrivals, seed }
}

/// Slots at whose end each codeword's bits are complete, plus burst sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BurstSchedule {
    pub triggers: Vec<u64>,
    pub n: u64,
    pub preamble_len: u64,
    pub codeword_len: u64,
    /// 1-based indices `j` whose bits were ready before burst `j - 1` ended.
    pub violations: Vec<u32>,
}

impl BurstSchedule {
    /// First slot of burst `j` (its preamble), 1-based.
    pub fn burst_start(&self, j: usize) -> u64 {
        self.triggers[j - 1] + 1
    }

    /// First slot of codeword `j`.
    pub fn codeword_start(&self, j: usize) -> u64 {
        self.burst_start(j) + self.preamble_len
    }

    pub fn burst_len(&self) -> u64 {
        self.preamble_len + self.codeword_len
    }

    /// Last slot of the final burst.
    pub fn last_slot(&self) -> Option<u64> {
        self.triggers.last().map(|t| t + self.burst_len())
    }

    pub fn is_immediate(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bits per codeword, `⌊n k / N⌋`.
pub fn bits_per_codeword(u: &UserParams, n: u64, count: u32) -> u64 {
    n * u.k() as u64 / count as u64
}

fn codeword_len(n: u64, theta: f64) -> u64 {
    (n as f64 * theta).floor() as u64
}

/// First slot of source activity for offset `nu`.
pub fn first_active_slot(n: u64, nu: f64) -> u64 {
    ((n as f64 * nu).floor() as u64).max(1)
}

fn check_common(n: u64, count: u32, theta: f64) -> Result<()> {
    if n == 0 || count == 0 {
        return domain("n and N must be positive");
    }
    if !(theta > 0.0) {
        return domain(format!("codeword length fraction {theta} must be positive"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn run_async_scheduler(
    tr: &ArrivalTrace,
    u: &UserParams,
    n: u64,
    count: u32,
    nprime: u64,
    theta: f64,
    nu: f64,
) -> Result<BurstSchedule> {
    check_common(n, count, theta)?;
    if !(nu >= 0.0) {
        return domain(format!("offset {nu} must be nonnegative"));
    }
    let b = bits_per_codeword(u, n, count);
    let k = u.k() as u64;
    let ni = codeword_len(n, theta);
    let busy = nprime + ni;
    let mut triggers = Vec::with_capacity(count as usize);
    let mut violations = Vec::new();
    let mut cum = 0u64;
    let mut t = first_active_slot(n, nu) - 1;
    for j in 1..=count as u64 {
        while cum < j * b {
            t += 1;
            if t > tr.horizon() {
                return Err(Error::HorizonTooShort(format!(
                    "{} of {count} codewords ready by slot {}",
                    j - 1,
                    tr.horizon()
                )));
            }
            cum += k * tr.at(t) as u64;
        }
        let ready = t;
        let tau = match triggers.last() {
            Some(&prev) if ready < prev + busy => {
                violations.push(j as u32);
                prev + busy
            }
            _ => ready,
        };
        triggers.push(tau);
    }
    Ok(BurstSchedule { triggers, n, preamble_len: nprime, codeword_len: ni, violations })
}

/// Dispatch slots of the synchronous scheme (source active from slot 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncSchedule {
    pub sends: Vec<u64>,
    pub codeword_len: u64,
}

pub fn run_sync_scheduler(
    tr: &ArrivalTrace,
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
) -> Result<SyncSchedule> {
    check_common(n, count, theta)?;
    let ni = codeword_len(n, theta);
    if ni == 0 {
        return domain("codeword length rounds to zero slots");
    }
    let b = bits_per_codeword(u, n, count);
    let k = u.k() as u64;
    let mut sends = Vec::with_capacity(count as usize);
    let mut cum = 0u64;
    let mut t = 0u64;
    let mut m = 0u64;
    for j in 1..=count as u64 {
        loop {
            m += 1;
            let end = m * ni;
            if end > tr.horizon() {
                return Err(Error::HorizonTooShort(format!(
                    "{} of {count} codewords dispatched by slot {}",
                    j - 1,
                    tr.horizon()
                )));
            }
            while t < end {
                t += 1;
                cum += k * tr.at(t) as u64;
            }
            if cum >= j * b {
                break;
            }
        }
        sends.push(m * ni);
    }
    Ok(SyncSchedule { sends, codeword_len: ni })
}

/// Default preamble length `⌈√n⌉`.
pub fn default_preamble(n: u64) -> u64 {
    (n as f64).sqrt().ceil() as u64
}

fn horizon_guess(u: &UserParams, n: u64, count: u32, theta: f64, nprime: u64, nu: f64) -> u64 {
    let total_bits = (count as u64 * bits_per_codeword(u, n, count)) as f64;
    let mean = total_bits / u.lambda();
    let ni = codeword_len(n, theta) as f64;
    (2.0 * mean + (count as f64 + 2.0) * (ni + nprime as f64) + n as f64 * nu + 1000.0) as u64
}

/// Runs `f` on a per-trial trace, doubling the horizon until it suffices.
/// The trace prefix is the same for every horizon, so the result does not
/// depend on the initial guess.
fn with_trace<T>(
    q: f64,
    seed: u64,
    tags: &[u64],
    mut horizon: u64,
    mut f: impl FnMut(&ArrivalTrace) -> Result<T>,
) -> Result<T> {
    loop {
        let tr = trace_from_stream(q, horizon, seed, &mut rng::stream(seed, tags));
        match f(&tr) {
            Err(Error::HorizonTooShort(_)) if horizon < 1 << 34 => horizon *= 2,
            other => return other,
        }
    }
}

/// Errors if `m μ / θ` is an integer for some `m = 1..=N`.
pub fn check_resonance(mu: f64, theta: f64, count: u32) -> Result<()> {
    for m in 1..=count {
        let ratio = m as f64 * mu / theta;
        if (ratio - ratio.round()).abs() <= 1e-9 {
            return Err(Error::Resonance { m, ratio });
        }
    }
    Ok(())
}

/// Both schedules for one trial.
pub fn paired_trial(
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
    seed: u64,
    trial: u64,
) -> Result<(BurstSchedule, SyncSchedule)> {
    let np = default_preamble(n);
    with_trace(
        u.q(),
        seed,
        &[tag::ARRIVALS, 0, trial],
        horizon_guess(u, n, count, theta, np, 0.0),
        |tr| Ok((run_async_scheduler(tr, u, n, count, np, theta, 0.0)?, run_sync_scheduler(tr, u, n, count, theta)?)),
    )
}

/// Per-`j` frequency of `ς^(j) > (1 + δ) τ^(j)`.
#[allow(clippy::too_many_arguments)]
pub fn delay_gap_experiment(
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let mu = 1.0 / (count as f64 * u.q());
    check_resonance(mu, theta, count)?;
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let hits: Vec<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (a, s) = paired_trial(u, n, count, theta, seed, trial)?;
            Ok(a.triggers
                .iter()
                .zip(&s.sends)
                .map(|(&tau, &sig)| sig as f64 > (1.0 + delta) * tau as f64)
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((0..count as usize)
        .map(|j| hits.iter().filter(|h| h[j]).count() as f64 / trials as f64)
        .collect())
}

/// Fraction of trials in which some burst was not immediate.
pub fn immediacy_violation_frequency(
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let np = default_preamble(n);
    let bad = (0..trials)
        .into_par_iter()
        .map(|trial| {
            with_trace(
                u.q(),
                seed,
                &[tag::ARRIVALS, 0, trial],
                horizon_guess(u, n, count, theta, np, 0.0),
                |tr| Ok(!run_async_scheduler(tr, u, n, count, np, theta, 0.0)?.is_immediate()),
            )
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(bad.iter().filter(|&&b| b).count() as f64 / trials as f64)
}

/// Trigger slots of every trial, for moment checks.
#[allow(clippy::too_many_arguments)]
pub fn trigger_samples(
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
    nu: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<BurstSchedule>> {
    let np = default_preamble(n);
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            with_trace(
                u.q(),
                seed,
                &[tag::ARRIVALS, 0, trial],
                horizon_guess(u, n, count, theta, np, nu),
                |tr| run_async_scheduler(tr, u, n, count, np, theta, nu),
            )
        })
        .collect()
}

/// Empirical average power and rate over the activity period of one user
/// transmitting Gaussian symbols of power `gamma`.
pub fn power_rate_experiment(
    u: &UserParams,
    n: u64,
    count: u32,
    theta: f64,
    gamma: f64,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return domain("at least one trial is required");
    }
    let normal = Normal::new(0.0, gamma.sqrt()).map_err(|e| Error::Domain(e.to_string()))?;
    let np = default_preamble(n);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = with_trace(
                u.q(),
                seed,
                &[tag::ARRIVALS, 0, trial],
                horizon_guess(u, n, count, theta, np, 0.0),
                |tr| run_async_scheduler(tr, u, n, count, np, theta, 0.0),
            )?;
            let active = s.last_slot().expect("at least one burst") - first_active_slot(n, 0.0) + 1;
            let mut sym = rng::stream(seed, &[tag::SYMBOLS, 0, trial]);
            let symbols = count as u64 * s.burst_len();
            let energy: f64 = (0..symbols).map(|_| normal.sample(&mut sym).powi(2)).sum();
            let bits = count as u64 * bits_per_codeword(u, n, count);
            Ok((energy / active as f64, bits as f64 / active as f64))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let t = trials as f64;
    Ok((
        per_trial.iter().map(|p| p.0).sum::<f64>() / t,
        per_trial.iter().map(|p| p.1).sum::<f64>() / t,
    ))
}

/// Chernoff bound on `P(X ≥ (1 + ε) N p)` for `X ~ Bin(N, p)`.
pub fn binomial_tail_bound(count: u64, p: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !(p > 0.0 && p < 1.0) {
        return domain(format!("need eps > 0 and 0 < p < 1, got eps={eps}, p={p}"));
    }
    let e = (1.0 + eps) * eps.ln_1p() - eps;
    Ok((-e * count as f64 * p).exp())
}

/// Monte Carlo estimate of `P(X ≥ x)` for `X ~ Bin(N, p)`.
pub fn binomial_tail_mc(count: u64, p: f64, x: u64, trials: u64, seed: u64) -> f64 {
    let chunks = 64u64;
    let per = trials.div_ceil(chunks);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = rng::stream(seed, &[tag::ARRIVALS, 99, c]);
            let todo = per.min(trials.saturating_sub(c * per));
            (0..todo)
                .filter(|_| (0..count).filter(|_| s.random::<f64>() < p).count() as u64 >= x)
                .count() as u64
        })
        .sum();
    hits as f64 / trials as f64
}

/// One line of an experiment CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: u64,
    pub j: u32,
    pub metric: String,
    pub value: f64,
    pub trials: u64,
    pub seed: u64,
}
