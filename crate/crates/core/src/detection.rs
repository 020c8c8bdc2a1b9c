//! Finite-length Monte Carlo of burst detection and decoding: Gaussian
//! codebooks with preambles, the two-receiver AWGN channel, sequential
//! typicality-based arrival estimation and segment-wise decoding.
//!
//! Slots are 0-based here; a burst starting at slot `t` sends its preamble
//! on `t..t+n'` and its codeword on `t+n'..t+n'+n`.

use std::ops::Range;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::User;
use crate::rng::{stream, tag};

const LOG2E: f64 = std::f64::consts::LOG2_E;
pub const MAX_CODEWORDS: usize = 1 << 16;

/// Reference densities for a (sent symbol, received sample) pair at one
/// receiver: own or other sender, with or without interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PdfId {
    /// Own symbol, no interference.
    P1,
    /// Own symbol, other user transmitting.
    P2,
    /// Other user's symbol, own transmitter silent.
    P3,
    /// Other user's symbol, own transmitter active.
    P4,
}

/// `p(x, y) = g(x; var_x) · g(y − slope·x; var_noise)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointGaussian {
    pub var_x: f64,
    pub slope: f64,
    pub var_noise: f64,
}

impl JointGaussian {
    pub fn var_y(&self) -> f64 {
        self.slope * self.slope * self.var_x + self.var_noise
    }

    /// Differential entropies in bits: `(h(x), h(y), h(x, y))`.
    pub fn entropies(&self) -> (f64, f64, f64) {
        let h = |v: f64| 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * v).log2();
        (h(self.var_x), h(self.var_y()), h(self.var_x) + h(self.var_noise))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypicalityParams {
    pub eps: f64,
    pub pdf: PdfId,
    /// Per-symbol power of the receiver's own transmitter.
    pub gamma_own: f64,
    /// Per-symbol power of the other transmitter.
    pub gamma_other: f64,
    /// Power gain of the other transmitter at this receiver.
    pub gain_other: f64,
}

impl TypicalityParams {
    pub fn with_pdf(&self, pdf: PdfId) -> Self {
        Self { pdf, ..*self }
    }

    pub fn density(&self) -> JointGaussian {
        let (go, gx, a) = (self.gamma_own, self.gamma_other, self.gain_other);
        match self.pdf {
            PdfId::P1 => JointGaussian { var_x: go, slope: 1.0, var_noise: 1.0 },
            PdfId::P2 => JointGaussian { var_x: go, slope: 1.0, var_noise: 1.0 + a * gx },
            PdfId::P3 => JointGaussian { var_x: gx, slope: a.sqrt(), var_noise: 1.0 },
            PdfId::P4 => JointGaussian { var_x: gx, slope: a.sqrt(), var_noise: 1.0 + go },
        }
    }

    /// Range of `ε` under which the large-deviation guarantees hold.
    pub fn within_working_conditions(&self) -> bool {
        let bound = (self.gamma_own / 3.0).min(0.5 * (self.gamma_own + self.gain_other * self.gamma_other)) * LOG2E;
        self.eps > 0.0 && self.eps < bound
    }
}

/// Joint typicality of `(xs, ys)` with respect to `tp.density()`.
///
/// For Gaussian factors, `mean log2 g(x; v) + h = ½ log2(e) (1 − mean x²/v)`,
/// so the three conditions only need second moments.
pub fn typicality_test(xs: &[f64], ys: &[f64], tp: &TypicalityParams) -> Result<bool> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return domain("typicality test on an empty block");
    }
    let d = tp.density();
    let (mut sxx, mut syy, mut srr) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - d.slope * x;
        sxx += x * x;
        syy += y * y;
        srr += r * r;
    }
    let m = xs.len() as f64;
    let (ex, ey, er) = (sxx / m / d.var_x, syy / m / d.var_y(), srr / m / d.var_noise);
    let half = 0.5 * LOG2E;
    Ok((half * (1.0 - ex)).abs() < tp.eps
        && (half * (1.0 - ey)).abs() < tp.eps
        && (half * (2.0 - ex - er)).abs() < tp.eps)
}

/// Lazily generated Gaussian codebook plus preamble of one transmitter.
#[derive(Debug)]
pub struct GaussianCodebook {
    user: User,
    n: usize,
    gamma: f64,
    seed: u64,
    preamble: Vec<f64>,
    words: Vec<OnceLock<Vec<f64>>>,
}

fn gaussian_vec(len: usize, gamma: f64, seed: u64, tags: &[u64]) -> Vec<f64> {
    let mut rng = stream(seed, tags);
    let dist = Normal::new(0.0, gamma.sqrt()).expect("finite variance");
    (0..len).map(|_| dist.sample(&mut rng)).collect()
}

impl GaussianCodebook {
    pub fn new(user: User, m: usize, n: usize, nprime: usize, gamma: f64, seed: u64) -> Result<Self> {
        if m > MAX_CODEWORDS {
            return Err(Error::CodebookTooLarge(m));
        }
        if m == 0 || n == 0 || nprime == 0 {
            return domain("codebook needs M, n and n' at least 1");
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return domain(format!("symbol power {gamma} must be positive"));
        }
        let u = user.index() as u64;
        Ok(Self {
            user,
            n,
            gamma,
            seed,
            preamble: gaussian_vec(nprime, gamma, seed, &[tag::PREAMBLE, u]),
            words: (0..m).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn user(&self) -> User {
        self.user
    }
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn nprime(&self) -> usize {
        self.preamble.len()
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn burst_len(&self) -> usize {
        self.nprime() + self.n
    }
    pub fn preamble(&self) -> &[f64] {
        &self.preamble
    }

    pub fn codeword(&self, j: usize) -> &[f64] {
        self.words[j].get_or_init(|| {
            gaussian_vec(self.n, self.gamma, self.seed, &[tag::CODEBOOK, self.user.index() as u64, j as u64])
        })
    }

    /// Bits per codeword symbol actually carried, `log2(M) / n`.
    pub fn effective_rate(&self) -> f64 {
        (self.len() as f64).log2() / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BurstSpec {
    pub start: usize,
    pub message: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BurstTruth {
    pub user: User,
    pub start: usize,
    pub message: usize,
}

/// Samples seen by one receiver, with the bursts that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RxTrace {
    pub rx: User,
    pub samples: Vec<f64>,
    pub truth: Vec<BurstTruth>,
}

/// Runs both transmitters through the channel
/// `y_i = x_i + √a_i' · x_i' + z_i`. `gains[i]` is the gain of Tx `i` at
/// the other receiver.
pub fn channel_run(
    schedules: [&[BurstSpec]; 2],
    codebooks: [&GaussianCodebook; 2],
    gains: [f64; 2],
    seed: u64,
    horizon: usize,
) -> Result<[RxTrace; 2]> {
    let mut x = [vec![0.0; horizon], vec![0.0; horizon]];
    let mut truth = Vec::new();
    for u in User::BOTH {
        let i = u.index();
        let cb = codebooks[i];
        let mut prev_end = 0;
        for (j, b) in schedules[i].iter().enumerate() {
            assert!(j == 0 || b.start >= prev_end, "bursts of {u:?} overlap at slot {}", b.start);
            let end = b.start + cb.burst_len();
            if end > horizon {
                return Err(Error::HorizonTooShort(format!("burst of {u:?} ends at {end} > {horizon}")));
            }
            if b.message >= cb.len() {
                return Err(Error::IndexOutOfRange(format!("message {} of {} codewords", b.message, cb.len())));
            }
            let np = cb.nprime();
            x[i][b.start..b.start + np].copy_from_slice(cb.preamble());
            x[i][b.start + np..end].copy_from_slice(cb.codeword(b.message));
            prev_end = end;
            truth.push(BurstTruth { user: u, start: b.start, message: b.message });
        }
    }
    truth.sort_by_key(|b| b.start);
    Ok(User::BOTH.map(|rx| {
        let (i, o) = (rx.index(), rx.other().index());
        let g = gains[o].sqrt();
        let mut rng = stream(seed, &[tag::NOISE, i as u64]);
        let samples = (0..horizon)
            .map(|t| {
                let z: f64 = StandardNormal.sample(&mut rng);
                x[i][t] + g * x[o][t] + z
            })
            .collect();
        RxTrace { rx, samples, truth: truth.clone() }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Detection {
    pub slot: usize,
    pub user: User,
}

/// What a receiver knows in advance: both preambles, both burst lengths and
/// the typicality parameters (the `pdf` field is set per test).
#[derive(Debug, Clone, Copy)]
pub struct Detector<'a> {
    pub rx: User,
    pub preambles: [&'a [f64]; 2],
    pub burst_len: [usize; 2],
    pub tp: TypicalityParams,
}

impl<'a> Detector<'a> {
    pub fn from_codebooks(rx: User, cb: [&'a GaussianCodebook; 2], eps: f64, gain_other: f64) -> Self {
        let (i, o) = (rx.index(), rx.other().index());
        Self {
            rx,
            preambles: [cb[0].preamble(), cb[1].preamble()],
            burst_len: [cb[0].burst_len(), cb[1].burst_len()],
            tp: TypicalityParams {
                eps,
                pdf: PdfId::P1,
                gamma_own: cb[i].gamma(),
                gamma_other: cb[o].gamma(),
                gain_other,
            },
        }
    }

    fn pdf(&self, sender: User, interfered: bool) -> PdfId {
        match (sender == self.rx, interfered) {
            (true, false) => PdfId::P1,
            (true, true) => PdfId::P2,
            (false, false) => PdfId::P3,
            (false, true) => PdfId::P4,
        }
    }

    fn hit(&self, y: &[f64], t: usize, sender: User, interfered: bool) -> bool {
        let p = self.preambles[sender.index()];
        let tp = self.tp.with_pdf(self.pdf(sender, interfered));
        typicality_test(p, &y[t..t + p.len()], &tp).unwrap_or(false)
    }
}

/// Sequential scan for burst starts. With no burst known to be in progress
/// both preambles are tried against the clean densities, own sender first;
/// while one user's burst is in progress only the other user's preamble is
/// tried, against the interfered density; while both are in progress the
/// scan skips ahead.
pub fn estimate_arrivals(y: &[f64], det: &Detector) -> Vec<Detection> {
    let own = det.rx;
    let np = det.preambles[0].len().max(det.preambles[1].len());
    let mut busy = [0usize; 2];
    let mut out = Vec::new();
    let mut t = 0;
    while t + np <= y.len() {
        let active = [busy[0] > t, busy[1] > t];
        let found = match active {
            [true, true] => {
                t = busy[0].min(busy[1]);
                continue;
            }
            [false, false] => [own, own.other()].into_iter().find(|&u| det.hit(y, t, u, false)),
            _ => {
                let idle = if active[0] { User::Tx2 } else { User::Tx1 };
                det.hit(y, t, idle, true).then_some(idle)
            }
        };
        if let Some(u) = found {
            out.push(Detection { slot: t, user: u });
            busy[u.index()] = t + det.burst_len[u.index()];
        }
        t += 1;
    }
    out
}

/// Decoding test on one stretch of a codeword: trace slots `slots` carry
/// codeword symbols `offset..offset + slots.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub slots: Range<usize>,
    pub offset: usize,
    pub tp: TypicalityParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecodeOutcome {
    Message(usize),
    None,
    Ambiguous,
}

/// The unique codeword passing every segment test.
pub fn decode_codeword(y: &[f64], cb: &GaussianCodebook, segments: &[Segment]) -> Result<DecodeOutcome> {
    for s in segments {
        if s.slots.end > y.len() || s.offset + s.slots.len() > cb.n() || s.slots.is_empty() {
            return Err(Error::IndexOutOfRange(format!("segment {:?} at offset {}", s.slots, s.offset)));
        }
    }
    let mut found = None;
    for j in 0..cb.len() {
        let w = cb.codeword(j);
        let mut ok = true;
        for s in segments {
            if !typicality_test(&w[s.offset..s.offset + s.slots.len()], &y[s.slots.clone()], &s.tp)? {
                ok = false;
                break;
            }
        }
        if ok {
            if found.is_some() {
                return Ok(DecodeOutcome::Ambiguous);
            }
            found = Some(j);
        }
    }
    Ok(found.map_or(DecodeOutcome::None, DecodeOutcome::Message))
}

/// Splits the codeword on `start..start + n` into maximal runs that are
/// clear of, or hit by, the bursts `other` (half-open slot ranges).
pub fn segments_for(start: usize, n: usize, other: &[Range<usize>], tp: TypicalityParams) -> Vec<Segment> {
    let hit = |t: usize| other.iter().any(|r| r.contains(&t));
    let mut out: Vec<Segment> = Vec::new();
    for t in start..start + n {
        let pdf = if hit(t) { PdfId::P2 } else { PdfId::P1 };
        match out.last_mut() {
            Some(s) if s.tp.pdf == pdf => s.slots.end = t + 1,
            _ => out.push(Segment { slots: t..t + 1, offset: t - start, tp: tp.with_pdf(pdf) }),
        }
    }
    out
}

/// Parameters of a detection experiment. Codeword lengths are
/// `round(θ_i n)`; burst `j` (from 1) of user `i` starts at
/// `lead + round(n((j − 1)μ_i + ν_i))`, with a random lead per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub n: Vec<usize>,
    pub nprime: Option<usize>,
    pub theta: [f64; 2],
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    pub count: [u32; 2],
    pub codewords: [usize; 2],
    pub gamma: [f64; 2],
    pub gain: [f64; 2],
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionRow {
    pub n: usize,
    pub nprime: usize,
    pub rate1: f64,
    pub rate2: f64,
    pub trials: u64,
    /// Trials where some receiver missed a burst start or got its sender wrong.
    pub detect_errors: u64,
    /// Trials with any detection that is not a true burst start.
    pub spurious_trials: u64,
    /// Trials whose detections equal the true (slot, sender) set exactly.
    pub exact: u64,
    pub spurious: u64,
    pub detected: u64,
    /// Detections at a true start attributed to the wrong sender.
    pub misidentified: u64,
    pub codewords: u64,
    /// Own codewords not decoded to the sent message (AMBIGUOUS included).
    pub decode_errors: u64,
    /// Trials in which every codeword at both receivers was decoded.
    pub all_correct: u64,
}

impl DetectionRow {
    pub fn detect_error_rate(&self) -> f64 {
        self.detect_errors as f64 / self.trials as f64
    }
    pub fn exact_rate(&self) -> f64 {
        self.exact as f64 / self.trials as f64
    }
    pub fn spurious_rate(&self) -> f64 {
        self.spurious_trials as f64 / self.trials as f64
    }
    pub fn misid_rate(&self) -> f64 {
        if self.detected == 0 {
            0.0
        } else {
            self.misidentified as f64 / self.detected as f64
        }
    }
    pub fn decode_error_rate(&self) -> f64 {
        self.decode_errors as f64 / self.codewords as f64
    }
    pub fn all_correct_rate(&self) -> f64 {
        self.all_correct as f64 / self.trials as f64
    }
}

pub fn default_nprime(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialScore {
    recalled: bool,
    spurious: u64,
    detected: u64,
    misid: u64,
    codewords: u64,
    decode_errors: u64,
}

struct Setup {
    cb: [GaussianCodebook; 2],
    n: usize,
}

impl DetectionConfig {
    fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.trials == 0 {
            return domain("need at least one n and one trial");
        }
        if !(self.eps > 0.0) {
            return domain("eps must be positive");
        }
        if self.count.contains(&0) {
            return domain("each user sends at least one burst");
        }
        Ok(())
    }

    fn setup(&self, n: usize, trial: u64) -> Result<Setup> {
        let np = self.nprime.unwrap_or_else(|| default_nprime(n));
        let seed = self.seed ^ (trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ ((n as u64) << 40);
        let mk = |u: User| {
            let i = u.index();
            let ni = ((self.theta[i] * n as f64).round() as usize).max(1);
            GaussianCodebook::new(u, self.codewords[i], ni, np, self.gamma[i], seed)
        };
        Ok(Setup { cb: [mk(User::Tx1)?, mk(User::Tx2)?], n })
    }

    fn schedules(&self, s: &Setup, trial: u64) -> Result<([Vec<BurstSpec>; 2], usize)> {
        let mut rng = stream(self.seed, &[tag::OFFSETS, trial, s.n as u64]);
        let np = s.cb[0].nprime();
        let lead = 2 * np + rng.random_range(0..=np);
        let mut out = [Vec::new(), Vec::new()];
        let mut end = 0;
        for u in User::BOTH {
            let i = u.index();
            let mut msg = stream(self.seed, &[tag::MESSAGE, trial, s.n as u64, i as u64]);
            for j in 0..self.count[i] {
                let pos = s.n as f64 * (j as f64 * self.mu[i] + self.nu[i]);
                if pos < 0.0 {
                    return domain("burst positions must be nonnegative");
                }
                let start = lead + pos.round() as usize;
                end = end.max(start + s.cb[i].burst_len());
                out[i].push(BurstSpec { start, message: msg.random_range(0..s.cb[i].len()) });
            }
        }
        Ok((out, end + 2 * np))
    }

    fn trial(&self, n: usize, trial: u64) -> Result<TrialScore> {
        let s = self.setup(n, trial)?;
        let (sched, horizon) = self.schedules(&s, trial)?;
        let cb = [&s.cb[0], &s.cb[1]];
        let traces = channel_run([&sched[0], &sched[1]], cb, self.gain, self.seed ^ trial.rotate_left(17) ^ n as u64, horizon)?;
        let mut score = TrialScore { recalled: true, ..Default::default() };
        for tr in &traces {
            let rx = tr.rx;
            let det = Detector::from_codebooks(rx, cb, self.eps, self.gain[rx.other().index()]);
            let found = estimate_arrivals(&tr.samples, &det);
            for b in &tr.truth {
                score.recalled &= found.iter().any(|d| d.slot == b.start && d.user == b.user);
            }
            for d in &found {
                match tr.truth.iter().find(|b| b.start == d.slot) {
                    Some(b) => {
                        score.detected += 1;
                        score.misid += u64::from(b.user != d.user);
                    }
                    None => score.spurious += 1,
                }
            }
            let other: Vec<Range<usize>> = found
                .iter()
                .filter(|d| d.user != rx)
                .map(|d| d.slot..d.slot + det.burst_len[d.user.index()])
                .collect();
            let own_cb = cb[rx.index()];
            for b in tr.truth.iter().filter(|b| b.user == rx) {
                score.codewords += 1;
                let ok = found.iter().any(|d| d.user == rx && d.slot == b.start) && {
                    let segs = segments_for(b.start + own_cb.nprime(), own_cb.n(), &other, det.tp);
                    decode_codeword(&tr.samples, own_cb, &segs)? == DecodeOutcome::Message(b.message)
                };
                score.decode_errors += u64::from(!ok);
            }
        }
        Ok(score)
    }
}

/// Error frequencies of the full pipeline for every `n` in the config.
pub fn detection_experiment(cfg: &DetectionConfig) -> Result<Vec<DetectionRow>> {
    cfg.validate()?;
    cfg.n
        .iter()
        .map(|&n| {
            let scores = (0..cfg.trials).into_par_iter().map(|k| cfg.trial(n, k)).collect::<Result<Vec<_>>>()?;
            let s0 = cfg.setup(n, 0)?;
            let mut row = DetectionRow {
                n,
                nprime: s0.cb[0].nprime(),
                rate1: s0.cb[0].effective_rate(),
                rate2: s0.cb[1].effective_rate(),
                trials: cfg.trials,
                detect_errors: 0,
                spurious_trials: 0,
                exact: 0,
                spurious: 0,
                detected: 0,
                misidentified: 0,
                codewords: 0,
                decode_errors: 0,
                all_correct: 0,
            };
            for s in scores {
                row.detect_errors += u64::from(!s.recalled);
                row.spurious_trials += u64::from(s.spurious > 0);
                row.exact += u64::from(s.recalled && s.spurious == 0);
                row.spurious += s.spurious;
                row.detected += s.detected;
                row.misidentified += s.misid;
                row.codewords += s.codewords;
                row.decode_errors += s.decode_errors;
                row.all_correct += u64::from(s.decode_errors == 0);
            }
            Ok(row)
        })
        .collect()
}

/// One codeword decoded with known timing; the other user transmits
/// Gaussian symbols over the first `overlap` fraction of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodeConfig {
    pub n: usize,
    pub codewords: usize,
    pub gamma_own: f64,
    pub gamma_other: f64,
    pub gain_other: f64,
    pub overlap: f64,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
}

/// `(correct decodes, effective rate)` of the segment-wise decoder.
pub fn decode_experiment(cfg: &DecodeConfig) -> Result<(u64, f64)> {
    if !(0.0..=1.0).contains(&cfg.overlap) {
        return domain("overlap fraction must lie in [0, 1]");
    }
    let hit = (cfg.overlap * cfg.n as f64).round() as usize;
    let tp = TypicalityParams {
        eps: cfg.eps,
        pdf: PdfId::P1,
        gamma_own: cfg.gamma_own,
        gamma_other: cfg.gamma_other,
        gain_other: cfg.gain_other,
    };
    let segs = segments_for(0, cfg.n, &[0..hit], tp);
    let rate = GaussianCodebook::new(User::Tx1, cfg.codewords, cfg.n, 1, cfg.gamma_own, 0)?.effective_rate();
    let ok = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let cb = GaussianCodebook::new(User::Tx1, cfg.codewords, cfg.n, 1, cfg.gamma_own, seed)?;
            let msg = stream(seed, &[tag::MESSAGE]).random_range(0..cfg.codewords);
            let intf = gaussian_vec(hit, cfg.gamma_other, seed, &[tag::SYMBOLS, 1]);
            let g = cfg.gain_other.sqrt();
            let mut rng = stream(seed, &[tag::NOISE, 0]);
            let y: Vec<f64> = cb
                .codeword(msg)
                .iter()
                .enumerate()
                .map(|(t, &x)| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    x + z + if t < hit { g * intf[t] } else { 0.0 }
                })
                .collect();
            Ok(u64::from(decode_codeword(&y, &cb, &segs)? == DecodeOutcome::Message(msg)))
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok((ok, rate))
}

/// Fraction of pure-noise traces of length `len` on which the scan reports
/// any burst.
pub fn false_alarm_frequency(det_tp: TypicalityParams, nprime: usize, len: usize, trials: u64, seed: u64) -> f64 {
    let p = [
        gaussian_vec(nprime, det_tp.gamma_own, seed, &[tag::PREAMBLE, 0]),
        gaussian_vec(nprime, det_tp.gamma_other, seed, &[tag::PREAMBLE, 1]),
    ];
    let det = Detector { rx: User::Tx1, preambles: [&p[0], &p[1]], burst_len: [nprime; 2], tp: det_tp };
    let alarms: u64 = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, &[tag::NOISE, k]);
            let y: Vec<f64> = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
            u64::from(!estimate_arrivals(&y, &det).is_empty())
        })
        .sum();
    alarms as f64 / trials as f64
}
