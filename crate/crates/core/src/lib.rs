//! Two-user Gaussian interference channel with bursty Bernoulli traffic.
//!
//! Each transmitter buffers randomly arriving bits and sends a burst (a
//! preamble followed by a codeword) as soon as enough bits are queued.
//! Receivers do not know when bursts start. The crate covers:
//!
//! * [`model`]: parameters, capacity and closed-form design maps;
//! * [`arrival`]: slot-level simulation of arrivals and burst scheduling;
//! * [`geometry`]: large-n burst positions, overlap triples, channel states;
//! * [`reliability`]: per-codeword sufficient decoding conditions;
//! * [`design`]: admissible activation offsets, outage and the choice of
//!   the number of codewords;
//! * [`region`]: achievable codebook-rate regions;
//! * [`detection`]: finite-length typicality detection and decoding.

pub mod affine;
pub mod arrival;
pub mod constraints;
pub mod design;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod model;
pub mod numeric;
pub mod region;
pub mod reliability;
pub mod rng;

pub use error::{Error, Result};
