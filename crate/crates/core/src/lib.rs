//! Secrecy outage probability (SOP) of a two-user cooperative NOMA downlink
//! with `K` decode-and-forward relays and a single eavesdropper over
//! integer-shape Nakagami-m fading.
//!
//! Three engines evaluate the same scenario:
//!
//! * [`analytic`]: closed-form SOP for the TMRC, OSRS, TSRS and ODRS relay
//!   strategies, with the residual one-dimensional integrals evaluated by a
//!   Gauss–Legendre rule ([`quadrature`]).
//! * [`asymptotic`]: first-order high-`Ω₂` expansions under fixed and dynamic
//!   power allocation, plus the secrecy diversity orders.
//! * [`montecarlo`]: a trial-level simulator of the full protocol, used to
//!   cross-check the other two.
//!
//! All rates are in nats per channel use and every capacity carries the `1/2`
//! two-slot pre-log, so secrecy thresholds map to `θ = e^{2R}`.

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod asymptotic;
pub mod channel;
pub mod montecarlo;
pub mod quadrature;
pub mod scenario;
pub mod special;

use std::fmt;

pub use analytic::{sop_total, Feasibility};
pub use channel::{LinkSet, NakagamiParams};
pub use quadrature::QuadratureSpec;
pub use scenario::{Allocation, PowerPolicy, SchemeConstants, SchemeKind, SystemParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SopError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("integrand pole inside the integration domain (pole at {pole}, upper limit {upper})")]
    PoleInDomain { pole: f64, upper: f64 },
    #[error("ODRS needs a non-decoding relay to jam, but all {relays} relays decoded")]
    NoJammer { relays: usize },
}

impl SopError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SopError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Which engine produced a [`SopResult`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Analytic,
    Asymptotic,
    MonteCarlo { stderr: f64, trials: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Analytic => f.write_str("analytic"),
            Provenance::Asymptotic => f.write_str("asymptotic"),
            Provenance::MonteCarlo { .. } => f.write_str("montecarlo"),
        }
    }
}

/// An SOP value tagged with the engine that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopResult {
    pub value: f64,
    pub provenance: Provenance,
}

impl SopResult {
    pub fn stderr(&self) -> Option<f64> {
        match self.provenance {
            Provenance::MonteCarlo { stderr, .. } => Some(stderr),
            _ => None,
        }
    }
}

/// `10^{dB/10}`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub(crate) fn clamp_probability(p: f64) -> f64 {
    if p.is_nan() {
        p
    } else {
        p.clamp(0.0, 1.0)
    }
}
