//! Scenario description shared by all three engines.

use std::fmt;
use std::str::FromStr;

use crate::channel::LinkSet;
use crate::SopError;

/// Relay strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// Every decoding relay transmits with an equal share of `P_R`; receivers combine.
    Tmrc,
    /// Single relay maximizing the joint secrecy margin of both users.
    Osrs,
    /// Filter relays on user 1's secrecy, then maximize user 2's secrecy capacity.
    Tsrs,
    /// One data relay from the decoding set plus one jammer from the rest.
    Odrs,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Tmrc,
        SchemeKind::Osrs,
        SchemeKind::Tsrs,
        SchemeKind::Odrs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Tmrc => "TMRC",
            SchemeKind::Osrs => "OSRS",
            SchemeKind::Tsrs => "TSRS",
            SchemeKind::Odrs => "ODRS",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = SopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "TMRC" => Ok(SchemeKind::Tmrc),
            "OSRS" => Ok(SchemeKind::Osrs),
            "TSRS" => Ok(SchemeKind::Tsrs),
            "ODRS" => Ok(SchemeKind::Odrs),
            other => Err(SopError::invalid(
                "scheme",
                format!("unknown scheme `{other}`"),
            )),
        }
    }
}

/// Full scenario: relay count, links, powers, noise and rate thresholds.
///
/// Powers and noise are linear; rates are in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub relays: usize,
    pub links: LinkSet,
    pub p_source: f64,
    pub p_relay: f64,
    pub sigma2: f64,
    pub r1_th: f64,
    pub r2_th: f64,
    pub r1_s: f64,
    pub r2_s: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), SopError> {
        if self.relays == 0 {
            return Err(SopError::invalid("K", "at least one relay is required"));
        }
        for (name, v) in [
            ("P_S", self.p_source),
            ("P_R", self.p_relay),
            ("sigma2", self.sigma2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SopError::invalid(
                    name,
                    format!("must be positive, got {v}"),
                ));
            }
        }
        for (name, v) in [("R1_th", self.r1_th), ("R2_th", self.r2_th)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(SopError::invalid(
                    name,
                    format!("must be nonnegative, got {v}"),
                ));
            }
        }
        for (name, v) in [("R1_s", self.r1_s), ("R2_s", self.r2_s)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SopError::invalid(
                    name,
                    format!("must be positive, got {v}"),
                ));
            }
        }
        self.links.validate()
    }

    /// `ρ_S = P_S / σ²`.
    pub fn rho_source(&self) -> f64 {
        self.p_source / self.sigma2
    }

    /// `ρ₂ = P_R / σ²`, the full relay SNR.
    pub fn rho_relay(&self) -> f64 {
        self.p_relay / self.sigma2
    }

    pub fn theta1(&self) -> f64 {
        (2.0 * self.r1_s).exp()
    }

    pub fn theta2(&self) -> f64 {
        (2.0 * self.r2_s).exp()
    }

    /// Source-link gain a relay needs to decode both messages.
    pub fn eta(&self) -> f64 {
        (2.0 * (self.r1_th + self.r2_th)).exp_m1() / self.rho_source()
    }

    pub fn lambda1(&self) -> f64 {
        self.links.relay_user1.rate()
    }

    pub fn lambda2(&self) -> f64 {
        self.links.relay_user2.rate()
    }

    pub fn lambda_e(&self) -> f64 {
        self.links.relay_eaves.rate()
    }
}

/// Power split between the two users at the transmitting relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Allocation {
    Fixed {
        alpha1: f64,
    },
    /// `α₁ = 1/(1 + μλ₂^{-ϖ})`, driven by the user-2 link rate `λ₂`.
    Dynamic {
        mu: f64,
        varpi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPolicy {
    pub allocation: Allocation,
    /// Fraction of `P_R` spent on jamming (ODRS only).
    pub alpha_j: f64,
}

impl PowerPolicy {
    pub fn fixed(alpha1: f64, alpha_j: f64) -> Self {
        Self {
            allocation: Allocation::Fixed { alpha1 },
            alpha_j,
        }
    }

    pub fn dynamic(mu: f64, varpi: f64, alpha_j: f64) -> Self {
        Self {
            allocation: Allocation::Dynamic { mu, varpi },
            alpha_j,
        }
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(self.allocation, Allocation::Dynamic { .. })
    }

    pub fn validate(&self) -> Result<(), SopError> {
        match self.allocation {
            Allocation::Fixed { alpha1 } => {
                if !(alpha1 > 0.0 && alpha1 < 1.0) {
                    return Err(SopError::invalid(
                        "alpha1",
                        format!("alpha1 must be in (0,1), got {alpha1}"),
                    ));
                }
            }
            Allocation::Dynamic { mu, varpi } => {
                if !(mu > 1.0 && mu.is_finite()) {
                    return Err(SopError::invalid(
                        "mu",
                        format!("mu must exceed 1, got {mu}"),
                    ));
                }
                if !(varpi > 0.0 && varpi < 1.0) {
                    return Err(SopError::invalid(
                        "varpi",
                        format!("varpi must be in (0,1), got {varpi}"),
                    ));
                }
            }
        }
        if !(self.alpha_j >= 0.0 && self.alpha_j < 1.0) {
            return Err(SopError::invalid("alphaJ", "alphaJ must be in [0,1)"));
        }
        Ok(())
    }

    /// `(α₁, α₂)` for the given user-2 link rate `λ₂ = m_U/Ω₂`.
    pub fn coefficients(&self, lambda2: f64) -> (f64, f64) {
        match self.allocation {
            Allocation::Fixed { alpha1 } => (alpha1, 1.0 - alpha1),
            Allocation::Dynamic { mu, varpi } => dpa_coefficients(mu, varpi, lambda2),
        }
    }
}

/// Dynamic power allocation: `α₂/α₁ = μλ₂^{-ϖ}`.
pub fn dpa_coefficients(mu: f64, varpi: f64, lambda2: f64) -> (f64, f64) {
    let ratio = mu * lambda2.powf(-varpi);
    let alpha1 = 1.0 / (1.0 + ratio);
    (alpha1, 1.0 - alpha1)
}

/// Threshold constants mapping the eavesdropper gain `x` to the minimum user
/// gains that keep both users secure, for a transmit SNR `ρ`.
///
/// * user 1 secure iff `G₁ > b + θ₁x`
/// * user 2 secure iff `x < a` and `G₂ > c + α₂/(d - e x)`
///
/// `ell, w, u, v` are the same thresholds in the parameterization used for the
/// jammed eavesdropper: `G₁ > ℓ + θ₁y`, `G₂ > w + wu/(1 - vy)`, `y < 1/v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub ell: f64,
    pub w: f64,
    pub u: f64,
    pub v: f64,
}

impl SchemeConstants {
    pub fn new(alpha1: f64, alpha2: f64, theta1: f64, theta2: f64, rho: f64) -> Self {
        let slack = 1.0 - theta2 * alpha1;
        Self {
            alpha1,
            alpha2,
            theta1,
            theta2,
            rho,
            a: slack / (rho * alpha1 * alpha2 * theta2),
            b: (theta1 - 1.0) / (alpha1 * rho),
            c: -1.0 / (alpha1 * rho),
            d: alpha1 * rho * slack,
            e: rho * rho * alpha1 * alpha1 * alpha2 * theta2,
            ell: (theta1 - 1.0) / (alpha1 * rho),
            w: -1.0 / (alpha1 * rho),
            u: alpha2 / (alpha1 * theta2 - 1.0),
            v: alpha1 * alpha2 * theta2 * rho / slack,
        }
    }

    /// `α₁θ₂ < 1`: otherwise user 2 is in secrecy outage whatever the channels.
    pub fn feasible(&self) -> bool {
        self.theta2 * self.alpha1 < 1.0
    }

    /// User-1 threshold `b + θ₁x`.
    pub fn user1_threshold(&self, x: f64) -> f64 {
        self.b + self.theta1 * x
    }

    /// User-2 threshold `c + α₂/(d - e x)`; only meaningful for `x < a`.
    pub fn user2_threshold(&self, x: f64) -> f64 {
        self.c + self.alpha2 / (self.d - self.e * x)
    }
}
