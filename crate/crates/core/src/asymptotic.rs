//! High-`Ω₂` asymptotics: first-order SOP expansions, the FPA error floors,
//! and secrecy diversity orders.
//!
//! The user links scale together as `Ω₁ = ε₁Ω₂`, `Ω_R = ε₂Ω₂`. Each user CDF
//! is replaced by its leading term `φ x^τ`, which leaves the same `g`/`h`
//! kernels as the exact engine but with polynomial rather than exponential
//! weights.

use crate::analytic::{
    g_kernel, h_kernel, jamming_snr, odrs_constants, osrs_constants, tmrc_constants, GArgs, HArgs,
};
use crate::channel::{GammaLaw, JammedRatioLaw, NakagamiParams};
use crate::quadrature::QuadratureSpec;
use crate::scenario::{PowerPolicy, SchemeConstants, SchemeKind, SystemParams};
use crate::special::{binomial, ln_factorial, lower_incomplete_gamma};
use crate::{clamp_probability, Provenance, SopError, SopResult};

/// `Ω₁ = ε₁Ω₂`, `Ω_R = ε₂Ω₂` at a given `Ω₂` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticScaling {
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub omega2: f64,
}

impl AsymptoticScaling {
    pub fn new(epsilon1: f64, epsilon2: f64, omega2: f64) -> Result<Self, SopError> {
        if !(epsilon1 > 1.0 && epsilon1.is_finite()) {
            return Err(SopError::invalid(
                "eps1",
                format!("epsilon1 must exceed 1, got {epsilon1}"),
            ));
        }
        if !(epsilon2 > 0.0 && epsilon2.is_finite()) {
            return Err(SopError::invalid(
                "eps2",
                format!("epsilon2 must be positive, got {epsilon2}"),
            ));
        }
        if !(omega2 > 0.0 && omega2.is_finite()) {
            return Err(SopError::invalid(
                "omega2",
                format!("must be positive, got {omega2}"),
            ));
        }
        Ok(Self {
            epsilon1,
            epsilon2,
            omega2,
        })
    }

    pub fn with_omega2(&self, omega2: f64) -> Result<Self, SopError> {
        Self::new(self.epsilon1, self.epsilon2, omega2)
    }

    /// Copy of `params` with the three scaled link means replaced.
    pub fn apply(&self, params: &SystemParams) -> Result<SystemParams, SopError> {
        let mut out = *params;
        let links = &mut out.links;
        links.relay_user2 = NakagamiParams::new(links.relay_user2.m(), self.omega2)?;
        links.relay_user1 =
            NakagamiParams::new(links.relay_user1.m(), self.epsilon1 * self.omega2)?;
        links.source_relay =
            NakagamiParams::new(links.source_relay.m(), self.epsilon2 * self.omega2)?;
        Ok(out)
    }
}

/// Which legitimate user a link leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserLink {
    User1,
    User2,
}

/// Leading-order coefficient `λ^τ/τ!` of a Gamma(τ, λ) CDF near zero.
fn leading_coefficient(rate: f64, tau: u32) -> f64 {
    (tau as f64 * rate.ln() - ln_factorial(tau)).exp()
}

/// `φ_v x^{τ_U}` with `τ_U = n·m_U`: the small-argument CDF of an MRC sum of
/// `n` user links.
pub fn asym_gain_cdf(scaling: &AsymptoticScaling, user: UserLink, m_u: u32, n: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let omega = match user {
        UserLink::User1 => scaling.epsilon1 * scaling.omega2,
        UserLink::User2 => scaling.omega2,
    };
    let tau = n * m_u;
    leading_coefficient(m_u as f64 / omega, tau) * x.powi(tau as i32)
}

/// Largest argument at which the first-order CDF `φ x^τ` is still at most 1.
fn saturation_point(phi: f64, tau: u32) -> f64 {
    phi.powf(-1.0 / tau as f64)
}

/// `1 - ∫₀^{a*} (1 - φ₁(b+θ₁x)^τ)(1 - φ₂δ₂(x)^τ) f_E(x) dx`, the first-order
/// complement of the joint secrecy-connection probability.
///
/// `a*` trims `[0, a]` to where both first-order survival terms are
/// nonnegative; `δ₂` has a pole at `a`, so the untrimmed integral diverges.
fn asym_outage(
    k: &SchemeConstants,
    phi1: f64,
    phi2: f64,
    tau_u: u32,
    eaves: GammaLaw,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if !k.feasible() {
        return Ok(1.0);
    }
    let x1 = (saturation_point(phi1, tau_u) - k.b) / k.theta1;
    let x2 = (k.d - k.alpha2 / (saturation_point(phi2, tau_u) - k.c)) / k.e;
    let upper = k.a.min(x1).min(x2);
    if !(upper > 0.0) {
        return Ok(1.0);
    }
    let le = eaves.rate;
    let tau_e = eaves.shape;
    let beta = eaves.beta();
    let mut out = eaves.sf(upper);

    let mut poly = 0.0;
    for j in 0..=tau_u {
        let shape = j + tau_e;
        poly += binomial(tau_u, j)
            * k.theta1.powi(j as i32)
            * k.b.powi((tau_u - j) as i32)
            * lower_incomplete_gamma(shape, le * upper)
            / le.powi(shape as i32);
    }
    out += phi1 * beta * poly;

    let base = GArgs {
        a: upper,
        b: tau_e as f64,
        c: 0.0,
        r: k.alpha2 / (k.c * k.d),
        q: k.e / k.d,
        f: le,
        h: 0.0,
        k: 0,
        j: tau_u as i32,
    };
    let t = tau_u as i32;
    let g2 = g_kernel(&base, quad)?;
    out += phi2 * beta * k.c.powi(t) * g2;
    let g12 = g_kernel(
        &GArgs {
            c: k.theta1 / k.b,
            k: t,
            ..base
        },
        quad,
    )?;
    out -= phi1 * phi2 * beta * k.b.powi(t) * k.c.powi(t) * g12;
    Ok(clamp_probability(out))
}

fn user_phis(params: &SystemParams, tau: u32) -> (f64, f64) {
    (
        leading_coefficient(params.lambda1(), tau),
        leading_coefficient(params.lambda2(), tau),
    )
}

/// Asymptotic TMRC SOP given `n` decoding relays.
pub fn sop_tmrc_asym_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Err(SopError::invalid(
            "n",
            "conditional SOP needs at least one decoding relay",
        ));
    }
    let scaled = scaling.apply(params)?;
    let k = tmrc_constants(&scaled, policy, n);
    let tau_u = n * scaled.links.m_user();
    let (phi1, phi2) = user_phis(&scaled, tau_u);
    let eaves = scaled.links.relay_eaves.sum_of(n);
    asym_outage(&k, phi1, phi2, tau_u, eaves, quad)
}

/// First-order per-relay secrecy-connection probability `Δ₁^∞`.
pub fn delta1_asym(
    params: &SystemParams,
    policy: &PowerPolicy,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    let scaled = scaling.apply(params)?;
    let k = osrs_constants(&scaled, policy);
    let m_u = scaled.links.m_user();
    let (phi3, phi4) = user_phis(&scaled, m_u);
    let outage = asym_outage(&k, phi3, phi4, m_u, scaled.links.relay_eaves.law(), quad)?;
    Ok(clamp_probability(1.0 - outage))
}

pub fn sop_osrs_asym_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    let d1 = delta1_asym(params, policy, scaling, quad)?;
    Ok(clamp_probability((1.0 - d1).powi(n as i32)))
}

/// First-order ODRS per-relay secrecy-connection probability `Δ₄^∞`.
pub fn delta4_asym(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n as usize >= params.relays {
        return Err(SopError::NoJammer {
            relays: params.relays,
        });
    }
    let scaled = scaling.apply(params)?;
    let k = odrs_constants(&scaled, policy);
    if !k.feasible() {
        return Ok(0.0);
    }
    let rho4 = jamming_snr(&scaled, policy);
    let law = JammedRatioLaw::new(scaled.links.relay_eaves, scaled.relays as u32 - n, rho4)?;
    let m_u = scaled.links.m_user();
    let (phi3, phi4) = user_phis(&scaled, m_u);
    let le = scaled.lambda_e();
    let y1 = (saturation_point(phi3, m_u) - k.ell) / k.theta1;
    let y2 = (1.0 - k.w * k.u / (saturation_point(phi4, m_u) - k.w)) / k.v;
    let upper = (1.0 / k.v).min(y1).min(y2);
    if !(upper > 0.0) {
        return Ok(0.0);
    }
    let mut sums = [0.0f64; 3];
    for t in law.terms() {
        for (slot, (b, c)) in [(m_u as i32, 0), (0, m_u as i32), (m_u as i32, m_u as i32)]
            .into_iter()
            .enumerate()
        {
            let h = h_kernel(
                &HArgs {
                    a: upper,
                    b,
                    c,
                    f: le,
                    r: 0.0,
                    u: k.u,
                    v: k.v,
                    ell: k.ell,
                    theta1: k.theta1,
                    k: t.k,
                    varsigma: t.varsigma,
                    cc: t.c as f64,
                    dd: t.d,
                    rho4,
                    lambda_e: le,
                },
                quad,
            )?;
            sums[slot] += t.delta * h;
        }
    }
    let wm = k.w.powi(m_u as i32);
    let outage = law.sf(upper)
        + law.phi0() * (phi3 * sums[0] + phi4 * wm * sums[1] - phi3 * phi4 * wm * sums[2]);
    Ok(clamp_probability(1.0 - outage))
}

pub fn sop_odrs_asym_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    if n as usize == params.relays {
        return sop_osrs_asym_cond(params, policy, n, scaling, quad);
    }
    let d4 = delta4_asym(params, policy, n, scaling, quad)?;
    Ok(clamp_probability((1.0 - d4).powi(n as i32)))
}

pub fn sop_asym_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    n: u32,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    match scheme {
        SchemeKind::Tmrc => sop_tmrc_asym_cond(params, policy, n, scaling, quad),
        SchemeKind::Osrs | SchemeKind::Tsrs => sop_osrs_asym_cond(params, policy, n, scaling, quad),
        SchemeKind::Odrs => sop_odrs_asym_cond(params, policy, n, scaling, quad),
    }
}

/// `Σ_n C(K,n) φ_R^{K-n} η^{m_R(K-n)} P_{Φ_n}^∞`.
pub fn sop_asym_total(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    scaling: &AsymptoticScaling,
    quad: &QuadratureSpec,
) -> Result<SopResult, SopError> {
    params.validate()?;
    policy.validate()?;
    let scaled = scaling.apply(params)?;
    let relays = scaled.relays as u32;
    let m_r = scaled.links.source_relay.m();
    // φ_R η^{m_R}: leading term of one relay's decoding failure probability.
    let miss =
        leading_coefficient(scaled.links.source_relay.rate(), m_r) * scaled.eta().powi(m_r as i32);
    let mut total = 0.0;
    for n in 0..=relays {
        let weight = binomial(relays, n) * miss.powi((relays - n) as i32);
        if weight == 0.0 {
            continue;
        }
        total += weight * sop_asym_cond(params, policy, scheme, n, scaling, quad)?;
    }
    Ok(SopResult {
        value: clamp_probability(total),
        provenance: Provenance::Asymptotic,
    })
}

/// `Ω₂ → ∞` limit of the conditional SOP when every user-link term vanishes.
pub fn sop_floor_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    n: u32,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    let eaves = params.links.relay_eaves;
    let value = match scheme {
        SchemeKind::Tmrc => {
            let k = tmrc_constants(params, policy, n);
            if k.feasible() {
                eaves.sum_of(n).sf(k.a)
            } else {
                1.0
            }
        }
        SchemeKind::Odrs if (n as usize) < params.relays => {
            let k = odrs_constants(params, policy);
            if k.feasible() {
                let law = JammedRatioLaw::new(
                    eaves,
                    params.relays as u32 - n,
                    jamming_snr(params, policy),
                )?;
                law.sf(1.0 / k.v).powi(n as i32)
            } else {
                1.0
            }
        }
        _ => {
            let k = osrs_constants(params, policy);
            if k.feasible() {
                eaves.sf(k.a).powi(n as i32)
            } else {
                1.0
            }
        }
    };
    Ok(clamp_probability(value))
}

/// Floor of the total SOP: as `Ω_R → ∞` every relay decodes, so only the
/// `n = K` conditional survives.
pub fn sop_floor_total(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
) -> Result<f64, SopError> {
    params.validate()?;
    policy.validate()?;
    sop_floor_cond(params, policy, scheme, params.relays as u32)
}

/// Inputs of the closed-form secrecy diversity orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdoInputs {
    pub relays: u32,
    pub m_r: u32,
    pub m_u: u32,
    pub varpi: f64,
}

impl SdoInputs {
    pub fn validate(&self) -> Result<(), SopError> {
        if self.relays == 0 || self.m_r == 0 || self.m_u == 0 {
            return Err(SopError::invalid(
                "SdoInputs",
                "K, mR and mU must be at least 1",
            ));
        }
        if !(self.varpi > 0.0 && self.varpi < 1.0) {
            return Err(SopError::invalid(
                "varpi",
                format!("varpi must be in (0,1), got {}", self.varpi),
            ));
        }
        Ok(())
    }
}

/// Secrecy diversity order. Fixed allocation always saturates at a floor, so
/// only the dynamic rule has a nonzero order.
pub fn sdo(scheme: SchemeKind, inputs: &SdoInputs, dynamic: bool) -> f64 {
    if !dynamic {
        return 0.0;
    }
    let k = inputs.relays as f64;
    let m_r = inputs.m_r as f64;
    let user = inputs.m_u as f64 * (1.0 - inputs.varpi);
    match scheme {
        SchemeKind::Tmrc | SchemeKind::Osrs | SchemeKind::Tsrs => k * user.min(m_r),
        SchemeKind::Odrs => (k * m_r)
            .min((k - 1.0) * (user - inputs.varpi) + m_r)
            .min(k * user),
    }
}
