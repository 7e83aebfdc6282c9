//! Closed-form secrecy outage probability for the four relay strategies.
//!
//! Every conditional SOP reduces to one-dimensional integrals over the
//! eavesdropper gain (or the jammed eavesdropper ratio). Those are written in
//! terms of two kernels, [`g_kernel`] and [`h_kernel`], each evaluated with a
//! Gauss–Legendre rule on the finite secrecy-feasible interval.

use crate::channel::{GammaLaw, JammedRatioLaw};
use crate::quadrature::QuadratureSpec;
use crate::scenario::{PowerPolicy, SchemeConstants, SchemeKind, SystemParams};
use crate::special::{binomial, factorial};
use crate::{clamp_probability, Provenance, SopError, SopResult};

/// Relative slack allowed when an integrand pole sits exactly on the upper limit.
const POLE_TOLERANCE: f64 = 1e-9;

/// Decay exponent beyond which the `e^{-fx}` tail is dropped.
const TAIL_EXPONENT: f64 = 60.0;

/// Shrink `[0, a]` to where `x^p e^{-fx}` still carries mass, so the fixed
/// node set resolves integrands concentrated near the origin.
fn effective_upper(a: f64, f: f64, power: f64) -> f64 {
    if f > 0.0 {
        a.min((power.max(0.0) + TAIL_EXPONENT) / f)
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Ok,
    Infeasible { reason: String },
}

impl Feasibility {
    pub fn is_ok(&self) -> bool {
        matches!(self, Feasibility::Ok)
    }
}

/// User 2 can only be secure when `α₁ < e^{-2R₂ˢ}`.
pub fn feasibility_check(params: &SystemParams, policy: &PowerPolicy) -> Feasibility {
    let (alpha1, _) = policy.coefficients(params.lambda2());
    let limit = (-2.0 * params.r2_s).exp();
    if alpha1 < limit {
        Feasibility::Ok
    } else {
        Feasibility::Infeasible {
            reason: format!(
                "alpha1 = {alpha1} is not below e^(-2 R2_s) = {limit}; user 2 is always in secrecy outage"
            ),
        }
    }
}

/// Probability `χ` that one relay decodes the source superposition.
pub fn decode_prob_chi(params: &SystemParams) -> f64 {
    params.links.source_relay.sf(params.eta())
}

/// Binomial PMF of the decoding-set size, entries `n = 0..=K`.
pub fn decoding_set_pmf(params: &SystemParams) -> Vec<f64> {
    let chi = decode_prob_chi(params);
    let miss = params.links.source_relay.cdf(params.eta());
    let k = params.relays as u32;
    (0..=k)
        .map(|n| binomial(k, n) * chi.powi(n as i32) * miss.powi((k - n) as i32))
        .collect()
}

/// Arguments of
/// `g = ∫₀^a x^{b-1} e^{-fx - h/(1-qx)} (1+cx)^k (1 + r/(1-qx))^j dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GArgs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: f64,
    pub q: f64,
    pub f: f64,
    pub h: f64,
    pub k: i32,
    pub j: i32,
}

pub fn g_kernel(args: &GArgs, quad: &QuadratureSpec) -> Result<f64, SopError> {
    let GArgs {
        a,
        b,
        c,
        r,
        q,
        f,
        h,
        k,
        j,
    } = *args;
    if !(a > 0.0 && a.is_finite()) {
        return Err(SopError::invalid(
            "a",
            format!("upper limit must be positive, got {a}"),
        ));
    }
    if q * a > 1.0 + POLE_TOLERANCE {
        return Err(SopError::PoleInDomain {
            pole: 1.0 / q,
            upper: a,
        });
    }
    let a = effective_upper(a, f, b - 1.0 + k.abs() as f64 + j.abs() as f64);
    let half = 0.5 * a;
    let mut sum = 0.0;
    for (&t, &w) in quad.nodes().iter().zip(quad.weights()) {
        let s = t + 1.0;
        let gap = 2.0 - a * q * s;
        let decay = (-half * f * s - 2.0 * h / gap).exp();
        if decay == 0.0 {
            continue;
        }
        let mut term = w * decay;
        if b != 1.0 {
            term *= s.powf(b - 1.0);
        }
        if k != 0 {
            term *= (1.0 + half * c * s).powi(k);
        }
        if j != 0 {
            term *= (1.0 + 2.0 * r / gap).powi(j);
        }
        sum += term;
    }
    Ok(half.powf(b) * sum)
}

/// Arguments of
/// `h = ∫₀^a (ℓ+θ₁y)^b (1 + u/(1-vy))^c
///        (ρ₄λ_E y^{k+1} + D y^k - C k y^{k-1}) / (ρ₄y + C)^{ς+1} e^{-fy - r/(1-vy)} dy`.
///
/// `k, varsigma, cc, dd` come from one summand of the jammed-ratio density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HArgs {
    pub a: f64,
    pub b: i32,
    pub c: i32,
    pub f: f64,
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub ell: f64,
    pub theta1: f64,
    pub k: u32,
    pub varsigma: u32,
    pub cc: f64,
    pub dd: f64,
    pub rho4: f64,
    pub lambda_e: f64,
}

pub fn h_kernel(args: &HArgs, quad: &QuadratureSpec) -> Result<f64, SopError> {
    let HArgs {
        a,
        b,
        c,
        f,
        r,
        u,
        v,
        ell,
        theta1,
        k,
        varsigma,
        cc,
        dd,
        rho4,
        lambda_e,
    } = *args;
    if !(v > 0.0) {
        return Err(SopError::invalid("v", format!("must be positive, got {v}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(SopError::invalid(
            "a",
            format!("upper limit must be positive, got {a}"),
        ));
    }
    if v * a > 1.0 + POLE_TOLERANCE {
        return Err(SopError::PoleInDomain {
            pole: 1.0 / v,
            upper: a,
        });
    }
    let a = effective_upper(a, f, (b.abs() + c.abs()) as f64 + k as f64 + 1.0);
    let half = 0.5 * a;
    let ki = k as i32;
    let mut sum = 0.0;
    for (&t, &w) in quad.nodes().iter().zip(quad.weights()) {
        let y = half * (t + 1.0);
        let gap = 1.0 - v * y;
        let decay = (-f * y - r / gap).exp();
        if decay == 0.0 {
            continue;
        }
        let mut poly = rho4 * lambda_e * y.powi(ki + 1) + dd * y.powi(ki);
        if k > 0 {
            poly -= cc * k as f64 * y.powi(ki - 1);
        }
        let mut term = w * decay * poly / (rho4 * y + cc).powi(varsigma as i32 + 1);
        if b != 0 {
            term *= (ell + theta1 * y).powi(b);
        }
        if c != 0 {
            term *= (1.0 + u / gap).powi(c);
        }
        sum += term;
    }
    Ok(half * sum)
}

/// Thresholds for TMRC with `n` active relays (each at `P_R/n`).
pub fn tmrc_constants(params: &SystemParams, policy: &PowerPolicy, n: u32) -> SchemeConstants {
    let (a1, a2) = policy.coefficients(params.lambda2());
    SchemeConstants::new(
        a1,
        a2,
        params.theta1(),
        params.theta2(),
        params.rho_relay() / n as f64,
    )
}

/// Thresholds for single-relay transmission at full power `P_R`.
pub fn osrs_constants(params: &SystemParams, policy: &PowerPolicy) -> SchemeConstants {
    let (a1, a2) = policy.coefficients(params.lambda2());
    SchemeConstants::new(a1, a2, params.theta1(), params.theta2(), params.rho_relay())
}

/// Thresholds for the ODRS data relay at `(1-α_J) P_R`.
pub fn odrs_constants(params: &SystemParams, policy: &PowerPolicy) -> SchemeConstants {
    let (a1, a2) = policy.coefficients(params.lambda2());
    SchemeConstants::new(
        a1,
        a2,
        params.theta1(),
        params.theta2(),
        (1.0 - policy.alpha_j) * params.rho_relay(),
    )
}

/// Jamming SNR `ρ₄ = α_J P_R / σ²`.
pub fn jamming_snr(params: &SystemParams, policy: &PowerPolicy) -> f64 {
    policy.alpha_j * params.rho_relay()
}

/// `Pr{G₁ > b + θ₁X, G₂ > δ₂(X), X < a}` with `G₁, G₂` of shape `user_shape`
/// and `X ~ Gamma(eaves_shape, λ_E)`, expanded into `g` kernels.
fn joint_secure_prob(
    k: &SchemeConstants,
    params: &SystemParams,
    user_shape: u32,
    eaves_shape: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if !k.feasible() {
        return Ok(0.0);
    }
    let (l1, l2, le) = (params.lambda1(), params.lambda2(), params.lambda_e());
    let beta_e = GammaLaw {
        shape: eaves_shape,
        rate: le,
    }
    .beta();
    let base = GArgs {
        a: k.a,
        b: eaves_shape as f64,
        c: k.theta1 / k.b,
        r: k.alpha2 / (k.d * k.c),
        q: k.e / k.d,
        f: l1 * k.theta1 + le,
        h: l2 * k.alpha2 / k.d,
        k: 0,
        j: 0,
    };
    let mut sum = 0.0;
    for p in 0..user_shape {
        let wp = (l1 * k.b).powi(p as i32) / factorial(p);
        for q in 0..user_shape {
            let wq = (l2 * k.c).powi(q as i32) / factorial(q);
            let g = g_kernel(
                &GArgs {
                    k: p as i32,
                    j: q as i32,
                    ..base
                },
                quad,
            )?;
            sum += wp * wq * g;
        }
    }
    Ok(beta_e * (-l1 * k.b - l2 * k.c).exp() * sum)
}

fn check_decoders(n: u32) -> Result<(), SopError> {
    if n == 0 {
        Err(SopError::invalid(
            "n",
            "conditional SOP needs at least one decoding relay",
        ))
    } else {
        Ok(())
    }
}

/// TMRC SOP given `|Φ| = n` decoding relays.
pub fn sop_tmrc_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    check_decoders(n)?;
    let k = tmrc_constants(params, policy, n);
    if !k.feasible() {
        return Ok(1.0);
    }
    let secure = joint_secure_prob(
        &k,
        params,
        n * params.links.m_user(),
        n * params.links.relay_eaves.m(),
        quad,
    )?;
    Ok(clamp_probability(1.0 - secure))
}

/// Per-relay joint secrecy-connection probability at full relay power.
pub fn delta1(
    params: &SystemParams,
    policy: &PowerPolicy,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    let k = osrs_constants(params, policy);
    let v = joint_secure_prob(
        &k,
        params,
        params.links.m_user(),
        params.links.relay_eaves.m(),
        quad,
    )?;
    Ok(clamp_probability(v))
}

/// OSRS (and TSRS) SOP given `n` decoding relays: `(1 - Δ₁)^n`.
pub fn sop_osrs_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    let d1 = delta1(params, policy, quad)?;
    Ok(clamp_probability((1.0 - d1).powi(n as i32)))
}

/// Per-relay joint secrecy-connection probability for the ODRS data relay when
/// the strongest-to-eavesdropper relay among the `K - n` non-decoders jams.
pub fn delta4(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    let relays = params.relays as u32;
    if n >= relays {
        return Err(SopError::NoJammer {
            relays: params.relays,
        });
    }
    let k = odrs_constants(params, policy);
    if !k.feasible() {
        return Ok(0.0);
    }
    let rho4 = jamming_snr(params, policy);
    let law = JammedRatioLaw::new(params.links.relay_eaves, relays - n, rho4)?;
    let (l1, l2, le) = (params.lambda1(), params.lambda2(), params.lambda_e());
    let m_u = params.links.m_user();
    let mut sum = 0.0;
    for p in 0..m_u {
        let wp = l1.powi(p as i32) / factorial(p);
        for q in 0..m_u {
            let wq = (l2 * k.w).powi(q as i32) / factorial(q);
            for t in law.terms() {
                let h = h_kernel(
                    &HArgs {
                        a: 1.0 / k.v,
                        b: p as i32,
                        c: q as i32,
                        f: l1 * k.theta1 + le,
                        r: l2 * k.w * k.u,
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
                sum += wp * wq * t.delta * h;
            }
        }
    }
    let v = (-l1 * k.ell - l2 * k.w).exp() * law.phi0() * sum;
    Ok(clamp_probability(v))
}

/// ODRS SOP given `n` decoding relays; at `n = K` there is nobody left to jam
/// and the OSRS conditional applies.
pub fn sop_odrs_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    if n as usize == params.relays {
        return sop_osrs_cond(params, policy, n, quad);
    }
    let d4 = delta4(params, policy, n, quad)?;
    Ok(clamp_probability((1.0 - d4).powi(n as i32)))
}

/// Conditional SOP `P_{Φ_n}` for any scheme; `n = 0` is certain outage.
pub fn sop_cond(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    n: u32,
    quad: &QuadratureSpec,
) -> Result<f64, SopError> {
    if n == 0 {
        return Ok(1.0);
    }
    match scheme {
        SchemeKind::Tmrc => sop_tmrc_cond(params, policy, n, quad),
        // TSRS has the same outage event as OSRS.
        SchemeKind::Osrs | SchemeKind::Tsrs => sop_osrs_cond(params, policy, n, quad),
        SchemeKind::Odrs => sop_odrs_cond(params, policy, n, quad),
    }
}

/// Exact SOP: decoding-set PMF mixed with the scheme's conditional SOPs.
pub fn sop_total(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    quad: &QuadratureSpec,
) -> Result<SopResult, SopError> {
    params.validate()?;
    policy.validate()?;
    let pmf = decoding_set_pmf(params);
    let mut total = pmf[0];
    for (n, &weight) in pmf.iter().enumerate().skip(1) {
        if weight == 0.0 {
            continue;
        }
        total += weight * sop_cond(params, policy, scheme, n as u32, quad)?;
    }
    Ok(SopResult {
        value: clamp_probability(total),
        provenance: Provenance::Analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{LinkSet, NakagamiParams};
    use crate::db_to_linear;

    fn fig2(relays: usize, p_db: f64) -> SystemParams {
        let n = |m, db: f64| NakagamiParams::new(m, db_to_linear(db)).unwrap();
        SystemParams {
            relays,
            links: LinkSet::new(n(2, 10.0), n(2, 12.0), n(2, 10.0), n(2, -5.0)).unwrap(),
            p_source: db_to_linear(p_db),
            p_relay: db_to_linear(p_db),
            sigma2: 1.0,
            r1_th: 0.2,
            r2_th: 0.1,
            r1_s: 0.1,
            r2_s: 0.2,
        }
    }

    fn quad(n: usize) -> QuadratureSpec {
        QuadratureSpec::gauss_legendre(n).unwrap()
    }

    fn g_direct(g: &GArgs) -> f64 {
        sop_oracles::integrate(
            |x| {
                let gap = 1.0 - g.q * x;
                x.powf(g.b - 1.0)
                    * (-g.f * x - g.h / gap).exp()
                    * (1.0 + g.c * x).powi(g.k)
                    * (1.0 + g.r / gap).powi(g.j)
            },
            0.0,
            g.a,
            1e-12,
            0.0,
        )
    }

    #[test]
    fn feasibility_examples() {
        let mut p = fig2(2, 10.0);
        assert!(feasibility_check(&p, &PowerPolicy::fixed(0.2, 0.0)).is_ok());
        assert!(!feasibility_check(&p, &PowerPolicy::fixed(0.7, 0.0)).is_ok());
        p.r2_s = 1e-9;
        assert!(feasibility_check(&p, &PowerPolicy::fixed(0.99, 0.0)).is_ok());
    }

    #[test]
    fn decoding_probability_reference() {
        let p = fig2(2, 10.0);
        assert!((p.eta() - 0.082_211_880_039_050_89).abs() < 1e-15);
        assert!((decode_prob_chi(&p) - 0.999_866_296_780_867_1).abs() < 1e-13);
        let pmf = decoding_set_pmf(&p);
        let expected = [
            1.787_655_080_649_052_7e-8,
            2.673_706_851_641_141e-4,
            0.999_732_611_438_285_1,
        ];
        for (a, b) in pmf.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-12 * b.max(1e-6), "{a} vs {b}");
        }
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoding_probability_limits() {
        let mut p = fig2(3, 10.0);
        p.links.source_relay = NakagamiParams::new(1, 4.0).unwrap();
        assert!((decode_prob_chi(&p) - (-p.eta() / 4.0).exp()).abs() < 1e-15);
        p.r1_th = 0.0;
        p.r2_th = 0.0;
        assert_eq!(decoding_set_pmf(&p), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn g_reduces_to_incomplete_gamma() {
        let q = QuadratureSpec::default();
        for &(a, b, f) in &[(1.0, 2.0, 1.5), (0.4, 3.0, 6.0), (2.5, 1.0, 0.3)] {
            let g = g_kernel(
                &GArgs {
                    a,
                    b,
                    c: 0.0,
                    r: 0.0,
                    q: 0.0,
                    f,
                    h: 0.0,
                    k: 0,
                    j: 0,
                },
                &q,
            )
            .unwrap();
            let exact = sop_oracles::lower_gamma(b, f * a) / f.powf(b);
            assert!((g / exact - 1.0).abs() < 1e-9, "{g} vs {exact}");
        }
        let g = g_kernel(
            &GArgs {
                a: 0.8,
                b: 1.0,
                c: 0.0,
                r: 0.0,
                q: 0.0,
                f: 0.0,
                h: 0.0,
                k: 0,
                j: 0,
            },
            &q,
        )
        .unwrap();
        assert!((g - 0.8).abs() < 1e-14);
    }

    #[test]
    fn g_matches_adaptive_integration() {
        let args = GArgs {
            a: 1.0,
            b: 2.0,
            c: 1.0,
            r: 0.5,
            q: 0.5,
            f: 1.0,
            h: 0.2,
            k: 1,
            j: 1,
        };
        let v = g_kernel(&args, &quad(200)).unwrap();
        let r = g_direct(&args);
        assert!((v / r - 1.0).abs() < 1e-6, "{v} vs {r}");
    }

    #[test]
    fn g_rejects_bad_domains() {
        let q = QuadratureSpec::default();
        let base = GArgs {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            r: 0.0,
            q: 0.0,
            f: 0.0,
            h: 0.0,
            k: 0,
            j: 0,
        };
        assert!(matches!(
            g_kernel(&GArgs { q: 1.5, ..base }, &q),
            Err(SopError::PoleInDomain { .. })
        ));
        assert!(g_kernel(&GArgs { a: 0.0, ..base }, &q).is_err());
        assert!(g_kernel(&GArgs { a: -1.0, ..base }, &q).is_err());
    }

    fn h_direct(h: &HArgs) -> f64 {
        sop_oracles::integrate(
            |y| {
                let gap = 1.0 - h.v * y;
                let mut poly =
                    h.rho4 * h.lambda_e * y.powi(h.k as i32 + 1) + h.dd * y.powi(h.k as i32);
                if h.k > 0 {
                    poly -= h.cc * h.k as f64 * y.powi(h.k as i32 - 1);
                }
                (h.ell + h.theta1 * y).powi(h.b) * (1.0 + h.u / gap).powi(h.c) * poly
                    / (h.rho4 * y + h.cc).powi(h.varsigma as i32 + 1)
                    * (-h.f * y - h.r / gap).exp()
            },
            0.0,
            h.a,
            1e-12,
            0.0,
        )
    }

    fn fig2_h_args() -> Vec<HArgs> {
        let p = fig2(2, 10.0);
        let pol = PowerPolicy::fixed(0.2, 0.5);
        let k = odrs_constants(&p, &pol);
        let rho4 = jamming_snr(&p, &pol);
        let law = JammedRatioLaw::new(p.links.relay_eaves, 1, rho4).unwrap();
        let mut out = Vec::new();
        for t in law.terms() {
            for (b, c) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                out.push(HArgs {
                    a: 1.0 / k.v,
                    b,
                    c,
                    f: p.lambda1() * k.theta1 + p.lambda_e(),
                    r: p.lambda2() * k.w * k.u,
                    u: k.u,
                    v: k.v,
                    ell: k.ell,
                    theta1: k.theta1,
                    k: t.k,
                    varsigma: t.varsigma,
                    cc: t.c as f64,
                    dd: t.d,
                    rho4,
                    lambda_e: p.lambda_e(),
                });
            }
        }
        out
    }

    #[test]
    fn h_matches_adaptive_integration() {
        let q = quad(400);
        for args in fig2_h_args() {
            let v = h_kernel(&args, &q).unwrap();
            let r = h_direct(&args);
            assert!((v - r).abs() <= 1e-5 * r.abs(), "{args:?}: {v} vs {r}");
        }
    }

    #[test]
    fn h_trivial_factors() {
        let q = QuadratureSpec::default();
        let args = fig2_h_args()[0];
        assert_eq!(args.k, 0);
        let with_u = h_kernel(
            &HArgs {
                u: 0.0,
                c: 3,
                ..args
            },
            &q,
        )
        .unwrap();
        let without = h_kernel(
            &HArgs {
                u: 0.0,
                c: 0,
                ..args
            },
            &q,
        )
        .unwrap();
        assert!((with_u - without).abs() <= 1e-15 * without.abs());
        assert!(h_kernel(&HArgs { v: 0.0, ..args }, &q).is_err());
        assert!(h_kernel(&HArgs { v: -1.0, ..args }, &q).is_err());
    }

    #[test]
    fn infeasible_split_is_certain_outage() {
        let p = fig2(2, 10.0);
        let pol = PowerPolicy::fixed(0.7, 0.5);
        let q = QuadratureSpec::default();
        assert_eq!(sop_tmrc_cond(&p, &pol, 1, &q).unwrap(), 1.0);
        assert_eq!(delta1(&p, &pol, &q).unwrap(), 0.0);
        assert_eq!(delta4(&p, &pol, 1, &q).unwrap(), 0.0);
        for s in SchemeKind::ALL {
            assert_eq!(sop_total(&p, &pol, s, &q).unwrap().value, 1.0);
        }
    }

    #[test]
    fn osrs_power_law() {
        let p = fig2(3, 10.0);
        let pol = PowerPolicy::fixed(0.2, 0.5);
        let q = QuadratureSpec::default();
        let d1 = delta1(&p, &pol, &q).unwrap();
        assert_eq!(sop_osrs_cond(&p, &pol, 0, &q).unwrap(), 1.0);
        assert!((sop_osrs_cond(&p, &pol, 1, &q).unwrap() - (1.0 - d1)).abs() < 1e-15);
        assert!((sop_osrs_cond(&p, &pol, 3, &q).unwrap() - (1.0 - d1).powi(3)).abs() < 1e-15);
        assert!(sop_tmrc_cond(&p, &pol, 0, &q).is_err());
    }

    #[test]
    fn secure_connection_approaches_one_without_eavesdropper() {
        let mut p = fig2(1, 40.0);
        p.links.relay_eaves = NakagamiParams::new(2, 1e-9).unwrap();
        let d1 = delta1(
            &p,
            &PowerPolicy::fixed(0.2, 0.0),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(d1 > 0.999, "{d1}");
    }

    #[test]
    fn unjammed_odrs_reduces_to_osrs() {
        let q = QuadratureSpec::default();
        for relays in 2..=4 {
            let p = fig2(relays, 10.0);
            let pol = PowerPolicy::fixed(0.2, 0.0);
            let d1 = delta1(&p, &pol, &q).unwrap();
            for n in 1..relays as u32 {
                let d4 = delta4(&p, &pol, n, &q).unwrap();
                assert!((d4 - d1).abs() < 1e-10, "K={relays} n={n}: {d4} vs {d1}");
            }
            assert!(matches!(
                delta4(&p, &pol, relays as u32, &q),
                Err(SopError::NoJammer { .. })
            ));
            let jammed = PowerPolicy::fixed(0.2, 0.5);
            assert_eq!(
                sop_odrs_cond(&p, &jammed, relays as u32, &q).unwrap(),
                sop_osrs_cond(&p, &jammed, relays as u32, &q).unwrap()
            );
        }
    }

    #[test]
    fn tsrs_is_osrs_and_single_relay_degenerates() {
        let q = QuadratureSpec::default();
        let pol = PowerPolicy::fixed(0.2, 0.5);
        let p = fig2(3, 10.0);
        let osrs = sop_total(&p, &pol, SchemeKind::Osrs, &q).unwrap().value;
        assert_eq!(
            sop_total(&p, &pol, SchemeKind::Tsrs, &q)
                .unwrap()
                .value
                .to_bits(),
            osrs.to_bits()
        );
        let single = fig2(1, 10.0);
        let a = sop_total(&single, &pol, SchemeKind::Osrs, &q)
            .unwrap()
            .value;
        let b = sop_total(&single, &pol, SchemeKind::Tmrc, &q)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn no_decoder_means_outage() {
        let mut p = fig2(2, 10.0);
        p.p_source = 1e-12;
        let q = QuadratureSpec::default();
        for s in SchemeKind::ALL {
            assert_eq!(
                sop_total(&p, &PowerPolicy::fixed(0.2, 0.5), s, &q)
                    .unwrap()
                    .value,
                1.0
            );
        }
    }

    #[test]
    fn node_count_convergence() {
        let pol = PowerPolicy::fixed(0.2, 0.5);
        for relays in [2, 3] {
            for p_db in [0.0, 15.0, 30.0] {
                let p = fig2(relays, p_db);
                for s in SchemeKind::ALL {
                    let a = sop_total(&p, &pol, s, &quad(200)).unwrap().value;
                    let b = sop_total(&p, &pol, s, &quad(400)).unwrap().value;
                    assert!((a - b).abs() < 1e-7, "K={relays} P={p_db} {s}: {a} vs {b}");
                }
            }
        }
    }
}
