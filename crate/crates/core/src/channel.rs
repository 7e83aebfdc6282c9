//! Channel power gain statistics under integer-shape Nakagami-m fading.
//!
//! A Nakagami-m amplitude with spread `Ω` has a Gamma(`m`, `Ω/m`) power gain.
//! The integer shape lets every CDF collapse to a finite series, which is what
//! the closed-form SOP expressions are built on.

use rand::Rng;

use crate::special::{gamma_lower_regularized, gamma_upper_regularized, ln_factorial};
use crate::SopError;

/// Fading shape `m` and mean power gain `Ω` (linear) of one link class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NakagamiParams {
    m: u32,
    omega: f64,
}

impl NakagamiParams {
    pub fn new(m: u32, omega: f64) -> Result<Self, SopError> {
        if m == 0 {
            return Err(SopError::invalid(
                "m",
                "fading shape must be a positive integer",
            ));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(SopError::invalid(
                "omega",
                format!("mean gain must be positive, got {omega}"),
            ));
        }
        Ok(Self { m, omega })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `λ = m / Ω`.
    pub fn rate(&self) -> f64 {
        self.m as f64 / self.omega
    }

    /// Law of the sum of `n` i.i.d. gains (MRC output): shape `n·m`, same rate.
    pub fn sum_of(&self, n: u32) -> GammaLaw {
        GammaLaw {
            shape: self.m * n,
            rate: self.rate(),
        }
    }

    pub fn law(&self) -> GammaLaw {
        self.sum_of(1)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.law().cdf(x)
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.law().sf(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.law().pdf(x)
    }

    /// Sum of `m` inverse-CDF exponential draws with mean `Ω/m`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let scale = self.omega / self.m as f64;
        let mut acc = 0.0;
        for _ in 0..self.m {
            // gen() is in [0, 1); 1 - u keeps the log argument in (0, 1].
            let u: f64 = rng.gen();
            acc -= (1.0 - u).ln();
        }
        acc * scale
    }
}

/// Gamma law with integer shape and positive rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaLaw {
    pub shape: u32,
    pub rate: f64,
}

impl GammaLaw {
    /// `1 - e^{-λx} Σ_{k<m} (λx)^k/k!`; zero for `x <= 0`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            gamma_lower_regularized(self.shape, self.rate * x)
        }
    }

    /// Survival function `1 - cdf`, computed without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            gamma_upper_regularized(self.shape, self.rate * x)
        }
    }

    /// `x^{m-1} λ^m e^{-λx} / Γ(m)`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.shape == 1 { self.rate } else { 0.0 };
        }
        let m = self.shape as f64;
        ((m - 1.0) * x.ln() + m * self.rate.ln() - self.rate * x - ln_factorial(self.shape - 1))
            .exp()
    }

    /// Normalizing coefficient `β = λ^m / Γ(m)`.
    pub fn beta(&self) -> f64 {
        (self.shape as f64 * self.rate.ln() - ln_factorial(self.shape - 1)).exp()
    }
}

/// All four link classes of the relay network.
///
/// The two user links share the fading shape `m_U`; only their means differ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSet {
    pub source_relay: NakagamiParams,
    pub relay_user1: NakagamiParams,
    pub relay_user2: NakagamiParams,
    pub relay_eaves: NakagamiParams,
}

impl LinkSet {
    pub fn new(
        source_relay: NakagamiParams,
        relay_user1: NakagamiParams,
        relay_user2: NakagamiParams,
        relay_eaves: NakagamiParams,
    ) -> Result<Self, SopError> {
        let links = Self {
            source_relay,
            relay_user1,
            relay_user2,
            relay_eaves,
        };
        links.validate()?;
        Ok(links)
    }

    pub fn validate(&self) -> Result<(), SopError> {
        if self.relay_user1.m() != self.relay_user2.m() {
            return Err(SopError::invalid(
                "mU",
                format!(
                    "both user links share one fading shape, got {} and {}",
                    self.relay_user1.m(),
                    self.relay_user2.m()
                ),
            ));
        }
        Ok(())
    }

    pub fn m_user(&self) -> u32 {
        self.relay_user1.m()
    }
}

fn check_nonnegative(x: f64) -> Result<(), SopError> {
    if x < 0.0 || x.is_nan() {
        Err(SopError::NegativeArgument(x))
    } else {
        Ok(())
    }
}

pub fn gain_cdf(p: &NakagamiParams, x: f64) -> Result<f64, SopError> {
    check_nonnegative(x)?;
    Ok(p.cdf(x))
}

pub fn gain_pdf(p: &NakagamiParams, x: f64) -> Result<f64, SopError> {
    check_nonnegative(x)?;
    Ok(p.pdf(x))
}

pub fn sample_gain<R: Rng + ?Sized>(p: &NakagamiParams, rng: &mut R) -> f64 {
    p.sample(rng)
}

fn check_count(name: &'static str, n: u32) -> Result<(), SopError> {
    if n == 0 {
        Err(SopError::invalid(name, "must be at least 1"))
    } else {
        Ok(())
    }
}

/// CDF of the sum of `n` i.i.d. gains.
pub fn mrc_sum_cdf(p: &NakagamiParams, n: u32, x: f64) -> Result<f64, SopError> {
    check_count("n", n)?;
    check_nonnegative(x)?;
    Ok(p.sum_of(n).cdf(x))
}

/// PDF of the sum of `n` i.i.d. gains.
pub fn mrc_sum_pdf(p: &NakagamiParams, n: u32, x: f64) -> Result<f64, SopError> {
    check_count("n", n)?;
    check_nonnegative(x)?;
    Ok(p.sum_of(n).pdf(x))
}

/// One composition in the multinomial expansion of `F_E(z)^{count-1}`.
///
/// `exponents[0]` multiplies the constant 1; `exponents[p]` for `p >= 1`
/// multiplies `-e^{-λz} (λz)^{p-1}/(p-1)!`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialTerm {
    pub exponents: Vec<u32>,
    /// Signed coefficient, including the `λ^{p-2}` powers.
    pub a: f64,
    /// Extra power of `z`: `Σ_{p>=2} n_p (p-2)`.
    pub b: u32,
    /// Exponential rate multiplier: `1 + Σ_{p>=2} n_p`.
    pub c: u32,
}

/// Enumerate all compositions of `count - 1` into `m_e + 1` nonnegative parts
/// and their expansion coefficients.
pub fn enumerate_multinomial_terms(
    m_e: u32,
    count: u32,
    lambda_e: f64,
) -> Result<Vec<MultinomialTerm>, SopError> {
    check_count("count", count)?;
    if m_e == 0 {
        return Err(SopError::invalid(
            "mE",
            "fading shape must be a positive integer",
        ));
    }
    let total = count - 1;
    let parts = m_e as usize + 1;
    let mut out = Vec::new();
    let mut current = vec![0u32; parts];
    compositions(total, 0, &mut current, &mut |exps| {
        let mut ln_abs = ln_factorial(total);
        let mut negatives = 0u32;
        let mut b = 0u32;
        let mut c = 1u32;
        for (q, &nq) in exps.iter().enumerate() {
            ln_abs -= ln_factorial(nq);
            if q >= 1 {
                let power = (q - 1) as u32;
                ln_abs += nq as f64 * (power as f64 * lambda_e.ln() - ln_factorial(power));
                negatives += nq;
                b += nq * power;
                c += nq;
            }
        }
        let sign = if negatives.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        out.push(MultinomialTerm {
            exponents: exps.to_vec(),
            a: sign * ln_abs.exp(),
            b,
            c,
        });
    });
    Ok(out)
}

fn compositions(remaining: u32, idx: usize, current: &mut [u32], emit: &mut impl FnMut(&[u32])) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        emit(current);
        return;
    }
    for v in (0..=remaining).rev() {
        current[idx] = v;
        compositions(remaining - v, idx + 1, current, emit);
    }
    current[idx] = 0;
}

/// Density of `H = max` of `count` i.i.d. eavesdropper gains, in expanded form.
#[derive(Debug, Clone)]
pub struct MaxGainLaw {
    eaves: NakagamiParams,
    count: u32,
    terms: Vec<MultinomialTerm>,
}

impl MaxGainLaw {
    pub fn new(eaves: NakagamiParams, count: u32) -> Result<Self, SopError> {
        let terms = enumerate_multinomial_terms(eaves.m(), count, eaves.rate())?;
        Ok(Self {
            eaves,
            count,
            terms,
        })
    }

    pub fn terms(&self) -> &[MultinomialTerm] {
        &self.terms
    }

    /// `(count) λ^m / Γ(m)`.
    pub fn prefactor(&self) -> f64 {
        self.count as f64 * self.eaves.law().beta()
    }

    pub fn pdf(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        let lambda = self.eaves.rate();
        let m = self.eaves.m();
        let sum: f64 = self
            .terms
            .iter()
            .map(|t| {
                let power = t.b + m - 1;
                let zp = if power == 0 {
                    1.0
                } else {
                    z.powi(power as i32)
                };
                t.a * zp * (-(t.c as f64) * lambda * z).exp()
            })
            .sum();
        self.prefactor() * sum
    }
}

pub fn max_gain_pdf(p: &NakagamiParams, count: u32, z: f64) -> Result<f64, SopError> {
    check_nonnegative(z)?;
    Ok(MaxGainLaw::new(*p, count)?.pdf(z))
}

/// One `(k, S_E-term, j)` summand of the jammed-ratio distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammedTerm {
    pub k: u32,
    pub j: u32,
    /// `ς = B + m_E + j`.
    pub varsigma: u32,
    pub c: u32,
    /// `D = Cλ - ρ₄k + ρ₄ς`.
    pub d: f64,
    /// `δ = C(k,j) A ρ₄^j λ^{k-ς} (ς-1)!/k!`.
    pub delta: f64,
}

/// Law of `Y = G/(1 + ρ₄ H)` with `G` one fresh eavesdropper gain and `H` the
/// strongest of `count` independent eavesdropper gains (the jamming relay).
#[derive(Debug, Clone)]
pub struct JammedRatioLaw {
    eaves: NakagamiParams,
    rho4: f64,
    phi0: f64,
    terms: Vec<JammedTerm>,
}

impl JammedRatioLaw {
    pub fn new(eaves: NakagamiParams, count: u32, rho4: f64) -> Result<Self, SopError> {
        if rho4 < 0.0 || rho4.is_nan() {
            return Err(SopError::invalid(
                "rho4",
                format!("jamming SNR must be nonnegative, got {rho4}"),
            ));
        }
        let max_law = MaxGainLaw::new(eaves, count)?;
        let lambda = eaves.rate();
        let m_e = eaves.m();
        let mut terms = Vec::new();
        for k in 0..m_e {
            for t in max_law.terms() {
                for j in 0..=k {
                    if rho4 == 0.0 && j > 0 {
                        continue;
                    }
                    let varsigma = t.b + m_e + j;
                    let ln_mag = crate::special::binomial(k, j).ln()
                        + t.a.abs().ln()
                        + if j > 0 { j as f64 * rho4.ln() } else { 0.0 }
                        + (k as f64 - varsigma as f64) * lambda.ln()
                        + ln_factorial(varsigma - 1)
                        - ln_factorial(k);
                    let delta = t.a.signum() * ln_mag.exp();
                    let d = t.c as f64 * lambda - rho4 * k as f64 + rho4 * varsigma as f64;
                    terms.push(JammedTerm {
                        k,
                        j,
                        varsigma,
                        c: t.c,
                        d,
                        delta,
                    });
                }
            }
        }
        Ok(Self {
            eaves,
            rho4,
            phi0: max_law.prefactor(),
            terms,
        })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn rho4(&self) -> f64 {
        self.rho4
    }

    pub fn eaves(&self) -> &NakagamiParams {
        &self.eaves
    }

    pub fn terms(&self) -> &[JammedTerm] {
        &self.terms
    }

    /// Survival `1 - F_Y(y) = φ₀ Σ δ e^{-λy} y^k / (C + ρ₄y)^ς`.
    pub fn sf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 1.0;
        }
        let lambda = self.eaves.rate();
        let decay = (-lambda * y).exp();
        let sum: f64 = self
            .terms
            .iter()
            .map(|t| {
                t.delta * y.powi(t.k as i32) / (t.c as f64 + self.rho4 * y).powi(t.varsigma as i32)
            })
            .sum();
        self.phi0 * decay * sum
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            1.0 - self.sf(y)
        }
    }

    /// One term of the density without the `φ₀` prefactor.
    pub(crate) fn term_density(&self, t: &JammedTerm, y: f64) -> f64 {
        let lambda = self.eaves.rate();
        let c = t.c as f64;
        let poly = self.rho4 * lambda * y.powi(t.k as i32 + 1) + t.d * y.powi(t.k as i32)
            - if t.k > 0 {
                c * t.k as f64 * y.powi(t.k as i32 - 1)
            } else {
                0.0
            };
        t.delta * (-lambda * y).exp() * poly / (self.rho4 * y + c).powi(t.varsigma as i32 + 1)
    }

    pub fn pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        let sum: f64 = self.terms.iter().map(|t| self.term_density(t, y)).sum();
        self.phi0 * sum
    }
}

pub fn jammed_ratio_pdf(
    p_e: &NakagamiParams,
    count: u32,
    rho4: f64,
    y: f64,
) -> Result<f64, SopError> {
    check_nonnegative(y)?;
    Ok(JammedRatioLaw::new(*p_e, count, rho4)?.pdf(y))
}

pub fn jammed_ratio_cdf(
    p_e: &NakagamiParams,
    count: u32,
    rho4: f64,
    y: f64,
) -> Result<f64, SopError> {
    check_nonnegative(y)?;
    Ok(JammedRatioLaw::new(*p_e, count, rho4)?.cdf(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn np(m: u32, omega: f64) -> NakagamiParams {
        NakagamiParams::new(m, omega).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn construction_rules() {
        assert!(NakagamiParams::new(0, 1.0).is_err());
        assert!(NakagamiParams::new(1, 0.0).is_err());
        assert!(NakagamiParams::new(1, f64::NAN).is_err());
        assert_eq!(np(4, 2.0).rate(), 2.0);
        let mismatched = LinkSet::new(np(1, 1.0), np(2, 1.0), np(3, 1.0), np(1, 1.0));
        assert!(mismatched.is_err());
    }

    #[test]
    fn gain_cdf_examples() {
        assert!(close(gain_cdf(&np(1, 1.0), 2f64.ln()).unwrap(), 0.5, 1e-15));
        assert_eq!(gain_cdf(&np(2, 1.0), 0.0).unwrap(), 0.0);
        // regularized lower incomplete gamma P(2, 2)
        assert!(close(
            gain_cdf(&np(2, 1.0), 1.0).unwrap(),
            0.593_994_150_290_161_9,
            1e-14
        ));
        assert!(gain_cdf(&np(2, 1.0), -0.1).is_err());
    }

    #[test]
    fn gain_cdf_against_reference() {
        for m in 1..=6 {
            for &omega in &[0.3, 1.0, 10.0] {
                let p = np(m, omega);
                for &x in &[1e-4, 0.05, 0.7, 3.0, 25.0] {
                    let r = sop_oracles::gamma_cdf(m as f64, p.rate(), x);
                    assert!(close(p.cdf(x), r, 1e-12), "m={m} omega={omega} x={x}");
                }
            }
        }
    }

    #[test]
    fn gain_pdf_examples() {
        assert_eq!(gain_pdf(&np(1, 1.0), 0.0).unwrap(), 1.0);
        assert_eq!(gain_pdf(&np(2, 2.0), 0.0).unwrap(), 0.0);
        let p = np(3, 2.0);
        let total = sop_oracles::integrate_tight(|x| p.pdf(x), 0.0, 60.0);
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sampled_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = np(1, 1.0);
        let mean = (0..1_000_000)
            .map(|_| sample_gain(&p, &mut rng))
            .sum::<f64>()
            / 1e6;
        assert!((mean - 1.0).abs() < 0.005, "{mean}");

        let p = np(4, 2.0);
        let draws: Vec<f64> = (0..1_000_000).map(|_| p.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / 1e6;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (1e6 - 1.0);
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn sampling_matches_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 1..=3 {
            for &omega in &[0.5, 1.0, 10.0] {
                let p = np(m, omega);
                let mut draws: Vec<f64> = (0..100_000).map(|_| p.sample(&mut rng)).collect();
                let d = sop_oracles::ks_statistic(&mut draws, |x| p.cdf(x));
                assert!(d < 0.01, "m={m} omega={omega} D={d}");
            }
        }
    }

    #[test]
    fn mrc_sum_examples() {
        let p = np(1, 1.0);
        assert_eq!(mrc_sum_cdf(&p, 2, 0.0).unwrap(), 0.0);
        assert!(close(mrc_sum_cdf(&p, 1, 2f64.ln()).unwrap(), 0.5, 1e-15));
        assert!(mrc_sum_cdf(&p, 0, 1.0).is_err());
        // P(4, 4)
        let v = mrc_sum_cdf(&np(2, 1.0), 2, 2.0).unwrap();
        assert!(close(v, 0.566_529_879_633_290_6, 1e-13), "{v}");
        assert_eq!(mrc_sum_pdf(&p, 1, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn mrc_sum_pdf_normalizes_and_differentiates_cdf() {
        let p = np(2, 0.5);
        let total = sop_oracles::integrate_tight(|x| mrc_sum_pdf(&p, 3, x).unwrap(), 0.0, 30.0);
        assert!((total - 1.0).abs() < 1e-9);

        let p = np(2, 1.0);
        let fd = sop_oracles::central_diff(|x| mrc_sum_cdf(&p, 2, x).unwrap(), 1.0, 1e-4);
        assert!((fd - mrc_sum_pdf(&p, 2, 1.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn multinomial_term_counts() {
        let single = enumerate_multinomial_terms(2, 1, 0.7).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].exponents, vec![0, 0, 0]);
        assert_eq!((single[0].a, single[0].b, single[0].c), (1.0, 0, 1));
        assert_eq!(enumerate_multinomial_terms(1, 3, 1.0).unwrap().len(), 3);
        for m_e in 1..=3u32 {
            for count in 1..=5u32 {
                let n = enumerate_multinomial_terms(m_e, count, 1.3).unwrap().len() as u64;
                assert_eq!(
                    n as f64,
                    sop_oracles::choose((count - 1 + m_e) as u64, m_e as u64)
                );
            }
        }
        assert!(enumerate_multinomial_terms(2, 0, 1.0).is_err());
    }

    #[test]
    fn max_gain_matches_order_statistic() {
        let p = np(1, 1.0);
        for &z in &[0.0, 0.3, 1.0, 4.0] {
            let v = max_gain_pdf(&p, 2, z).unwrap();
            assert!(close(v, 2.0 * (1.0 - (-z).exp()) * (-z).exp(), 1e-14));
        }
        for m_e in 1..=3 {
            for count in 1..=4u32 {
                let p = np(m_e, 0.8);
                let law = MaxGainLaw::new(p, count).unwrap();
                for &z in &[0.05, 0.5, 1.0, 2.0, 5.0] {
                    let direct = count as f64 * p.cdf(z).powi(count as i32 - 1) * p.pdf(z);
                    assert!(
                        close(law.pdf(z), direct, 1e-10),
                        "m={m_e} count={count} z={z}"
                    );
                }
            }
        }
        assert!(max_gain_pdf(&p, 0, 1.0).is_err());
    }

    #[test]
    fn max_gain_normalizes() {
        let law = MaxGainLaw::new(np(2, 1.0), 2).unwrap();
        let total = sop_oracles::integrate_tight(|z| law.pdf(z), 0.0, 40.0);
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unjammed_ratio_is_plain_gain() {
        for count in 1..=3 {
            let p = np(2, 0.6);
            for &y in &[0.0, 0.2, 1.0, 3.0] {
                assert!(close(
                    jammed_ratio_pdf(&p, count, 0.0, y).unwrap(),
                    p.pdf(y),
                    1e-12
                ));
                assert!(close(
                    jammed_ratio_cdf(&p, count, 0.0, y).unwrap(),
                    p.cdf(y),
                    1e-12
                ));
            }
        }
    }

    #[test]
    fn jammed_ratio_normalizes() {
        let law = JammedRatioLaw::new(np(2, 1.0), 2, 3.16).unwrap();
        let total = sop_oracles::integrate_tight(|y| law.pdf(y), 0.0, 60.0);
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn jammed_ratio_pdf_is_cdf_derivative() {
        for m_e in 1..=3 {
            for count in 1..=3 {
                let law = JammedRatioLaw::new(np(m_e, 0.7), count, 1.8).unwrap();
                for &y in &[0.1, 0.5, 1.0, 2.5] {
                    let fd = sop_oracles::central_diff(|t| law.cdf(t), y, 1e-5);
                    let pdf = law.pdf(y);
                    assert!(
                        (fd - pdf).abs() <= 1e-5 * pdf.abs().max(1e-3),
                        "m={m_e} count={count} y={y}"
                    );
                }
            }
        }
    }

    #[test]
    fn jammed_ratio_cdf_limits() {
        let p = np(2, 1.0);
        assert_eq!(jammed_ratio_cdf(&p, 2, 1.0, 0.0).unwrap(), 0.0);
        assert!((jammed_ratio_cdf(&p, 2, 1.0, 200.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(jammed_ratio_cdf(&p, 2, 1.0, -1.0).is_err());
        assert!(JammedRatioLaw::new(p, 2, -0.5).is_err());
    }

    #[test]
    fn jammed_ratio_cdf_matches_simulation() {
        let p = np(2, 1.0);
        let law = JammedRatioLaw::new(p, 2, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let trials = 1_000_000;
        let mut below = 0u64;
        for _ in 0..trials {
            let g = p.sample(&mut rng);
            let h = p.sample(&mut rng).max(p.sample(&mut rng));
            if g / (1.0 + h) <= 1.0 {
                below += 1;
            }
        }
        let f = below as f64 / trials as f64;
        let se = (f * (1.0 - f) / trials as f64).sqrt();
        assert!(
            (f - law.cdf(1.0)).abs() < 3.0 * se,
            "mc={f} analytic={}",
            law.cdf(1.0)
        );
    }
}
