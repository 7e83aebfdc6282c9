//! Trial-level Monte Carlo simulator of the two-hop protocol.
//!
//! Each trial draws every link gain, forms the decoding set, runs a relay
//! strategy and checks both users' secrecy capacities against their targets.
//! Trials are split into fixed-size chunks with one ChaCha stream per chunk,
//! so estimates do not depend on how many worker threads run them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scenario::{PowerPolicy, SchemeKind, SystemParams};
use crate::SopError;

pub const DEFAULT_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    /// Trials per random substream.
    pub chunk: u64,
}

impl TrialConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn validate(&self) -> Result<(), SopError> {
        if self.trials == 0 {
            return Err(SopError::invalid("trials", "need at least one trial"));
        }
        if self.chunk == 0 {
            return Err(SopError::invalid("chunk", "chunk size must be positive"));
        }
        Ok(())
    }

    fn chunks(&self) -> u64 {
        self.trials.div_ceil(self.chunk)
    }

    fn chunk_len(&self, index: u64) -> u64 {
        self.chunk.min(self.trials - index * self.chunk)
    }
}

/// Random stream for chunk `index` under root `seed`.
pub fn chunk_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outage counts by cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutageBreakdown {
    pub u1_only: u64,
    pub u2_only: u64,
    pub both: u64,
    pub no_relay: u64,
}

impl OutageBreakdown {
    pub fn total(&self) -> u64 {
        self.u1_only + self.u2_only + self.both + self.no_relay
    }

    fn record(&mut self, kind: OutageKind) {
        match kind {
            OutageKind::User1 => self.u1_only += 1,
            OutageKind::User2 => self.u2_only += 1,
            OutageKind::Both => self.both += 1,
            OutageKind::NoRelay => self.no_relay += 1,
        }
    }

    fn merge(&mut self, other: &Self) {
        self.u1_only += other.u1_only;
        self.u2_only += other.u2_only;
        self.both += other.both;
        self.no_relay += other.no_relay;
    }
}

/// Trials and outages observed with exactly `n` decoding relays.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConditionalCount {
    pub trials: u64,
    pub outages: u64,
}

impl ConditionalCount {
    pub fn p_hat(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.outages as f64 / self.trials as f64)
    }

    pub fn stderr(&self) -> Option<f64> {
        self.p_hat().map(|p| binomial_stderr(p, self.trials))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SopEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub trials: u64,
    pub breakdown: OutageBreakdown,
    /// Entry `n` holds the trials whose decoding set had size `n`.
    pub by_decoders: Vec<ConditionalCount>,
}

impl SopEstimate {
    fn from_counts(counts: &Counts) -> Self {
        let trials: u64 = counts.by_decoders.iter().map(|c| c.trials).sum();
        let outages = counts.breakdown.total();
        let p_hat = outages as f64 / trials as f64;
        Self {
            p_hat,
            stderr: binomial_stderr(p_hat, trials),
            trials,
            breakdown: counts.breakdown,
            by_decoders: counts.by_decoders.clone(),
        }
    }
}

fn binomial_stderr(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Debug, Clone)]
struct Counts {
    breakdown: OutageBreakdown,
    by_decoders: Vec<ConditionalCount>,
}

impl Counts {
    fn new(relays: usize) -> Self {
        Self {
            breakdown: OutageBreakdown::default(),
            by_decoders: vec![ConditionalCount::default(); relays + 1],
        }
    }

    fn record(&mut self, n: usize, outcome: Outcome) {
        let slot = &mut self.by_decoders[n];
        slot.trials += 1;
        if let Outcome::Outage(kind) = outcome {
            slot.outages += 1;
            self.breakdown.record(kind);
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.breakdown.merge(&other.breakdown);
        for (a, b) in self.by_decoders.iter_mut().zip(&other.by_decoders) {
            a.trials += b.trials;
            a.outages += b.outages;
        }
        self
    }
}

/// One realization of every link gain.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    pub g_sr: Vec<f64>,
    pub g_1: Vec<f64>,
    pub g_2: Vec<f64>,
    pub g_e: Vec<f64>,
}

pub fn draw_trial<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> TrialDraw {
    let k = params.relays;
    let links = &params.links;
    let mut fill =
        |p: &crate::channel::NakagamiParams| (0..k).map(|_| p.sample(rng)).collect::<Vec<_>>();
    let g_sr = fill(&links.source_relay);
    let g_1 = fill(&links.relay_user1);
    let g_2 = fill(&links.relay_user2);
    let g_e = fill(&links.relay_eaves);
    TrialDraw {
        g_sr,
        g_1,
        g_2,
        g_e,
    }
}

/// Indices of the relays whose source link supports the sum rate.
pub fn decoding_set(params: &SystemParams, draw: &TrialDraw) -> Vec<usize> {
    let rho_s = params.rho_source();
    let target = params.r1_th + params.r2_th;
    draw.g_sr
        .iter()
        .enumerate()
        .filter(|(_, &g)| 0.5 * (rho_s * g).ln_1p() >= target)
        .map(|(i, _)| i)
        .collect()
}

/// `(C_{s,1}, C_{s,2})` in nats for one transmission at SNR `rho_signal`
/// against an eavesdropper with effective gain `g_e_eff`.
pub fn secrecy_capacities(
    alpha1: f64,
    rho_signal: f64,
    g1: f64,
    g2: f64,
    g_e_eff: f64,
) -> (f64, f64) {
    let alpha2 = 1.0 - alpha1;
    let p1 = alpha1 * rho_signal;
    let p2 = alpha2 * rho_signal;
    let cs1 = 0.5 * ((p1 * g1).ln_1p() - (p1 * g_e_eff).ln_1p());
    let cs2 = 0.5 * ((p2 * g2 / (p1 * g2 + 1.0)).ln_1p() - (p2 * g_e_eff).ln_1p());
    (cs1, cs2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageKind {
    User1,
    User2,
    Both,
    NoRelay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Secure,
    Outage(OutageKind),
}

impl Outcome {
    pub fn is_secure(&self) -> bool {
        matches!(self, Outcome::Secure)
    }
}

/// Secrecy margins `C_{s,i} - R_iˢ` of one candidate transmission.
#[derive(Debug, Clone, Copy)]
struct Margins {
    m1: f64,
    m2: f64,
}

impl Margins {
    fn worst(&self) -> f64 {
        self.m1.min(self.m2)
    }

    fn outcome(&self) -> Outcome {
        match (self.m1 >= 0.0, self.m2 >= 0.0) {
            (true, true) => Outcome::Secure,
            (false, true) => Outcome::Outage(OutageKind::User1),
            (true, false) => Outcome::Outage(OutageKind::User2),
            (false, false) => Outcome::Outage(OutageKind::Both),
        }
    }
}

fn margins(params: &SystemParams, alpha1: f64, rho: f64, g1: f64, g2: f64, g_e: f64) -> Margins {
    let (cs1, cs2) = secrecy_capacities(alpha1, rho, g1, g2, g_e);
    Margins {
        m1: cs1 - params.r1_s,
        m2: cs2 - params.r2_s,
    }
}

/// Index of the first maximum of `key` over `items`.
fn first_argmax<T: Copy>(items: impl IntoIterator<Item = T>, key: impl Fn(T) -> f64) -> Option<T> {
    let mut best: Option<(T, f64)> = None;
    for it in items {
        let v = key(it);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((it, v));
        }
    }
    best.map(|(it, _)| it)
}

/// Pick the relay with the largest worst-user margin (the max `X_m` rule).
fn single_relay(candidates: &[Margins]) -> Outcome {
    let best =
        first_argmax(candidates.iter().copied(), |m| m.worst()).expect("non-empty decoding set");
    best.outcome()
}

/// Two-step rule: keep relays where user 1 is secure, then maximize user 2.
fn two_step(candidates: &[Margins]) -> Outcome {
    let filtered = candidates.iter().copied().filter(|m| m.m1 >= 0.0);
    match first_argmax(filtered, |m| m.m2) {
        Some(best) => best.outcome(),
        None => {
            let best =
                first_argmax(candidates.iter().copied(), |m| m.m1).expect("non-empty decoding set");
            best.outcome()
        }
    }
}

/// Run one trial with the decoding set given explicitly.
pub fn run_trial_with_set(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    draw: &TrialDraw,
    set: &[usize],
) -> Outcome {
    let n = set.len();
    if n == 0 {
        return Outcome::Outage(OutageKind::NoRelay);
    }
    let (alpha1, _) = policy.coefficients(params.lambda2());
    let rho = params.rho_relay();
    let per_relay = |rho_signal: f64, eaves_scale: f64| -> Vec<Margins> {
        set.iter()
            .map(|&i| {
                margins(
                    params,
                    alpha1,
                    rho_signal,
                    draw.g_1[i],
                    draw.g_2[i],
                    draw.g_e[i] * eaves_scale,
                )
            })
            .collect()
    };
    match scheme {
        SchemeKind::Tmrc => {
            let sum = |g: &[f64]| set.iter().map(|&i| g[i]).sum::<f64>();
            margins(
                params,
                alpha1,
                rho / n as f64,
                sum(&draw.g_1),
                sum(&draw.g_2),
                sum(&draw.g_e),
            )
            .outcome()
        }
        SchemeKind::Osrs => single_relay(&per_relay(rho, 1.0)),
        SchemeKind::Tsrs => two_step(&per_relay(rho, 1.0)),
        SchemeKind::Odrs => {
            if n == params.relays {
                return single_relay(&per_relay(rho, 1.0));
            }
            let outsiders = (0..params.relays).filter(|i| !set.contains(i));
            let jammer = first_argmax(outsiders, |i| draw.g_e[i])
                .expect("some relay is outside the decoding set");
            let rho_jam = policy.alpha_j * rho;
            let scale = 1.0 / (1.0 + rho_jam * draw.g_e[jammer]);
            single_relay(&per_relay((1.0 - policy.alpha_j) * rho, scale))
        }
    }
}

pub fn run_trial(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    draw: &TrialDraw,
) -> Outcome {
    run_trial_with_set(params, policy, scheme, draw, &decoding_set(params, draw))
}

/// Estimate the SOP of several schemes from one shared set of draws.
pub fn estimate_sop_schemes(
    params: &SystemParams,
    policy: &PowerPolicy,
    schemes: &[SchemeKind],
    config: &TrialConfig,
) -> Result<Vec<SopEstimate>, SopError> {
    simulate(params, policy, schemes, config, None)
}

pub fn estimate_sop(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    config: &TrialConfig,
) -> Result<SopEstimate, SopError> {
    Ok(estimate_sop_schemes(params, policy, &[scheme], config)?.remove(0))
}

/// SOP conditioned on exactly relays `0..n` decoding.
pub fn estimate_conditional_sop(
    params: &SystemParams,
    policy: &PowerPolicy,
    scheme: SchemeKind,
    n: usize,
    config: &TrialConfig,
) -> Result<SopEstimate, SopError> {
    if n > params.relays {
        return Err(SopError::invalid(
            "n",
            format!("decoding set size {n} exceeds K = {}", params.relays),
        ));
    }
    Ok(simulate(params, policy, &[scheme], config, Some(n))?.remove(0))
}

fn simulate(
    params: &SystemParams,
    policy: &PowerPolicy,
    schemes: &[SchemeKind],
    config: &TrialConfig,
    forced: Option<usize>,
) -> Result<Vec<SopEstimate>, SopError> {
    params.validate()?;
    policy.validate()?;
    config.validate()?;
    let empty = || vec![Counts::new(params.relays); schemes.len()];
    let forced_set: Option<Vec<usize>> = forced.map(|n| (0..n).collect());
    let counts = (0..config.chunks())
        .into_par_iter()
        .map(|index| {
            let mut rng = chunk_stream(config.seed, index);
            let mut local = empty();
            for _ in 0..config.chunk_len(index) {
                let draw = draw_trial(params, &mut rng);
                let set = match &forced_set {
                    Some(s) => s.clone(),
                    None => decoding_set(params, &draw),
                };
                for (slot, &scheme) in local.iter_mut().zip(schemes) {
                    slot.record(
                        set.len(),
                        run_trial_with_set(params, policy, scheme, &draw, &set),
                    );
                }
            }
            local
        })
        .reduce(empty, |a, b| {
            a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
        });
    Ok(counts.iter().map(SopEstimate::from_counts).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{LinkSet, NakagamiParams};
    use crate::db_to_linear;

    fn params(relays: usize) -> SystemParams {
        let n = |m, db: f64| NakagamiParams::new(m, db_to_linear(db)).unwrap();
        SystemParams {
            relays,
            links: LinkSet::new(n(2, 10.0), n(2, 12.0), n(2, 10.0), n(2, -5.0)).unwrap(),
            p_source: 10.0,
            p_relay: 10.0,
            sigma2: 1.0,
            r1_th: 0.2,
            r2_th: 0.1,
            r1_s: 0.1,
            r2_s: 0.2,
        }
    }

    #[test]
    fn capacities_limits() {
        let (cs1, _) = secrecy_capacities(0.2, 10.0, 0.7, 0.3, 0.7);
        assert!(cs1.abs() < 1e-15);
        let (cs1, _) = secrecy_capacities(0.2, 10.0, 0.7, 0.3, 0.0);
        assert!((cs1 - 0.5 * (1.0f64 + 2.0 * 0.7).ln()).abs() < 1e-15);
        let (_, cs2) = secrecy_capacities(0.2, 1e12, 0.7, 0.3, 1e-13);
        let ceiling = 0.5 * (1.0f64 + 0.8 / 0.2).ln() - 0.5 * (1.0f64 + 0.8 * 1e12 * 1e-13).ln();
        assert!((cs2 - ceiling).abs() < 1e-9);
    }

    #[test]
    fn empty_set_is_no_relay_outage() {
        let p = params(2);
        let draw = draw_trial(&p, &mut chunk_stream(1, 0));
        let pol = PowerPolicy::fixed(0.2, 0.5);
        for s in SchemeKind::ALL {
            assert_eq!(
                run_trial_with_set(&p, &pol, s, &draw, &[]),
                Outcome::Outage(OutageKind::NoRelay)
            );
        }
    }

    #[test]
    fn threshold_form_matches_capacity_form() {
        let p = params(1);
        let pol = PowerPolicy::fixed(0.2, 0.0);
        let k = crate::analytic::osrs_constants(&p, &pol);
        let mut rng = chunk_stream(9, 3);
        for _ in 0..20_000 {
            let d = draw_trial(&p, &mut rng);
            let (g1, g2, ge) = (d.g_1[0], d.g_2[0], d.g_e[0]);
            let by_threshold = g1 > k.user1_threshold(ge) && ge < k.a && g2 > k.user2_threshold(ge);
            let verdict = run_trial_with_set(&p, &pol, SchemeKind::Osrs, &d, &[0]).is_secure();
            assert_eq!(by_threshold, verdict, "{d:?}");
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let p = params(3);
        let pol = PowerPolicy::fixed(0.2, 0.5);
        let cfg = TrialConfig {
            trials: 20_000,
            seed: 7,
            chunk: 1000,
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_sop_schemes(&p, &pol, &SchemeKind::ALL, &cfg).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn counts_are_consistent() {
        let p = params(2);
        let pol = PowerPolicy::fixed(0.2, 0.5);
        let est = estimate_sop(&p, &pol, SchemeKind::Odrs, &TrialConfig::new(10_000, 3)).unwrap();
        assert_eq!(est.trials, 10_000);
        let outages: u64 = est.by_decoders.iter().map(|c| c.outages).sum();
        assert_eq!(outages, est.breakdown.total());
        assert_eq!(est.by_decoders[0].outages, est.breakdown.no_relay);
    }

    #[test]
    fn infeasible_split_is_certain_outage() {
        let p = params(2);
        let pol = PowerPolicy::fixed(0.7, 0.0);
        let est = estimate_sop(&p, &pol, SchemeKind::Osrs, &TrialConfig::new(5_000, 1)).unwrap();
        assert_eq!(est.p_hat, 1.0);
    }
}
