//! Gauss–Legendre rules used by the `g`/`h` integral kernels.

use std::f64::consts::PI;

use crate::SopError;

/// Default node count for the analytic engine.
pub const DEFAULT_NODES: usize = 300;

/// An `N`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are strictly increasing; weights sum to 2. Immutable once built, so a
/// single instance can be shared across threads and evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureSpec {
    pub fn gauss_legendre(n: usize) -> Result<Self, SopError> {
        if n == 0 {
            return Err(SopError::invalid("quad_n", "node count must be positive"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        // Roots are symmetric; solve for the positive half with Newton on P_n.
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_lo^hi f(x) dx` with the rule mapped affinely onto `[lo, hi]`.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum();
        half * sum
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::gauss_legendre(DEFAULT_NODES).expect("default node count is positive")
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
