//! Integer-shape gamma-family helpers shared by the analytic engines.

/// `ln(n!)`, exact table lookup for small `n`, Stirling series above.
pub fn ln_factorial(n: u32) -> f64 {
    const TABLE_LEN: usize = 64;
    static TABLE: std::sync::OnceLock<[f64; TABLE_LEN]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        for i in 1..TABLE_LEN {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    if (n as usize) < TABLE_LEN {
        return table[n as usize];
    }
    let x = n as f64 + 1.0;
    // ln Γ(x) via Stirling with three correction terms; plenty for x >= 64.
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// `n!`; exact integer products up to 22!, which is the last one f64 holds exactly.
pub fn factorial(n: u32) -> f64 {
    if n <= 22 {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Upper tail `Q(m, x) = e^{-x} Σ_{k<m} x^k / k!` of a unit-rate Gamma(m) law.
///
/// Summed directly while `x <= 700`; in log space beyond that so `e^{-x}`
/// does not underflow before the polynomial can compensate.
pub fn gamma_upper_regularized(m: u32, x: f64) -> f64 {
    debug_assert!(m >= 1);
    if x <= 0.0 {
        return 1.0;
    }
    if x < m as f64 && x < 30.0 {
        return 1.0 - gamma_lower_regularized_small(m, x);
    }
    if x <= 700.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..m {
            term *= x / k as f64;
            sum += term;
        }
        sum * (-x).exp()
    } else {
        let lx = x.ln();
        (0..m)
            .map(|k| (k as f64 * lx - ln_factorial(k) - x).exp())
            .sum()
    }
}

/// Lower regularized `P(m, x) = 1 - Q(m, x)` without cancellation for small `x`.
pub fn gamma_lower_regularized(m: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < m as f64 && x < 30.0 {
        gamma_lower_regularized_small(m, x)
    } else {
        1.0 - gamma_upper_regularized(m, x)
    }
}

// e^{-x} Σ_{k>=m} x^k/k!, convergent and cancellation-free for x < m.
fn gamma_lower_regularized_small(m: u32, x: f64) -> f64 {
    let lead = (m as f64 * x.ln() - ln_factorial(m) - x).exp();
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = m;
    loop {
        k += 1;
        term *= x / k as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    lead * sum
}

/// Unregularized lower incomplete gamma `Υ(m, x) = (m-1)! P(m, x)` for integer shape.
pub fn lower_incomplete_gamma(m: u32, x: f64) -> f64 {
    factorial(m - 1) * gamma_lower_regularized(m, x)
}
