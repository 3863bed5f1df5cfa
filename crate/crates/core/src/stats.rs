//! Small statistics toolbox: incomplete gamma, chi-square tail
//! probabilities and critical values, and Kolmogorov–Smirnov helpers.
//!
//! These back the equidistribution checks; they are deliberately
//! self-contained so the sampling code they judge cannot leak into them.

/// Regularized lower incomplete gamma `P(s, x)`, via the series for
/// `x < s + 1` and the Lentz continued fraction otherwise.
pub fn regularized_gamma_p(s: f64, x: f64) -> f64 {
    assert!(s > 0.0 && x >= 0.0, "invalid incomplete gamma arguments");
    if x == 0.0 {
        return 0.0;
    }
    let ln_gamma_s = ln_gamma(s);
    if x < s + 1.0 {
        // Series: P(s,x) = x^s e^-x / Γ(s) · Σ x^n / (s(s+1)...(s+n))
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut a = s;
        for _ in 0..500 {
            a += 1.0;
            term *= x / a;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + s * x.ln() - x - ln_gamma_s).exp()
    } else {
        // Continued fraction for Q(s,x) = 1 - P(s,x).
        let tiny = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (s * x.ln() - x - ln_gamma_s).exp() * h;
        1.0 - q
    }
}

/// Lanczos log-gamma.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// CDF of the chi-square distribution with `k` degrees of freedom.
pub fn chi_square_cdf(x: f64, k: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    regularized_gamma_p(k as f64 / 2.0, x / 2.0)
}

/// Upper quantile: the value `c` with `P(X > c) = alpha`.
pub fn chi_square_critical(alpha: f64, k: usize) -> f64 {
    assert!((0.0..1.0).contains(&alpha) && alpha > 0.0);
    let target = 1.0 - alpha;
    let mut lo = 0.0;
    let mut hi = k as f64 + 200.0 + 20.0 * (k as f64).sqrt();
    while chi_square_cdf(hi, k) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi_square_cdf(mid, k) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One-sample Kolmogorov–Smirnov statistic of `values` against the uniform
/// distribution on `[0, 1)`.
pub fn ks_statistic_uniform(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).expect("NaN in KS sample"));
    let n = values.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let lo = (v - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - v).abs();
        sup = sup.max(lo).max(hi);
    }
    sup
}

/// Critical KS statistic at significance `alpha` (asymptotic form
/// `c(α)/√n` with `c(α) = √(−ln(α/2)/2)`).
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    ((-(alpha / 2.0).ln()) / 2.0).sqrt() / (n as f64).sqrt()
}

/// Two-sample chi-square comparison of weighted histograms.
#[derive(Clone, Debug)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareReport {
    pub fn critical(&self, alpha: f64) -> f64 {
        chi_square_critical(alpha, self.dof.max(1))
    }
}

/// Chi-square distance between two weighted histograms over the same bins.
///
/// Weighted counts are rescaled to effective sample sizes `(Σw)²/Σw²` before
/// the classic two-sample formula, so over-weighted samples do not overstate
/// the evidence.
pub fn chi_square_two_sample(
    hist_a: &[f64],
    hist_b: &[f64],
    ess_a: f64,
    ess_b: f64,
) -> ChiSquareReport {
    assert_eq!(hist_a.len(), hist_b.len());
    let total_a: f64 = hist_a.iter().sum();
    let total_b: f64 = hist_b.iter().sum();
    assert!(total_a > 0.0 && total_b > 0.0, "empty histogram");
    let scale_a = ess_a / total_a;
    let scale_b = ess_b / total_b;
    let mut statistic = 0.0;
    let mut nonzero = 0usize;
    let k1 = (ess_b / ess_a).sqrt();
    let k2 = (ess_a / ess_b).sqrt();
    for (&a, &b) in hist_a.iter().zip(hist_b) {
        let a = a * scale_a;
        let b = b * scale_b;
        if a + b <= 0.0 {
            continue;
        }
        nonzero += 1;
        let d = k1 * a - k2 * b;
        statistic += d * d / (a + b);
    }
    let dof = nonzero.saturating_sub(1).max(1);
    ChiSquareReport {
        statistic,
        dof,
        p_value: 1.0 - chi_square_cdf(statistic, dof),
    }
}

/// Effective sample size `(Σw)² / Σw²` of a weight vector.
pub fn effective_sample_size(weights: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut sq = 0.0;
    for w in weights {
        sum += w;
        sq += w * w;
    }
    if sq == 0.0 {
        0.0
    } else {
        sum * sum / sq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gamma_p_reference_values() {
        // P(0.5, x) = erf(sqrt(x)); erf(1) = 0.8427007929497149.
        assert!((regularized_gamma_p(0.5, 1.0) - 0.8427007929497149).abs() < 1e-12);
        // P(1, x) = 1 - e^-x.
        assert!((regularized_gamma_p(1.0, 2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn chi_square_known_quantiles() {
        // 99th percentile of chi-square with 10 dof is 23.209.
        assert!((chi_square_critical(0.01, 10) - 23.209).abs() < 5e-3);
        // With 1 dof, 3.841 at 95%.
        assert!((chi_square_critical(0.05, 1) - 3.841).abs() < 5e-3);
        assert!((chi_square_cdf(23.209, 10) - 0.99).abs() < 1e-4);
    }

    #[test]
    fn ks_accepts_uniform_rejects_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let n = 20_000;
        let mut uni: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let d = ks_statistic_uniform(&mut uni);
        assert!(d < ks_critical(0.01, n), "{} vs {}", d, ks_critical(0.01, n));

        let mut skew: Vec<f64> = (0..n).map(|_| rng.gen::<f64>().powi(2)).collect();
        let d = ks_statistic_uniform(&mut skew);
        assert!(d > ks_critical(0.01, n));
    }

    #[test]
    fn two_sample_chi_square_behaviour() {
        let mut rng = ChaCha8Rng::seed_from_u64(58);
        let bins = 20;
        let mut ha = vec![0.0; bins];
        let mut hb = vec![0.0; bins];
        for _ in 0..50_000 {
            ha[rng.gen_range(0..bins)] += 1.0;
            hb[rng.gen_range(0..bins)] += 1.0;
        }
        let rep = chi_square_two_sample(&ha, &hb, 50_000.0, 50_000.0);
        assert!(rep.statistic < rep.critical(0.01), "same distribution accepted");

        let mut hc = vec![0.0; bins];
        for _ in 0..50_000 {
            let v: f64 = rng.gen();
            hc[((v * v) * bins as f64) as usize % bins] += 1.0;
        }
        let rep = chi_square_two_sample(&ha, &hc, 50_000.0, 50_000.0);
        assert!(rep.statistic > rep.critical(0.01), "skewed distribution rejected");
    }

    #[test]
    fn identical_histograms_give_zero() {
        let h = vec![5.0, 7.0, 9.0];
        let rep = chi_square_two_sample(&h, &h, 21.0, 21.0);
        assert_eq!(rep.statistic, 0.0);
    }
}
