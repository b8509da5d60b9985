//! Special functions used by the normal-model contours and the sparsity prior.
//!
//! The normal distribution function is built on `libm::erfc`, which keeps
//! full relative precision in the upper tail. Everything else is computed
//! here: the normal quantile (rational start plus Halley refinement), the
//! regularized incomplete gamma function behind the chi-square CDF, and an
//! exact-by-summation binomial CDF.

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal distribution function Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Upper tail 1 − Φ(x), accurate far into the tail.
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Inverse of Φ on the open unit interval.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    // Acklam's rational approximation (relative error ~1e-9) ...
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // ... polished by Halley steps against the erfc-based Φ.
    for _ in 0..2 {
        let e = if x < 0.0 {
            std_normal_cdf(x) - p
        } else {
            (1.0 - p) - std_normal_sf(x)
        };
        let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    Ok(x)
}

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
fn incomplete_gamma(a: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    let log_prefactor = a * x.ln() - x - libm::lgamma(a);
    if x < a + 1.0 {
        // Power series.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (sum.ln() + log_prefactor).exp().min(1.0);
        (p, 1.0 - p)
    } else {
        // Modified Lentz continued fraction for Q.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
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
        let q = (h.ln() + log_prefactor).exp().min(1.0);
        (1.0 - q, q)
    }
}

fn check_dof(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "chi-square degrees of freedom must be positive, got {k}"
        )))
    }
}

/// Chi-square distribution function with `k` degrees of freedom.
pub fn chisq_cdf(x: f64, k: f64) -> Result<f64> {
    check_dof(k)?;
    Ok(incomplete_gamma(0.5 * k, 0.5 * x).0)
}

/// Chi-square survival function 1 − G_k(x).
pub fn chisq_sf(x: f64, k: f64) -> Result<f64> {
    check_dof(k)?;
    if k == 2.0 {
        return Ok(if x <= 0.0 { 1.0 } else { (-0.5 * x).exp() });
    }
    Ok(incomplete_gamma(0.5 * k, 0.5 * x).1)
}

/// Bin(n, p) distribution function at `j`, summed term by term.
///
/// `j < 0` gives 0 and `j >= n` gives exactly 1.
pub fn binom_cdf(j: i64, n: u64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "binomial success probability must lie in [0, 1], got {p}"
        )));
    }
    if j < 0 {
        return Ok(0.0);
    }
    let j = j as u64;
    if j >= n {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    let ratio = p / (1.0 - p);
    // pmf(0) in log space so large n does not underflow prematurely.
    let mut log_pmf = n as f64 * (1.0 - p).ln();
    let mut total = log_pmf.exp();
    for i in 0..j {
        log_pmf += ((n - i) as f64 / (i + 1) as f64).ln() + ratio.ln();
        total += log_pmf.exp();
    }
    Ok(total.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: invert Φ by plain bisection.
    fn bisect_quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-40.0, 40.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if std_normal_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn phi_at_zero_is_half() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
    }

    #[test]
    fn phi_symmetry() {
        for i in -80..=80 {
            let x = i as f64 * 0.1;
            assert_abs_diff_eq!(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn phi_reference_values() {
        // Tabulated values of Φ.
        assert_abs_diff_eq!(std_normal_cdf(1.0), 0.841_344_746_068_542_9, epsilon = 1e-12);
        assert_abs_diff_eq!(std_normal_cdf(1.959_963_984_540_054), 0.975, epsilon = 1e-12);
        assert_abs_diff_eq!(std_normal_cdf(-3.0), 0.001_349_898_031_630_094_6, epsilon = 1e-14);
    }

    #[test]
    fn quantile_matches_bisection() {
        assert_abs_diff_eq!(std_normal_quantile(0.975).unwrap(), 1.959_964, epsilon = 1e-6);
        for &p in &[1e-10, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.77, 0.975, 0.999, 1.0 - 1e-9] {
            let q = std_normal_quantile(p).unwrap();
            assert_abs_diff_eq!(q, bisect_quantile(p), epsilon = 1e-6);
        }
    }

    #[test]
    fn quantile_rejects_boundary() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn chisq_two_dof_closed_form() {
        for i in 0..200 {
            let x = i as f64 * 0.1;
            assert_abs_diff_eq!(chisq_cdf(x, 2.0).unwrap(), 1.0 - (-x / 2.0).exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn chisq_reference_values() {
        // 95th percentiles of ChiSq(1), ChiSq(5), ChiSq(10).
        assert_abs_diff_eq!(chisq_cdf(3.841_458_820_694_124, 1.0).unwrap(), 0.95, epsilon = 1e-9);
        assert_abs_diff_eq!(chisq_cdf(11.070_497_693_516_35, 5.0).unwrap(), 0.95, epsilon = 1e-9);
        assert_abs_diff_eq!(chisq_cdf(18.307_038_053_275_146, 10.0).unwrap(), 0.95, epsilon = 1e-9);
        // ChiSq(1) is the square of a standard normal.
        for &x in &[0.1, 0.5, 1.0, 2.5, 7.0] {
            let via_phi = 2.0 * std_normal_cdf(f64::sqrt(x)) - 1.0;
            assert_abs_diff_eq!(chisq_cdf(x, 1.0).unwrap(), via_phi, epsilon = 1e-10);
        }
    }

    #[test]
    fn chisq_rejects_bad_dof() {
        assert!(chisq_cdf(1.0, 0.0).is_err());
        assert!(chisq_sf(1.0, -2.0).is_err());
    }

    #[test]
    fn binom_cdf_values() {
        assert_eq!(binom_cdf(-1, 2, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(binom_cdf(0, 2, 0.5).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(binom_cdf(1, 2, 0.5).unwrap(), 0.75, epsilon = 1e-15);
        assert_eq!(binom_cdf(2, 2, 0.5).unwrap(), 1.0);
        assert_eq!(binom_cdf(7, 7, 0.123).unwrap(), 1.0);
        assert_abs_diff_eq!(binom_cdf(3, 10, 0.3).unwrap(), 0.649_610_718_4, epsilon = 1e-9);
    }
}
