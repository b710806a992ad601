//! Scalar special functions used by the channel models.
//!
//! Everything here is plain `f64` math on top of `libm`, so the crate stays
//! `no_std`. The modified Bessel function of the second kind is evaluated
//! with Temme's series for small argument and a Steed continued fraction for
//! large argument, with upward recurrence in the order; this covers the
//! fractional orders the gamma-gamma fading density needs at full double
//! precision.

#[allow(unused_imports)] // needed by the no_std build; test builds see std inherent methods
use num_traits::Float;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 20_000;

/// Error function.
#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF, accurate in both tails.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Natural log of the gamma function.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Scaled modified Bessel function of the second kind, `e^x * K_nu(x)`.
///
/// Valid for real `nu` (sign is ignored since `K_{-nu} = K_nu`) and `x > 0`.
/// The scaling keeps the result representable for large `x`; callers that
/// need `K_nu` itself or its log should go through [`bessel_k`] or
/// [`ln_bessel_k`]. Returns NaN for `x <= 0`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> f64 {
    if !(x > 0.0) || !nu.is_finite() {
        return f64::NAN;
    }
    let nu = nu.abs();
    // Split nu = n + mu with mu in [-1/2, 1/2].
    let n = (nu + 0.5).floor() as u32;
    let mu = nu - n as f64;

    let (mut k_mu, mut k_mu1) = if x <= 2.0 {
        let (a, b) = k_temme(mu, x);
        (a * x.exp(), b * x.exp())
    } else {
        k_steed_scaled(mu, x)
    };

    // K_{v+1} = K_{v-1} + (2v/x) K_v, stable upward.
    for i in 0..n {
        let next = (mu + i as f64 + 1.0) * (2.0 / x) * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    k_mu
}

/// Modified Bessel function of the second kind `K_nu(x)`.
///
/// Underflows to zero for very large `x` (beyond `x ~ 700`); use
/// [`ln_bessel_k`] in log-domain computations.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    bessel_k_scaled(nu, x) * (-x).exp()
}

/// `ln K_nu(x)`, stable for large arguments.
pub fn ln_bessel_k(nu: f64, x: f64) -> f64 {
    bessel_k_scaled(nu, x).ln() - x
}

/// Temme series for `K_mu(x)` and `K_{mu+1}(x)`, `|mu| <= 1/2`, `0 < x <= 2`.
fn k_temme(mu: f64, x: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    let half_x = 0.5 * x;
    let pi_mu = core::f64::consts::PI * mu;
    let fact = if pi_mu.abs() < EPS {
        1.0
    } else {
        pi_mu / pi_mu.sin()
    };
    let d = -half_x.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gam_plus, gam_minus) = temme_gammas(mu);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e_exp = e.exp();
    let mut p = 0.5 * e_exp / gam_plus;
    let mut q = 0.5 / (e_exp * gam_minus);
    let mut c = 1.0;
    let x2 = half_x * half_x;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= x2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// Steed/Thompson-Barnett continued fraction (CF2) for the scaled
/// `e^x K_mu(x)` and `e^x K_{mu+1}(x)`, `|mu| <= 1/2`, `x > 2`.
fn k_steed_scaled(mu: f64, x: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    let a1 = 0.25 - mu2;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0_f64;
    let mut q2 = 1.0_f64;
    let mut a = -a1;
    let mut c = a1;
    let mut q = c;
    let mut s = 1.0 + q * delh;
    for i in 2..=MAX_ITER {
        a -= 2.0 * (i as f64 - 1.0);
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (core::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    (k_mu, k_mu1)
}

/// Temme's auxiliary gamma combinations for `|mu| <= 1/2`:
/// `gam1 = [1/Γ(1-mu) - 1/Γ(1+mu)] / (2 mu)`,
/// `gam2 = [1/Γ(1-mu) + 1/Γ(1+mu)] / 2`,
/// plus `1/Γ(1+mu)` and `1/Γ(1-mu)` themselves.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // Odd Taylor coefficients of 1/Γ(1+z), for the mu -> 0 limit of gam1.
    const A1: f64 = 0.577_215_664_901_532_9;
    const A3: f64 = -0.042_002_635_034_095_24;
    const A5: f64 = -0.042_197_734_555_544_34;

    let gam_plus = 1.0 / libm::tgamma(1.0 + mu);
    let gam_minus = 1.0 / libm::tgamma(1.0 - mu);
    let gam2 = 0.5 * (gam_minus + gam_plus);
    // The difference quotient cancels near mu = 0; switch to the series.
    let gam1 = if mu.abs() < 0.01 {
        let mu2 = mu * mu;
        -(A1 + mu2 * (A3 + mu2 * A5))
    } else {
        (gam_minus - gam_plus) / (2.0 * mu)
    };
    (gam1, gam2, gam_plus, gam_minus)
}

/// Regularized lower incomplete gamma function `P(a, x)`.
///
/// Series expansion for `x < a + 1`, continued fraction otherwise.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if !(a > 0.0) || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // Series: P(a,x) = x^a e^-x / Γ(a) * Σ x^n / (a (a+1) ... (a+n))
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        sum * (a * x.ln() - x - ln_gamma(a)).exp()
    } else {
        // Lentz continued fraction for Q(a,x).
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (a * x.ln() - x - ln_gamma(a)).exp() * h;
        1.0 - q
    }
}
