//! Radial eigenfunction factors of the cylinder cross-section.
//!
//! Both factors are generalized hypergeometric series of type `0F1`:
//!
//! * `psi1(r) = 0F1(; tau+1; -r^2/4)` on `[0, R1]`, the principal Dirichlet
//!   eigenfunction of `-Laplacian` in the `N`-ball (oscillatory, first zero
//!   `R1`),
//! * `psi2(r) = 0F1(; tau+1; r^2/4)` on `(-inf, 0]`, the radial solution of
//!   `Laplacian phi = phi` in `R^N` (log-convex, growing),
//!
//! with `tau = N/2 - 1`. For `N = 1` they reduce to `cos` and `cosh`, for
//! `N = 3` to `sin(r)/r` and `sinh(r)/r`.
//!
//! The dispersion relations only ever need the ratio `psi'/psi`, and `psi2`
//! overflows long before that ratio stops being meaningful, so the reduced
//! log-derivative `psi'(r) / (r psi(r))` is exposed as a first-class quantity
//! and switches to the large-argument Bessel expansion past [`R_ASYM`].

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Relative truncation tolerance of the `0F1` series.
pub const SERIES_TOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_TERMS_MAX: usize = 500;
/// Beyond `|r| > R_ASYM` the `psi2` ratios come from the asymptotic expansion.
pub const R_ASYM: f64 = 50.0;

/// Series configuration for a cross-section of dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    /// `tau = N/2 - 1`.
    pub tau: f64,
    pub terms_max: usize,
    pub tol: f64,
}

impl HypParams {
    pub fn new(tau: f64, terms_max: usize, tol: f64) -> Result<Self> {
        if !(tau > -1.0) || !tau.is_finite() {
            return Err(Error::Domain { what: "tau", value: tau });
        }
        if terms_max < 10 {
            return Err(Error::InvalidParams(format!("terms_max = {terms_max} < 10")));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain { what: "tol", value: tol });
        }
        Ok(Self { tau, terms_max, tol })
    }

    /// Default truncation settings for an `N`-dimensional cross-section.
    pub fn for_dimension(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be >= 1".into()));
        }
        Self::new(f64::from(n) / 2.0 - 1.0, SERIES_TERMS_MAX, SERIES_TOL)
    }

    /// `2 tau + 1`, i.e. `N - 1`: the coefficient of the first-order term of
    /// the radial Laplacian.
    fn radial_coef(&self) -> f64 {
        2.0 * self.tau + 1.0
    }

    pub fn hyp0f1(&self, b: f64, z: f64) -> Result<f64> {
        hyp0f1_with(b, z, self.tol, self.terms_max)
    }
}

/// `0F1(; b; z) = sum_n Gamma(b)/Gamma(b+n) z^n/n!` with the default
/// truncation settings.
pub fn hyp0f1(b: f64, z: f64) -> Result<f64> {
    hyp0f1_with(b, z, SERIES_TOL, SERIES_TERMS_MAX)
}

/// `0F1(; b; z)`, stopping once a term drops below `tol` times the partial sum.
pub fn hyp0f1_with(b: f64, z: f64, tol: f64, terms_max: usize) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::Domain { what: "b", value: b });
    }
    if !z.is_finite() {
        return Err(Error::Domain { what: "z", value: z });
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..terms_max {
        let k = n as f64;
        term *= z / ((b + k) * (k + 1.0));
        sum += term;
        if term == 0.0 || term.abs() < tol * sum.abs() {
            return Ok(sum);
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::Truncation {
        terms: terms_max,
        last_term: term.abs(),
    })
}

fn check_nonneg(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "r (psi1 needs r >= 0)", value: r })
    }
}

fn check_nonpos(r: f64) -> Result<()> {
    if r <= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "r (psi2 needs r <= 0)", value: r })
    }
}

pub fn psi1(r: f64, p: &HypParams) -> Result<f64> {
    check_nonneg(r)?;
    p.hyp0f1(p.tau + 1.0, -r * r / 4.0)
}

pub fn psi1_prime(r: f64, p: &HypParams) -> Result<f64> {
    check_nonneg(r)?;
    let b = p.tau + 1.0;
    Ok(-r / (2.0 * b) * p.hyp0f1(b + 1.0, -r * r / 4.0)?)
}

/// Reduced log-derivative `psi1'(r) / (r psi1(r))`, finite at `r = 0`
/// where it equals `-1/N`. Negative on `[0, R1)`.
pub fn psi1_reduced_log_derivative(r: f64, p: &HypParams) -> Result<f64> {
    check_nonneg(r)?;
    let b = p.tau + 1.0;
    let z = -r * r / 4.0;
    Ok(-p.hyp0f1(b + 1.0, z)? / (2.0 * b * p.hyp0f1(b, z)?))
}

pub fn psi2(r: f64, p: &HypParams) -> Result<f64> {
    check_nonpos(r)?;
    let x = -r;
    if use_asymptotic(x, p) {
        return Ok(ln_psi2_asymptotic(x, p).exp());
    }
    p.hyp0f1(p.tau + 1.0, r * r / 4.0)
}

pub fn psi2_prime(r: f64, p: &HypParams) -> Result<f64> {
    check_nonpos(r)?;
    let x = -r;
    if use_asymptotic(x, p) {
        let q = -bessel_i_ratio_asymptotic(p.tau, x);
        return Ok(q * ln_psi2_asymptotic(x, p).exp());
    }
    let b = p.tau + 1.0;
    Ok(r / (2.0 * b) * p.hyp0f1(b + 1.0, r * r / 4.0)?)
}

/// Log-derivative `psi2'(r) / psi2(r)` on `r <= 0`; tends to `-1` as
/// `r -> -inf`, with an `O(1/|r|)` correction when `N > 1`.
pub fn psi2_log_derivative(r: f64, p: &HypParams) -> Result<f64> {
    check_nonpos(r)?;
    Ok(r * psi2_reduced_log_derivative(r, p)?)
}

/// Reduced log-derivative `psi2'(r) / (r psi2(r))`, equal to `1/N` at `r = 0`.
pub fn psi2_reduced_log_derivative(r: f64, p: &HypParams) -> Result<f64> {
    check_nonpos(r)?;
    let x = -r;
    if use_asymptotic(x, p) {
        // psi2'/psi2 = -I_{tau+1}(x)/I_tau(x) and r = -x.
        return Ok(bessel_i_ratio_asymptotic(p.tau, x) / x);
    }
    let b = p.tau + 1.0;
    let z = r * r / 4.0;
    Ok(p.hyp0f1(b + 1.0, z)? / (2.0 * b * p.hyp0f1(b, z)?))
}

/// Derivative of the log-derivative `q = psi'/psi` expressed through the
/// radial ODE: `q' = sign - (N-1) q/r - q^2`, where `sign` is `-1` for `psi1`
/// and `+1` for `psi2`. Takes the reduced quantity `s = q/r`.
pub(crate) fn log_derivative_slope(r: f64, s: f64, sign: f64, p: &HypParams) -> f64 {
    let q = r * s;
    sign - p.radial_coef() * s - q * q
}

fn use_asymptotic(x: f64, p: &HypParams) -> bool {
    let nu = p.tau + 1.0;
    x > R_ASYM && x > 2.0 * nu * nu
}

/// Sum of the large-argument expansion `sum_k (-1)^k a_k(nu) / x^k` of
/// `I_nu(x) sqrt(2 pi x) e^{-x}`.
fn hankel_sum(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            // asymptotic series has started to diverge
            break;
        }
        term = next;
        sum += term;
        if term == 0.0 || term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `I_{tau+1}(x) / I_tau(x)` for large `x`.
fn bessel_i_ratio_asymptotic(tau: f64, x: f64) -> f64 {
    hankel_sum(tau + 1.0, x) / hankel_sum(tau, x)
}

/// `ln psi2(-x)` from `psi2(-x) = Gamma(tau+1) (x/2)^{-tau} I_tau(x)`.
fn ln_psi2_asymptotic(x: f64, p: &HypParams) -> f64 {
    let tau = p.tau;
    ln_gamma(tau + 1.0) - tau * (x / 2.0).ln() + x - 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + hankel_sum(tau, x).ln()
}

/// First positive zero `R1` of `psi1`, i.e. the radius of the `N`-ball whose
/// principal Dirichlet eigenvalue of `-Laplacian` is `1`.
pub fn first_zero_psi1(p: &HypParams) -> Result<f64> {
    // j_{tau,1} >= sqrt((tau+1)(tau+5)) is a safe starting scale.
    let guess = ((p.tau + 1.0) * (p.tau + 5.0)).sqrt();
    let step = guess / 64.0;
    let bound = 4.0 * guess + 10.0;
    let mut lo = 0.0;
    let mut hi = step;
    loop {
        if psi1(hi, p)? <= 0.0 {
            break;
        }
        lo = hi;
        hi += step;
        if hi > bound {
            return Err(Error::Bracket("first zero of psi1"));
        }
    }
    bisect(lo, hi, 1e-14, |r| Ok(psi1(r, p)? > 0.0))
}

/// Bisection on a predicate that is `true` left of the root and `false` right
/// of it. Stops at absolute width `tol` or when the midpoint stops moving.
pub(crate) fn bisect<F>(mut lo: f64, mut hi: f64, tol: f64, mut left: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if left(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hp(n: u32) -> HypParams {
        HypParams::for_dimension(n).unwrap()
    }

    /// Independent Maclaurin summation of `0F1(; b; z)` with a fixed number of
    /// terms and factorials accumulated separately.
    fn maclaurin(b: f64, z: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut poch = 1.0; // (b)_n
        let mut fact = 1.0;
        let mut zn = 1.0;
        for n in 0..terms {
            if n > 0 {
                poch *= b + (n - 1) as f64;
                fact *= n as f64;
                zn *= z;
            }
            sum += zn / (poch * fact);
        }
        sum
    }

    #[test]
    fn hyp0f1_closed_forms() {
        let r = PI / 3.0;
        assert!((hyp0f1(0.5, -r * r / 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((hyp0f1(0.5, 0.25).unwrap() - 1.0_f64.cosh()).abs() < 1e-15);
        assert!((hyp0f1(0.5, 0.25).unwrap() - 1.5430806348).abs() < 1e-10);
    }

    #[test]
    fn hyp0f1_vanishes_at_first_bessel_zero() {
        // Oracle: bisection on an independent 60-term Maclaurin sum.
        let mut lo = 2.0;
        let mut hi = 3.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if maclaurin(1.0, -mid * mid / 4.0, 60) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404825557695773).abs() < 1e-12);
        let z = -(2.404825557_f64).powi(2) / 4.0;
        assert!(hyp0f1(1.0, z).unwrap().abs() < 1e-9);
    }

    #[test]
    fn hyp0f1_rejects_bad_order_and_reports_truncation() {
        assert!(matches!(hyp0f1(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(hyp0f1(-1.5, 1.0), Err(Error::Domain { .. })));
        match hyp0f1_with(1.0, 1e8, 1e-16, 20) {
            Err(Error::Truncation { terms, last_term }) => {
                assert_eq!(terms, 20);
                assert!(last_term > 0.0);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn hyp_params_validation() {
        assert!(HypParams::new(-1.0, 500, 1e-16).is_err());
        assert!(HypParams::new(0.0, 5, 1e-16).is_err());
        assert!(HypParams::new(0.0, 500, 0.0).is_err());
        assert!(HypParams::for_dimension(0).is_err());
        assert_eq!(hp(1).tau, -0.5);
        assert_eq!(hp(4).tau, 1.0);
    }

    #[test]
    fn psi1_normalization_and_cosine() {
        let p = hp(1);
        assert_eq!(psi1(0.0, &p).unwrap(), 1.0);
        assert_eq!(psi1_prime(0.0, &p).unwrap(), 0.0);
        assert!((psi1(1.0, &p).unwrap() - 0.540302305868140).abs() < 1e-14);
        assert!((psi1_prime(1.0, &p).unwrap() + 0.841470984807897).abs() < 1e-14);
        assert!(psi1(-0.1, &p).is_err());
    }

    #[test]
    fn psi1_two_dimensional_matches_direct_summation() {
        let p = hp(2);
        let oracle = maclaurin(1.0, -0.25, 40);
        assert!((psi1(1.0, &p).unwrap() - oracle).abs() < 1e-15);
        // J0(1)
        assert!((oracle - 0.7651976865579666).abs() < 1e-15);
    }

    #[test]
    fn psi2_normalization_and_cosh() {
        let p = hp(1);
        assert_eq!(psi2(0.0, &p).unwrap(), 1.0);
        assert_eq!(psi2_prime(0.0, &p).unwrap(), 0.0);
        assert!((psi2(-1.0, &p).unwrap() - 1.0_f64.cosh()).abs() < 1e-14);
        assert!((psi2_prime(-1.0, &p).unwrap() + 1.0_f64.sinh()).abs() < 1e-14);
        assert!(psi2(0.5, &p).is_err());
    }

    #[test]
    fn psi2_ratio_limit() {
        let p = hp(1);
        let ratio = psi2(-30.0, &p).unwrap() / psi2_prime(-30.0, &p).unwrap();
        assert!((ratio + 1.0).abs() < 1e-6);
        // N = 3: psi2 = sinh|r|/|r|, the approach to -1 is O(1/|r|).
        let p3 = hp(3);
        let ratio3 = psi2(-30.0, &p3).unwrap() / psi2_prime(-30.0, &p3).unwrap();
        let x: f64 = 30.0;
        let exact = -1.0 / (1.0 / x.tanh() - 1.0 / x);
        assert!((ratio3 - exact).abs() < 1e-12, "{ratio3} vs {exact}");
    }

    #[test]
    fn psi2_asymptotic_branch_is_continuous() {
        for n in [1, 2, 3, 5] {
            let p = hp(n);
            let below = psi2_log_derivative(-R_ASYM + 1e-12, &p).unwrap();
            let above = psi2_log_derivative(-R_ASYM - 1e-12, &p).unwrap();
            assert!((below - above).abs() < 1e-13, "N={n}: {below} vs {above}");
            let vb = psi2(-R_ASYM + 1e-12, &p).unwrap();
            let va = psi2(-R_ASYM - 1e-12, &p).unwrap();
            // ln psi2 moves by -q dr across the cut
            assert!(((va / vb).ln() + 2e-12 * below).abs() < 1e-13, "N={n}");
        }
        // N = 3 closed form deep in the asymptotic range.
        let x: f64 = 400.0;
        let q = psi2_log_derivative(-x, &hp(3)).unwrap();
        assert!((q + (1.0 / x.tanh() - 1.0 / x)).abs() < 1e-15);
    }

    #[test]
    fn first_zeros() {
        assert!((first_zero_psi1(&hp(1)).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((first_zero_psi1(&hp(2)).unwrap() - 2.404825557695773).abs() < 1e-12);
        assert!((first_zero_psi1(&hp(3)).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn reduced_log_derivatives_at_origin() {
        for n in 1..6 {
            let p = hp(n);
            let inv_n = 1.0 / f64::from(n);
            assert!((psi1_reduced_log_derivative(0.0, &p).unwrap() + inv_n).abs() < 1e-15);
            assert!((psi2_reduced_log_derivative(0.0, &p).unwrap() - inv_n).abs() < 1e-15);
        }
    }

    #[test]
    fn log_derivative_slope_matches_finite_differences() {
        let h = 1e-5;
        for n in [1, 2, 4] {
            let p = hp(n);
            for &r in &[0.3, 1.0, 1.4] {
                let s = psi1_reduced_log_derivative(r, &p).unwrap();
                let q = |t: f64| t * psi1_reduced_log_derivative(t, &p).unwrap();
                let fd = (q(r + h) - q(r - h)) / (2.0 * h);
                let exact = log_derivative_slope(r, s, -1.0, &p);
                assert!((fd - exact).abs() < 1e-8 * exact.abs().max(1.0), "psi1 N={n} r={r}: {fd} vs {exact}");
            }
            for &r in &[-0.3, -2.0, -20.0, -70.0] {
                let s = psi2_reduced_log_derivative(r, &p).unwrap();
                let q = |t: f64| psi2_log_derivative(t, &p).unwrap();
                let fd = (q(r + h) - q(r - h)) / (2.0 * h);
                let exact = log_derivative_slope(r, s, 1.0, &p);
                assert!((fd - exact).abs() < 1e-8 * exact.abs().max(1.0), "psi2 N={n} r={r}: {fd} vs {exact}");
            }
        }
    }
}
