//! Plane-wave dispersion curves of the linearized problem.
//!
//! A plane wave `e^{alpha (x + c t)} (1, gamma phi(beta, y))` solves the
//! linearization at zero when `(beta, alpha)` lies on two curves at once:
//!
//! * the *field* curve, from the bulk equation: a hyperbola for `beta >= 0`
//!   and a half-circle of radius `rho(c)` for `beta < 0`;
//! * the *boundary* curve, from the road equation after eliminating `gamma`
//!   through the exchange condition: `-D alpha^2 + c alpha = chi(beta)`.
//!
//! Both are handled here as `beta`-indexed slices `[lo, hi]` of the regions
//! they bound in the upper half-plane, which is all the tangency search needs.

use crate::error::{Error, Result};
use crate::specfun::{self, HypParams};

/// Relative slack on discriminants: values in `[-DISC_SLACK c^2, 0)` count as
/// zero so that degenerate slices at the tangency are not lost to rounding.
const DISC_SLACK: f64 = 1e-14;

/// Physical parameters of the field/road system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// `d`, diffusivity in the field.
    pub d_field: f64,
    /// `D`, diffusivity on the boundary.
    pub d_road: f64,
    /// `mu`, rate of leaving the boundary for the field.
    pub mu: f64,
    /// `nu`, rate of joining the boundary from the field.
    pub nu: f64,
    /// `R`, cylinder radius.
    pub radius: f64,
    /// `N`, dimension of the cross-section.
    pub dim: u32,
    /// `f'(0)`.
    pub f0: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            d_field: 1.0,
            d_road: 1.0,
            mu: 1.0,
            nu: 1.0,
            radius: 1.0,
            dim: 1,
            f0: 1.0,
        }
    }
}

impl Params {
    pub fn new(d_field: f64, d_road: f64, mu: f64, nu: f64, radius: f64, dim: u32, f0: f64) -> Result<Self> {
        let p = Self { d_field, d_road, mu, nu, radius, dim, f0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("d", self.d_field),
            ("D", self.d_road),
            ("mu", self.mu),
            ("nu", self.nu),
            ("R", self.radius),
            ("f0", self.f0),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.dim == 0 {
            return Err(Error::InvalidParams("N must be >= 1".into()));
        }
        Ok(())
    }

    /// Free-space Fisher-KPP speed `2 sqrt(d f'(0))`.
    pub fn c_kpp(&self) -> f64 {
        2.0 * (self.d_field * self.f0).sqrt()
    }

    pub fn with_road_diffusion(self, d_road: f64) -> Self {
        Self { d_road, ..self }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        Self { radius, ..self }
    }
}

/// Admissible `alpha` range at fixed `beta`, clipped to `alpha >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AlphaInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    /// `max(lo) - min(hi)`: non-positive iff the intervals intersect.
    pub fn gap(&self, other: &Self) -> f64 {
        self.lo.max(other.lo) - self.hi.min(other.hi)
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.gap(other) <= 0.0
    }

    pub fn contains(&self, alpha: f64) -> bool {
        self.lo <= alpha && alpha <= self.hi
    }

    /// Containment with an absolute slack `tol` on both ends.
    pub fn within(&self, outer: &Self, tol: f64) -> bool {
        outer.lo - tol <= self.lo && self.hi <= outer.hi + tol
    }
}

/// Both region slices at one `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub beta: f64,
    /// Slice of the field region (`Sigma_d`), if defined at `beta`.
    pub field: Option<AlphaInterval>,
    /// Slice of the boundary region (`Sigma_D`), if defined at `beta`.
    pub boundary: Option<AlphaInterval>,
}

/// An interval endpoint together with its `beta`-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Edge {
    pub value: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Slice {
    pub lo: Edge,
    pub hi: Edge,
}

impl Slice {
    pub fn interval(&self) -> AlphaInterval {
        // the edges coincide at a double root, up to rounding
        AlphaInterval::new(self.lo.value.min(self.hi.value), self.hi.value)
    }
}

/// `max(lo) - min(hi)` of two slices with the slope of whichever edges are
/// active, and the midpoint between those edges.
pub(crate) fn slice_gap(a: &Slice, b: &Slice) -> (f64, f64, f64) {
    let lo = if a.lo.value >= b.lo.value { a.lo } else { b.lo };
    let hi = if a.hi.value <= b.hi.value { a.hi } else { b.hi };
    (lo.value - hi.value, lo.slope - hi.slope, 0.5 * (lo.value + hi.value))
}

/// `chi` and its derivative, written through `w = d beta psi'(beta R)/psi(beta R)`
/// as `chi = -mu w / (w + nu)`.
#[derive(Debug, Clone, Copy)]
struct Coupling {
    w: f64,
    dw: f64,
}

/// Dispersion data for one parameter set, with the structural thresholds
/// (`R1`, `beta_bar`) computed once.
#[derive(Debug, Clone)]
pub struct Dispersion {
    params: Params,
    hyp: HypParams,
    r1: f64,
    beta_bar: f64,
}

impl Dispersion {
    pub fn new(params: Params) -> Result<Self> {
        params.validate()?;
        let hyp = HypParams::for_dimension(params.dim)?;
        let r1 = specfun::first_zero_psi1(&hyp)?;
        let beta_bar = beta_bar_with(&params, &hyp, r1)?;
        Ok(Self { params, hyp, r1, beta_bar })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn hyp(&self) -> &HypParams {
        &self.hyp
    }

    /// First zero `R1` of `psi1`.
    pub fn r1(&self) -> f64 {
        self.r1
    }

    /// Upper end of the admissible `beta >= 0` range; `chi1` blows up there.
    pub fn beta_bar(&self) -> f64 {
        self.beta_bar
    }

    pub fn c_kpp(&self) -> f64 {
        self.params.c_kpp()
    }

    fn coupling(&self, beta: f64) -> Result<Coupling> {
        let p = &self.params;
        let r = beta * p.radius;
        let (s, sign) = if beta >= 0.0 {
            (specfun::psi1_reduced_log_derivative(r, &self.hyp)?, -1.0)
        } else {
            (specfun::psi2_reduced_log_derivative(r, &self.hyp)?, 1.0)
        };
        let q = r * s;
        let dq = specfun::log_derivative_slope(r, s, sign, &self.hyp);
        Ok(Coupling {
            w: p.d_field * p.radius * beta * beta * s,
            dw: p.d_field * (q + r * dq),
        })
    }

    fn chi_from(&self, c: Coupling) -> f64 {
        -self.params.mu * c.w / (c.w + self.params.nu)
    }

    fn chi_slope_from(&self, c: Coupling) -> f64 {
        let den = c.w + self.params.nu;
        -self.params.mu * self.params.nu * c.dw / (den * den)
    }

    /// `chi1(beta) = -mu d beta psi1'(beta R) / (d beta psi1'(beta R) + nu psi1(beta R))`
    /// on `[0, beta_bar)`: zero at the origin, increasing, unbounded at `beta_bar`.
    pub fn chi1(&self, beta: f64) -> Result<f64> {
        if !(0.0..self.beta_bar).contains(&beta) {
            return Err(Error::Domain { what: "beta (chi1 needs 0 <= beta < beta_bar)", value: beta });
        }
        Ok(self.chi_from(self.coupling(beta)?))
    }

    /// `chi2(beta)` on `beta <= 0`: negative, increasing, tends to `-mu`.
    pub fn chi2(&self, beta: f64) -> Result<f64> {
        if !(beta <= 0.0) {
            return Err(Error::Domain { what: "beta (chi2 needs beta <= 0)", value: beta });
        }
        Ok(self.chi_from(self.coupling(beta)?))
    }

    /// `chi1` for `beta >= 0`, `chi2` for `beta < 0`.
    pub fn chi(&self, beta: f64) -> Result<f64> {
        if beta >= 0.0 {
            self.chi1(beta)
        } else {
            self.chi2(beta)
        }
    }

    pub fn chi_slope(&self, beta: f64) -> Result<f64> {
        if beta >= self.beta_bar {
            return Err(Error::Domain { what: "beta (chi needs beta < beta_bar)", value: beta });
        }
        Ok(self.chi_slope_from(self.coupling(beta)?))
    }

    /// `chi1` continued as `+inf` where rounding pushes the denominator
    /// through zero just below `beta_bar`.
    fn chi1_saturating(&self, beta: f64) -> Result<f64> {
        if beta >= self.beta_bar {
            return Ok(f64::INFINITY);
        }
        let c = self.coupling(beta)?;
        if c.w + self.params.nu <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.chi_from(c))
    }

    /// Wave amplitude `gamma = mu / (d beta psi'(beta R) + nu psi(beta R))`.
    pub fn gamma_coef(&self, beta: f64) -> Result<f64> {
        if beta >= self.beta_bar {
            return Err(Error::Domain { what: "beta (gamma needs beta < beta_bar)", value: beta });
        }
        let p = &self.params;
        let r = beta * p.radius;
        let psi = if beta >= 0.0 {
            specfun::psi1(r, &self.hyp)?
        } else {
            specfun::psi2(r, &self.hyp)?
        };
        let c = self.coupling(beta)?;
        Ok(p.mu / (psi * (c.w + p.nu)))
    }

    /// Unique `beta` in `(0, beta_bar)` with `c^2 = 4 D chi1(beta)`.
    pub fn beta_tilde(&self, c: f64) -> Result<f64> {
        check_speed(c)?;
        let target = c * c / (4.0 * self.params.d_road);
        specfun::bisect(0.0, self.beta_bar, 1e-15 * self.beta_bar, |b| {
            Ok(self.chi1_saturating(b)? < target)
        })
    }

    /// For `c < c_KPP`, the hyperbola vertex `sqrt(c_KPP^2 - c^2) / (2d)`.
    pub fn beta_hat(&self, c: f64) -> Option<f64> {
        let ck = self.c_kpp();
        (c < ck).then(|| ((ck - c) * (ck + c)).sqrt() / (2.0 * self.params.d_field))
    }

    /// For `c >= c_KPP`, the half-circle radius `sqrt(c^2 - c_KPP^2) / (2d)`.
    pub fn rho(&self, c: f64) -> Option<f64> {
        let ck = self.c_kpp();
        (c >= ck).then(|| ((c - ck) * (c + ck)).sqrt() / (2.0 * self.params.d_field))
    }

    /// Slice of the region bounded by `Sigma_D(c)`.
    pub fn boundary_interval(&self, c: f64, beta: f64) -> Option<AlphaInterval> {
        self.boundary_slice(c, beta).ok().flatten().map(|s| s.interval())
    }

    /// Slice of the region bounded by `Sigma_d(c)`.
    pub fn field_interval(&self, c: f64, beta: f64) -> Option<AlphaInterval> {
        field_slice(&self.params, c, beta).map(|s| s.interval())
    }

    pub(crate) fn boundary_slice(&self, c: f64, beta: f64) -> Result<Option<Slice>> {
        if !(c > 0.0) || beta >= self.beta_bar {
            return Ok(None);
        }
        let big_d = self.params.d_road;
        let cp = self.coupling(beta)?;
        if beta >= 0.0 && cp.w + self.params.nu <= 0.0 {
            return Ok(None);
        }
        let chi = self.chi_from(cp);
        let dchi = self.chi_slope_from(cp);
        let mut disc = c * c - 4.0 * big_d * chi;
        if disc < 0.0 {
            if disc < -DISC_SLACK * c * c {
                return Ok(None);
            }
            disc = 0.0;
        }
        let s = disc.sqrt();
        let hi = Edge {
            value: (c + s) / (2.0 * big_d),
            slope: -ratio(dchi, s),
        };
        let lo = if beta >= 0.0 {
            Edge {
                value: 2.0 * chi / (c + s),
                slope: ratio(dchi, s),
            }
        } else {
            Edge { value: 0.0, slope: 0.0 }
        };
        Ok(Some(Slice { lo, hi }))
    }

    /// `boundary_interval` and `field_interval` on a strictly increasing grid.
    pub fn sample_curves(&self, c: f64, grid: &[f64]) -> Result<Vec<CurveSample>> {
        check_speed(c)?;
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParams("beta grid must be strictly increasing".into()));
        }
        grid.iter()
            .map(|&beta| {
                Ok(CurveSample {
                    beta,
                    field: self.field_interval(c, beta),
                    boundary: self.boundary_slice(c, beta)?.map(|s| s.interval()),
                })
            })
            .collect()
    }

    /// Residuals of the three plane-wave equations at `(c, alpha, beta, gamma)`:
    /// bulk equation, road equation, exchange condition.
    pub fn residuals(&self, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<[f64; 3]> {
        let p = &self.params;
        let r = beta * p.radius;
        let d = p.d_field;
        let bulk_sign = if beta >= 0.0 { 1.0 } else { -1.0 };
        let bulk = -d * alpha * alpha + bulk_sign * d * beta * beta + c * alpha - p.f0;
        if beta >= 0.0 {
            let psi = specfun::psi1(r, &self.hyp)?;
            let dpsi = specfun::psi1_prime(r, &self.hyp)?;
            let road = -p.d_road * alpha * alpha + c * alpha - (p.nu * gamma * psi - p.mu);
            let exchange = d * gamma * beta * dpsi - (p.mu - p.nu * gamma * psi);
            Ok([bulk, road, exchange])
        } else {
            let road = -p.d_road * alpha * alpha + c * alpha - self.chi2(beta)?;
            let psi = specfun::psi2(r, &self.hyp)?;
            let dpsi = specfun::psi2_prime(r, &self.hyp)?;
            let exchange = gamma - p.mu / (d * beta * dpsi + p.nu * psi);
            Ok([bulk, road, exchange])
        }
    }
}

/// `a / b` for a square-root denominator that may vanish at a degenerate slice.
fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else if a == 0.0 {
        0.0
    } else {
        a.signum() * f64::INFINITY
    }
}

fn check_speed(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "c", value: c })
    }
}

/// Field-region slice: between the hyperbola branches for `beta >= 0`, the
/// vertical chord of the half-disk for `beta < 0`.
pub(crate) fn field_slice(p: &Params, c: f64, beta: f64) -> Option<Slice> {
    if !(c > 0.0) {
        return None;
    }
    let d = p.d_field;
    let ck2 = 4.0 * d * p.f0;
    if beta >= 0.0 {
        let mut disc = c * c - ck2 + 4.0 * d * d * beta * beta;
        if disc < 0.0 {
            if disc < -DISC_SLACK * c * c {
                return None;
            }
            disc = 0.0;
        }
        let s = disc.sqrt();
        let slope = ratio(2.0 * d * beta, s);
        let lo = (ck2 - 4.0 * d * d * beta * beta) / (2.0 * d * (c + s));
        let lo = if lo >= 0.0 {
            Edge { value: lo, slope: -slope }
        } else {
            Edge { value: 0.0, slope: 0.0 }
        };
        Some(Slice {
            lo,
            hi: Edge { value: (c + s) / (2.0 * d), slope },
        })
    } else {
        if c * c < ck2 {
            return None;
        }
        let rho2 = (c * c - ck2) / (4.0 * d * d);
        let mut t2 = rho2 - beta * beta;
        if t2 < 0.0 {
            if t2 < -DISC_SLACK * (c * c) / (4.0 * d * d) {
                return None;
            }
            t2 = 0.0;
        }
        let t = t2.sqrt();
        let mid = c / (2.0 * d);
        Some(Slice {
            lo: Edge { value: mid - t, slope: ratio(beta, t) },
            hi: Edge { value: mid + t, slope: -ratio(beta, t) },
        })
    }
}

/// First positive zero of `r -> d r psi1'(r R) + nu psi1(r R)`, in `(0, R1/R)`.
pub fn beta_bar(p: &Params) -> Result<f64> {
    p.validate()?;
    let hyp = HypParams::for_dimension(p.dim)?;
    let r1 = specfun::first_zero_psi1(&hyp)?;
    beta_bar_with(p, &hyp, r1)
}

fn beta_bar_with(p: &Params, hyp: &HypParams, r1: f64) -> Result<f64> {
    let top = r1 / p.radius;
    // psi1 > 0 on [0, R1), so the sign is that of w + nu.
    specfun::bisect(0.0, top, 1e-15 * top, |b| {
        let s = specfun::psi1_reduced_log_derivative(b * p.radius, hyp)?;
        Ok(p.d_field * p.radius * b * b * s + p.nu > 0.0)
    })
}
