//! The spreading speed `c*` as the first speed at which the field and
//! boundary regions of the dispersion plane touch, plus the limit regimes
//! (`D -> 0`, `D -> inf` after `sqrt(D)` rescaling, `R -> inf`).
//!
//! Every speed here comes out of the same machinery: a `beta`-window in
//! which both regions may be nonempty, the signed gap
//! `g(beta) = max(lo) - min(hi)` between their slices, and bisection in `c`
//! on the monotone predicate `min_beta g <= 0`.

use std::fmt;

use crate::dispersion::{field_slice, slice_gap, Dispersion, Edge, Params, Slice};
use crate::error::{Error, Result};

/// Points of the coarse `beta` grid.
pub const GRID_POINTS: usize = 512;
/// Absolute `beta` tolerance of the local refinement.
pub const BETA_TOL: f64 = 1e-12;
/// Relative width of the final `c` bracket.
pub const C_REL_TOL: f64 = 1e-8;
/// Mixed type when `|beta*| <= TIE_TOL_REL * beta_bar`, or when the
/// tangency point changes side across the final `c` bracket.
pub const TIE_TOL_REL: f64 = 1e-6;
/// Tolerance on the type inequality for the analytic classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

const C_SEED_FRACTION: f64 = 1e-6;
const MAX_DOUBLINGS: u32 = 40;
/// The grid stops this far (relative) below the pole of `chi1`.
const BETA_BAR_CUT: f64 = 1e-9;
/// Local minima of the coarse grid that get refined.
const REFINED_MINIMA: usize = 2;

/// Position of the tangency point relative to `beta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveType {
    /// `beta* > 0`: oscillatory cross-section profile `psi1`.
    Type1,
    /// `beta* < 0`: growing cross-section profile `psi2`.
    Type2,
    /// `beta* = 0`.
    Mixed,
}

impl fmt::Display for WaveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WaveType::Type1 => "Type1",
            WaveType::Type2 => "Type2",
            WaveType::Mixed => "Mixed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyResult {
    pub c_star: f64,
    pub beta_star: f64,
    pub alpha_star: f64,
    pub gamma_star: f64,
    pub wave_type: WaveType,
    /// Bound on `|g(beta*)|` at `c_star`, from the gaps at both ends of the
    /// final `c` bracket.
    pub overlap_tol: f64,
    /// Width of the final `c` bracket.
    pub c_tol: f64,
}

/// Limit speeds of the degenerate and half-space problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSpeeds {
    /// `lim_{D -> 0} c*`.
    pub c0: f64,
    /// `lim_{D -> inf} c* / sqrt(D)`.
    pub c_tilde2: f64,
    /// `lim_{R -> inf} c*`, the half-space speed.
    pub c_inf: f64,
}

/// Minimum of the gap over the `beta`-window at one speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMinimum {
    pub beta: f64,
    pub gap: f64,
    /// Midpoint between the two active edges.
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GapPoint {
    gap: f64,
    slope: f64,
    alpha: f64,
}

impl GapPoint {
    fn between(a: &Slice, b: &Slice) -> Self {
        let (gap, slope, alpha) = slice_gap(a, b);
        Self { gap, slope, alpha }
    }
}

/// A pair of regions in the `(beta, alpha)` plane that grow with `c`.
pub(crate) trait TangencyProblem {
    /// Reference speed for seeding the `c` bracket.
    fn speed_scale(&self) -> f64;
    /// `beta`-range where both slices can be nonempty; `None` if empty.
    fn window(&self, c: f64) -> Result<Option<(f64, f64)>>;
    fn gap(&self, c: f64, beta: f64) -> Result<Option<GapPoint>>;
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 || hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

fn golden_section<F>(mut a: f64, mut b: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Refine a grid minimum inside `[a, b]`. Uses the sign change of the
/// analytic slope when the bracket has one, golden section otherwise.
fn refine<P: TangencyProblem + ?Sized>(pb: &P, c: f64, a: f64, b: f64) -> Result<Option<(f64, GapPoint)>> {
    let ga = pb.gap(c, a)?;
    let gb = pb.gap(c, b)?;
    let slope_bracket = matches!((ga, gb), (Some(l), Some(r)) if l.slope < 0.0 && r.slope > 0.0);
    let beta = if slope_bracket {
        let mut lo = a;
        let mut hi = b;
        while hi - lo > BETA_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match pb.gap(c, mid)? {
                Some(g) if g.slope < 0.0 => lo = mid,
                Some(g) if g.slope > 0.0 => hi = mid,
                Some(_) => {
                    lo = mid;
                    hi = mid;
                }
                None => break,
            }
        }
        0.5 * (lo + hi)
    } else {
        golden_section(a, b, BETA_TOL, |x| Ok(pb.gap(c, x)?.map_or(f64::INFINITY, |g| g.gap)))?
    };
    Ok(pb.gap(c, beta)?.map(|g| (beta, g)))
}

/// Global minimum of the gap at speed `c`: coarse grid, then refinement of
/// the best local minima.
pub(crate) fn minimize_gap<P: TangencyProblem + ?Sized>(pb: &P, c: f64) -> Result<Option<GapMinimum>> {
    Ok(scan_gap(pb, c, false)?.map(|(m, _)| m))
}

/// Returns the minimum and whether the scan stopped early on a non-positive
/// grid value (only when `stop_on_overlap`).
fn scan_gap<P: TangencyProblem + ?Sized>(pb: &P, c: f64, stop_on_overlap: bool) -> Result<Option<(GapMinimum, bool)>> {
    let Some((lo, hi)) = pb.window(c)? else {
        return Ok(None);
    };
    if lo > hi {
        return Ok(None);
    }
    let betas = grid(lo, hi, GRID_POINTS);
    let mut vals: Vec<Option<GapPoint>> = Vec::with_capacity(betas.len());
    for &b in &betas {
        let g = pb.gap(c, b)?;
        if stop_on_overlap {
            if let Some(g) = g {
                if g.gap <= 0.0 {
                    return Ok(Some((GapMinimum { beta: b, gap: g.gap, alpha: g.alpha }, true)));
                }
            }
        }
        vals.push(g);
    }

    let value = |i: usize| vals.get(i).copied().flatten().map(|g| g.gap);
    let mut minima: Vec<usize> = (0..vals.len())
        .filter(|&i| {
            let Some(v) = value(i) else { return false };
            let left = i.checked_sub(1).and_then(value).is_none_or(|l| v <= l);
            let right = value(i + 1).is_none_or(|r| v <= r);
            left && right
        })
        .collect();
    if minima.is_empty() {
        return Ok(None);
    }
    minima.sort_by(|&i, &j| value(i).partial_cmp(&value(j)).unwrap_or(std::cmp::Ordering::Equal));

    let mut best: Option<GapMinimum> = None;
    let mut consider = |beta: f64, g: GapPoint| {
        if best.is_none_or(|m| g.gap < m.gap) {
            best = Some(GapMinimum { beta, gap: g.gap, alpha: g.alpha });
        }
    };
    for &i in minima.iter().take(REFINED_MINIMA) {
        let a = betas[i.saturating_sub(1)];
        let b = betas[(i + 1).min(betas.len() - 1)];
        if b > a {
            if let Some((beta, g)) = refine(pb, c, a, b)? {
                consider(beta, g);
            }
        }
        if let Some(g) = vals[i] {
            consider(betas[i], g);
        }
    }
    Ok(best.map(|m| (m, false)))
}

pub(crate) fn overlaps<P: TangencyProblem + ?Sized>(pb: &P, c: f64) -> Result<bool> {
    Ok(scan_gap(pb, c, true)?.is_some_and(|(m, _)| m.gap <= 0.0))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tangency {
    pub c: f64,
    pub min: GapMinimum,
    pub overlap_tol: f64,
    pub c_tol: f64,
    /// The minimizers at the two ends of the `c` bracket lie on opposite
    /// sides of `beta = 0`.
    pub straddles_zero: bool,
}

/// Bisection in `c` between a non-overlapping seed (`floor`, or a small
/// fraction of the speed scale) and the first doubling that overlaps.
pub(crate) fn find_tangency<P: TangencyProblem + ?Sized>(pb: &P, floor: Option<f64>) -> Result<Tangency> {
    let scale = pb.speed_scale();
    let mut lo = floor.unwrap_or(C_SEED_FRACTION * scale);
    if overlaps(pb, lo)? {
        return Err(Error::Bracket("tangency speed: regions overlap at the lower seed"));
    }
    let mut hi = scale.max(lo);
    let mut doublings = 0;
    while !overlaps(pb, hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Bracket("tangency speed: no overlap below the doubling cap"));
        }
    }
    while hi - lo > C_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if overlaps(pb, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    let at_hi = minimize_gap(pb, hi)?.ok_or(Error::Bracket("tangency point"))?;
    let at_lo = minimize_gap(pb, lo)?;
    let min = minimize_gap(pb, c)?.unwrap_or(at_hi);
    let overlap_tol = at_hi.gap.abs().max(at_lo.map_or(0.0, |m| m.gap.abs()));
    let straddles_zero = at_lo.is_some_and(|m| m.beta * at_hi.beta < 0.0);
    Ok(Tangency { c, min, overlap_tol, c_tol: hi - lo, straddles_zero })
}

/// The full problem: boundary region of `Sigma_D(c)` against field region of
/// `Sigma_d(c)`.
pub(crate) struct FullProblem<'a> {
    pub disp: &'a Dispersion,
}

impl TangencyProblem for FullProblem<'_> {
    fn speed_scale(&self) -> f64 {
        self.disp.c_kpp()
    }

    fn window(&self, c: f64) -> Result<Option<(f64, f64)>> {
        let top = self.disp.beta_tilde(c)?.min(self.disp.beta_bar() * (1.0 - BETA_BAR_CUT));
        let bottom = match self.disp.rho(c) {
            Some(rho) => -rho,
            None => self.disp.beta_hat(c).unwrap_or(0.0),
        };
        Ok((bottom <= top).then_some((bottom, top)))
    }

    fn gap(&self, c: f64, beta: f64) -> Result<Option<GapPoint>> {
        let Some(road) = self.disp.boundary_slice(c, beta)? else {
            return Ok(None);
        };
        Ok(field_slice(self.disp.params(), c, beta).map(|f| GapPoint::between(&road, &f)))
    }
}

/// `D -> 0`: the road region degenerates to `alpha >= chi1(beta) / c`.
struct FrozenRoadProblem<'a> {
    disp: &'a Dispersion,
}

impl TangencyProblem for FrozenRoadProblem<'_> {
    fn speed_scale(&self) -> f64 {
        self.disp.c_kpp()
    }

    fn window(&self, c: f64) -> Result<Option<(f64, f64)>> {
        let top = self.disp.beta_bar() * (1.0 - BETA_BAR_CUT);
        let bottom = self.disp.beta_hat(c).unwrap_or(0.0);
        Ok((bottom <= top).then_some((bottom, top)))
    }

    fn gap(&self, c: f64, beta: f64) -> Result<Option<GapPoint>> {
        let Some(field) = field_slice(self.disp.params(), c, beta) else {
            return Ok(None);
        };
        let road = Slice {
            lo: Edge {
                value: self.disp.chi1(beta)? / c,
                slope: self.disp.chi_slope(beta)? / c,
            },
            hi: Edge { value: f64::INFINITY, slope: 0.0 },
        };
        Ok(Some(GapPoint::between(&road, &field)))
    }
}

/// `D -> inf` in the variables `c~ = c / sqrt(D)`, `alpha~ = alpha sqrt(D)`:
/// the road curve becomes the `D = 1` boundary curve and the field region
/// becomes the epigraph of the parabola `alpha~ = (f0 -+ d beta^2) / c~`.
struct RescaledProblem {
    unit_road: Dispersion,
}

impl RescaledProblem {
    fn parabola(&self, c: f64, beta: f64) -> Edge {
        let p = self.unit_road.params();
        let sign = if beta >= 0.0 { -1.0 } else { 1.0 };
        Edge {
            value: (p.f0 + sign * p.d_field * beta * beta) / c,
            slope: sign * 2.0 * p.d_field * beta / c,
        }
    }
}

impl TangencyProblem for RescaledProblem {
    fn speed_scale(&self) -> f64 {
        self.unit_road.c_kpp()
    }

    fn window(&self, c: f64) -> Result<Option<(f64, f64)>> {
        let p = self.unit_road.params();
        let top = self
            .unit_road
            .beta_tilde(c)?
            .min(self.unit_road.beta_bar() * (1.0 - BETA_BAR_CUT));
        // chi2 >= -mu bounds the road slice by (c + sqrt(c^2 + 4 mu)) / 2.
        let cap = 0.5 * (c + (c * c + 4.0 * p.mu).sqrt());
        let excess = c * cap - p.f0;
        let bottom = if excess > 0.0 {
            -(excess / p.d_field).sqrt() * (1.0 + 1e-9)
        } else {
            0.0
        };
        Ok((bottom <= top).then_some((bottom, top)))
    }

    fn gap(&self, c: f64, beta: f64) -> Result<Option<GapPoint>> {
        let Some(road) = self.unit_road.boundary_slice(c, beta)? else {
            return Ok(None);
        };
        let field = Slice {
            lo: self.parabola(c, beta),
            hi: Edge { value: f64::INFINITY, slope: 0.0 },
        };
        Ok(Some(GapPoint::between(&road, &field)))
    }
}

/// Half-space limit: `chi` is replaced by `mu d beta / (nu - d beta)` on
/// `beta <= 0` and only the half-disk of the field curve remains.
struct HalfSpaceProblem {
    params: Params,
}

impl TangencyProblem for HalfSpaceProblem {
    fn speed_scale(&self) -> f64 {
        self.params.c_kpp()
    }

    fn window(&self, c: f64) -> Result<Option<(f64, f64)>> {
        let ck = self.params.c_kpp();
        if c < ck {
            return Ok(None);
        }
        let rho = ((c - ck) * (c + ck)).sqrt() / (2.0 * self.params.d_field);
        Ok(Some((-rho, 0.0)))
    }

    fn gap(&self, c: f64, beta: f64) -> Result<Option<GapPoint>> {
        let p = &self.params;
        let Some(field) = field_slice(p, c, beta.min(-0.0)) else {
            return Ok(None);
        };
        let den = p.nu - p.d_field * beta;
        let chi = p.mu * p.d_field * beta / den;
        let dchi = p.mu * p.d_field * p.nu / (den * den);
        let s = (c * c - 4.0 * p.d_road * chi).sqrt();
        let road = Slice {
            lo: Edge { value: 0.0, slope: 0.0 },
            hi: Edge {
                value: (c + s) / (2.0 * p.d_road),
                slope: -dchi / s,
            },
        };
        Ok(Some(GapPoint::between(&road, &field)))
    }
}

/// Minimum over `beta` of the signed gap between the two regions at speed
/// `c`; `None` when the common `beta`-window is empty.
pub fn min_gap(disp: &Dispersion, c: f64) -> Result<Option<GapMinimum>> {
    minimize_gap(&FullProblem { disp }, c)
}

/// Whether the boundary and field regions intersect at speed `c`.
pub fn regions_overlap(disp: &Dispersion, c: f64) -> Result<bool> {
    if !(c > 0.0) {
        return Err(Error::Domain { what: "c", value: c });
    }
    overlaps(&FullProblem { disp }, c)
}

/// The spreading speed `c*` and its tangency point.
pub fn solve_cstar(p: &Params) -> Result<TangencyResult> {
    let disp = Dispersion::new(*p)?;
    solve_with(&disp)
}

pub fn solve_with(disp: &Dispersion) -> Result<TangencyResult> {
    let t = find_tangency(&FullProblem { disp }, None)?;
    let tie = TIE_TOL_REL * disp.beta_bar();
    let (c, alpha, beta) = if t.straddles_zero || t.min.beta.abs() <= tie {
        (t.c, t.min.alpha, t.min.beta)
    } else {
        polish(disp, &t).unwrap_or((t.c, t.min.alpha, t.min.beta))
    };
    // At beta* = 0 the contact is of fourth order, so beta* itself is only
    // resolved to about cbrt(c_tol); the sign flip across the bracket is the
    // sharper test.
    let wave_type = if t.straddles_zero || beta.abs() <= tie {
        WaveType::Mixed
    } else if beta > tie {
        WaveType::Type1
    } else {
        WaveType::Type2
    };
    Ok(TangencyResult {
        c_star: c,
        beta_star: beta,
        alpha_star: alpha,
        gamma_star: disp.gamma_coef(beta)?,
        wave_type,
        overlap_tol: t.overlap_tol,
        c_tol: t.c_tol,
    })
}

/// Newton iteration on the tangency system in `(c, alpha, beta)`:
/// both dispersion relations hold and their gradients are parallel.
///
/// Where one curve is much steeper than the other, the gap minimizer at the
/// bisected `c` can sit far from both curves although `c` itself is accurate;
/// this recovers the contact point. Returns `None` unless the iteration
/// converges inside the `c` bracket without changing the side of `beta = 0`.
fn polish(disp: &Dispersion, t: &Tangency) -> Option<(f64, f64, f64)> {
    let p = disp.params();
    let (d, big_d) = (p.d_field, p.d_road);
    let side = t.min.beta.signum();
    let limit = disp.beta_bar();
    let system = |c: f64, a: f64, b: f64| -> Option<([f64; 3], [[f64; 3]; 3])> {
        if b * side <= 0.0 || b >= limit {
            return None;
        }
        let chi = disp.chi(b).ok()?;
        let dchi = disp.chi_slope(b).ok()?;
        let h = 1e-6 * b.abs().min(limit - b);
        let ddchi = (disp.chi_slope(b + h).ok()? - disp.chi_slope(b - h).ok()?) / (2.0 * h);
        let ab = b.abs();
        let f = [
            -d * a * a + d * b * ab + c * a - p.f0,
            -big_d * a * a + c * a - chi,
            -(c - 2.0 * d * a) * dchi - 2.0 * d * ab * (c - 2.0 * big_d * a),
        ];
        let jac = [
            [a, c - 2.0 * d * a, 2.0 * d * ab],
            [a, c - 2.0 * big_d * a, -dchi],
            [
                -dchi - 2.0 * d * ab,
                2.0 * d * dchi + 4.0 * d * big_d * ab,
                -(c - 2.0 * d * a) * ddchi - 2.0 * d * side * (c - 2.0 * big_d * a),
            ],
        ];
        Some((f, jac))
    };

    let (mut c, mut a, mut b) = (t.c, t.min.alpha, t.min.beta);
    let (mut f, mut jac) = system(c, a, b)?;
    for _ in 0..60 {
        let mut step = solve3(jac, f)?;
        // halve until the trial point is back inside the domain
        let mut trial = None;
        for _ in 0..60 {
            let (tc, ta, tb) = (c - step[0], a - step[1], b - step[2]);
            if let Some(next) = system(tc, ta, tb) {
                trial = Some((tc, ta, tb, next));
                break;
            }
            step = step.map(|x| 0.5 * x);
        }
        let (tc, ta, tb, next) = trial?;
        let done = (tc - c).abs() <= 4.0 * f64::EPSILON * c
            && (ta - a).abs() <= 4.0 * f64::EPSILON * a.abs()
            && (tb - b).abs() <= 4.0 * f64::EPSILON * b.abs();
        (c, a, b) = (tc, ta, tb);
        (f, jac) = next;
        if done {
            break;
        }
    }
    // chi is evaluated near its pole, where rounding in beta is amplified by chi'
    let scale = c * c + p.f0;
    let chi_noise = 64.0 * f64::EPSILON * (jac[1][2] * b).abs();
    let converged = f[0].abs() <= 1e-12 * scale && f[1].abs() <= 1e-12 * scale + chi_noise;
    let inside = (c - t.c).abs() <= t.c_tol.max(1e-14 * t.c);
    (converged && inside).then_some((c, a, b))
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for k in 0..3 {
        let piv = (k..3).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))?;
        if m[piv][k] == 0.0 || !m[piv][k].is_finite() {
            return None;
        }
        m.swap(k, piv);
        rhs.swap(k, piv);
        for i in k + 1..3 {
            let factor = m[i][k] / m[k][k];
            let pivot_row = m[k];
            for (a, b) in m[i][k..].iter_mut().zip(&pivot_row[k..]) {
                *a -= factor * b;
            }
            rhs[i] -= factor * rhs[k];
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let tail: f64 = (k + 1..3).map(|j| m[k][j] * x[j]).sum();
        x[k] = (rhs[k] - tail) / m[k][k];
    }
    Some(x)
}

/// Residuals of the plane-wave system at a solver output.
pub fn tangency_residuals(p: &Params, t: &TangencyResult) -> Result<[f64; 3]> {
    Dispersion::new(*p)?.residuals(t.c_star, t.alpha_star, t.beta_star, t.gamma_star)
}

/// Type from the sign of `2d/D - (1 - N nu / (mu R))`.
pub fn classify_type(p: &Params) -> WaveType {
    let lhs = 2.0 * p.d_field / p.d_road;
    let rhs = 1.0 - f64::from(p.dim) * p.nu / (p.mu * p.radius);
    let diff = lhs - rhs;
    if diff.abs() <= CLASSIFY_TOL {
        WaveType::Mixed
    } else if diff > 0.0 {
        WaveType::Type1
    } else {
        WaveType::Type2
    }
}

/// Radius maximizing `c*` and the maximal speed, defined when `D > 2d`.
pub fn r_max(p: &Params) -> Result<(f64, f64)> {
    let (d, big_d) = (p.d_field, p.d_road);
    if !(big_d > 2.0 * d) {
        return Err(Error::Domain { what: "D (r_max needs D > 2d)", value: big_d });
    }
    let r_m = f64::from(p.dim) * big_d * p.nu / ((big_d - 2.0 * d) * p.mu);
    let c_m = big_d * p.c_kpp() / (4.0 * d * (big_d - d)).sqrt();
    Ok((r_m, c_m))
}

/// `lim_{D -> 0} c*`: first contact of `alpha = chi1(beta)/c` with the field
/// region.
pub fn limit_c0(p: &Params) -> Result<f64> {
    let disp = Dispersion::new(*p)?;
    Ok(find_tangency(&FrozenRoadProblem { disp: &disp }, None)?.c)
}

/// `lim_{D -> inf} c* / sqrt(D)`.
pub fn limit_ctilde(p: &Params) -> Result<f64> {
    let unit_road = Dispersion::new(p.with_road_diffusion(1.0))?;
    Ok(find_tangency(&RescaledProblem { unit_road }, None)?.c)
}

/// `lim_{R -> inf} c*`: `c_KPP` when `D <= 2d`, the half-space tangency
/// speed otherwise.
pub fn limit_cinf(p: &Params) -> Result<f64> {
    p.validate()?;
    let ck = p.c_kpp();
    if p.d_road <= 2.0 * p.d_field {
        return Ok(ck);
    }
    Ok(find_tangency(&HalfSpaceProblem { params: *p }, Some(ck))?.c)
}

pub fn limit_speeds(p: &Params) -> Result<LimitSpeeds> {
    Ok(LimitSpeeds {
        c0: limit_c0(p)?,
        c_tilde2: limit_ctilde(p)?,
        c_inf: limit_cinf(p)?,
    })
}
