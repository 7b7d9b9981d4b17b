//! Explicit finite differences for the strip `|y| < R` bounded by two roads
//! at `y = R` (density `u`) and `y = -R` (density `u_til`).
//!
//! The field `v` is stored row-major by `x`: `v[i * ny + j]` sits at
//! `x_i = -L + i dx`, `y_j = -R + j dy`. The Robin exchange conditions are
//! closed with ghost rows and the ends `x = -L, L` are homogeneous Neumann,
//! which makes the trapezoidal mass exactly conserved when `f = 0`.

use crate::dispersion::Params;
use crate::error::{Error, Result};

/// Fraction of the diffusive stability limit allowed for `dt`.
pub const CFL_SAFETY: f64 = 0.4;
/// Width of the band near `x = L` excluded from the speed fit, as a fraction of `L`.
pub const GUARD_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reaction {
    /// `f(v) = f0 v (1 - v)`.
    Logistic,
    /// `f = 0`, pure exchange and diffusion.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `v = amplitude cos^2(pi x / (2 half_width))` for `|x| < half_width`,
    /// constant in `y`; both roads empty.
    Bump { amplitude: f64, half_width: f64 },
    /// Explicit grids in the storage layout of [`SimState`].
    Custom { v: Vec<f64>, u: Vec<f64>, u_til: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Model parameters; `dim` is ignored, the strip is the `N = 1` case.
    pub params: Params,
    /// Half-length `L` of the truncated domain `[-L, L]`.
    pub half_length: f64,
    pub nx: usize,
    pub ny: usize,
    /// Maximal time step; `None` uses the stability bound.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub reaction: Reaction,
    /// Level of the tracked front, in `(0, 1)`.
    pub level: f64,
    pub init: InitialData,
    /// Time between recorded samples.
    pub output_dt: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            params: Params::default(),
            half_length: 150.0,
            nx: 1501,
            ny: 21,
            dt: None,
            t_end: 60.0,
            reaction: Reaction::Logistic,
            level: 0.5,
            init: InitialData::Bump { amplitude: 1.0, half_width: 5.0 },
            output_dt: 0.5,
        }
    }
}

impl SimConfig {
    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.params.radius / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_length + self.dx() * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * (self.ny - 1) as f64) * self.dy()
    }

    /// Largest stable explicit step, with safety factor [`CFL_SAFETY`].
    pub fn cfl_bound(&self) -> f64 {
        let h2 = self.dx().powi(2).min(self.dy().powi(2));
        CFL_SAFETY * h2 / (2.0 * self.params.d_field.max(self.params.d_road))
    }

    /// The step actually used as an upper bound.
    pub fn time_step(&self) -> Result<f64> {
        let bound = self.cfl_bound();
        match self.dt {
            None => Ok(bound),
            Some(dt) if !(dt > 0.0) || !dt.is_finite() => Err(Error::Domain { what: "dt", value: dt }),
            Some(dt) if dt > bound => Err(Error::Cfl { dt, bound }),
            Some(dt) => Ok(dt),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::InvalidParams(format!(
                "grid needs nx, ny >= 3 (got {}, {})",
                self.nx, self.ny
            )));
        }
        for (what, value) in [
            ("L", self.half_length),
            ("t_end", self.t_end),
            ("output_dt", self.output_dt),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Domain { what, value });
            }
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Domain { what: "level", value: self.level });
        }
        match &self.init {
            InitialData::Bump { amplitude, half_width } => {
                if !(*amplitude >= 0.0 && *amplitude <= 1.0) {
                    return Err(Error::Domain { what: "bump amplitude", value: *amplitude });
                }
                if !(*half_width > 0.0 && *half_width < 0.25 * self.half_length) {
                    return Err(Error::Domain { what: "bump half-width", value: *half_width });
                }
            }
            InitialData::Custom { v, u, u_til } => {
                if v.len() != self.nx * self.ny || u.len() != self.nx || u_til.len() != self.nx {
                    return Err(Error::InvalidParams("custom initial data has the wrong shape".into()));
                }
            }
        }
        self.time_step().map(|_| ())
    }
}

/// Stability bound of `cfg`, see [`SimConfig::cfl_bound`].
pub fn cfl_bound(cfg: &SimConfig) -> f64 {
    cfg.cfl_bound()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub u_til: Vec<f64>,
    pub t: f64,
    nx: usize,
    ny: usize,
}

impl SimState {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            v: vec![0.0; nx * ny],
            u: vec![0.0; nx],
            u_til: vec![0.0; nx],
            t: 0.0,
            nx,
            ny,
        }
    }

    /// Constant state `v = v0`, `u = u_til = u0`.
    pub fn uniform(nx: usize, ny: usize, v0: f64, u0: f64) -> Self {
        Self {
            v: vec![v0; nx * ny],
            u: vec![u0; nx],
            u_til: vec![u0; nx],
            t: 0.0,
            nx,
            ny,
        }
    }

    pub fn initial(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let mut s = Self::zeros(cfg.nx, cfg.ny);
        match &cfg.init {
            InitialData::Bump { amplitude, half_width } => {
                for i in 0..cfg.nx {
                    let x = cfg.x(i);
                    if x.abs() < *half_width {
                        let val = amplitude * (std::f64::consts::FRAC_PI_2 * x / half_width).cos().powi(2);
                        s.v[i * cfg.ny..(i + 1) * cfg.ny].fill(val);
                    }
                }
            }
            InitialData::Custom { v, u, u_til } => {
                s.v.copy_from_slice(v);
                s.u.copy_from_slice(u);
                s.u_til.copy_from_slice(u_til);
            }
        }
        Ok(s)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn v_at(&self, i: usize, j: usize) -> f64 {
        self.v[i * self.ny + j]
    }

    /// Column `x_i` of the field.
    pub fn column(&self, i: usize) -> &[f64] {
        &self.v[i * self.ny..(i + 1) * self.ny]
    }

    pub fn is_finite(&self) -> bool {
        self.v.iter().chain(&self.u).chain(&self.u_til).all(|x| x.is_finite())
    }

    /// Field value at `(0, 0)`, averaging the nearest grid nodes when the
    /// origin falls between them.
    pub fn v_center(&self) -> f64 {
        let (i0, i1) = center_pair(self.nx);
        let (j0, j1) = center_pair(self.ny);
        0.25 * (self.v_at(i0, j0) + self.v_at(i0, j1) + self.v_at(i1, j0) + self.v_at(i1, j1))
    }

    /// Top road density at `x = 0`.
    pub fn u_center(&self) -> f64 {
        let (i0, i1) = center_pair(self.nx);
        0.5 * (self.u[i0] + self.u[i1])
    }
}

fn center_pair(n: usize) -> (usize, usize) {
    ((n - 1) / 2, n / 2)
}

/// Scratch buffers and coefficients for repeated steps.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: SimConfig,
    state: SimState,
    next: SimState,
    dt_max: f64,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        let state = SimState::initial(&cfg)?;
        Self::with_state(cfg, state)
    }

    pub fn with_state(cfg: SimConfig, state: SimState) -> Result<Self> {
        cfg.validate()?;
        if state.nx != cfg.nx || state.ny != cfg.ny {
            return Err(Error::InvalidParams("state shape does not match the grid".into()));
        }
        let dt_max = cfg.time_step()?;
        let next = state.clone();
        Ok(Self { cfg, state, next, dt_max })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn into_state(self) -> SimState {
        self.state
    }

    pub fn dt(&self) -> f64 {
        self.dt_max
    }

    /// One explicit Euler step of size `dt` (not checked against the bound).
    pub fn step_by(&mut self, dt: f64) {
        euler_step(&self.cfg, &self.state, &mut self.next, dt);
        std::mem::swap(&mut self.state, &mut self.next);
    }

    pub fn step(&mut self) {
        self.step_by(self.dt_max);
    }

    /// Advance by `span` in equal steps no larger than the stability bound,
    /// then check for non-finite values.
    pub fn advance(&mut self, span: f64) -> Result<()> {
        if span <= 0.0 {
            return Ok(());
        }
        let t_target = self.state.t + span;
        let n = (span / self.dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let dt = span / n as f64;
        for _ in 0..n {
            self.step_by(dt);
        }
        self.state.t = t_target;
        if !self.state.is_finite() {
            return Err(Error::BlowUp { t: self.state.t });
        }
        Ok(())
    }
}

fn euler_step(cfg: &SimConfig, s: &SimState, out: &mut SimState, dt: f64) {
    let p = &cfg.params;
    let (nx, ny) = (cfg.nx, cfg.ny);
    let dy = cfg.dy();
    let cx = p.d_field * dt / cfg.dx().powi(2);
    let cy = p.d_field * dt / (dy * dy);
    let cu = p.d_road * dt / cfg.dx().powi(2);
    let ghost = 2.0 * dy / p.d_field;
    let (f0, logistic) = (p.f0, cfg.reaction == Reaction::Logistic);
    let reaction = |v: f64| if logistic { f0 * v * (1.0 - v) } else { 0.0 };

    for i in 0..nx {
        let il = if i == 0 { 1 } else { i - 1 };
        let ir = if i == nx - 1 { nx - 2 } else { i + 1 };
        let col = &s.v[i * ny..(i + 1) * ny];
        let left = &s.v[il * ny..(il + 1) * ny];
        let right = &s.v[ir * ny..(ir + 1) * ny];
        let new = &mut out.v[i * ny..(i + 1) * ny];

        let top = col[ny - 1];
        let bottom = col[0];
        let ghost_top = col[ny - 2] + ghost * (p.mu * s.u[i] - p.nu * top);
        let ghost_bottom = col[1] + ghost * (p.mu * s.u_til[i] - p.nu * bottom);

        let update = |c: f64, l: f64, r: f64, up: f64, down: f64| {
            c + cx * ((l + r) - 2.0 * c) + cy * ((up + down) - 2.0 * c) + dt * reaction(c)
        };
        new[0] = update(bottom, left[0], right[0], col[1], ghost_bottom);
        for j in 1..ny - 1 {
            new[j] = update(col[j], left[j], right[j], col[j + 1], col[j - 1]);
        }
        new[ny - 1] = update(top, left[ny - 1], right[ny - 1], ghost_top, col[ny - 2]);

        out.u[i] = s.u[i] + cu * ((s.u[il] + s.u[ir]) - 2.0 * s.u[i]) + dt * (p.nu * top - p.mu * s.u[i]);
        out.u_til[i] =
            s.u_til[i] + cu * ((s.u_til[il] + s.u_til[ir]) - 2.0 * s.u_til[i]) + dt * (p.nu * bottom - p.mu * s.u_til[i]);
    }
    out.t = s.t + dt;
}

/// One explicit Euler step at the configured time step.
pub fn step(s: &SimState, cfg: &SimConfig) -> Result<SimState> {
    let dt = cfg.time_step()?;
    let mut out = s.clone();
    euler_step(cfg, s, &mut out, dt);
    if !out.is_finite() {
        return Err(Error::BlowUp { t: out.t });
    }
    Ok(out)
}

/// Rightmost `x` where `max_y v` reaches `level`, interpolated linearly
/// towards the next column.
pub fn front_position(s: &SimState, cfg: &SimConfig, level: f64) -> Option<f64> {
    let col_max = |i: usize| s.column(i).iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let i = (0..s.nx).rev().find(|&i| col_max(i) >= level)?;
    if i + 1 == s.nx {
        return Some(cfg.x(i));
    }
    let (a, b) = (col_max(i), col_max(i + 1));
    let theta = if a > b { ((a - level) / (a - b)).clamp(0.0, 1.0) } else { 0.0 };
    Some(cfg.x(i) + theta * cfg.dx())
}

/// Trapezoidal `int int v dx dy + int u dx + int u_til dx`.
pub fn mass_total(s: &SimState, cfg: &SimConfig) -> f64 {
    let weight = |k: usize, n: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let (dx, dy) = (cfg.dx(), cfg.dy());
    let mut field = 0.0;
    let mut roads = 0.0;
    for i in 0..s.nx {
        let col: f64 = s.column(i).iter().enumerate().map(|(j, v)| weight(j, s.ny) * v).sum();
        field += weight(i, s.nx) * col;
        roads += weight(i, s.nx) * (s.u[i] + s.u_til[i]);
    }
    field * dx * dy + roads * dx
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontTrace {
    pub level: f64,
    pub times: Vec<f64>,
    pub front_x: Vec<Option<f64>>,
    pub mass: Vec<f64>,
    pub v_center: Vec<f64>,
    pub u_center: Vec<f64>,
    /// Least-squares slope of the front over the fit window; `None` when no
    /// front exists there.
    pub speed_fit: Option<f64>,
    pub fit_window: (f64, f64),
}

/// Integrate to `t_end` and fit the front speed at `cfg.level`.
pub fn run(cfg: &SimConfig) -> Result<FrontTrace> {
    let (mut traces, _) = run_with_levels(cfg, &[cfg.level])?;
    Ok(traces.remove(0))
}

/// Integrate once, tracking several front levels; also returns the final state.
pub fn run_with_levels(cfg: &SimConfig, levels: &[f64]) -> Result<(Vec<FrontTrace>, SimState)> {
    for &level in levels {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Domain { what: "level", value: level });
        }
    }
    let mut sim = Simulation::new(cfg.clone())?;
    let n_out = (cfg.t_end / cfg.output_dt * (1.0 - 1e-12)).ceil() as usize;
    let mut times = Vec::with_capacity(n_out + 1);
    let mut fronts: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(n_out + 1); levels.len()];
    let mut mass = Vec::with_capacity(n_out + 1);
    let mut v_center = Vec::with_capacity(n_out + 1);
    let mut u_center = Vec::with_capacity(n_out + 1);

    let mut record = |s: &SimState| {
        times.push(s.t);
        for (k, &level) in levels.iter().enumerate() {
            fronts[k].push(front_position(s, cfg, level));
        }
        mass.push(mass_total(s, cfg));
        v_center.push(s.v_center());
        u_center.push(s.u_center());
    };
    record(sim.state());
    for k in 1..=n_out {
        let t_next = (k as f64 * cfg.output_dt).min(cfg.t_end);
        sim.advance(t_next - sim.state().t)?;
        record(sim.state());
    }

    let fit_window = (0.5 * cfg.t_end, cfg.t_end);
    let guard = cfg.half_length * (1.0 - GUARD_FRACTION);
    let traces = levels
        .iter()
        .zip(fronts)
        .map(|(&level, front_x)| {
            let speed_fit = fit_speed(&times, &front_x, fit_window, guard)?;
            Ok(FrontTrace {
                level,
                times: times.clone(),
                front_x,
                mass: mass.clone(),
                v_center: v_center.clone(),
                u_center: u_center.clone(),
                speed_fit,
                fit_window,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((traces, sim.into_state()))
}

/// Least-squares slope of the front samples in `window` that stay behind
/// `guard`. At least half of the window's samples must survive the guard.
fn fit_speed(times: &[f64], front: &[Option<f64>], window: (f64, f64), guard: f64) -> Result<Option<f64>> {
    let eps = 1e-9 * window.1.abs().max(1.0);
    let in_window: Vec<(f64, Option<f64>)> = times
        .iter()
        .zip(front)
        .filter(|(t, _)| **t >= window.0 - eps && **t <= window.1 + eps)
        .map(|(t, x)| (*t, *x))
        .collect();
    if in_window.iter().all(|(_, x)| x.is_none()) {
        return Ok(None);
    }
    let kept: Vec<(f64, f64)> = in_window
        .iter()
        .filter_map(|&(t, x)| x.filter(|x| *x < guard).map(|x| (t, x)))
        .collect();
    let needed = in_window.len().div_ceil(2).max(2);
    if kept.len() < needed {
        let (t, front) = in_window
            .iter()
            .find_map(|&(t, x)| x.filter(|x| *x >= guard).map(|x| (t, x)))
            .unwrap_or((window.0, f64::NAN));
        return Err(Error::DomainTooSmall { t, front, guard });
    }
    let n = kept.len() as f64;
    let tm = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let xm = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = kept.iter().map(|(t, x)| (t - tm) * (x - xm)).sum();
    let sxx: f64 = kept.iter().map(|(t, _)| (t - tm).powi(2)).sum();
    Ok(Some(sxy / sxx))
}
