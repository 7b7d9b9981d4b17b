//! Shared fixtures for the criterion benches.

use roadspeed_core::{Params, SimConfig};

/// One parameter set per regime of the solver.
pub fn solver_cases() -> Vec<(&'static str, Params)> {
    let base = Params::default();
    vec![
        ("type1_slow_road", base.with_road_diffusion(0.5)),
        ("mixed_at_r_max", base.with_road_diffusion(4.0).with_radius(2.0)),
        ("type2_wide", base.with_road_diffusion(4.0).with_radius(10.0)),
        ("type1_n3", Params { dim: 3, ..base.with_road_diffusion(8.0) }),
    ]
}

/// Strip configuration at the given resolution, otherwise default.
pub fn strip(nx: usize, ny: usize) -> SimConfig {
    SimConfig { nx, ny, ..SimConfig::default() }
}
