//! Spreading speeds for a Fisher-KPP equation in a cylinder whose boundary
//! carries a fast diffusion line (the "road").
//!
//! The speed `c*` is the first `c` at which the boundary and field dispersion
//! curves touch; [`speed`] computes it and its limit regimes, [`simulate`]
//! cross-checks it on a two-road strip by direct simulation.

// `!(x > 0.0)` style checks are kept so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod simulate;
pub mod specfun;
pub mod speed;

pub use dispersion::{AlphaInterval, CurveSample, Dispersion, Params};
pub use error::{Error, Result};
pub use simulate::{FrontTrace, InitialData, Reaction, SimConfig, SimState, Simulation};
pub use speed::{
    classify_type, limit_c0, limit_cinf, limit_ctilde, limit_speeds, r_max, regions_overlap,
    solve_cstar, GapMinimum, LimitSpeeds, TangencyResult, WaveType,
};
