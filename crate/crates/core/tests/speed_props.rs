use proptest::prelude::*;
use roadspeed_core::speed::tangency_residuals;
use roadspeed_core::{
    classify_type, limit_c0, limit_cinf, limit_ctilde, limit_speeds, r_max, regions_overlap, solve_cstar,
    Dispersion, Params, WaveType,
};

fn params() -> impl Strategy<Value = Params> {
    (
        0.2f64..5.0,
        0.01f64..100.0,
        0.2f64..5.0,
        0.2f64..5.0,
        0.05f64..50.0,
        1u32..6,
        0.2f64..5.0,
    )
        .prop_map(|(d, big_d, mu, nu, r, n, f0)| Params::new(d, big_d, mu, nu, r, n, f0).unwrap())
}

fn unit() -> Params {
    Params::default()
}

/// Closed-form `N = 1` regions (`psi1 = cos`, `psi2 = cosh`), written
/// independently of the library.
mod strip_oracle {
    use roadspeed_core::Params;

    fn chi(p: &Params, b: f64) -> Option<f64> {
        let r = b * p.radius;
        let w = if b >= 0.0 {
            if r >= std::f64::consts::FRAC_PI_2 {
                return None;
            }
            -p.d_field * b * r.tan()
        } else {
            p.d_field * b * r.tanh()
        };
        if w + p.nu <= 0.0 {
            return None;
        }
        Some(-p.mu * w / (w + p.nu))
    }

    fn touches(p: &Params, c: f64, b: f64) -> bool {
        let Some(x) = chi(p, b) else { return false };
        let disc = c * c - 4.0 * p.d_road * x;
        if disc < 0.0 {
            return false;
        }
        let road_hi = (c + disc.sqrt()) / (2.0 * p.d_road);
        let road_lo = if b >= 0.0 { (c - disc.sqrt()) / (2.0 * p.d_road) } else { 0.0 };
        let d = p.d_field;
        let ck2 = 4.0 * d * p.f0;
        let (field_lo, field_hi) = if b >= 0.0 {
            let s2 = c * c - ck2 + 4.0 * d * d * b * b;
            if s2 < 0.0 {
                return false;
            }
            (((c - s2.sqrt()) / (2.0 * d)).max(0.0), (c + s2.sqrt()) / (2.0 * d))
        } else {
            let rho2 = (c * c - ck2) / (4.0 * d * d);
            if rho2 < b * b {
                return false;
            }
            let t = (rho2 - b * b).sqrt();
            (c / (2.0 * d) - t, c / (2.0 * d) + t)
        };
        road_lo.max(field_lo) <= road_hi.min(field_hi)
    }

    /// Dense scan in `beta` with step `h` over `[-span, span]`, bisection in `c`.
    pub fn c_star(p: &Params, h: f64, span: f64, c_res: f64) -> f64 {
        let n = (span / h) as i64;
        let any = |c: f64| (-n..=n).any(|k| touches(p, c, k as f64 * h));
        let (mut lo, mut hi) = (1e-3, 10.0);
        assert!(!any(lo) && any(hi));
        while hi - lo > c_res {
            let mid = 0.5 * (lo + hi);
            if any(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Dense-scan oracle value for d = f0 = mu = nu = 1, N = 1, D = 4, R = 10,
/// at beta step 2e-5 and c resolution 1e-5.
const C_STAR_D4_R10_SCAN: f64 = 2.27373;
/// Solver value for the same point, frozen at the bisection tolerance.
const C_STAR_D4_R10: f64 = 2.273723402874333;

#[test]
fn type2_point_against_dense_scan() {
    let p = Params { d_road: 4.0, radius: 10.0, ..unit() };
    let scan = strip_oracle::c_star(&p, 2e-5, 1.2, 1e-5);
    assert!((scan - C_STAR_D4_R10_SCAN).abs() < 1e-5, "oracle drifted: {scan}");
    let t = solve_cstar(&p).unwrap();
    assert!((t.c_star - scan).abs() < 2e-5, "{} vs {scan}", t.c_star);
    assert!((t.c_star - C_STAR_D4_R10).abs() < 1e-7 * C_STAR_D4_R10);
    assert_eq!(t.wave_type, WaveType::Type2);
    let (_, cm) = r_max(&p).unwrap();
    assert!(p.c_kpp() < t.c_star && t.c_star < cm);
}

#[test]
fn type1_point_against_dense_scan() {
    let p = Params { d_road: 1.5, radius: 3.0, ..unit() };
    let scan = strip_oracle::c_star(&p, 2e-5, 1.2, 1e-5);
    let t = solve_cstar(&p).unwrap();
    assert!((t.c_star - scan).abs() < 2e-5, "{} vs {scan}", t.c_star);
    assert_eq!(t.wave_type, WaveType::Type1);
}

#[test]
fn c_star_increasing_in_big_d() {
    let speeds: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&k| solve_cstar(&Params { d_road: k, radius: 3.0, ..unit() }).unwrap().c_star)
        .collect();
    assert!(speeds.windows(2).all(|w| w[0] < w[1]), "{speeds:?}");
}

#[test]
fn c_star_in_radius() {
    let grid: Vec<f64> = (0..25).map(|k| 10f64.powf(-1.0 + 3.0 * k as f64 / 24.0)).collect();
    let slow: Vec<f64> = grid
        .iter()
        .map(|&r| solve_cstar(&Params { d_road: 1.5, radius: r, ..unit() }).unwrap().c_star)
        .collect();
    assert!(slow.windows(2).all(|w| w[0] <= w[1]), "{slow:?}");

    let p = Params { d_road: 4.0, ..unit() };
    let (rm, cm) = r_max(&p).unwrap();
    let fast: Vec<f64> = grid.iter().map(|&r| solve_cstar(&p.with_radius(r)).unwrap().c_star).collect();
    for (w, r) in fast.windows(2).zip(grid.windows(2)) {
        if r[1] <= rm {
            assert!(w[0] < w[1], "not increasing below R_M at {r:?}");
        } else if r[0] >= rm {
            assert!(w[0] > w[1], "not decreasing above R_M at {r:?}");
        }
    }
    assert!(fast.iter().all(|&c| c <= cm * (1.0 + 1e-8)));
    let at_rm = solve_cstar(&p.with_radius(rm)).unwrap();
    assert!((at_rm.c_star - cm).abs() < 1e-4 * cm);
}

#[test]
fn limit_speed_regimes() {
    let p = unit();
    let small = solve_cstar(&p.with_road_diffusion(1e-4)).unwrap().c_star;
    let c0 = limit_c0(&p).unwrap();
    assert!(((small - c0) / c0).abs() < 1e-2);
    assert!(0.0 < c0 && c0 < p.c_kpp());

    let big = solve_cstar(&p.with_road_diffusion(1e6)).unwrap().c_star / 1e3;
    let ct = limit_ctilde(&p).unwrap();
    assert!(((big - ct) / ct).abs() < 1e-2);

    assert_eq!(limit_cinf(&p.with_road_diffusion(2.0)).unwrap(), p.c_kpp());
    let q = Params { d_road: 4.0, radius: 1e3, ..unit() };
    let cinf = limit_cinf(&q).unwrap();
    assert!(cinf > q.c_kpp());
    let far = solve_cstar(&q).unwrap().c_star;
    assert!(((far - cinf) / cinf).abs() < 1e-2);
}

// Frozen from the solver; c0 grows with R.
const C0_BY_RADIUS: [(f64, f64); 5] = [
    (0.5, 1.010308700310),
    (1.0, 1.476828282468),
    (2.0, 1.772840004332),
    (4.0, 1.915194588768),
    (8.0, 1.972372358353),
];

#[test]
fn c0_goldens_increase_with_radius() {
    let mut prev = 0.0;
    for (r, golden) in C0_BY_RADIUS {
        let c0 = limit_c0(&unit().with_radius(r)).unwrap();
        assert!((c0 - golden).abs() < 1e-8 * golden, "R={r}: {c0}");
        assert!(c0 > prev);
        prev = c0;
    }
}

#[test]
fn rescaled_residuals_vanish_like_one_over_big_d() {
    // Under c~ = c / sqrt(D), a~ = a sqrt(D) the bulk equation becomes
    // c~ a~ - f0 -+ d beta^2 = d a~^2 / D, the road equation is unchanged.
    let p = unit().with_road_diffusion(1e4);
    let t = solve_cstar(&p).unwrap();
    let s = p.d_road.sqrt();
    let (ct, at) = (t.c_star / s, t.alpha_star * s);
    let sign = if t.beta_star >= 0.0 { 1.0 } else { -1.0 };
    let bulk_limit = ct * at - p.f0 + sign * p.d_field * t.beta_star.powi(2);
    assert!(bulk_limit.abs() <= 2.0 * p.d_field * at * at / p.d_road + 1e-9, "{bulk_limit}");
    let disp = Dispersion::new(p).unwrap();
    let road_limit = -at * at + ct * at - disp.chi(t.beta_star).unwrap();
    assert!(road_limit.abs() < 1e-8);
}

#[test]
fn limit_speeds_invariants() {
    for big_d in [0.5, 2.0, 3.0, 10.0] {
        let p = unit().with_road_diffusion(big_d);
        let l = limit_speeds(&p).unwrap();
        assert!(0.0 < l.c0 && l.c0 < p.c_kpp());
        assert!(l.c_tilde2 > 0.0 && l.c_tilde2.is_finite());
        if big_d <= 2.0 {
            assert_eq!(l.c_inf, p.c_kpp());
        } else {
            assert!(l.c_inf > p.c_kpp());
        }
    }
}

#[test]
fn maximal_speed_example_dimension_two() {
    let p = Params { d_road: 3.0, dim: 2, ..unit() };
    let (rm, cm) = r_max(&p).unwrap();
    assert!((rm - 6.0).abs() < 1e-12);
    let t = solve_cstar(&p.with_radius(rm)).unwrap();
    assert!((t.c_star - cm).abs() < 1e-4 * cm);
    assert_eq!(t.wave_type, WaveType::Mixed);
}

/// Gap between the two slices on a dense grid at speed `c`.
fn gap_profile(disp: &Dispersion, c: f64, n: usize) -> Vec<(f64, f64)> {
    let lo = match disp.rho(c) {
        Some(rho) => -rho,
        None => disp.beta_hat(c).unwrap(),
    };
    let hi = disp.beta_tilde(c).unwrap();
    (0..=n)
        .filter_map(|k| {
            let b = lo + (hi - lo) * k as f64 / n as f64;
            let gap = disp.boundary_interval(c, b)?.gap(&disp.field_interval(c, b)?);
            Some((b, gap))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn overlap_is_monotone_in_c(p in params()) {
        let disp = Dispersion::new(p).unwrap();
        let t = solve_cstar(&p).unwrap();
        let flags: Vec<bool> = (1..=100)
            .map(|k| regions_overlap(&disp, t.c_star * 2.0 * k as f64 / 100.0).unwrap())
            .collect();
        let first = flags.iter().position(|&f| f).unwrap();
        prop_assert!(flags[first..].iter().all(|&f| f), "false after true");
    }

    #[test]
    fn solver_output_satisfies_dispersion_system(p in params()) {
        let t = solve_cstar(&p).unwrap();
        let r = tangency_residuals(&p, &t).unwrap();
        prop_assert!(r.iter().all(|x| x.abs() < 1e-6), "{r:?}");
        prop_assert!(t.c_star > 0.0 && t.alpha_star > 0.0 && t.gamma_star > 0.0);
    }

    #[test]
    fn sign_of_beta_matches_classification(p in params()) {
        let t = solve_cstar(&p).unwrap();
        let cls = classify_type(&p);
        if cls != WaveType::Mixed && t.wave_type != WaveType::Mixed {
            prop_assert_eq!(cls, t.wave_type);
        }
        if p.d_road <= 2.0 * p.d_field {
            prop_assert_eq!(t.wave_type, WaveType::Type1);
        }
        if p.d_road < 2.0 * p.d_field {
            prop_assert!(t.c_star < p.c_kpp());
        }
    }

    #[test]
    fn tangency_is_a_single_cluster(p in params()) {
        let disp = Dispersion::new(p).unwrap();
        let t = solve_cstar(&p).unwrap();
        let profile = gap_profile(&disp, t.c_star, 4000);
        let close: Vec<usize> = profile
            .iter()
            .enumerate()
            .filter(|(_, (_, g))| *g <= t.overlap_tol)
            .map(|(k, _)| k)
            .collect();
        prop_assert!(close.windows(2).all(|w| w[1] == w[0] + 1), "split cluster {close:?}");
    }
}
