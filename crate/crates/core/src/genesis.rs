//! Construction of the classified surfaces and an independent ODE route to
//! the minimal one.
//!
//! `make_family` builds each verdict's witness surface in closed form.
//! `integrate_separated_profile` solves f'' = lambda (1 + f'^2), f(0) =
//! f'(0) = 0 with classic fourth-order Runge-Kutta; the solution is
//! -log(cos(lambda x))/lambda, so the integrator cross-checks the closed
//! forms without sharing any code with them.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::ParseError;
use crate::surface::{Ambient, GridSpec, Profile, SampledProfile, SurfaceError, TranslationSurface};

/// The four verdict witnesses.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// f = g = 0. Degenerate for the fit: H and K vanish identically.
    Plane,
    /// g = 0, f from the given expression; K = 0 everywhere, so the fit
    /// reports a constant-Gauss-curvature relation.
    Cylinder(String),
    /// The minimal translation surface with K(0,0) = -lambda^4.
    Scherk(f64),
    /// f = g = t^2; H and K are not linearly related.
    Paraboloid,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenesisError {
    #[error("scherk needs lambda > 0, got {0}")]
    BadLambda(f64),
    #[error("cylinder profile: {0}")]
    Profile(#[from] ParseError),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("integration span must be nonnegative and finite, got {0}")]
    BadSpan(f64),
    #[error("profile has a pole at |lambda x| = pi/2; |lambda x_end| = {0} is not below it")]
    ReachesPole(f64),
    #[error("first derivative exceeded {MAX_SLOPE:e} near x = {x}; stopped before blow-up")]
    BlowUp { x: f64 },
}

pub fn make_family(family: &Family) -> Result<TranslationSurface, GenesisError> {
    let flat = |f: Profile, g: Profile| TranslationSurface {
        f,
        g,
        ambient: Ambient::Euclidean,
        domain_f: (-10.0, 10.0),
        domain_g: (-10.0, 10.0),
    };
    Ok(match family {
        Family::Plane => flat(Profile::Zero, Profile::Zero),
        Family::Cylinder(source) => flat(Profile::from_source(source)?, Profile::Zero),
        Family::Paraboloid => flat(Profile::Square, Profile::Square),
        Family::Scherk(lambda) => {
            let lambda = *lambda;
            if !(lambda > 0.0) || !lambda.is_finite() {
                return Err(GenesisError::BadLambda(lambda));
            }
            // Keep a fixed margin (in the scaled variable) away from the
            // log(cos) poles at +-pi/(2 lambda^2).
            let mu = lambda * lambda;
            let half = FRAC_PI_2 / mu - 0.05 / mu;
            TranslationSurface {
                f: Profile::ScherkF { lambda },
                g: Profile::ScherkG { lambda },
                ambient: Ambient::Euclidean,
                domain_f: (-half, half),
                domain_g: (-half, half),
            }
        }
    })
}

/// One output row of the profile integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub x: f64,
    pub f: f64,
    pub fp: f64,
}

/// Slope cap: past this the profile is numerically vertical and the table
/// would only record garbage.
pub const MAX_SLOPE: f64 = 1e6;

/// Integrate f'' = lambda (1 + f'^2), f(0) = f'(0) = 0 from 0 to `x_end`
/// with RK4 at the given step (the last step is shortened to land on
/// `x_end` exactly). Rows are emitted at every step point including both
/// endpoints.
pub fn integrate_separated_profile(
    lambda: f64,
    x_end: f64,
    step: f64,
) -> Result<Vec<ProfileRow>, GenesisError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(GenesisError::BadStep(step));
    }
    if !(x_end >= 0.0) || !x_end.is_finite() {
        return Err(GenesisError::BadSpan(x_end));
    }
    let pole_arg = (lambda * x_end).abs();
    if pole_arg >= FRAC_PI_2 {
        return Err(GenesisError::ReachesPole(pole_arg));
    }

    let deriv = |p: f64| (p, lambda * (1.0 + p * p));
    let mut rows = Vec::new();
    rows.push(ProfileRow { x: 0.0, f: 0.0, fp: 0.0 });
    let mut x = 0.0;
    let mut f = 0.0;
    let mut p = 0.0;
    let mut i: u64 = 0;
    while x < x_end {
        i += 1;
        let x_next = (i as f64 * step).min(x_end);
        let h = x_next - x;
        let (k1f, k1p) = deriv(p);
        let (k2f, k2p) = deriv(p + 0.5 * h * k1p);
        let (k3f, k3p) = deriv(p + 0.5 * h * k2p);
        let (k4f, k4p) = deriv(p + h * k3p);
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        x = x_next;
        if !p.is_finite() || p.abs() > MAX_SLOPE {
            return Err(GenesisError::BlowUp { x });
        }
        rows.push(ProfileRow { x, f, fp: p });
    }
    Ok(rows)
}

/// Closed-form solution of the profile equation: -log(cos(lambda x))/lambda;
/// x^2/2 in the lambda = 0 limit.
pub fn closed_form_separated(lambda: f64, x: f64) -> f64 {
    if lambda == 0.0 {
        0.5 * x * x
    } else {
        -(lambda * x).cos().ln() / lambda
    }
}

/// Wrap two integrated tables as an interpolated translation surface. The
/// domains are the spans of the tables.
pub fn surface_from_tables(
    f_rows: &[ProfileRow],
    f_lambda: f64,
    g_rows: &[ProfileRow],
    g_lambda: f64,
    ambient: Ambient,
) -> TranslationSurface {
    let pack = |rows: &[ProfileRow], lambda: f64| {
        SampledProfile {
            rows: Arc::new(rows.iter().map(|r| (r.x, r.f, r.fp)).collect()),
            lambda,
        }
    };
    let fp = pack(f_rows, f_lambda);
    let gp = pack(g_rows, g_lambda);
    let domain_f = fp.span();
    let domain_g = gp.span();
    TranslationSurface {
        f: Profile::Sampled(fp),
        g: Profile::Sampled(gp),
        ambient,
        domain_f,
        domain_g,
    }
}

/// Largest |H| over the valid samples of the grid. Errors if the grid is
/// malformed or no sample is valid.
pub fn verify_minimal(surface: &TranslationSurface, grid: &GridSpec) -> Result<f64, SurfaceError> {
    let samples = surface.sample_grid(grid)?;
    let mut max_h: Option<f64> = None;
    for s in &samples {
        if s.valid {
            let a = s.h.abs();
            max_h = Some(max_h.map_or(a, |m| m.max(a)));
        }
    }
    max_h.ok_or(SurfaceError::NoAdmissibleSamples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weingarten::{classify, fit_linear_weingarten, Classification, FitTolerances};

    fn grid(lo: f64, hi: f64, n: usize) -> GridSpec {
        GridSpec {
            x_start: lo,
            x_stop: hi,
            x_count: n,
            y_start: lo,
            y_stop: hi,
            y_count: n,
        }
    }

    fn fit_verdict(surface: &TranslationSurface, g: &GridSpec) -> Classification {
        let samples = surface.sample_grid(g).unwrap();
        let tol = FitTolerances::default();
        let fit = fit_linear_weingarten(&samples, &tol).unwrap();
        classify(&fit, &tol)
    }

    #[test]
    fn family_verdicts_match_the_classification() {
        let g = grid(-1.0, 1.0, 9);
        let plane = make_family(&Family::Plane).unwrap();
        assert!(matches!(fit_verdict(&plane, &g), Classification::Degenerate(_)));

        let cyl = make_family(&Family::Cylinder("sin(t)".into())).unwrap();
        match fit_verdict(&cyl, &g) {
            Classification::ConstantGaussCurvature(k) => assert!(k.abs() < 1e-14),
            v => panic!("cylinder classified as {v:?}"),
        }

        let scherk = make_family(&Family::Scherk(1.0)).unwrap();
        match fit_verdict(&scherk, &g) {
            Classification::ConstantMeanCurvature(h) => assert!(h.abs() < 1e-12),
            v => panic!("scherk classified as {v:?}"),
        }

        let par = make_family(&Family::Paraboloid).unwrap();
        assert!(matches!(fit_verdict(&par, &g), Classification::NotLinearWeingarten));
    }

    #[test]
    fn scherk_is_minimal_and_has_the_right_gauss_curvature() {
        for lambda in [0.5, 1.0, 2.0] {
            let s = make_family(&Family::Scherk(lambda)).unwrap();
            let span = 0.9 * (FRAC_PI_2 / (lambda * lambda) - 0.05 / (lambda * lambda));
            let max_h = verify_minimal(&s, &grid(-span, span, 21)).unwrap();
            assert!(max_h < 1e-10, "lambda={lambda}: max|H|={max_h:e}");
            let c = s.translation_curvature(0.0, 0.0);
            let expect = -lambda.powi(4);
            assert!((c.k - expect).abs() <= 1e-12, "lambda={lambda}: K(0)={}", c.k);
        }
    }

    #[test]
    fn paraboloid_is_far_from_minimal() {
        let s = make_family(&Family::Paraboloid).unwrap();
        let max_h = verify_minimal(&s, &grid(-1.0, 1.0, 5)).unwrap();
        assert!(max_h >= 2.0, "max|H|={max_h}");
    }

    #[test]
    fn family_input_validation() {
        assert!(matches!(make_family(&Family::Scherk(0.0)), Err(GenesisError::BadLambda(_))));
        assert!(matches!(make_family(&Family::Scherk(-1.0)), Err(GenesisError::BadLambda(_))));
        assert!(matches!(
            make_family(&Family::Cylinder("sin(".into())),
            Err(GenesisError::Profile(_))
        ));
    }

    #[test]
    fn rk4_matches_the_closed_form() {
        // lambda = 1 at x = 0.5.
        let rows = integrate_separated_profile(1.0, 0.5, 1e-3).unwrap();
        let last = rows.last().unwrap();
        let expect = closed_form_separated(1.0, last.x);
        assert!((last.f - expect).abs() < 1e-9, "err={:e}", (last.f - expect).abs());
        assert!((last.fp - (last.x).tan()).abs() < 1e-9);

        // lambda = 2 at x = 0.3: f = -log(cos 0.6)/2 = 0.09598258470971886.
        let rows = integrate_separated_profile(2.0, 0.3, 1e-3).unwrap();
        let last = rows.last().unwrap();
        assert!((last.f - 0.09598258470971886).abs() < 1e-9);
        assert!((last.f - closed_form_separated(2.0, last.x)).abs() < 1e-9);
    }

    #[test]
    fn rk4_converges_at_fourth_order() {
        let reference = closed_form_separated(1.0, 0.8);
        let err = |step: f64| {
            let rows = integrate_separated_profile(1.0, 0.8, step).unwrap();
            (rows.last().unwrap().f - reference).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!(
            (12.0..=20.0).contains(&ratio),
            "halving the step scaled the error by {ratio}, expected ~16"
        );
    }

    #[test]
    fn integrator_rejects_bad_input() {
        assert!(matches!(
            integrate_separated_profile(1.0, 2.0, 1e-3),
            Err(GenesisError::ReachesPole(_))
        ));
        assert!(matches!(
            integrate_separated_profile(1.0, 0.5, 0.0),
            Err(GenesisError::BadStep(_))
        ));
        assert!(matches!(
            integrate_separated_profile(1.0, -0.5, 1e-3),
            Err(GenesisError::BadSpan(_))
        ));
        // Endpoint short of the pole but with a numerically vertical slope:
        // the guard stops the run instead of returning garbage.
        assert!(matches!(
            integrate_separated_profile(1.0, FRAC_PI_2 - 1e-7, 1e-5),
            Err(GenesisError::BlowUp { .. })
        ));
    }

    #[test]
    fn zero_span_gives_the_initial_row() {
        let rows = integrate_separated_profile(1.0, 0.0, 1e-3).unwrap();
        assert_eq!(rows, vec![ProfileRow { x: 0.0, f: 0.0, fp: 0.0 }]);
    }

    #[test]
    fn interpolated_tables_reproduce_closed_form_curvature() {
        // f from lambda, g from -lambda: together they form the minimal
        // surface [log(cos(l y)) - log(cos(l x))]/l. Compare H and K of the
        // interpolated surface against the closed-form expression surface.
        let lambda = 0.7;
        let f_rows = integrate_separated_profile(lambda, 0.8, 1e-3).unwrap();
        let g_rows = integrate_separated_profile(-lambda, 0.8, 1e-3).unwrap();
        let sampled =
            surface_from_tables(&f_rows, lambda, &g_rows, -lambda, Ambient::Euclidean);
        let exact = TranslationSurface {
            f: Profile::from_source("-log(cos(0.7*t))/0.7").unwrap(),
            g: Profile::from_source("log(cos(0.7*t))/0.7").unwrap(),
            ambient: Ambient::Euclidean,
            domain_f: (0.0, 0.8),
            domain_g: (0.0, 0.8),
        };
        let g = grid(0.05, 0.75, 8);
        let a = sampled.sample_grid(&g).unwrap();
        let b = exact.sample_grid(&g).unwrap();
        for (sa, sb) in a.iter().zip(&b) {
            assert!(sa.valid && sb.valid);
            assert!((sa.h - sb.h).abs() < 1e-6, "H mismatch {:e}", (sa.h - sb.h).abs());
            assert!((sa.k - sb.k).abs() < 1e-6, "K mismatch {:e}", (sa.k - sb.k).abs());
        }
        // The interpolated surface carries no expression form.
        assert_eq!(sampled.to_spec(), None);
    }
}
