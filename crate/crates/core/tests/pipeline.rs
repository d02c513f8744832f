//! End-to-end pipeline checks: problem -> paths -> estimate -> bound/fit.

use sgflab_core::potentials::{CompositeProblem, SmoothPotential};
use sgflab_core::rates::{
    bound_ergodic_convex, bound_moreau, check_bound, estimate, fit_rate, theta_sweep,
    EstimateConfig, MoreauBound, MoreauBoundParams, Quantity, RateModel,
};
use sgflab_core::sde::{Problem, VolatilitySchedule};

#[test]
fn ergodic_gap_respects_bound_and_decays() {
    let f = SmoothPotential::quadratic(&[1.0, 3.0], &[0.5, -0.5]).unwrap();
    let x0 = vec![2.0, 2.0];
    let dist0_sq = f.dist_to_argmin(&x0).powi(2);
    let vol = VolatilitySchedule::decreasing(2, 0.4, 1.0).unwrap();
    let sigma_star_sq = vol.sigma_star_sq();
    let series = estimate(
        &EstimateConfig {
            problem: Problem::Smooth(f),
            vol,
            x0,
            horizon: 30.0,
            level: 9,
            n_paths: 800,
            seed: 123,
            record_stride: 8,
        },
        Quantity::ErgodicObjectiveGap,
    )
    .unwrap();
    let report = check_bound(&series, "ergodic-convex", "", |t| {
        bound_ergodic_convex(dist0_sq, sigma_star_sq, t).unwrap()
    });
    assert_eq!(report.violations, 0);
    let fit = fit_rate(&series, RateModel::Power, (3.0, 30.0)).unwrap();
    assert!(
        (-1.3..=-0.7).contains(&fit.exponent),
        "square-integrable noise should keep the 1/t ergodic rate, got {}",
        fit.exponent
    );
}

#[test]
fn smoothed_run_stays_under_the_composite_ergodic_bound() {
    // second composite instance (stiffer curvature, lighter weight, longer
    // horizon than the acceptance one): the true-objective gap at the
    // averaged state stays under C0^2/(2t) + sigma*^2/2 + theta L0^2/2
    let pair = CompositeProblem::quadratic_plus_l1(&[2.0], &[1.0], 0.5).unwrap();
    let vol = VolatilitySchedule::constant(1, 0.2).unwrap();
    let res = theta_sweep(
        &pair,
        &vol,
        &[3.0],
        60.0,
        12,
        &[0.4, 0.05],
        400,
        9,
        32,
        0.05,
    )
    .unwrap();
    for row in &res.rows {
        assert_eq!(
            row.violations, 0,
            "theta {} violated the composite bound",
            row.theta
        );
        // the measured gap settles near the smoothing offset, far below the
        // bound's noise-plus-smoothing floor
        assert!(row.final_gap >= 0.0 && row.final_gap < *row.bound.last().unwrap());
    }
    // smaller theta tracks the true objective closer at the tail
    assert!(res.rows[1].final_gap <= res.rows[0].final_gap + 1e-6);

    // every bound variant evaluates on this instance (term curvature from a
    // strongly convex surrogate term)
    let params = MoreauBoundParams {
        dist0_sq: res.c0 * res.c0,
        sigma_star_sq: vol.sigma_star_sq(),
        theta: 0.4,
        subgrad_d: pair.g.lipschitz_l0.unwrap(),
        curvature_c: Some(1.0),
        mu_smooth: pair.f.strong_mu,
        lipschitz_l: pair.f.lipschitz_l,
    };
    for variant in [
        MoreauBound::DirectErgodic,
        MoreauBound::DirectDistance,
        MoreauBound::DirectValue,
        MoreauBound::CompositeErgodic,
        MoreauBound::CompositeDistanceSmooth,
        MoreauBound::CompositeValueSmooth,
        MoreauBound::CompositeDistanceTerm,
        MoreauBound::CompositeValueTerm,
        MoreauBound::CompositeDistanceBoth,
        MoreauBound::CompositeValueBoth,
    ] {
        let v = bound_moreau(variant, &params, 2.0).unwrap();
        assert!(v.is_finite() && v >= 0.0, "{variant:?} -> {v}");
    }
}

#[test]
fn operator_flow_of_gradient_matches_smooth_flow_statistics() {
    // M = grad f is 1/L-cocoercive; driving the SDE with it must reproduce
    // the smooth-flow statistics exactly (same seeds, same drift)
    let f = SmoothPotential::quadratic(&[1.5], &[0.0]).unwrap();
    let op = sgflab_core::operators::CocoerciveOperator::from_gradient(&f).unwrap();
    let vol = VolatilitySchedule::constant(1, 0.3).unwrap();
    let mk = |problem| EstimateConfig {
        problem,
        vol: vol.clone(),
        x0: vec![1.0],
        horizon: 5.0,
        level: 8,
        n_paths: 50,
        seed: 77,
        record_stride: 16,
    };
    let smooth = estimate(&mk(Problem::Smooth(f.clone())), Quantity::ObjectiveGap).unwrap();
    let operator = estimate(&mk(Problem::Operator(op)), Quantity::OperatorNormSq).unwrap();
    // |grad f|^2 = lambda^2 (x - c)^2 = 2 lambda^2 / lambda * gap... for the
    // 1-d quadratic: |grad f(x)|^2 = 2 lambda (f(x) - min), exactly
    for i in 0..smooth.times.len() {
        assert!((operator.mean[i] - 2.0 * 1.5 * smooth.mean[i]).abs() < 1e-12);
    }
}
