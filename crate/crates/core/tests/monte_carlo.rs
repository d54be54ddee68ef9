use emu_policy::mc_engine::{
    draw_shocks, simulate, sweep, Model, RunConfig, ShockDistribution, ShockFamily, SimRegime,
    SweepAxis,
};
use emu_policy::numeric::NeumaierSum;
use emu_policy::sanctions::UnionRegime;

const AUTONOMY: SimRegime = SimRegime::Union(UnionRegime::Autonomy);
const STRICT: SimRegime = SimRegime::Union(UnionRegime::StrictRule);

#[test]
fn common_shock_sample_mean_is_small() {
    let dist = ShockDistribution {
        sigma_u: 1.0,
        sigma_a: 1.0,
        family: ShockFamily::Gaussian,
    };
    let n = 1_000_000u64;
    let sum: NeumaierSum = (0..n)
        .map(|i| draw_shocks(&dist, 2024, i).u_common)
        .collect();
    let mean = sum.total() / n as f64;
    assert!(mean.abs() < 0.005, "{mean}");
}

#[test]
fn uniform_family_has_requested_variance() {
    let dist = ShockDistribution {
        sigma_u: 0.5,
        sigma_a: 2.0,
        family: ShockFamily::UniformSymmetric,
    };
    let n = 200_000u64;
    let var_a: NeumaierSum = (0..n)
        .map(|i| draw_shocks(&dist, 9, i).u_asym.powi(2))
        .collect();
    let var_a = var_a.total() / n as f64;
    assert!((var_a - 4.0).abs() < 0.05, "{var_a}");
}

#[test]
fn reports_are_reproducible_across_worker_counts() {
    let model = Model::default();
    for regime in [STRICT, SimRegime::Nash, "discretion".parse().unwrap()] {
        let mut config = RunConfig::new(20_000, 77);
        let base = simulate(&model, regime, &config).unwrap();
        for workers in [1, 2, 3, 8] {
            config.workers = Some(workers);
            assert_eq!(
                simulate(&model, regime, &config).unwrap(),
                base,
                "{regime} with {workers} workers"
            );
        }
    }
}

#[test]
fn analytic_agreement_over_independent_seeds() {
    let model = Model::default();
    for regime in [AUTONOMY, STRICT] {
        let analytic = regime.analytic_loss(&model).unwrap().unwrap();
        let hits = (0..100u64)
            .filter(|&seed| {
                let r = simulate(&model, regime, &RunConfig::new(100_000, 1000 + seed)).unwrap();
                (r.mean_loss[0] - analytic).abs() <= 3.0 * r.se[0] + 1e-12
            })
            .count();
        assert!(hits >= 99, "{regime}: {hits}/100 within 3 SE");
    }
}

#[test]
fn strict_rule_loss_grows_with_asymmetric_variance() {
    let model = Model::default();
    let sigmas = [0.2, 0.4, 0.6, 0.8, 1.0];
    let rows = sweep(
        &model,
        SweepAxis::SigmaA,
        &sigmas,
        &[STRICT, AUTONOMY],
        &RunConfig::new(100_000, 5),
    )
    .unwrap();
    let strict: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.regime == STRICT)
        .map(|r| (r.value * r.value, r.mean_loss))
        .collect();
    let n = strict.len() as f64;
    let mx = strict.iter().map(|p| p.0).sum::<f64>() / n;
    let my = strict.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = strict.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = strict.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let expected = model.c * model.c + model.loss.w_y;
    assert!(
        (slope - expected).abs() < 0.05 * expected,
        "slope {slope} vs {expected}"
    );

    let autonomy: Vec<f64> = rows
        .iter()
        .filter(|r| r.regime == AUTONOMY)
        .map(|r| r.mean_loss)
        .collect();
    for v in autonomy {
        assert!((v - 2.0).abs() < 1e-9);
    }
}

#[test]
fn autonomy_is_flat_in_common_shock_variance() {
    for sigma_u in [0.0, 0.5, 2.0] {
        let mut model = Model::default();
        model.shocks.sigma_u = sigma_u;
        let r = simulate(&model, AUTONOMY, &RunConfig::new(5_000, 3)).unwrap();
        assert!((r.pooled_mean_loss - 2.0).abs() < 1e-9);
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn sigma_a_sweep_brackets_threshold() {
    let rows = sweep(
        &Model::default(),
        SweepAxis::SigmaA,
        &[0.3, 0.7071, 1.0],
        &[AUTONOMY, STRICT],
        &RunConfig::new(100_000, 42),
    )
    .unwrap();
    let pick = |v: f64, r: SimRegime| {
        rows.iter()
            .find(|row| row.value == v && row.regime == r)
            .unwrap()
            .clone()
    };
    assert!(pick(0.3, STRICT).mean_loss < pick(0.3, AUTONOMY).mean_loss);
    let (s, a) = (pick(0.7071, STRICT), pick(0.7071, AUTONOMY));
    assert!((s.mean_loss - a.mean_loss).abs() <= 3.0 * (s.se.powi(2) + a.se.powi(2)).sqrt());
    assert!(pick(1.0, AUTONOMY).mean_loss < pick(1.0, STRICT).mean_loss);
}

#[test]
fn penalty_sweep_moves_anticipated_inflation() {
    let rows = sweep(
        &Model::default(),
        SweepAxis::T,
        &[0.0, 1.0, 2.0],
        &[SimRegime::Nash],
        &RunConfig::new(1_000, 1),
    )
    .unwrap();
    let pis: Vec<f64> = rows.iter().map(|r| r.mean_p).collect();
    for (got, want) in pis.iter().zip([1.0, 0.5, 0.0]) {
        assert!((got - want).abs() < 1e-12, "{pis:?}");
    }
}

#[test]
fn sweep_rows_do_not_depend_on_order() {
    let config = RunConfig::new(2_000, 8);
    let a = sweep(
        &Model::default(),
        SweepAxis::KTarget,
        &[0.5, 1.5],
        &[STRICT, AUTONOMY],
        &config,
    )
    .unwrap();
    let b = sweep(
        &Model::default(),
        SweepAxis::KTarget,
        &[1.5, 0.5],
        &[AUTONOMY, STRICT],
        &config,
    )
    .unwrap();
    for row in &a {
        assert!(b.contains(row));
    }
}

#[test]
fn sweep_rejects_invalid_points() {
    let config = RunConfig::new(10, 1);
    assert!(sweep(
        &Model::default(),
        SweepAxis::WY,
        &[-1.0],
        &[AUTONOMY],
        &config
    )
    .is_err());
    assert!(sweep(
        &Model::default(),
        SweepAxis::Lambda,
        &[0.5],
        &[SimRegime::Nash],
        &config
    )
    .is_err());
    assert!(sweep(
        &Model::default(),
        SweepAxis::C,
        &[f64::NAN],
        &[AUTONOMY],
        &config
    )
    .is_err());
}
