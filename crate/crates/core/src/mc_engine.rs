//! Seeded Monte Carlo evaluation of policy regimes.
//!
//! Draw `i` of a run with seed `s` comes from its own ChaCha8 stream
//! (`seed = s`, `stream = i`), so results do not depend on batching or on the
//! number of worker threads. Per-draw results are collected in index order
//! and reduced with compensated summation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::closed_policy::{self, realized_loss, LossParams, RegimeKind};
use crate::error::{ensure_non_negative, ensure_positive, PolicyError, Result};
use crate::numeric::{bracket_around, golden_section_min, mean_and_standard_error, NeumaierSum};
use crate::sanctions::{regime_outcome, sanctioned_nash, SanctionContract, UnionRegime};
use crate::union_game::{
    deviation_loss, evaluate_profile, Country, FiscalProfile, UnionOutcome, UnionRule, UnionShock,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShockFamily {
    #[default]
    Gaussian,
    /// Uniform on `[-sqrt(3) sigma, sqrt(3) sigma]`.
    UniformSymmetric,
}

impl ShockFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ShockFamily::Gaussian => "gaussian",
            ShockFamily::UniformSymmetric => "uniform",
        }
    }
}

impl FromStr for ShockFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gaussian" | "normal" => Ok(ShockFamily::Gaussian),
            "uniform" => Ok(ShockFamily::UniformSymmetric),
            _ => Err(format!(
                "unknown shock family '{s}' (expected gaussian or uniform)"
            )),
        }
    }
}

/// Zero-mean, mutually independent common and asymmetric shocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockDistribution {
    pub sigma_u: f64,
    pub sigma_a: f64,
    pub family: ShockFamily,
}

impl ShockDistribution {
    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("shocks.sigma_u", self.sigma_u)?;
        ensure_non_negative("shocks.sigma_a", self.sigma_a)
    }

    fn unit_draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.family {
            ShockFamily::Gaussian => rng.sample(StandardNormal),
            ShockFamily::UniformSymmetric => {
                let half_width = 3f64.sqrt();
                rng.random_range(-half_width..half_width)
            }
        }
    }
}

/// Shock number `index` of the run seeded with `seed`.
pub fn draw_shocks(dist: &ShockDistribution, seed: u64, index: u64) -> UnionShock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let z_u = dist.unit_draw(&mut rng);
    let z_a = dist.unit_draw(&mut rng);
    UnionShock::new(dist.sigma_u * z_u, dist.sigma_a * z_a)
}

/// Reduced-form model shared by every regime of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub loss: LossParams,
    pub c: f64,
    /// Rule used by the `nash` regime.
    pub rule: UnionRule,
    /// Contract used by the `nash` regime.
    pub contract: SanctionContract,
    pub shocks: ShockDistribution,
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        self.loss.validate()?;
        ensure_positive("c", self.c)?;
        UnionRule::new(self.rule.lambda)?;
        SanctionContract::new(self.contract.t)?;
        self.shocks.validate()
    }

    /// Hex SHA-256 of a canonical rendering of the model.
    pub fn digest(&self) -> String {
        let canonical = format!(
            "c={:?};loss.k_target={:?};loss.w_y={:?};shocks.family={};shocks.sigma_a={:?};shocks.sigma_u={:?};union.lambda={:?};union.t={:?}",
            self.c,
            self.loss.k_target,
            self.loss.w_y,
            self.shocks.family.name(),
            self.shocks.sigma_a,
            self.shocks.sigma_u,
            self.rule.lambda,
            self.contract.t,
        );
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl Default for Model {
    fn default() -> Self {
        Model {
            loss: LossParams::default(),
            c: 1.0,
            rule: UnionRule::AUTONOMY,
            contract: SanctionContract::default(),
            shocks: ShockDistribution {
                sigma_u: 0.2,
                sigma_a: 0.3,
                family: ShockFamily::Gaussian,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimRegime {
    /// Closed economy driven by the common shock only.
    Closed(RegimeKind),
    Union(UnionRegime),
    /// Union Nash equilibrium at the model's own rule and contract.
    Nash,
}

impl SimRegime {
    pub const DEFAULT_SET: [SimRegime; 4] = [
        SimRegime::Union(UnionRegime::Autonomy),
        SimRegime::Union(UnionRegime::StrictRule),
        SimRegime::Union(UnionRegime::Sanctioned),
        SimRegime::Union(UnionRegime::Cooperative),
    ];

    pub fn name(&self) -> String {
        match self {
            SimRegime::Closed(kind) => kind.to_string(),
            SimRegime::Union(regime) => regime.name().to_string(),
            SimRegime::Nash => "nash".to_string(),
        }
    }

    /// Closed-form per-country expected loss, when one exists.
    pub fn analytic_loss(&self, model: &Model) -> Result<Option<f64>> {
        let loss = &model.loss;
        match self {
            SimRegime::Closed(kind) => {
                let var = model.shocks.sigma_u * model.shocks.sigma_u;
                closed_policy::expected_loss_closed(*kind, loss, model.c, var).map(Some)
            }
            SimRegime::Union(regime) => crate::sanctions::regime_expected_loss(
                *regime,
                loss,
                model.c,
                model.shocks.sigma_u,
                model.shocks.sigma_a,
            )
            .map(Some),
            SimRegime::Nash => Ok(None),
        }
    }
}

impl fmt::Display for SimRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SimRegime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "discretion" => SimRegime::Closed(RegimeKind::Discretion),
            "commitment" => SimRegime::Closed(RegimeKind::Commitment),
            "targeting" => SimRegime::Closed(RegimeKind::InflationTargeting),
            "nash" => SimRegime::Nash,
            other => SimRegime::Union(other.parse().map_err(|_| {
                format!(
                    "unknown regime '{other}' (expected autonomy, strict, sanctioned, cooperative, nash, discretion, commitment or targeting)"
                )
            })?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub n_draws: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Recompute every equilibrium with a numerical minimizer and fail on
    /// disagreement.
    pub oracle: bool,
}

impl RunConfig {
    pub fn new(n_draws: u64, seed: u64) -> Self {
        RunConfig {
            n_draws,
            seed,
            workers: None,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub regime: String,
    pub n_draws: u64,
    pub seed: u64,
    pub mean_loss: [f64; 2],
    pub se: [f64; 2],
    /// Mean and standard error of the cross-country average loss.
    pub pooled_mean_loss: f64,
    pub pooled_se: f64,
    /// Mean over draws of `(|y_1| + |y_2|) / 2`.
    pub mean_abs_y: f64,
    /// Mean over draws of `(p_1 + p_2) / 2`.
    pub mean_p: f64,
    pub digest: String,
}

#[derive(Debug, Clone, Copy)]
struct DrawResult {
    loss: [f64; 2],
    abs_y: f64,
    p: f64,
}

/// Relative tolerance of the numerical oracle.
pub const ORACLE_TOL: f64 = 1e-6;

fn oracle_mismatch(
    regime: SimRegime,
    draw: u64,
    what: &'static str,
    analytic: f64,
    numerical: f64,
) -> Result<()> {
    if (analytic - numerical).abs() <= ORACLE_TOL * (1.0 + analytic.abs()) {
        Ok(())
    } else {
        Err(PolicyError::OracleDisagreement {
            regime: regime.name(),
            draw,
            what,
            analytic,
            numerical,
        })
    }
}

fn argmin_near<F: Fn(f64) -> f64>(f: F, center: f64) -> f64 {
    let (lo, hi) = bracket_around(center);
    golden_section_min(f, lo, hi, 1e-11)
}

fn check_union_oracle(
    regime: SimRegime,
    draw: u64,
    model: &Model,
    outcome: &UnionOutcome,
) -> Result<()> {
    let (loss, c) = (&model.loss, model.c);
    if regime == SimRegime::Union(UnionRegime::Cooperative) {
        let g2 = outcome.profile.g2;
        let joint = |g1: f64| {
            let o = evaluate_profile(
                outcome.rule,
                loss,
                c,
                outcome.shock,
                0.0,
                FiscalProfile::new(g1, g2),
                0.0,
                outcome.status,
            );
            o.loss[0] + o.loss[1]
        };
        let g1 = argmin_near(joint, outcome.profile.g1);
        return oracle_mismatch(regime, draw, "cooperative g1", outcome.profile.g1, g1);
    }
    // Flat own loss: nothing to recompute.
    if outcome.rule.is_strict() {
        return Ok(());
    }
    for (country, what) in [
        (Country::One, "best response g1"),
        (Country::Two, "best response g2"),
    ] {
        let own = outcome.profile.get(country);
        let numerical = argmin_near(|g| deviation_loss(outcome, loss, c, country, g), own);
        oracle_mismatch(regime, draw, what, own, numerical)?;
    }
    Ok(())
}

fn check_closed_oracle(
    kind: RegimeKind,
    draw: u64,
    model: &Model,
    outcome: &closed_policy::ClosedOutcome,
) -> Result<()> {
    let regime = SimRegime::Closed(kind);
    let (loss, c, u) = (&model.loss, model.c, outcome.shock);
    match kind {
        RegimeKind::Discretion => {
            let mix = argmin_near(
                |m| realized_loss(loss, c, outcome.anticipated_mix, m, u),
                outcome.mix,
            );
            oracle_mismatch(regime, draw, "discretionary mix", outcome.mix, mix)
        }
        RegimeKind::InflationTargeting => {
            let mix = argmin_near(
                |m| {
                    let p = outcome.anticipated_mix + c * (m - outcome.anticipated_mix + u);
                    p * p
                },
                outcome.mix,
            );
            oracle_mismatch(regime, draw, "targeting mix", outcome.mix, mix)
        }
        RegimeKind::Commitment => {
            // Rule M = a - u announced ex ante: expected loss a^2 + w k^2.
            let a = argmin_near(
                |a| realized_loss(loss, c, a, a - u, u),
                outcome.mix_rule.intercept,
            );
            oracle_mismatch(
                regime,
                draw,
                "committed intercept",
                outcome.mix_rule.intercept,
                a,
            )
        }
    }
}

fn simulate_draw(
    model: &Model,
    regime: SimRegime,
    seed: u64,
    index: u64,
    oracle: bool,
) -> Result<DrawResult> {
    let shock = draw_shocks(&model.shocks, seed, index);
    match regime {
        SimRegime::Closed(kind) => {
            let o = closed_policy::regime_equilibrium(kind, &model.loss, model.c, shock.u_common)?;
            if oracle {
                check_closed_oracle(kind, index, model, &o)?;
            }
            let l = o.realized_loss();
            Ok(DrawResult {
                loss: [l, l],
                abs_y: o.y.abs(),
                p: o.p,
            })
        }
        SimRegime::Union(_) | SimRegime::Nash => {
            let outcome = match regime {
                SimRegime::Union(r) => regime_outcome(r, &model.loss, model.c, &shock)?,
                _ => sanctioned_nash(&model.rule, &model.contract, &model.loss, model.c, &shock)?
                    .into_result()?,
            };
            if oracle {
                check_union_oracle(regime, index, model, &outcome)?;
            }
            Ok(DrawResult {
                loss: outcome.loss,
                abs_y: 0.5 * (outcome.y[0].abs() + outcome.y[1].abs()),
                p: 0.5 * (outcome.p[0] + outcome.p[1]),
            })
        }
    }
}

fn run_draws(model: &Model, regime: SimRegime, config: &RunConfig) -> Result<Vec<DrawResult>> {
    let work = || -> Result<Vec<DrawResult>> {
        (0..config.n_draws)
            .into_par_iter()
            .map(|i| simulate_draw(model, regime, config.seed, i, config.oracle))
            .collect()
    };
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("failed to build rayon thread pool")
            .install(work),
        None => work(),
    }
}

/// Runs `config.n_draws` draws of `regime` and summarizes the losses.
pub fn simulate(model: &Model, regime: SimRegime, config: &RunConfig) -> Result<SimulationReport> {
    model.validate()?;
    if config.n_draws < 1 {
        return Err(PolicyError::InvalidParameter {
            name: "run.n_draws",
            value: config.n_draws as f64,
            reason: "must be >= 1",
        });
    }
    if config.workers == Some(0) {
        return Err(PolicyError::InvalidParameter {
            name: "workers",
            value: 0.0,
            reason: "must be >= 1",
        });
    }
    let draws = run_draws(model, regime, config)?;
    let n = draws.len() as f64;

    let column = |f: &dyn Fn(&DrawResult) -> f64| draws.iter().map(f).collect::<Vec<f64>>();
    let (m1, se1) = mean_and_standard_error(&column(&|d| d.loss[0]));
    let (m2, se2) = mean_and_standard_error(&column(&|d| d.loss[1]));
    let (pooled, pooled_se) = mean_and_standard_error(&column(&|d| 0.5 * (d.loss[0] + d.loss[1])));
    let mean_abs_y = draws
        .iter()
        .map(|d| d.abs_y)
        .collect::<NeumaierSum>()
        .total()
        / n;
    let mean_p = draws.iter().map(|d| d.p).collect::<NeumaierSum>().total() / n;

    Ok(SimulationReport {
        regime: regime.name(),
        n_draws: config.n_draws,
        seed: config.seed,
        mean_loss: [m1, m2],
        se: [se1, se2],
        pooled_mean_loss: pooled,
        pooled_se,
        mean_abs_y,
        mean_p,
        digest: model.digest(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    SigmaA,
    Lambda,
    KTarget,
    WY,
    C,
    T,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::SigmaA => "sigma_a",
            SweepAxis::Lambda => "lambda",
            SweepAxis::KTarget => "k_target",
            SweepAxis::WY => "w_y",
            SweepAxis::C => "c",
            SweepAxis::T => "t",
        }
    }

    /// Copy of `model` with this axis set to `value`.
    pub fn apply(&self, model: &Model, value: f64) -> Model {
        let mut m = *model;
        match self {
            SweepAxis::SigmaA => m.shocks.sigma_a = value,
            SweepAxis::Lambda => m.rule = UnionRule { lambda: value },
            SweepAxis::KTarget => m.loss.k_target = value,
            SweepAxis::WY => m.loss.w_y = value,
            SweepAxis::C => m.c = value,
            SweepAxis::T => m.contract = SanctionContract { t: value },
        }
        m
    }
}

impl FromStr for SweepAxis {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sigma_a" => SweepAxis::SigmaA,
            "lambda" => SweepAxis::Lambda,
            "k_target" => SweepAxis::KTarget,
            "w_y" => SweepAxis::WY,
            "c" => SweepAxis::C,
            "t" => SweepAxis::T,
            other => return Err(PolicyError::InvalidAxis(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub regime: SimRegime,
    /// Cross-country average loss.
    pub mean_loss: f64,
    pub se: f64,
    pub mean_p: f64,
}

/// One simulation per `(value, regime)` pair, all with the same seed.
pub fn sweep(
    model: &Model,
    axis: SweepAxis,
    values: &[f64],
    regimes: &[SimRegime],
    config: &RunConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(values.len() * regimes.len());
    for &value in values {
        if !value.is_finite() {
            return Err(PolicyError::InvalidParameter {
                name: "sweep value",
                value,
                reason: "must be finite",
            });
        }
        let point = axis.apply(model, value);
        for &regime in regimes {
            let report = simulate(&point, regime, config)?;
            rows.push(SweepRow {
                axis,
                value,
                regime,
                mean_loss: report.pooled_mean_loss,
                se: report.pooled_se,
                mean_p: report.mean_p,
            });
        }
    }
    Ok(rows)
}
