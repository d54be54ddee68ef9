//! Command-line surface of the `emulab` binary.
//!
//! Exit codes: 0 success, 1 input error, 2 no equilibrium, 3 oracle
//! disagreement.

pub mod format;
pub mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::closed_policy::regime_equilibrium;
use crate::mc_engine::{simulate, sweep, RunConfig, SimRegime, SweepAxis};
use crate::sanctions::{compare_regimes, regime_outcome, sanctioned_nash, UnionRegime};
use crate::union_game::UnionOutcome;
use crate::PolicyError;

pub use format::{sig12, Csv};
pub use scenario::{Scenario, ScenarioError, SlopeSource};

pub const SEED_ENV: &str = "EMULAB_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoEquilibrium(String),
    #[error("{0}")]
    Oracle(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::NoEquilibrium(_) => 2,
            CliError::Oracle(_) => 3,
        }
    }
}

impl From<PolicyError> for CliError {
    fn from(err: PolicyError) -> Self {
        match err {
            PolicyError::NoEquilibrium(_) => CliError::NoEquilibrium(err.to_string()),
            PolicyError::OracleDisagreement { .. } => CliError::Oracle(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(err: ScenarioError) -> Self {
        CliError::Input(err.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "emulab",
    version,
    about = "Monetary-union policy games: equilibria, regime comparison and Monte Carlo"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium for the scenario's shock realization (shocks.u, shocks.u_a).
    Solve(CommonArgs),
    /// Expected loss of every canonical regime and the autonomy/rule threshold.
    Compare(CommonArgs),
    /// Monte Carlo losses per regime as CSV.
    Simulate(CommonArgs),
    /// Monte Carlo losses along one parameter axis as CSV.
    Sweep(CommonArgs),
    /// Asymmetric-shock size at which autonomy and the strict rule tie.
    Threshold(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario file (flat key = value).
    pub scenario: PathBuf,
    /// Number of Monte Carlo draws (overrides run.n_draws).
    #[arg(long = "n")]
    pub n_draws: Option<u64>,
    /// Seed (overrides EMULAB_SEED and run.seed).
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Sweep axis: sigma_a, lambda, k_target, w_y, c or t.
    #[arg(long)]
    pub axis: Option<String>,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<f64>,
    /// Comma-separated regimes.
    #[arg(long, value_delimiter = ',')]
    pub regimes: Vec<String>,
    /// Regime solved by `solve` (default: nash, i.e. the scenario's own rule).
    #[arg(long, default_value = "nash")]
    pub regime: String,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-check every equilibrium with a numerical minimizer.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads for Monte Carlo draws.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl CommonArgs {
    fn run_config(&self, scenario: &Scenario) -> RunConfig {
        RunConfig {
            n_draws: self.n_draws.unwrap_or(scenario.n_draws),
            seed: self.seed.unwrap_or(scenario.seed),
            workers: self.workers,
            oracle: self.oracle,
        }
    }

    fn regimes(&self) -> Result<Vec<SimRegime>, CliError> {
        if self.regimes.is_empty() {
            return Ok(SimRegime::DEFAULT_SET.to_vec());
        }
        self.regimes
            .iter()
            .filter(|r| !r.trim().is_empty())
            .map(|r| r.trim().parse::<SimRegime>().map_err(CliError::Input))
            .collect()
    }
}

/// What a command produced: text for standard output and optionally a CSV
/// payload destined for `--out`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommandOutput {
    pub stdout: String,
    pub csv: Option<String>,
    /// CSV is the command's main result and goes to standard output when no
    /// `--out` is given.
    pub csv_is_primary: bool,
}

pub fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    let (args, output) = match &cli.command {
        Command::Solve(a) => (a, cmd_solve(&Scenario::load(&a.scenario)?, &a.regime)?),
        Command::Compare(a) => (a, cmd_compare(&Scenario::load(&a.scenario)?)?),
        Command::Simulate(a) => {
            let scenario = Scenario::load(&a.scenario)?;
            (
                a,
                cmd_simulate(&scenario, &a.regimes()?, &a.run_config(&scenario))?,
            )
        }
        Command::Sweep(a) => {
            let scenario = Scenario::load(&a.scenario)?;
            let axis = a
                .axis
                .as_deref()
                .ok_or_else(|| CliError::Input("sweep requires --axis".into()))?;
            if a.values.is_empty() {
                return Err(CliError::Input("sweep requires --values".into()));
            }
            (
                a,
                cmd_sweep(
                    &scenario,
                    axis,
                    &a.values,
                    &a.regimes()?,
                    &a.run_config(&scenario),
                )?,
            )
        }
        Command::Threshold(a) => (a, cmd_threshold(&Scenario::load(&a.scenario)?)?),
    };
    deliver(output, args.out.as_deref())
}

/// Writes the CSV payload to `out` when given; primary CSV otherwise goes to
/// standard output.
fn deliver(mut output: CommandOutput, out: Option<&Path>) -> Result<CommandOutput, CliError> {
    match (out, output.csv.as_ref()) {
        (Some(path), Some(csv)) => {
            std::fs::write(path, csv)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        (None, Some(csv)) if output.csv_is_primary => output.stdout.push_str(csv),
        _ => {}
    }
    Ok(output)
}

fn union_table(out: &mut String, o: &UnionOutcome) {
    let rows: [(&str, [f64; 2]); 7] = [
        ("M_e", o.anticipated),
        ("g", [o.profile.g1, o.profile.g2]),
        ("G", o.effective),
        ("y", o.y),
        ("p", o.p),
        ("loss", o.loss),
        ("penalty", o.penalty),
    ];
    let _ = writeln!(out, "{:<10}{:>22}{:>22}", "", "country_1", "country_2");
    for (label, [a, b]) in rows {
        let _ = writeln!(out, "{:<10}{:>22}{:>22}", label, sig12(a), sig12(b));
    }
}

/// Equilibrium at the scenario's shock realization.
pub fn cmd_solve(scenario: &Scenario, regime: &str) -> Result<CommandOutput, CliError> {
    let regime: SimRegime = regime.parse().map_err(CliError::Input)?;
    let model = scenario.model();
    let shock = scenario.realized;
    let mut out = String::new();
    let _ = writeln!(out, "regime    {regime}");
    let _ = writeln!(out, "c         {}", sig12(model.c));
    let _ = writeln!(out, "u         {}", sig12(shock.u_common));
    let _ = writeln!(out, "u_a       {}", sig12(shock.u_asym));

    match regime {
        SimRegime::Closed(kind) => {
            let o = regime_equilibrium(kind, &model.loss, model.c, shock.u_common)?;
            let _ = writeln!(out, "status    unique");
            for (label, v) in [
                ("M_e", o.anticipated_mix),
                ("M", o.mix),
                ("m", o.m),
                ("g", o.g),
                ("y", o.y),
                ("p", o.p),
                ("loss", o.realized_loss()),
                ("E[loss]", o.expected_loss),
            ] {
                let _ = writeln!(out, "{label:<10}{}", sig12(v));
            }
        }
        SimRegime::Union(_) | SimRegime::Nash => {
            let outcome = match regime {
                SimRegime::Union(r) => regime_outcome(r, &model.loss, model.c, &shock)?,
                _ => sanctioned_nash(&model.rule, &model.contract, &model.loss, model.c, &shock)?,
            };
            let _ = writeln!(out, "lambda    {}", sig12(outcome.rule.lambda));
            let _ = writeln!(out, "t         {}", sig12(outcome.penalty_rate));
            if let Some(witness) = outcome.witness() {
                return Err(CliError::NoEquilibrium(format!(
                    "{regime}: no Nash equilibrium: {witness}"
                )));
            }
            let _ = writeln!(out, "status    {}", outcome.status.label());
            let _ = writeln!(out, "m         {}", sig12(outcome.m));
            union_table(&mut out, &outcome);
        }
    }
    Ok(CommandOutput {
        stdout: out,
        ..Default::default()
    })
}

pub fn cmd_compare(scenario: &Scenario) -> Result<CommandOutput, CliError> {
    let model = scenario.model();
    let cmp = compare_regimes(
        &model.loss,
        model.c,
        model.shocks.sigma_u,
        model.shocks.sigma_a,
    )?;
    let threshold = sig12(cmp.threshold.sigma_a_star);
    let mut csv = Csv::new(&["regime", "expected_loss", "sigma_a_threshold"]);
    let mut out = String::new();
    let _ = writeln!(out, "{:<14}{:>22}", "regime", "expected_loss");
    for regime in UnionRegime::ALL {
        let loss = cmp.get(regime);
        let marker = if regime == cmp.best() {
            "  <- best"
        } else {
            ""
        };
        let _ = writeln!(out, "{:<14}{:>22}{marker}", regime.name(), sig12(loss));
        csv.push(vec![
            regime.name().to_string(),
            sig12(loss),
            threshold.clone(),
        ]);
    }
    let _ = writeln!(
        out,
        "{:<14}{:>22}",
        "first_best",
        sig12(cmp.loss_first_best)
    );
    let _ = writeln!(
        out,
        "sigma_a threshold {}{} (sigma_a = {})",
        threshold,
        if cmp.threshold.degenerate {
            " (degenerate: no inflation bias)"
        } else {
            ""
        },
        sig12(model.shocks.sigma_a)
    );
    Ok(CommandOutput {
        stdout: out,
        csv: Some(csv.render()),
        csv_is_primary: false,
    })
}

pub fn cmd_simulate(
    scenario: &Scenario,
    regimes: &[SimRegime],
    config: &RunConfig,
) -> Result<CommandOutput, CliError> {
    let model = scenario.model();
    let mut csv = Csv::new(&[
        "regime",
        "n_draws",
        "seed",
        "mean_loss_1",
        "mean_loss_2",
        "se_1",
        "se_2",
        "mean_abs_y",
        "mean_p",
    ]);
    for &regime in regimes {
        let r = simulate(&model, regime, config)?;
        csv.push(vec![
            r.regime,
            r.n_draws.to_string(),
            r.seed.to_string(),
            sig12(r.mean_loss[0]),
            sig12(r.mean_loss[1]),
            sig12(r.se[0]),
            sig12(r.se[1]),
            sig12(r.mean_abs_y),
            sig12(r.mean_p),
        ]);
    }
    Ok(CommandOutput {
        stdout: String::new(),
        csv: Some(csv.render()),
        csv_is_primary: true,
    })
}

pub fn cmd_sweep(
    scenario: &Scenario,
    axis: &str,
    values: &[f64],
    regimes: &[SimRegime],
    config: &RunConfig,
) -> Result<CommandOutput, CliError> {
    let axis: SweepAxis = axis.parse()?;
    let rows = sweep(&scenario.model(), axis, values, regimes, config)?;
    let mut csv = Csv::new(&["axis", "value", "regime", "mean_loss", "se"]);
    for row in rows {
        csv.push(vec![
            row.axis.name().to_string(),
            sig12(row.value),
            row.regime.name(),
            sig12(row.mean_loss),
            sig12(row.se),
        ]);
    }
    Ok(CommandOutput {
        stdout: String::new(),
        csv: Some(csv.render()),
        csv_is_primary: true,
    })
}

pub fn cmd_threshold(scenario: &Scenario) -> Result<CommandOutput, CliError> {
    let model = scenario.model();
    let th = crate::sanctions::autonomy_vs_rule_threshold(&model.loss, model.c)?;
    let mut csv = Csv::new(&["sigma_a_threshold", "degenerate"]);
    csv.push(vec![sig12(th.sigma_a_star), th.degenerate.to_string()]);
    let mut stdout = format!("{:.6}\n", th.sigma_a_star);
    if th.degenerate {
        stdout.push_str("degenerate: k_target = 0, the strict rule is never worse\n");
    }
    Ok(CommandOutput {
        stdout,
        csv: Some(csv.render()),
        csv_is_primary: false,
    })
}
