//! Two-country monetary union.
//!
//! The central bank commits to `m = -u - lambda (g1 + g2)`. Country `i`
//! faces the shock `u + s_i u_a` (`s_1 = +1`, `s_2 = -1`) and its local
//! policy mix is `m + g_i = -u + G_i` with
//! `G_i = (1 - lambda) g_i - lambda g_j`. Then
//!
//! ```text
//!   y_i = G_i - G_e + s_i u_a        p_i = G_e + c y_i
//! ```
//!
//! where `G_e` is the anticipated local mix. Each fiscal authority minimizes
//! `p_i^2 + w_y (y_i - k_target)^2 + t g_i` over `g_i`; `t = 0` is the
//! unsanctioned game and `t != 0` is used by [`crate::sanctions`].

use std::fmt;

use crate::closed_policy::LossParams;
use crate::error::{ensure_finite, ensure_positive, PolicyError, Result};
use crate::LAMBDA_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnionShock {
    pub u_common: f64,
    pub u_asym: f64,
}

impl UnionShock {
    pub fn new(u_common: f64, u_asym: f64) -> Self {
        UnionShock { u_common, u_asym }
    }

    /// Shock hitting `country`.
    pub fn local(&self, country: Country) -> f64 {
        self.u_common + country.sign() * self.u_asym
    }

    /// Same common shock, asymmetric component reversed.
    pub fn mirrored(&self) -> Self {
        UnionShock {
            u_common: self.u_common,
            u_asym: -self.u_asym,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Country {
    One,
    Two,
}

impl Country {
    pub const BOTH: [Country; 2] = [Country::One, Country::Two];

    /// Sign of the asymmetric shock received by this country.
    pub fn sign(self) -> f64 {
        match self {
            Country::One => 1.0,
            Country::Two => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Country::One => 0,
            Country::Two => 1,
        }
    }

    pub fn other(self) -> Country {
        match self {
            Country::One => Country::Two,
            Country::Two => Country::One,
        }
    }
}

/// Monetary reaction coefficient `lambda` of `m = -u - lambda (g1 + g2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionRule {
    pub lambda: f64,
}

impl UnionRule {
    pub const AUTONOMY: UnionRule = UnionRule { lambda: 0.0 };
    pub const STRICT: UnionRule = UnionRule { lambda: 1.0 };
    pub const HALF: UnionRule = UnionRule { lambda: 0.5 };

    pub fn new(lambda: f64) -> Result<Self> {
        ensure_finite("union.lambda", lambda)?;
        Ok(UnionRule { lambda })
    }

    /// Own-instrument effect `1 - lambda` vanishes.
    pub fn is_strict(&self) -> bool {
        (self.lambda - 1.0).abs() < LAMBDA_EPS
    }

    /// Determinant `1 - 2 lambda` vanishes.
    pub fn is_half(&self) -> bool {
        (self.lambda - 0.5).abs() < LAMBDA_EPS
    }

    pub fn determinant(&self) -> f64 {
        1.0 - 2.0 * self.lambda
    }

    pub fn monetary(&self, shock: &UnionShock, profile: &FiscalProfile) -> f64 {
        -shock.u_common - self.lambda * (profile.g1 + profile.g2)
    }

    /// `G_i = (1 - lambda) g_i - lambda g_j`.
    pub fn effective_mix(&self, own: f64, other: f64) -> f64 {
        (1.0 - self.lambda) * own - self.lambda * other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FiscalProfile {
    pub g1: f64,
    pub g2: f64,
}

impl FiscalProfile {
    pub fn new(g1: f64, g2: f64) -> Self {
        FiscalProfile { g1, g2 }
    }

    pub fn get(&self, country: Country) -> f64 {
        match country {
            Country::One => self.g1,
            Country::Two => self.g2,
        }
    }

    pub fn set(&mut self, country: Country, value: f64) {
        match country {
            Country::One => self.g1 = value,
            Country::Two => self.g2 = value,
        }
    }

    fn max_abs_diff(&self, other: &FiscalProfile) -> f64 {
        (self.g1 - other.g1).abs().max((self.g2 - other.g2).abs())
    }
}

/// Why no Nash equilibrium exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoEquilibriumWitness {
    /// Both countries' targets for `G_i` cannot hold together: the rule
    /// forces `G_1 + G_2 = feasible_sum` while the targets add to `desired_sum`.
    IncompatibleTargets {
        lambda: f64,
        desired_sum: f64,
        feasible_sum: f64,
    },
    /// The own instrument has no effect on output, so a nonzero linear
    /// penalty pushes `g_i` without bound.
    UnboundedPenalty { lambda: f64, penalty_rate: f64 },
}

impl fmt::Display for NoEquilibriumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoEquilibriumWitness::IncompatibleTargets { lambda, desired_sum, feasible_sum } => write!(
                f,
                "lambda = {lambda}: desired G1 + G2 = {desired_sum} but the rule forces G1 + G2 = {feasible_sum}"
            ),
            NoEquilibriumWitness::UnboundedPenalty { lambda, penalty_rate } => write!(
                f,
                "lambda = {lambda}: fiscal instruments have no own effect and the penalty rate {penalty_rate} makes each loss unbounded below"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquilibriumStatus {
    Unique,
    /// A continuum of equilibria; the outcome holds the canonical selection.
    Continuum,
    NoEquilibrium(NoEquilibriumWitness),
}

impl EquilibriumStatus {
    pub fn label(&self) -> &'static str {
        match self {
            EquilibriumStatus::Unique => "unique",
            EquilibriumStatus::Continuum => "continuum",
            EquilibriumStatus::NoEquilibrium(_) => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionOutcome {
    pub rule: UnionRule,
    pub shock: UnionShock,
    /// Linear penalty rate on `g_i` (zero outside the sanctions regime).
    pub penalty_rate: f64,
    pub m: f64,
    pub profile: FiscalProfile,
    /// Effective local mixes `G_i`.
    pub effective: [f64; 2],
    /// Anticipated local mixes `G_e,i`.
    pub anticipated: [f64; 2],
    pub y: [f64; 2],
    pub p: [f64; 2],
    /// Welfare loss `p_i^2 + w_y (y_i - k_target)^2`, penalty excluded.
    pub loss: [f64; 2],
    /// Penalty paid `t g_i`.
    pub penalty: [f64; 2],
    pub status: EquilibriumStatus,
}

impl UnionOutcome {
    pub fn witness(&self) -> Option<NoEquilibriumWitness> {
        match self.status {
            EquilibriumStatus::NoEquilibrium(w) => Some(w),
            _ => None,
        }
    }

    /// Turns a `NoEquilibrium` status into an error.
    pub fn into_result(self) -> Result<UnionOutcome> {
        match self.status {
            EquilibriumStatus::NoEquilibrium(w) => Err(PolicyError::NoEquilibrium(w)),
            _ => Ok(self),
        }
    }

    fn without_equilibrium(
        rule: UnionRule,
        shock: UnionShock,
        penalty_rate: f64,
        witness: NoEquilibriumWitness,
    ) -> Self {
        let nan = [f64::NAN; 2];
        UnionOutcome {
            rule,
            shock,
            penalty_rate,
            m: f64::NAN,
            profile: FiscalProfile::new(f64::NAN, f64::NAN),
            effective: nan,
            anticipated: nan,
            y: nan,
            p: nan,
            loss: nan,
            penalty: nan,
            status: EquilibriumStatus::NoEquilibrium(witness),
        }
    }
}

pub(crate) fn check_inputs(loss: &LossParams, c: f64, shock: &UnionShock) -> Result<()> {
    loss.validate()?;
    ensure_positive("c", c)?;
    ensure_finite("u_common", shock.u_common)?;
    ensure_finite("u_asym", shock.u_asym)
}

/// Local mix that zeroes `country`'s output gap given rational expectations.
pub fn desired_policy_mix(loss: &LossParams, c: f64, u_asym: f64, country: Country) -> Result<f64> {
    loss.validate()?;
    ensure_positive("c", c)?;
    ensure_finite("u_asym", u_asym)?;
    Ok(loss.inflation_bias(c) - country.sign() * u_asym)
}

/// Anticipated local mix when each country solves its first-order condition
/// `(1 - lambda)(2 c p_i + 2 w_y (y_i - k)) + t = 0` and `E[y_i] = 0`.
pub(crate) fn anticipated_mix(
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    penalty_rate: f64,
) -> f64 {
    (2.0 * loss.w_y * loss.k_target - penalty_rate / (1.0 - rule.lambda)) / (2.0 * c)
}

/// Fills in realized quantities for a given profile and expectation.
#[allow(clippy::too_many_arguments)]
pub(crate) fn evaluate_profile(
    rule: UnionRule,
    loss: &LossParams,
    c: f64,
    shock: UnionShock,
    penalty_rate: f64,
    profile: FiscalProfile,
    anticipated: f64,
    status: EquilibriumStatus,
) -> UnionOutcome {
    let mut out = UnionOutcome {
        rule,
        shock,
        penalty_rate,
        m: rule.monetary(&shock, &profile),
        profile,
        effective: [0.0; 2],
        anticipated: [anticipated; 2],
        y: [0.0; 2],
        p: [0.0; 2],
        loss: [0.0; 2],
        penalty: [0.0; 2],
        status,
    };
    for country in Country::BOTH {
        let i = country.index();
        let g = profile.get(country);
        let big_g = rule.effective_mix(g, profile.get(country.other()));
        let y = big_g - anticipated + country.sign() * shock.u_asym;
        let p = anticipated + c * y;
        out.effective[i] = big_g;
        out.y[i] = y;
        out.p[i] = p;
        out.loss[i] = loss.loss(p, y);
        out.penalty[i] = penalty_rate * g;
    }
    out
}

/// Nash equilibrium of the fiscal game with linear penalty rate `penalty_rate`.
pub(crate) fn solve_nash(
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
    penalty_rate: f64,
) -> Result<UnionOutcome> {
    check_inputs(loss, c, shock)?;
    ensure_finite("union.lambda", rule.lambda)?;
    ensure_finite("union.t", penalty_rate)?;
    let (rule, shock) = (*rule, *shock);

    if rule.is_strict() {
        if penalty_rate != 0.0 {
            let witness = NoEquilibriumWitness::UnboundedPenalty {
                lambda: rule.lambda,
                penalty_rate,
            };
            return Ok(UnionOutcome::without_equilibrium(
                rule,
                shock,
                penalty_rate,
                witness,
            ));
        }
        // Every profile is a best response; inaction is selected, so G_e = 0.
        return Ok(evaluate_profile(
            rule,
            loss,
            c,
            shock,
            penalty_rate,
            FiscalProfile::default(),
            0.0,
            EquilibriumStatus::Continuum,
        ));
    }

    let anticipated = anticipated_mix(&rule, loss, c, penalty_rate);
    let desired = [anticipated - shock.u_asym, anticipated + shock.u_asym];

    if rule.is_half() {
        let desired_sum = desired[0] + desired[1];
        let scale = 1.0 + anticipated.abs() + shock.u_asym.abs();
        if desired_sum.abs() > 1e-12 * scale {
            let witness = NoEquilibriumWitness::IncompatibleTargets {
                lambda: rule.lambda,
                desired_sum,
                feasible_sum: 0.0,
            };
            return Ok(UnionOutcome::without_equilibrium(
                rule,
                shock,
                penalty_rate,
                witness,
            ));
        }
        // Solutions satisfy g1 - g2 = 2 G_1; take the minimal-norm one.
        let half_gap = 0.5 * (desired[0] - desired[1]);
        return Ok(evaluate_profile(
            rule,
            loss,
            c,
            shock,
            penalty_rate,
            FiscalProfile::new(half_gap, -half_gap),
            anticipated,
            EquilibriumStatus::Continuum,
        ));
    }

    let det = rule.determinant();
    let (diag, off) = (1.0 - rule.lambda, rule.lambda);
    let profile = FiscalProfile::new(
        (diag * desired[0] + off * desired[1]) / det,
        (off * desired[0] + diag * desired[1]) / det,
    );
    Ok(evaluate_profile(
        rule,
        loss,
        c,
        shock,
        penalty_rate,
        profile,
        anticipated,
        EquilibriumStatus::Unique,
    ))
}

/// Nash equilibrium of the unsanctioned union game.
pub fn union_nash(
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
) -> Result<UnionOutcome> {
    solve_nash(rule, loss, c, shock, 0.0)
}

/// Joint minimization of both countries' losses under `lambda = 1/2`.
///
/// The rule forces `G_2 = -G_1`; the joint first-order condition with
/// rational expectations yields `G_e = 0` and `y_i = 0`. The minimal-norm
/// split `g = (-u_a, u_a)` is reported.
pub fn cooperative_equilibrium(
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
) -> Result<UnionOutcome> {
    check_inputs(loss, c, shock)?;
    if !rule.is_half() {
        return Err(PolicyError::UnsupportedRule {
            lambda: rule.lambda,
        });
    }
    let profile = FiscalProfile::new(-shock.u_asym, shock.u_asym);
    Ok(evaluate_profile(
        *rule,
        loss,
        c,
        *shock,
        0.0,
        profile,
        0.0,
        EquilibriumStatus::Unique,
    ))
}

/// Loss of `country` (penalty included) if it plays `own` while the other
/// country keeps its candidate instrument and expectations stay fixed.
pub fn deviation_loss(
    candidate: &UnionOutcome,
    loss: &LossParams,
    c: f64,
    country: Country,
    own: f64,
) -> f64 {
    let rule = candidate.rule;
    let other = candidate.profile.get(country.other());
    let anticipated = candidate.anticipated[country.index()];
    let y = rule.effective_mix(own, other) - anticipated + country.sign() * candidate.shock.u_asym;
    let p = anticipated + c * y;
    loss.loss(p, y) + candidate.penalty_rate * own
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashSearch {
    pub radius: f64,
    pub grid_points: usize,
}

impl Default for NashSearch {
    fn default() -> Self {
        NashSearch {
            radius: 5.0,
            grid_points: 1001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Largest loss reduction found for either country.
    pub worst_gain: f64,
}

pub const NASH_GAIN_TOL: f64 = 1e-8;

/// Grid search for profitable unilateral deviations around `candidate`.
///
/// The candidate's rule, shock, penalty rate and expectations are used;
/// `rule` and `shock` must agree with the candidate.
pub fn verify_nash(
    candidate: &UnionOutcome,
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
    search: NashSearch,
) -> Result<NashCheck> {
    if search.grid_points < 3 {
        return Err(PolicyError::InvalidParameter {
            name: "grid_points",
            value: search.grid_points as f64,
            reason: "must be >= 3",
        });
    }
    ensure_positive("search_radius", search.radius)?;
    check_inputs(loss, c, shock)?;
    if candidate.witness().is_some() || candidate.rule != *rule || candidate.shock != *shock {
        return Ok(NashCheck {
            is_nash: false,
            worst_gain: f64::INFINITY,
        });
    }
    let steps = (search.grid_points - 1) as f64;
    let mut worst_gain = 0.0f64;
    for country in Country::BOTH {
        let current = candidate.profile.get(country);
        let base = deviation_loss(candidate, loss, c, country, current);
        let best = (0..search.grid_points)
            .map(|k| current - search.radius + 2.0 * search.radius * k as f64 / steps)
            .map(|g| deviation_loss(candidate, loss, c, country, g))
            .fold(f64::INFINITY, f64::min);
        worst_gain = worst_gain.max(base - best);
    }
    Ok(NashCheck {
        is_nash: worst_gain <= NASH_GAIN_TOL,
        worst_gain,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum BestResponseVerdict {
    /// Successive profiles agree within `1e-10`; `iterations` counts the
    /// rounds needed to reach the fixed point.
    Converged {
        profile: FiscalProfile,
        iterations: usize,
    },
    /// Stationary, but on a continuum of best responses (singular rule).
    StationarySet {
        profile: FiscalProfile,
        iterations: usize,
    },
    /// Some `|g_i|` exceeded the divergence bound after `iterations` rounds.
    Diverged { iterations: usize },
    /// Neither criterion met within the iteration budget.
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseTrace {
    /// Initial profile followed by the profile after each round.
    pub profiles: Vec<FiscalProfile>,
    pub verdict: BestResponseVerdict,
}

pub const BEST_RESPONSE_TOL: f64 = 1e-10;

/// Alternating exact best responses (country 1, then country 2 against the
/// updated `g_1`), expectations held at their rational value.
///
/// With `lambda = 1` the own loss is flat and each country keeps its current
/// instrument.
pub fn best_response_dynamics(
    rule: &UnionRule,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
    init: FiscalProfile,
    max_iters: usize,
    divergence_bound: f64,
) -> Result<BestResponseTrace> {
    check_inputs(loss, c, shock)?;
    if max_iters < 1 {
        return Err(PolicyError::InvalidParameter {
            name: "max_iters",
            value: max_iters as f64,
            reason: "must be >= 1",
        });
    }
    ensure_positive("divergence_bound", divergence_bound)?;
    ensure_finite("g1", init.g1)?;
    ensure_finite("g2", init.g2)?;

    let singular = rule.is_strict() || rule.is_half();
    let anticipated = if rule.is_strict() {
        0.0
    } else {
        anticipated_mix(rule, loss, c, 0.0)
    };
    let best_response = |country: Country, profile: &FiscalProfile| -> f64 {
        if rule.is_strict() {
            return profile.get(country);
        }
        let target = anticipated - country.sign() * shock.u_asym;
        (target + rule.lambda * profile.get(country.other())) / (1.0 - rule.lambda)
    };

    let mut profiles = vec![init];
    let mut current = init;
    for round in 1..=max_iters {
        let mut next = current;
        next.g1 = best_response(Country::One, &next);
        next.g2 = best_response(Country::Two, &next);
        profiles.push(next);
        if next.g1.abs() > divergence_bound
            || next.g2.abs() > divergence_bound
            || !next.g1.is_finite()
            || !next.g2.is_finite()
        {
            return Ok(BestResponseTrace {
                profiles,
                verdict: BestResponseVerdict::Diverged { iterations: round },
            });
        }
        if next.max_abs_diff(&current) < BEST_RESPONSE_TOL {
            let iterations = round - 1;
            let verdict = if singular {
                BestResponseVerdict::StationarySet {
                    profile: next,
                    iterations,
                }
            } else {
                BestResponseVerdict::Converged {
                    profile: next,
                    iterations,
                }
            };
            return Ok(BestResponseTrace { profiles, verdict });
        }
        current = next;
    }
    Ok(BestResponseTrace {
        profiles,
        verdict: BestResponseVerdict::Undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{bracket_around, golden_section_min};

    fn defaults() -> (LossParams, f64, UnionShock) {
        (LossParams::default(), 1.0, UnionShock::new(0.2, 0.3))
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn desired_mix_examples() {
        let loss = LossParams::default();
        assert!(close(
            desired_policy_mix(&loss, 1.0, 0.3, Country::One).unwrap(),
            0.7
        ));
        assert!(close(
            desired_policy_mix(&loss, 1.0, 0.3, Country::Two).unwrap(),
            1.3
        ));
        let flat = LossParams::new(1.0, 0.0).unwrap();
        assert_eq!(
            desired_policy_mix(&flat, 1.0, 0.0, Country::One).unwrap(),
            0.0
        );
        assert!(desired_policy_mix(&loss, 0.0, 0.3, Country::One).is_err());
    }

    /// Country 1's own loss minimized numerically, with G_e at its rational value.
    #[test]
    fn desired_mix_minimizes_own_loss() {
        let loss = LossParams::new(1.7, 0.6).unwrap();
        let (c, u_a) = (0.8, 0.45);
        let g_e = loss.inflation_bias(c);
        for country in Country::BOTH {
            let own = |big_g: f64| {
                let y = big_g - g_e + country.sign() * u_a;
                loss.loss(g_e + c * y, y)
            };
            let (lo, hi) = bracket_around(g_e);
            let numeric = golden_section_min(own, lo, hi, 1e-11);
            let analytic = desired_policy_mix(&loss, c, u_a, country).unwrap();
            assert!((numeric - analytic).abs() < 1e-7);
        }
    }

    #[test]
    fn autonomy_example() {
        let (loss, c, shock) = defaults();
        let o = union_nash(&UnionRule::AUTONOMY, &loss, c, &shock).unwrap();
        assert_eq!(o.status, EquilibriumStatus::Unique);
        assert!(close(o.m, -0.2));
        assert!(close(o.profile.g1, 0.7) && close(o.profile.g2, 1.3));
        assert!(close(o.y[0], 0.0) && close(o.y[1], 0.0));
        assert!(close(o.p[0], 1.0) && close(o.p[1], 1.0));
    }

    #[test]
    fn quarter_rule_example() {
        let (loss, c, shock) = defaults();
        let rule = UnionRule::new(0.25).unwrap();
        let o = union_nash(&rule, &loss, c, &shock).unwrap();
        assert!(close(o.profile.g1, 1.7) && close(o.profile.g2, 2.3));
        assert!(close(o.effective[0], 0.7) && close(o.effective[1], 1.3));
        assert!(close(o.y[0], 0.0) && close(o.y[1], 0.0));
        let check = verify_nash(&o, &rule, &loss, c, &shock, NashSearch::default()).unwrap();
        assert!(check.is_nash, "{check:?}");
    }

    #[test]
    fn strict_rule_example() {
        let (loss, c, shock) = defaults();
        let o = union_nash(&UnionRule::STRICT, &loss, c, &shock).unwrap();
        assert_eq!(o.status, EquilibriumStatus::Continuum);
        assert_eq!(o.profile, FiscalProfile::default());
        assert!(close(o.y[0], 0.3) && close(o.y[1], -0.3));
        assert!(close(o.p[0], 0.3) && close(o.p[1], -0.3));
        assert_eq!(o.anticipated, [0.0, 0.0]);
    }

    #[test]
    fn half_rule_has_no_equilibrium_with_bias() {
        let (loss, c, _) = defaults();
        for shock in [UnionShock::new(0.0, 0.0), UnionShock::new(-1.0, 0.7)] {
            let o = union_nash(&UnionRule::HALF, &loss, c, &shock).unwrap();
            match o.status {
                EquilibriumStatus::NoEquilibrium(NoEquilibriumWitness::IncompatibleTargets {
                    desired_sum,
                    feasible_sum,
                    ..
                }) => {
                    assert!(close(desired_sum, 2.0));
                    assert_eq!(feasible_sum, 0.0);
                }
                other => panic!("unexpected status {other:?}"),
            }
            assert!(matches!(
                o.into_result(),
                Err(PolicyError::NoEquilibrium(_))
            ));
        }
    }

    #[test]
    fn half_rule_without_bias_selects_minimal_norm() {
        let loss = LossParams::new(1.0, 0.0).unwrap();
        let o = union_nash(&UnionRule::HALF, &loss, 1.0, &UnionShock::new(0.2, 0.3)).unwrap();
        assert_eq!(o.status, EquilibriumStatus::Continuum);
        assert!(close(o.profile.g1, -0.3) && close(o.profile.g2, 0.3));
        assert!(close(o.y[0], 0.0) && close(o.y[1], 0.0));
    }

    #[test]
    fn verify_nash_examples() {
        let (loss, c, shock) = defaults();
        let rule = UnionRule::AUTONOMY;
        let o = union_nash(&rule, &loss, c, &shock).unwrap();
        let check = verify_nash(&o, &rule, &loss, c, &shock, NashSearch::default()).unwrap();
        assert!(check.is_nash && check.worst_gain <= 1e-8);

        let mut perturbed = o;
        perturbed.profile.g1 += 0.1;
        let check =
            verify_nash(&perturbed, &rule, &loss, c, &shock, NashSearch::default()).unwrap();
        assert!(!check.is_nash);
        assert!(
            (check.worst_gain - 0.02).abs() < 1e-9,
            "{}",
            check.worst_gain
        );

        let strict = UnionRule::STRICT;
        let mut any = union_nash(&strict, &loss, c, &shock).unwrap();
        any.profile = FiscalProfile::new(1.0, -2.5);
        let check = verify_nash(&any, &strict, &loss, c, &shock, NashSearch::default()).unwrap();
        assert!(check.is_nash);

        let bad = NashSearch {
            radius: 1.0,
            grid_points: 2,
        };
        assert!(verify_nash(&o, &rule, &loss, c, &shock, bad).is_err());
    }

    #[test]
    fn best_response_autonomy_one_round() {
        let (loss, c, shock) = defaults();
        let trace = best_response_dynamics(
            &UnionRule::AUTONOMY,
            &loss,
            c,
            &shock,
            FiscalProfile::new(-3.0, 9.0),
            100,
            1e6,
        )
        .unwrap();
        match trace.verdict {
            BestResponseVerdict::Converged {
                profile,
                iterations,
            } => {
                assert_eq!(iterations, 1);
                assert!(close(profile.g1, 0.7) && close(profile.g2, 1.3));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn best_response_quarter_rule_converges() {
        let (loss, c, shock) = defaults();
        let trace = best_response_dynamics(
            &UnionRule::new(0.25).unwrap(),
            &loss,
            c,
            &shock,
            FiscalProfile::default(),
            200,
            1e6,
        )
        .unwrap();
        match trace.verdict {
            BestResponseVerdict::Converged { profile, .. } => {
                assert!((profile.g1 - 1.7).abs() < 1e-9 && (profile.g2 - 2.3).abs() < 1e-9);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn best_response_half_rule_diverges_linearly() {
        let (loss, c, shock) = defaults();
        let trace = best_response_dynamics(
            &UnionRule::HALF,
            &loss,
            c,
            &shock,
            FiscalProfile::default(),
            50,
            100.0,
        )
        .unwrap();
        assert!(
            matches!(trace.verdict, BestResponseVerdict::Diverged { iterations } if iterations <= 50)
        );
        // g2 moves by 2 (desired G1 + G2) = 4 w_y k / c every round
        let steps: Vec<f64> = trace
            .profiles
            .windows(2)
            .skip(1)
            .map(|w| w[1].g2 - w[0].g2)
            .collect();
        for s in steps {
            assert!((s - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn best_response_strict_rule_is_inert() {
        let (loss, c, shock) = defaults();
        let init = FiscalProfile::new(0.4, -0.1);
        let trace =
            best_response_dynamics(&UnionRule::STRICT, &loss, c, &shock, init, 10, 1e6).unwrap();
        assert_eq!(
            trace.verdict,
            BestResponseVerdict::StationarySet {
                profile: init,
                iterations: 0
            }
        );
    }

    #[test]
    fn best_response_rejects_bad_bounds() {
        let (loss, c, shock) = defaults();
        let r = UnionRule::AUTONOMY;
        assert!(
            best_response_dynamics(&r, &loss, c, &shock, FiscalProfile::default(), 0, 1.0).is_err()
        );
        assert!(
            best_response_dynamics(&r, &loss, c, &shock, FiscalProfile::default(), 5, 0.0).is_err()
        );
    }

    #[test]
    fn cooperative_examples() {
        let loss = LossParams::default();
        let o = cooperative_equilibrium(&UnionRule::HALF, &loss, 1.0, &UnionShock::new(0.0, 0.3))
            .unwrap();
        assert!(close(o.profile.g1, -0.3) && close(o.profile.g2, 0.3));
        assert_eq!(o.y, [0.0, 0.0]);
        assert_eq!(o.p, [0.0, 0.0]);
        assert_eq!(o.loss, [1.0, 1.0]);
        let o = cooperative_equilibrium(&UnionRule::HALF, &loss, 1.0, &UnionShock::new(0.4, 0.0))
            .unwrap();
        assert_eq!(o.profile, FiscalProfile::default());
        assert!(matches!(
            cooperative_equilibrium(&UnionRule::AUTONOMY, &loss, 1.0, &UnionShock::default()),
            Err(PolicyError::UnsupportedRule { .. })
        ));
    }

    /// Joint loss minimized over G_1 on a grid with G_e held at zero.
    #[test]
    fn cooperative_minimizes_joint_loss() {
        let loss = LossParams::new(0.9, 1.2).unwrap();
        let (c, shock) = (1.4, UnionShock::new(0.1, -0.35));
        let o = cooperative_equilibrium(&UnionRule::HALF, &loss, c, &shock).unwrap();
        let joint = |g1: f64| {
            let mut cand = o;
            cand.profile = FiscalProfile::new(g1, o.profile.g2);
            let r = evaluate_profile(
                cand.rule,
                &loss,
                c,
                shock,
                0.0,
                cand.profile,
                0.0,
                cand.status,
            );
            r.loss[0] + r.loss[1]
        };
        let (lo, hi) = bracket_around(o.profile.g1);
        let g1 = golden_section_min(joint, lo, hi, 1e-11);
        assert!((g1 - o.profile.g1).abs() < 1e-7);
    }
}
