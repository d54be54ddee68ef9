//! Flat `key = value` scenario files.
//!
//! ```text
//! # comment
//! structural.c = 1.0        # or structural.{k_is, s, b_lm, e}
//! loss.w_y = 1.0
//! loss.k_target = 1.0
//! union.lambda = 0.0
//! union.t = 0.0
//! shocks.sigma_u = 0.2
//! shocks.sigma_a = 0.3
//! shocks.family = "gaussian"   # or "uniform"
//! shocks.u = 0.2               # realization used by `solve`
//! shocks.u_a = 0.3
//! run.n_draws = 100000
//! run.seed = 42
//! ```
//!
//! Every line is valid TOML (dotted keys). Keys other than `structural.*`
//! and `structural.c` fall back to the defaults of [`Scenario::default`].

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::closed_policy::LossParams;
use crate::mc_engine::{Model, ShockDistribution};
use crate::sanctions::SanctionContract;
use crate::structural::{reduced_form_coefficients, StructuralParams};
use crate::union_game::{UnionRule, UnionShock};
use crate::PolicyError;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub line: Option<usize>,
    pub message: String,
}

impl ScenarioError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ScenarioError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        ScenarioError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// Where the inflation slope `c` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlopeSource {
    Structural(StructuralParams),
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub slope: SlopeSource,
    pub loss: LossParams,
    pub rule: UnionRule,
    pub contract: SanctionContract,
    pub shocks: ShockDistribution,
    /// Shock realization used by single-outcome commands.
    pub realized: UnionShock,
    pub n_draws: u64,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        let model = Model::default();
        Scenario {
            slope: SlopeSource::Explicit(model.c),
            loss: model.loss,
            rule: model.rule,
            contract: model.contract,
            shocks: model.shocks,
            realized: UnionShock::new(0.2, 0.3),
            n_draws: 100_000,
            seed: 42,
        }
    }
}

const STRUCTURAL_KEYS: [&str; 4] = [
    "structural.k_is",
    "structural.s",
    "structural.b_lm",
    "structural.e",
];

const KNOWN_KEYS: [&str; 16] = [
    "structural.k_is",
    "structural.s",
    "structural.b_lm",
    "structural.e",
    "structural.c",
    "loss.w_y",
    "loss.k_target",
    "union.lambda",
    "union.t",
    "shocks.sigma_u",
    "shocks.sigma_a",
    "shocks.family",
    "shocks.u",
    "shocks.u_a",
    "run.n_draws",
    "run.seed",
];

struct Entry {
    line: usize,
    raw: String,
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_string = !in_string,
            '#' if !in_string => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_entries(text: &str) -> Result<HashMap<String, Entry>, ScenarioError> {
    let mut entries: HashMap<String, Entry> = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ScenarioError::at(line_no, format!("expected 'key = value', found '{line}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ScenarioError::at(line_no, format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(ScenarioError::at(
                line_no,
                format!("missing value for '{key}'"),
            ));
        }
        if let Some(previous) = entries.get(key) {
            return Err(ScenarioError::at(
                line_no,
                format!(
                    "duplicate key '{key}' (first set on line {})",
                    previous.line
                ),
            ));
        }
        entries.insert(
            key.to_string(),
            Entry {
                line: line_no,
                raw: value.to_string(),
            },
        );
    }
    Ok(entries)
}

fn unquote(raw: &str) -> &str {
    raw.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(raw)
}

struct Fields {
    entries: HashMap<String, Entry>,
}

impl Fields {
    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        let text = entry.raw.replace('_', "");
        let value: f64 = text.parse().map_err(|_| {
            ScenarioError::at(
                entry.line,
                format!("{key}: '{}' is not a number", entry.raw),
            )
        })?;
        if !value.is_finite() {
            return Err(ScenarioError::at(
                entry.line,
                format!("{key}: value must be finite"),
            ));
        }
        Ok(Some(value))
    }

    fn integer(&self, key: &str) -> Result<Option<u64>, ScenarioError> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        entry.raw.replace('_', "").parse().map(Some).map_err(|_| {
            ScenarioError::at(
                entry.line,
                format!("{key}: '{}' is not a non-negative integer", entry.raw),
            )
        })
    }

    fn string(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|e| (e.line, unquote(&e.raw)))
    }

    /// Maps a validation failure back to the line of the offending key.
    fn anchor(&self, err: PolicyError) -> ScenarioError {
        let message = err.to_string();
        if let PolicyError::InvalidParameter { name, .. } = err {
            if let Some(line) = self.line(name) {
                return ScenarioError::at(line, message);
            }
        }
        ScenarioError::global(message)
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let fields = Fields {
            entries: parse_entries(text)?,
        };
        let mut scenario = Scenario::default();

        let present: Vec<&str> = STRUCTURAL_KEYS
            .iter()
            .copied()
            .filter(|k| fields.line(k).is_some())
            .collect();
        let explicit_c = fields.float("structural.c")?;
        scenario.slope = match (present.len(), explicit_c) {
            (0, Some(c)) => SlopeSource::Explicit(c),
            (0, None) => {
                return Err(ScenarioError::global(
                    "missing inflation slope: set structural.c or the structural block (structural.k_is, structural.s, structural.b_lm, structural.e)",
                ))
            }
            (n, Some(_)) if n > 0 => {
                return Err(ScenarioError::at(
                    fields.line("structural.c").unwrap_or(0),
                    "structural.c conflicts with the structural block; set one or the other",
                ))
            }
            (4, None) => {
                let get = |k: &str| fields.float(k).map(|v| v.unwrap_or(f64::NAN));
                let params = StructuralParams {
                    k_is: get("structural.k_is")?,
                    s: get("structural.s")?,
                    b_lm: get("structural.b_lm")?,
                    e: get("structural.e")?,
                };
                params.validate().map_err(|e| fields.anchor(e))?;
                SlopeSource::Structural(params)
            }
            _ => {
                let missing: Vec<&str> = STRUCTURAL_KEYS.iter().copied().filter(|k| !present.contains(k)).collect();
                return Err(ScenarioError::global(format!(
                    "incomplete structural block: missing {}",
                    missing.join(", ")
                )));
            }
        };

        if let Some(v) = fields.float("loss.w_y")? {
            scenario.loss.w_y = v;
        }
        if let Some(v) = fields.float("loss.k_target")? {
            scenario.loss.k_target = v;
        }
        if let Some(v) = fields.float("union.lambda")? {
            scenario.rule = UnionRule { lambda: v };
        }
        if let Some(v) = fields.float("union.t")? {
            scenario.contract = SanctionContract { t: v };
        }
        if let Some(v) = fields.float("shocks.sigma_u")? {
            scenario.shocks.sigma_u = v;
        }
        if let Some(v) = fields.float("shocks.sigma_a")? {
            scenario.shocks.sigma_a = v;
        }
        if let Some((line, name)) = fields.string("shocks.family") {
            scenario.shocks.family = name
                .parse()
                .map_err(|e: String| ScenarioError::at(line, e))?;
        }
        if let Some(v) = fields.float("shocks.u")? {
            scenario.realized.u_common = v;
        }
        if let Some(v) = fields.float("shocks.u_a")? {
            scenario.realized.u_asym = v;
        }
        if let Some(v) = fields.integer("run.n_draws")? {
            if v == 0 {
                return Err(ScenarioError::at(
                    fields.line("run.n_draws").unwrap_or(0),
                    "run.n_draws must be >= 1",
                ));
            }
            scenario.n_draws = v;
        }
        if let Some(v) = fields.integer("run.seed")? {
            scenario.seed = v;
        }

        if let SlopeSource::Explicit(c) = scenario.slope {
            if c <= 0.0 {
                return Err(ScenarioError::at(
                    fields.line("structural.c").unwrap_or(0),
                    format!("structural.c = {c}: must be > 0"),
                ));
            }
        }
        scenario.model().validate().map_err(|e| fields.anchor(e))?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::global(format!("cannot read {}: {e}", path.display())))?;
        Scenario::parse(&text).map_err(|e| ScenarioError {
            line: e.line,
            message: format!("{}: {}", path.display(), e.message),
        })
    }

    /// Inflation slope, derived from the structural block when present.
    pub fn c(&self) -> f64 {
        match self.slope {
            SlopeSource::Explicit(c) => c,
            SlopeSource::Structural(params) => reduced_form_coefficients(&params)
                .map(|rf| rf.c)
                .unwrap_or(f64::NAN),
        }
    }

    pub fn model(&self) -> Model {
        Model {
            loss: self.loss,
            c: self.c(),
            rule: self.rule,
            contract: self.contract,
            shocks: self.shocks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc_engine::ShockFamily;

    #[test]
    fn minimal_scenario_uses_defaults() {
        let s = Scenario::parse("structural.c = 1.0\n").unwrap();
        assert_eq!(s, Scenario::default());
    }

    #[test]
    fn full_scenario() {
        let text = r#"
# union with mild sanctions
structural.k_is = 1.0
structural.s = 1.0
structural.b_lm = 1.0
structural.e = 2.0
loss.w_y = 0.5        # output weight
loss.k_target = 0.8
union.lambda = 0.25
union.t = 0.1
shocks.sigma_u = 0.1
shocks.sigma_a = 0.4
shocks.family = "uniform"
shocks.u = -0.1
shocks.u_a = 0.05
run.n_draws = 10_000
run.seed = 7
"#;
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.c(), 0.5);
        assert_eq!(
            s.loss,
            LossParams {
                w_y: 0.5,
                k_target: 0.8
            }
        );
        assert_eq!(s.rule.lambda, 0.25);
        assert_eq!(s.contract.t, 0.1);
        assert_eq!(s.shocks.family, ShockFamily::UniformSymmetric);
        assert_eq!(s.realized, UnionShock::new(-0.1, 0.05));
        assert_eq!((s.n_draws, s.seed), (10_000, 7));
    }

    #[test]
    fn missing_slope_is_rejected() {
        let err = Scenario::parse("loss.w_y = 1\n").unwrap_err();
        assert!(err.message.contains("missing inflation slope"), "{err}");
    }

    #[test]
    fn conflicting_and_partial_slope_sources() {
        let err = Scenario::parse("structural.e = 1\nstructural.c = 1\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        let err = Scenario::parse("structural.e = 1\nstructural.s = 1\n").unwrap_err();
        assert!(err.message.contains("structural.k_is"), "{err}");
    }

    #[test]
    fn errors_are_line_anchored() {
        let err = Scenario::parse("structural.c = 1\nloss.w_y = -2\n").unwrap_err();
        assert_eq!(err.line, Some(2), "{err}");
        let err = Scenario::parse("structural.c = 1\n\nloss.k = 1\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains("unknown key"));
        let err = Scenario::parse("structural.c = abc\n").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = Scenario::parse("structural.c = 1\nstructural.c = 2\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        let err = Scenario::parse("structural.c = 1\nshocks.family = \"cauchy\"\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        let err = Scenario::parse("structural.c = 0\n").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = Scenario::parse("structural.c 1\n").unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = Scenario::parse(
            "structural.e = -1\nstructural.k_is = 1\nstructural.s = 1\nstructural.b_lm = 1\n",
        )
        .unwrap_err();
        assert_eq!(err.line, Some(1), "{err}");
    }
}
