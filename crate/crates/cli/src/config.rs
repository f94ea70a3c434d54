//! Experiment configuration: schema, parsing with itemized errors, and
//! command-line overrides.
//!
//! Configs are JSON documents (conventionally `.cfg`). Parsing runs in
//! two stages: a syntax pass that reports line and column on malformed
//! input, and a semantic pass that walks the whole document collecting
//! *every* violation — each tagged with the path of the offending field —
//! so a single round trip fixes all mistakes. Command-line flags are
//! folded into the document before the semantic pass, which makes a flag
//! and the file key it mirrors validate identically.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use vvlab_core::disk::RadialProfile;
use vvlab_core::error::Error as CoreError;
use vvlab_core::shear::{ShearProfile, DEFAULT_HALF_WIDTH};

use crate::CliError;

/// Default disk spectral truncation when the config omits `K`.
pub const DEFAULT_MODES: usize = 2000;

/// Largest accepted `K`; beyond this a zero table stops being desk-scale.
const MAX_MODES: usize = 200_000;

/// Which model flow an experiment drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flow {
    Disk,
    Shear,
}

/// Initial-data profile in the form the config file carries it. Table
/// profiles are resolved (file read and parsed) during validation, so a
/// valid `ProfileConfig` always holds its knots inline and the echo of a
/// run reproduces it without the original file.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProfileConfig {
    /// Constant data: disk vorticity ω₀ ≡ value or shear velocity
    /// φ₀ ≡ value.
    Constant { value: f64 },
    /// Disk-only polynomial in r²: ω₀(r) = Σ cᵢ r^{2i}.
    PolyR2 { coeffs: Vec<f64> },
    /// Shear-only exponential: φ₀(z) = amplitude·e^{−rate·z}.
    ExpDecay { amplitude: f64, rate: f64 },
    /// Shear-only polynomial-Gaussian: φ₀(z) = (Σ cᵢ zⁱ)·e^{−(z/width)²}.
    PolyGaussian { width: f64, coeffs: Vec<f64> },
    /// Sampled profile from a two-column CSV (abscissa, value), or inline
    /// knots/values. `bound_amp`/`bound_rate` declare the decay envelope
    /// |φ₀(z)| ≤ B·e^{−βz} for shear tables.
    Table {
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        knots: Vec<f64>,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        bound_amp: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        bound_rate: Option<f64>,
    },
}

impl ProfileConfig {
    /// The disk vorticity profile this config describes.
    pub fn build_disk(&self) -> vvlab_core::Result<RadialProfile> {
        match self {
            ProfileConfig::Constant { value } => RadialProfile::poly_r2(vec![*value]),
            ProfileConfig::PolyR2 { coeffs } => RadialProfile::poly_r2(coeffs.clone()),
            ProfileConfig::Table { knots, values, .. } => {
                RadialProfile::table(knots.clone(), values.clone())
            }
            ProfileConfig::ExpDecay { .. } | ProfileConfig::PolyGaussian { .. } => {
                Err(CoreError::InvalidProfile {
                    detail: "exp_decay and poly_gaussian describe shear data; the disk flow \
                             takes constant, poly_r2, or table"
                        .into(),
                })
            }
        }
    }

    /// The shear velocity profile this config describes.
    pub fn build_shear(&self) -> vvlab_core::Result<ShearProfile> {
        match self {
            ProfileConfig::Constant { value } => ShearProfile::constant(*value),
            ProfileConfig::ExpDecay { amplitude, rate } => {
                ShearProfile::exp_decay(*amplitude, *rate)
            }
            ProfileConfig::PolyGaussian { width, coeffs } => {
                ShearProfile::poly_gaussian(coeffs.clone(), *width)
            }
            ProfileConfig::Table {
                knots,
                values,
                bound_amp,
                bound_rate,
                ..
            } => {
                // Without a declared envelope, cover the samples exactly:
                // a flat bound at the largest magnitude.
                let amp = bound_amp
                    .unwrap_or_else(|| values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                let rate = bound_rate.unwrap_or(0.0);
                ShearProfile::table(knots.clone(), values.clone(), amp, rate)
            }
            ProfileConfig::PolyR2 { .. } => Err(CoreError::InvalidProfile {
                detail: "poly_r2 describes disk vorticity; the shear flow takes constant, \
                         exp_decay, poly_gaussian, or table"
                    .into(),
            }),
        }
    }
}

/// Boundary-layer geometry shared by the layer diagnostics: the Kato
/// constant c scales the width c·ν layer, while `delta`/`delta_star` give
/// the absolute widths used by `l1_mass` and `mass_budget`.
#[derive(Debug, Clone, Serialize)]
pub struct LayerConfig {
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_star: Option<f64>,
}

impl Default for LayerConfig {
    fn default() -> LayerConfig {
        LayerConfig {
            c: 1.0,
            delta: None,
            delta_star: None,
        }
    }
}

/// Which artifact `run` echoes to stdout; both the CSV and the JSON
/// summary are always written to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Output stem and echo format. Artifacts land at `<path>.csv` and
/// `<path>.json`, resolved against the working directory.
#[derive(Debug, Clone, Serialize)]
pub struct OutputConfig {
    pub path: String,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> OutputConfig {
        OutputConfig {
            path: "vvlab_out".into(),
            format: OutputFormat::Csv,
        }
    }
}

/// Diagnostics the `diagnose` subcommand can evaluate. Unknown names are
/// rejected when the config is parsed, not when the run reaches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    KatoLayer,
    L1Mass,
    BoundaryFlux,
    SheetPairing,
    WeakPairing,
    MassBudget,
    LpNorms,
}

impl Diagnostic {
    const REGISTRY: [(&'static str, Diagnostic); 7] = [
        ("kato_layer", Diagnostic::KatoLayer),
        ("l1_mass", Diagnostic::L1Mass),
        ("boundary_flux", Diagnostic::BoundaryFlux),
        ("sheet_pairing", Diagnostic::SheetPairing),
        ("weak_pairing", Diagnostic::WeakPairing),
        ("mass_budget", Diagnostic::MassBudget),
        ("lp_norms", Diagnostic::LpNorms),
    ];

    fn from_name(name: &str) -> Option<Diagnostic> {
        Self::REGISTRY
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, d)| *d)
    }

    /// The config-file name of this diagnostic.
    pub fn name(self) -> &'static str {
        Self::REGISTRY
            .iter()
            .find(|(_, d)| *d == self)
            .map(|(n, _)| *n)
            .expect("every diagnostic is registered")
    }

    fn known_names() -> String {
        let names: Vec<&str> = Self::REGISTRY.iter().map(|(n, _)| *n).collect();
        names.join(", ")
    }

    /// Pairing and budget diagnostics read the disk's spectral expansion
    /// and have no shear counterpart.
    fn needs_disk(self) -> bool {
        matches!(
            self,
            Diagnostic::SheetPairing | Diagnostic::WeakPairing | Diagnostic::MassBudget
        )
    }

    /// These integrate over an absolute wall layer and need `layer.delta`.
    fn needs_delta(self) -> bool {
        matches!(self, Diagnostic::L1Mass | Diagnostic::MassBudget)
    }
}

/// A fully validated experiment: every field present (defaults filled),
/// every table profile resolved. Serializing it yields a document that
/// parses back to the same experiment — the JSON summary embeds it as
/// `config_echo` so a run can be reproduced from its artifact alone.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub flow: Flow,
    pub profile: ProfileConfig,
    pub nu_grid: Vec<f64>,
    /// Time horizon T of the sup norm and the horizon diagnostics.
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Disk spectral truncation; carried (and ignored) for shear runs.
    #[serde(rename = "K")]
    pub modes: usize,
    /// Channel half-width L; carried (and ignored) for disk runs.
    pub half_width: f64,
    /// Evaluation time for time-point diagnostics; defaults to T.
    #[serde(rename = "t", skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    /// Points in the geometric time grid of the sup norm.
    pub time_points: usize,
    pub layer: LayerConfig,
    pub diagnostics: Vec<Diagnostic>,
    pub output: OutputConfig,
}

/// Why a config was refused.
#[derive(Debug)]
pub enum ConfigError {
    /// The document is not well-formed JSON.
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The document parsed but violated the schema; every violation is
    /// listed, each prefixed with the path of the offending field.
    Semantic { items: Vec<String> },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax {
                line,
                column,
                message,
            } => write!(f, "config syntax error at line {line}, column {column}: {message}"),
            ConfigError::Semantic { items } => {
                writeln!(f, "invalid config ({} problem(s)):", items.len())?;
                for item in items {
                    writeln!(f, "  - {item}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parses and validates a config document. `base_dir` anchors relative
/// table-file paths (the directory of the config file, or the working
/// directory for flag-built configs).
pub fn parse_config(text: &str, base_dir: &Path) -> Result<ExperimentConfig, ConfigError> {
    validate(syntax_parse(text)?, base_dir)
}

fn syntax_parse(text: &str) -> Result<Value, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Collects every semantic violation in the document before refusing it.
pub fn validate(document: Value, base_dir: &Path) -> Result<ExperimentConfig, ConfigError> {
    let Some(obj) = document.as_object() else {
        return Err(ConfigError::Semantic {
            items: vec!["config: the document root must be an object".into()],
        });
    };
    let mut v = Validator::default();

    const KNOWN_KEYS: [&str; 11] = [
        "flow",
        "profile",
        "nu_grid",
        "T",
        "K",
        "half_width",
        "t",
        "time_points",
        "layer",
        "diagnostics",
        "output",
    ];
    for key in obj.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            v.fail(key, "unknown field");
        }
    }

    let flow = match obj.get("flow") {
        None => {
            v.fail("flow", "required");
            None
        }
        Some(Value::String(s)) if s == "disk" => Some(Flow::Disk),
        Some(Value::String(s)) if s == "shear" => Some(Flow::Shear),
        Some(_) => {
            v.fail("flow", "must be \"disk\" or \"shear\"");
            None
        }
    };

    let profile = validate_profile(&mut v, obj.get("profile"), flow, base_dir);
    let nu_grid = validate_nu_grid(&mut v, obj.get("nu_grid"));
    let horizon = v.required_positive(obj.get("T"), "T");
    let modes = v.count_or(obj.get("K"), "K", DEFAULT_MODES, 1, MAX_MODES);
    let half_width = v
        .optional_positive(obj.get("half_width"), "half_width")
        .unwrap_or(DEFAULT_HALF_WIDTH);
    let time = v.optional_positive(obj.get("t"), "t");
    let time_points = v.count_or(obj.get("time_points"), "time_points",
        vvlab_core::rates::DEFAULT_TIME_POINTS, 2, 4096);
    let layer = validate_layer(&mut v, obj.get("layer"), flow);
    let diagnostics = validate_diagnostics(&mut v, obj.get("diagnostics"), flow, &layer);
    let output = validate_output(&mut v, obj.get("output"));

    if !v.items.is_empty() {
        return Err(ConfigError::Semantic { items: v.items });
    }
    Ok(ExperimentConfig {
        flow: flow.expect("validated"),
        profile: profile.expect("validated"),
        nu_grid: nu_grid.expect("validated"),
        horizon: horizon.expect("validated"),
        modes,
        half_width,
        time,
        time_points,
        layer,
        diagnostics,
        output,
    })
}

#[derive(Default)]
struct Validator {
    items: Vec<String>,
}

impl Validator {
    fn fail(&mut self, path: &str, message: impl fmt::Display) {
        self.items.push(format!("{path}: {message}"));
    }

    /// A required positive finite number; pushes an error (and returns
    /// `None`) otherwise.
    fn required_positive(&mut self, value: Option<&Value>, path: &str) -> Option<f64> {
        match value {
            None => {
                self.fail(path, "required");
                None
            }
            Some(v) => self.positive(v, path),
        }
    }

    /// An optional positive finite number; absence is fine, a present but
    /// invalid value is an error.
    fn optional_positive(&mut self, value: Option<&Value>, path: &str) -> Option<f64> {
        value.and_then(|v| self.positive(v, path))
    }

    fn positive(&mut self, value: &Value, path: &str) -> Option<f64> {
        match value.as_f64() {
            Some(x) if x > 0.0 && x.is_finite() => Some(x),
            Some(_) => {
                self.fail(path, "must be positive");
                None
            }
            None => {
                self.fail(path, "must be a number");
                None
            }
        }
    }

    fn finite(&mut self, value: &Value, path: &str) -> Option<f64> {
        match value.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.fail(path, "must be a finite number");
                None
            }
        }
    }

    /// An optional integer within [lo, hi], defaulting when absent (and
    /// after an error, so later cross-checks still run).
    fn count_or(
        &mut self,
        value: Option<&Value>,
        path: &str,
        default: usize,
        lo: usize,
        hi: usize,
    ) -> usize {
        let Some(v) = value else { return default };
        match v.as_f64() {
            Some(x) if x.fract() == 0.0 && x >= lo as f64 && x <= hi as f64 => x as usize,
            _ => {
                self.fail(path, format!("must be an integer between {lo} and {hi}"));
                default
            }
        }
    }

    fn finite_array(&mut self, value: &Value, path: &str) -> Option<Vec<f64>> {
        let Some(items) = value.as_array() else {
            self.fail(path, "must be an array of numbers");
            return None;
        };
        if items.is_empty() {
            self.fail(path, "must not be empty");
            return None;
        }
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.finite(item, &format!("{path}[{i}]")) {
                Some(x) => out.push(x),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }
}

fn validate_nu_grid(v: &mut Validator, value: Option<&Value>) -> Option<Vec<f64>> {
    match value {
        None => {
            v.fail("nu_grid", "required");
            None
        }
        Some(Value::Array(items)) => {
            if items.is_empty() {
                v.fail("nu_grid", "must not be empty");
                return None;
            }
            let mut grid = Vec::with_capacity(items.len());
            let mut ok = true;
            for (i, item) in items.iter().enumerate() {
                match item.as_f64() {
                    Some(x) if x > 0.0 && x.is_finite() => grid.push(x),
                    Some(_) => {
                        v.fail(&format!("nu_grid[{i}]"), "nu must be positive");
                        ok = false;
                    }
                    None => {
                        v.fail(&format!("nu_grid[{i}]"), "must be a number");
                        ok = false;
                    }
                }
            }
            ok.then_some(grid)
        }
        Some(_) => {
            v.fail("nu_grid", "must be an array of viscosities");
            None
        }
    }
}

fn validate_layer(v: &mut Validator, value: Option<&Value>, flow: Option<Flow>) -> LayerConfig {
    let mut layer = LayerConfig::default();
    let Some(value) = value else { return layer };
    let Some(obj) = value.as_object() else {
        v.fail("layer", "must be an object with keys c, delta, delta_star");
        return layer;
    };
    for key in obj.keys() {
        if !["c", "delta", "delta_star"].contains(&key.as_str()) {
            v.fail(&format!("layer.{key}"), "unknown field");
        }
    }
    if let Some(c) = v.optional_positive(obj.get("c"), "layer.c") {
        layer.c = c;
    }
    layer.delta = v.optional_positive(obj.get("delta"), "layer.delta");
    layer.delta_star = v.optional_positive(obj.get("delta_star"), "layer.delta_star");
    if let (Some(delta), Some(star)) = (layer.delta, layer.delta_star) {
        if star >= delta {
            v.fail("layer.delta_star", "must be smaller than layer.delta");
        }
    }
    if layer.delta.is_none() && obj.get("delta_star").is_some() {
        v.fail("layer.delta", "required when layer.delta_star is given");
    }
    if flow == Some(Flow::Disk) {
        if let Some(delta) = layer.delta {
            if delta >= 1.0 {
                v.fail("layer.delta", "must lie strictly inside the unit disk (< 1)");
            }
        }
    }
    layer
}

fn validate_diagnostics(
    v: &mut Validator,
    value: Option<&Value>,
    flow: Option<Flow>,
    layer: &LayerConfig,
) -> Vec<Diagnostic> {
    let Some(value) = value else { return Vec::new() };
    let Some(items) = value.as_array() else {
        v.fail("diagnostics", "must be an array of diagnostic names");
        return Vec::new();
    };
    let mut out: Vec<Diagnostic> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let path = format!("diagnostics[{i}]");
        let Some(name) = item.as_str() else {
            v.fail(&path, "must be a string");
            continue;
        };
        let Some(diag) = Diagnostic::from_name(name) else {
            v.fail(
                &path,
                format!(
                    "unknown diagnostic \"{name}\" (known: {})",
                    Diagnostic::known_names()
                ),
            );
            continue;
        };
        if diag.needs_disk() && flow == Some(Flow::Shear) {
            v.fail(&path, format!("\"{name}\" requires the disk flow"));
            continue;
        }
        if diag.needs_delta() && layer.delta.is_none() {
            v.fail("layer.delta", format!("required by diagnostic \"{name}\""));
            continue;
        }
        if !out.contains(&diag) {
            out.push(diag);
        }
    }
    out
}

fn validate_output(v: &mut Validator, value: Option<&Value>) -> OutputConfig {
    let mut output = OutputConfig::default();
    let Some(value) = value else { return output };
    let Some(obj) = value.as_object() else {
        v.fail("output", "must be an object with keys path, format");
        return output;
    };
    for key in obj.keys() {
        if !["path", "format"].contains(&key.as_str()) {
            v.fail(&format!("output.{key}"), "unknown field");
        }
    }
    match obj.get("path") {
        None => {}
        Some(Value::String(s)) if !s.is_empty() => output.path = s.clone(),
        Some(_) => v.fail("output.path", "must be a nonempty string"),
    }
    match obj.get("format") {
        None => {}
        Some(Value::String(s)) if s == "csv" => output.format = OutputFormat::Csv,
        Some(Value::String(s)) if s == "json" => output.format = OutputFormat::Json,
        Some(_) => v.fail("output.format", "must be \"csv\" or \"json\""),
    }
    output
}

fn validate_profile(
    v: &mut Validator,
    value: Option<&Value>,
    flow: Option<Flow>,
    base_dir: &Path,
) -> Option<ProfileConfig> {
    let Some(value) = value else {
        v.fail("profile", "required");
        return None;
    };
    let Some(obj) = value.as_object() else {
        v.fail(
            "profile",
            "must be an object like {\"type\": \"constant\", \"value\": 2}",
        );
        return None;
    };
    let Some(kind) = obj.get("type").and_then(Value::as_str) else {
        v.fail(
            "profile.type",
            "required: one of constant, poly_r2, exp_decay, poly_gaussian, table",
        );
        return None;
    };

    let check_keys = |v: &mut Validator, allowed: &[&str]| {
        for key in obj.keys() {
            if key != "type" && !allowed.contains(&key.as_str()) {
                v.fail(&format!("profile.{key}"), "unknown field");
            }
        }
    };

    let profile = match kind {
        "constant" => {
            check_keys(v, &["value"]);
            let value = match obj.get("value") {
                Some(x) => v.finite(x, "profile.value"),
                None => {
                    v.fail("profile.value", "required");
                    None
                }
            };
            Some(ProfileConfig::Constant { value: value? })
        }
        "poly_r2" => {
            check_keys(v, &["coeffs"]);
            if flow == Some(Flow::Shear) {
                v.fail(
                    "profile.type",
                    "poly_r2 describes disk vorticity; the shear flow takes constant, \
                     exp_decay, poly_gaussian, or table",
                );
                return None;
            }
            let coeffs = match obj.get("coeffs") {
                Some(x) => v.finite_array(x, "profile.coeffs"),
                None => {
                    v.fail("profile.coeffs", "required");
                    None
                }
            };
            Some(ProfileConfig::PolyR2 { coeffs: coeffs? })
        }
        "exp_decay" => {
            check_keys(v, &["amplitude", "rate"]);
            if flow == Some(Flow::Disk) {
                v.fail(
                    "profile.type",
                    "exp_decay describes shear data; the disk flow takes constant, \
                     poly_r2, or table",
                );
                return None;
            }
            let amplitude = match obj.get("amplitude") {
                Some(x) => v.finite(x, "profile.amplitude"),
                None => {
                    v.fail("profile.amplitude", "required");
                    None
                }
            };
            let rate = match obj.get("rate") {
                Some(x) => match x.as_f64() {
                    Some(r) if r >= 0.0 && r.is_finite() => Some(r),
                    _ => {
                        v.fail("profile.rate", "must be a nonnegative number");
                        None
                    }
                },
                None => {
                    v.fail("profile.rate", "required");
                    None
                }
            };
            Some(ProfileConfig::ExpDecay {
                amplitude: amplitude?,
                rate: rate?,
            })
        }
        "poly_gaussian" => {
            check_keys(v, &["width", "coeffs"]);
            if flow == Some(Flow::Disk) {
                v.fail(
                    "profile.type",
                    "poly_gaussian describes shear data; the disk flow takes constant, \
                     poly_r2, or table",
                );
                return None;
            }
            let width = match obj.get("width") {
                Some(x) => v.positive(x, "profile.width"),
                None => {
                    v.fail("profile.width", "required");
                    None
                }
            };
            let coeffs = match obj.get("coeffs") {
                Some(x) => v.finite_array(x, "profile.coeffs"),
                None => {
                    v.fail("profile.coeffs", "required");
                    None
                }
            };
            Some(ProfileConfig::PolyGaussian {
                width: width?,
                coeffs: coeffs?,
            })
        }
        "table" => {
            check_keys(v, &["path", "knots", "values", "bound_amp", "bound_rate"]);
            validate_table_profile(v, obj, flow, base_dir)
        }
        other => {
            v.fail(
                "profile.type",
                format!(
                    "unknown profile type \"{other}\" (known: constant, poly_r2, exp_decay, \
                     poly_gaussian, table)"
                ),
            );
            None
        }
    }?;

    // Prove the profile constructs: run it through the library constructor
    // now so a parse-valid config cannot fail at build time. Constructor
    // refusals (domain coverage, decay envelopes, spline shape) surface
    // here as itemized errors.
    if let Some(flow) = flow {
        let built = match flow {
            Flow::Disk => profile.build_disk().map(drop),
            Flow::Shear => profile.build_shear().map(drop),
        };
        if let Err(e) = built {
            v.fail("profile", e);
            return None;
        }
    }
    Some(profile)
}

fn validate_table_profile(
    v: &mut Validator,
    obj: &Map<String, Value>,
    flow: Option<Flow>,
    base_dir: &Path,
) -> Option<ProfileConfig> {
    let bound_amp = match obj.get("bound_amp") {
        Some(x) => Some(v.positive(x, "profile.bound_amp")?),
        None => None,
    };
    let bound_rate = match obj.get("bound_rate") {
        Some(x) => match x.as_f64() {
            Some(r) if r >= 0.0 && r.is_finite() => Some(r),
            _ => {
                v.fail("profile.bound_rate", "must be a nonnegative number");
                return None;
            }
        },
        None => None,
    };
    if flow == Some(Flow::Disk) && (bound_amp.is_some() || bound_rate.is_some()) {
        v.fail(
            "profile.bound_amp",
            "decay envelopes apply to shear tables only",
        );
        return None;
    }

    let inline = obj.get("knots").is_some() || obj.get("values").is_some();
    let (knots, values, path) = match (obj.get("path"), inline) {
        (Some(_), true) => {
            v.fail(
                "profile",
                "give either a table path or inline knots/values, not both",
            );
            return None;
        }
        (Some(Value::String(path)), false) => {
            let (knots, values) = load_table_file(v, path, base_dir)?;
            (knots, values, Some(path.clone()))
        }
        (Some(_), false) => {
            v.fail("profile.path", "must be a string");
            return None;
        }
        (None, true) => {
            let knots = match obj.get("knots") {
                Some(x) => v.finite_array(x, "profile.knots"),
                None => {
                    v.fail("profile.knots", "required with inline values");
                    None
                }
            };
            let values = match obj.get("values") {
                Some(x) => v.finite_array(x, "profile.values"),
                None => {
                    v.fail("profile.values", "required with inline knots");
                    None
                }
            };
            let (knots, values) = (knots?, values?);
            if knots.len() != values.len() {
                v.fail(
                    "profile.values",
                    format!("{} values for {} knots", values.len(), knots.len()),
                );
                return None;
            }
            (knots, values, None)
        }
        (None, false) => {
            v.fail("profile", "table needs a path or inline knots/values");
            return None;
        }
    };
    Some(ProfileConfig::Table {
        path,
        knots,
        values,
        bound_amp,
        bound_rate,
    })
}

/// Reads a two-column CSV (abscissa, value). A first line that does not
/// parse is treated as a header; any later malformed line is an error
/// naming the file and line.
fn load_table_file(
    v: &mut Validator,
    path: &str,
    base_dir: &Path,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let resolved = base_dir.join(path);
    let text = match std::fs::read_to_string(&resolved) {
        Ok(text) => text,
        Err(e) => {
            v.fail(
                "profile.path",
                format!("cannot read table file {:?}: {e}", resolved),
            );
            return None;
        }
    };
    let mut knots = Vec::new();
    let mut values = Vec::new();
    let mut ok = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let parsed = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
                    (Ok(x), Ok(y)) => Some((x, y)),
                    _ => None,
                }
            }
            _ => None,
        };
        match parsed {
            Some((x, y)) => {
                knots.push(x);
                values.push(y);
            }
            None if i == 0 => continue, // header row
            None => {
                v.fail(
                    "profile.path",
                    format!(
                        "line {} of {:?}: expected two comma-separated numbers",
                        i + 1,
                        resolved
                    ),
                );
                ok = false;
            }
        }
    }
    if knots.is_empty() {
        v.fail(
            "profile.path",
            format!("table file {:?} has no data rows", resolved),
        );
        return None;
    }
    ok.then_some((knots, values))
}

/// Command-line overrides shared by `sweep` and `diagnose`. Every flag
/// mirrors a config key and wins over the file; a run needs `flow`,
/// `profile`, `nu_grid` (`--nu`), and `T` from one source or the other.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ConfigOverrides {
    /// Experiment config file (JSON); flags below override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Flow family: disk | shear.
    #[arg(long, value_name = "FLOW")]
    pub flow: Option<String>,

    /// Initial profile: constant:2 | poly_r2:4,-8 | exp_decay:1,2 |
    /// poly_gaussian:0.5,1,-1 | table:samples.csv.
    #[arg(long, value_name = "SPEC")]
    pub profile: Option<String>,

    /// Viscosity grid, comma-separated or repeated (alias: --nu).
    #[arg(
        long = "nu-grid",
        visible_alias = "nu",
        value_name = "LIST",
        value_delimiter = ','
    )]
    pub nu_grid: Option<Vec<f64>>,

    /// Time horizon T of the sup norm and horizon diagnostics.
    #[arg(long = "T", value_name = "T")]
    pub horizon: Option<f64>,

    /// Disk spectral truncation K.
    #[arg(long = "K", value_name = "K")]
    pub modes: Option<usize>,

    /// Channel half-width L (shear flow).
    #[arg(long, value_name = "L")]
    pub half_width: Option<f64>,

    /// Evaluation time for time-point diagnostics (defaults to T).
    #[arg(long = "t", value_name = "TIME")]
    pub time: Option<f64>,

    /// Points in the geometric time grid of the sup norm.
    #[arg(long, value_name = "N")]
    pub time_points: Option<usize>,

    /// Kato constant c: the kato_layer diagnostic integrates over the
    /// width c·nu layer.
    #[arg(long, value_name = "C")]
    pub c: Option<f64>,

    /// Absolute layer width (required by l1_mass and mass_budget).
    #[arg(long, value_name = "DELTA")]
    pub delta: Option<f64>,

    /// Inner plateau width of the layer cutoff (defaults to delta/2).
    #[arg(long, value_name = "DELTA")]
    pub delta_star: Option<f64>,

    /// Diagnostics to evaluate, comma-separated or repeated.
    #[arg(long = "diag", value_name = "NAME", value_delimiter = ',')]
    pub diagnostics: Option<Vec<String>>,

    /// Output stem: artifacts land at <STEM>.csv and <STEM>.json.
    #[arg(long, value_name = "STEM")]
    pub output: Option<String>,

    /// Which artifact to echo on stdout: csv | json.
    #[arg(long, value_name = "FMT")]
    pub format: Option<String>,
}

/// Loads the effective config: file (if any), then flags, then one
/// semantic validation over the merged document.
pub fn load(overrides: &ConfigOverrides) -> Result<ExperimentConfig, CliError> {
    let (mut document, base_dir) = match &overrides.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigIo {
                path: path.clone(),
                source,
            })?;
            let value = syntax_parse(&text).map_err(CliError::Config)?;
            let base = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or(Path::new("."))
                .to_path_buf();
            (value, base)
        }
        None => (Value::Object(Map::new()), PathBuf::from(".")),
    };
    apply_overrides(&mut document, overrides)?;
    validate(document, &base_dir).map_err(CliError::Config)
}

/// Folds flag values into the document as the JSON the matching file key
/// would carry, so both validate through the same pass.
fn apply_overrides(document: &mut Value, o: &ConfigOverrides) -> Result<(), CliError> {
    let Some(obj) = document.as_object_mut() else {
        // A non-object root is reported by the semantic pass.
        return Ok(());
    };
    if let Some(flow) = &o.flow {
        obj.insert("flow".into(), json!(flow));
    }
    if let Some(spec) = &o.profile {
        obj.insert("profile".into(), parse_profile_spec(spec).map_err(CliError::Usage)?);
    }
    if let Some(grid) = &o.nu_grid {
        obj.insert("nu_grid".into(), json!(grid));
    }
    if let Some(t) = o.horizon {
        obj.insert("T".into(), json!(t));
    }
    if let Some(k) = o.modes {
        obj.insert("K".into(), json!(k));
    }
    if let Some(l) = o.half_width {
        obj.insert("half_width".into(), json!(l));
    }
    if let Some(t) = o.time {
        obj.insert("t".into(), json!(t));
    }
    if let Some(n) = o.time_points {
        obj.insert("time_points".into(), json!(n));
    }
    if o.c.is_some() || o.delta.is_some() || o.delta_star.is_some() {
        let layer = ensure_object(obj, "layer");
        if let Some(c) = o.c {
            layer.insert("c".into(), json!(c));
        }
        if let Some(d) = o.delta {
            layer.insert("delta".into(), json!(d));
        }
        if let Some(d) = o.delta_star {
            layer.insert("delta_star".into(), json!(d));
        }
    }
    if let Some(diags) = &o.diagnostics {
        obj.insert("diagnostics".into(), json!(diags));
    }
    if o.output.is_some() || o.format.is_some() {
        let output = ensure_object(obj, "output");
        if let Some(path) = &o.output {
            output.insert("path".into(), json!(path));
        }
        if let Some(format) = &o.format {
            output.insert("format".into(), json!(format));
        }
    }
    Ok(())
}

fn ensure_object<'a>(obj: &'a mut Map<String, Value>, key: &str) -> &'a mut Map<String, Value> {
    if !obj.get(key).map_or(false, Value::is_object) {
        obj.insert(key.to_string(), json!({}));
    }
    obj.get_mut(key)
        .and_then(Value::as_object_mut)
        .expect("just inserted an object")
}

/// Parses the `--profile` flag syntax into the JSON object form the
/// config file uses.
fn parse_profile_spec(spec: &str) -> Result<Value, String> {
    let Some((kind, params)) = spec.split_once(':') else {
        return Err(format!(
            "invalid --profile \"{spec}\": expected KIND:PARAMS, e.g. constant:2"
        ));
    };
    let numbers = |what: &str| -> Result<Vec<f64>, String> {
        params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("invalid --profile \"{spec}\": {what}"))
            })
            .collect()
    };
    match kind {
        "constant" => {
            let values = numbers("constant takes one number")?;
            if values.len() != 1 {
                return Err(format!("invalid --profile \"{spec}\": constant takes one number"));
            }
            Ok(json!({"type": "constant", "value": values[0]}))
        }
        "poly_r2" => {
            let coeffs = numbers("poly_r2 takes a comma-separated coefficient list")?;
            Ok(json!({"type": "poly_r2", "coeffs": coeffs}))
        }
        "exp_decay" => {
            let values = numbers("exp_decay takes amplitude,rate")?;
            if values.len() != 2 {
                return Err(format!("invalid --profile \"{spec}\": exp_decay takes amplitude,rate"));
            }
            Ok(json!({"type": "exp_decay", "amplitude": values[0], "rate": values[1]}))
        }
        "poly_gaussian" => {
            let values = numbers("poly_gaussian takes width,c0,c1,...")?;
            if values.len() < 2 {
                return Err(format!(
                    "invalid --profile \"{spec}\": poly_gaussian takes width,c0,c1,..."
                ));
            }
            Ok(json!({"type": "poly_gaussian", "width": values[0], "coeffs": values[1..]}))
        }
        "table" => {
            if params.is_empty() {
                return Err(format!("invalid --profile \"{spec}\": table takes a file path"));
            }
            Ok(json!({"type": "table", "path": params}))
        }
        other => Err(format!(
            "invalid --profile \"{spec}\": unknown kind \"{other}\" \
             (known: constant, poly_r2, exp_decay, poly_gaussian, table)"
        )),
    }
}

/// Builds a profile from the flag syntax alone — used by `zeros`, which
/// takes no config file.
pub fn profile_from_spec(
    spec: &str,
    flow: Flow,
    base_dir: &Path,
) -> Result<ProfileConfig, CliError> {
    let value = parse_profile_spec(spec).map_err(CliError::Usage)?;
    let mut v = Validator::default();
    let profile = validate_profile(&mut v, Some(&value), Some(flow), base_dir);
    match profile {
        Some(p) if v.items.is_empty() => Ok(p),
        _ => Err(CliError::Config(ConfigError::Semantic { items: v.items })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        parse_config(text, Path::new("."))
    }

    #[test]
    fn minimal_disk_config_is_valid() {
        let cfg = parse(
            r#"{"flow":"disk","profile":{"type":"constant","value":2},"nu_grid":[1e-3],"T":1}"#,
        )
        .expect("minimal config validates");
        assert_eq!(cfg.flow, Flow::Disk);
        assert_eq!(cfg.nu_grid, vec![1e-3]);
        assert_eq!(cfg.modes, DEFAULT_MODES);
        assert_eq!(cfg.output.path, "vvlab_out");
    }

    #[test]
    fn zero_viscosity_is_named_positive() {
        let err = parse(
            r#"{"flow":"disk","profile":{"type":"constant","value":2},"nu_grid":[0],"T":1}"#,
        )
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("nu_grid[0]: nu must be positive"), "{text}");
    }

    #[test]
    fn every_violation_is_itemized_with_its_path() {
        let err = parse(
            r#"{"flow":"plasma","profile":{"type":"constant","value":2},
                "nu_grid":[0,-1,1e-3],"T":-2,"diagnostics":["kato_layer","wat"],
                "mystery":1}"#,
        )
        .unwrap_err();
        let text = err.to_string();
        for needle in [
            "flow: must be \"disk\" or \"shear\"",
            "nu_grid[0]: nu must be positive",
            "nu_grid[1]: nu must be positive",
            "T: must be positive",
            "unknown diagnostic \"wat\"",
            "mystery: unknown field",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }
    }

    #[test]
    fn missing_table_file_error_names_the_path() {
        let err = parse(
            r#"{"flow":"disk","profile":{"type":"table","path":"no_such_table.csv"},
                "nu_grid":[1e-3],"T":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("no_such_table.csv"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse("{\n  \"flow\": \"disk\",,\n}").unwrap_err();
        match err {
            ConfigError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("expected a syntax error, got {other}"),
        }
    }

    #[test]
    fn disk_only_diagnostics_are_rejected_for_shear() {
        let err = parse(
            r#"{"flow":"shear","profile":{"type":"constant","value":1},
                "nu_grid":[1e-3],"T":1,"diagnostics":["weak_pairing"]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("requires the disk flow"), "{err}");
    }

    #[test]
    fn layer_diagnostics_demand_a_width() {
        let err = parse(
            r#"{"flow":"disk","profile":{"type":"constant","value":2},
                "nu_grid":[1e-3],"T":1,"diagnostics":["l1_mass"]}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("layer.delta: required by diagnostic \"l1_mass\""),
            "{err}"
        );
    }

    #[test]
    fn profile_flow_mismatch_is_a_type_error() {
        let err = parse(
            r#"{"flow":"shear","profile":{"type":"poly_r2","coeffs":[2]},
                "nu_grid":[1e-3],"T":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("poly_r2 describes disk vorticity"), "{err}");
    }

    #[test]
    fn inline_table_profile_validates_through_the_constructor() {
        // Knots stop short of the rim, so the disk constructor refuses.
        let err = parse(
            r#"{"flow":"disk","profile":{"type":"table",
                "knots":[0,0.1,0.2,0.3],"values":[1,1,1,1]},
                "nu_grid":[1e-3],"T":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("profile:"), "{err}");
    }

    #[test]
    fn config_echo_parses_back_to_the_same_experiment() {
        let cfg = parse(
            r#"{"flow":"shear","profile":{"type":"exp_decay","amplitude":1,"rate":2},
                "nu_grid":[1e-2,1e-3],"T":0.5,"half_width":0.25,
                "layer":{"c":2,"delta":0.01},
                "diagnostics":["kato_layer","l1_mass"],
                "output":{"path":"echo_test","format":"json"}}"#,
        )
        .expect("config validates");
        let echo = serde_json::to_string(&cfg).expect("echo serializes");
        let again = parse(&echo).expect("echo reparses");
        assert_eq!(again.nu_grid, cfg.nu_grid);
        assert_eq!(again.horizon, cfg.horizon);
        assert_eq!(again.half_width, cfg.half_width);
        assert_eq!(again.layer.c, cfg.layer.c);
        assert_eq!(again.diagnostics, cfg.diagnostics);
        assert_eq!(again.output.path, cfg.output.path);
    }

    #[test]
    fn profile_spec_strings_cover_every_kind() {
        assert_eq!(
            parse_profile_spec("constant:2").unwrap(),
            json!({"type": "constant", "value": 2.0})
        );
        assert_eq!(
            parse_profile_spec("poly_r2:4,-8").unwrap(),
            json!({"type": "poly_r2", "coeffs": [4.0, -8.0]})
        );
        assert_eq!(
            parse_profile_spec("exp_decay:1,2").unwrap(),
            json!({"type": "exp_decay", "amplitude": 1.0, "rate": 2.0})
        );
        assert_eq!(
            parse_profile_spec("poly_gaussian:0.5,1,-1").unwrap(),
            json!({"type": "poly_gaussian", "width": 0.5, "coeffs": [1.0, -1.0]})
        );
        assert_eq!(
            parse_profile_spec("table:dir/samples.csv").unwrap(),
            json!({"type": "table", "path": "dir/samples.csv"})
        );
        assert!(parse_profile_spec("constant").is_err());
        assert!(parse_profile_spec("gaussian:1").is_err());
        assert!(parse_profile_spec("constant:one").is_err());
    }
}
