//! Scenario configuration: TOML schema, defaults, validation, and
//! `--set key=value` overrides.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use dualcav_core::{
    make_mode_with_mass, CavityConfig, CoreError, ModeSpec, TimeAmplitude, UnitSystem,
};

/// Default tolerance constants, one per check. Values are pinned here and
/// only overridable through the config file.
pub mod tolerances {
    /// Minimum acceptable convergence order of the curl residuals under
    /// dyadic refinement. Central differences are second order; 1.9 leaves
    /// room for the next-order term at the coarsest grid.
    pub const MAXWELL_MIN_ORDER: f64 = 1.9;
    /// Margin on the order shortfall (measured order may undershoot the
    /// minimum by at most this much).
    pub const MAXWELL_ORDER_MARGIN: f64 = 1e-9;
    /// Relative spread/agreement for Hamiltonian conservation and the
    /// field-integral vs oscillator-sum comparison. Both routes are exact
    /// identities; 1e-10 absorbs accumulated rounding over mode sums.
    pub const HAMILTONIAN_REL: f64 = 1e-10;
    /// Absolute agreement of residuals and energies under duality rotation.
    pub const DUALITY_ABS: f64 = 1e-12;
    /// Lower-block deviation of same-mode [p, q] from its target, and the
    /// corner from its analytic truncation value.
    pub const CCR_BLOCK: f64 = 1e-12;
    /// Lower-block distance of G from its number form.
    pub const G_IDENTITY: f64 = 1e-10;
    /// Relative error of vacuum energies against the half-quantum sums.
    pub const VACUUM_REL: f64 = 1e-12;
    /// Sup-norm agreement of coherent-state field expectations with the
    /// classical fields at cutoff 64.
    pub const CLASSICAL_LIMIT_SUP: f64 = 1e-8;
    /// Max |integrand| of the free-function integrand for on-shell
    /// amplitudes (an exact zero up to rounding).
    pub const F_ALPHA_ABS: f64 = 1e-12;
    /// Relative agreement of the integrated energy density with the
    /// Hamiltonian total.
    pub const DENSITY_REL: f64 = 1e-9;
    /// Hermiticity residual of the local commutator.
    pub const LOCAL_HERMITICITY: f64 = 1e-12;
}

fn default_length() -> f64 {
    1.0
}
fn default_volume() -> f64 {
    1.0
}
fn default_unit_system() -> String {
    "gaussian-natural".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_volume")]
    pub volume: f64,
    #[serde(default = "default_unit_system")]
    pub unit_system: String,
    /// Defaults to one round trip 2L/c.
    #[serde(default)]
    pub time_window: Option<f64>,
}

impl Default for CavitySection {
    fn default() -> Self {
        Self {
            length: default_length(),
            volume: default_volume(),
            unit_system: default_unit_system(),
            time_window: None,
        }
    }
}

impl CavitySection {
    pub fn to_core(&self) -> anyhow::Result<CavityConfig> {
        let mut config = match self.unit_system.as_str() {
            "gaussian-natural" => CavityConfig::gaussian_natural(self.length, self.volume),
            "si" => CavityConfig::si(self.length, self.volume),
            other => bail!("cavity.unit_system: unknown unit system '{other}'"),
        };
        if let Some(t) = self.time_window {
            config = config.with_time_window(t);
        }
        config.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(config)
    }
}

fn default_c1() -> [f64; 2] {
    [0.5, 0.0]
}
fn default_mass() -> f64 {
    1.0
}

/// Per-mode amplitude and parameter overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeOverride {
    pub alpha: u32,
    /// Complex C1 as [re, im].
    #[serde(default = "default_c1")]
    pub c1: [f64; 2],
    /// Complex C2; defaults to conj(C1), the real-field choice.
    #[serde(default)]
    pub c2: Option<[f64; 2]>,
    #[serde(default = "default_mass")]
    pub mass: f64,
    #[serde(default)]
    pub amp_general: Option<f64>,
}

fn default_mode_count() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    #[serde(default = "default_mode_count")]
    pub count: u32,
    #[serde(default)]
    pub overrides: Vec<ModeOverride>,
}

impl Default for ModesSection {
    fn default() -> Self {
        Self {
            count: default_mode_count(),
            overrides: Vec::new(),
        }
    }
}

fn default_n_z() -> usize {
    65
}
fn default_n_t() -> usize {
    65
}
fn default_t_stop() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_n_z")]
    pub n_z: usize,
    #[serde(default = "default_n_t")]
    pub n_t: usize,
    #[serde(default)]
    pub t_start: f64,
    #[serde(default = "default_t_stop")]
    pub t_stop: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            n_z: default_n_z(),
            n_t: default_n_t(),
            t_start: 0.0,
            t_stop: default_t_stop(),
        }
    }
}

fn default_scheme() -> String {
    "time-domain".into()
}
fn default_hbar() -> f64 {
    1.0
}
fn default_lambda0() -> f64 {
    1.0
}
fn default_cutoff() -> usize {
    24
}
fn default_local_cutoff() -> usize {
    12
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizationSection {
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(default = "default_lambda0")]
    pub lambda0: f64,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default = "default_local_cutoff")]
    pub cutoff_space: usize,
    #[serde(default = "default_local_cutoff")]
    pub cutoff_time: usize,
}

impl Default for QuantizationSection {
    fn default() -> Self {
        Self {
            scheme: default_scheme(),
            hbar: default_hbar(),
            lambda0: default_lambda0(),
            cutoff: default_cutoff(),
            cutoff_space: default_local_cutoff(),
            cutoff_time: default_local_cutoff(),
        }
    }
}

/// Per-check tolerance overrides; defaults come from [`tolerances`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    #[serde(default = "d_maxwell")]
    pub maxwell_min_order: f64,
    #[serde(default = "d_hamiltonian")]
    pub hamiltonian: f64,
    #[serde(default = "d_duality")]
    pub duality: f64,
    #[serde(default = "d_ccr")]
    pub ccr: f64,
    #[serde(default = "d_g_operator")]
    pub g_operator: f64,
    #[serde(default = "d_vacuum")]
    pub vacuum: f64,
    #[serde(default = "d_classical")]
    pub classical_limit: f64,
    #[serde(default = "d_falpha")]
    pub falpha: f64,
    #[serde(default = "d_density")]
    pub density: f64,
    #[serde(default = "d_local")]
    pub local_hermiticity: f64,
}

fn d_maxwell() -> f64 {
    tolerances::MAXWELL_MIN_ORDER
}
fn d_hamiltonian() -> f64 {
    tolerances::HAMILTONIAN_REL
}
fn d_duality() -> f64 {
    tolerances::DUALITY_ABS
}
fn d_ccr() -> f64 {
    tolerances::CCR_BLOCK
}
fn d_g_operator() -> f64 {
    tolerances::G_IDENTITY
}
fn d_vacuum() -> f64 {
    tolerances::VACUUM_REL
}
fn d_classical() -> f64 {
    tolerances::CLASSICAL_LIMIT_SUP
}
fn d_falpha() -> f64 {
    tolerances::F_ALPHA_ABS
}
fn d_density() -> f64 {
    tolerances::DENSITY_REL
}
fn d_local() -> f64 {
    tolerances::LOCAL_HERMITICITY
}

impl Default for ToleranceSection {
    fn default() -> Self {
        Self {
            maxwell_min_order: d_maxwell(),
            hamiltonian: d_hamiltonian(),
            duality: d_duality(),
            ccr: d_ccr(),
            g_operator: d_g_operator(),
            vacuum: d_vacuum(),
            classical_limit: d_classical(),
            falpha: d_falpha(),
            density: d_density(),
            local_hermiticity: d_local(),
        }
    }
}

impl ToleranceSection {
    fn all(&self) -> [(&'static str, f64); 10] {
        [
            (
                "checks.tolerances.maxwell_min_order",
                self.maxwell_min_order,
            ),
            ("checks.tolerances.hamiltonian", self.hamiltonian),
            ("checks.tolerances.duality", self.duality),
            ("checks.tolerances.ccr", self.ccr),
            ("checks.tolerances.g_operator", self.g_operator),
            ("checks.tolerances.vacuum", self.vacuum),
            ("checks.tolerances.classical_limit", self.classical_limit),
            ("checks.tolerances.falpha", self.falpha),
            ("checks.tolerances.density", self.density),
            (
                "checks.tolerances.local_hermiticity",
                self.local_hermiticity,
            ),
        ]
    }
}

/// Every check the workbench knows, in run order.
pub const CHECK_NAMES: &[&str] = &[
    "maxwell",
    "hamiltonian",
    "duality",
    "ccr",
    "g-operator",
    "local-commutator",
    "density",
    "falpha",
    "vacuum",
    "classical-limit",
];

fn default_run() -> Vec<String> {
    CHECK_NAMES.iter().map(|s| s.to_string()).collect()
}
fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    #[serde(default = "default_run")]
    pub run: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceSection,
}

impl Default for ChecksSection {
    fn default() -> Self {
        Self {
            run: default_run(),
            seed: default_seed(),
            tolerances: ToleranceSection::default(),
        }
    }
}

fn default_directory() -> String {
    "out".into()
}
fn default_formats() -> Vec<String> {
    vec!["frames".into(), "reports".into(), "summary".into()]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

/// The full scenario.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub cavity: CavitySection,
    pub modes: ModesSection,
    pub grid: GridSection,
    pub quantization: QuantizationSection,
    pub checks: ChecksSection,
    pub output: OutputSection,
}

/// A single validation finding: which field, which constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ScenarioConfig {
    /// Read a config file, apply `--set key=value` overrides, deserialize.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> anyhow::Result<Self> {
        let text = match path {
            Some(p) => fs::read_to_string(p)
                .with_context(|| format!("cannot read config file {}", p.display()))?,
            None => String::new(),
        };
        let mut value: toml::Value =
            toml::from_str(&text).with_context(|| "config file is not valid TOML".to_string())?;
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        let config: ScenarioConfig = value
            .try_into()
            .with_context(|| "config does not match the scenario schema".to_string())?;
        Ok(config)
    }

    /// Every schema invariant, checked exhaustively. Returns all findings
    /// rather than stopping at the first.
    pub fn validate(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        let mut issue = |field: &str, message: String| {
            issues.push(ConfigIssue {
                field: field.into(),
                message,
            });
        };

        if let Err(e) = self.cavity.to_core() {
            issue("cavity", format!("{e}"));
        }
        if self.modes.count < 1 {
            issue("modes.count", "must be at least 1".into());
        }
        for (i, o) in self.modes.overrides.iter().enumerate() {
            if o.alpha == 0 {
                issue(
                    &format!("modes.overrides[{i}].alpha"),
                    "must be >= 1".into(),
                );
            }
            if o.alpha > self.modes.count {
                issue(
                    &format!("modes.overrides[{i}].alpha"),
                    format!("exceeds modes.count = {}", self.modes.count),
                );
            }
            if o.mass <= 0.0 || !o.mass.is_finite() {
                issue(
                    &format!("modes.overrides[{i}].mass"),
                    "must be finite and positive".into(),
                );
            }
        }
        if self.grid.n_z < 3 {
            issue("grid.n_z", "must be at least 3".into());
        }
        if self.grid.n_t < 3 {
            issue("grid.n_t", "must be at least 3".into());
        }
        // NaN endpoints must fail too, so test the required ordering directly
        if self.grid.t_stop.partial_cmp(&self.grid.t_start) != Some(std::cmp::Ordering::Greater) {
            issue("grid.t_stop", "must exceed grid.t_start".into());
        }
        match self.quantization.scheme.as_str() {
            "time-domain" | "space-domain" => {}
            other => issue(
                "quantization.scheme",
                format!("unknown scheme '{other}' (time-domain | space-domain)"),
            ),
        }
        if self.quantization.hbar <= 0.0 || !self.quantization.hbar.is_finite() {
            issue("quantization.hbar", "must be finite and positive".into());
        }
        if self.quantization.lambda0 <= 0.0 || !self.quantization.lambda0.is_finite() {
            issue("quantization.lambda0", "must be finite and positive".into());
        }
        for (name, cutoff) in [
            ("quantization.cutoff", self.quantization.cutoff),
            ("quantization.cutoff_space", self.quantization.cutoff_space),
            ("quantization.cutoff_time", self.quantization.cutoff_time),
        ] {
            if cutoff < 2 {
                issue(name, "must be at least 2".into());
            }
        }
        for name in &self.checks.run {
            if !CHECK_NAMES.contains(&name.as_str()) {
                issue(
                    "checks.run",
                    format!("unknown check '{name}' (known: {})", CHECK_NAMES.join(", ")),
                );
            }
        }
        for (field, value) in self.checks.tolerances.all() {
            if value <= 0.0 || !value.is_finite() {
                issue(field, "must be finite and positive".into());
            }
        }
        if self.output.directory.is_empty() {
            issue("output.directory", "must not be empty".into());
        }
        for format in &self.output.formats {
            if !["frames", "reports", "summary"].contains(&format.as_str()) {
                issue(
                    "output.formats",
                    format!("unknown format '{format}' (frames | reports | summary)"),
                );
            }
        }
        issues
    }

    pub fn cavity_core(&self) -> anyhow::Result<CavityConfig> {
        self.cavity.to_core()
    }

    /// Mode constants for alpha = 1..count with per-mode mass overrides.
    pub fn mode_bank_core(&self, cavity: &CavityConfig) -> Result<Vec<ModeSpec>, CoreError> {
        (1..=self.modes.count)
            .map(|alpha| {
                let mass = self
                    .modes
                    .overrides
                    .iter()
                    .find(|o| o.alpha == alpha)
                    .map_or(1.0, |o| o.mass);
                let mut mode = make_mode_with_mass(alpha, cavity, mass)?;
                if let Some(a) = self
                    .modes
                    .overrides
                    .iter()
                    .find(|o| o.alpha == alpha)
                    .and_then(|o| o.amp_general)
                {
                    mode.amp_general = a;
                }
                Ok(mode)
            })
            .collect()
    }

    /// Time amplitudes per mode: overrides where given, else the unit
    /// cosine q(t) = cos(wt).
    pub fn amplitudes(&self, modes: &[ModeSpec]) -> Vec<TimeAmplitude> {
        modes
            .iter()
            .map(
                |mode| match self.modes.overrides.iter().find(|o| o.alpha == mode.alpha) {
                    Some(o) => {
                        let c1 = Complex64::new(o.c1[0], o.c1[1]);
                        let c2 =
                            o.c2.map(|v| Complex64::new(v[0], v[1]))
                                .unwrap_or_else(|| c1.conj());
                        TimeAmplitude::new(c1, c2, mode.omega)
                    }
                    None => TimeAmplitude::real_cosine(1.0, mode.omega),
                },
            )
            .collect()
    }

    pub fn unit_system(&self) -> UnitSystem {
        if self.cavity.unit_system == "si" {
            UnitSystem::Si
        } else {
            UnitSystem::GaussianNatural
        }
    }
}

/// Apply one `key.path=value` override onto the parsed TOML tree.
fn apply_override(root: &mut toml::Value, item: &str) -> anyhow::Result<()> {
    let (path, raw) = item
        .split_once('=')
        .with_context(|| format!("override '{item}' is not of the form key=value"))?;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        bail!("override path '{path}' has an empty segment");
    }
    let mut node = root;
    for segment in &segments[..segments.len() - 1] {
        if !node.is_table() {
            bail!("override path '{path}' crosses a non-table value");
        }
        let table = node.as_table_mut().expect("checked above");
        node = table
            .entry((*segment).to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .with_context(|| format!("override path '{path}' crosses a non-table value"))?;
    table.insert(segments[segments.len() - 1].to_string(), parse_scalar(raw));
    Ok(())
}

/// Infer the TOML type of an override value: bool, integer, float, then
/// string.
fn parse_scalar(raw: &str) -> toml::Value {
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    toml::Value::String(raw.to_string())
}
