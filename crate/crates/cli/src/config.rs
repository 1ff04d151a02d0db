//! Run configuration. Strictly parsed: unknown keys are errors and every
//! dimensional value carries its unit.

use std::path::Path;

use polariton_core::signals::{Broadening, InitialPopulation, LinewidthModel, Pulse};
use polariton_core::{Cavity, InitialSelector, Molecule, SolventConfig, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::units::{Dipole, Length, Temperature, Time, Wavenumber};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trps: Option<TrpsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twodir: Option<TwoDirSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipoles: Option<DipoleSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Dynamics,
    Trps,
    Twodir,
    Dipoles,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub kind: RunKind,
    /// Output file stem.
    pub name: String,
    #[serde(default = "default_output")]
    pub output_dir: String,
    /// Frequency columns as detunings from the cavity or absolute.
    #[serde(default)]
    pub axis_convention: AxisConvention,
}

fn default_output() -> String {
    "output".into()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisConvention {
    #[default]
    Detuning,
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub temperature: Temperature,
    pub cavity: CavitySection,
    /// Explicit molecule list; alternative to `template` + `count`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molecules: Option<Vec<MoleculeSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<MoleculeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Length>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub frequency: Wavenumber,
    /// Quality factor ω_c/κ; give this or `loss`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<f64>,
    /// Photon loss rate κ; zero switches leakage off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<Wavenumber>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeSection {
    pub frequency: Wavenumber,
    pub disorder_shift: Wavenumber,
    #[serde(default = "zero_wavenumber")]
    pub anharmonicity: Wavenumber,
    pub coupling: Wavenumber,
    pub dipole: [Dipole; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Length>,
    pub localization: Length,
    pub solvent_gap: Wavenumber,
    pub solvent_rate: Wavenumber,
}

fn zero_wavenumber() -> Wavenumber {
    Wavenumber::new(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    LowerPolariton,
    UpperPolariton,
    Dark,
    DarkUniform,
    Site,
    Photon,
    Ground,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub state: InitialKind,
    /// 1-based molecule for `site`, 1-based dark state for `dark`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// Solvent bits l_1..l_N of the starting block; all zero by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub end: Time,
    pub step: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGrid {
    pub from: Wavenumber,
    pub to: Wavenumber,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub center: Wavenumber,
    pub sigma: Wavenumber,
    #[serde(default = "x_polarization")]
    pub polarization: [f64; 3],
    #[serde(default = "unit_amplitude")]
    pub amplitude: f64,
}

fn x_polarization() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

fn unit_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialSection {
    pub points: usize,
    pub margin: Length,
    pub snapshots: Vec<Time>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    pub initial: InitialSection,
    pub times: TimeGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial: Option<SpatialSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrpsSection {
    pub initial: InitialSection,
    pub delays: Vec<Time>,
    pub probe: PulseSection,
    /// Local oscillator; the probe pulse when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<PulseSection>,
    pub omega: FrequencyGrid,
    #[serde(default = "yes")]
    pub include_leakage_term: bool,
    #[serde(default)]
    pub linewidth: LinewidthModel,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EchoSection {
    pub k1: PulseSection,
    pub k2: PulseSection,
    pub k3: PulseSection,
    pub lo: PulseSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoDirSection {
    pub pulses: EchoSection,
    pub t2: Vec<Time>,
    pub omega1: FrequencyGrid,
    pub omega3: FrequencyGrid,
    pub initial_population: InitialPopulation,
    #[serde(default)]
    pub subtract_gsb: bool,
    /// Write ESE/GSB/ESD columns next to the total.
    #[serde(default)]
    pub components: bool,
    #[serde(default)]
    pub linewidth: LinewidthModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BroadeningSection {
    pub shape: Broadening,
    /// Half width at half maximum.
    pub width: Wavenumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleSection {
    pub n: usize,
    pub collective_coupling: Wavenumber,
    pub detuned_count: Vec<usize>,
    pub detuning: Wavenumber,
    #[serde(default = "x_polarization")]
    pub polarization: [f64; 3],
    pub omega: FrequencyGrid,
    pub broadening: BroadeningSection,
    /// Features below this fraction of the strongest stick are ignored.
    #[serde(default = "feature_threshold")]
    pub threshold: f64,
    /// Repeat with a dense eigensolve and report the disagreement.
    #[serde(default)]
    pub dense_check: bool,
}

fn feature_threshold() -> f64 {
    0.01
}

fn config_error(what: impl Into<String>) -> CliError {
    CliError::Config(what.into())
}

impl RunConfig {
    /// Reads TOML, or JSON when the extension is `.json`. A JSON sidecar
    /// written by `run` is accepted as is: its `config` member is used.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let config = if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
        .map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        let body = match value.get("config") {
            Some(inner) if value.get("software").is_some() => inner.clone(),
            _ => value,
        };
        let config: RunConfig = serde_json::from_value(body).map_err(|e| config_error(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), CliError> {
        let section_present = match self.run.kind {
            RunKind::Dynamics => self.dynamics.is_some(),
            RunKind::Trps => self.trps.is_some(),
            RunKind::Twodir => self.twodir.is_some(),
            RunKind::Dipoles => self.dipoles.is_some(),
            RunKind::Validate => true,
        };
        if !section_present {
            return Err(config_error(format!(
                "run.kind = {:?} needs a matching [{}] section",
                self.run.kind,
                serde_json::to_value(self.run.kind).unwrap().as_str().unwrap_or_default()
            )));
        }
        if self.run.name.is_empty() || self.run.name.contains(['/', '\\']) {
            return Err(config_error("run.name must be a plain, non-empty file stem"));
        }
        self.system.params()?;
        Ok(())
    }

    /// The same run with every derived choice written out explicitly.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let params = self.system.params()?;
        let mut out = self.clone();
        out.system = SystemSection::from_params(&params);
        Ok(out)
    }
}

impl MoleculeSection {
    fn to_molecule(&self, position: f64) -> Molecule {
        Molecule {
            frequency: self.frequency.value,
            disorder_shift: self.disorder_shift.value,
            anharmonicity: self.anharmonicity.value,
            coupling: self.coupling.value,
            dipole: self.dipole.map(|d| d.value),
            position,
            localization: self.localization.value,
            solvent_gap: self.solvent_gap.value,
            solvent_rate: self.solvent_rate.value,
        }
    }

    fn from_molecule(m: &Molecule) -> Self {
        MoleculeSection {
            frequency: Wavenumber::new(m.frequency),
            disorder_shift: Wavenumber::new(m.disorder_shift),
            anharmonicity: Wavenumber::new(m.anharmonicity),
            coupling: Wavenumber::new(m.coupling),
            dipole: m.dipole.map(Dipole::new),
            position: Some(Length::new(m.position)),
            localization: Length::new(m.localization),
            solvent_gap: Wavenumber::new(m.solvent_gap),
            solvent_rate: Wavenumber::new(m.solvent_rate),
        }
    }
}

impl SystemSection {
    pub fn params(&self) -> Result<SystemParams, CliError> {
        let quality = match (self.cavity.quality, self.cavity.loss) {
            (Some(q), None) => q,
            (None, Some(loss)) if loss.value == 0.0 => f64::INFINITY,
            (None, Some(loss)) => self.cavity.frequency.value / loss.value,
            _ => return Err(config_error("cavity needs exactly one of `quality` and `loss`")),
        };
        let cavity = Cavity {
            frequency: self.cavity.frequency.value,
            quality,
        };
        let molecules = match (&self.molecules, &self.template, self.count) {
            (Some(list), None, None) => list
                .iter()
                .map(|m| m.to_molecule(m.position.map_or(0.0, |p| p.value)))
                .collect(),
            (None, Some(t), Some(n)) => {
                if t.position.is_some() {
                    return Err(config_error("template molecules take `spacing`, not `position`"));
                }
                let spacing = self.spacing.map_or(0.0, |s| s.value);
                (0..n).map(|i| t.to_molecule(i as f64 * spacing)).collect()
            }
            _ => {
                return Err(config_error(
                    "give either `molecules` or `template` together with `count`",
                ))
            }
        };
        if self.spacing.is_some() && self.template.is_none() {
            return Err(config_error("`spacing` only applies to `template`"));
        }
        SystemParams::new(molecules, cavity, self.temperature.value)
            .map_err(|e| config_error(e.to_string()))
    }

    pub fn from_params(p: &SystemParams) -> Self {
        let c = p.cavity();
        let (quality, loss) = if c.quality.is_finite() {
            (Some(c.quality), None)
        } else {
            (None, Some(Wavenumber::new(0.0)))
        };
        SystemSection {
            temperature: Temperature::new(p.temperature()),
            cavity: CavitySection {
                frequency: Wavenumber::new(c.frequency),
                quality,
                loss,
            },
            molecules: Some(p.molecules().iter().map(MoleculeSection::from_molecule).collect()),
            template: None,
            count: None,
            spacing: None,
        }
    }
}

impl InitialSection {
    pub fn selector(&self, n: usize) -> Result<(InitialSelector, SolventConfig), CliError> {
        let one_based = |what: &str| -> Result<usize, CliError> {
            match self.index {
                Some(k) if k >= 1 => Ok(k - 1),
                _ => Err(config_error(format!("initial state `{what}` needs a 1-based `index`"))),
            }
        };
        let selector = match self.state {
            InitialKind::LowerPolariton => InitialSelector::LowerPolariton,
            InitialKind::UpperPolariton => InitialSelector::UpperPolariton,
            InitialKind::Dark => InitialSelector::Dark(one_based("dark")?),
            InitialKind::DarkUniform => InitialSelector::DarkUniform,
            InitialKind::Site => {
                let i = one_based("site")?;
                if i >= n {
                    return Err(config_error(format!("site index {} exceeds N = {n}", i + 1)));
                }
                InitialSelector::Site(i)
            }
            InitialKind::Photon => InitialSelector::Site(n),
            InitialKind::Ground => InitialSelector::Ground,
        };
        if self.index.is_some() && !matches!(self.state, InitialKind::Dark | InitialKind::Site) {
            return Err(config_error("`index` only applies to `dark` and `site`"));
        }
        let config = match &self.configuration {
            None => SolventConfig::ground(n),
            Some(bits) if bits.len() == n => SolventConfig::from_bits(bits),
            Some(bits) => {
                return Err(config_error(format!(
                    "configuration has {} bits for {n} molecules",
                    bits.len()
                )))
            }
        }
        .map_err(|e| config_error(e.to_string()))?;
        Ok((selector, config))
    }
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        let (end, step) = (self.end.value, self.step.value);
        if !(step > 0.0) || !(end >= 0.0) {
            return Err(config_error("time grid needs step > 0 and end >= 0"));
        }
        let count = (end / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| k as f64 * step).collect())
    }
}

impl FrequencyGrid {
    pub fn axis(&self) -> Result<Vec<f64>, CliError> {
        polariton_core::signals::frequency_axis(self.from.value, self.to.value, self.points)
            .map_err(|e| config_error(e.to_string()))
    }
}

impl PulseSection {
    pub fn pulse(&self) -> Result<Pulse, CliError> {
        Pulse::new(self.center.value, self.sigma.value, self.polarization, self.amplitude)
            .map_err(|e| config_error(e.to_string()))
    }
}
