use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entangle::PairLabel;
use crate::gf::{Field, FieldConfig, FieldSpec, GfElem, GfError};
use crate::mub::BasisId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("swap repetitions must be at least 1")]
    NoRepetitions,
    #[error("check fraction {0} is outside [0, 1]")]
    CheckFraction(f64),
    #[error("{what} index {index} out of range for d = {d}")]
    IndexOutOfRange { what: &'static str, index: usize, d: usize },
    #[error("unrecognized eavesdropper strategy {0:?}")]
    UnknownEve(String),
    #[error("unrecognized measurement mode {0:?}")]
    UnknownMode(String),
    #[error("bit must be 0 or 1, got {0}")]
    BadBit(u8),
}

/// How Bob tests his two particles for equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementMode {
    /// Exact overlap magnitude.
    Oracle,
    /// Repeated swap tests; needs no knowledge of the basis.
    Swap,
}

impl FromStr for MeasurementMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(MeasurementMode::Oracle),
            "swap" => Ok(MeasurementMode::Swap),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementMode::Oracle => "oracle",
            MeasurementMode::Swap => "swap",
        })
    }
}

/// Eavesdropper strategy in its textual form: `none`, `fixed:<code>`,
/// `uniform-quadratic` or `uniform-all`. Basis codes are `b.index()` for
/// quadratic bases and `d` for the computational basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveSpec {
    None,
    Fixed(usize),
    UniformQuadratic,
    UniformAll,
}

impl FromStr for EveSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(EveSpec::None),
            "uniform-quadratic" => Ok(EveSpec::UniformQuadratic),
            "uniform-all" => Ok(EveSpec::UniformAll),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|code| code.parse().ok())
                .map(EveSpec::Fixed)
                .ok_or_else(|| ConfigError::UnknownEve(s.to_string())),
        }
    }
}

impl fmt::Display for EveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EveSpec::None => f.write_str("none"),
            EveSpec::Fixed(code) => write!(f, "fixed:{code}"),
            EveSpec::UniformQuadratic => f.write_str("uniform-quadratic"),
            EveSpec::UniformAll => f.write_str("uniform-all"),
        }
    }
}

impl Serialize for EveSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EveSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisPicker {
    Fixed(BasisId),
    UniformQuadratic,
    UniformAll,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EveStrategy {
    None,
    InterceptResend(BasisPicker),
}

/// Pair label in config form, as element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairLabelSpec {
    Random(RandomTag),
    Fixed { b: usize, c: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomTag {
    Random,
}

impl PairLabelSpec {
    pub const RANDOM: PairLabelSpec = PairLabelSpec::Random(RandomTag::Random);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairLabelChoice {
    Fixed(PairLabel),
    RandomPerRound,
}

/// Source of message bits: `"random"` or a constant 0/1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BitSource {
    Random(RandomTag),
    Fixed(u8),
}

impl BitSource {
    pub const RANDOM: BitSource = BitSource::Random(RandomTag::Random);
}

/// Serializable session parameters. This is the `--config` document and
/// the config echo in every summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfigFile {
    pub field: FieldConfig,
    pub rounds: usize,
    #[serde(default = "default_check_fraction")]
    pub check_fraction: f64,
    #[serde(default = "default_mode")]
    pub mode: MeasurementMode,
    #[serde(default = "default_reps")]
    pub swap_repetitions: usize,
    #[serde(default = "default_eve")]
    pub eve: EveSpec,
    /// Index of Δ, the difference of the two pairs' c labels.
    #[serde(default)]
    pub delta: usize,
    #[serde(default = "default_pair_label")]
    pub pair_label: PairLabelSpec,
    #[serde(default = "default_bits")]
    pub bits: BitSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub session_index: u64,
}

fn default_check_fraction() -> f64 {
    0.25
}
fn default_mode() -> MeasurementMode {
    MeasurementMode::Oracle
}
fn default_reps() -> usize {
    1
}
fn default_eve() -> EveSpec {
    EveSpec::None
}
fn default_pair_label() -> PairLabelSpec {
    PairLabelSpec::RANDOM
}
fn default_bits() -> BitSource {
    BitSource::RANDOM
}

impl SessionConfigFile {
    /// Defaults for everything except the field and round count.
    pub fn new(field: FieldConfig, rounds: usize) -> Self {
        SessionConfigFile {
            field,
            rounds,
            check_fraction: default_check_fraction(),
            mode: default_mode(),
            swap_repetitions: default_reps(),
            eve: default_eve(),
            delta: 0,
            pair_label: default_pair_label(),
            bits: default_bits(),
            seed: 0,
            session_index: 0,
        }
    }
}

/// Validated session parameters.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub field: Field,
    pub rounds: usize,
    pub check_fraction: f64,
    pub mode: MeasurementMode,
    pub swap_repetitions: usize,
    pub eve: EveStrategy,
    pub delta: GfElem,
    pub pair_label: PairLabelChoice,
    pub bits: BitSource,
    pub seed: u64,
    pub session_index: u64,
    source: SessionConfigFile,
}

impl SessionConfig {
    pub fn from_file(file: &SessionConfigFile) -> Result<Self, ConfigError> {
        let field = Field::from(FieldSpec::from_config(&file.field)?);
        let d = field.d();
        if file.rounds == 0 {
            return Err(ConfigError::NoRounds);
        }
        if file.swap_repetitions == 0 {
            return Err(ConfigError::NoRepetitions);
        }
        if !(0.0..=1.0).contains(&file.check_fraction) {
            return Err(ConfigError::CheckFraction(file.check_fraction));
        }
        let index = |what, index: usize| {
            field
                .from_index(index)
                .map_err(|_| ConfigError::IndexOutOfRange { what, index, d })
        };
        let delta = index("delta", file.delta)?;
        let pair_label = match file.pair_label {
            PairLabelSpec::Random(_) => PairLabelChoice::RandomPerRound,
            PairLabelSpec::Fixed { b, c } => {
                PairLabelChoice::Fixed(PairLabel::new(index("pair b", b)?, index("pair c", c)?))
            }
        };
        let eve = match file.eve {
            EveSpec::None => EveStrategy::None,
            EveSpec::UniformQuadratic => EveStrategy::InterceptResend(BasisPicker::UniformQuadratic),
            EveSpec::UniformAll => EveStrategy::InterceptResend(BasisPicker::UniformAll),
            EveSpec::Fixed(code) => {
                let basis = BasisId::from_code(&field, code).map_err(|_| {
                    ConfigError::IndexOutOfRange {
                        what: "eve basis",
                        index: code,
                        d,
                    }
                })?;
                EveStrategy::InterceptResend(BasisPicker::Fixed(basis))
            }
        };
        if let BitSource::Fixed(bit) = file.bits {
            if bit > 1 {
                return Err(ConfigError::BadBit(bit));
            }
        }
        Ok(SessionConfig {
            field,
            rounds: file.rounds,
            check_fraction: file.check_fraction,
            mode: file.mode,
            swap_repetitions: file.swap_repetitions,
            eve,
            delta,
            pair_label,
            bits: file.bits,
            seed: file.seed,
            session_index: file.session_index,
            source: file.clone(),
        })
    }

    /// The config in file form, with the field modulus made explicit.
    pub fn echo(&self) -> SessionConfigFile {
        let mut echo = self.source.clone();
        echo.field = self.field.to_config();
        echo
    }
}
