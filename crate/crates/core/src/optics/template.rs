//! Declarative device topologies: stage lists whose plate angles are bound
//! from a setting row.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Element, Polarization, Stage};
use super::settings::{plate_index, SettingRow};
use crate::error::{Error, Result};
use crate::pmsquare::ObservableId;

const BUNDLED: &str = include_str!("../../data/templates.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageKind {
    Hwp,
    Qwp,
    Bd,
    Pbs,
    Qc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub kind: StageKind,
    /// Setting-table column supplying the angle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate: Option<String>,
    /// Fixed angle for plates that are not in the table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default)]
    pub required: bool,
    pub rails: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displace: Option<Polarization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keep: Option<Polarization>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceTemplate {
    pub name: String,
    pub rails: usize,
    pub input_rails: [usize; 2],
    pub output_rails: [usize; 2],
    pub measurements: Vec<ObservableId>,
    #[serde(rename = "stage")]
    pub stages: Vec<StageSpec>,
}

/// Angle offsets applied on top of a setting row, keyed by plate name.
pub type AngleOffsets<'a> = &'a [(&'a str, f64)];

impl DeviceTemplate {
    pub fn handles(&self, id: ObservableId) -> bool {
        self.measurements.contains(&id)
    }

    /// Builds the circuit for one setting row.
    pub fn instantiate(&self, row: &SettingRow) -> Result<Circuit> {
        self.instantiate_with(row, &[])
    }

    /// Like [`instantiate`](Self::instantiate) with per-plate angle offsets
    /// in degrees; offsets on bypassed plates are ignored.
    pub fn instantiate_with(&self, row: &SettingRow, offsets: AngleOffsets<'_>) -> Result<Circuit> {
        let mut stages = Vec::with_capacity(self.stages.len());
        for (k, spec) in self.stages.iter().enumerate() {
            let element = match spec.kind {
                StageKind::Hwp | StageKind::Qwp => {
                    let angle = match (&spec.plate, spec.angle) {
                        (Some(plate), _) => {
                            let a = row.angles[plate_index(plate)?];
                            match a {
                                Some(a) => Some(
                                    a + offsets.iter().filter(|(p, _)| p == plate).map(|(_, d)| d).sum::<f64>(),
                                ),
                                None if spec.required => {
                                    return Err(Error::Data(format!(
                                        "{}: plate {plate} required but bypassed for ({}, {})",
                                        self.name, row.measurement, row.outcome
                                    )))
                                }
                                None => None,
                            }
                        }
                        (None, Some(a)) => Some(a),
                        (None, None) => {
                            return Err(Error::Data(format!("{}: stage {k} has neither plate nor angle", self.name)))
                        }
                    };
                    match (spec.kind, angle) {
                        (_, None) => continue,
                        (StageKind::Hwp, Some(angle_deg)) => Element::Hwp { angle_deg },
                        (_, Some(angle_deg)) => Element::Qwp { angle_deg },
                    }
                }
                StageKind::Bd => match (spec.displace, spec.shift) {
                    (Some(displaced), Some(shift)) => Element::BeamDisplacer { displaced, shift },
                    _ => return Err(Error::Data(format!("{}: displacer stage {k} needs displace and shift", self.name))),
                },
                StageKind::Pbs => Element::Pbs {
                    keep: spec
                        .keep
                        .ok_or_else(|| Error::Data(format!("{}: PBS stage {k} needs keep", self.name)))?,
                },
                StageKind::Qc => Element::Dephaser,
            };
            stages.push(Stage::new(element, spec.rails.clone()));
        }
        Ok(Circuit { rails: self.rails, input_rails: self.input_rails, output_rails: self.output_rails, stages })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSet {
    #[serde(rename = "device")]
    pub devices: Vec<DeviceTemplate>,
}

impl TemplateSet {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled templates parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Data(format!("template file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn for_measurement(&self, id: ObservableId) -> Result<&DeviceTemplate> {
        self.devices
            .iter()
            .find(|d| d.handles(id))
            .ok_or_else(|| Error::Data(format!("no device template handles {id}")))
    }
}
