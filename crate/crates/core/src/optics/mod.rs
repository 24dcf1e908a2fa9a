//! Jones-calculus model of the photonic measurement devices.
//!
//! The four-level system is a photon's spatial mode (U/D, left tensor
//! factor) and polarization (H/V, right factor):
//! `|0>=UH, |1>=UV, |2>=DH, |3>=DV`.

pub mod circuit;
pub mod jones;
pub mod settings;
pub mod template;
pub mod verify;

pub use circuit::{
    apply_circuit, effective_measurement_operator, Circuit, CircuitInput, CircuitOutput, CompiledCircuit, Element,
    FieldState, KeptModes, Mode, Polarization, Stage,
};
pub use jones::{basis_rotation, equal_up_to_column_phases, jones_hwp, jones_qwp, phase_insensitive_distance};
pub use settings::{SettingRow, SettingTable, PLATES};
pub use template::{DeviceTemplate, StageKind, StageSpec, TemplateSet};
pub use verify::{verify_all, verify_row, verify_setting, DeviceLibrary, SettingReport, PASS_TOLERANCE};
