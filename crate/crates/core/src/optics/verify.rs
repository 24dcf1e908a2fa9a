//! Checks that tabulated plate settings realize the intended projectors,
//! and chains verified devices into sequential context measurements.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::jones::phase_insensitive_distance;
use super::settings::{SettingRow, SettingTable, PLATES};
use super::template::{DeviceTemplate, TemplateSet};
use crate::error::{Error, Result};
use crate::pmsquare::{observable, outcome_triple, Context, JointDistribution8, ObservableId};
use crate::qcore::{projector_pm, DensityMatrix, Operator4, Sign};

/// Both distances must fall below this for a row to pass.
pub const PASS_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SettingReport {
    pub measurement: ObservableId,
    pub outcome: Sign,
    pub device: String,
    /// `||V†V - P||` in operator norm.
    pub effect_distance: f64,
    /// `min_phi ||V - e^{i phi} P||`: the device must also leave the
    /// post-measurement state as `P rho P`.
    pub instrument_distance: f64,
    pub passed: bool,
}

impl SettingReport {
    pub fn metric(&self) -> f64 {
        self.effect_distance.max(self.instrument_distance)
    }
}

fn target(id: ObservableId, outcome: Sign) -> Operator4<f64> {
    projector_pm(&observable::<f64>(id), outcome).expect("square observables are projective")
}

/// Kraus operator of one device output for a (possibly perturbed) row.
/// Perturbed settings may leak light out of the device, which is then lost.
pub fn device_instrument(template: &DeviceTemplate, row: &SettingRow, offsets: &[(&str, f64)]) -> Result<Operator4<f64>> {
    let circuit = template.instantiate_with(row, offsets)?;
    if offsets.is_empty() {
        circuit.compile()?.kraus()
    } else {
        circuit.compile_lossy()?.kraus()
    }
}

pub fn verify_row(template: &DeviceTemplate, row: &SettingRow, offsets: &[(&str, f64)]) -> Result<SettingReport> {
    let v = device_instrument(template, row, offsets)?;
    let p = target(row.measurement, row.outcome);
    let effect_distance = (v.adjoint() * v - p).operator_norm();
    let instrument_distance = phase_insensitive_distance(&v, &p);
    Ok(SettingReport {
        measurement: row.measurement,
        outcome: row.outcome,
        device: template.name.clone(),
        effect_distance,
        instrument_distance,
        passed: effect_distance < PASS_TOLERANCE && instrument_distance < PASS_TOLERANCE,
    })
}

pub fn verify_setting(id: ObservableId, outcome: Sign, table: &SettingTable, templates: &TemplateSet) -> Result<SettingReport> {
    verify_row(templates.for_measurement(id)?, table.get(id, outcome)?, &[])
}

/// Reports for every row, in table order.
pub fn verify_all(table: &SettingTable, templates: &TemplateSet) -> Result<Vec<SettingReport>> {
    table
        .rows()
        .iter()
        .map(|row| verify_row(templates.for_measurement(row.measurement)?, row, &[]))
        .collect()
}

/// Setting table plus device templates.
#[derive(Clone, Debug)]
pub struct DeviceLibrary {
    pub table: SettingTable,
    pub templates: TemplateSet,
}

impl DeviceLibrary {
    pub fn bundled() -> Self {
        Self { table: SettingTable::bundled(), templates: TemplateSet::bundled() }
    }

    pub fn instrument(&self, id: ObservableId, outcome: Sign) -> Result<Operator4<f64>> {
        device_instrument(self.templates.for_measurement(id)?, self.table.get(id, outcome)?, &[])
    }

    pub fn verify(&self, id: ObservableId, outcome: Sign) -> Result<SettingReport> {
        verify_setting(id, outcome, &self.table, &self.templates)
    }

    /// True if both outcome rows of every context member pass.
    pub fn context_verified(&self, ctx: &Context) -> Result<bool> {
        for id in ctx.members() {
            for s in Sign::BOTH {
                if !self.verify(id, s)?.passed {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Outcome distribution of measuring the context members in order with
    /// the simulated devices: `P(s1,s2,s3) = Tr(K rho K†)`, `K = V3 V2 V1`.
    pub fn chained_joint_distribution(&self, rho: &DensityMatrix<f64>, ctx: &Context) -> Result<JointDistribution8<f64>> {
        self.chain(rho, ctx, |id, s| self.instrument(id, s))
    }

    /// As [`chained_joint_distribution`](Self::chained_joint_distribution)
    /// with every plate angle independently offset by a Gaussian of width
    /// `sigma_deg`. Lossy devices are renormalized over the eight outcomes.
    pub fn jittered_joint_distribution<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix<f64>,
        ctx: &Context,
        sigma_deg: f64,
        rng: &mut R,
    ) -> Result<JointDistribution8<f64>> {
        if !(sigma_deg >= 0.0 && sigma_deg.is_finite()) {
            return Err(Error::InvalidInput(format!("jitter sigma {sigma_deg} must be finite and non-negative")));
        }
        let normal = Normal::new(0.0, sigma_deg).map_err(|e| Error::InvalidInput(format!("jitter sigma: {e}")))?;
        let mut offsets: Vec<[(&str, f64); 28]> = Vec::new();
        for _ in 0..6 {
            let mut o = [("", 0.0); 28];
            for (slot, plate) in o.iter_mut().zip(PLATES) {
                *slot = (plate, normal.sample(rng));
            }
            offsets.push(o);
        }
        let ids = ctx.members();
        self.chain(rho, ctx, |id, s| {
            let pos = ids.iter().position(|&m| m == id).expect("member");
            let slot = 2 * pos + usize::from(s.is_minus());
            device_instrument(self.templates.for_measurement(id)?, self.table.get(id, s)?, &offsets[slot])
        })
    }

    fn chain(
        &self,
        rho: &DensityMatrix<f64>,
        ctx: &Context,
        mut instrument: impl FnMut(ObservableId, Sign) -> Result<Operator4<f64>>,
    ) -> Result<JointDistribution8<f64>> {
        let ids = ctx.members();
        let mut ops = Vec::with_capacity(6);
        for id in ids {
            ops.push([instrument(id, Sign::Plus)?, instrument(id, Sign::Minus)?]);
        }
        let mut probs = [0.0; 8];
        for (k, p) in probs.iter_mut().enumerate() {
            let t = outcome_triple(k);
            let pick = |i: usize| ops[i][usize::from(t[i].is_minus())];
            let kraus = pick(2) * pick(1) * pick(0);
            *p = (kraus * *rho.matrix() * kraus.adjoint()).trace().re.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::Consistency("devices transmit nothing".into()));
        }
        for p in &mut probs {
            *p /= total;
        }
        JointDistribution8::new(probs)
    }
}
