//! Imperfection models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qcore::DensityMatrix;

/// Calibrated outcome-depolarizing strength: puts the mean of the five
/// bounded-side entropies at 0.06 bits, the middle of the band observed in
/// the experiment. See [`calibrate_depolarizing`](super::calibrate_depolarizing).
pub const DEFAULT_DEPOLARIZING: f64 = 0.0279;

fn check_unit(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("{name} {p} outside [0, 1]")));
    }
    Ok(())
}

/// State channel `rho -> (1-p) rho + p I/4`.
pub fn apply_depolarizing(rho: &DensityMatrix<f64>, p: f64) -> Result<DensityMatrix<f64>> {
    check_unit("depolarizing strength", p)?;
    Ok(DensityMatrix::maximally_mixed().convex_mix(rho, p))
}

/// Outcome-register noise: with probability `p` the recorded outcome is
/// replaced by a uniformly random one.
pub fn depolarize_outcomes<const K: usize>(probs: &[f64; K], p: f64) -> Result<[f64; K]> {
    check_unit("depolarizing strength", p)?;
    let floor = p / K as f64;
    Ok(probs.map(|q| (1.0 - p) * q + floor))
}

/// Aggregate imperfection model.
///
/// Every context product `O1 O2 O3` is `±I`, so a depolarized state has
/// exactly the same product statistics as the pure one. The noise that
/// matters for the inequality therefore acts on the recorded outcomes
/// (`depolarizing`). State-preparation noise and wave-plate angle jitter
/// are available separately; jitter switches context statistics to the
/// simulated optical devices.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct NoiseModel {
    /// Outcome depolarizing strength in [0, 1].
    pub depolarizing: f64,
    /// Whether `depolarizing` came from `depol:default`.
    pub uses_default: bool,
    /// State depolarizing strength in [0, 1] applied before measuring.
    pub preparation: f64,
    /// Gaussian wave-plate angle error in degrees; zero disables the optics path.
    pub angle_jitter_sigma: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        check_unit("depolarizing strength", p)?;
        Ok(Self { depolarizing: p, ..Self::default() })
    }

    pub fn calibrated_default() -> Self {
        Self { depolarizing: DEFAULT_DEPOLARIZING, uses_default: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("depolarizing strength", self.depolarizing)?;
        check_unit("preparation depolarizing", self.preparation)?;
        if !(self.angle_jitter_sigma >= 0.0 && self.angle_jitter_sigma.is_finite()) {
            return Err(Error::InvalidInput(format!("angle jitter {} must be finite and >= 0", self.angle_jitter_sigma)));
        }
        Ok(())
    }

    pub fn uses_optics(&self) -> bool {
        self.angle_jitter_sigma > 0.0
    }

    pub fn is_noiseless(&self) -> bool {
        self.depolarizing == 0.0 && self.preparation == 0.0 && !self.uses_optics()
    }

    /// State after preparation noise.
    pub fn prepare(&self, rho: &DensityMatrix<f64>) -> Result<DensityMatrix<f64>> {
        if self.preparation == 0.0 {
            Ok(*rho)
        } else {
            apply_depolarizing(rho, self.preparation)
        }
    }
}

/// Grammar: `none | depol:<f> | depol:default`, optionally followed by
/// `,prep:<f>` and `,jitter:<degrees>`.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("noise spec {s:?}: {why}"));
        let mut parts = s.trim().split(',').map(str::trim);
        let head = parts.next().unwrap_or_default();
        let mut model = match head {
            "none" => Self::none(),
            "depol:default" => Self::calibrated_default(),
            _ => match head.strip_prefix("depol:") {
                Some(v) => Self::depolarizing(v.parse().map_err(|_| bad("bad depolarizing strength"))?)?,
                None => return Err(bad("expected none, depol:<f> or depol:default")),
            },
        };
        for part in parts {
            let (key, value) = part.split_once(':').ok_or_else(|| bad("expected key:value"))?;
            let value: f64 = value.parse().map_err(|_| bad("bad number"))?;
            match key {
                "prep" => model.preparation = value,
                "jitter" => model.angle_jitter_sigma = value,
                _ => return Err(bad("unknown modifier")),
            }
        }
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.uses_default {
            f.write_str("depol:default")?;
        } else if self.depolarizing == 0.0 {
            f.write_str("none")?;
        } else {
            write!(f, "depol:{}", self.depolarizing)?;
        }
        if self.preparation > 0.0 {
            write!(f, ",prep:{}", self.preparation)?;
        }
        if self.angle_jitter_sigma > 0.0 {
            write!(f, ",jitter:{}", self.angle_jitter_sigma)?;
        }
        Ok(())
    }
}

impl Serialize for NoiseModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NoiseModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
