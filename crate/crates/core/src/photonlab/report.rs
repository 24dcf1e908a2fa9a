//! CSV and JSON serialization of experiment reports.

use super::experiment::ExperimentReport;
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 16] = [
    "state_label", "H1", "H2", "H3", "H4", "H5", "H6", "sigma1", "sigma2", "sigma3", "sigma4", "sigma5", "sigma6",
    "margin", "sigma_margin", "sd_violation",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    /// `#`-prefixed provenance lines followed by one row per state. Empty
    /// cells mark quantities that analytic mode does not produce.
    pub fn to_csv(&self) -> Result<String> {
        let p = &self.provenance;
        let mut out = format!(
            "# {} {}\n# seed={} shots={} resamples={} mode={} noise={} depolarizing={} default_depolarizing={}\n",
            p.software, p.version, p.seed, p.shots, p.resamples, p.mode, p.noise, p.depolarizing, p.default_depolarizing
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Data(format!("csv: {e}"));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec = vec![r.state.clone()];
            rec.extend(r.terms.iter().map(f64::to_string));
            rec.extend((0..6).map(|i| cell(r.sigmas.map(|s| s[i]))));
            rec.push(r.margin.to_string());
            rec.push(cell(r.sigma_margin));
            rec.push(cell(r.sd_violation));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let body = w.into_inner().map_err(|e| Error::Data(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf8"));
        Ok(out)
    }

    /// Pretty JSON; non-finite numbers become `null`.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(format!("json: {e}")))
    }
}
