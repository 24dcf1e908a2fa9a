//! Wave-plate angle tables keyed by (measurement, outcome).

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pmsquare::ObservableId;
use crate::qcore::Sign;

/// Plate columns in file order.
pub const PLATES: [&str; 28] = [
    "Q1", "H4", "H5", "H6", "Q2", "H7", "H8", "H9", "H10", "H11", "H12", "Q3", "H13", "H14", "H15", "H16",
    "H17", "Q4", "H18", "H19", "H20", "H21", "Q5", "H22", "H23", "H24", "H25", "Q6",
];

const BUNDLED: &str = include_str!("../../data/settings.csv");

#[derive(Clone, Debug, PartialEq)]
pub struct SettingRow {
    pub measurement: ObservableId,
    pub outcome: Sign,
    /// Angle in degrees per plate; `None` means the plate is bypassed.
    pub angles: [Option<f64>; 28],
}

impl SettingRow {
    pub fn angle(&self, plate: &str) -> Result<Option<f64>> {
        let i = plate_index(plate)?;
        Ok(self.angles[i])
    }
}

pub fn plate_index(plate: &str) -> Result<usize> {
    PLATES
        .iter()
        .position(|p| *p == plate)
        .ok_or_else(|| Error::UnknownLabel(format!("plate {plate}")))
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SettingTable {
    rows: Vec<SettingRow>,
}

fn parse_outcome(s: &str) -> Option<Sign> {
    match s.trim() {
        "+1" | "1" | "+" => Some(Sign::Plus),
        "-1" | "-" => Some(Sign::Minus),
        _ => None,
    }
}

impl SettingTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled setting table parses")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses CSV text. Row indices in errors count data rows from 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| Error::Parse { row: 0, message: e.to_string() })?.clone();
        let expected: Vec<&str> = ["measurement", "outcome"].into_iter().chain(PLATES).collect();
        let got: Vec<&str> = header.iter().map(str::trim).collect();
        if got != expected {
            return Err(Error::Parse { row: 0, message: format!("unexpected header {got:?}") });
        }
        let mut rows = Vec::new();
        let mut seen = BTreeMap::new();
        for (k, record) in reader.records().enumerate() {
            let row = k + 1;
            let err = |message: String| Error::Parse { row, message };
            let record = record.map_err(|e| err(e.to_string()))?;
            if record.len() != expected.len() {
                return Err(err(format!("{} fields, expected {}", record.len(), expected.len())));
            }
            let measurement: ObservableId = record[0].trim().parse().map_err(|_| err(format!("unknown measurement {:?}", &record[0])))?;
            let outcome = parse_outcome(&record[1]).ok_or_else(|| err(format!("bad outcome {:?}", &record[1])))?;
            let mut angles = [None; 28];
            for (slot, cell) in angles.iter_mut().zip(record.iter().skip(2)) {
                let cell = cell.trim();
                if !cell.is_empty() {
                    let v: f64 = cell.parse().map_err(|_| err(format!("bad angle {cell:?}")))?;
                    if !v.is_finite() {
                        return Err(err(format!("bad angle {cell:?}")));
                    }
                    *slot = Some(v);
                }
            }
            if seen.insert((measurement, outcome), row).is_some() {
                return Err(err(format!("duplicate row {measurement},{outcome}")));
            }
            rows.push(SettingRow { measurement, outcome, angles });
        }
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&str> = ["measurement", "outcome"].into_iter().chain(PLATES).collect();
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![r.measurement.name().to_string(), r.outcome.to_string()];
            rec.extend(r.angles.iter().map(|a| a.map(|v| v.to_string()).unwrap_or_default()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn rows(&self) -> &[SettingRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, measurement: ObservableId, outcome: Sign) -> Result<&SettingRow> {
        self.rows
            .iter()
            .find(|r| r.measurement == measurement && r.outcome == outcome)
            .ok_or_else(|| Error::Data(format!("no setting row for ({measurement}, {outcome})")))
    }
}
