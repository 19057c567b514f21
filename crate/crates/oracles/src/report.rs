use serde::Serialize;

use crate::Result;

/// One fast-path value checked against its oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub fast: f64,
    pub oracle: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    /// Relative deviation `|fast - oracle| / |oracle|`, absolute when the oracle is zero.
    pub fn new(quantity: impl Into<String>, fast: f64, oracle: f64, tolerance: f64) -> Self {
        let diff = (fast - oracle).abs();
        let deviation = if oracle == 0.0 { diff } else { diff / oracle.abs() };
        OracleReport {
            quantity: quantity.into(),
            fast,
            oracle,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }

    /// Report for a precomputed deviation, e.g. a vector norm ratio.
    pub fn from_deviation(quantity: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        OracleReport {
            quantity: quantity.into(),
            fast: f64::NAN,
            oracle: f64::NAN,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

pub fn write_reports_csv<W: std::io::Write>(w: W, reports: &[OracleReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
