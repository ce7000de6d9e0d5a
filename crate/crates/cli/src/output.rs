//! Output records and their JSON/CSV renderings.
//!
//! JSON output is one record per line. CSV numbers carry 17 significant
//! digits so doubles survive the round trip.

use serde::{Deserialize, Serialize};

use crate::formats::{ComplexJson, QuadratureJson, ReIm};
use cimmino_core::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub const ZETA_CSV_HEADER: &str = "re_s,im_s,re_zeta,im_zeta,abs_err,flag";

/// 17 significant digits, `.` as decimal separator.
pub fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn re_im(z: Complex64) -> ReIm {
    ReIm { re: z.re, im: z.im }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaRecord {
    pub s: ComplexJson,
    pub value_re: f64,
    pub value_im: f64,
    pub abs_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
}

impl ZetaRecord {
    pub fn csv_row(&self) -> String {
        let s = self.s.value();
        format!(
            "{},{},{},{},{},",
            csv_number(s.re),
            csv_number(s.im),
            csv_number(self.value_re),
            csv_number(self.value_im),
            csv_number(self.abs_error)
        )
    }
}

/// CSV row for a point where no value is reported.
pub fn flagged_csv_row(s: Complex64, flag: &str) -> String {
    format!("{},{},,,,{flag}", csv_number(s.re), csv_number(s.im))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaRecord {
    pub t: f64,
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueRecord {
    pub family: String,
    pub location: f64,
    pub analytic: Vec<ReIm>,
    pub numeric: Vec<ReIm>,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuncEqRecord {
    pub family: String,
    pub s: ComplexJson,
    pub lhs: ReIm,
    pub rhs: ReIm,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodRecord {
    pub route: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour_nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRecord {
    pub x: Vec<f64>,
    pub x_reference: Vec<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Ri")]
    pub ri: Vec<f64>,
    pub per_component_rel_err: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_error_estimate: Option<Vec<f64>>,
    pub method: MethodRecord,
    pub condition_estimate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyRow {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchRecord {
    pub name: String,
    pub iterations: usize,
    pub mean_us: f64,
}

pub fn json_lines<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn verify_table(rows: &[VerifyRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<width$}  {:>12}  {:>12}  result\n", "name", "measured", "bound");
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:>12.3e}  {:>12.3e}  {}\n",
            r.name,
            r.measured,
            r.bound,
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("{} checks, {} failed\n", rows.len(), failed));
    out
}

pub fn verify_csv(rows: &[VerifyRow]) -> String {
    let mut out = String::from("name,measured,bound,pass\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.name, csv_number(r.measured), csv_number(r.bound), r.pass));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_numbers_round_trip() {
        for x in [4.658914123789, -1.0, 1e-300, 0.1, std::f64::consts::PI] {
            let s = csv_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert!(!s.contains(','));
        }
        assert_eq!(csv_number(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn zeta_record_round_trip() {
        let r = ZetaRecord { s: ComplexJson::Real(3.0), value_re: 4.6, value_im: 0.0, abs_error: 1e-14, component: None };
        let text = serde_json::to_string(&r).unwrap();
        let back: ZetaRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(r.csv_row().split(',').count(), 6);
        assert_eq!(flagged_csv_row(Complex64::new(1.0, 0.0), "pole").split(',').count(), 6);
    }

    #[test]
    fn table_marks_failures() {
        let rows = vec![
            VerifyRow { name: "a".into(), measured: 1e-13, bound: 1e-12, pass: true },
            VerifyRow { name: "b".into(), measured: 1e-11, bound: 1e-12, pass: false },
        ];
        let t = verify_table(&rows);
        assert!(t.contains("FAIL"));
        assert!(t.ends_with("2 checks, 1 failed\n"));
    }
}
