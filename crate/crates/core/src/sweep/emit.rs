use std::fmt::Write as _;
use std::io::{self, Write};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bound::{BoundKind, Metric};
use crate::error::{MetricsError, Result};
use crate::geometry::TangentVector2;
use crate::scalar::Scalar;
use crate::sweep::fit::ExponentFit;
use crate::sweep::record::SweepRecord;

pub const CSV_HEADER: &str = "m,delta,metric,kind,method,value,dir_z_re,dir_z_im,dir_w_re,dir_w_im";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

/// Records and fits of one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepDocument<T> {
    pub records: Vec<SweepRecord<T>>,
    pub fits: Vec<ExponentFit<T>>,
}

/// Shortest round-trip decimal; negative zero is printed as `0`.
fn num<T: Scalar>(x: T) -> String {
    format!("{}", x + T::zero())
}

fn csv_field(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn write_csv<T: Scalar, W: Write>(mut out: W, records: &[SweepRecord<T>]) -> io::Result<()> {
    out.write_all(to_csv(records).as_bytes())
}

pub fn to_csv<T: Scalar>(records: &[SweepRecord<T>]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let (method, value) = match &r.error {
            Some(e) => (csv_field(&format!("error:{e}")), String::new()),
            None => (csv_field(&r.method), num(r.value)),
        };
        let d = &r.direction;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.m,
            num(r.delta),
            r.metric,
            r.kind,
            method,
            value,
            num(d.xi_z.re),
            num(d.xi_z.im),
            num(d.xi_w.re),
            num(d.xi_w.im)
        );
    }
    s
}

#[derive(Serialize, Deserialize)]
struct DirectionJson {
    xi_z: [f64; 2],
    xi_w: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    m: u32,
    delta: f64,
    metric: Metric,
    kind: BoundKind,
    method: String,
    value: Option<f64>,
    direction: DirectionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct FitJson {
    metric: Metric,
    kind: BoundKind,
    direction: DirectionJson,
    slope: f64,
    intercept: f64,
    r_squared: f64,
    theoretical_slope: f64,
    tolerance: f64,
    within_tolerance: bool,
    points: usize,
}

#[derive(Serialize, Deserialize)]
struct DocumentJson {
    records: Vec<RecordJson>,
    fits: Vec<FitJson>,
}

fn dir_out<T: Scalar>(d: &TangentVector2<T>) -> DirectionJson {
    let c = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
    DirectionJson { xi_z: c(d.xi_z), xi_w: c(d.xi_w) }
}

fn dir_in<T: Scalar>(d: &DirectionJson) -> TangentVector2<T> {
    TangentVector2::from_parts(T::lit(d.xi_z[0]), T::lit(d.xi_z[1]), T::lit(d.xi_w[0]), T::lit(d.xi_w[1]))
}

pub fn to_json<T: Scalar>(records: &[SweepRecord<T>], fits: &[ExponentFit<T>]) -> String {
    let doc = DocumentJson {
        records: records
            .iter()
            .map(|r| RecordJson {
                m: r.m,
                delta: r.delta.to_f64_lossy(),
                metric: r.metric,
                kind: r.kind,
                method: r.method.clone(),
                value: if r.is_ok() { Some(r.value.to_f64_lossy()) } else { None },
                direction: dir_out(&r.direction),
                error: r.error.clone(),
            })
            .collect(),
        fits: fits
            .iter()
            .map(|f| FitJson {
                metric: f.metric,
                kind: f.kind,
                direction: dir_out(&f.direction),
                slope: f.slope.to_f64_lossy(),
                intercept: f.intercept.to_f64_lossy(),
                r_squared: f.r_squared.to_f64_lossy(),
                theoretical_slope: f.theoretical_slope.to_f64_lossy(),
                tolerance: f.tolerance.to_f64_lossy(),
                within_tolerance: f.within_tolerance,
                points: f.points,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json<T: Scalar>(text: &str) -> Result<SweepDocument<T>> {
    let doc: DocumentJson =
        serde_json::from_str(text).map_err(|e| MetricsError::Config(format!("malformed sweep document: {e}")))?;
    Ok(SweepDocument {
        records: doc
            .records
            .iter()
            .map(|r| SweepRecord {
                m: r.m,
                delta: T::lit(r.delta),
                metric: r.metric,
                kind: r.kind,
                method: r.method.clone(),
                value: r.value.map_or(T::nan(), T::lit),
                direction: dir_in(&r.direction),
                error: r.error.clone(),
            })
            .collect(),
        fits: doc
            .fits
            .iter()
            .map(|f| ExponentFit {
                metric: f.metric,
                kind: f.kind,
                direction: dir_in(&f.direction),
                slope: T::lit(f.slope),
                intercept: T::lit(f.intercept),
                r_squared: T::lit(f.r_squared),
                theoretical_slope: T::lit(f.theoretical_slope),
                tolerance: T::lit(f.tolerance),
                within_tolerance: f.within_tolerance,
                points: f.points,
            })
            .collect(),
    })
}

pub fn emit<T: Scalar>(records: &[SweepRecord<T>], fits: &[ExponentFit<T>], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => to_csv(records),
        OutputFormat::Json => to_json(records, fits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::method;
    use crate::caratheodory::caratheodory_ring;
    use crate::geometry::{BasePoint, EggRingDomain};
    use crate::sweep::fit::fit_exponent;

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(to_csv::<f64>(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn caratheodory_row() {
        let d = EggRingDomain::new(2).unwrap();
        let b = BasePoint::new(0.1).unwrap();
        let bound = caratheodory_ring(&d, &b, &TangentVector2::normal()).unwrap();
        let csv = to_csv(&[SweepRecord::from_bound(2, bound)]);
        assert_eq!(csv.lines().nth(1).unwrap(), "2,0.1,caratheodory,exact,hull-mobius,1.5625,1,0,0,0");
    }

    #[test]
    fn error_rows() {
        let r = SweepRecord::<f64>::failed(
            3,
            1e-3,
            Metric::Kobayashi,
            BoundKind::Upper,
            method::DISC_SEARCH,
            TangentVector2::from_parts(-0.0, 0.0, 0.0, 0.0),
            "no disc, sorry",
        );
        let csv = to_csv(std::slice::from_ref(&r));
        assert_eq!(csv.lines().nth(1).unwrap(), "3,0.001,kobayashi,upper,error:no disc; sorry,,0,0,0,0");
        let json = to_json(&[r], &[]);
        assert!(json.contains("\"value\": null"));
        let back: SweepDocument<f64> = parse_json(&json).unwrap();
        assert!(back.records[0].value.is_nan());
        assert_eq!(back.records[0].error.as_deref(), Some("no disc, sorry"));
    }

    #[test]
    fn json_round_trip() {
        let recs: Vec<SweepRecord<f64>> = [1e-4f64, 3.3e-3, 1.0 / 7.0, 0.2]
            .iter()
            .map(|&d| SweepRecord {
                m: 2,
                delta: d,
                metric: Metric::Sibony,
                kind: BoundKind::Lower,
                method: method::PSH_WITNESS.into(),
                value: d.powf(-0.5) / 3.0,
                direction: TangentVector2::from_parts(1.0 / 3.0, -0.25, 0.0, 1e-17),
                error: None,
            })
            .collect();
        let fits = vec![fit_exponent(&recs).unwrap()];
        let json = emit(&recs, &fits, OutputFormat::Json);
        let back = parse_json::<f64>(&json).unwrap();
        assert_eq!(back, SweepDocument { records: recs, fits });
        assert!(json.contains("\"xi_z\": [\n"));
    }

    #[test]
    fn formats_parse() {
        assert_eq!(OutputFormat::parse("CSV"), Some(OutputFormat::Csv));
        assert_eq!(OutputFormat::parse("json"), Some(OutputFormat::Json));
        assert_eq!(OutputFormat::parse("xml"), None);
    }
}
