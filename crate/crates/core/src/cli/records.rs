use serde::{Deserialize, Serialize};

use crate::bounds::{Side, SupportCertificate, TailBound};
use crate::error::{Error, Result};
use crate::oracle::{Violation, ViolationReport};

/// Significant digits kept in every printed number.
const SIG_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Text form of a rounded number: plain decimal in `[1e-4, 1e12)`,
/// exponent notation otherwise.
fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    let m = r.abs();
    if r == 0.0 || !r.is_finite() || (1e-4..1e12).contains(&m) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::TwoSided => "two_sided",
        Side::Right => "right",
        Side::Left => "left",
    }
}

pub(crate) fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

/// One computed bound as printed by `bound` and `ecf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub method: String,
    pub side: Side,
    pub threshold: f64,
    pub bound: f64,
    pub raw_bound: f64,
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub quad_error: f64,
    pub distribution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical_tail: Option<f64>,
}

impl BoundRecord {
    pub fn new(method: &str, b: &TailBound<f64>, distribution: &str, empirical_tail: Option<f64>) -> Self {
        BoundRecord {
            method: method.into(),
            side: b.side,
            threshold: round_sig(b.threshold),
            bound: round_sig(b.bound),
            raw_bound: round_sig(b.raw_bound),
            s: round_sig(b.s_used),
            k: b.k(),
            quad_error: round_sig(b.quad_error),
            distribution: distribution.into(),
            empirical_tail: empirical_tail.map(round_sig),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut header = vec!["method", "side", "threshold", "bound", "raw_bound", "s", "k", "quad_error", "distribution"];
        let mut row = vec![
            self.method.clone(),
            side_name(self.side).into(),
            fmt_num(self.threshold),
            fmt_num(self.bound),
            fmt_num(self.raw_bound),
            fmt_num(self.s),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            fmt_num(self.quad_error),
            self.distribution.clone(),
        ];
        if let Some(e) = self.empirical_tail {
            header.push("empirical_tail");
            row.push(fmt_num(e));
        }
        csv_text(&header, &[row])
    }

    pub fn to_table(&self) -> String {
        let mut rows = vec![
            ("distribution", self.distribution.clone()),
            ("method", self.method.clone()),
            ("side", side_name(self.side).into()),
            ("threshold", fmt_num(self.threshold)),
            ("s", fmt_num(self.s)),
        ];
        if let Some(k) = self.k {
            rows.push(("k", k.to_string()));
        }
        rows.push(("bound", fmt_num(self.bound)));
        rows.push(("raw_bound", fmt_num(self.raw_bound)));
        rows.push(("quad_error", fmt_num(self.quad_error)));
        if let Some(e) = self.empirical_tail {
            rows.push(("empirical_tail", fmt_num(e)));
        }
        table(&rows)
    }
}

/// One grid point of a sweep; numeric fields are empty when it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub raw_bound: Option<f64>,
    pub quad_error: Option<f64>,
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    pub fn ok(axis: &str, value: f64, b: &TailBound<f64>) -> Self {
        SweepRow {
            axis: axis.into(),
            value: round_sig(value),
            bound: Some(round_sig(b.bound)),
            raw_bound: Some(round_sig(b.raw_bound)),
            quad_error: Some(round_sig(b.quad_error)),
            s: Some(round_sig(b.s_used)),
            k: b.k(),
            error: None,
        }
    }

    pub fn failed(axis: &str, value: f64, e: &Error) -> Self {
        SweepRow {
            axis: axis.into(),
            value: round_sig(value),
            bound: None,
            raw_bound: None,
            quad_error: None,
            s: None,
            k: None,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub method: String,
    pub distribution: String,
    pub rows: Vec<SweepRow>,
}

impl SweepRecord {
    fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    /// `axis,value,bound,raw_bound,quad_error`, plus `error` when some
    /// point failed.
    pub fn to_csv(&self) -> Result<String> {
        let with_error = self.any_failed();
        let mut header = vec!["axis", "value", "bound", "raw_bound", "quad_error"];
        if with_error {
            header.push("error");
        }
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.axis.clone(),
                    fmt_num(r.value),
                    opt_num(r.bound),
                    opt_num(r.raw_bound),
                    opt_num(r.quad_error),
                ];
                if with_error {
                    row.push(r.error.clone().unwrap_or_default());
                }
                row
            })
            .collect();
        csv_text(&header, &rows)
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{} / {}\n", self.distribution, self.method);
        let axis = self.rows.first().map_or("value", |r| r.axis.as_str());
        s.push_str(&format!("{axis:>14} {:>20} {:>20} {:>14}\n", "bound", "raw_bound", "s"));
        for r in &self.rows {
            match &r.error {
                None => s.push_str(&format!(
                    "{:>14} {:>20} {:>20} {:>14}\n",
                    fmt_num(r.value),
                    opt_num(r.bound),
                    opt_num(r.raw_bound),
                    opt_num(r.s)
                )),
                Some(e) => s.push_str(&format!("{:>14} error: {e}\n", fmt_num(r.value))),
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyRecord {
    pub distribution: String,
    pub threshold: f64,
    pub certified: bool,
    pub best_bound: f64,
    pub s_at_best: f64,
    pub s_max_probed: f64,
    pub tol: f64,
}

impl CertifyRecord {
    pub fn new(c: &SupportCertificate<f64>, distribution: &str) -> Self {
        CertifyRecord {
            distribution: distribution.into(),
            threshold: round_sig(c.threshold),
            certified: c.certified,
            best_bound: round_sig(c.best_bound),
            s_at_best: round_sig(c.s_at_best),
            s_max_probed: round_sig(c.s_max_probed),
            tol: round_sig(c.tol),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &["distribution", "threshold", "certified", "best_bound", "s_at_best", "s_max_probed", "tol"],
            &[vec![
                self.distribution.clone(),
                fmt_num(self.threshold),
                self.certified.to_string(),
                fmt_num(self.best_bound),
                fmt_num(self.s_at_best),
                fmt_num(self.s_max_probed),
                fmt_num(self.tol),
            ]],
        )
    }

    pub fn to_table(&self) -> String {
        table(&[
            ("distribution", self.distribution.clone()),
            ("threshold", fmt_num(self.threshold)),
            ("certified", self.certified.to_string()),
            ("best_bound", fmt_num(self.best_bound)),
            ("s_at_best", fmt_num(self.s_at_best)),
            ("s_max_probed", fmt_num(self.s_max_probed)),
            ("tol", fmt_num(self.tol)),
        ])
    }
}

pub(crate) fn round_violation(v: &mut Violation) {
    v.bound = round_sig(v.bound);
    v.truth = round_sig(v.truth);
    v.deficit = round_sig(v.deficit);
    v.params.values_mut().for_each(|p| *p = round_sig(*p));
}

pub(crate) fn violations_csv(report: &ViolationReport) -> Result<String> {
    let rows: Vec<Vec<String>> = report
        .violations
        .iter()
        .map(|v| {
            let params = v.params.iter().map(|(k, x)| format!("{k}={}", fmt_num(*x))).collect::<Vec<_>>();
            vec![v.method.clone(), params.join(";"), fmt_num(v.bound), fmt_num(v.truth), fmt_num(v.deficit)]
        })
        .collect();
    csv_text(&["method", "params", "bound", "truth", "deficit"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.735758882342885), 0.735758882343);
        assert_eq!(round_sig(-1.23456789012345e-7), -1.23456789012e-7);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(fmt_num(3.16712418331e-5), "3.16712418331e-5");
        assert_eq!(fmt_num(0.2), "0.2");
        assert_eq!(fmt_num(200.0), "200");
    }

    #[test]
    fn sweep_csv_adds_error_column_only_on_failure() {
        let ok = SweepRow {
            axis: "s".into(),
            value: 0.5,
            bound: Some(0.1),
            raw_bound: Some(0.1),
            quad_error: Some(0.0),
            s: Some(0.5),
            k: None,
            error: None,
        };
        let mut rec = SweepRecord { method: "theorem2".into(), distribution: "normal:0,1".into(), rows: vec![ok] };
        assert!(rec.to_csv().unwrap().starts_with("axis,value,bound,raw_bound,quad_error\n"));
        rec.rows.push(SweepRow::failed("s", 2.0, &Error::ParameterDomain("bad, really".into())));
        let text = rec.to_csv().unwrap();
        assert!(text.starts_with("axis,value,bound,raw_bound,quad_error,error\n"), "{text}");
        assert!(text.ends_with("2,,,,\"parameter out of domain: bad, really\"\n"), "{text}");
    }
}
