//! Result rows and their CSV / markdown rendering.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EstimatorReport};

/// Significant digits in the default rendering, e.g. `6.84165E-01`.
pub const SHORT_DIGITS: usize = 6;
/// Significant digits that round-trip every `f64`.
pub const FULL_DIGITS: usize = 17;

/// Scientific notation with a signed two-digit exponent: `6.84165E-01`.
pub fn format_sci(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let raw = format!("{:.*e}", digits.max(1) - 1, x);
    let (mantissa, exp) = raw.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateCell {
    pub estimator: Estimator,
    pub mean: f64,
    pub std_error: f64,
    pub cv: f64,
    pub rms_re: f64,
    pub parameter: Option<f64>,
}

impl From<&EstimatorReport> for EstimateCell {
    fn from(r: &EstimatorReport) -> Self {
        Self {
            estimator: r.estimator,
            mean: r.mean,
            std_error: r.std_error,
            cv: r.cv,
            rms_re: r.rms_re,
            parameter: r.parameter,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub label: String,
    pub s: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// One cell per table estimator, in table order; `None` when not run.
    pub estimates: Vec<Option<EstimateCell>>,
    /// Only filled when timings were requested, so default output stays
    /// byte-identical between runs.
    pub wall_seconds: Option<f64>,
}

impl ResultRow {
    pub fn estimate(&self, est: Estimator) -> Option<&EstimateCell> {
        self.estimates.iter().flatten().find(|c| c.estimator == est)
    }
}

const ESTIMATE_FIELDS: [&str; 5] = ["mean", "se", "cv", "rms_re", "param"];

/// A rectangular table: one row per (setting, threshold), one column group
/// per estimator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub estimators: Vec<Estimator>,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn new(estimators: Vec<Estimator>) -> Self {
        Self { estimators, rows: Vec::new() }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["label", "s", "lower", "upper"].iter().map(|s| s.to_string()).collect();
        for e in &self.estimators {
            h.extend(ESTIMATE_FIELDS.iter().map(|f| format!("{}_{f}", e.name())));
        }
        h.push("wall_seconds".into());
        h
    }

    fn record(&self, row: &ResultRow, digits: usize) -> Vec<String> {
        let num = |x: f64| format_sci(x, digits);
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        let mut out = vec![row.label.clone(), num(row.s), opt(row.lower), opt(row.upper)];
        for e in &self.estimators {
            match row.estimates.iter().flatten().find(|c| c.estimator == *e) {
                Some(c) => {
                    out.extend([num(c.mean), num(c.std_error), num(c.cv), num(c.rms_re), opt(c.parameter)]);
                }
                None => out.extend(std::iter::repeat_n(String::new(), ESTIMATE_FIELDS.len())),
            }
        }
        out.push(row.wall_seconds.map(|t| format!("{t:.3}")).unwrap_or_default());
        out
    }

    pub fn write_csv<W: Write>(&self, w: W, digits: usize) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(self.header()).map_err(io_err)?;
        for row in &self.rows {
            wr.write_record(self.record(row, digits)).map_err(io_err)?;
        }
        wr.flush().map_err(|e| Error::Config(format!("write failed: {e}")))
    }

    pub fn to_csv_string(&self, digits: usize) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, digits).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_markdown(&self, digits: usize) -> String {
        let header = self.header();
        let mut out = format!("| {} |\n", header.join(" | "));
        out += &format!("|{}\n", "---|".repeat(header.len()));
        for row in &self.rows {
            out += &format!("| {} |\n", self.record(row, digits).join(" | "));
        }
        out
    }

    /// Reads a table written by [`ResultTable::write_csv`].
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header: Vec<String> = rd.headers().map_err(io_err)?.iter().map(String::from).collect();
        let groups = header.len().checked_sub(5).filter(|g| g % ESTIMATE_FIELDS.len() == 0);
        let groups = groups.ok_or_else(|| Error::Config("unexpected CSV header".into()))? / ESTIMATE_FIELDS.len();
        let estimators = (0..groups)
            .map(|g| {
                let col = &header[4 + g * ESTIMATE_FIELDS.len()];
                col.trim_end_matches("_mean").parse::<Estimator>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = Self::new(estimators.clone());
        for rec in rd.records() {
            let rec = rec.map_err(io_err)?;
            let f = |i: usize| -> Result<Option<f64>> {
                let v = rec.get(i).unwrap_or("");
                if v.is_empty() {
                    return Ok(None);
                }
                v.parse()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("bad number `{v}` in column {}", header[i])))
            };
            let req = |i: usize| f(i)?.ok_or_else(|| Error::Config(format!("missing {}", header[i])));
            let mut estimates = Vec::new();
            for (g, &e) in estimators.iter().enumerate() {
                let base = 4 + g * ESTIMATE_FIELDS.len();
                estimates.push(match f(base)? {
                    None => None,
                    Some(mean) => Some(EstimateCell {
                        estimator: e,
                        mean,
                        std_error: req(base + 1)?,
                        cv: req(base + 2)?,
                        rms_re: req(base + 3)?,
                        parameter: f(base + 4)?,
                    }),
                });
            }
            table.rows.push(ResultRow {
                label: rec.get(0).unwrap_or("").to_string(),
                s: req(1)?,
                lower: f(2)?,
                upper: f(3)?,
                estimates,
                wall_seconds: f(header.len() - 1)?,
            });
        }
        Ok(table)
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}
