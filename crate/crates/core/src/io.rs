//! Dataset ingestion (CSV and JSON) and the machine-readable report.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::maximize::FitMethod;
use crate::solution_set::BoundednessVerdict;
use crate::tol::IntervalSystem;

/// Serde helper writing non-finite floats as the strings `"inf"`, `"-inf"`
/// and `"nan"`; finite values stay JSON numbers.
pub mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("invalid float {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

impl DataFormat {
    /// Guesses from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => DataFormat::Json,
            _ => DataFormat::Csv,
        }
    }
}

pub fn read_dataset(path: &Path) -> Result<IntervalSystem> {
    let reader = BufReader::new(File::open(path)?);
    match DataFormat::from_path(path) {
        DataFormat::Csv => read_csv(reader),
        DataFormat::Json => read_json(reader),
    }
}

fn expected_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=n)
        .flat_map(|j| [format!("a{j}_lo"), format!("a{j}_hi")])
        .collect();
    h.push("b_lo".into());
    h.push("b_hi".into());
    h
}

/// Reads `a1_lo,a1_hi,...,an_lo,an_hi,b_lo,b_hi` records, one per
/// measurement.
pub fn read_csv<R: Read>(reader: R) -> Result<IntervalSystem> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Error::parse(Some(1), e.to_string()))?
        .clone();
    if header.len() < 4 || header.len() % 2 != 0 {
        return Err(Error::parse(
            Some(1),
            format!("expected an even number (>= 4) of columns, found {}", header.len()),
        ));
    }
    let n = header.len() / 2 - 1;
    for (found, want) in header.iter().zip(expected_header(n)) {
        if !found.eq_ignore_ascii_case(&want) {
            return Err(Error::parse(Some(1), format!("column {found:?}, expected {want:?}")));
        }
    }

    let mut a_rows = Vec::new();
    let mut b = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize);
        let vals = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("not a number: {f:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut row = Vec::with_capacity(n);
        for pair in vals.chunks(2) {
            row.push(Interval::new(pair[0], pair[1]).map_err(|e| Error::parse(line, e.to_string()))?);
        }
        b.push(row.pop().expect("header guarantees a right-hand column"));
        a_rows.push(row);
    }
    if a_rows.is_empty() {
        return Err(Error::parse(None, "dataset has no measurements"));
    }
    IntervalSystem::new(IntervalMatrix::from_rows(a_rows)?, IntervalVector::new(b))
}

#[derive(Serialize, Deserialize)]
struct JsonDataset {
    #[serde(rename = "A")]
    a: Vec<Vec<Interval>>,
    b: Vec<Interval>,
}

/// Reads `{"A": [[[lo, hi], ...], ...], "b": [[lo, hi], ...]}`.
pub fn read_json<R: Read>(reader: R) -> Result<IntervalSystem> {
    let ds: JsonDataset = serde_json::from_reader(reader).map_err(|e| {
        let line = (e.line() > 0).then_some(e.line());
        Error::parse(line, e.to_string())
    })?;
    if ds.a.is_empty() {
        return Err(Error::parse(None, "dataset has no measurements"));
    }
    IntervalSystem::new(IntervalMatrix::from_rows(ds.a)?, IntervalVector::new(ds.b))
}

pub fn write_csv<W: Write>(sys: &IntervalSystem, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(expected_header(sys.n())).map_err(csv_err)?;
    for (i, bi) in sys.rhs().iter().enumerate() {
        let rec: Vec<String> = sys
            .matrix()
            .row(i)
            .iter()
            .chain(std::iter::once(bi))
            .flat_map(|v| [v.lo().to_string(), v.hi().to_string()])
            .collect();
        w.write_record(rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(sys: &IntervalSystem, writer: W) -> Result<()> {
    let a = sys.matrix();
    let ds = JsonDataset {
        a: (0..a.rows()).map(|i| a.row(i).to_vec()).collect(),
        b: sys.rhs().to_vec(),
    };
    serde_json::to_writer(writer, &ds)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::parse(None, format!("{other:?}")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullReport {
    #[serde(rename = "box")]
    pub bounds: IntervalVector,
    pub rad_inf_norm: f64,
    pub rad_2_norm: f64,
}

/// Wall-clock time of each stage, seconds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub fit: f64,
    pub conditioning: f64,
    pub hull: Option<f64>,
    pub total: f64,
}

/// Knobs a report was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub exact_threshold: usize,
    pub anneal_restarts: usize,
    pub anneal_steps: usize,
    pub tol_max_iters: usize,
    pub start: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub m: usize,
    pub n: usize,
    pub max_tol: f64,
    pub x_hat: Vec<f64>,
    pub converged: bool,
    pub method: FitMethod,
    pub iterations: usize,
    pub non_unique: bool,
    pub boundedness: BoundednessVerdict,
    #[serde(with = "float")]
    pub min_cond: f64,
    pub cond_seed: u64,
    pub b_hat_norm: f64,
    #[serde(with = "float")]
    pub ive: f64,
    #[serde(with = "float")]
    pub rve: f64,
    pub sqrt_factor_dim: usize,
    pub unstable: bool,
    pub degenerate_x_hat: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub settings: RunSettings,
    pub timing: Timing,
}

impl ReportFile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Flat one-record CSV of the scalar fields.
    pub fn to_csv(&self) -> Result<String> {
        let fmt = |v: f64| {
            if v.is_finite() {
                v.to_string()
            } else if v > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            }
        };
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        let mut header = vec![
            "m", "n", "max_tol", "x_hat", "converged", "bounded", "min_cond", "cond_seed",
            "b_hat_norm", "ive", "rve", "sqrt_factor_dim", "unstable",
        ];
        let mut rec = vec![
            self.m.to_string(),
            self.n.to_string(),
            self.max_tol.to_string(),
            join(&self.x_hat),
            self.converged.to_string(),
            self.boundedness.is_bounded().to_string(),
            fmt(self.min_cond),
            self.cond_seed.to_string(),
            self.b_hat_norm.to_string(),
            fmt(self.ive),
            fmt(self.rve),
            self.sqrt_factor_dim.to_string(),
            self.unstable.to_string(),
        ];
        if let Some(h) = &self.hull {
            header.extend(["hull_lo", "hull_hi", "rad_inf_norm", "rad_2_norm"]);
            let lo: Vec<f64> = h.bounds.iter().map(Interval::lo).collect();
            let hi: Vec<f64> = h.bounds.iter().map(Interval::hi).collect();
            rec.extend([join(&lo), join(&hi), h.rad_inf_norm.to_string(), h.rad_2_norm.to_string()]);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(csv_err)?;
        w.write_record(&rec).map_err(csv_err)?;
        let bytes = w.into_inner().map_err(|e| Error::parse(None, e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
