//! Table rendering for distributions: CSV laid out like the published
//! stopping-time table, and JSON carrying exact `num/den` strings.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::analysis::{moments, MomentsReport};
use crate::bandbump::{JointDistribution, Outcome};
use crate::error::{Error, Result};
use crate::exactnum::{ratio_string, to_decimal};
use crate::Rational;

pub const HEADER: [&str; 6] = [
    "n",
    "P[N=n, band]",
    "P[N=n, bump]",
    "P[N=n]",
    "P[N=n | band]",
    "P[N=n | bump]",
];

/// Plain grid of string cells with a header row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl CsvTable {
    /// Comma separated, LF terminated, quoting only where needed.
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .flexible(true)
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for record in &self.records {
            writer.write_record(record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let records = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(CsvTable { header, records })
    }
}

/// One distribution row with its derived columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub band: Rational,
    pub bump: Rational,
    pub total: Rational,
    /// `P[N = n | outcome]`; `None` when the outcome has probability zero.
    pub given_band: Option<Rational>,
    pub given_bump: Option<Rational>,
}

/// A distribution together with everything the table prints.
#[derive(Debug, Clone)]
pub struct DistTable {
    pub dist: JointDistribution,
    pub rows: Vec<TableRow>,
    pub moments: MomentsReport,
    pub digits: usize,
}

impl DistTable {
    pub fn new(dist: JointDistribution, digits: usize) -> Result<Self> {
        if digits == 0 {
            return Err(Error::param("at least one significant digit is required"));
        }
        let moments = moments(&dist, digits)?;
        let conditional = |p: &Rational, outcome: Outcome| {
            let marginal = moments.marginal(outcome);
            (!marginal.is_zero()).then(|| p / marginal)
        };
        let rows = dist
            .rows()
            .iter()
            .map(|r| TableRow {
                n: r.n,
                band: r.band.clone(),
                bump: r.bump.clone(),
                total: r.total(),
                given_band: conditional(&r.band, Outcome::Band),
                given_bump: conditional(&r.bump, Outcome::Bump),
            })
            .collect();
        Ok(DistTable { dist, rows, moments, digits })
    }

    fn cell(&self, x: &Rational) -> String {
        if x.is_zero() {
            String::new()
        } else {
            to_decimal(x, self.digits)
        }
    }

    fn opt_cell(&self, x: &Option<Rational>) -> String {
        x.as_ref().map(|x| self.cell(x)).unwrap_or_default()
    }

    pub fn to_csv_table(&self) -> CsvTable {
        let mut records: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    self.cell(&r.band),
                    self.cell(&r.bump),
                    self.cell(&r.total),
                    self.opt_cell(&r.given_band),
                    self.opt_cell(&r.given_bump),
                ]
            })
            .collect();
        let m = &self.moments;
        let cond_mean = |o: Outcome| m.conditional(o).map(|c| to_decimal(&c.mean, self.digits)).unwrap_or_default();
        let cond_sd = |o: Outcome| m.conditional(o).map(|c| c.sd.clone()).unwrap_or_default();
        records.push(vec![
            "Outcome probabilities".into(),
            self.cell(&m.p_band),
            self.cell(&m.p_bump),
            String::new(),
            String::new(),
            String::new(),
        ]);
        records.push(vec![
            "Mean duration".into(),
            String::new(),
            String::new(),
            to_decimal(&m.overall.mean, self.digits),
            cond_mean(Outcome::Band),
            cond_mean(Outcome::Bump),
        ]);
        records.push(vec![
            "Standard deviation".into(),
            String::new(),
            String::new(),
            m.overall.sd.clone(),
            cond_sd(Outcome::Band),
            cond_sd(Outcome::Bump),
        ]);
        CsvTable { header: HEADER.iter().map(|h| h.to_string()).collect(), records }
    }

    pub fn to_csv(&self) -> String {
        self.to_csv_table().to_csv_string()
    }

    fn num(&self, x: &Rational) -> Value {
        json!({ "exact": ratio_string(x), "decimal": to_decimal(x, self.digits) })
    }

    fn opt_num(&self, x: &Option<Rational>) -> Value {
        x.as_ref().map(|x| self.num(x)).unwrap_or(Value::Null)
    }

    pub fn to_json(&self) -> Value {
        let p = self.dist.params();
        let m = &self.moments;
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "band": self.num(&r.band),
                    "bump": self.num(&r.bump),
                    "total": self.num(&r.total),
                    "given_band": self.opt_num(&r.given_band),
                    "given_bump": self.opt_num(&r.given_bump),
                })
            })
            .collect();
        let conditional = |o: Outcome| match m.conditional(o) {
            Some(c) => json!({ "mean": self.num(&c.mean), "variance": self.num(&c.variance), "sd": c.sd }),
            None => Value::Null,
        };
        json!({
            "params": { "m": p.m(), "s": p.s(), "l": p.l(), "u": p.u(), "t": p.t(), "n_max": p.n_max() },
            "digits": self.digits,
            "rows": rows,
            "footer": {
                "p_band": self.num(&m.p_band),
                "p_bump": self.num(&m.p_bump),
                "overall": { "mean": self.num(&m.overall.mean), "variance": self.num(&m.overall.variance), "sd": m.overall.sd },
                "band": conditional(Outcome::Band),
                "bump": conditional(Outcome::Bump),
            }
        })
    }
}
