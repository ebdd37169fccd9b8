//! Time-series rows and their CSV form.
//!
//! Every value is written in scientific notation with 17 significant
//! digits, which round-trips `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor3::Vector3;

pub const CSV_HEADER: &str = "t,T11,T22,T33,T12,T13,T23,T,q1,q2,q3,nu,Pr,anisotropy";
const COLUMNS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub t: f64,
    /// `(T11, T22, T33)`.
    pub theta_diag: Vector3,
    /// `(T12, T13, T23)`.
    pub theta_offdiag: Vector3,
    pub temperature: f64,
    pub q: Vector3,
    pub nu: f64,
    pub pr: f64,
    pub anisotropy: f64,
}

impl RunRecord {
    fn values(&self) -> [f64; COLUMNS] {
        let d = self.theta_diag;
        let o = self.theta_offdiag;
        [
            self.t,
            d.x,
            d.y,
            d.z,
            o.x,
            o.y,
            o.z,
            self.temperature,
            self.q.x,
            self.q.y,
            self.q.z,
            self.nu,
            self.pr,
            self.anisotropy,
        ]
    }

    fn from_values(v: [f64; COLUMNS]) -> Self {
        Self {
            t: v[0],
            theta_diag: Vector3::new(v[1], v[2], v[3]),
            theta_offdiag: Vector3::new(v[4], v[5], v[6]),
            temperature: v[7],
            q: Vector3::new(v[8], v[9], v[10]),
            nu: v[11],
            pr: v[12],
            anisotropy: v[13],
        }
    }
}

pub fn to_csv_string(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(CSV_HEADER.len() + 1 + records.len() * COLUMNS * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        for (i, v) in r.values().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if records.is_empty() {
        return Err(Error::InvalidConfig(
            "refusing to write an empty series".into(),
        ));
    }
    fs::write(path, to_csv_string(records)).map_err(|e| Error::io(path, e))
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<RunRecord>> {
    let bad = |line: usize, message: String| Error::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        Some((_, h)) => return Err(bad(1, format!("unexpected header `{h}`"))),
        None => return Err(bad(1, "empty file".into())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut values = [0.0; COLUMNS];
        let mut count = 0;
        for field in line.split(',') {
            if count == COLUMNS {
                return Err(bad(idx + 1, format!("more than {COLUMNS} fields")));
            }
            values[count] = field
                .trim()
                .parse()
                .map_err(|e| bad(idx + 1, format!("field {}: {e}", count + 1)))?;
            count += 1;
        }
        if count != COLUMNS {
            return Err(bad(
                idx + 1,
                format!("expected {COLUMNS} fields, got {count}"),
            ));
        }
        records.push(RunRecord::from_values(values));
    }
    if records.is_empty() {
        return Err(bad(2, "no data rows".into()));
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(vals: [f64; COLUMNS]) -> RunRecord {
        RunRecord::from_values(vals)
    }

    #[test]
    fn header_and_format() {
        let s = to_csv_string(&[record([1.0; COLUMNS])]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.0000000000000000e0,"));
        assert_eq!(row.split(',').count(), COLUMNS);
    }

    #[test]
    fn malformed_input() {
        let p = Path::new("x.csv");
        assert!(parse_csv("", p).is_err());
        assert!(parse_csv("a,b\n1,2\n", p).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n"), p).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n"), p).is_err());
        let err =
            parse_csv(&format!("{CSV_HEADER}\n{}\n", ["x"; COLUMNS].join(",")), p).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    proptest! {
        #[test]
        fn csv_round_trip(vals in proptest::array::uniform14(any::<f64>().prop_filter("finite", |v| v.is_finite()))) {
            let recs = vec![record(vals), record(vals.map(|v| -v / 3.0))];
            let back = parse_csv(&to_csv_string(&recs), Path::new("mem")).unwrap();
            prop_assert_eq!(back.len(), 2);
            for (a, b) in recs.iter().zip(&back) {
                for (x, y) in a.values().iter().zip(b.values()) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }
}
