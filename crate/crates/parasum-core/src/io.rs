//! Matrix file formats.
//!
//! JSON: `{"rows": m, "cols": n, "data": [[re, im], ...]}` in row-major
//! order. CSV: one row per line, entries written as `a+bi`. Both round-trip
//! every value representable in an f64 exactly (the shortest-representation
//! float formatting used by both serde_json and `Display` is lossless).

use crate::matrix::ComplexMatrix;
use crate::{Complex64, Error};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data: self.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        if raw.rows == 0 || raw.cols == 0 {
            return Err(D::Error::custom("matrix dimensions must be positive"));
        }
        if raw.rows * raw.cols != raw.data.len() {
            return Err(D::Error::custom(format!(
                "expected {} entries, got {}",
                raw.rows * raw.cols,
                raw.data.len()
            )));
        }
        let data: Vec<Complex64> = raw
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(D::Error::custom("matrix entries must be finite"));
        }
        Ok(ComplexMatrix::from_vec(raw.rows, raw.cols, data))
    }
}

pub fn to_json_string(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn from_json_str(s: &str) -> Result<ComplexMatrix, Error> {
    Ok(serde_json::from_str(s)?)
}

/// `a+bi` with both parts always present; `Display` for f64 is shortest
/// round-trip, so parsing recovers the exact bits.
pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

/// Accepts `a+bi`, `a-bi`, bare reals `a`, bare imaginaries `bi`, and the
/// shorthands `i` / `-i`.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let bad = |s: &str| Error::Parse(format!("invalid complex literal {s:?}"));
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Find the split between real and imaginary parts: the last +/-
        // that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let re: f64 = re_str.trim().parse().map_err(|_| bad(t))?;
        let im_str = im_str.trim();
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im_str.parse().map_err(|_| bad(t))?,
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = t.parse().map_err(|_| bad(t))?;
        Ok(Complex64::new(re, 0.0))
    }
}

pub fn to_csv_string(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn from_csv_str(s: &str) -> Result<ComplexMatrix, Error> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for line in s.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<Complex64>, Error> = line.split(',').map(parse_complex).collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged rows in csv matrix".into()));
    }
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    let m = ComplexMatrix::from_vec(data.len() / cols, cols, data);
    if !m.is_finite() {
        return Err(Error::Parse("matrix entries must be finite".into()));
    }
    Ok(m)
}

/// Load a matrix file, dispatching on the `.csv` extension (anything else
/// is treated as JSON).
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        from_csv_str(&text)
    } else {
        from_json_str(&text)
    }
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<(), Error> {
    let text = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        to_csv_string(m)
    } else {
        to_json_string(m)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_round_trip_simple() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.5, -2.25), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(3.0, 0.0), Complex64::new(-0.1, 0.7)],
        ]);
        let s = to_json_string(&m);
        let back = from_json_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_bad_entry_count() {
        let s = r#"{"rows":2,"cols":2,"data":[[1,0],[2,0],[3,0]]}"#;
        assert!(from_json_str(s).is_err());
    }

    #[test]
    fn json_rejects_nonfinite() {
        let s = r#"{"rows":1,"cols":1,"data":[[1e400,0]]}"#;
        assert!(from_json_str(s).is_err());
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("3+2i").unwrap(), Complex64::new(3.0, 2.0));
        assert_eq!(parse_complex("3-2i").unwrap(), Complex64::new(3.0, -2.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            parse_complex("-1.5e-3+0.25i").unwrap(),
            Complex64::new(-1.5e-3, 0.25)
        );
        assert_eq!(
            parse_complex("1e-3-2.5e2i").unwrap(),
            Complex64::new(1e-3, -250.0)
        );
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("1++2i").is_err());
    }

    proptest! {
        #[test]
        fn complex_literal_round_trips_exactly(re in proptest::num::f64::NORMAL | proptest::num::f64::ZERO,
                                               im in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(z.re.to_bits(), back.re.to_bits());
            prop_assert_eq!(z.im.to_bits(), back.im.to_bits());
        }

        #[test]
        fn csv_and_json_round_trip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut rng = crate::gen::trial_rng(seed, 0);
            let m = crate::gen::matrix_gaussian(&mut rng, rows, cols);
            let csv_back = from_csv_str(&to_csv_string(&m)).unwrap();
            prop_assert_eq!(&m, &csv_back);
            let json_back = from_json_str(&to_json_string(&m)).unwrap();
            prop_assert_eq!(&m, &json_back);
        }
    }
}
