//! JSON file formats for tests and channels. Complex entries are always
//! `[re, im]` pairs and matrices are arrays of rows.
//!
//! ```json
//! { "dim_x": 1, "dim_y": 1, "dim_z": 1,
//!   "rho": [[[1.0, 0.0]]],
//!   "measurements": { "done": [[[1.0, 0.0]]] } }
//! ```

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::{validate, ChoiOperator};
use crate::error::{Error, Result};
use crate::interactive::{validate_im, InteractiveMeasurement};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Tolerance applied when validating loaded files.
pub const LOAD_TOL: f64 = 1e-6;

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFile {
    pub dim_x: usize,
    pub dim_y: usize,
    pub dim_z: usize,
    /// State on `X ⊗ Z`.
    pub rho: MatrixRows,
    /// Measurement operators on `Y ⊗ Z`.
    pub measurements: BTreeMap<String, MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    /// Choi operator on `out ⊗ in`.
    pub matrix: MatrixRows,
}

pub fn matrix_to_rows<T: Real>(m: &ComplexMatrix<T>) -> MatrixRows {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
        .collect()
}

pub fn matrix_from_rows<T: Real>(rows: &MatrixRows) -> Result<ComplexMatrix<T>> {
    let cols = rows.first().map_or(0, Vec::len);
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} entries, expected {cols}",
            row.len()
        )));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex::new(T::lit(re), T::lit(im)))
        .collect();
    ComplexMatrix::new(rows.len(), cols, data)
}

fn parse<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    // serde_json's messages carry the line and column
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn render<S: Serialize>(value: &S) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

impl TestFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        render(self)
    }

    pub fn from_measurement<T: Real>(im: &InteractiveMeasurement<T>) -> Self {
        Self {
            dim_x: im.dim_x(),
            dim_y: im.dim_y(),
            dim_z: im.dim_z(),
            rho: matrix_to_rows(im.rho()),
            measurements: im
                .outcomes()
                .iter()
                .map(|(k, p)| (k.clone(), matrix_to_rows(p)))
                .collect(),
        }
    }

    /// Shape checks only.
    pub fn to_measurement<T: Real>(&self) -> Result<InteractiveMeasurement<T>> {
        let outcomes = self
            .measurements
            .iter()
            .map(|(k, rows)| Ok((k.clone(), matrix_from_rows(rows)?)))
            .collect::<Result<_>>()?;
        InteractiveMeasurement::new(
            self.dim_x,
            self.dim_y,
            self.dim_z,
            matrix_from_rows(&self.rho)?,
            outcomes,
        )
    }
}

impl ChannelFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn to_json(&self) -> String {
        render(self)
    }

    pub fn from_choi<T: Real>(j: &ChoiOperator<T>) -> Self {
        Self {
            dim_in: j.dim_in(),
            dim_out: j.dim_out(),
            matrix: matrix_to_rows(j.matrix()),
        }
    }

    /// Shape checks only.
    pub fn to_choi<T: Real>(&self) -> Result<ChoiOperator<T>> {
        ChoiOperator::new(self.dim_in, self.dim_out, matrix_from_rows(&self.matrix)?)
    }
}

/// Parses and validates a test file at [`LOAD_TOL`].
pub fn load_measurement<T: Real>(text: &str) -> Result<InteractiveMeasurement<T>> {
    let im = TestFile::parse(text)?.to_measurement::<T>()?;
    let v = validate_im(&im, T::lit(LOAD_TOL));
    if !v.valid {
        return Err(Error::InvalidMeasurement(format!(
            "trace residual {:e}, state psd residual {:e}, measurement psd residual {:e}, completeness residual {:e}",
            v.trace_residual.as_f64(),
            v.state_psd_residual.as_f64(),
            v.measurement_psd_residual.as_f64(),
            v.completeness_residual.as_f64()
        )));
    }
    Ok(im)
}

/// Parses a channel file and checks it is CP and TP at [`LOAD_TOL`].
pub fn load_channel<T: Real>(text: &str) -> Result<ChoiOperator<T>> {
    let j = ChannelFile::parse(text)?.to_choi::<T>()?;
    let v = validate(&j, T::lit(LOAD_TOL));
    if !v.is_channel() {
        return Err(Error::InvalidChannel {
            cp_residual: v.cp_residual.as_f64(),
            tp_residual: v.tp_residual.as_f64(),
        });
    }
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{build_hedging_test, hedging_strategy};

    #[test]
    fn test_file_round_trip_is_bitwise() {
        let im = build_hedging_test();
        let text = TestFile::from_measurement(&im).to_json();
        let back = load_measurement::<f64>(&text).unwrap();
        assert_eq!(back, im);
    }

    #[test]
    fn channel_round_trip() {
        let j = hedging_strategy();
        let back = load_channel::<f64>(&ChannelFile::from_choi(&j).to_json()).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = TestFile::parse("{\n  \"dim_x\": 1,\n  \"dim_y\": oops\n}").unwrap_err();
        let Error::Parse(msg) = err else { panic!("{err:?}") };
        assert!(msg.contains("line 3"), "{msg}");
        assert!(matches!(
            TestFile::parse(r#"{"dim_x":1,"dim_y":1,"dim_z":1,"rho":[],"measurements":{},"extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn invalid_contents_are_rejected() {
        let mut f = TestFile::from_measurement(&build_hedging_test());
        f.rho[0][0][0] = 0.9;
        assert!(matches!(
            load_measurement::<f64>(&f.to_json()),
            Err(Error::InvalidMeasurement(_))
        ));

        let mut f = TestFile::from_measurement(&build_hedging_test());
        f.rho[1].pop();
        assert!(matches!(
            load_measurement::<f64>(&f.to_json()),
            Err(Error::DimensionMismatch(_))
        ));

        let mut c = ChannelFile::from_choi(&hedging_strategy());
        c.matrix[0][0][0] = 2.0;
        assert!(matches!(
            load_channel::<f64>(&c.to_json()),
            Err(Error::InvalidChannel { .. })
        ));
    }
}
