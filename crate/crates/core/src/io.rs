//! Matrix JSON files: `{"n": rows, "m": cols, "entries": [[w,x,y,z], ...]}`
//! with entries in row-major order.

use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::qlinalg::QMatrix;
use crate::quat::Quaternion;
use crate::{Error, Result};

#[derive(Serialize)]
struct MatrixRef<'a> {
    n: usize,
    m: usize,
    entries: &'a [Quaternion],
}

#[derive(Deserialize)]
struct MatrixFile {
    n: usize,
    m: usize,
    entries: Vec<Value>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRef {
            n: self.rows(),
            m: self.cols(),
            entries: self.data(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixFile::deserialize(d)?;
        from_file(raw).map_err(D::Error::custom)
    }
}

fn parse_entry(index: usize, v: &Value) -> Result<Quaternion> {
    let parse_err = |message: String| Error::Parse { index, message };
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(format!("expected [w,x,y,z], got {v}")))?;
    if arr.len() != 4 {
        return Err(parse_err(format!(
            "expected 4 components, got {}",
            arr.len()
        )));
    }
    let mut c = [0.0; 4];
    for (k, x) in arr.iter().enumerate() {
        let f = x
            .as_f64()
            .ok_or_else(|| parse_err(format!("component {k} is not a number: {x}")))?;
        if !f.is_finite() {
            return Err(parse_err(format!("component {k} is not finite")));
        }
        c[k] = f;
    }
    Ok(Quaternion::from(c))
}

fn from_file(raw: MatrixFile) -> Result<QMatrix> {
    let want = raw
        .n
        .checked_mul(raw.m)
        .ok_or_else(|| Error::Malformed("dimensions overflow".into()))?;
    if raw.entries.len() != want {
        return Err(Error::Malformed(format!(
            "{}x{} matrix needs {want} entries, got {}",
            raw.n,
            raw.m,
            raw.entries.len()
        )));
    }
    let data = raw
        .entries
        .iter()
        .enumerate()
        .map(|(i, v)| parse_entry(i, v))
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_row_major(raw.n, raw.m, data)
}

pub fn matrix_to_json(a: &QMatrix) -> String {
    serde_json::to_string(a).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<QMatrix> {
    let raw: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    from_file(raw)
}

pub fn read_matrix(path: &Path) -> Result<QMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    matrix_from_json(&text)
}

pub fn write_matrix(path: &Path, a: &QMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(a) + "\n")
        .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}
