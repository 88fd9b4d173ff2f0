//! Vector and dense-matrix files.
//!
//! Binary vectors: magic `ADL1VEC1`, `u32` length, 4 reserved bytes, then
//! little-endian `f64` pairs `(re, im)`. Binary matrices: magic
//! `ADL1MAT1`, `u32` rows, `u32` cols, then column-major pairs. Files with
//! a `.csv` extension are text instead: one `re,im` line per vector entry,
//! or one line per matrix row holding interleaved `re,im` values.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CVector, SensingOperator};

pub const VECTOR_MAGIC: &[u8; 8] = b"ADL1VEC1";
pub const MATRIX_MAGIC: &[u8; 8] = b"ADL1MAT1";
const HEADER_LEN: usize = 16;

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn push_pairs(out: &mut Vec<u8>, values: impl Iterator<Item = Complex64>) {
    for v in values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
}

fn parse_pairs(path: &Path, body: &[u8], count: usize) -> Result<Vec<Complex64>> {
    if body.len() != count * 16 {
        return Err(format_err(
            path,
            format!("expected {} payload bytes, found {}", count * 16, body.len()),
        ));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    Ok(body
        .chunks_exact(16)
        .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
        .collect())
}

fn header(path: &Path, bytes: &[u8], magic: &[u8; 8]) -> Result<(u32, u32)> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != magic {
        return Err(format_err(
            path,
            format!("missing {} header", String::from_utf8_lossy(magic)),
        ));
    }
    let u = |r: std::ops::Range<usize>| u32::from_le_bytes(bytes[r].try_into().expect("4 bytes"));
    Ok((u(8..12), u(12..16)))
}

fn finite(path: &Path, v: Vec<Complex64>) -> Result<CVector> {
    CVector::new(v).map_err(|_| format_err(path, "non-finite entry"))
}

fn parse_f64(path: &Path, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| format_err(path, format!("not a number: {s:?}")))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(file))
}

/// Reads a vector; a single-column CSV is taken as real.
pub fn read_vector(path: impl AsRef<Path>) -> Result<CVector> {
    let path = path.as_ref();
    if is_csv(path) {
        let mut out = Vec::new();
        for record in csv_reader(path)?.records() {
            let record = record?;
            match record.len() {
                1 => out.push(Complex64::new(parse_f64(path, &record[0])?, 0.0)),
                2 => out.push(Complex64::new(
                    parse_f64(path, &record[0])?,
                    parse_f64(path, &record[1])?,
                )),
                k => return Err(format_err(path, format!("expected 1 or 2 columns, found {k}"))),
            }
        }
        return finite(path, out);
    }
    let bytes = read_bytes(path)?;
    let (len, _) = header(path, &bytes, VECTOR_MAGIC)?;
    finite(path, parse_pairs(path, &bytes[HEADER_LEN..], len as usize)?)
}

pub fn write_vector(path: impl AsRef<Path>, v: &CVector) -> Result<()> {
    let path = path.as_ref();
    if is_csv(path) {
        let mut text = String::with_capacity(v.len() * 48);
        for z in v.iter() {
            text.push_str(&format!("{:e},{:e}\n", z.re, z.im));
        }
        return write_bytes(path, text.as_bytes());
    }
    let len = u32::try_from(v.len()).map_err(|_| format_err(path, "vector too long"))?;
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * v.len());
    out.extend_from_slice(VECTOR_MAGIC);
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    push_pairs(&mut out, v.iter().copied());
    write_bytes(path, &out)
}

/// Reads a dense matrix as a [`SensingOperator`].
pub fn read_matrix(path: impl AsRef<Path>) -> Result<SensingOperator> {
    let path = path.as_ref();
    let (rows, cols, row_major) = if is_csv(path) {
        let mut entries = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for record in csv_reader(path)?.records() {
            let record = record?;
            if record.len() % 2 != 0 {
                return Err(format_err(path, "rows must hold interleaved re,im pairs"));
            }
            let c = record.len() / 2;
            if *cols.get_or_insert(c) != c {
                return Err(format_err(path, "ragged matrix rows"));
            }
            for j in 0..c {
                entries.push(Complex64::new(
                    parse_f64(path, &record[2 * j])?,
                    parse_f64(path, &record[2 * j + 1])?,
                ));
            }
            rows += 1;
        }
        (rows, cols.unwrap_or(0), entries)
    } else {
        let bytes = read_bytes(path)?;
        let (rows, cols) = header(path, &bytes, MATRIX_MAGIC)?;
        let (rows, cols) = (rows as usize, cols as usize);
        let col_major = parse_pairs(path, &bytes[HEADER_LEN..], rows * cols)?;
        let mut row_major = vec![Complex64::new(0.0, 0.0); rows * cols];
        for j in 0..cols {
            for i in 0..rows {
                row_major[i * cols + j] = col_major[j * rows + i];
            }
        }
        (rows, cols, row_major)
    };
    if rows == 0 || cols == 0 {
        return Err(format_err(path, "empty matrix"));
    }
    if row_major.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(format_err(path, "non-finite entry"));
    }
    SensingOperator::dense(rows, cols, row_major)
}

/// Writes any operator densely (materialising transform operators).
pub fn write_matrix(path: impl AsRef<Path>, op: &SensingOperator) -> Result<()> {
    let path = path.as_ref();
    let (rows, cols) = (op.rows(), op.cols());
    let entries = op.materialize();
    if is_csv(path) {
        let mut text = String::new();
        for i in 0..rows {
            let line: Vec<String> = entries[i * cols..(i + 1) * cols]
                .iter()
                .map(|z| format!("{:e},{:e}", z.re, z.im))
                .collect();
            text.push_str(&line.join(","));
            text.push('\n');
        }
        return write_bytes(path, text.as_bytes());
    }
    let dim = |d: usize| u32::try_from(d).map_err(|_| format_err(path, "matrix too large"));
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * rows * cols);
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&dim(rows)?.to_le_bytes());
    out.extend_from_slice(&dim(cols)?.to_le_bytes());
    push_pairs(
        &mut out,
        (0..cols).flat_map(|j| (0..rows).map(move |i| (i, j))).map(|(i, j)| entries[i * cols + j]),
    );
    write_bytes(path, &out)
}

/// Reads a list of real weights (one per line, or a binary vector whose
/// imaginary parts are ignored).
pub fn read_weights(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    Ok(read_vector(path)?.iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CVector {
        CVector::new(vec![
            Complex64::new(1.5, -0.25),
            Complex64::new(-3.0e-17, 7.0),
            Complex64::new(0.1, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn vector_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["v.bin", "v.csv"] {
            let p = dir.path().join(name);
            write_vector(&p, &sample()).unwrap();
            assert_eq!(read_vector(&p).unwrap(), sample());
        }
        let raw = fs::read(dir.path().join("v.bin")).unwrap();
        assert_eq!(&raw[..8], VECTOR_MAGIC);
        assert_eq!(raw.len(), 16 + 3 * 16);
    }

    #[test]
    fn single_column_csv_is_real() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.csv");
        fs::write(&p, "# weights\n1\n2.5\n").unwrap();
        assert_eq!(read_weights(&p).unwrap(), vec![1.0, 2.5]);
    }

    #[test]
    fn matrix_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let a = SensingOperator::dense_real(2, 3, &[1.0, 2.0, 3.0, -4.0, 5.0, 0.5]).unwrap();
        for name in ["a.bin", "a.csv"] {
            let p = dir.path().join(name);
            write_matrix(&p, &a).unwrap();
            let back = read_matrix(&p).unwrap();
            assert_eq!(back.dense_entries(), a.dense_entries());
        }
    }

    #[test]
    fn errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.bin");
        let err = read_vector(&missing).unwrap_err().to_string();
        assert!(err.contains("nope.bin"));
        let bad = dir.path().join("bad.bin");
        fs::write(&bad, b"garbage").unwrap();
        assert!(matches!(read_vector(&bad), Err(Error::Format { .. })));
        let truncated = dir.path().join("t.bin");
        let mut bytes = VECTOR_MAGIC.to_vec();
        bytes.extend_from_slice(&5u32.to_le_bytes());
        bytes.extend_from_slice(&[0; 4 + 16]);
        fs::write(&truncated, bytes).unwrap();
        assert!(read_vector(&truncated).is_err());
    }
}
