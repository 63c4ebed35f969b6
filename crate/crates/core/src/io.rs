//! On-disk formats: the binary snapshot and CSV conventions.
//!
//! Snapshot layout: a 32-byte header — magic `"NSP2"`, `u32` grid size `N`,
//! `f64` box length `L`, `f64` time, `u32` field count, 4 reserved zero
//! bytes — followed by each field as row-major little-endian `f64`
//! physical-space samples. All writes go through a temp-file-then-rename so
//! partial files never appear under the final name.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::grid::SpectralField;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"NSP2";

/// Atomic write: temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp-write");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Serialises physical-space samples of the given fields.
pub fn write_snapshot(path: &Path, time: f64, fields: &[&SpectralField]) -> Result<()> {
    assert!(!fields.is_empty());
    let grid = fields[0].grid().clone();
    let n = grid.n();
    let mut bytes = Vec::with_capacity(32 + fields.len() * n * n * 8);
    bytes.extend_from_slice(SNAPSHOT_MAGIC);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.extend_from_slice(&grid.length().to_le_bytes());
    bytes.extend_from_slice(&time.to_le_bytes());
    bytes.extend_from_slice(&(fields.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&[0u8; 4]);
    for f in fields {
        let phys = f.to_physical_real();
        for v in phys.iter() {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    atomic_write(path, &bytes)
}

/// A snapshot read back from disk.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub n: usize,
    pub length: f64,
    pub time: f64,
    pub fields: Vec<Array2<f64>>,
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let bytes = fs::read(path)?;
    if bytes.len() < 32 {
        return Err(Error::Snapshot("file shorter than the 32-byte header".into()));
    }
    if &bytes[0..4] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot(format!(
            "bad magic {:?}, expected {:?}",
            &bytes[0..4],
            SNAPSHOT_MAGIC
        )));
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let time = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let count = u32::from_le_bytes(bytes[24..28].try_into().unwrap()) as usize;
    let expected = 32u128 + (count as u128) * (n as u128) * (n as u128) * 8;
    if bytes.len() as u128 != expected {
        return Err(Error::Snapshot(format!(
            "size mismatch: {} bytes, expected {} for {} fields at N = {}",
            bytes.len(),
            expected,
            count,
            n
        )));
    }
    let mut fields = Vec::with_capacity(count);
    let mut off = 32;
    for _ in 0..count {
        let mut arr = Array2::zeros((n, n));
        for v in arr.iter_mut() {
            *v = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
            off += 8;
        }
        fields.push(arr);
    }
    Ok(Snapshot { n, length, time, fields })
}

/// CSV accumulator; every file carries a `# format=1` comment line and a
/// header row.
#[derive(Debug, Clone)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut buf = String::from("# format=1\n");
        buf.push_str(header);
        buf.push('\n');
        Self { buf }
    }

    pub fn push_row(&mut self, row: &str) {
        self.buf.push_str(row);
        self.buf.push('\n');
    }

    pub fn push_comment(&mut self, comment: &str) {
        self.buf.push_str("# ");
        self.buf.push_str(comment);
        self.buf.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.buf
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.buf.as_bytes())
    }
}

/// Parses a two-column `(t, value)` CSV, skipping `#` comments and a header
/// row when present.
pub fn read_series_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',');
        let (a, b) = (cols.next(), cols.next());
        match (a.and_then(|v| v.trim().parse::<f64>().ok()), b.and_then(|v| v.trim().parse::<f64>().ok())) {
            (Some(t), Some(v)) => out.push((t, v)),
            _ if lineno == 0 || (lineno == 1 && out.is_empty()) => continue, // header row
            _ => {
                return Err(Error::Config(format!(
                    "bad series row {} in {}: '{line}'",
                    lineno + 1,
                    path.display()
                )))
            }
        }
    }
    Ok(out)
}
