//! Dataset files: text (one decimal or hex float per line) or raw
//! little-endian `f64` behind the `RSUMF64\0` magic.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::hexfloat::{parse_float, shortest};
use super::HarnessError;

pub const RAW_MAGIC: &[u8; 8] = b"RSUMF64\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Text,
    Raw,
}

impl DatasetFormat {
    /// `.f64` files are raw, everything else is text.
    pub fn for_path(path: &Path) -> DatasetFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("f64") => DatasetFormat::Raw,
            _ => DatasetFormat::Text,
        }
    }
}

impl std::str::FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(DatasetFormat::Text),
            "raw" => Ok(DatasetFormat::Raw),
            other => Err(format!("unknown dataset format `{other}`")),
        }
    }
}

/// Read a dataset, detecting raw files by their magic header.
pub fn read_dataset(path: &Path) -> Result<Vec<f64>, HarnessError> {
    let bytes = fs::read(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.starts_with(RAW_MAGIC) {
        decode_raw(&bytes[RAW_MAGIC.len()..]).ok_or_else(|| HarnessError::TruncatedRaw {
            path: path.display().to_string(),
        })
    } else {
        let text = String::from_utf8(bytes).map_err(|_| HarnessError::Parse {
            path: path.display().to_string(),
            line: 0,
            text: "not UTF-8 and no raw header".to_string(),
        })?;
        parse_text(&text).map_err(|(line, text)| HarnessError::Parse {
            path: path.display().to_string(),
            line,
            text,
        })
    }
}

/// Parse text lines. Blank lines and `#` comments are skipped.
/// On failure returns the 1-based line number and its content.
pub fn parse_text(text: &str) -> Result<Vec<f64>, (usize, String)> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        values.push(parse_float(t).ok_or_else(|| (i + 1, t.to_string()))?);
    }
    Ok(values)
}

fn decode_raw(body: &[u8]) -> Option<Vec<f64>> {
    if !body.len().is_multiple_of(8) {
        return None;
    }
    Some(
        body.chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect(),
    )
}

pub fn encode_raw(values: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 8 * values.len());
    out.extend_from_slice(RAW_MAGIC);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_text(values: &[f64]) -> String {
    let mut out = String::with_capacity(24 * values.len());
    for &v in values {
        out.push_str(&shortest(v));
        out.push('\n');
    }
    out
}

pub fn write_dataset(
    path: &Path,
    values: &[f64],
    format: DatasetFormat,
) -> Result<(), HarnessError> {
    let bytes = match format {
        DatasetFormat::Raw => encode_raw(values),
        DatasetFormat::Text => encode_text(values).into_bytes(),
    };
    let io_err = |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(&bytes).map_err(io_err)
}
