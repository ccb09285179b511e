//! Trajectory trace files.
//!
//! Two interchangeable on-disk formats, auto-detected on read:
//!
//! * Binary (little-endian): magic `HITR`, u16 version = 1, u8 dtype
//!   (0 = f32, 1 = f64), u8 reserved = 0, u32 T, u32 D, then T·D values
//!   row-major in descending-t order. Timesteps are implicit as T, T-1, ..., 1,
//!   so the header is 16 bytes and the payload T·D·width bytes. Writes always
//!   use f64; both dtypes are accepted on read.
//! * CSV with header `t,f0,f1,...,f{D-1}` and one row per step. Floats are
//!   printed as shortest round-trip decimals, so CSV round-trips are exact
//!   for f64 as well.

use crate::feature::{FeatureError, FeatureVector, Trajectory};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"HITR";
pub const FORMAT_VERSION: u16 = 1;

const DTYPE_F32: u8 = 0;
const DTYPE_F64: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Binary,
    Csv,
}

#[derive(Error, Debug)]
pub enum TraceError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("bad magic at byte 0 of {path}: expected HITR")]
    BadMagic { path: String },

    #[error("unsupported format version {version} in {path}")]
    UnsupportedVersion { version: u16, path: String },

    #[error("unknown dtype code {dtype} at byte 6 of {path}")]
    UnknownDtype { dtype: u8, path: String },

    #[error(
        "truncated payload in {path}: expected {expected} bytes after the header, found {found} (value index {at_value})"
    )]
    Truncated {
        path: String,
        expected: usize,
        found: usize,
        at_value: usize,
    },

    #[error("{path}:{line}: expected {expected} fields, found {found}")]
    CsvFieldCount {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}:{line}: unparseable {what}: {text:?}")]
    CsvParse {
        path: String,
        line: usize,
        what: &'static str,
        text: String,
    },

    #[error("{path}:{line}: CSV header must start with \"t,f0\"")]
    CsvHeader { path: String, line: usize },

    #[error(
        "binary format requires a dense timestep grid T..1; trajectory runs {t_max}..{t_min} over {len} steps"
    )]
    NonDenseGrid { t_max: i64, t_min: i64, len: usize },

    #[error("trace dimensions overflow the u32 header fields")]
    HeaderOverflow,

    #[error(transparent)]
    Feature(#[from] FeatureError),
}

fn io_err(path: &Path, source: std::io::Error) -> TraceError {
    TraceError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Write `trajectory` to `path` in the requested format.
pub fn write_trace(
    trajectory: &Trajectory,
    path: &Path,
    format: TraceFormat,
) -> Result<(), TraceError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut writer = BufWriter::new(file);
    match format {
        TraceFormat::Binary => write_binary(trajectory, &mut writer, path)?,
        TraceFormat::Csv => write_csv(trajectory, &mut writer, path)?,
    }
    writer.flush().map_err(|e| io_err(path, e))
}

fn write_binary<W: Write>(
    trajectory: &Trajectory,
    writer: &mut W,
    path: &Path,
) -> Result<(), TraceError> {
    if !trajectory.is_dense_to_one() {
        return Err(TraceError::NonDenseGrid {
            t_max: trajectory.t_max(),
            t_min: trajectory.t_min(),
            len: trajectory.len(),
        });
    }
    let steps = u32::try_from(trajectory.len()).map_err(|_| TraceError::HeaderOverflow)?;
    let dim = u32::try_from(trajectory.dim()).map_err(|_| TraceError::HeaderOverflow)?;

    let mut header = Vec::with_capacity(16);
    header.extend_from_slice(&MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.push(DTYPE_F64);
    header.push(0); // reserved
    header.extend_from_slice(&steps.to_le_bytes());
    header.extend_from_slice(&dim.to_le_bytes());
    writer.write_all(&header).map_err(|e| io_err(path, e))?;

    for (_, feature) in trajectory.steps() {
        for &value in feature.values() {
            writer
                .write_all(&value.to_le_bytes())
                .map_err(|e| io_err(path, e))?;
        }
    }
    Ok(())
}

fn write_csv<W: Write>(
    trajectory: &Trajectory,
    writer: &mut W,
    path: &Path,
) -> Result<(), TraceError> {
    let mut header = String::from("t");
    for d in 0..trajectory.dim() {
        header.push_str(&format!(",f{d}"));
    }
    header.push('\n');
    writer
        .write_all(header.as_bytes())
        .map_err(|e| io_err(path, e))?;

    let mut line = String::new();
    for (t, feature) in trajectory.steps() {
        line.clear();
        line.push_str(&t.to_string());
        for &value in feature.values() {
            line.push(',');
            // Shortest round-trip decimal.
            line.push_str(&format!("{value}"));
        }
        line.push('\n');
        writer
            .write_all(line.as_bytes())
            .map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Read a trace file, auto-detecting the format from the leading bytes.
pub fn read_trace(path: &Path) -> Result<Trajectory, TraceError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = BufReader::new(file);
    let mut probe = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        match reader
            .read(&mut probe[got..])
            .map_err(|e| io_err(path, e))?
        {
            0 => break,
            n => got += n,
        }
    }

    if got == 4 && probe == MAGIC {
        return read_binary(reader, path);
    }
    // CSV traces start with the header "t,f0,...". Anything else, including
    // an empty or truncated file, is reported against the binary magic.
    if got == 4 && probe.starts_with(b"t,f") {
        return read_csv(probe[..got].to_vec(), reader, path);
    }
    Err(TraceError::BadMagic {
        path: path.display().to_string(),
    })
}

fn read_binary<R: Read>(mut reader: R, path: &Path) -> Result<Trajectory, TraceError> {
    let mut header = [0u8; 12];
    reader
        .read_exact(&mut header)
        .map_err(|e| io_err(path, e))?;
    let version = u16::from_le_bytes([header[0], header[1]]);
    if version != FORMAT_VERSION {
        return Err(TraceError::UnsupportedVersion {
            version,
            path: path.display().to_string(),
        });
    }
    let dtype = header[2];
    let value_width = match dtype {
        DTYPE_F32 => 4,
        DTYPE_F64 => 8,
        other => {
            return Err(TraceError::UnknownDtype {
                dtype: other,
                path: path.display().to_string(),
            });
        }
    };
    let steps = u32::from_le_bytes([header[4], header[5], header[6], header[7]]) as usize;
    let dim = u32::from_le_bytes([header[8], header[9], header[10], header[11]]) as usize;

    let mut payload = Vec::new();
    reader
        .read_to_end(&mut payload)
        .map_err(|e| io_err(path, e))?;
    let expected = steps * dim * value_width;
    if payload.len() < expected {
        return Err(TraceError::Truncated {
            path: path.display().to_string(),
            expected,
            found: payload.len(),
            at_value: payload.len() / value_width,
        });
    }

    let mut rows = Vec::with_capacity(steps);
    let t_top = steps as i64;
    for row in 0..steps {
        let mut values = Vec::with_capacity(dim);
        for col in 0..dim {
            let offset = (row * dim + col) * value_width;
            let value = match dtype {
                DTYPE_F32 => f64::from(f32::from_le_bytes(
                    payload[offset..offset + 4].try_into().unwrap(),
                )),
                _ => f64::from_le_bytes(payload[offset..offset + 8].try_into().unwrap()),
            };
            values.push(value);
        }
        rows.push((t_top - row as i64, FeatureVector::new(values)?));
    }
    Ok(Trajectory::new(rows)?)
}

fn read_csv<R: BufRead>(
    prefix: Vec<u8>,
    mut reader: R,
    path: &Path,
) -> Result<Trajectory, TraceError> {
    let mut rest = Vec::new();
    reader.read_to_end(&mut rest).map_err(|e| io_err(path, e))?;
    let mut content = prefix;
    content.extend_from_slice(&rest);
    let text = String::from_utf8_lossy(&content);
    let path_str = path.display().to_string();

    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(TraceError::CsvHeader {
            path: path_str,
            line: 1,
        });
    };
    let header_fields: Vec<&str> = header.split(',').collect();
    if header_fields.len() < 2 || header_fields[0] != "t" {
        return Err(TraceError::CsvHeader {
            path: path_str,
            line: 1,
        });
    }
    for (d, field) in header_fields[1..].iter().enumerate() {
        if *field != format!("f{d}") {
            return Err(TraceError::CsvHeader {
                path: path_str,
                line: 1,
            });
        }
    }
    let dim = header_fields.len() - 1;

    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(TraceError::CsvFieldCount {
                path: path_str,
                line: line_no,
                expected: dim + 1,
                found: fields.len(),
            });
        }
        let t: i64 = fields[0].parse().map_err(|_| TraceError::CsvParse {
            path: path_str.clone(),
            line: line_no,
            what: "timestep",
            text: fields[0].to_string(),
        })?;
        let mut values = Vec::with_capacity(dim);
        for field in &fields[1..] {
            let value: f64 = field.parse().map_err(|_| TraceError::CsvParse {
                path: path_str.clone(),
                line: line_no,
                what: "value",
                text: (*field).to_string(),
            })?;
            values.push(value);
        }
        rows.push((t, FeatureVector::new(values)?));
    }
    Ok(Trajectory::new(rows)?)
}
