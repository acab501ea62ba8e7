//! Sample matrices and curve files.
//!
//! Matrices are either headerless CSV (one point per row) or a little-endian
//! binary layout: the 8-byte magic [`MATRIX_MAGIC`], `n` and `d` as `u64`,
//! then `n·d` row-major `f64` values.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use prcurve::{CurveKind, PrCurve, SampleSet};

pub const MATRIX_MAGIC: &[u8; 8] = b"PRCMATF8";

/// Reads a matrix, choosing the format from the leading bytes.
pub fn read_matrix(path: &Path) -> Result<SampleSet> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if bytes.starts_with(MATRIX_MAGIC) {
        parse_binary(&bytes).with_context(|| format!("parsing {}", path.display()))
    } else {
        parse_csv(&bytes).with_context(|| format!("parsing {}", path.display()))
    }
}

fn parse_binary(bytes: &[u8]) -> Result<SampleSet> {
    if bytes.len() < 24 {
        bail!("truncated header");
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let (n, d) = (word(8) as usize, word(16) as usize);
    let expected = n
        .checked_mul(d)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(24))
        .context("matrix size overflows")?;
    if bytes.len() != expected {
        bail!("expected {expected} bytes for a {n}x{d} matrix, found {}", bytes.len());
    }
    let data = bytes[24..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(SampleSet::new(data, d)?)
}

fn parse_csv(bytes: &[u8]) -> Result<SampleSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(bytes);
    let mut data = Vec::new();
    let mut d = None;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        match d {
            None => d = Some(record.len()),
            Some(d) if d != record.len() => bail!("row {} has {} columns, expected {d}", i + 1, record.len()),
            _ => {}
        }
        for field in record.iter() {
            data.push(field.parse::<f64>().with_context(|| format!("row {}: {field:?}", i + 1))?);
        }
    }
    let d = d.context("no rows")?;
    Ok(SampleSet::new(data, d)?)
}

pub fn write_matrix_binary(path: &Path, s: &SampleSet) -> Result<()> {
    write_atomic(path, |w| {
        w.write_all(MATRIX_MAGIC)?;
        w.write_all(&(s.n() as u64).to_le_bytes())?;
        w.write_all(&(s.dim() as u64).to_le_bytes())?;
        for v in s.data() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    })
}

pub fn write_matrix_csv(path: &Path, s: &SampleSet) -> Result<()> {
    write_atomic(path, |w| {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in s.rows() {
            out.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        out.flush()?;
        Ok(())
    })
}

pub fn write_curve(path: &Path, curve: &PrCurve) -> Result<()> {
    write_atomic(path, |w| Ok(curve.write_csv(w)?))
}

pub fn read_curve(path: &Path, kind: CurveKind) -> Result<PrCurve> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    PrCurve::read_csv(BufReader::new(f), kind).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut w = BufWriter::new(File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?);
        body(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

