//! Binary dataset files.
//!
//! Layout, all little-endian: the magic bytes `PXG1`; `d`, `m`, `s`, `seed`
//! as `u64`; `A` row-major (`m·d` f64); `b` (`m` f64); `x*` (`d` f64). A JSON
//! sidecar with the same stem records the full spec and a checksum.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{generate_synthetic, LabeledDataset, SyntheticSpec, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::objective::LassoProblem;

pub const MAGIC: [u8; 4] = *b"PXG1";
const HEADER_LEN: usize = 4 + 4 * 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: String,
    pub spec: SyntheticSpec,
    pub spec_hash: String,
    pub file: String,
    /// Hex SHA-256 of the binary file.
    pub sha256: String,
    pub bytes: u64,
    pub version: String,
}

impl SyntheticSpec {
    /// Stable name of the cached file for this spec.
    pub fn cache_key(&self) -> String {
        let canonical = format!(
            "PXG1;d={};m={};s={};seed={};rho={:016x}",
            self.d,
            self.m,
            self.s,
            self.seed,
            self.rho.to_bits()
        );
        let digest = hex::encode(Sha256::digest(canonical.as_bytes()));
        format!("d{}-m{}-s{}-seed{}-{}", self.d, self.m, self.s, self.seed, &digest[..12])
    }

    /// Loads the cached dataset from `dir`, generating and caching it first
    /// if needed.
    pub fn load_or_generate(&self, dir: impl AsRef<Path>) -> Result<LabeledDataset> {
        let path = dir.as_ref().join(format!("{}.bin", self.cache_key()));
        if path.exists() {
            let ds = read_dataset(&path)?;
            if ds.spec.as_ref() == Some(self) {
                return Ok(ds);
            }
        }
        let ds = generate_synthetic(self)?;
        write_dataset(&ds, dir)?;
        Ok(ds)
    }
}

/// Writes `<dir>/<cache key>.bin` and its `.json` sidecar. Only generated
/// datasets (with a spec and planted solution) can be stored.
pub fn write_dataset(ds: &LabeledDataset, dir: impl AsRef<Path>) -> Result<(PathBuf, DatasetManifest)> {
    let dir = dir.as_ref();
    let (spec, x_star) = match (&ds.spec, &ds.ground_truth) {
        (Some(spec), Some(x)) => (spec, x),
        _ => return Err(Error::InvalidArgument("only synthetic datasets can be cached".into())),
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let key = spec.cache_key();
    let path = dir.join(format!("{key}.bin"));

    let mut hasher = Sha256::new();
    let mut bytes = 0u64;
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut out = BufWriter::new(file);
    let mut put = |chunk: &[u8]| -> std::io::Result<()> {
        hasher.update(chunk);
        bytes += chunk.len() as u64;
        out.write_all(chunk)
    };
    let write_all = |put: &mut dyn FnMut(&[u8]) -> std::io::Result<()>| -> std::io::Result<()> {
        put(&MAGIC)?;
        for word in [spec.d, spec.m, spec.s] {
            put(&(word as u64).to_le_bytes())?;
        }
        put(&spec.seed.to_le_bytes())?;
        for values in [ds.problem.a().as_slice(), ds.problem.b(), x_star] {
            for v in values {
                put(&v.to_le_bytes())?;
            }
        }
        Ok(())
    };
    write_all(&mut put).map_err(|e| Error::io(&path, e))?;
    drop(put);
    out.flush().map_err(|e| Error::io(&path, e))?;

    let manifest = DatasetManifest {
        format: "PXG1".into(),
        spec: spec.clone(),
        spec_hash: key.clone(),
        file: format!("{key}.bin"),
        sha256: hex::encode(hasher.finalize()),
        bytes,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let sidecar = path.with_extension("json");
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&sidecar, json).map_err(|e| Error::io(&sidecar, e))?;
    Ok((path, manifest))
}

/// Reads a binary dataset. `rho` comes from the sidecar when present and
/// defaults to 0.5 otherwise.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let raw = fs::read(path).map_err(|e| Error::io(path, e))?;
    if raw.len() < HEADER_LEN || raw[..4] != MAGIC {
        return Err(Error::Format(format!("{} is not a PXG1 file", path.display())));
    }
    let word = |i: usize| u64::from_le_bytes(raw[4 + 8 * i..12 + 8 * i].try_into().unwrap());
    let (d, m, s, seed) = (word(0) as usize, word(1) as usize, word(2) as usize, word(3));
    let count = m
        .checked_mul(d)
        .and_then(|n| n.checked_add(m + d))
        .filter(|n| raw.len() == HEADER_LEN + n * 8)
        .ok_or_else(|| Error::Format(format!("{}: size does not match d = {d}, m = {m}", path.display())))?;
    let mut values = raw[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    debug_assert_eq!(values.len(), count);
    let a: Vec<f64> = values.by_ref().take(m * d).collect();
    let b: Vector = values.by_ref().take(m).collect();
    let x_star: Vector = values.collect();

    let mut spec = SyntheticSpec::new(d, m, s, seed);
    let sidecar = path.with_extension("json");
    if let Ok(text) = fs::read_to_string(&sidecar) {
        let manifest: DatasetManifest = serde_json::from_str(&text)?;
        spec.rho = manifest.spec.rho;
    }
    Ok(LabeledDataset {
        problem: LassoProblem::new(Matrix::new(m, d, a)?, b, DEFAULT_ALPHA)?,
        ground_truth: Some(x_star),
        spec: Some(spec),
        column_names: None,
        target_name: None,
    })
}
