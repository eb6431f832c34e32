//! Parsing of command-line values and JSON input files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use enriques_core::matrix::IntMatrix;
use enriques_core::Lattice;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Hash of the argument vector and every file read while handling it.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(args: &[String]) -> Self {
        let mut h = Sha256::new();
        for a in args {
            h.update(a.as_bytes());
            h.update([0]);
        }
        InputDigest(h)
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.0.update(text.as_bytes());
        self.0.update([0]);
        Ok(text)
    }

    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// Comma-separated integers, e.g. `1,0,-2`.
pub fn int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().with_context(|| format!("`{t}` is not an integer")))
        .collect()
}

/// Rows separated by `;`, entries by `,`, e.g. `2,1;1,10`.
pub fn matrix(s: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<i64>> = s.split(';').map(int_list).collect::<Result<_>>()?;
    Ok(IntMatrix::from_rows(&rows)?)
}

#[derive(Deserialize)]
pub struct LatticeJson {
    pub gram: Vec<Vec<i64>>,
}

pub fn lattice_from_rows(rows: &[Vec<i64>]) -> Result<Lattice> {
    Ok(Lattice::from_gram(IntMatrix::from_rows(rows)?)?)
}

/// A Gram matrix given inline or as a lattice JSON file; exactly one is
/// required.
pub fn gram_argument(digest: &mut InputDigest, inline: Option<&str>, file: Option<&Path>) -> Result<Lattice> {
    match (inline, file) {
        (Some(s), None) => Ok(Lattice::from_gram(matrix(s)?)?),
        (None, Some(p)) => lattice_from_rows(&digest.read_json::<LatticeJson>(p)?.gram),
        _ => bail!("give exactly one of --gram and --gram-file"),
    }
}

#[derive(Deserialize)]
pub struct BasisJson {
    /// Sublattice basis vectors in the coordinates of the ambient lattice.
    pub basis: Vec<Vec<i64>>,
}

pub fn basis_matrix(b: &BasisJson, rank: usize) -> Result<IntMatrix> {
    Ok(IntMatrix::from_columns(rank, &b.basis)?)
}

#[derive(Deserialize)]
pub struct EmbeddingJson {
    pub source_gram: Vec<Vec<i64>>,
    /// Image of each source basis vector in the coordinates of `N`.
    pub images: Vec<Vec<i64>>,
}
