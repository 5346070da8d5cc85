//! JSON document schemas: pencil/model inputs and the report types every
//! subcommand emits. Matrices serialize row-major as arrays of arrays with
//! complex entries always encoded [re, im]; inputs additionally accept bare
//! numbers for real entries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use plaurent_core::mat::{c64, CMat, CVec, C64};
use plaurent_core::{ARModel, NoiseSpec, TaylorPencil};

/// A scalar that is either a bare real or an [re, im] pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Real(f64),
    Pair([f64; 2]),
}

impl EntryDoc {
    pub fn to_complex(self) -> C64 {
        match self {
            EntryDoc::Real(re) => c64(re, 0.0),
            EntryDoc::Pair([re, im]) => c64(re, im),
        }
    }
}

pub type MatrixDoc = Vec<Vec<EntryDoc>>;

/// Pencil document: center, dimension and the Taylor coefficients A₀…A_p.
#[derive(Debug, Deserialize)]
pub struct PencilDoc {
    pub center: EntryDoc,
    pub dim: usize,
    pub coefficients: Vec<MatrixDoc>,
}

/// AR model document: Φ₁…Φ_p plus the innovation specification.
#[derive(Debug, Deserialize)]
pub struct ModelDoc {
    pub dim: usize,
    pub ar: Vec<MatrixDoc>,
    pub noise: NoiseDoc,
}

#[derive(Debug, Deserialize)]
pub struct NoiseDoc {
    pub covariance: MatrixDoc,
    #[serde(default)]
    pub seed: u64,
}

/// Rejects ragged rows and enforces the declared square shape.
pub fn matrix_from_doc(doc: &MatrixDoc, dim: usize, what: &str) -> Result<CMat, String> {
    if doc.len() != dim {
        return Err(format!("{what}: expected {dim} rows, found {}", doc.len()));
    }
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(format!(
                "{what}: row {i} has {} entries, expected {dim} (ragged matrix)",
                row.len()
            ));
        }
    }
    Ok(CMat::from_fn(dim, dim, |i, j| doc[i][j].to_complex()))
}

impl PencilDoc {
    pub fn to_pencil(&self) -> Result<TaylorPencil, String> {
        if self.coefficients.is_empty() {
            return Err("pencil document has no coefficients".into());
        }
        let coeffs = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_doc(m, self.dim, &format!("coefficient {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        TaylorPencil::new(self.center.to_complex(), coeffs).map_err(|e| e.to_string())
    }
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<ARModel, String> {
        if self.ar.is_empty() {
            return Err("model document has no AR coefficients".into());
        }
        let phi = self
            .ar
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_doc(m, self.dim, &format!("ar[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        ARModel::new(phi).map_err(|e| e.to_string())
    }

    pub fn to_noise(&self, seed_override: Option<u64>) -> Result<NoiseSpec, String> {
        let cov = matrix_from_doc(&self.noise.covariance, self.dim, "noise.covariance")?;
        NoiseSpec::new(cov, seed_override.unwrap_or(self.noise.seed)).map_err(|e| e.to_string())
    }
}

/// Output encoding of a complex matrix: rows of [re, im] pairs.
pub type MatrixOut = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_doc(m: &CMat) -> MatrixOut {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn vector_to_doc(v: &CVec) -> Vec<[f64; 2]> {
    (0..v.len()).map(|i| [v[i].re, v[i].im]).collect()
}

pub fn complex_to_doc(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub order: usize,
    #[serde(rename = "dim_K")]
    pub dim_k: usize,
    #[serde(rename = "dim_K1")]
    pub dim_k1: usize,
    #[serde(rename = "dim_R_defect")]
    pub dim_r_defect: usize,
    pub complements_mode: String,
    pub seed: u64,
    pub rank_tol: f64,
}

#[derive(Debug, Serialize)]
pub struct LaurentReport {
    pub center: [f64; 2],
    pub m: usize,
    #[serde(rename = "J")]
    pub j_max: i64,
    pub complements_mode: String,
    pub seed: u64,
    pub rank_tol: f64,
    #[serde(rename = "N")]
    pub coefficients: BTreeMap<String, MatrixOut>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub m: usize,
    pub center: [f64; 2],
    pub radius: f64,
    pub nodes: usize,
    #[serde(rename = "J")]
    pub j_max: i64,
    pub tolerance: f64,
    pub rank_tol: f64,
    pub max_contour_deviation: f64,
    pub contour_deviation: BTreeMap<String, f64>,
    pub max_identity_residual: f64,
    pub identity_residual: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ArClassifyReport {
    pub d: usize,
    #[serde(rename = "dim_K")]
    pub dim_k: usize,
    #[serde(rename = "dim_K1")]
    pub dim_k1: usize,
    pub unit_root_multiplicity: usize,
    #[serde(rename = "N_minus1")]
    pub n_minus1: MatrixOut,
    #[serde(rename = "N_minus2")]
    pub n_minus2: MatrixOut,
    pub complements_mode: String,
    pub seed: u64,
    pub rank_tol: f64,
}

#[derive(Debug, Serialize)]
pub struct RepresentReport {
    pub d: usize,
    #[serde(rename = "J")]
    pub truncation: usize,
    pub tail_bound: f64,
    pub tail_tol: f64,
    #[serde(rename = "N_minus1")]
    pub n_minus1: MatrixOut,
    #[serde(rename = "N_minus2")]
    pub n_minus2: MatrixOut,
    pub ma: Vec<MatrixOut>,
}

#[derive(Debug, Serialize)]
pub struct PathFile {
    pub dim: usize,
    pub t: usize,
    pub burnin: usize,
    pub seed: u64,
    pub values: Vec<Vec<[f64; 2]>>,
    pub innovations: Vec<Vec<[f64; 2]>>,
    pub initial: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
pub struct SimulateSummary {
    pub written: String,
    pub dim: usize,
    pub t: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct CrossvalReport {
    pub d: usize,
    pub t: usize,
    pub burnin: usize,
    pub seed: u64,
    #[serde(rename = "J")]
    pub truncation: usize,
    pub tail_bound: f64,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Uniform error payload for domain failures reported on stdout.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: String,
}
