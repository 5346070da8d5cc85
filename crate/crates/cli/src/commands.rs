//! Subcommand implementations. Each returns the process exit code;
//! JSON reports go to stdout, input/IO problems to stderr.
//!
//! Exit codes: 0 success or PASS, 1 verification FAIL, 2 invalid input,
//! 3 unsupported pole order / no singularity at the analysis point,
//! 4 unit-root assumption violated.

use std::collections::BTreeMap;
use std::path::Path;

use plaurent_core::granger::{
    build_representation, classify_integration, cross_validate, simulate_ar,
};
use plaurent_core::laurent::{analyze, identity_residual, laurent_expansion, ComplementPolicy};
use plaurent_core::oracle::{contour_coefficients, default_contour, ContourSpec};
use plaurent_core::Error as CoreError;

use crate::docs::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_ASSUMPTION: i32 = 4;

const VERIFY_TOL: f64 = 1e-7;
const CROSSVAL_THRESHOLD: f64 = 1e-6;
const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// A failure carrying its exit code; `report` goes to stdout (domain
/// outcomes the caller may want to parse), otherwise stderr.
pub struct CmdError {
    pub code: i32,
    pub message: String,
    pub as_report: bool,
}

impl CmdError {
    fn input(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_BAD_INPUT,
            message: message.into(),
            as_report: false,
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::UnsupportedPoleOrder { .. } => EXIT_UNSUPPORTED,
            CoreError::NotSingularAtOne => EXIT_UNSUPPORTED,
            CoreError::WrongOrder { .. } => EXIT_UNSUPPORTED,
            CoreError::IdenticallySingular => EXIT_UNSUPPORTED,
            CoreError::AssumptionViolated { .. } => EXIT_ASSUMPTION,
            _ => EXIT_BAD_INPUT,
        };
        let message = match &e {
            CoreError::UnsupportedPoleOrder { .. } => {
                "order >= 3 or non-invertible pencil".to_string()
            }
            other => other.to_string(),
        };
        CmdError {
            code,
            message,
            as_report: code == EXIT_UNSUPPORTED || code == EXIT_ASSUMPTION,
        }
    }
}

pub type CmdResult = Result<i32, CmdError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CmdError::input(format!("cannot parse {}: {e}", path.display())))
}

fn print_report<T: serde::Serialize>(report: &T) {
    println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
}

fn policy_from_flags(complements: &str, seed: u64) -> Result<ComplementPolicy, CmdError> {
    match complements {
        "orthogonal" => Ok(ComplementPolicy::Orthogonal),
        "random" => Ok(ComplementPolicy::SeededRandom(seed)),
        other => Err(CmdError::input(format!(
            "unknown complements mode '{other}' (use orthogonal|random)"
        ))),
    }
}

pub fn pencil_classify(
    input: &Path,
    rank_tol: Option<f64>,
    complements: &str,
    seed: u64,
) -> CmdResult {
    let doc: PencilDoc = read_json(input)?;
    let pencil = doc.to_pencil().map_err(CmdError::input)?;
    let policy = policy_from_flags(complements, seed)?;
    let analysis = analyze(&pencil, &policy, rank_tol)?;
    print_report(&ClassifyReport {
        order: analysis.order.as_usize(),
        dim_k: analysis.dim_k(),
        dim_k1: analysis.dim_k1(),
        dim_r_defect: analysis.range_defect(),
        complements_mode: complements.to_string(),
        seed,
        rank_tol: analysis.rank_tol,
    });
    Ok(EXIT_OK)
}

pub fn pencil_laurent(
    input: &Path,
    j_max: usize,
    rank_tol: Option<f64>,
    complements: &str,
    seed: u64,
) -> CmdResult {
    let doc: PencilDoc = read_json(input)?;
    let pencil = doc.to_pencil().map_err(CmdError::input)?;
    let policy = policy_from_flags(complements, seed)?;
    let analysis = analyze(&pencil, &policy, rank_tol)?;
    let expansion = laurent_expansion(&analysis, &pencil, j_max)?;
    let mut coefficients = BTreeMap::new();
    for j in -(expansion.order() as i64)..=expansion.j_max() {
        coefficients.insert(j.to_string(), matrix_to_doc(expansion.coeff(j).unwrap()));
    }
    print_report(&LaurentReport {
        center: complex_to_doc(pencil.center()),
        m: expansion.order(),
        j_max: expansion.j_max(),
        complements_mode: complements.to_string(),
        seed,
        rank_tol: analysis.rank_tol,
        coefficients,
    });
    Ok(EXIT_OK)
}

pub fn pencil_verify(
    input: &Path,
    radius: Option<f64>,
    nodes: usize,
    j_max: usize,
    rank_tol: Option<f64>,
) -> CmdResult {
    let doc: PencilDoc = read_json(input)?;
    let pencil = doc.to_pencil().map_err(CmdError::input)?;
    let analysis = analyze(&pencil, &ComplementPolicy::Orthogonal, rank_tol)?;
    if analysis.order.as_usize() == 0 {
        return Err(CmdError {
            code: EXIT_UNSUPPORTED,
            message: "no singularity at center".into(),
            as_report: true,
        });
    }
    let expansion = laurent_expansion(&analysis, &pencil, j_max)?;
    let m = expansion.order() as i64;

    // An explicit radius is an expert override and is not validated against
    // the spectrum; a contour reaching other singularities shows up as a
    // coefficient deviation and fails the check.
    let spec = match radius {
        Some(r) => ContourSpec::new(pencil.center(), r, nodes)?,
        None => {
            let mut s = default_contour(&pencil, pencil.center())?;
            s.nodes = nodes;
            s
        }
    };

    let contour = contour_coefficients(&pencil, &spec, -m, expansion.j_max())?;
    let mut contour_deviation = BTreeMap::new();
    let mut max_dev = 0.0f64;
    for (i, j) in (-m..=expansion.j_max()).enumerate() {
        let dev = (expansion.coeff(j).unwrap() - &contour[i]).norm();
        max_dev = max_dev.max(dev);
        contour_deviation.insert(j.to_string(), dev);
    }

    let mut residuals = BTreeMap::new();
    let mut max_resid = 0.0f64;
    for k in -m..=(expansion.j_max() - m) {
        let r = identity_residual(&expansion, &pencil, k)?;
        max_resid = max_resid.max(r);
        residuals.insert(k.to_string(), r);
    }

    let pass = max_dev <= VERIFY_TOL && max_resid <= VERIFY_TOL;
    print_report(&VerifyReport {
        m: expansion.order(),
        center: complex_to_doc(pencil.center()),
        radius: spec.radius,
        nodes: spec.nodes,
        j_max: expansion.j_max(),
        tolerance: VERIFY_TOL,
        rank_tol: analysis.rank_tol,
        max_contour_deviation: max_dev,
        contour_deviation,
        max_identity_residual: max_resid,
        identity_residual: residuals,
        pass,
    });
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

pub fn ar_classify(
    input: &Path,
    rank_tol: Option<f64>,
    complements: &str,
    seed: u64,
) -> CmdResult {
    let doc: ModelDoc = read_json(input)?;
    let model = doc.to_model().map_err(CmdError::input)?;
    let policy = policy_from_flags(complements, seed)?;
    let classification = classify_integration(&model, &policy, rank_tol)?;
    print_report(&ArClassifyReport {
        d: classification.d,
        dim_k: classification.analysis.dim_k(),
        dim_k1: classification.analysis.dim_k1(),
        unit_root_multiplicity: classification.assumption.unit_root_multiplicity,
        n_minus1: matrix_to_doc(&classification.n_minus1),
        n_minus2: matrix_to_doc(&classification.n_minus2),
        complements_mode: complements.to_string(),
        seed,
        rank_tol: classification.analysis.rank_tol,
    });
    Ok(EXIT_OK)
}

pub fn ar_represent(input: &Path, max_ma: Option<usize>, rank_tol: Option<f64>) -> CmdResult {
    let doc: ModelDoc = read_json(input)?;
    let model = doc.to_model().map_err(CmdError::input)?;
    let classification = classify_integration(&model, &ComplementPolicy::Orthogonal, rank_tol)?;
    let rep = build_representation(&model, &classification, DEFAULT_TAIL_TOL)?;
    let emit = max_ma.map_or(rep.ma.len(), |cap| rep.ma.len().min(cap + 1));
    print_report(&RepresentReport {
        d: rep.d,
        truncation: rep.truncation(),
        tail_bound: rep.tail_bound,
        tail_tol: DEFAULT_TAIL_TOL,
        n_minus1: matrix_to_doc(&rep.n_minus1),
        n_minus2: matrix_to_doc(&rep.n_minus2),
        ma: rep.ma[..emit].iter().map(matrix_to_doc).collect(),
    });
    Ok(EXIT_OK)
}

pub fn ar_simulate(
    input: &Path,
    t_len: usize,
    burnin: usize,
    seed: Option<u64>,
    output: &Path,
) -> CmdResult {
    let doc: ModelDoc = read_json(input)?;
    let model = doc.to_model().map_err(CmdError::input)?;
    let noise = doc.to_noise(seed).map_err(CmdError::input)?;
    let path = simulate_ar(&model, &noise, t_len, burnin, None)?;
    let file = PathFile {
        dim: path.dim,
        t: path.t_len,
        burnin: path.burnin,
        seed: noise.seed(),
        values: path.values.iter().map(vector_to_doc).collect(),
        innovations: path.innovations.iter().map(vector_to_doc).collect(),
        initial: path.initial.iter().map(vector_to_doc).collect(),
    };
    let text = serde_json::to_string_pretty(&file).expect("path serializes");
    std::fs::write(output, text)
        .map_err(|e| CmdError::input(format!("cannot write {}: {e}", output.display())))?;
    print_report(&SimulateSummary {
        written: output.display().to_string(),
        dim: path.dim,
        t: path.t_len,
        seed: noise.seed(),
    });
    Ok(EXIT_OK)
}

pub fn ar_crossval(
    input: &Path,
    t_len: usize,
    burnin: Option<usize>,
    seed: Option<u64>,
    rank_tol: Option<f64>,
) -> CmdResult {
    let doc: ModelDoc = read_json(input)?;
    let model = doc.to_model().map_err(CmdError::input)?;
    let noise = doc.to_noise(seed).map_err(CmdError::input)?;
    let classification = classify_integration(&model, &ComplementPolicy::Orthogonal, rank_tol)?;
    let rep = build_representation(&model, &classification, DEFAULT_TAIL_TOL)?;
    let burnin = burnin.unwrap_or_else(|| 10 * rep.truncation().max(1));
    let cv = cross_validate(&model, &rep, &noise, t_len, burnin)?;
    let pass = cv.max_residual <= CROSSVAL_THRESHOLD;
    print_report(&CrossvalReport {
        d: cv.d,
        t: cv.t_len,
        burnin,
        seed: noise.seed(),
        truncation: cv.ma_truncation,
        tail_bound: cv.tail_bound,
        max_residual: cv.max_residual,
        threshold: CROSSVAL_THRESHOLD,
        pass,
    });
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}
