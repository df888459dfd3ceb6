//! Machine-readable export formats. Every file carries a schema version;
//! rationals are rendered `p/q`, floats as shortest round-trip decimals.

use crate::logdet::SolveReport;
use crate::measures::MomentSequence;
use crate::momentmat::SymMatrix;
use crate::multiindex::GradedBasis;
use crate::pell::{BoundaryReport, PellReport};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentEntry {
    pub alpha: Vec<u32>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentsJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub order: u32,
    pub moments: Vec<MomentEntry>,
}

pub fn moments_json<C: Scalar>(domain: &str, phi: &MomentSequence<C>) -> MomentsJson {
    MomentsJson {
        schema_version: SCHEMA_VERSION,
        domain: domain.to_string(),
        d: phi.dim(),
        order: phi.order(),
        moments: phi
            .basis()
            .iter()
            .zip(phi.values())
            .map(|(alpha, v)| MomentEntry {
                alpha: alpha.exponents().to_vec(),
                value: v.render(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub row_alpha: Vec<u32>,
    pub col_alpha: Vec<u32>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub degree: u32,
    pub size: usize,
    /// Lower triangle only; the matrix is symmetric.
    pub entries: Vec<MatrixEntry>,
}

pub fn matrix_json<C: Scalar>(
    domain: &str,
    degree: u32,
    basis: &GradedBasis,
    m: &SymMatrix<C>,
) -> MatrixJson {
    let mut entries = Vec::with_capacity(m.size() * (m.size() + 1) / 2);
    for i in 0..m.size() {
        for j in 0..=i {
            entries.push(MatrixEntry {
                row_alpha: basis.at(i).exponents().to_vec(),
                col_alpha: basis.at(j).exponents().to_vec(),
                value: m.at(i, j).render(),
            });
        }
    }
    MatrixJson {
        schema_version: SCHEMA_VERSION,
        domain: domain.to_string(),
        d: basis.dim(),
        degree,
        size: m.size(),
        entries,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PellReportJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub n: u32,
    pub level: String,
    pub mode: String,
    pub constant: u64,
    pub residual_max_abs_coeff: String,
    pub per_generator_masses: Vec<(String, String)>,
    pub status: String,
}

impl From<&PellReport> for PellReportJson {
    fn from(r: &PellReport) -> Self {
        PellReportJson {
            schema_version: SCHEMA_VERSION,
            domain: r.domain.to_string(),
            d: r.d,
            n: r.n,
            level: r.level.to_string(),
            mode: r.mode.to_string(),
            constant: r.constant,
            residual_max_abs_coeff: r.residual_max_abs_coeff.clone(),
            per_generator_masses: r.per_generator_masses.clone(),
            status: if r.verified { "verified" } else { "failed" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PellGridJson {
    pub schema_version: u32,
    pub reports: Vec<PellReportJson>,
}

pub fn pell_grid_json(reports: &[PellReport]) -> PellGridJson {
    PellGridJson {
        schema_version: SCHEMA_VERSION,
        reports: reports.iter().map(PellReportJson::from).collect(),
    }
}

/// CSV summary, one line per report; header included.
pub fn pell_grid_csv(reports: &[PellReport]) -> String {
    let mut out = String::from("domain,d,n,level,mode,constant,residual,status\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.domain,
            r.d,
            r.n,
            r.level,
            r.mode,
            r.constant,
            r.residual_max_abs_coeff,
            if r.verified { "verified" } else { "failed" }
        ));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryReportJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub n: u32,
    pub gamma: u64,
    pub boundary_points: Vec<Vec<String>>,
    pub interior_points: usize,
    pub interior_max: String,
    pub status: String,
}

impl From<&BoundaryReport> for BoundaryReportJson {
    fn from(r: &BoundaryReport) -> Self {
        BoundaryReportJson {
            schema_version: SCHEMA_VERSION,
            domain: r.domain.to_string(),
            d: r.d,
            n: r.n,
            gamma: r.gamma,
            boundary_points: r.boundary_points.clone(),
            interior_points: r.interior_points,
            interior_max: r.interior_max.clone(),
            status: if r.verified { "verified" } else { "failed" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramJson {
    pub label: String,
    pub size: usize,
    /// Row-major dense entries.
    pub entries: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReportJson {
    pub schema_version: u32,
    pub d: usize,
    pub n: u32,
    pub objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub moments: Vec<MomentEntry>,
    pub gram_matrices: Vec<GramJson>,
    pub partition_residual: Option<f64>,
    pub equilibrium_deviation: Option<f64>,
}

pub fn solve_report_json(
    report: &SolveReport,
    partition_residual: Option<f64>,
    equilibrium_deviation: Option<f64>,
) -> SolveReportJson {
    SolveReportJson {
        schema_version: SCHEMA_VERSION,
        d: report.dim,
        n: report.degree,
        objective: report.objective,
        gradient_norm: report.gradient_norm,
        iterations: report.iterations,
        objective_trace: report.objective_trace.clone(),
        moments: report
            .moments
            .basis()
            .iter()
            .zip(report.moments.values())
            .map(|(alpha, v)| MomentEntry {
                alpha: alpha.exponents().to_vec(),
                value: v.render(),
            })
            .collect(),
        gram_matrices: report
            .gram_matrices
            .iter()
            .map(|(label, q)| GramJson {
                label: label.clone(),
                size: q.size(),
                entries: (0..q.size())
                    .map(|i| (0..q.size()).map(|j| *q.at(i, j)).collect())
                    .collect(),
            })
            .collect(),
        partition_residual,
        equilibrium_deviation,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChristoffelJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub n: u32,
    /// Canonical text form of `Λ_n^{-1}` with exact coefficients.
    pub polynomial: String,
}

/// Plot-ready trace of `Λ_n^{-1}` along the segment from `start` to `end`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryTraceJson {
    pub schema_version: u32,
    pub domain: String,
    pub d: usize,
    pub n: u32,
    pub gamma: u64,
    pub start: Vec<String>,
    pub end: Vec<String>,
    /// `(t, Λ_n^{-1}((1-t)·start + t·end))` pairs with exact values.
    pub points: Vec<(String, String)>,
}
