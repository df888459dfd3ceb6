//! The primal log-det moment problem: minimize
//! `-Σ_g log det M_{n-t_g}(g·φ)` over moment vectors with `φ₀ = 1`, by a
//! damped Newton method that never leaves the positive-definite cone. The
//! inverses of the localizing matrices at the optimum are the dual sum-of-
//! squares Gram matrices.

use crate::error::{Error, Result};
use crate::measures::{equilibrium_moments, uniform_moments, MomentSequence, Provenance};
use crate::momentmat::{monomial_vector, SymMatrix};
use crate::multiindex::{enumerate_basis, GradedBasis};
use crate::polyring::{make_generators, Domain, GeneratorSet, Polynomial};
use std::collections::BTreeMap;

/// One instance of the primal problem. The generator family must contain
/// the unit generator and only generators with `t_g ≤ n` (the built-in
/// families guarantee both).
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub dim: usize,
    pub degree: u32,
    pub generators: GeneratorSet,
}

impl ProblemSpec {
    pub fn new(dim: usize, degree: u32, generators: GeneratorSet) -> Result<Self> {
        if generators.is_empty() || !generators.generators[0].is_unit() {
            return Err(Error::InvalidArgument(
                "generator set must start with the unit generator".into(),
            ));
        }
        for g in generators.iter() {
            if g.half_degree > degree {
                return Err(Error::InvalidArgument(format!(
                    "generator `{}` has t_g = {} > n = {degree}",
                    g.label, g.half_degree
                )));
            }
            if g.poly.dim() != dim {
                return Err(Error::InvalidArgument(format!(
                    "generator `{}` has dimension {}, expected {dim}",
                    g.label,
                    g.poly.dim()
                )));
            }
        }
        Ok(ProblemSpec {
            dim,
            degree,
            generators,
        })
    }

    /// The full generator family of a regular domain.
    ///
    /// For custom families compactness of the underlying set is not checked;
    /// without an algebraic certificate of compactness the infimum may not
    /// be attained and the iteration can diverge.
    pub fn for_domain(domain: Domain, dim: usize, degree: u32) -> ProblemSpec {
        ProblemSpec {
            dim,
            degree,
            generators: make_generators(domain, dim, degree),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Stop when the gradient norm on the `φ₀ = 1` slice drops below this.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-9,
            max_iterations: 200,
        }
    }
}

/// Converged solve: optimal moments, dual Gram matrices and diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub dim: usize,
    pub degree: u32,
    /// `φ*`, the optimal moment vector (mass entry exactly 1).
    pub moments: MomentSequence<f64>,
    pub objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    /// `Q*_g = M_{n-t_g}(g·φ*)^{-1}` per generator, with `s(n-t_g)` sizes.
    pub gram_matrices: Vec<(String, SymMatrix<f64>)>,
}

/// Sparse description of the linear map `φ ↦ M_{n-t_g}(g·φ)`.
struct GeneratorMap {
    label: String,
    poly: Polynomial<f64>,
    size: usize,
    basis: GradedBasis,
    /// packed (i ≥ j) entries: list of (moment position, coefficient)
    entries: Vec<Vec<(usize, f64)>>,
    /// transpose: moment position → list of (i, j, coefficient), i ≥ j
    by_var: BTreeMap<usize, Vec<(usize, usize, f64)>>,
}

impl GeneratorMap {
    fn build(spec: &ProblemSpec, moment_basis: &GradedBasis) -> Vec<GeneratorMap> {
        spec.generators
            .iter()
            .map(|g| {
                let basis = enumerate_basis(spec.dim, spec.degree - g.half_degree);
                let size = basis.len();
                let poly = g.poly.to_f64();
                let mut entries = vec![Vec::new(); size * (size + 1) / 2];
                let mut by_var: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
                let mut k = 0;
                for i in 0..size {
                    for j in 0..=i {
                        let base = basis.at(i).sum(basis.at(j));
                        for (beta, &c) in poly.terms().map(|(b, c)| (b, c)) {
                            let pos = moment_basis
                                .position(&base.sum(beta))
                                .expect("moment order covers 2n");
                            entries[k].push((pos, c));
                            by_var.entry(pos).or_default().push((i, j, c));
                        }
                        k += 1;
                    }
                }
                GeneratorMap {
                    label: g.label.clone(),
                    poly,
                    size,
                    basis,
                    entries,
                    by_var,
                }
            })
            .collect()
    }

    fn matrix(&self, phi: &[f64]) -> SymMatrix<f64> {
        let mut k = 0;
        SymMatrix::from_fn(self.size, |_i, _j| {
            let v = self.entries[k]
                .iter()
                .map(|&(pos, c)| c * phi[pos])
                .sum::<f64>();
            k += 1;
            v
        })
    }
}

/// Moments of the uniform probability measure, the default strictly
/// feasible starting point.
pub fn uniform_init(domain: Domain, dim: usize, degree: u32) -> MomentSequence<f64> {
    uniform_moments(domain, dim, 2 * degree).to_f64()
}

/// Damped Newton minimization of `-Σ_g log det M_{n-t_g}(g·φ)` on the
/// affine slice `φ₀ = 1`. The equality constraint is eliminated (the mass
/// coordinate is simply held fixed); backtracking halves the step until the
/// iterate is inside the PD cone and the objective has not increased; a
/// gradient step with an Armijo test takes over if the Hessian solve fails.
pub fn primal_solve(
    spec: &ProblemSpec,
    init: &MomentSequence<f64>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    if init.dim() != spec.dim || init.order() < 2 * spec.degree {
        return Err(Error::InvalidArgument(
            "initializer must provide moments up to order 2n".into(),
        ));
    }
    let moment_basis = enumerate_basis(spec.dim, 2 * spec.degree);
    let maps = GeneratorMap::build(spec, &moment_basis);
    let nvars = moment_basis.len() - 1; // φ₀ stays fixed at 1

    let mut phi: Vec<f64> = moment_basis
        .iter()
        .map(|alpha| *init.value(alpha))
        .collect();
    phi[0] = 1.0;

    // strict feasibility of the initializer
    let mut objective = 0.0;
    for map in &maps {
        match map.matrix(&phi).ldl() {
            Ok(f) => objective -= f.log_det(),
            Err(_) => {
                return Err(Error::InfeasibleInit {
                    label: map.label.clone(),
                })
            }
        }
    }
    let mut trace = vec![objective];

    let mut iterations = 0;
    while iterations < opts.max_iterations {
        // gradient and Hessian of -Σ log det at the current iterate
        let inverses: Vec<SymMatrix<f64>> = maps
            .iter()
            .map(|m| m.matrix(&phi).inverse())
            .collect::<Result<_>>()?;
        let mut grad = vec![0.0; nvars];
        for (map, inv) in maps.iter().zip(&inverses) {
            for (&pos, entries) in &map.by_var {
                if pos == 0 {
                    continue;
                }
                let mut v = 0.0;
                for &(i, j, c) in entries {
                    v += c * inv.at(i, j) * if i == j { 1.0 } else { 2.0 };
                }
                grad[pos - 1] -= v;
            }
        }
        let gradient_norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gradient_norm <= opts.tol {
            break;
        }

        let hessian = assemble_hessian(&maps, &inverses, nvars);
        let step = match hessian.ldl() {
            Ok(f) => {
                let rhs: Vec<f64> = grad.iter().map(|v| -v).collect();
                f.solve(&rhs)
            }
            // fall back to plain gradient descent
            Err(_) => grad.iter().map(|v| -v).collect(),
        };

        let descent: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        let mut t = 1.0;
        let mut accepted = false;
        while t >= 1e-14 {
            let mut candidate = phi.clone();
            for (k, s) in step.iter().enumerate() {
                candidate[k + 1] += t * s;
            }
            if let Some(cand_obj) = evaluate(&maps, &candidate) {
                // stay monotone; Armijo slack only matters for the fallback
                if cand_obj <= objective + 1e-4 * t * descent.min(0.0) && cand_obj <= objective {
                    phi = candidate;
                    objective = cand_obj;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break; // line search stalled; convergence is judged below
        }
        trace.push(objective);
    }

    // final gradient on the slice
    let inverses: Vec<SymMatrix<f64>> = maps
        .iter()
        .map(|m| m.matrix(&phi).inverse())
        .collect::<Result<_>>()?;
    let mut grad = vec![0.0; nvars];
    for (map, inv) in maps.iter().zip(&inverses) {
        for (&pos, entries) in &map.by_var {
            if pos == 0 {
                continue;
            }
            let mut v = 0.0;
            for &(i, j, c) in entries {
                v += c * inv.at(i, j) * if i == j { 1.0 } else { 2.0 };
            }
            grad[pos - 1] -= v;
        }
    }
    let gradient_norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
    if gradient_norm > opts.tol {
        return Err(Error::NoConvergence {
            iterations,
            gradient_norm,
            tol: opts.tol,
        });
    }

    let moments = MomentSequence::from_values(
        spec.dim,
        2 * spec.degree,
        phi.clone(),
        Provenance::Custom,
    );
    let gram_matrices = maps
        .iter()
        .zip(&inverses)
        .map(|(m, inv)| (m.label.clone(), inv.clone()))
        .collect();
    Ok(SolveReport {
        dim: spec.dim,
        degree: spec.degree,
        moments,
        objective,
        gradient_norm,
        iterations,
        objective_trace: trace,
        gram_matrices,
    })
}

fn evaluate(maps: &[GeneratorMap], phi: &[f64]) -> Option<f64> {
    let mut obj = 0.0;
    for map in maps {
        obj -= map.matrix(phi).ldl().ok()?.log_det();
    }
    obj.is_finite().then_some(obj)
}

/// `H[a][b] = Σ_g tr(M_g^{-1} A_a M_g^{-1} A_b)` over the slice variables,
/// where `A_p = ∂M_g/∂φ_p` is sparse.
fn assemble_hessian(
    maps: &[GeneratorMap],
    inverses: &[SymMatrix<f64>],
    nvars: usize,
) -> SymMatrix<f64> {
    let mut h = SymMatrix::from_fn(nvars, |_, _| 0.0);
    for (map, inv) in maps.iter().zip(inverses) {
        let m = map.size;
        let vars: Vec<usize> = map.by_var.keys().copied().filter(|&p| p > 0).collect();
        for &a in &vars {
            // W_a = M^{-1} A_a M^{-1}, dense symmetric
            let mut w = vec![0.0; m * m];
            for &(i, j, c) in &map.by_var[&a] {
                for r in 0..m {
                    let inv_ri = *inv.at(r, i);
                    let inv_rj = *inv.at(r, j);
                    for s in 0..m {
                        let mut v = c * inv_ri * *inv.at(j, s);
                        if i != j {
                            v += c * inv_rj * *inv.at(i, s);
                        }
                        w[r * m + s] += v;
                    }
                }
            }
            for &b in &vars {
                if b < a {
                    continue;
                }
                let mut v = 0.0;
                for &(i, j, c) in &map.by_var[&b] {
                    v += c * w[i * m + j] * if i == j { 1.0 } else { 2.0 };
                }
                let cur = *h.at(a - 1, b - 1);
                h.set(a - 1, b - 1, cur + v);
            }
        }
    }
    h
}

/// `Q*_g` per generator (the dual Gram matrices), as computed at the
/// optimum.
pub fn dual_extract(report: &SolveReport) -> &[(String, SymMatrix<f64>)] {
    &report.gram_matrices
}

/// Max over the samples of `|Σ_g g(x)·v(x)ᵀQ*_g v(x) − Σ_g s(n-t_g)|`:
/// how far the dual certificate is from the exact partition of unity.
pub fn partition_residual(
    spec: &ProblemSpec,
    report: &SolveReport,
    samples: &[Vec<f64>],
) -> f64 {
    let maps = GeneratorMap::build(spec, &enumerate_basis(spec.dim, 2 * spec.degree));
    let total_size: f64 = maps.iter().map(|m| m.size as f64).sum();
    let mut worst: f64 = 0.0;
    for x in samples {
        let mut lhs = 0.0;
        for (map, (_, q)) in maps.iter().zip(&report.gram_matrices) {
            let v = monomial_vector(&map.basis, x);
            lhs += map.poly.eval(x) * q.quadratic_form(&v, &v);
        }
        worst = worst.max((lhs - total_size).abs());
    }
    worst
}

/// Largest deviation of the solved moments from the exact equilibrium
/// moments of the domain, over all orders up to `2n`.
pub fn equilibrium_deviation(report: &SolveReport, domain: Domain) -> f64 {
    let exact = equilibrium_moments(domain, report.dim, 2 * report.degree).to_f64();
    report
        .moments
        .basis()
        .iter()
        .map(|alpha| (report.moments.value(alpha) - exact.value(alpha)).abs())
        .fold(0.0, f64::max)
}
