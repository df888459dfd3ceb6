//! Assembly and verification of the generalized Pell identities on the
//! ball, simplex and cube: the weighted sum of Christoffel (or degree-level
//! kernel) polynomials over the generator family collapses to an integer
//! constant, exactly.

use crate::error::{Error, Result};
use crate::measures::{equilibrium_moments, MomentSequence};
use crate::momentmat::{christoffel_poly, kernel_level_poly};
use crate::multiindex::{binomial, cube_lattice_count};
use crate::polyring::{make_generators, Domain, Polynomial};
use crate::scalar::{Rational, Scalar};
use num_traits::Signed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Which identity is checked: the Christoffel level sums whole kernels
/// `K_{n-t_g}(x,x)`, the kernel level sums single degree levels
/// `P_{n-t_g}(x,x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Christoffel,
    Kernel,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Christoffel => "christoffel",
            Level::Kernel => "kernel",
        })
    }
}

impl std::str::FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "christoffel" => Ok(Level::Christoffel),
            "kernel" => Ok(Level::Kernel),
            other => Err(Error::InvalidArgument(format!(
                "unknown level `{other}` (expected christoffel or kernel)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode `{other}` (expected exact or float)"
            ))),
        }
    }
}

/// Relative tolerance for float-mode verification: well above double
/// precision LDL error at these matrix sizes, far below any identity
/// violation.
pub const FLOAT_TOLERANCE: f64 = 1e-8;

/// Outcome of one identity check.
#[derive(Debug, Clone)]
pub struct PellReport {
    pub domain: Domain,
    pub d: usize,
    pub n: u32,
    pub level: Level,
    pub mode: Mode,
    pub constant: u64,
    /// Largest absolute coefficient of the residual polynomial; `"0"`
    /// exactly when the identity holds in exact mode.
    pub residual_max_abs_coeff: String,
    /// The same residual as a float, for tolerance comparisons.
    pub residual: f64,
    /// Un-normalized masses `(g·μ)₀` per generator.
    pub per_generator_masses: Vec<(String, String)>,
    pub verified: bool,
}

/// Right-hand side of the Christoffel-level identity.
pub fn pell_constant(domain: Domain, d: usize, n: u32) -> u64 {
    let (d, n) = (d as i64, n as i64);
    match domain {
        Domain::Ball => binomial(d + n, d) + binomial(d + n - 1, d),
        Domain::Simplex => binomial(2 * n + d, d),
        Domain::Cube => (0..=d)
            .map(|j| binomial(d, j) * binomial(d + n - j, d))
            .sum(),
    }
}

/// Right-hand side of the degree-level kernel identity. On the simplex the
/// level `m` stands for even total degree `2m`; on the cube the constant is
/// the lattice count `M_{m,d}`.
pub fn kernel_constant(domain: Domain, d: usize, m: u32) -> u64 {
    let (di, mi) = (d as i64, m as i64);
    match domain {
        Domain::Ball => binomial(di + mi - 1, di - 1) + binomial(di + mi - 2, di - 1),
        Domain::Simplex => binomial(2 * mi + di - 1, di - 1) + binomial(2 * mi + di - 2, di - 1),
        Domain::Cube => cube_lattice_count(m, d),
    }
}

/// The identity's left-hand side `Σ_g g(x)·Λ^{g·μ}_{n-t_g}(x)^{-1}`
/// (Christoffel level) or `Σ_g g(x)·P^{g·μ}_{n-t_g}(x,x)` (kernel level),
/// plus the masses `(g·μ)₀`. All measures are localizations of the
/// probability equilibrium measure and are deliberately not renormalized.
fn assemble_in<C: Scalar>(
    domain: Domain,
    d: usize,
    n: u32,
    level: Level,
) -> Result<(Polynomial<C>, Vec<(String, C)>)> {
    let generators = make_generators(domain, d, n);
    let phi: MomentSequence<C> = equilibrium_moments(domain, d, 2 * n).convert();
    let mut total = Polynomial::zero(d);
    let mut masses = Vec::with_capacity(generators.len());
    for g in generators.iter() {
        let g_poly = g.poly.map(C::from_rational);
        let localized = phi.localize(&g_poly)?;
        masses.push((g.label.clone(), localized.mass().clone()));
        let sub_level = n - g.half_degree;
        let lambda = match level {
            Level::Christoffel => christoffel_poly(&localized, sub_level)?,
            Level::Kernel => kernel_level_poly(&localized, sub_level)?,
        };
        total = total.add(&g_poly.mul(&lambda));
    }
    Ok((total, masses))
}

/// Exact assembly of the identity's left-hand side.
pub fn assemble_pell_poly(
    domain: Domain,
    d: usize,
    n: u32,
    level: Level,
) -> Result<Polynomial<Rational>> {
    Ok(assemble_in::<Rational>(domain, d, n, level)?.0)
}

/// Verify one identity: subtract the expected constant from the assembled
/// polynomial and inspect the residual. A failed identity is a report, not
/// an error.
pub fn verify_pell(
    domain: Domain,
    d: usize,
    n: u32,
    level: Level,
    mode: Mode,
) -> Result<PellReport> {
    let constant = match level {
        Level::Christoffel => pell_constant(domain, d, n),
        Level::Kernel => kernel_constant(domain, d, n),
    };
    match mode {
        Mode::Exact => {
            let (sum, masses) = assemble_in::<Rational>(domain, d, n, level)?;
            let residual_poly =
                sum.sub(&Polynomial::constant(d, Rational::from_int(constant as i64)));
            let max_abs = residual_poly
                .terms()
                .map(|(_, c)| c.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            Ok(PellReport {
                domain,
                d,
                n,
                level,
                mode,
                constant,
                residual_max_abs_coeff: max_abs.render(),
                residual: max_abs.to_f64(),
                per_generator_masses: masses.into_iter().map(|(l, m)| (l, m.render())).collect(),
                verified: residual_poly.is_zero(),
            })
        }
        Mode::Float => {
            let (sum, masses) = assemble_in::<f64>(domain, d, n, level)?;
            let residual_poly = sum.sub(&Polynomial::constant(d, constant as f64));
            let residual = residual_poly.max_abs_coeff();
            Ok(PellReport {
                domain,
                d,
                n,
                level,
                mode,
                constant,
                residual_max_abs_coeff: format!("{residual:e}"),
                residual,
                per_generator_masses: masses.into_iter().map(|(l, m)| (l, m.render())).collect(),
                verified: residual <= FLOAT_TOLERANCE * constant as f64,
            })
        }
    }
}

/// Outcome of the boundary-minimum check of the Christoffel function.
#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub domain: Domain,
    pub d: usize,
    pub n: u32,
    /// `γ_n`, the exact maximum of `Λ_n^{-1}` on the domain.
    pub gamma: u64,
    /// Rendered boundary samples; each satisfies `Λ_n^{-1} = γ_n` exactly
    /// when `verified` holds.
    pub boundary_points: Vec<Vec<String>>,
    pub interior_points: usize,
    /// Largest interior value of `Λ_n^{-1}` seen, rendered exactly.
    pub interior_max: String,
    pub verified: bool,
}

const INTERIOR_SEED: u64 = 0x5eed_01;
const BOUNDARY_SEED: u64 = 0x5eed_02;

/// Check that `Λ_n^{-1}` equals `γ_n` exactly at the given boundary samples
/// and stays `≤ γ_n` at 50 deterministic interior rational points.
///
/// A valid boundary sample is a common zero of every non-unit generator in
/// `G_n`: the whole sphere for the ball, the vertex set for the simplex and
/// the corner set for the cube (the locus where the identity pins the
/// value).
pub fn boundary_minimum_check(
    domain: Domain,
    d: usize,
    n: u32,
    samples: &[Vec<Rational>],
) -> Result<BoundaryReport> {
    let generators = make_generators(domain, d, n);
    for x in samples {
        if x.len() != d {
            return Err(Error::InvalidArgument(format!(
                "boundary sample has dimension {}, expected {d}",
                x.len()
            )));
        }
        for g in generators.iter().skip(1) {
            let v = g.poly.eval(x);
            if !v.is_zero() {
                return Err(Error::NotOnBoundary {
                    label: g.label.clone(),
                    value: v.render(),
                });
            }
        }
    }
    let gamma = pell_constant(domain, d, n);
    let gamma_q = Rational::from_int(gamma as i64);
    let phi = equilibrium_moments(domain, d, 2 * n);
    let lambda_inv = christoffel_poly(&phi, n)?;

    let mut verified = true;
    let mut boundary_points = Vec::with_capacity(samples.len());
    for x in samples {
        if lambda_inv.eval(x) != gamma_q {
            verified = false;
        }
        boundary_points.push(x.iter().map(|c| c.render()).collect());
    }

    let interior = interior_samples(domain, d, 50, INTERIOR_SEED);
    let mut interior_max = Rational::zero();
    for x in &interior {
        let v = lambda_inv.eval(x);
        if v > gamma_q {
            verified = false;
        }
        if v > interior_max {
            interior_max = v;
        }
    }

    Ok(BoundaryReport {
        domain,
        d,
        n,
        gamma,
        boundary_points,
        interior_points: interior.len(),
        interior_max: interior_max.render(),
        verified,
    })
}

/// Deterministic rational points where every non-unit generator of `G_n`
/// vanishes: rational sphere points for the ball (stereographic
/// parametrization), the `d+1` vertices for the simplex, the `2^d` corners
/// for the cube. When the locus is finite and smaller than `count`, the
/// points repeat cyclically.
pub fn boundary_samples(domain: Domain, d: usize, count: usize) -> Vec<Vec<Rational>> {
    match domain {
        Domain::Ball => {
            if d == 1 {
                return (0..count)
                    .map(|k| vec![Rational::from_int(if k % 2 == 0 { 1 } else { -1 })])
                    .collect();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(BOUNDARY_SEED);
            let mut out: Vec<Vec<Rational>> = Vec::new();
            while out.len() < count {
                // x = (2a, |a|²-1)/(|a|²+1) lies on the unit sphere for a ∈ ℚ^{d-1}
                let a: Vec<Rational> = (0..d - 1)
                    .map(|_| {
                        Rational::from_ratio(rng.random_range(-8..=8), rng.random_range(1..=8))
                    })
                    .collect();
                let norm2 = a.iter().fold(Rational::zero(), |acc, v| acc.add(&v.mul(v)));
                let denom = norm2.add(&Rational::from_int(1));
                let mut x: Vec<Rational> = a
                    .iter()
                    .map(|v| v.mul(&Rational::from_int(2)).div(&denom))
                    .collect();
                x.push(norm2.sub(&Rational::from_int(1)).div(&denom));
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            out
        }
        Domain::Simplex => {
            let mut vertices = vec![vec![Rational::zero(); d]];
            for i in 0..d {
                let mut v = vec![Rational::zero(); d];
                v[i] = Rational::one();
                vertices.push(v);
            }
            cycle(vertices, count)
        }
        Domain::Cube => {
            let corners: Vec<Vec<Rational>> = (0u32..(1 << d))
                .map(|mask| {
                    (0..d)
                        .map(|i| Rational::from_int(if mask >> i & 1 == 1 { 1 } else { -1 }))
                        .collect()
                })
                .collect();
            cycle(corners, count)
        }
    }
}

fn cycle(points: Vec<Vec<Rational>>, count: usize) -> Vec<Vec<Rational>> {
    (0..count).map(|k| points[k % points.len()].clone()).collect()
}

/// Deterministic rational points in the interior of the domain.
pub fn interior_samples(domain: Domain, d: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<Rational> = match domain {
            Domain::Cube | Domain::Ball => (0..d)
                .map(|_| Rational::from_ratio(rng.random_range(-15..=15), 16))
                .collect(),
            Domain::Simplex => (0..d)
                .map(|_| Rational::from_ratio(rng.random_range(1..=15), 16))
                .collect(),
        };
        let ok = match domain {
            Domain::Cube => true,
            Domain::Ball => {
                x.iter().fold(Rational::zero(), |acc, v| acc.add(&v.mul(v))) < Rational::one()
            }
            Domain::Simplex => {
                x.iter().fold(Rational::zero(), |acc, v| acc.add(v)) < Rational::one()
            }
        };
        if ok {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    #[test]
    fn pell_constants_match_worked_examples() {
        assert_eq!(pell_constant(Domain::Ball, 2, 2), 9);
        assert_eq!(pell_constant(Domain::Simplex, 2, 3), 28); // (n+1)(2n+1)
        assert_eq!(pell_constant(Domain::Cube, 2, 3), 25); // 1+2n(n+1)
        for n in 0..=5u32 {
            assert_eq!(pell_constant(Domain::Ball, 2, n), ((n + 1) * (n + 1)) as u64);
            assert_eq!(
                pell_constant(Domain::Simplex, 2, n) as u32,
                (n + 1) * (2 * n + 1)
            );
            assert_eq!(pell_constant(Domain::Cube, 2, n) as u32, 1 + 2 * n * (n + 1));
        }
    }

    #[test]
    fn kernel_constants() {
        assert_eq!(kernel_constant(Domain::Ball, 2, 3), 7); // 2m+1
        assert_eq!(kernel_constant(Domain::Cube, 2, 2), 8); // lattice count
        assert_eq!(kernel_constant(Domain::Ball, 1, 5), 2); // T and U levels
        assert_eq!(kernel_constant(Domain::Ball, 1, 0), 1);
        assert_eq!(kernel_constant(Domain::Simplex, 2, 0), 1);
    }

    #[test]
    fn constants_telescope() {
        // Σ_{m≤n} kernel_constant = pell_constant on every domain
        for domain in Domain::ALL {
            for d in 1..=4usize {
                for n in 0..=6u32 {
                    let summed: u64 = (0..=n).map(|m| kernel_constant(domain, d, m)).sum();
                    assert_eq!(summed, pell_constant(domain, d, n), "{domain} d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn univariate_constants_are_2n_plus_1() {
        for n in 0..=8u32 {
            for domain in Domain::ALL {
                assert_eq!(pell_constant(domain, 1, n) as u32, 2 * n + 1, "{domain}");
            }
        }
    }

    #[test]
    fn assemble_ball_d2_n1() {
        // (1+3x1²+3x2²) + (1-x1²-x2²)·3 = 4
        let p = assemble_pell_poly(Domain::Ball, 2, 1, Level::Christoffel).unwrap();
        assert_eq!(p.render(), "4");
    }

    #[test]
    fn assemble_cube_d1_n1() {
        // (1+2x²) + (1-x²)·2 = 3 = s(1)+s(0)
        let p = assemble_pell_poly(Domain::Cube, 1, 1, Level::Christoffel).unwrap();
        assert_eq!(p.render(), "3");
    }

    #[test]
    fn assemble_degree_zero_gives_mass() {
        for domain in Domain::ALL {
            let p = assemble_pell_poly(domain, 2, 0, Level::Christoffel).unwrap();
            assert_eq!(p.render(), "1", "{domain}");
        }
    }

    #[test]
    fn verify_examples_exact() {
        let r = verify_pell(Domain::Ball, 2, 1, Level::Christoffel, Mode::Exact).unwrap();
        assert!(r.verified);
        assert_eq!(r.residual_max_abs_coeff, "0");
        assert_eq!(r.constant, 4);

        let r = verify_pell(Domain::Simplex, 1, 1, Level::Christoffel, Mode::Exact).unwrap();
        assert!(r.verified);
        assert_eq!(r.constant, 3);

        let r = verify_pell(Domain::Cube, 2, 2, Level::Christoffel, Mode::Exact).unwrap();
        assert!(r.verified);
        assert_eq!(r.constant, 13);
    }

    #[test]
    fn verify_small_grid_exact_both_levels() {
        for domain in Domain::ALL {
            for d in 1..=2usize {
                for n in 0..=3u32 {
                    for level in [Level::Christoffel, Level::Kernel] {
                        let r = verify_pell(domain, d, n, level, Mode::Exact).unwrap();
                        assert!(
                            r.verified,
                            "{domain} d={d} n={n} {level}: residual {}",
                            r.residual_max_abs_coeff
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn verify_float_mode() {
        let r = verify_pell(Domain::Ball, 2, 3, Level::Christoffel, Mode::Float).unwrap();
        assert!(r.verified, "residual {}", r.residual);
        assert!(r.residual <= FLOAT_TOLERANCE * r.constant as f64);
    }

    #[test]
    fn masses_are_unrenormalized() {
        let r = verify_pell(Domain::Ball, 2, 1, Level::Christoffel, Mode::Exact).unwrap();
        assert_eq!(r.per_generator_masses[0], ("1".to_string(), "1".to_string()));
        assert_eq!(r.per_generator_masses[1].1, "1/3");
    }

    #[test]
    fn boundary_check_ball() {
        let samples = boundary_samples(Domain::Ball, 2, 6);
        let report = boundary_minimum_check(Domain::Ball, 2, 1, &samples).unwrap();
        assert!(report.verified);
        assert_eq!(report.gamma, 4);
    }

    #[test]
    fn boundary_check_cube_and_simplex_vertices() {
        let report =
            boundary_minimum_check(Domain::Cube, 1, 1, &boundary_samples(Domain::Cube, 1, 2))
                .unwrap();
        assert!(report.verified);
        assert_eq!(report.gamma, 3);

        let report = boundary_minimum_check(
            Domain::Simplex,
            2,
            2,
            &boundary_samples(Domain::Simplex, 2, 3),
        )
        .unwrap();
        assert!(report.verified, "interior max {}", report.interior_max);
    }

    #[test]
    fn boundary_check_rejects_interior_point() {
        let err = boundary_minimum_check(Domain::Ball, 2, 1, &[vec![q("0"), q("0")]]);
        assert!(matches!(err, Err(Error::NotOnBoundary { .. })));
    }

    #[test]
    fn ball_center_stays_below_gamma() {
        let phi = equilibrium_moments(Domain::Ball, 2, 2);
        let p = christoffel_poly(&phi, 1).unwrap();
        assert_eq!(p.eval(&[q("0"), q("0")]), q("1"));
        assert_eq!(p.eval(&[q("1"), q("0")]), q("4"));
    }

    #[test]
    fn boundary_samples_lie_on_sphere() {
        for d in 1..=3usize {
            for x in boundary_samples(Domain::Ball, d, 10) {
                let norm2 = x.iter().fold(Rational::zero(), |acc, v| acc.add(&v.mul(v)));
                assert_eq!(norm2, Rational::one());
            }
        }
    }
}
