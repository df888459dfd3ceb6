//! Closed-form kernel evaluation: Gegenbauer/Chebyshev recurrences, the
//! spherical addition formula lifted to the ball, and the cube's
//! divided-difference kernel. Float-only; serves as an independent oracle
//! against the moment-matrix path, never as the exact verifier.

use crate::error::{Error, Result};
use crate::measures::{equilibrium_moments, MomentSequence};
use crate::momentmat::KernelEvaluator;
use crate::multiindex::enumerate_basis;
use crate::polyring::{make_generators, Domain, Polynomial};
use crate::scalar::Scalar;
use std::fmt;

/// Chebyshev polynomial of the first kind via the three-term recurrence.
pub fn chebyshev_t(n: u32, t: f64) -> f64 {
    recurrence(n, t, 1.0, t)
}

/// Chebyshev polynomial of the second kind.
pub fn chebyshev_u(n: u32, t: f64) -> f64 {
    recurrence(n, t, 1.0, 2.0 * t)
}

fn recurrence(n: u32, t: f64, p0: f64, p1: f64) -> f64 {
    match n {
        0 => p0,
        1 => p1,
        _ => {
            let (mut prev, mut cur) = (p0, p1);
            for _ in 1..n {
                (prev, cur) = (cur, 2.0 * t * cur - prev);
            }
            cur
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebKind {
    First,
    Second,
    /// `T̂_0 = 1`, `T̂_n = √2·T_n` for `n ≥ 1`: orthonormal for the
    /// arcsine probability measure.
    FirstNormalized,
}

impl fmt::Display for ChebKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChebKind::First => "T",
            ChebKind::Second => "U",
            ChebKind::FirstNormalized => "T-normalized",
        })
    }
}

impl std::str::FromStr for ChebKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(ChebKind::First),
            "U" => Ok(ChebKind::Second),
            "T-normalized" => Ok(ChebKind::FirstNormalized),
            other => Err(Error::InvalidArgument(format!(
                "unknown Chebyshev kind `{other}` (expected T, U or T-normalized)"
            ))),
        }
    }
}

pub fn chebyshev(kind: ChebKind, n: u32, t: f64) -> f64 {
    match kind {
        ChebKind::First => chebyshev_t(n, t),
        ChebKind::Second => chebyshev_u(n, t),
        ChebKind::FirstNormalized => {
            if n == 0 {
                1.0
            } else {
                std::f64::consts::SQRT_2 * chebyshev_t(n, t)
            }
        }
    }
}

/// Gegenbauer polynomial `C_n^λ(t)` for `λ ≥ 0` by the three-term
/// recurrence `(n+1)C_{n+1} = 2(n+λ)t·C_n − (n+2λ−1)C_{n−1}`. Note that
/// `C_n^0 ≡ 0` for `n ≥ 1`; the meaningful `λ → 0` limit lives in [`zn`].
pub fn gegenbauer(lambda: f64, n: u32, t: f64) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::NegativeParameter(lambda));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, 2.0 * lambda * t);
    for k in 1..n as u64 {
        let k = k as f64;
        let next = (2.0 * (k + lambda) * t * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
        (prev, cur) = (cur, next);
    }
    Ok(cur)
}

/// `Z_n^λ(t) = ((n+λ)/λ)·C_n^λ(t)`, with the `λ → 0` limit `Z_n^0 = 2T_n`
/// for `n ≥ 1` and `Z_0^0 = 1`.
pub fn zn(lambda: f64, n: u32, t: f64) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::NegativeParameter(lambda));
    }
    if lambda == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 2.0 * chebyshev_t(n, t) });
    }
    Ok((n as f64 + lambda) / lambda * gegenbauer(lambda, n, t)?)
}

/// Degree-`n` reproducing kernel of the sphere `S^d`, evaluated through the
/// lifted points `X = (x, √(1-|x|²))`, `Y = (y, √(1-|y|²))`:
/// `Z_n^{(d-1)/2}(⟨X,Y⟩)`. Equals the sum of the two ball kernels of degree
/// `n` (weight exponent −1/2) and `n−1` (weight exponent +1/2).
pub fn ball_addition_kernel(d: usize, n: u32, x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), d, "point dimension mismatch");
    assert_eq!(y.len(), d, "point dimension mismatch");
    let inner = lifted_inner_product(x, y)?;
    zn((d as f64 - 1.0) / 2.0, n, inner)
}

fn lifted_inner_product(x: &[f64], y: &[f64]) -> Result<f64> {
    let nx: f64 = x.iter().map(|v| v * v).sum();
    let ny: f64 = y.iter().map(|v| v * v).sum();
    // tolerate boundary round-off
    if nx > 1.0 + 1e-12 || ny > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain);
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    Ok(dot + ((1.0 - nx).max(0.0) * (1.0 - ny).max(0.0)).sqrt())
}

/// A function a divided difference can be taken of: values everywhere, and
/// derivatives when the knots coalesce (polynomials provide them, plain
/// callables do not).
pub trait SmoothFn {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64, order: usize) -> Option<f64>;
}

impl SmoothFn for Polynomial<f64> {
    fn value(&self, x: f64) -> f64 {
        self.eval(&[x])
    }

    fn derivative(&self, x: f64, order: usize) -> Option<f64> {
        let mut p = self.clone();
        for _ in 0..order {
            p = p.differentiate(0);
        }
        Some(p.eval(&[x]))
    }
}

/// Value-only adapter for closures; confluent knots will be rejected.
pub struct ValueOnly<F: Fn(f64) -> f64>(pub F);

impl<F: Fn(f64) -> f64> SmoothFn for ValueOnly<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
    fn derivative(&self, _x: f64, _order: usize) -> Option<f64> {
        None
    }
}

/// Knot set for a divided difference; repeats are allowed and knots closer
/// than the confluence threshold are merged to avoid catastrophic
/// cancellation.
#[derive(Debug, Clone)]
pub struct DividedDiffTable {
    knots: Vec<f64>,
}

pub const CONFLUENCE_THRESHOLD: f64 = 1e-7;

impl DividedDiffTable {
    pub fn new(knots: Vec<f64>) -> Self {
        assert!(!knots.is_empty(), "divided difference needs a knot");
        DividedDiffTable { knots }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knots sorted with near-equal values promoted to exact confluence.
    fn promoted(&self) -> Vec<f64> {
        let mut sorted = self.knots.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let mut rep = sorted[0];
        for v in sorted.iter_mut() {
            if (*v - rep).abs() < CONFLUENCE_THRESHOLD {
                *v = rep;
            } else {
                rep = *v;
            }
        }
        sorted
    }
}

/// `[x_0,…,x_m]f` with Hermite-style handling of confluent knots: a block
/// of `k+1` equal knots contributes `f^{(k)}(x)/k!`.
pub fn divided_difference(table: &DividedDiffTable, f: &dyn SmoothFn) -> Result<f64> {
    let knots = table.promoted();
    let m = knots.len();
    // column 0 holds f[x_i]; widen one level at a time
    let mut col: Vec<f64> = knots.iter().map(|&x| f.value(x)).collect();
    let mut factorial = 1.0;
    for width in 1..m {
        factorial *= width as f64;
        let mut next = Vec::with_capacity(m - width);
        for i in 0..m - width {
            let (lo, hi) = (knots[i], knots[i + width]);
            if lo == hi {
                let deriv = f
                    .derivative(lo, width)
                    .ok_or(Error::ConfluentDerivative { order: width })?;
                next.push(deriv / factorial);
            } else {
                next.push((col[i + 1] - col[i]) / (hi - lo));
            }
        }
        col = next;
    }
    Ok(col[0])
}

/// Division-free divided difference of a univariate polynomial:
/// `[x_0,…,x_k] u^m = h_{m-k}(x_0,…,x_k)` (complete homogeneous symmetric
/// sum), so nearly-coalescing knots cost no precision. Agrees with the
/// recursive form for every knot configuration, confluent ones included.
pub fn divided_difference_poly(knots: &[f64], p: &Polynomial<f64>) -> f64 {
    assert!(!knots.is_empty(), "divided difference needs a knot");
    let k = knots.len() - 1;
    let deg = p.degree().max(0) as usize;
    if p.is_zero() || deg < k {
        return 0.0;
    }
    let jmax = deg - k;
    let mut h = vec![0.0; jmax + 1];
    h[0] = 1.0;
    for &x in knots {
        for j in 1..=jmax {
            h[j] += x * h[j - 1];
        }
    }
    let mut acc = 0.0;
    for (alpha, &c) in p.terms() {
        let m = alpha.degree() as usize;
        if m >= k {
            acc += c * h[m - k];
        }
    }
    acc
}

/// The polynomial `H_{n,d}(u)` whose divided difference over the knots
/// `cos θ_i` reproduces the lattice exponential sum, for `n ≥ 1`:
/// `±2(1-u²)^{(d-1)/2} T_n(u)` for odd `d`, `∓2(1-u²)^{d/2} U_{n-1}(u)` for
/// even `d`.
pub fn h_poly(n: u32, d: usize) -> Polynomial<f64> {
    assert!(n >= 1, "the printed n = 0 form is not a polynomial");
    let sign = if ((d - 1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    let one_minus_u2 = Polynomial::from_terms(
        1,
        vec![
            (crate::multiindex::MultiIndex::new(vec![0]), 1.0),
            (crate::multiindex::MultiIndex::new(vec![2]), -1.0),
        ],
    );
    let mut p;
    let power;
    if d % 2 == 1 {
        p = chebyshev_poly_t(n).scale(&(2.0 * sign));
        power = (d - 1) / 2;
    } else {
        p = chebyshev_poly_u(n - 1).scale(&(-2.0 * sign));
        power = d / 2;
    }
    for _ in 0..power {
        p = p.mul(&one_minus_u2);
    }
    p
}

fn chebyshev_poly_t(n: u32) -> Polynomial<f64> {
    chebyshev_poly(n, 1.0)
}

fn chebyshev_poly_u(n: u32) -> Polynomial<f64> {
    chebyshev_poly(n, 2.0)
}

/// T (lead1 = 1) or U (lead1 = 2) polynomials with exact integer
/// coefficients in `f64`.
fn chebyshev_poly(n: u32, lead1: f64) -> Polynomial<f64> {
    let u = crate::multiindex::MultiIndex::new(vec![1]);
    let two_u = Polynomial::monomial(u.clone(), 2.0);
    let mut prev = Polynomial::one(1);
    let mut cur = Polynomial::monomial(u, lead1);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = two_u.mul(&cur).sub(&prev);
        (prev, cur) = (cur, next);
    }
    cur
}

/// The printed `n = 0` divided-difference integrand. Not a polynomial in
/// `u`; kept only to flag where it disagrees with the lattice count.
fn h0_printed(d: usize) -> impl Fn(f64) -> f64 {
    let sign = if ((d - 1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
    move |u: f64| {
        let theta = u.clamp(-1.0, 1.0).acos();
        let half = theta / 2.0;
        let parity = if d % 2 == 0 { half.cos() } else { half.sin() };
        2.0 * sign * theta.sin().powi(d as i32 - 1) * half.cos() * parity
    }
}

/// Both evaluations of `Σ_{|k|=n, k∈ℤ^d} cos(k·(θ-φ))`.
#[derive(Debug, Clone)]
pub struct CubeKernelSum {
    /// Direct lattice sum; authoritative.
    pub direct: f64,
    /// Divided-difference route `[cos ψ_1,…,cos ψ_d] H_{n,d}`; `None` when
    /// the `n = 0` printed form needs a derivative it cannot provide.
    pub divided_difference: Option<f64>,
    pub deviation: Option<f64>,
    /// Set when the printed `n = 0` form evaluates but disagrees with the
    /// lattice count.
    pub printed_n0_mismatch: bool,
}

/// Evaluate the cube kernel sum two ways at angle vectors `θ, φ ∈ [0,π]^d`.
pub fn cube_kernel_sum(d: usize, n: u32, theta: &[f64], phi: &[f64]) -> CubeKernelSum {
    assert_eq!(theta.len(), d, "angle dimension mismatch");
    assert_eq!(phi.len(), d, "angle dimension mismatch");
    let psi: Vec<f64> = theta.iter().zip(phi).map(|(a, b)| a - b).collect();
    let direct = lattice_cosine_sum(d, n, &psi);
    let knots: Vec<f64> = psi.iter().map(|v| v.cos()).collect();
    let dd = if n >= 1 {
        Some(divided_difference_poly(&knots, &h_poly(n, d)))
    } else {
        divided_difference(&DividedDiffTable::new(knots), &ValueOnly(h0_printed(d))).ok()
    };
    let deviation = dd.map(|v| (v - direct).abs());
    let printed_n0_mismatch = n == 0 && deviation.map(|e| e > 1e-9).unwrap_or(false);
    CubeKernelSum {
        direct,
        divided_difference: dd,
        deviation,
        printed_n0_mismatch,
    }
}

/// `Σ_{|k|=n, k∈ℤ^d} cos(k·ψ)` by explicit enumeration of compositions and
/// sign patterns.
fn lattice_cosine_sum(d: usize, n: u32, psi: &[f64]) -> f64 {
    let mut total = 0.0;
    for alpha in enumerate_basis(d, n).iter() {
        if alpha.degree() != n {
            continue;
        }
        let nonzero: Vec<usize> = (0..d).filter(|&i| alpha.exponents()[i] > 0).collect();
        for mask in 0u32..(1 << nonzero.len()) {
            let mut arg = 0.0;
            for (bit, &i) in nonzero.iter().enumerate() {
                let sign = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
                arg += sign * alpha.exponents()[i] as f64 * psi[i];
            }
            total += arg.cos();
        }
    }
    total
}

/// Closed-form vs moment-matrix comparison at sampled point pairs.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub domain: Domain,
    pub d: usize,
    pub n: u32,
    pub samples: usize,
    pub max_abs_deviation: f64,
}

/// Compare the closed-form kernel against the float moment-matrix kernel at
/// `count` deterministic interior point pairs; reports the worst absolute
/// deviation.
pub fn cross_check(domain: Domain, d: usize, n: u32, count: usize) -> Result<CrossCheckReport> {
    let xs = crate::pell::interior_samples(domain, d, count, 0x5eed_11);
    let ys = crate::pell::interior_samples(domain, d, count, 0x5eed_12);
    let path = MomentKernelPath::new(domain, d, n)?;
    let mut max_dev: f64 = 0.0;
    for (xq, yq) in xs.iter().zip(&ys) {
        let x: Vec<f64> = xq.iter().map(|v| v.to_f64()).collect();
        let y: Vec<f64> = yq.iter().map(|v| v.to_f64()).collect();
        let closed = closed_form_kernel(domain, d, n, &x, &y)?;
        let moment = path.eval(&x, &y);
        max_dev = max_dev.max((closed - moment).abs());
    }
    Ok(CrossCheckReport {
        domain,
        d,
        n,
        samples: count,
        max_abs_deviation: max_dev,
    })
}

/// The closed-form side: spherical addition formula for the ball, the same
/// formula through the folding `x ↦ x²` for the simplex (at sphere degree
/// `2n`), and the direct lattice sum for the cube.
pub fn closed_form_kernel(domain: Domain, d: usize, n: u32, x: &[f64], y: &[f64]) -> Result<f64> {
    match domain {
        Domain::Ball => ball_addition_kernel(d, n, x, y),
        Domain::Simplex => {
            let lift = |p: &[f64]| -> Result<Vec<f64>> {
                let total: f64 = p.iter().sum();
                if total > 1.0 + 1e-12 || p.iter().any(|&v| v < -1e-15) {
                    return Err(Error::OutsideDomain);
                }
                let mut out: Vec<f64> = p.iter().map(|&v| v.max(0.0).sqrt()).collect();
                out.push((1.0 - total).max(0.0).sqrt());
                Ok(out)
            };
            let bx = lift(x)?;
            let by = lift(y)?;
            let dot: f64 = bx.iter().zip(&by).map(|(a, b)| a * b).sum();
            zn((d as f64 - 1.0) / 2.0, 2 * n, dot)
        }
        Domain::Cube => {
            let to_angles = |p: &[f64]| -> Result<Vec<f64>> {
                p.iter()
                    .map(|&v| {
                        if v.abs() > 1.0 + 1e-12 {
                            Err(Error::OutsideDomain)
                        } else {
                            Ok(v.clamp(-1.0, 1.0).acos())
                        }
                    })
                    .collect()
            };
            let theta = to_angles(x)?;
            let phi = to_angles(y)?;
            Ok(cube_kernel_sum(d, n, &theta, &phi).direct)
        }
    }
}

/// The moment-matrix side of the cross-check: per-generator degree-level
/// kernels with the appropriate square-root weights.
pub struct MomentKernelPath {
    domain: Domain,
    // per generator: ε, upper and (optional) lower kernel evaluators
    parts: Vec<(Vec<u8>, KernelEvaluator<f64>, Option<KernelEvaluator<f64>>)>,
}

impl MomentKernelPath {
    pub fn new(domain: Domain, d: usize, n: u32) -> Result<Self> {
        let phi: MomentSequence<f64> = equilibrium_moments(domain, d, 2 * n).convert();
        let mut parts = Vec::new();
        for g in make_generators(domain, d, n).iter() {
            let localized = phi.localize(&g.poly.to_f64())?;
            let level = n - g.half_degree;
            let upper = KernelEvaluator::new(&localized, level)?;
            let lower = if level > 0 {
                Some(KernelEvaluator::new(&localized, level - 1)?)
            } else {
                None
            };
            parts.push((g.epsilon.clone(), upper, lower));
        }
        Ok(MomentKernelPath { domain, parts })
    }

    /// `Σ_g w_g(x,y)·P^{g·μ}_{n-t_g}(x,y)` where `w_g` is the square-root
    /// weight of the addition formula for the domain.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut total = 0.0;
        for (eps, upper, lower) in &self.parts {
            let p_level = upper.eval(x, y)
                - lower.as_ref().map(|k| k.eval(x, y)).unwrap_or(0.0);
            total += self.weight(eps, x, y) * p_level;
        }
        total
    }

    fn weight(&self, eps: &[u8], x: &[f64], y: &[f64]) -> f64 {
        match self.domain {
            Domain::Ball => {
                if eps == [1] {
                    let nx: f64 = x.iter().map(|v| v * v).sum();
                    let ny: f64 = y.iter().map(|v| v * v).sum();
                    ((1.0 - nx).max(0.0) * (1.0 - ny).max(0.0)).sqrt()
                } else {
                    1.0
                }
            }
            Domain::Cube => eps
                .iter()
                .enumerate()
                .map(|(j, &e)| {
                    if e == 1 {
                        ((1.0 - x[j] * x[j]).max(0.0) * (1.0 - y[j] * y[j]).max(0.0)).sqrt()
                    } else {
                        1.0
                    }
                })
                .product(),
            Domain::Simplex => {
                let d = x.len();
                let ext = |p: &[f64], i: usize| {
                    if i < d {
                        p[i]
                    } else {
                        (1.0 - p.iter().sum::<f64>()).max(0.0)
                    }
                };
                eps.iter()
                    .enumerate()
                    .map(|(i, &e)| {
                        if e == 1 {
                            (ext(x, i).max(0.0) * ext(y, i).max(0.0)).sqrt()
                        } else {
                            1.0
                        }
                    })
                    .product()
            }
        }
    }
}
