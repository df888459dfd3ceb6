//! Moment and localizing matrices over the graded basis, square-root-free
//! LDL factorization, and the Christoffel / kernel polynomials obtained from
//! the matrix inverse.
//!
//! Orthonormal polynomial bases are never materialized: everything is
//! expressed through quadratic forms in `M^{-1}`, which keeps the exact path
//! entirely inside the rationals.

use crate::error::{Error, Result};
use crate::measures::MomentSequence;
use crate::multiindex::{enumerate_basis, GradedBasis};
use crate::polyring::Polynomial;
use crate::scalar::Scalar;

/// Dense symmetric matrix; the lower triangle is stored once, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<C: Scalar> {
    size: usize,
    data: Vec<C>,
}

impl<C: Scalar> SymMatrix<C> {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(size * (size + 1) / 2);
        for i in 0..size {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        SymMatrix { size, data }
    }

    pub fn identity(size: usize) -> Self {
        SymMatrix::from_fn(size, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        debug_assert!(j <= i);
        i * (i + 1) / 2 + j
    }

    pub fn at(&self, i: usize, j: usize) -> &C {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        &self.data[Self::idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        self.data[Self::idx(i, j)] = v;
    }

    /// Largest absolute entry, used for the float pivot tolerance.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// `x' M y`.
    pub fn quadratic_form(&self, x: &[C], y: &[C]) -> C {
        assert_eq!(x.len(), self.size);
        assert_eq!(y.len(), self.size);
        let mut acc = C::zero();
        for i in 0..self.size {
            for j in 0..self.size {
                acc = acc.add(&x[i].mul(self.at(i, j)).mul(&y[j]));
            }
        }
        acc
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> SymMatrix<D> {
        SymMatrix {
            size: self.size,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Square-root-free factorization `M = L·D·Lᵀ` with unit lower-triangular
    /// `L`. Exact kinds use an exact sign test on the pivots; the float kind
    /// rejects pivots below `1e-12·max|M|`.
    pub fn ldl(&self) -> Result<LdlFactors<C>> {
        let n = self.size;
        let tol = if C::EXACT { 0.0 } else { 1e-12 * self.max_abs() };
        let mut l = vec![C::zero(); n * (n + 1) / 2];
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.at(i, j).clone();
                for k in 0..j {
                    let term = l[Self::idx(i, k)].mul(&l[Self::idx(j, k)]).mul(&d[k]);
                    sum = sum.sub(&term);
                }
                if i == j {
                    let ok = if C::EXACT {
                        sum.is_positive()
                    } else {
                        sum.to_f64() > tol
                    };
                    if !ok {
                        return Err(Error::NotPositiveDefinite { index: i });
                    }
                    l[Self::idx(i, i)] = C::one();
                    d.push(sum);
                } else {
                    l[Self::idx(i, j)] = sum.div(&d[j]);
                }
            }
        }
        Ok(LdlFactors { size: n, l, d })
    }

    /// Inverse through `size` LDL solves against unit vectors.
    pub fn inverse(&self) -> Result<SymMatrix<C>> {
        let f = self.ldl()?;
        let n = self.size;
        let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![C::zero(); n];
            e[j] = C::one();
            cols.push(f.solve(&e));
        }
        Ok(SymMatrix::from_fn(n, |i, j| cols[j][i].clone()))
    }
}

/// The factors of `M = L·D·Lᵀ`; all diagonal entries are positive exactly
/// when `M` is positive definite.
#[derive(Debug, Clone)]
pub struct LdlFactors<C: Scalar> {
    size: usize,
    l: Vec<C>,
    d: Vec<C>,
}

impl<C: Scalar> LdlFactors<C> {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diagonal(&self) -> &[C] {
        &self.d
    }

    pub fn lower(&self, i: usize, j: usize) -> &C {
        assert!(j <= i);
        &self.l[SymMatrix::<C>::idx(i, j)]
    }

    /// Solve `M x = b`.
    pub fn solve(&self, b: &[C]) -> Vec<C> {
        let n = self.size;
        assert_eq!(b.len(), n);
        // forward: L y = b
        let mut y: Vec<C> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = b[i].clone();
            for k in 0..i {
                v = v.sub(&self.l[SymMatrix::<C>::idx(i, k)].mul(&y[k]));
            }
            y.push(v);
        }
        // diagonal, then backward: Lᵀ x = D^{-1} y
        for (i, v) in y.iter_mut().enumerate() {
            *v = v.div(&self.d[i]);
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let t = self.l[SymMatrix::<C>::idx(k, i)].mul(&y[k]);
                y[i] = y[i].sub(&t);
            }
        }
        y
    }

    /// Sum of `log d_i`; only meaningful for the float kind.
    pub fn log_det(&self) -> f64 {
        self.d.iter().map(|v| v.to_f64().ln()).sum()
    }

    /// Rebuild `L·D·Lᵀ` (test support).
    pub fn reconstruct(&self) -> SymMatrix<C> {
        let n = self.size;
        SymMatrix::from_fn(n, |i, j| {
            let mut acc = C::zero();
            for k in 0..=j.min(i) {
                acc = acc.add(
                    &self.l[SymMatrix::<C>::idx(i, k)]
                        .mul(&self.l[SymMatrix::<C>::idx(j, k)])
                        .mul(&self.d[k]),
                );
            }
            acc
        })
    }
}

/// `M_n(φ)` with entries `φ_{α+β}` over the graded basis of degree `n`.
pub fn moment_matrix<C: Scalar>(phi: &MomentSequence<C>, n: u32) -> Result<SymMatrix<C>> {
    if phi.order() < 2 * n {
        return Err(Error::OrderExhausted {
            need: 2 * n,
            have: phi.order(),
        });
    }
    let basis = enumerate_basis(phi.dim(), n);
    Ok(SymMatrix::from_fn(basis.len(), |i, j| {
        phi.value(&basis.at(i).sum(basis.at(j))).clone()
    }))
}

/// The localizing matrix `M_{n-t_g}(g·φ)`.
pub fn localizing_matrix<C: Scalar>(
    phi: &MomentSequence<C>,
    g: &Polynomial<C>,
    n: u32,
) -> Result<SymMatrix<C>> {
    let t_g = (g.degree().max(0) as u32).div_ceil(2);
    if n < t_g {
        return Err(Error::OrderExhausted { need: t_g, have: n });
    }
    moment_matrix(&phi.localize(g)?, n - t_g)
}

/// The polynomial `x ↦ v_n(x)ᵀ M_n(φ)^{-1} v_n(x)`, i.e. the reciprocal of
/// the Christoffel function, expanded in the monomial basis.
pub fn christoffel_poly<C: Scalar>(phi: &MomentSequence<C>, n: u32) -> Result<Polynomial<C>> {
    let basis = enumerate_basis(phi.dim(), n);
    let inv = moment_matrix(phi, n)?.inverse()?;
    Ok(expand_quadratic_form(&inv, &basis))
}

/// Expand `Σ_{i,j} A_{ij} x^{α_i + α_j}` into a polynomial.
fn expand_quadratic_form<C: Scalar>(a: &SymMatrix<C>, basis: &GradedBasis) -> Polynomial<C> {
    let mut p = Polynomial::zero(basis.dim());
    for i in 0..basis.len() {
        for j in 0..=i {
            let c = if i == j {
                a.at(i, j).clone()
            } else {
                let v = a.at(i, j);
                v.add(v)
            };
            p.add_term(basis.at(i).sum(basis.at(j)), c);
        }
    }
    p
}

/// The degree-level kernel polynomial `P_m(x,x)`, computed as the difference
/// of consecutive Christoffel polynomials; `m = 0` gives `K_0(x,x)`.
pub fn kernel_level_poly<C: Scalar>(phi: &MomentSequence<C>, m: u32) -> Result<Polynomial<C>> {
    let top = christoffel_poly(phi, m)?;
    if m == 0 {
        return Ok(top);
    }
    Ok(top.sub(&christoffel_poly(phi, m - 1)?))
}

/// Monomial vector `v_n(x)` over the graded basis.
pub fn monomial_vector<C: Scalar>(basis: &GradedBasis, x: &[C]) -> Vec<C> {
    basis
        .iter()
        .map(|alpha| {
            let mut term = C::one();
            for (xi, &e) in x.iter().zip(alpha.exponents()) {
                for _ in 0..e {
                    term = term.mul(xi);
                }
            }
            term
        })
        .collect()
}

/// Factored form of `K_n`, reusable across many evaluation points.
pub struct KernelEvaluator<C: Scalar> {
    basis: GradedBasis,
    factors: LdlFactors<C>,
}

impl<C: Scalar> KernelEvaluator<C> {
    pub fn new(phi: &MomentSequence<C>, n: u32) -> Result<Self> {
        let basis = enumerate_basis(phi.dim(), n);
        let factors = moment_matrix(phi, n)?.ldl()?;
        Ok(KernelEvaluator { basis, factors })
    }

    /// `K_n(x,y) = v_n(x)ᵀ M_n(φ)^{-1} v_n(y)`.
    pub fn eval(&self, x: &[C], y: &[C]) -> C {
        assert_eq!(x.len(), self.basis.dim(), "point dimension mismatch");
        assert_eq!(y.len(), self.basis.dim(), "point dimension mismatch");
        let vy = monomial_vector(&self.basis, y);
        let z = self.factors.solve(&vy);
        let vx = monomial_vector(&self.basis, x);
        let mut acc = C::zero();
        for (a, b) in vx.iter().zip(&z) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }
}

/// Christoffel-Darboux kernel value `K_n(x,y) = v_n(x)ᵀ M_n(φ)^{-1} v_n(y)`.
pub fn cd_kernel_eval<C: Scalar>(phi: &MomentSequence<C>, n: u32, x: &[C], y: &[C]) -> Result<C> {
    Ok(KernelEvaluator::new(phi, n)?.eval(x, y))
}
