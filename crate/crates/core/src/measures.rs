//! Exact moment sequences of the equilibrium measures of the ball, simplex
//! and cube, their uniform companions used to seed the solver, and the
//! localizing transformation `φ ↦ g·φ`.
//!
//! Every Gamma-function ratio is reduced symbolically through the
//! half-integer recursion `Γ(z+1) = zΓ(z)`, so exact mode never touches a
//! floating-point Gamma. Powers of `√π` are tracked alongside the rational
//! part and must cancel by the time a moment is produced.

use crate::error::{Error, Result};
use crate::multiindex::{enumerate_basis, GradedBasis, MultiIndex};
use crate::polyring::{Domain, Polynomial};
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;

/// `Γ(numerator/2)` as a rational multiple of an integer power of `√π`.
#[derive(Debug, Clone, PartialEq)]
struct HalfGamma {
    q: Rational,
    sqrt_pi_pow: i32,
}

impl HalfGamma {
    /// `Γ(n/2)` for `n >= 1`: integer arguments give factorials, half-integer
    /// arguments give `√π · (2k)! / (4^k k!)`.
    fn gamma(n: u64) -> Self {
        assert!(n >= 1, "gamma argument must be positive");
        if n % 2 == 0 {
            let k = n / 2; // Γ(k) = (k-1)!
            HalfGamma {
                q: Rational::from_integer(factorial(k - 1)),
                sqrt_pi_pow: 0,
            }
        } else {
            let k = (n - 1) / 2; // Γ(k + 1/2) = √π (2k)!/(4^k k!)
            let num = factorial(2 * k);
            let den = BigInt::from(4u32).pow(k as u32) * factorial(k);
            HalfGamma {
                q: Rational::new(num, den),
                sqrt_pi_pow: 1,
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        HalfGamma {
            q: &self.q * &other.q,
            sqrt_pi_pow: self.sqrt_pi_pow + other.sqrt_pi_pow,
        }
    }

    fn div(&self, other: &Self) -> Self {
        HalfGamma {
            q: &self.q / &other.q,
            sqrt_pi_pow: self.sqrt_pi_pow - other.sqrt_pi_pow,
        }
    }

    /// Collapse to a plain rational; all `√π` factors must have cancelled.
    fn into_rational(self) -> Rational {
        assert_eq!(self.sqrt_pi_pow, 0, "uncancelled power of sqrt(pi)");
        self.q
    }
}

fn factorial(k: u64) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 2..=k {
        acc *= i;
    }
    acc
}

/// Where a moment sequence came from; localized sequences remember the
/// generator label and their parent.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Equilibrium(Domain),
    Uniform(Domain),
    Localized { label: String, parent: Box<Provenance> },
    Custom,
}

/// A linear functional on polynomials of degree up to `order`, given by its
/// values on the monomial basis. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MomentSequence<C: Scalar> {
    dim: usize,
    order: u32,
    basis: GradedBasis,
    values: Vec<C>,
    provenance: Provenance,
}

impl<C: Scalar> MomentSequence<C> {
    pub fn from_values(dim: usize, order: u32, values: Vec<C>, provenance: Provenance) -> Self {
        let basis = enumerate_basis(dim, order);
        assert_eq!(values.len(), basis.len(), "moment vector length mismatch");
        MomentSequence {
            dim,
            order,
            basis,
            values,
            provenance,
        }
    }

    pub fn from_fn(
        dim: usize,
        order: u32,
        provenance: Provenance,
        f: impl Fn(&MultiIndex) -> C,
    ) -> Self {
        let basis = enumerate_basis(dim, order);
        let values = basis.iter().map(&f).collect();
        MomentSequence {
            dim,
            order,
            basis,
            values,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest total degree with a defined moment.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    /// Moment at `alpha`; panics above `order`, which callers rule out via
    /// the `OrderExhausted` checks on the public operations.
    pub fn value(&self, alpha: &MultiIndex) -> &C {
        let pos = self
            .basis
            .position(alpha)
            .unwrap_or_else(|| panic!("moment {alpha} beyond order {}", self.order));
        &self.values[pos]
    }

    /// Total mass `φ₀`.
    pub fn mass(&self) -> &C {
        &self.values[0]
    }

    /// Apply the functional to a polynomial: `φ(p) = Σ p_α φ_α`.
    pub fn riesz(&self, p: &Polynomial<C>) -> Result<C> {
        let deg = p.degree();
        if deg > self.order as i64 {
            return Err(Error::OrderExhausted {
                need: deg as u32,
                have: self.order,
            });
        }
        let mut acc = C::zero();
        for (alpha, c) in p.terms() {
            acc = acc.add(&c.mul(self.value(alpha)));
        }
        Ok(acc)
    }

    /// `g·φ`, defined by `(g·φ)_α = Σ_β g_β φ_{α+β}`, of order
    /// `order − deg(g)`. The result is deliberately not renormalized.
    pub fn localize(&self, g: &Polynomial<C>) -> Result<MomentSequence<C>> {
        assert_eq!(g.dim(), self.dim, "generator dimension mismatch");
        let deg_g = g.degree();
        if deg_g < 0 {
            return Err(Error::InvalidArgument(
                "cannot localize by the zero polynomial".into(),
            ));
        }
        if deg_g as u32 > self.order {
            return Err(Error::OrderExhausted {
                need: deg_g as u32,
                have: self.order,
            });
        }
        let new_order = self.order - deg_g as u32;
        let basis = enumerate_basis(self.dim, new_order);
        let values = basis
            .iter()
            .map(|alpha| {
                let mut acc = C::zero();
                for (beta, gb) in g.terms() {
                    acc = acc.add(&gb.mul(self.value(&alpha.sum(beta))));
                }
                acc
            })
            .collect();
        Ok(MomentSequence {
            dim: self.dim,
            order: new_order,
            basis,
            values,
            provenance: Provenance::Localized {
                label: g.render(),
                parent: Box::new(self.provenance.clone()),
            },
        })
    }

    /// Multiply every moment by `gamma > 0`.
    pub fn scale(&self, gamma: &C) -> Result<MomentSequence<C>> {
        if !gamma.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        Ok(MomentSequence {
            dim: self.dim,
            order: self.order,
            basis: self.basis.clone(),
            values: self.values.iter().map(|v| v.mul(gamma)).collect(),
            provenance: self.provenance.clone(),
        })
    }

    /// Restriction to a smaller order.
    pub fn truncate(&self, order: u32) -> Result<MomentSequence<C>> {
        if order > self.order {
            return Err(Error::OrderExhausted {
                need: order,
                have: self.order,
            });
        }
        let basis = enumerate_basis(self.dim, order);
        let values = basis.iter().map(|a| self.value(a).clone()).collect();
        Ok(MomentSequence {
            dim: self.dim,
            order,
            basis,
            values,
            provenance: self.provenance.clone(),
        })
    }
}

impl MomentSequence<Rational> {
    pub fn to_f64(&self) -> MomentSequence<f64> {
        self.convert()
    }

    /// Re-express the exact sequence in another scalar kind.
    pub fn convert<C: Scalar>(&self) -> MomentSequence<C> {
        MomentSequence {
            dim: self.dim,
            order: self.order,
            basis: self.basis.clone(),
            values: self.values.iter().map(C::from_rational).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Exact moments of the probability-normalized equilibrium measure of the
/// given domain, defined for all `|α| ≤ order`.
///
/// * ball: density `c_{-1/2} (1-|x|^2)^{-1/2}` on `B^d`;
/// * simplex: density `c (x_1 ⋯ x_d (1-|x|))^{-1/2}` on `Δ^d`;
/// * cube: product of univariate arcsine densities `(1/π)(1-x^2)^{-1/2}`.
pub fn equilibrium_moments(domain: Domain, dim: usize, order: u32) -> MomentSequence<Rational> {
    assert!(dim >= 1, "dimension must be >= 1");
    MomentSequence::from_fn(dim, order, Provenance::Equilibrium(domain), |alpha| {
        equilibrium_moment(domain, dim, alpha)
    })
}

fn equilibrium_moment(domain: Domain, dim: usize, alpha: &MultiIndex) -> Rational {
    match domain {
        Domain::Cube => alpha
            .exponents()
            .iter()
            .map(|&k| arcsine_moment(k))
            .fold(Rational::one(), |acc, m| acc * m),
        Domain::Ball => {
            if alpha.exponents().iter().any(|&k| k % 2 == 1) {
                return Rational::zero();
            }
            // μ_{2β} = Γ((d+1)/2) Π Γ(β_i+1/2) / (π^{d/2} Γ(|β|+(d+1)/2))
            let betas: Vec<u64> = alpha.exponents().iter().map(|&k| (k / 2) as u64).collect();
            let total: u64 = betas.iter().sum();
            let d = dim as u64;
            let mut acc = HalfGamma::gamma(d + 1); // Γ((d+1)/2)
            for &b in &betas {
                acc = acc.mul(&HalfGamma::gamma(2 * b + 1)); // Γ(β+1/2)
            }
            acc = acc.div(&HalfGamma::gamma(2 * total + d + 1)); // Γ(|β|+(d+1)/2)
            // π^{d/2} = (√π)^d
            acc.sqrt_pi_pow -= d as i32;
            acc.into_rational()
        }
        Domain::Simplex => {
            // Dirichlet(1/2,...,1/2): μ_α = Π Γ(α_i+1/2)/Γ(1/2) · Γ((d+1)/2)/Γ(|α|+(d+1)/2)
            let d = dim as u64;
            let total: u64 = alpha.exponents().iter().map(|&k| k as u64).sum();
            let mut acc = HalfGamma::gamma(d + 1);
            for &k in alpha.exponents() {
                acc = acc.mul(&HalfGamma::gamma(2 * k as u64 + 1));
                acc = acc.div(&HalfGamma::gamma(1));
            }
            acc = acc.div(&HalfGamma::gamma(2 * total + d + 1));
            acc.into_rational()
        }
    }
}

/// `(1/π) ∫_{-1}^{1} x^k (1-x^2)^{-1/2} dx`: zero for odd `k`,
/// `binom(2j,j)/4^j` for `k = 2j`.
fn arcsine_moment(k: u32) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    // Γ(j+1/2) Γ(1/2) / (π Γ(j+1)), with Γ(1/2)/π = 1/Γ(1/2)
    let j = (k / 2) as u64;
    HalfGamma::gamma(2 * j + 1)
        .div(&HalfGamma::gamma(1))
        .div(&HalfGamma::gamma(2 * j + 2))
        .into_rational()
}

/// Exact moments of the uniform probability measure on the domain; strictly
/// feasible initializer for the log-det solver.
pub fn uniform_moments(domain: Domain, dim: usize, order: u32) -> MomentSequence<Rational> {
    assert!(dim >= 1, "dimension must be >= 1");
    MomentSequence::from_fn(dim, order, Provenance::Uniform(domain), |alpha| {
        uniform_moment(domain, dim, alpha)
    })
}

fn uniform_moment(domain: Domain, dim: usize, alpha: &MultiIndex) -> Rational {
    match domain {
        Domain::Cube => alpha.exponents().iter().fold(Rational::one(), |acc, &k| {
            if k % 2 == 1 {
                Rational::zero()
            } else {
                acc * Rational::from_ratio(1, k as i64 + 1)
            }
        }),
        Domain::Ball => {
            if alpha.exponents().iter().any(|&k| k % 2 == 1) {
                return Rational::zero();
            }
            let betas: Vec<u64> = alpha.exponents().iter().map(|&k| (k / 2) as u64).collect();
            let total: u64 = betas.iter().sum();
            let d = dim as u64;
            // Γ(d/2+1) Π Γ(β_i+1/2) / (π^{d/2} Γ(|β|+d/2+1)) · Γ(1) cancels
            let mut acc = HalfGamma::gamma(d + 2);
            for &b in &betas {
                acc = acc.mul(&HalfGamma::gamma(2 * b + 1));
            }
            acc = acc.div(&HalfGamma::gamma(2 * total + d + 2));
            acc.sqrt_pi_pow -= d as i32;
            acc.into_rational()
        }
        Domain::Simplex => {
            // Dirichlet(1,...,1): μ_α = d! Π α_i! / (d+|α|)!
            let total: u64 = alpha.exponents().iter().map(|&k| k as u64).sum();
            let mut num = factorial(dim as u64);
            for &k in alpha.exponents() {
                num *= factorial(k as u64);
            }
            Rational::new(num, factorial(dim as u64 + total))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::ball_generator;
    use crate::scalar::parse_rational;
    use num_traits::One;

    fn q(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    #[test]
    fn half_gamma_values() {
        // Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(5/2) = 3√π/4, Γ(3) = 2
        assert_eq!(HalfGamma::gamma(1).q, q("1"));
        assert_eq!(HalfGamma::gamma(3).q, q("1/2"));
        assert_eq!(HalfGamma::gamma(5).q, q("3/4"));
        assert_eq!(HalfGamma::gamma(6), HalfGamma { q: q("2"), sqrt_pi_pow: 0 });
        assert_eq!(HalfGamma::gamma(1).sqrt_pi_pow, 1);
    }

    #[test]
    fn cube_univariate_moments() {
        // Beta oracle: (1/π)∫ x^{2k}(1-x²)^{-1/2} dx = binom(2k,k)/4^k
        let phi = equilibrium_moments(Domain::Cube, 1, 4);
        assert_eq!(*phi.value(&MultiIndex::new(vec![0])), q("1"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![1])), q("0"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![2])), q("1/2"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![4])), q("3/8"));
    }

    #[test]
    fn ball_bivariate_moments() {
        // polar Beta oracle: (1/2π)∫cos²θ dθ ∫ r³(1-r²)^{-1/2} dr · c = 1/3
        let phi = equilibrium_moments(Domain::Ball, 2, 2);
        assert_eq!(*phi.value(&MultiIndex::new(vec![0, 0])), q("1"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![1, 0])), q("0"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![2, 0])), q("1/3"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![1, 1])), q("0"));
    }

    #[test]
    fn simplex_univariate_moments() {
        // Gamma-ratio oracle Γ(k+1/2)Γ(1/2)/(π Γ(k+1)) ⇒ binom(2k,k)/4^k
        let phi = equilibrium_moments(Domain::Simplex, 1, 2);
        assert_eq!(*phi.value(&MultiIndex::new(vec![1])), q("1/2"));
        assert_eq!(*phi.value(&MultiIndex::new(vec![2])), q("3/8"));
    }

    #[test]
    fn mass_is_one_for_all_domains() {
        for domain in Domain::ALL {
            for d in 1..=4 {
                let phi = equilibrium_moments(domain, d, 2);
                assert!(phi.mass().is_one(), "{domain} d={d}");
                let uni = uniform_moments(domain, d, 2);
                assert!(uni.mass().is_one(), "uniform {domain} d={d}");
            }
        }
    }

    #[test]
    fn odd_symmetry_zeroes() {
        let ball = equilibrium_moments(Domain::Ball, 3, 5);
        let cube = equilibrium_moments(Domain::Cube, 3, 5);
        for alpha in ball.basis().iter() {
            if alpha.exponents().iter().any(|&k| k % 2 == 1) {
                assert!(ball.value(alpha).is_zero(), "ball {alpha}");
                assert!(cube.value(alpha).is_zero(), "cube {alpha}");
            }
        }
    }

    #[test]
    fn localize_ball_by_its_generator() {
        let phi = equilibrium_moments(Domain::Ball, 2, 2);
        let g = ball_generator(2);
        let gphi = phi.localize(&g).unwrap();
        // (g·φ)_0 = 1 - 1/3 - 1/3 = 1/3, and the order drops by deg g
        assert_eq!(*gphi.mass(), q("1/3"));
        assert_eq!(gphi.order(), 0);
    }

    #[test]
    fn localize_cube_by_one_minus_x2() {
        let phi = equilibrium_moments(Domain::Cube, 1, 4);
        let g = Polynomial::from_terms(
            1,
            vec![
                (MultiIndex::new(vec![0]), q("1")),
                (MultiIndex::new(vec![2]), q("-1")),
            ],
        );
        let gphi = phi.localize(&g).unwrap();
        // second-kind Chebyshev moment oracle: (1/π)∫x^{2k}(1-x²)^{1/2}dx
        assert_eq!(*gphi.value(&MultiIndex::new(vec![0])), q("1/2"));
        assert_eq!(*gphi.value(&MultiIndex::new(vec![2])), q("1/8"));
    }

    #[test]
    fn localize_by_unit_is_identity() {
        let phi = equilibrium_moments(Domain::Simplex, 2, 3);
        let gphi = phi.localize(&Polynomial::one(2)).unwrap();
        assert_eq!(phi.values(), gphi.values());
    }

    #[test]
    fn localize_order_exhausted() {
        let phi = equilibrium_moments(Domain::Ball, 2, 1);
        let err = phi.localize(&ball_generator(2)).unwrap_err();
        assert!(matches!(err, Error::OrderExhausted { need: 2, have: 1 }));
    }

    #[test]
    fn scaling_moments() {
        let phi = equilibrium_moments(Domain::Cube, 1, 2);
        let doubled = phi.scale(&q("2")).unwrap();
        assert_eq!(*doubled.mass(), q("2"));
        assert_eq!(*doubled.value(&MultiIndex::new(vec![2])), q("1"));
        let third = equilibrium_moments(Domain::Ball, 2, 2)
            .scale(&q("1/3"))
            .unwrap();
        assert_eq!(*third.value(&MultiIndex::new(vec![2, 0])), q("1/9"));
        assert!(phi.scale(&q("0")).is_err());
        assert!(phi.scale(&q("-1")).is_err());
    }

    #[test]
    fn localization_composes() {
        // localize(localize(φ,g1),g2) = localize(φ, g1·g2) exactly
        let phi = equilibrium_moments(Domain::Cube, 2, 8);
        let g1 = Polynomial::from_terms(
            2,
            vec![
                (MultiIndex::zero(2), q("1")),
                (MultiIndex::new(vec![2, 0]), q("-1")),
            ],
        );
        let g2 = Polynomial::from_terms(
            2,
            vec![
                (MultiIndex::zero(2), q("1")),
                (MultiIndex::new(vec![0, 2]), q("-1")),
            ],
        );
        let a = phi.localize(&g1).unwrap().localize(&g2).unwrap();
        let b = phi.localize(&g1.mul(&g2)).unwrap();
        assert_eq!(a.order(), b.order());
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn ball_and_simplex_moments_fold() {
        // folding x ↦ x²: ball moment at 2β equals simplex moment at β
        for d in 1..=3 {
            let ball = equilibrium_moments(Domain::Ball, d, 8);
            let simplex = equilibrium_moments(Domain::Simplex, d, 4);
            for alpha in simplex.basis().iter() {
                let doubled =
                    MultiIndex::new(alpha.exponents().iter().map(|&k| 2 * k).collect());
                assert_eq!(ball.value(&doubled), simplex.value(alpha));
            }
        }
    }
}
