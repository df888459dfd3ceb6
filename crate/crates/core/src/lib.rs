//! Orthogonal-polynomial structures for the equilibrium measures of the unit
//! ball, simplex and cube: exact moment and localizing matrices, Christoffel
//! polynomials, generalized Pell identity verification, closed-form kernel
//! oracles, and the associated log-det optimization pair.

pub mod closedform;
pub mod error;
pub mod logdet;
pub mod measures;
pub mod momentmat;
pub mod multiindex;
pub mod pell;
pub mod polyring;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use measures::{equilibrium_moments, uniform_moments, MomentSequence, Provenance};
pub use momentmat::{
    cd_kernel_eval, christoffel_poly, kernel_level_poly, localizing_matrix, moment_matrix,
    LdlFactors, SymMatrix,
};
pub use multiindex::{
    binomial, cube_lattice_count, dim_orthogonal_space, enumerate_basis, s, GradedBasis,
    MultiIndex,
};
pub use polyring::{
    ball_generator, cube_truncated_generators, make_generators, Domain, Generator, GeneratorSet,
    Polynomial,
};
pub use scalar::{parse_rational, Rational, Scalar};
