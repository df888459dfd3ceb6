//! Multi-index combinatorics: graded-lex enumeration of monomial exponents,
//! dimension counts and the lattice-count constants of the cube identities.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Exponent vector in `ℕ^d`.
///
/// Ordered by total degree first, ties broken lexicographically with `x1`
/// weighted heaviest, so that `(1,0) < (0,1)` and `(2,0) < (1,1) < (0,2)`.
/// This is the one monomial order used everywhere; matrix row/column indices
/// are reproducible because of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index needs dimension >= 1");
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex::new(vec![0; dim])
    }

    /// The i-th coordinate exponent vector `e_i` scaled by `k`.
    pub fn axis(dim: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; dim];
        e[i] = k;
        MultiIndex::new(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|α| = Σ αᵢ`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn sum(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim(), "multi-index dimension mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            // within a degree block: larger exponent on the earliest variable
            // sorts first, i.e. reversed vector comparison
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of total degree `<= degree` in `dim` variables, listed
/// in graded-lex order, together with a position lookup.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    dim: usize,
    degree: u32,
    order: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.order.iter()
    }

    pub fn at(&self, i: usize) -> &MultiIndex {
        &self.order[i]
    }

    /// Position of `alpha` in the graded-lex listing, if `|alpha| <= degree`.
    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }
}

/// Enumerate `{α ∈ ℕ^d : |α| ≤ n}` in graded-lex order.
///
/// The result has exactly `s(n, d) = binom(d+n, d)` elements.
pub fn enumerate_basis(dim: usize, degree: u32) -> GradedBasis {
    assert!(dim >= 1, "dimension must be >= 1");
    let mut order = Vec::with_capacity(s(degree, dim) as usize);
    let mut scratch = vec![0u32; dim];
    for deg in 0..=degree {
        push_block(&mut order, &mut scratch, 0, deg);
    }
    let position = order
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect();
    GradedBasis {
        dim,
        degree,
        order,
        position,
    }
}

fn push_block(out: &mut Vec<MultiIndex>, scratch: &mut Vec<u32>, coord: usize, remaining: u32) {
    if coord + 1 == scratch.len() {
        scratch[coord] = remaining;
        out.push(MultiIndex::new(scratch.clone()));
        return;
    }
    // largest exponent on the current variable first
    for e in (0..=remaining).rev() {
        scratch[coord] = e;
        push_block(out, scratch, coord + 1, remaining - e);
    }
}

/// Binomial coefficient in exact integer arithmetic; `0` whenever the top
/// argument is negative or smaller than the bottom.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // prefix products of consecutive integers stay divisible
        acc = acc * (n - i) / (i + 1);
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// `s(n) = binom(d+n, d)`, the number of monomials of degree at most `n`.
pub fn s(n: u32, d: usize) -> u64 {
    binomial(d as i64 + n as i64, d as i64)
}

/// Dimension of the space of orthogonal polynomials of exact degree `n`,
/// `binom(n+d-1, n)`.
pub fn dim_orthogonal_space(n: u32, d: usize) -> u64 {
    binomial(n as i64 + d as i64 - 1, n as i64)
}

/// `M_{n,d} = #{k ∈ ℤ^d : Σ|kᵢ| = n}` through the closed binomial formula
/// `Σ_j binom(d,j)·[binom(d+n-j,d) − binom(d+n-1-j,d)]`.
pub fn cube_lattice_count(n: u32, d: usize) -> u64 {
    let (n, d) = (n as i64, d as i64);
    let mut total: i128 = 0;
    for j in 0..=d {
        let inner = binomial(d + n - j, d) as i128 - binomial(d + n - 1 - j, d) as i128;
        total += binomial(d, j) as i128 * inner;
    }
    u64::try_from(total).expect("lattice count is nonnegative")
}
