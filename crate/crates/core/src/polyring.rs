//! Sparse multivariate polynomials over a [`Scalar`] kind, and the domain
//! generator polynomials `g_ε` for the ball, simplex and cube.

use crate::error::Error;
use crate::multiindex::MultiIndex;
use crate::scalar::{Rational, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial; only nonzero coefficients are stored and term keys are
/// kept in graded-lex order by the map itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C: Scalar> {
    dim: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        let mut p = Polynomial::zero(dim);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(dim), c);
        }
        p
    }

    pub fn one(dim: usize) -> Self {
        Polynomial::constant(dim, C::one())
    }

    pub fn monomial(alpha: MultiIndex, c: C) -> Self {
        let mut p = Polynomial::zero(alpha.dim());
        if !c.is_zero() {
            p.terms.insert(alpha, c);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut p = Polynomial::zero(dim);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, with `-1` as the zero-polynomial sentinel.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|a| a.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: C) {
        assert_eq!(alpha.dim(), self.dim, "term dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.sum(b), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.clone(), v.mul(c)))
                .collect(),
        }
    }

    /// Direct term-by-term evaluation; exact in the rational kind.
    pub fn eval(&self, x: &[C]) -> C {
        assert_eq!(x.len(), self.dim, "evaluation point dimension mismatch");
        let mut acc = C::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &e) in x.iter().zip(alpha.exponents()) {
                for _ in 0..e {
                    term = term.mul(xi);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Largest absolute coefficient as `f64`, `0` for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Partial derivative with respect to variable `var` (0-based).
    pub fn differentiate(&self, var: usize) -> Self {
        assert!(var < self.dim, "variable index out of range");
        let mut out = Polynomial::zero(self.dim);
        for (alpha, c) in &self.terms {
            let e = alpha.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = alpha.exponents().to_vec();
            exps[var] = e - 1;
            out.add_term(MultiIndex::new(exps), c.mul(&C::from_int(e as i64)));
        }
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter_map(|(a, c)| {
                    let d = f(c);
                    (!d.is_zero()).then(|| (a.clone(), d))
                })
                .collect(),
        }
    }

    /// Canonical text form, e.g. `1 + 3*x1^2 + 3*x2^2`, terms in graded-lex
    /// order with rational coefficients rendered `p/q`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (alpha, c)) in self.terms.iter().enumerate() {
            let coeff = c.render();
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    out.push_str("-");
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let vars: Vec<String> = alpha
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl Polynomial<Rational> {
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(|c| c.to_f64())
    }
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The three regular domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Ball,
    Simplex,
    Cube,
}

impl Domain {
    pub const ALL: [Domain; 3] = [Domain::Ball, Domain::Simplex, Domain::Cube];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Ball => "ball",
            Domain::Simplex => "simplex",
            Domain::Cube => "cube",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ball" => Ok(Domain::Ball),
            "simplex" => Ok(Domain::Simplex),
            "cube" => Ok(Domain::Cube),
            other => Err(Error::UnknownDomain(other.to_string())),
        }
    }
}

/// One generator `g` with its half-degree `t_g = ⌈deg(g)/2⌉` and, for the
/// built-in families, the selector pattern `ε` it came from.
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub poly: Polynomial<Rational>,
    pub half_degree: u32,
    /// `ε ∈ {0,1}^k`: `k = d` for the cube, `d+1` for the simplex, `1` for
    /// the ball; empty for custom generators.
    pub epsilon: Vec<u8>,
}

impl Generator {
    fn new(label: impl Into<String>, poly: Polynomial<Rational>) -> Self {
        Generator::with_epsilon(label, poly, Vec::new())
    }

    fn with_epsilon(label: impl Into<String>, poly: Polynomial<Rational>, epsilon: Vec<u8>) -> Self {
        let deg = poly.degree().max(0) as u32;
        Generator {
            label: label.into(),
            poly,
            half_degree: deg.div_ceil(2),
            epsilon,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.poly.degree() == 0 && self.poly.coeff(&MultiIndex::zero(self.poly.dim())) == Rational::one()
    }
}

/// A truncated generator family `G_n`; always contains the unit generator.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub domain: Option<Domain>,
    pub dim: usize,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn custom(dim: usize, named: Vec<(String, Polynomial<Rational>)>) -> Self {
        let mut generators = vec![Generator::new("1", Polynomial::one(dim))];
        for (label, poly) in named {
            let g = Generator::new(label, poly);
            if !g.is_unit() {
                generators.push(g);
            }
        }
        GeneratorSet {
            domain: None,
            dim,
            generators,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.generators.iter()
    }
}

/// `1 - x1^2 - ... - xd^2`.
pub fn ball_generator(dim: usize) -> Polynomial<Rational> {
    let mut g = Polynomial::one(dim);
    for i in 0..dim {
        g.add_term(MultiIndex::axis(dim, i, 2), Rational::from_int(-1));
    }
    g
}

/// Simplex factor `x_i` for `i < d`, and `1 - Σ x_j` for `i = d`.
fn simplex_factor(dim: usize, i: usize) -> Polynomial<Rational> {
    if i < dim {
        Polynomial::monomial(MultiIndex::axis(dim, i, 1), Rational::one())
    } else {
        let mut g = Polynomial::one(dim);
        for j in 0..dim {
            g.add_term(MultiIndex::axis(dim, j, 1), Rational::from_int(-1));
        }
        g
    }
}

/// `1 - x_j^2`.
fn cube_factor(dim: usize, j: usize) -> Polynomial<Rational> {
    let mut g = Polynomial::one(dim);
    g.add_term(MultiIndex::axis(dim, j, 2), Rational::from_int(-1));
    g
}

/// The truncated generator family `G_n` used by the Pell identities and the
/// log-det problems. A generator is retained exactly when its localized
/// moment matrix has nonnegative order, i.e. `t_g <= n`:
///
/// * ball: `{1, 1-|x|^2}`;
/// * simplex: `g_ε = x^ε (1-|x|)^{ε_{d+1}}` over `ε ∈ {0,1}^{d+1}` with
///   `|ε|` even, so `t_g = |ε|/2`;
/// * cube: `g_ε = Π (1-x_j^2)^{ε_j}` over `ε ∈ {0,1}^d`, so `t_g = |ε|`.
pub fn make_generators(domain: Domain, dim: usize, n: u32) -> GeneratorSet {
    assert!(dim >= 1, "dimension must be >= 1");
    let unit_eps_len = match domain {
        Domain::Ball => 1,
        Domain::Simplex => dim + 1,
        Domain::Cube => dim,
    };
    let mut generators = vec![Generator::with_epsilon(
        "1",
        Polynomial::one(dim),
        vec![0; unit_eps_len],
    )];
    match domain {
        Domain::Ball => {
            let g = Generator::with_epsilon("1-|x|^2", ball_generator(dim), vec![1]);
            if g.half_degree <= n {
                generators.push(g);
            }
        }
        Domain::Simplex => {
            for eps in bitmasks(dim + 1) {
                let weight: u32 = eps.iter().map(|&b| b as u32).sum();
                if weight == 0 || weight % 2 != 0 || weight / 2 > n {
                    continue;
                }
                let mut poly = Polynomial::one(dim);
                let mut label_parts = Vec::new();
                for (i, &bit) in eps.iter().enumerate() {
                    if bit {
                        poly = poly.mul(&simplex_factor(dim, i));
                        label_parts.push(if i < dim {
                            format!("x{}", i + 1)
                        } else {
                            "(1-|x|)".to_string()
                        });
                    }
                }
                generators.push(Generator::with_epsilon(
                    label_parts.join("*"),
                    poly,
                    eps.iter().map(|&b| b as u8).collect(),
                ));
            }
        }
        Domain::Cube => {
            for eps in bitmasks(dim) {
                let weight: u32 = eps.iter().map(|&b| b as u32).sum();
                if weight == 0 || weight > n {
                    continue;
                }
                let mut poly = Polynomial::one(dim);
                let mut label = String::new();
                for (j, &bit) in eps.iter().enumerate() {
                    if bit {
                        poly = poly.mul(&cube_factor(dim, j));
                        label.push_str(&format!("(1-x{}^2)", j + 1));
                    }
                }
                generators.push(Generator::with_epsilon(
                    label,
                    poly,
                    eps.iter().map(|&b| b as u8).collect(),
                ));
            }
        }
    }
    GeneratorSet {
        domain: Some(domain),
        dim,
        generators,
    }
}

/// The untruncated cube family without products, `{1, 1-x1^2, ..., 1-xd^2}`;
/// with this set the log-det optimum provably differs from the equilibrium
/// moments.
pub fn cube_truncated_generators(dim: usize, n: u32) -> GeneratorSet {
    let mut generators = vec![Generator::new("1", Polynomial::one(dim))];
    for j in 0..dim {
        let g = Generator::new(format!("(1-x{}^2)", j + 1), cube_factor(dim, j));
        if g.half_degree <= n {
            generators.push(g);
        }
    }
    GeneratorSet {
        domain: None,
        dim,
        generators,
    }
}

/// All `{0,1}^k` patterns, lowest index flipping fastest.
fn bitmasks(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..(1 << k)).map(move |m| (0..k).map(|i| m >> i & 1 == 1).collect())
}
