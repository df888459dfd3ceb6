//! Shared test oracles: numerical quadrature for the equilibrium moments
//! (independent of the exact Gamma-ratio path), and the kernel invariant
//! checks used by both the property and acceptance suites.
#![allow(dead_code)]

use pell_core::pell::interior_samples;
use pell_core::{
    christoffel_poly, enumerate_basis, equilibrium_moments, moment_matrix, Domain, MultiIndex,
    Polynomial, Rational, Scalar,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson quadrature for smooth integrands. The interval is first
/// split into fixed panels so that symmetric integrands cannot fool the
/// first-level error estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + rec(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    const PANELS: usize = 16;
    let mut total = 0.0;
    for k in 0..PANELS {
        let pa = a + (b - a) * k as f64 / PANELS as f64;
        let pb = a + (b - a) * (k + 1) as f64 / PANELS as f64;
        let fa = f(pa);
        let fb = f(pb);
        let (whole, m, fm) = simpson(f, pa, fa, pb, fb);
        total += rec(f, pa, fa, pb, fb, whole, m, fm, tol / PANELS as f64, 36);
    }
    total
}

/// `∫_0^{π/2} cos^p θ · sin^q θ dθ` by quadrature.
fn wallis(p: u32, q: u32) -> f64 {
    adaptive_simpson(
        &move |t: f64| t.cos().powi(p as i32) * t.sin().powi(q as i32),
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-14,
    )
}

/// Equilibrium moment by numerical quadrature of the defining density, with
/// the arcsine-type singularity removed by trigonometric substitution.
/// Supports d ≤ 2.
pub fn quadrature_moment(domain: Domain, d: usize, alpha: &MultiIndex) -> f64 {
    let e = alpha.exponents();
    match (domain, d) {
        (Domain::Cube, _) => e.iter().map(|&k| arcsine_quad(k)).product(),
        (Domain::Ball, 1) => arcsine_quad(e[0]),
        (Domain::Ball, 2) => {
            let (a, b) = (e[0], e[1]);
            // (1/2π)·∫ cos^a sin^b dθ over [0,2π] · ∫ sin^{a+b+1} t dt·(2..)
            let angular = full_circle_moment(a, b);
            let radial = adaptive_simpson(
                &move |t: f64| t.sin().powi((a + b + 1) as i32),
                0.0,
                std::f64::consts::FRAC_PI_2,
                1e-14,
            );
            angular * radial / (2.0 * std::f64::consts::PI)
        }
        (Domain::Simplex, 1) => {
            // (2/π)∫ sin^{2k} θ dθ on [0, π/2]
            2.0 / std::f64::consts::PI * wallis(0, 2 * e[0])
        }
        (Domain::Simplex, 2) => {
            // x = (ρ cos u)², y = (ρ sin u)², ρ = sin w:
            // 4/(2π) ∫ cos^{2a}u sin^{2b}u du ∫ sin^{2a+2b+1}w dw
            let (a, b) = (e[0], e[1]);
            4.0 / (2.0 * std::f64::consts::PI) * wallis(2 * a, 2 * b) * wallis(0, 2 * a + 2 * b + 1)
        }
        _ => panic!("quadrature oracle supports d <= 2 only"),
    }
}

/// `(1/π) ∫_0^π cos^k θ dθ` — the arcsine moment, numerically.
fn arcsine_quad(k: u32) -> f64 {
    adaptive_simpson(
        &move |t: f64| t.cos().powi(k as i32),
        0.0,
        std::f64::consts::PI,
        1e-14,
    ) / std::f64::consts::PI
}

/// `∫_0^{2π} cos^a θ sin^b θ dθ` by quadrature.
fn full_circle_moment(a: u32, b: u32) -> f64 {
    adaptive_simpson(
        &move |t: f64| t.cos().powi(a as i32) * t.sin().powi(b as i32),
        0.0,
        2.0 * std::f64::consts::PI,
        1e-14,
    )
}

pub fn q(text: &str) -> Rational {
    pell_core::parse_rational(text).unwrap()
}

pub fn to_f64_point(p: &[Rational]) -> Vec<f64> {
    p.iter().map(|v| v.to_f64()).collect()
}

/// Defining property of the CD kernel, coefficient-exact: applying the
/// moment functional in `y` to `K_n(x,y)·y^α` reproduces `x^α` for every
/// `|α| ≤ n`. Panics with context on violation.
pub fn check_reproducing_property(domain: Domain, d: usize, n: u32) {
    let phi = equilibrium_moments(domain, d, 2 * n);
    let basis = enumerate_basis(d, n);
    let inv = moment_matrix(&phi, n).unwrap().inverse().unwrap();
    for a in 0..basis.len() {
        let alpha = basis.at(a);
        for g in 0..basis.len() {
            let mut w = Rational::zero();
            for dd in 0..basis.len() {
                w = w.add(&inv.at(g, dd).mul(phi.value(&basis.at(dd).sum(alpha))));
            }
            let expect = if g == a { Rational::one() } else { Rational::zero() };
            assert_eq!(w, expect, "reproducing: {domain} d={d} n={n} α={alpha}");
        }
    }
}

/// Variational characterization: `φ(p²)·K_n(ξ,ξ) ≥ 1` exactly for all
/// degree-`n` polynomials with `p(ξ) = 1`, with equality at
/// `p* = K(ξ,·)/K(ξ,ξ)`.
pub fn check_variational_property(domain: Domain, d: usize, n: u32, num_xi: usize, num_p: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let phi = equilibrium_moments(domain, d, 2 * n);
    let lambda_inv = christoffel_poly(&phi, n).unwrap();
    let basis = enumerate_basis(d, n);
    let inv = moment_matrix(&phi, n).unwrap().inverse().unwrap();
    let points = interior_samples(domain, d, num_xi, 0xabc);
    for xi in &points {
        let k_xi_xi = lambda_inv.eval(xi);

        for _ in 0..num_p {
            let raw = Polynomial::from_terms(
                d,
                basis.iter().map(|alpha| {
                    (
                        alpha.clone(),
                        Rational::from_ratio(rng.random_range(-5..=5), rng.random_range(1..=5)),
                    )
                }),
            );
            let at_xi = raw.eval(xi);
            if at_xi.is_zero() {
                continue;
            }
            let p = raw.scale(&Rational::one().div(&at_xi));
            let energy = phi.riesz(&p.mul(&p)).unwrap();
            assert!(
                energy.mul(&k_xi_xi) >= Rational::one(),
                "variational bound: {domain} at {xi:?}"
            );
        }

        // the optimizer attains the bound
        let mut k_xi = Polynomial::zero(d);
        for (g_idx, gamma) in basis.iter().enumerate() {
            let mut coeff = Rational::zero();
            for (d_idx, delta) in basis.iter().enumerate() {
                let mut m = inv.at(g_idx, d_idx).clone();
                for (xv, &e) in xi.iter().zip(delta.exponents()) {
                    for _ in 0..e {
                        m = m.mul(xv);
                    }
                }
                coeff = coeff.add(&m);
            }
            k_xi.add_term(gamma.clone(), coeff);
        }
        let p_star = k_xi.scale(&Rational::one().div(&k_xi_xi));
        assert_eq!(p_star.eval(xi), Rational::one());
        let energy = phi.riesz(&p_star.mul(&p_star)).unwrap();
        assert_eq!(
            energy.mul(&k_xi_xi),
            Rational::one(),
            "variational equality: {domain}"
        );
    }
}

/// `Λ_n^{-1} − Λ_{n-1}^{-1}` is a sum of squares: nonnegative at arbitrary
/// real sample points, inside the domain or not.
pub fn check_kernel_monotonicity(domain: Domain, d: usize, n_max: u32, samples: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = equilibrium_moments(domain, d, 2 * n_max);
    for n in 1..=n_max {
        let diff = christoffel_poly(&phi, n)
            .unwrap()
            .sub(&christoffel_poly(&phi, n - 1).unwrap());
        for _ in 0..samples {
            let x: Vec<Rational> = (0..d)
                .map(|_| Rational::from_ratio(rng.random_range(-20..=20), 10))
                .collect();
            assert!(
                diff.eval(&x) >= Rational::zero(),
                "monotonicity: {domain} d={d} n={n} at {x:?}"
            );
        }
    }
}

/// Scaling law `Λ^{γφ} = γΛ^φ` and multiplicativity of localization,
/// both exact.
pub fn check_scaling_and_localization(domain: Domain) {
    let phi = equilibrium_moments(domain, 2, 8);
    let gamma = q("7/3");
    let scaled = phi.scale(&gamma).unwrap();
    let lhs = christoffel_poly(&scaled, 2).unwrap();
    let rhs = christoffel_poly(&phi, 2)
        .unwrap()
        .scale(&Rational::one().div(&gamma));
    assert_eq!(lhs, rhs, "scaling law: {domain}");

    let gens = pell_core::make_generators(domain, 2, 2);
    if gens.len() >= 3 {
        let g1 = &gens.generators[1].poly;
        let g2 = &gens.generators[2].poly;
        let a = phi.localize(g1).unwrap().localize(g2).unwrap();
        let b = phi.localize(&g1.mul(g2)).unwrap();
        assert_eq!(a.values(), b.values(), "localization composition: {domain}");
    } else {
        // ball: compose the single generator with itself
        let g = &gens.generators[1].poly;
        let a = phi.localize(g).unwrap().localize(g).unwrap();
        let b = phi.localize(&g.mul(g)).unwrap();
        assert_eq!(a.values(), b.values(), "localization composition: {domain}");
    }
}
