//! Sampling validators for the Gaussian machinery. Every statistical check
//! uses a 3-4 standard error window at a fixed seed.

use amoeba_core::bergman::{
    bergman_kernel, bergmanbound_check, bernstein_tail_bound, check_conditional_bounds,
    empirical_evaluation_covariance, empirical_mgf, independent_case_probability, mgf_sq_norm, random_covariance,
    simulate_independent_pairs, tail_bound_large_ball,
};
use amoeba_core::kostlan::{fs_point_norm_sq, monomial_fs_norm_sq, multi_indices, sample_poly};
use amoeba_core::stats::{mc_frequency, mc_mean};
use amoeba_core::{Complex64, CovarianceMatrix, Error, GaussianVectorSpec, RngStream};
use nalgebra::DMatrix;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[test]
fn expected_norm_is_dimension() {
    let rng = RngStream::new(100, 0);
    let e = mc_mean(&rng, 10_000, |r| sample_poly(3, r).fs_norm_sq());
    assert!(e.agrees_with(10.0, 3.0, 0.0), "{e:?}");
}

#[test]
fn expected_point_norm_is_dimension() {
    let rng = RngStream::new(101, 0);
    for z in [[c(0.0, 0.0), c(0.0, 0.0)], [c(1.5, -0.5), c(0.2, 3.0)]] {
        let e = mc_mean(&rng, 20_000, |r| fs_point_norm_sq(&sample_poly(2, r), z));
        assert!(e.agrees_with(6.0, 3.0, 0.0), "{e:?}");
    }
}

#[test]
fn orthonormal_coefficients_have_identity_covariance() {
    let d = 2;
    let n = 100_000u64;
    let norms: Vec<f64> = multi_indices(d)
        .map(|mi| monomial_fs_norm_sq(mi, d).unwrap().sqrt())
        .collect();
    let k = norms.len();
    let rng = RngStream::new(102, 0);
    let parts = amoeba_core::stats::chunked_map(&rng, n, 4096, |r, count| {
        let mut acc = DMatrix::from_element(k, k, c(0.0, 0.0));
        for _ in 0..count {
            let p = sample_poly(d, r);
            let a: Vec<C> = p.coeffs().iter().zip(&norms).map(|(x, s)| x * s).collect();
            for i in 0..k {
                for j in 0..k {
                    acc[(i, j)] += a[i] * a[j].conj();
                }
            }
        }
        acc
    });
    let total = parts
        .into_iter()
        .fold(DMatrix::from_element(k, k, c(0.0, 0.0)), |a, b| a + b)
        / c(n as f64, 0.0);
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            assert!(
                (total[(i, j)] - c(target, 0.0)).norm() < 0.05,
                "({i},{j}) = {}",
                total[(i, j)]
            );
        }
    }
}

#[test]
fn monomial_norm_by_integration() {
    // The class of a standard Gaussian vector of C^3 is FS-uniform on CP^2.
    let d = 3;
    let rng = RngStream::new(103, 0);
    for mi in multi_indices(d) {
        let e = mc_mean(&rng, 1_000_000, |r| {
            let w = [r.complex_gaussian(), r.complex_gaussian(), r.complex_gaussian()];
            let n2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
            let m = w[0].norm_sqr().powi(mi.i0 as i32)
                * w[1].norm_sqr().powi(mi.i1 as i32)
                * w[2].norm_sqr().powi(mi.i2 as i32);
            m / n2.powi(d as i32)
        });
        let exact = monomial_fs_norm_sq(mi, d).unwrap();
        assert!((e.mean - exact).abs() <= 0.02 * exact, "{mi:?}: {e:?} vs {exact}");
    }
}

#[test]
fn evaluation_covariance_is_bergman_kernel() {
    let pts = [
        [c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.4, 0.1), c(-0.2, 0.3)],
        [c(-0.3, 0.0), c(0.5, -0.5)],
    ];
    let d = 3;
    let rng = RngStream::new(104, 0);
    let emp = empirical_evaluation_covariance(&pts, d, 100_000, &rng).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let b = bergman_kernel(pts[i], pts[j], d);
            let e = emp.matrix[(i, j)];
            assert!((e - b).norm() <= 0.05 * b.norm(), "({i},{j}): {e} vs {b}");
        }
    }
    // Distant points decorrelate.
    let far = [[c(0.0, 0.0), c(0.0, 0.0)], [c(30.0, 0.0), c(0.0, 30.0)]];
    let emp = empirical_evaluation_covariance(&far, 10, 20_000, &rng).unwrap();
    assert!(emp.matrix[(0, 1)].norm() <= 4.0 * emp.stderr[(0, 1)] + 1e-12);
}

#[test]
fn mgf_matches_determinant_formula() {
    let mut r = RngStream::new(105, 0);
    let b = random_covariance(3, &mut r);
    let lambda = 0.2 / b.op_norm();
    let exact = mgf_sq_norm(&b, lambda).unwrap();
    let e = empirical_mgf(&b, lambda, 1_000_000, &RngStream::new(105, 1));
    assert!((e.mean - exact).abs() <= 0.03 * exact, "{e:?} vs {exact}");
}

#[test]
fn tail_bounds_dominate_frequencies() {
    let rng = RngStream::new(106, 0);
    // N = 1 is exponential: P(|Z| >= 2) = e^{-4}.
    let f = mc_frequency(&rng, 200_000, |r| r.complex_gaussian().norm() >= 2.0);
    assert!(f.agrees_with((-4.0f64).exp(), 4.0, 0.0));
    assert!(f.mean <= tail_bound_large_ball(1, 2.0).unwrap());
    let f = mc_frequency(&rng, 1_000_000, |r| {
        (0..4).map(|_| r.complex_gaussian().norm_sqr()).sum::<f64>() >= 16.0
    });
    assert!(f.mean <= tail_bound_large_ball(4, 4.0).unwrap() + 3.0 * f.stderr);

    let one = CovarianceMatrix::identity(1);
    let f = mc_frequency(&rng, 200_000, |r| r.complex_gaussian().norm_sqr() >= 2.0);
    assert!(f.agrees_with((-2.0f64).exp(), 4.0, 0.0));
    assert!(f.mean <= bernstein_tail_bound(&one, 2.0).unwrap());

    let mut r = RngStream::new(106, 1);
    for _ in 0..20 {
        let b = random_covariance(3, &mut r);
        let y = 2.0 * b.op_norm();
        let bound = bernstein_tail_bound(&b, y).unwrap();
        let f = mc_frequency(&r.substream(9), 20_000, |s| {
            b.sample(s).iter().map(|z| z.norm_sqr()).sum::<f64>() >= 3.0 * y
        });
        assert!(f.mean <= bound + 3.0 * f.stderr, "{f:?} vs {bound}");
    }
}

#[test]
fn conditional_expectation_bounds() {
    let rng = RngStream::new(107, 0);
    // N = 1: ||Z||^2 ~ Exp(1), 90th percentile ln 10.
    let spec = GaussianVectorSpec::new(CovarianceMatrix::identity(1));
    let rep = check_conditional_bounds(&spec, 10f64.ln(), 200_000, &rng).unwrap();
    assert!(rep.tail_integral_holds && rep.variance_holds, "{rep:?}");
    assert!(matches!(
        check_conditional_bounds(&spec, 0.5, 1000, &rng),
        Err(Error::Inconclusive(_))
    ));

    let mut r = RngStream::new(107, 1);
    for k in 0..10 {
        let spec = GaussianVectorSpec::new(random_covariance(3, &mut r));
        // Empirical 95th percentile from a pilot run.
        let mut pilot: Vec<f64> = (0..20_000)
            .map(|_| spec.sample(&mut r).iter().map(|z| z.norm_sqr()).sum())
            .collect();
        pilot.sort_by(f64::total_cmp);
        let q = pilot[19_000];
        let rep = check_conditional_bounds(&spec, q, 50_000, &rng.substream(k)).unwrap();
        assert!(rep.tail_integral_holds && rep.variance_holds, "{rep:?}");
    }
}

#[test]
fn bergman_bound_on_correlated_pair() {
    let rng = RngStream::new(108, 0);
    let cov = CovarianceMatrix::from_real_rows(2, &[1.0, 0.5, 0.5, 1.0]).unwrap();
    for subset in [vec![0usize], vec![1], vec![0, 1], vec![]] {
        let chk = bergmanbound_check(&cov, 1.0, &subset, 100_000, &rng).unwrap();
        assert!(chk.holds, "{subset:?}: {chk:?}");
    }
    let chk = bergmanbound_check(&cov, 0.0, &[], 10_000, &rng).unwrap();
    assert!(chk.bound.value >= 1.0 && chk.empirical.mean <= 1.0);
    // Identity covariance: the bound is the exact probability.
    let id = CovarianceMatrix::identity(3);
    let chk = bergmanbound_check(&id, 0.8, &[1], 200_000, &rng).unwrap();
    assert!(chk.empirical.agrees_with(chk.bound.value, 4.0, 0.0), "{chk:?}");
}

#[test]
fn independent_pairs_simulation() {
    let rng = RngStream::new(109, 0);
    let exact = independent_case_probability(0.3, 0.4, 20).unwrap();
    assert!((exact - 0.922_437_206_361_81).abs() < 1e-12);
    let sim = simulate_independent_pairs(0.3, 0.4, 20, 50_000, &rng);
    assert!(sim.agrees_with(exact, 3.0, 0.0), "{sim:?}");
}
