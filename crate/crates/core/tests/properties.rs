use amoeba_core::amoeba::{psi, torus_intersection_count, SliceSweepConfig};
use amoeba_core::bergman::{bergman_kernel, cormain_bound, random_covariance, tail_bound_large_ball};
use amoeba_core::bounds::solve_rho_sq;
use amoeba_core::chart::{circle_chart_count, ln_one_minus_gamma, random_unitary, Translation};
use amoeba_core::fs_geometry::{fs_distance, fs_tangent_norm_sq, torus_area};
use amoeba_core::kostlan::sample_poly;
use amoeba_core::{Complex64, LogPoint, RngStream, TorusRadii};
use proptest::prelude::*;

type C = Complex64;

fn point() -> impl Strategy<Value = [C; 2]> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(|a| [C::new(a[0], a[1]), C::new(a[2], a[3])])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermitian_norm_inequalities(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = RngStream::new(seed, 0);
        let c = random_covariance(n, &mut rng);
        let nf = n as f64;
        // det C >= ||C^{-1}||^{-N}
        prop_assert!(c.ln_det() >= -nf * c.inverse_op_norm().ln() - 1e-10);
        // ||C||_inf <= ||C|| <= N ||C||_inf
        prop_assert!(c.inf_norm() <= c.op_norm() * (1.0 + 1e-12));
        prop_assert!(c.op_norm() <= nf * c.inf_norm() * (1.0 + 1e-12));
        // A unit diagonal entry forces one of ||C||, ||C^{-1}|| above one.
        let k = c.normalized();
        prop_assert!(k.op_norm().max(k.inverse_op_norm()) >= 1.0 - 1e-12);
    }

    #[test]
    fn kernel_conjugate_symmetry(u in point(), v in point(), d in 1usize..20) {
        prop_assert_eq!(bergman_kernel(v, u, d), bergman_kernel(u, v, d).conj());
        let bound = ((d + 1) * (d + 2) / 2) as f64 * fs_distance(u, v).cos().powi(d as i32);
        prop_assert!(bergman_kernel(u, v, d).norm() <= bound * (1.0 + 1e-10));
    }

    #[test]
    fn psi_has_order_three(t1 in -50.0f64..50.0, t2 in -50.0f64..50.0) {
        let t = LogPoint::new(t1, t2);
        let back = psi(psi(psi(t)));
        prop_assert!((back.t1 - t1).abs() <= 1e-13 * t1.abs().max(1.0));
        prop_assert!((back.t2 - t2).abs() <= 1e-13 * t2.abs().max(1.0));
    }

    #[test]
    fn torus_area_symmetric(x in 0.01f64..100.0, y in 0.01f64..100.0) {
        let a = torus_area(TorusRadii::new(x, y).unwrap());
        let b = torus_area(TorusRadii::new(y, x).unwrap());
        prop_assert!((a - b).abs() <= 1e-14 * a);
        prop_assert!(a <= torus_area(TorusRadii::new(1.0, 1.0).unwrap()) * (1.0 + 1e-14));
    }

    #[test]
    fn fs_tangent_comparison_on_bidisc(a in prop::array::uniform4(-0.7f64..0.7), h in point()) {
        let z = [C::new(a[0], a[1]), C::new(a[2], a[3])];
        prop_assume!(z[0].norm() <= 1.0 && z[1].norm() <= 1.0);
        let e = h[0].norm_sqr() + h[1].norm_sqr();
        let f = fs_tangent_norm_sq(z, h);
        prop_assert!(f <= e * (1.0 + 1e-12));
        prop_assert!(f >= e / 9.0 * (1.0 - 1e-12));
    }

    #[test]
    fn tail_bound_decreasing(n in 1usize..10, r in 0.0f64..5.0, dr in 0.01f64..3.0) {
        let r = (n as f64).sqrt() + 0.01 + r;
        let a = tail_bound_large_ball(n, r).unwrap();
        let b = tail_bound_large_ball(n, r + dr).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn cormain_decreasing_when_base_below_one(mu in 0.0f64..0.99, n in 1u64..500) {
        let b = 1.0;
        let x = cormain_bound(b, mu, n).unwrap();
        let y = cormain_bound(b, mu, n + 1).unwrap();
        prop_assert!(y.ln_value < x.ln_value);
    }

    #[test]
    fn gamma_complement_monotone(k1 in 0.01f64..1.0, k2 in 0.01f64..1.0) {
        let (lo, hi) = if k1 < k2 { (k1, k2) } else { (k2, k1) };
        prop_assert!(ln_one_minus_gamma(lo).unwrap() <= ln_one_minus_gamma(hi).unwrap());
    }

    #[test]
    fn circle_chart_count_monotone(d in 500usize..1_000_000, s in 0.0f64..1.0, ds in 0.0f64..0.5) {
        let lo = 3.0 * (5.0 * (d as f64).ln() / d as f64).sqrt();
        let a = lo + s * (1.0 - lo) * 0.999;
        let b = (a + ds).min(0.999_999);
        prop_assert!(circle_chart_count(a, d).unwrap() <= circle_chart_count(b.max(a), d).unwrap());
        prop_assert!(circle_chart_count(a, d).unwrap() >= 4);
    }

    #[test]
    fn level_roots_are_roots(d in 2u32..200) {
        let (r0, r1) = solve_rho_sq(d as f64).unwrap();
        let target = 2.0 / (std::f64::consts::PI * d as f64);
        for r in [r0, r1] {
            let v = r / (1.0 + r).powf(1.5);
            prop_assert!((v - target).abs() < 1e-12);
        }
        prop_assert!(r0 < 2.0 && 2.0 < r1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn crossing_counts_are_even(seed in any::<u64>(), d in 1usize..6, t1 in -2.0f64..2.0, t2 in -2.0f64..2.0) {
        let mut rng = RngStream::new(seed, 3);
        let p = sample_poly(d, &mut rng);
        let v = torus_intersection_count(&p, LogPoint::new(t1, t2), &SliceSweepConfig::default()).unwrap();
        prop_assert_eq!(v.crossing_count % 2, 0);
        prop_assert!(v.crossing_count <= 2 * (d * d) as u32);
        prop_assert_eq!(v.member, v.crossing_count >= 2 || v.flagged_tangency);
    }

    #[test]
    fn unitary_translation_preserves_norm(seed in any::<u64>(), d in 1usize..9) {
        let mut rng = RngStream::new(seed, 4);
        let u = random_unitary(&mut rng);
        let p = sample_poly(d, &mut rng);
        let q = Translation::new(d, &u).apply(&p).unwrap();
        prop_assert!((q.fs_norm_sq() - p.fs_norm_sq()).abs() <= 1e-10 * p.fs_norm_sq());
    }
}
