use std::sync::Arc;

use homspace_core::catalog::{self, so_n_index};
use homspace_core::linalg::{self, Mat, Tensor3};
use homspace_core::transport::{self, IntegratorOptions};
use homspace_core::{AlgebraVector, AlphaMap, GroupElement, MetricOnM, ReductiveDecomposition};
use proptest::prelude::*;

fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

fn well_conditioned(n: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_filter_map("singular", move |v| {
        let m = Mat::from_row_major(n, n, v)
            .unwrap()
            .add(&Mat::identity(n).scale(2.0));
        let det = m.determinant().ok()?;
        (det.abs() > 0.5).then_some(m)
    })
}

/// so(4) with 𝔥 = so(3) on the first three coordinates and 𝔪 spanned by
/// `R·(E03, E13, E23)`.
fn so4_decomposition(r: &Mat) -> ReductiveDecomposition {
    let alg = Arc::new(catalog::so_n(4).unwrap());
    let h = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| AlgebraVector::basis(6, so_n_index(4, a, b)))
        .collect();
    let m_std: Vec<Vec<f64>> = [(0, 3), (1, 3), (2, 3)]
        .iter()
        .map(|&(a, b)| AlgebraVector::basis(6, so_n_index(4, a, b)).into_coords())
        .collect();
    let m = (0..3)
        .map(|c| {
            let mut v = vec![0.0; 6];
            for (k, std) in m_std.iter().enumerate() {
                for (o, s) in v.iter_mut().zip(std) {
                    *o += r[(k, c)] * s;
                }
            }
            AlgebraVector::new(v)
        })
        .collect();
    ReductiveDecomposition::new(alg, h, m, Vec::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_antisymmetric_and_jacobi(x in vec_strategy(6), y in vec_strategy(6), z in vec_strategy(6)) {
        let g = catalog::so_n(4).unwrap();
        let (x, y, z) = (AlgebraVector::new(x), AlgebraVector::new(y), AlgebraVector::new(z));
        let xy = g.bracket(&x, &y).unwrap();
        let yx = g.bracket(&y, &x).unwrap();
        prop_assert!(xy.add(&yx).norm_inf() <= 1e-12);
        let j = g.bracket(&x, &g.bracket(&y, &z).unwrap()).unwrap()
            .add(&g.bracket(&y, &g.bracket(&z, &x).unwrap()).unwrap())
            .add(&g.bracket(&z, &g.bracket(&x, &y).unwrap()).unwrap());
        prop_assert!(j.norm_inf() <= 1e-12);
    }

    #[test]
    fn projections_are_complementary(r in well_conditioned(3), v in vec_strategy(6)) {
        let dec = so4_decomposition(&r);
        let v = AlgebraVector::new(v);
        let pm = dec.project_m(&v).unwrap();
        let ph = dec.project_h(&v).unwrap();
        prop_assert!(pm.add(&ph).sub(&v).norm_inf() <= 1e-12);
        prop_assert!(dec.project_m(&pm).unwrap().sub(&pm).norm_inf() <= 1e-12);
        prop_assert!(dec.project_h(&pm).unwrap().norm_inf() <= 1e-12);
    }

    #[test]
    fn canonical_first_is_torsion_free(r in well_conditioned(3)) {
        let dec = Arc::new(so4_decomposition(&r));
        prop_assert!(AlphaMap::canonical_first(dec).torsion().max_abs() <= 1e-12);
    }

    #[test]
    fn curvature_antisymmetric_in_first_pair(
        r in well_conditioned(3), x in vec_strategy(3), y in vec_strategy(3), z in vec_strategy(3)
    ) {
        let dec = Arc::new(so4_decomposition(&r));
        for a in [AlphaMap::canonical_first(dec.clone()), AlphaMap::canonical_second(dec.clone())] {
            let rxy = a.curvature_apply(&x, &y, &z).unwrap();
            let ryx = a.curvature_apply(&y, &x, &z).unwrap();
            let scale = 1.0 + linalg::norm_inf(&rxy);
            prop_assert!(rxy.iter().zip(&ryx).all(|(p, q)| (p + q).abs() <= 1e-12 * scale));
        }
    }

    #[test]
    fn levi_civita_on_any_left_invariant_metric(diag in prop::collection::vec(0.5f64..4.0, 3), off in -0.3f64..0.3) {
        let mut g = Mat::diag(&diag);
        g[(0, 1)] = off;
        g[(1, 0)] = off;
        let metric = MetricOnM::new(g).unwrap();
        let b = catalog::group_as_space(Arc::new(catalog::so3()), Some(metric.clone())).unwrap();
        let lc = b.suggested_alphas[0].clone();
        prop_assert!(lc.torsion().max_abs() <= 1e-10);
        prop_assert!(lc.is_metric(&metric).pass);
    }

    #[test]
    fn metric_compatibility_is_skewness(perturb in prop::collection::vec(-1.0f64..1.0, 27), skew in any::<bool>()) {
        // α(A_i, ·) = G⁻¹ S_i with S_i skew passes; a generic perturbation fails.
        let b = catalog::rigid_body([1.0, 2.0, 3.0]).unwrap();
        let metric = b.metric.clone().unwrap();
        let ginv = metric.inverse();
        let mut c = Tensor3::zeros(3);
        for i in 0..3 {
            let mut s = Mat::zeros(3, 3);
            for k in 0..3 {
                for j in 0..3 {
                    s[(k, j)] = perturb[(i * 3 + k) * 3 + j];
                }
            }
            if skew {
                s = s.sub(&s.transpose()).scale(0.5);
            }
            let a = ginv.matmul(&s);
            for k in 0..3 {
                for j in 0..3 {
                    c.set(k, i, j, a[(k, j)]);
                }
            }
        }
        let alpha = AlphaMap::explicit(b.dec.clone(), c).unwrap();
        let report = alpha.is_metric(&metric);
        prop_assert_eq!(report.pass, skew);
    }

    #[test]
    fn euler_arnold_preserves_norm(x in vec_strategy(3), diag in prop::collection::vec(0.5f64..4.0, 3)) {
        let b = catalog::rigid_body([diag[0], diag[1], diag[2]]).unwrap();
        let metric = b.metric.clone().unwrap();
        let ea = transport::EulerArnold::new(b.dec.clone(), metric.clone()).unwrap();
        let f = ea.field(&x).unwrap();
        prop_assert!(metric.inner(&f, &x).abs() <= 1e-10 * (1.0 + metric.inner(&x, &x)));
        let lc = b.suggested_alphas[0].eval(&x, &x).unwrap();
        prop_assert!(f.iter().zip(&lc).all(|(p, q)| (p + q).abs() <= 1e-10));
    }

    #[test]
    fn transport_superposition(u in vec_strategy(2), v in vec_strategy(2), s in -2.0f64..2.0, x0 in vec_strategy(2)) {
        let sphere = catalog::sphere2();
        let a = sphere.suggested_alphas[0].clone();
        let base = transport::geodesic(&a, &GroupElement::identity(3), &x0, 0.0, 1.0, 0.05, IntegratorOptions::default()).unwrap();
        let w: Vec<f64> = u.iter().zip(&v).map(|(p, q)| p + s * q).collect();
        let end = |z: &[f64]| transport::parallel_transport(&a, &base, z).unwrap().transported.unwrap().pop().unwrap();
        let (zu, zv, zw) = (end(&u), end(&v), end(&w));
        for k in 0..2 {
            prop_assert!((zw[k] - zu[k] - s * zv[k]).abs() <= 1e-10);
        }
    }

    #[test]
    fn isotropy_preserves_metric_on_stiefel(t in -3.0f64..3.0, i in 0usize..3) {
        let b = catalog::stiefel(4, 1).unwrap();
        let eta = b.dec.h_basis()[i].clone();
        let h = b.algebra.group_exp(&eta, t).unwrap();
        let (ad, leak) = b.dec.isotropy_on_m(&h).unwrap();
        prop_assert!(leak <= 1e-10);
        let g = b.metric.as_ref().unwrap().gram();
        prop_assert!(ad.transpose().matmul(g).matmul(&ad).sub(g).max_abs() <= 1e-10);
    }
}
