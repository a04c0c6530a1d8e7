//! Standard spaces: SO(n) and its quotients, the round sphere, Stiefel and
//! Grassmann-type quotients, and any group as `G/{e}`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraVector, GroupElement, StructuredLieAlgebra};
use crate::connection::{naturally_reductive_check, AlphaLabel, AlphaMap};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::reductive::{MetricOnM, ReductiveDecomposition};
use crate::report::{CheckReport, Worst};
use crate::transport::{EulerArnold, EULER_ARNOLD_TOL};

/// Tolerance for `canonical_first = 0` on symmetric decompositions.
pub const SYMMETRIC_ALPHA_TOL: f64 = 1e-12;
/// Tolerance for the curvature antisymmetry in its first two inputs.
pub const CURVATURE_ANTISYMMETRY_TOL: f64 = 1e-12;
/// Torsion of canonical_first and Levi-Civita.
pub const TORSION_TOL: f64 = 1e-10;

/// `E_ab = e_a e_bᵀ − e_b e_aᵀ`, `a < b`, in lexicographic order.
pub fn so_n(n: usize) -> Result<StructuredLieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("so(n) needs n >= 2, got {n}")));
    }
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let mut m = Mat::zeros(n, n);
            m[(a, b)] = 1.0;
            m[(b, a)] = -1.0;
            basis.push(m);
        }
    }
    StructuredLieAlgebra::from_matrix_basis(format!("so({n})"), basis)
}

/// so(3) in the rotation-generator basis `L_x, L_y, L_z` with
/// `[L_x, L_y] = L_z` cyclically.
pub fn so3() -> StructuredLieAlgebra {
    let l = |a: usize, b: usize| {
        let mut m = Mat::zeros(3, 3);
        m[(a, b)] = -1.0;
        m[(b, a)] = 1.0;
        m
    };
    StructuredLieAlgebra::from_matrix_basis("so(3)", vec![l(1, 2), l(2, 0), l(0, 1)])
        .expect("rotation generators are independent")
}

/// Index of `E_ab` (`a < b`) in the [`so_n`] basis.
pub fn so_n_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// A validated space with a suggested set of connections.
#[derive(Clone, Debug)]
pub struct SpaceBundle {
    pub algebra: Arc<StructuredLieAlgebra>,
    pub dec: Arc<ReductiveDecomposition>,
    pub metric: Option<MetricOnM>,
    pub suggested_alphas: Vec<AlphaMap>,
    pub provenance: String,
}

/// One entry of the diagnostic battery.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub report: CheckReport,
    /// Mandatory checks decide the overall verdict; the others are
    /// informational properties of the space.
    pub mandatory: bool,
}

impl SpaceBundle {
    pub fn alpha(&self, label: AlphaLabel) -> Option<&AlphaMap> {
        self.suggested_alphas.iter().find(|a| a.label() == label)
    }

    /// Full battery over the decomposition, the metric and every suggested
    /// connection.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |report: CheckReport, mandatory: bool| out.push(Diagnostic { report, mandatory });

        push(
            CheckReport::new(
                "jacobi",
                self.algebra.jacobi_residual(),
                crate::algebra::JACOBI_TOL,
            ),
            true,
        );
        if let Some(r) = self.algebra.commutator_residual() {
            push(
                CheckReport::new("commutator_consistency", r, crate::algebra::COMMUTATOR_TOL),
                true,
            );
        }
        for r in self.dec.structural_reports() {
            push(r, true);
        }
        let mut nr_pass = false;
        let mut metric_ok = false;
        if let Some(metric) = &self.metric {
            let inv = self.dec.check_metric_invariance(metric);
            metric_ok = inv.pass;
            push(inv, true);
            let nr = naturally_reductive_check(&self.dec, metric);
            nr_pass = nr.pass;
            push(nr, false);
        }
        let first = AlphaMap::canonical_first(self.dec.clone());
        if self.dec.is_symmetric() {
            push(
                CheckReport::new(
                    "symmetric_alpha_vanishes",
                    first.coeffs().max_abs(),
                    SYMMETRIC_ALPHA_TOL,
                ),
                true,
            );
        }
        let lc = match (&self.metric, metric_ok) {
            (Some(m), true) => AlphaMap::levi_civita(self.dec.clone(), m).ok(),
            _ => None,
        };
        if let (Some(lc), true) = (&lc, nr_pass) {
            push(
                CheckReport::new(
                    "levi_civita_equals_canonical_first",
                    lc.max_coeff_diff(&first),
                    TORSION_TOL,
                ),
                true,
            );
        }
        if let (Some(lc), Some(metric)) = (&lc, &self.metric) {
            push(euler_arnold_consistency(&self.dec, metric, lc), true);
        }
        for a in &self.suggested_alphas {
            for d in alpha_diagnostics(a, self.metric.as_ref()) {
                out.push(d);
            }
        }
        out
    }
}

fn prefixed(label: AlphaLabel, mut r: CheckReport) -> CheckReport {
    r.check = format!("{}.{}", label.as_str(), r.check);
    r
}

/// Checks attached to one connection: invariance, torsion, curvature
/// assembly and, with a metric, compatibility.
pub fn alpha_diagnostics(a: &AlphaMap, metric: Option<&MetricOnM>) -> Vec<Diagnostic> {
    let label = a.label();
    let mut out = Vec::new();
    let mut push = |report: CheckReport, mandatory: bool| {
        out.push(Diagnostic {
            report: prefixed(label, a.annotate(report)),
            mandatory,
        })
    };
    push(a.invariance_report().clone(), true);
    let torsion_is_theorem = matches!(label, AlphaLabel::CanonicalFirst | AlphaLabel::LeviCivita);
    push(
        CheckReport::new("torsion_free", a.torsion().max_abs(), TORSION_TOL),
        torsion_is_theorem,
    );
    match a.curvature() {
        Ok(r) => {
            push(
                CheckReport::new(
                    "curvature_antisymmetry",
                    r.antisymmetry_residual(),
                    CURVATURE_ANTISYMMETRY_TOL,
                ),
                true,
            );
            push(a.curvature_invariance(&r), true);
        }
        Err(e) => push(
            CheckReport::new(
                "curvature_assembly",
                f64::INFINITY,
                crate::connection::IDENTITY_TOL,
            )
            .with_witnesses(vec![format!("{e}")]),
            true,
        ),
    }
    if let Some(m) = metric {
        let is_theorem = matches!(label, AlphaLabel::LeviCivita | AlphaLabel::CanonicalSecond);
        push(a.is_metric(m), is_theorem);
    }
    out
}

/// `field(x) = −α_LC(x,x)` on the basis vectors and their pairwise sums,
/// which determines the quadratic map completely.
fn euler_arnold_consistency(
    dec: &Arc<ReductiveDecomposition>,
    metric: &MetricOnM,
    lc: &AlphaMap,
) -> CheckReport {
    const NAME: &str = "euler_arnold_matches_levi_civita";
    let ea = match EulerArnold::new(dec.clone(), metric.clone()) {
        Ok(ea) => ea,
        Err(e) => {
            return CheckReport::new(NAME, f64::INFINITY, EULER_ARNOLD_TOL)
                .with_witnesses(vec![format!("{e}")])
        }
    };
    let n = dec.m_dim();
    let mut worst = Worst::default();
    for i in 0..n {
        for j in i..n {
            let mut x = vec![0.0; n];
            x[i] += 1.0;
            x[j] += 1.0;
            let f = ea.field(&x).unwrap_or_else(|_| vec![f64::NAN; n]);
            let a = lc.coeffs().contract(&x, &x);
            let r = f
                .iter()
                .zip(&a)
                .map(|(f, a)| libm::fabs(f + a))
                .fold(0.0, f64::max);
            worst.observe(r, EULER_ARNOLD_TOL, || format!("x = A_{i} + A_{j}: {r:e}"));
        }
    }
    worst.into_report(NAME, EULER_ARNOLD_TOL)
}

/// S² = SO(3)/SO(2): 𝔥 = span(L_z), 𝔪 = span(L_x, L_y), round metric.
pub fn sphere2() -> SpaceBundle {
    let algebra = Arc::new(so3());
    let flip = GroupElement::new(Mat::diag(&[-1.0, -1.0, 1.0])).expect("invertible");
    let sigma = algebra.adjoint(&flip).expect("realized");
    let dec = Arc::new(ReductiveDecomposition::symmetric(algebra.clone(), &sigma).expect("symmetric pair"));
    SpaceBundle {
        suggested_alphas: vec![AlphaMap::canonical_first(dec.clone())],
        metric: Some(MetricOnM::identity(2)),
        algebra,
        dec,
        provenance: "sphere2: so(3) with sigma = Ad diag(-1,-1,1)".into(),
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n and n >= 2, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// SO(n)/SO(n−k) with 𝔥 = so(n−k) on the first `n − k` coordinates and
/// 𝔪 its orthogonal complement for `½ tr(XᵀY)`.
pub fn stiefel(n: usize, k: usize) -> Result<SpaceBundle> {
    check_nk(n, k)?;
    let algebra = Arc::new(so_n(n)?);
    let dim = algebra.dim();
    let p = n - k;
    let mut h = Vec::new();
    for a in 0..p {
        for b in a + 1..p {
            h.push(AlgebraVector::basis(dim, so_n_index(n, a, b)));
        }
    }
    let (dec, metric) = ReductiveDecomposition::normal(algebra.clone(), &Mat::identity(dim), h)?;
    let dec = Arc::new(dec);
    let lc = AlphaMap::levi_civita(dec.clone(), &metric)?;
    Ok(SpaceBundle {
        suggested_alphas: vec![AlphaMap::canonical_first(dec.clone()), lc],
        metric: Some(metric),
        algebra,
        dec,
        provenance: format!("stiefel({n},{k}): so({n}) normal complement of so({p})"),
    })
}

/// SO(n)/(SO(k)×SO(n−k)) as the symmetric pair of `Ad diag(I_k, −I_{n−k})`.
pub fn grassmann_like(n: usize, k: usize) -> Result<SpaceBundle> {
    check_nk(n, k)?;
    let algebra = Arc::new(so_n(n)?);
    let signs: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { -1.0 }).collect();
    let sigma = algebra.adjoint(&GroupElement::new(Mat::diag(&signs))?)?;
    let dec = Arc::new(ReductiveDecomposition::symmetric(algebra.clone(), &sigma)?);
    let metric = MetricOnM::identity(dec.m_dim());
    let lc = AlphaMap::levi_civita(dec.clone(), &metric)?;
    Ok(SpaceBundle {
        suggested_alphas: vec![
            AlphaMap::canonical_first(dec.clone()),
            AlphaMap::canonical_second(dec.clone()),
            lc,
        ],
        metric: Some(metric),
        algebra,
        dec,
        provenance: format!(
            "grassmann({n},{k}): so({n}) with sigma = Ad diag(I_{k}, -I_{})",
            n - k
        ),
    })
}

/// `G/{e}`; any nondegenerate gram is invariant.
pub fn group_as_space(algebra: Arc<StructuredLieAlgebra>, metric: Option<MetricOnM>) -> Result<SpaceBundle> {
    let dec = Arc::new(ReductiveDecomposition::trivial_isotropy(algebra.clone())?);
    let suggested_alphas = match &metric {
        Some(m) => vec![AlphaMap::levi_civita(dec.clone(), m)?],
        None => vec![
            AlphaMap::canonical_first(dec.clone()),
            AlphaMap::canonical_second(dec.clone()),
        ],
    };
    Ok(SpaceBundle {
        provenance: format!("{} as G/{{e}}", algebra.name()),
        algebra,
        dec,
        metric,
        suggested_alphas,
    })
}

/// SO(3)/{e} with the inertia metric `diag(I1, I2, I3)`.
pub fn rigid_body(inertia: [f64; 3]) -> Result<SpaceBundle> {
    let metric = MetricOnM::new(Mat::diag(&inertia))?;
    let mut b = group_as_space(Arc::new(so3()), Some(metric))?;
    b.provenance = format!("rigid body: so(3) with inertia {inertia:?}");
    Ok(b)
}

/// `exp(t · Σ x_i A_i)`
pub fn m_exp(dec: &ReductiveDecomposition, x: &[f64], t: f64) -> Result<GroupElement> {
    let m = dec.m_matrix(x)?;
    Ok(GroupElement::new_unchecked(linalg::expm(&m.scale(t))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_is_cyclic() {
        let g = so3();
        assert_eq!(g.constant(2, 0, 1), 1.0);
        assert_eq!(g.constant(0, 1, 2), 1.0);
        assert_eq!(g.constant(1, 2, 0), 1.0);
        assert_eq!(g.constant(2, 1, 0), -1.0);
        assert!(g.is_orthogonal());
    }

    #[test]
    fn so_n_index_matches_order() {
        let n = 5;
        let mut idx = 0;
        for a in 0..n {
            for b in a + 1..n {
                assert_eq!(so_n_index(n, a, b), idx);
                idx += 1;
            }
        }
    }

    #[test]
    fn so_n_dimensions_and_errors() {
        assert_eq!(
            so_n(2)
                .unwrap()
                .constants()
                .iter()
                .map(|c| c.abs())
                .fold(0.0, f64::max),
            0.0
        );
        assert_eq!(so_n(5).unwrap().dim(), 10);
        assert!(so_n(1).is_err());
        assert!(so_n(4).unwrap().jacobi_residual() <= 1e-14);
    }

    #[test]
    fn so_n_3_is_so3_after_relabeling() {
        // F = (E01, E02, E12) = (−L_z, L_y, −L_x)
        let f = so_n(3).unwrap();
        let map = [(2usize, -1.0), (1, 1.0), (0, -1.0)];
        let l = so3();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (li, si) = map[i];
                    let (lj, sj) = map[j];
                    let (lk, sk) = map[k];
                    // [F_i, F_j] = Σ c F_k  ⇔  coefficients transform by the signed permutation.
                    assert_eq!(f.constant(k, i, j), si * sj * sk * l.constant(lk, li, lj));
                }
            }
        }
    }

    #[test]
    fn sphere_bundle() {
        let s = sphere2();
        assert!(s.dec.is_symmetric());
        assert_eq!((s.dec.h_dim(), s.dec.m_dim()), (1, 2));
        assert!(
            s.diagnostics().iter().all(|d| d.report.pass),
            "{:?}",
            s.diagnostics()
        );
    }

    #[test]
    fn stiefel_dimensions() {
        for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 2), (4, 3)] {
            let b = stiefel(n, k).unwrap();
            assert_eq!(b.dec.m_dim(), n * (n - 1) / 2 - (n - k) * (n - k - 1) / 2);
            for d in b.diagnostics() {
                assert!(d.report.pass || !d.mandatory, "{n},{k}: {:?}", d.report);
            }
            assert!(naturally_reductive_check(&b.dec, b.metric.as_ref().unwrap()).pass);
        }
        assert!(stiefel(3, 3).is_err());
        assert!(stiefel(3, 0).is_err());
    }

    #[test]
    fn stiefel_3_1_is_a_sphere() {
        let b = stiefel(3, 1).unwrap();
        assert_eq!(b.dec.h_basis(), &[AlgebraVector::basis(3, 0)]);
        let lc = b.alpha(AlphaLabel::LeviCivita).unwrap();
        assert!(lc.coeffs().max_abs() < 1e-15);
        let k = lc
            .sectional_curvature(b.metric.as_ref().unwrap(), &[1.0, 0.0], &[0.0, 1.0])
            .unwrap();
        assert!((k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grassmann_dimensions() {
        for (n, k) in [(3, 1), (4, 2), (5, 2)] {
            let b = grassmann_like(n, k).unwrap();
            assert_eq!(b.dec.m_dim(), k * (n - k));
            assert!(b.dec.residuals().symmetric <= 1e-12);
            let first = b.alpha(AlphaLabel::CanonicalFirst).unwrap();
            let second = b.alpha(AlphaLabel::CanonicalSecond).unwrap();
            assert_eq!(first.max_coeff_diff(second), 0.0);
            assert!(b.diagnostics().iter().all(|d| d.report.pass || !d.mandatory));
        }
    }

    #[test]
    fn group_as_space_examples() {
        let b = rigid_body([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(b.dec.pr_m(), &Mat::identity(3));
        let mut c = crate::linalg::Tensor3::zeros(3);
        c.set(0, 1, 2, 5.0);
        assert!(AlphaMap::explicit(b.dec.clone(), c).is_ok());
        let diags = b.diagnostics();
        assert!(diags.iter().all(|d| d.report.pass || !d.mandatory), "{diags:?}");
        let nr = diags
            .iter()
            .find(|d| d.report.check == "naturally_reductive")
            .unwrap();
        assert!(!nr.report.pass && !nr.mandatory);
        let bare = group_as_space(Arc::new(so3()), None).unwrap();
        assert_eq!(bare.suggested_alphas.len(), 2);
    }
}
