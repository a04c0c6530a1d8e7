//! Reductive decompositions `𝔤 = 𝔥 ⊕ 𝔪`, Ad(H)-invariant scalar products on
//! 𝔪, and the symmetric and orthogonal-complement constructions.
//!
//! All 𝔪-valued quantities are expressed in coordinates with respect to the
//! chosen basis `A_1, …, A_N` of 𝔪. Coordinates are extracted by solving
//! against the change-of-basis matrix `[h_basis | m_basis]`; the dual basis
//! is never stored.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraVector, GroupElement, StructuredLieAlgebra, RANK_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, symmetric_eigenvalues, ColPivQr, Lu, Mat, Tensor3};
use crate::report::{CheckReport, Worst};

/// Projection identities (`pr² = pr`, `pr_𝔪 pr_𝔥 = 0`, sum = id).
pub const PROJECTION_TOL: f64 = 1e-12;
/// Bracket inclusions `[𝔥,𝔥] ⊆ 𝔥`, `[𝔥,𝔪] ⊆ 𝔪`, `[𝔪,𝔪] ⊆ 𝔥`.
pub const INCLUSION_TOL: f64 = 1e-10;
/// `Ad_h(𝔪) ⊆ 𝔪` for explicit discrete generators.
pub const GENERATOR_TOL: f64 = 1e-9;
/// Ad(H)-invariance of bilinear maps and scalar products.
pub const INVARIANCE_TOL: f64 = 1e-8;
/// Involution and automorphism checks on σ.
pub const INVOLUTION_TOL: f64 = 1e-12;
/// Smallest/largest singular value ratio below which a form is degenerate.
pub const DEGENERACY_RATIO: f64 = 1e-10;
/// Times `t` at which `exp(tη)` is sampled for the finite invariance checks.
pub const INVARIANCE_SAMPLE_TIMES: [f64; 3] = [0.3, 0.7, 1.1];

/// Worst residuals of the construction-time invariants.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecompositionResiduals {
    pub projection: f64,
    pub subalgebra: f64,
    pub reductivity: f64,
    pub generators: f64,
    /// `[𝔪,𝔪]_𝔪`, only meaningful for symmetric decompositions.
    pub symmetric: f64,
}

/// Validated reductive decomposition of a Lie algebra.
#[derive(Clone, Debug)]
pub struct ReductiveDecomposition {
    algebra: Arc<StructuredLieAlgebra>,
    h_basis: Vec<AlgebraVector>,
    m_basis: Vec<AlgebraVector>,
    change_inv: Mat,
    pr_h: Mat,
    pr_m: Mat,
    h_generators: Vec<GroupElement>,
    symmetric: bool,
    warnings: Vec<String>,
    residuals: DecompositionResiduals,
    /// `[A_i, A_j]_𝔪` in 𝔪-coordinates.
    m_bracket: Tensor3,
    /// `[A_i, A_j]_𝔥` in 𝔥-coordinates, flattened `(a * N + i) * N + j`.
    h_bracket: Vec<f64>,
    /// For each 𝔥-basis vector η_a, the matrix of `X ↦ [η_a, X]` on 𝔪.
    h_action: Vec<Mat>,
    /// Matrices of `A_i` when the algebra is realized.
    m_matrices: Option<Vec<Mat>>,
}

impl ReductiveDecomposition {
    /// Validates `h_basis ⊕ m_basis = 𝔤`, the subalgebra property,
    /// infinitesimal reductivity and, for each generator, `Ad_h(𝔪) ⊆ 𝔪`.
    pub fn new(
        algebra: Arc<StructuredLieAlgebra>,
        h_basis: Vec<AlgebraVector>,
        m_basis: Vec<AlgebraVector>,
        h_generators: Vec<GroupElement>,
    ) -> Result<Self> {
        let n = algebra.dim();
        let (q, big_n) = (h_basis.len(), m_basis.len());
        for v in h_basis.iter().chain(&m_basis) {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if v.coords().iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("decomposition basis"));
            }
        }
        if q + big_n != n {
            return Err(Error::NotDirectSum);
        }
        let cols: Vec<Vec<f64>> = h_basis
            .iter()
            .chain(&m_basis)
            .map(|v| v.coords().to_vec())
            .collect();
        let change = Mat::from_columns(&cols)?;
        if ColPivQr::new(&change).rank(RANK_TOL) < n {
            return Err(Error::NotDirectSum);
        }
        let change_inv = Lu::new(&change).map_err(|_| Error::NotDirectSum)?.inverse()?;

        let mut sel_h = Mat::zeros(n, n);
        let mut sel_m = Mat::zeros(n, n);
        for i in 0..q {
            sel_h[(i, i)] = 1.0;
        }
        for i in q..n {
            sel_m[(i, i)] = 1.0;
        }
        let pr_h = change.matmul(&sel_h).matmul(&change_inv);
        let pr_m = change.matmul(&sel_m).matmul(&change_inv);
        let id = Mat::identity(n);
        let projection = [
            pr_h.add(&pr_m).sub(&id).max_abs(),
            pr_h.matmul(&pr_h).sub(&pr_h).max_abs(),
            pr_m.matmul(&pr_m).sub(&pr_m).max_abs(),
            pr_m.matmul(&pr_h).max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if projection > PROJECTION_TOL {
            return Err(Error::ProjectionDefect { residual: projection });
        }

        let mut dec = Self {
            algebra,
            h_basis,
            m_basis,
            change_inv,
            pr_h,
            pr_m,
            h_generators: Vec::new(),
            symmetric: false,
            warnings: Vec::new(),
            residuals: DecompositionResiduals {
                projection,
                ..Default::default()
            },
            m_bracket: Tensor3::zeros(big_n),
            h_bracket: vec![0.0; q * big_n * big_n],
            h_action: Vec::new(),
            m_matrices: None,
        };

        // [𝔥, 𝔥] ⊆ 𝔥
        for i in 0..q {
            for j in i + 1..q {
                let br = dec.full_bracket(dec.h_basis[i].coords(), dec.h_basis[j].coords());
                let (_, m) = dec.split(&br);
                let leak = linalg::norm_inf(&m);
                dec.residuals.subalgebra = dec.residuals.subalgebra.max(leak);
                if leak > INCLUSION_TOL {
                    return Err(Error::NotSubalgebra { i, j, leak });
                }
            }
        }

        // [𝔥, 𝔪] ⊆ 𝔪, recording the action of each η_a on 𝔪.
        for a in 0..q {
            let mut d = Mat::zeros(big_n, big_n);
            for k in 0..big_n {
                let br = dec.full_bracket(dec.h_basis[a].coords(), dec.m_basis[k].coords());
                let (h, m) = dec.split(&br);
                let leak = linalg::norm_inf(&h);
                dec.residuals.reductivity = dec.residuals.reductivity.max(leak);
                if leak > INCLUSION_TOL {
                    return Err(Error::NotReductive { h: a, m: k, leak });
                }
                for (l, &v) in m.iter().enumerate() {
                    d[(l, k)] = v;
                }
            }
            dec.h_action.push(d);
        }

        // Bracket tables on 𝔪, exactly antisymmetric.
        for i in 0..big_n {
            for j in i + 1..big_n {
                let br = dec.full_bracket(dec.m_basis[i].coords(), dec.m_basis[j].coords());
                let (h, m) = dec.split(&br);
                for (k, &v) in m.iter().enumerate() {
                    dec.m_bracket.set(k, i, j, v);
                    dec.m_bracket.set(k, j, i, -v);
                }
                for (a, &v) in h.iter().enumerate() {
                    dec.h_bracket[(a * big_n + i) * big_n + j] = v;
                    dec.h_bracket[(a * big_n + j) * big_n + i] = -v;
                }
            }
        }
        dec.residuals.symmetric = dec.m_bracket.max_abs();

        if dec.algebra.matrix_basis().is_some() {
            let ms = dec
                .m_basis
                .iter()
                .map(|v| dec.algebra.matrix_of(v))
                .collect::<Result<Vec<_>>>()?;
            dec.m_matrices = Some(ms);
        }

        for (idx, g) in h_generators.iter().enumerate() {
            let (_, leak) = dec.isotropy_on_m(g)?;
            dec.residuals.generators = dec.residuals.generators.max(leak);
            if leak > GENERATOR_TOL {
                return Err(Error::GeneratorBreaksReductivity { generator: idx, leak });
            }
        }
        dec.h_generators = h_generators;

        if big_n == 0 {
            dec.warnings
                .push("m = {0}: H is open in G and G/H is discrete".into());
        }
        Ok(dec)
    }

    /// `G/{e}`: 𝔥 = {0}, 𝔪 = 𝔤 with the ξ-basis.
    pub fn trivial_isotropy(algebra: Arc<StructuredLieAlgebra>) -> Result<Self> {
        let n = algebra.dim();
        let m = (0..n).map(|i| AlgebraVector::basis(n, i)).collect();
        Self::new(algebra, Vec::new(), m, Vec::new())
    }

    /// Canonical decomposition of a symmetric pair: 𝔥 and 𝔪 are the ±1
    /// eigenspaces of the involutive automorphism `sigma`.
    pub fn symmetric(algebra: Arc<StructuredLieAlgebra>, sigma: &Mat) -> Result<Self> {
        let n = algebra.dim();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: sigma.rows(),
            });
        }
        if !sigma.is_finite() {
            return Err(Error::NonFinite("sigma"));
        }
        let id = Mat::identity(n);
        let inv_res = sigma.matmul(sigma).sub(&id).max_abs();
        if inv_res > INVOLUTION_TOL {
            return Err(Error::NotInvolution { residual: inv_res });
        }
        let mut auto_res = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let br: Vec<f64> = (0..n).map(|k| algebra.constant(k, i, j)).collect();
                let lhs = sigma.mul_vec(&br);
                let rhs = algebra.bracket_coords(&sigma.column(i), &sigma.column(j));
                auto_res = auto_res.max(linalg::max_abs_diff(&lhs, &rhs));
            }
        }
        if auto_res > INCLUSION_TOL {
            return Err(Error::NotAutomorphism { residual: auto_res });
        }
        let plus = id.add(sigma).scale(0.5);
        let minus = id.sub(sigma).scale(0.5);
        let h = range_basis(&plus);
        let m = range_basis(&minus);
        let mut dec = Self::new(algebra, h, m, Vec::new())?;
        if dec.residuals.symmetric > INCLUSION_TOL {
            return Err(Error::NotSymmetricPair {
                residual: dec.residuals.symmetric,
            });
        }
        dec.symmetric = true;
        Ok(dec)
    }

    /// `𝔪 = 𝔥^⊥` for an ad-invariant nondegenerate form on 𝔤; returns the
    /// decomposition and the restricted scalar product.
    pub fn normal(
        algebra: Arc<StructuredLieAlgebra>,
        biinvariant_gram: &Mat,
        h_basis: Vec<AlgebraVector>,
    ) -> Result<(Self, MetricOnM)> {
        let n = algebra.dim();
        let g = biinvariant_gram;
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.rows(),
            });
        }
        check_symmetric_nondegenerate(g)?;
        let mut inv_res = 0.0f64;
        for a in 0..n {
            let ad = algebra.ad(&AlgebraVector::basis(n, a))?;
            let s = ad.transpose().matmul(g).add(&g.matmul(&ad));
            inv_res = inv_res.max(s.max_abs());
        }
        if inv_res > INCLUSION_TOL {
            return Err(Error::GramNotAdInvariant { residual: inv_res });
        }
        let q = h_basis.len();
        let projector = if q == 0 {
            Mat::identity(n)
        } else {
            let cols: Vec<Vec<f64>> = h_basis.iter().map(|v| v.coords().to_vec()).collect();
            let hb = Mat::from_columns(&cols)?;
            let ghb = g.matmul(&hb);
            let hg = hb.transpose().matmul(&ghb);
            let ev = symmetric_eigenvalues(&hg);
            let largest = ev.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
            let smallest = ev.iter().fold(f64::INFINITY, |m, v| m.min(libm::fabs(*v)));
            if largest == 0.0 || smallest < DEGENERACY_RATIO * largest {
                return Err(Error::DegenerateSubalgebra);
            }
            let hg_inv = hg.inverse().map_err(|_| Error::DegenerateSubalgebra)?;
            // Projector onto 𝔥^⊥ along 𝔥.
            Mat::identity(n).sub(&hb.matmul(&hg_inv).matmul(&ghb.transpose()))
        };
        let m_basis = range_basis(&projector);
        let dec = Self::new(algebra, h_basis, m_basis, Vec::new())?;
        let big_n = dec.m_dim();
        let mut gm = Mat::zeros(big_n, big_n);
        for i in 0..big_n {
            let gi = g.mul_vec(dec.m_basis[i].coords());
            for j in i..big_n {
                let v = linalg::dot(&gi, dec.m_basis[j].coords());
                gm[(i, j)] = v;
                gm[(j, i)] = v;
            }
        }
        let metric = MetricOnM::new(gm)?;
        Ok((dec, metric))
    }

    pub fn algebra(&self) -> &Arc<StructuredLieAlgebra> {
        &self.algebra
    }

    pub fn h_basis(&self) -> &[AlgebraVector] {
        &self.h_basis
    }

    pub fn m_basis(&self) -> &[AlgebraVector] {
        &self.m_basis
    }

    pub fn h_generators(&self) -> &[GroupElement] {
        &self.h_generators
    }

    /// `q = dim 𝔥`
    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    /// `N = dim 𝔪`
    pub fn m_dim(&self) -> usize {
        self.m_basis.len()
    }

    pub fn pr_h(&self) -> &Mat {
        &self.pr_h
    }

    pub fn pr_m(&self) -> &Mat {
        &self.pr_m
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn residuals(&self) -> &DecompositionResiduals {
        &self.residuals
    }

    pub fn m_bracket_table(&self) -> &Tensor3 {
        &self.m_bracket
    }

    /// `[A_i, A_j]_𝔥` in 𝔥-coordinates.
    pub fn h_bracket_coords(&self, i: usize, j: usize) -> Vec<f64> {
        let n = self.m_dim();
        (0..self.h_dim())
            .map(|a| self.h_bracket[(a * n + i) * n + j])
            .collect()
    }

    /// Matrix of `X ↦ [η_a, X]` on 𝔪 for the 𝔥-basis vector `η_a`.
    pub fn h_action(&self, a: usize) -> &Mat {
        &self.h_action[a]
    }

    fn check_algebra_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.algebra.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_m_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.m_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.m_dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    fn full_bracket(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        self.algebra.bracket_coords(a, b)
    }

    /// (𝔥-coordinates, 𝔪-coordinates) of a ξ-coordinate vector.
    pub(crate) fn split(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut c = self.change_inv.mul_vec(v);
        let m = c.split_off(self.h_dim());
        (c, m)
    }

    pub fn project_m(&self, a: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_algebra_len(a.coords())?;
        Ok(AlgebraVector::new(self.pr_m.mul_vec(a.coords())))
    }

    pub fn project_h(&self, a: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_algebra_len(a.coords())?;
        Ok(AlgebraVector::new(self.pr_h.mul_vec(a.coords())))
    }

    /// Coordinates of `pr_𝔪(a)` with respect to `A_1, …, A_N`.
    pub fn m_coords(&self, a: &AlgebraVector) -> Result<Vec<f64>> {
        self.check_algebra_len(a.coords())?;
        Ok(self.split(a.coords()).1)
    }

    /// Coordinates of `pr_𝔥(a)` with respect to the 𝔥-basis.
    pub fn h_coords(&self, a: &AlgebraVector) -> Result<Vec<f64>> {
        self.check_algebra_len(a.coords())?;
        Ok(self.split(a.coords()).0)
    }

    /// `Σ x_i A_i` as an element of 𝔤.
    pub fn from_m_coords(&self, x: &[f64]) -> Result<AlgebraVector> {
        self.check_m_len(x)?;
        let mut v = vec![0.0; self.algebra.dim()];
        for (a, &xi) in self.m_basis.iter().zip(x) {
            for (o, &c) in v.iter_mut().zip(a.coords()) {
                *o += xi * c;
            }
        }
        Ok(AlgebraVector::new(v))
    }

    /// `Σ y_a η_a` as an element of 𝔤.
    pub fn from_h_coords(&self, y: &[f64]) -> Result<AlgebraVector> {
        if y.len() != self.h_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.h_dim(),
                found: y.len(),
            });
        }
        let mut v = vec![0.0; self.algebra.dim()];
        for (a, &ya) in self.h_basis.iter().zip(y) {
            for (o, &c) in v.iter_mut().zip(a.coords()) {
                *o += ya * c;
            }
        }
        Ok(AlgebraVector::new(v))
    }

    /// `[X, Y]_𝔪` for X, Y given in 𝔪-coordinates.
    pub fn bracket_m(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_m_len(x)?;
        self.check_m_len(y)?;
        Ok(self.m_bracket.contract(x, y))
    }

    /// Matrix `Σ x_i matrix(A_i)`.
    pub fn m_matrix(&self, x: &[f64]) -> Result<Mat> {
        self.check_m_len(x)?;
        let ms = self.m_matrices.as_ref().ok_or(Error::MissingMatrixRealization)?;
        let d = self.algebra.matrix_size().unwrap_or(0);
        let mut out = Mat::zeros(d, d);
        for (m, &xi) in ms.iter().zip(x) {
            if xi != 0.0 {
                out.axpy(xi, m);
            }
        }
        Ok(out)
    }

    /// Matrix of `Ad_g` restricted to 𝔪 in 𝔪-coordinates, and the largest
    /// 𝔥-component of `Ad_g A_i` (zero when g normalizes 𝔪).
    pub fn isotropy_on_m(&self, g: &GroupElement) -> Result<(Mat, f64)> {
        let ad = self.algebra.adjoint(g)?;
        let big_n = self.m_dim();
        let mut out = Mat::zeros(big_n, big_n);
        let mut leak = 0.0f64;
        for (i, a) in self.m_basis.iter().enumerate() {
            let img = ad.mul_vec(a.coords());
            let (h, m) = self.split(&img);
            leak = leak.max(linalg::norm_inf(&h));
            for (k, &v) in m.iter().enumerate() {
                out[(k, i)] = v;
            }
        }
        Ok((out, leak))
    }

    /// Finite samples of H used by the invariance checks: the explicit
    /// generators followed by `exp(t η_a)` for the sample times.
    fn finite_samples(&self) -> Result<Vec<(String, Mat)>> {
        let mut out = Vec::new();
        for (idx, g) in self.h_generators.iter().enumerate() {
            out.push((format!("h_generators[{idx}]"), self.isotropy_on_m(g)?.0));
        }
        if self.algebra.matrix_basis().is_some() {
            for (a, eta) in self.h_basis.iter().enumerate() {
                for &t in &INVARIANCE_SAMPLE_TIMES {
                    let h = self.algebra.group_exp(eta, t)?;
                    out.push((format!("exp({t}·eta_{a})"), self.isotropy_on_m(&h)?.0));
                }
            }
        }
        Ok(out)
    }

    fn invariance_scope(&self) -> String {
        let mut s = String::from("identity component of H (infinitesimal)");
        if self.algebra.matrix_basis().is_some() && self.h_dim() > 0 {
            s.push_str(" + exp samples t in {0.3, 0.7, 1.1}");
        }
        if !self.h_generators.is_empty() {
            s.push_str(&format!(" + {} discrete generator(s)", self.h_generators.len()));
        }
        s
    }

    /// Ad(H)-invariance of a bilinear map `α: 𝔪 × 𝔪 → 𝔪` given by its
    /// coefficient array `a[k][i][j]`.
    pub fn check_bilinear_invariance(&self, coeffs: &Tensor3) -> CheckReport {
        const NAME: &str = "ad_h_invariance_bilinear";
        let n = self.m_dim();
        if coeffs.dim() != n {
            return CheckReport::new(NAME, f64::INFINITY, INVARIANCE_TOL).with_witnesses(vec![format!(
                "alpha has dimension {}, m has dimension {n}",
                coeffs.dim()
            )]);
        }
        let mut worst = Worst::default();
        for (a, d) in self.h_action.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut r = 0.0;
                        for l in 0..n {
                            r += d[(k, l)] * coeffs.get(l, i, j)
                                - coeffs.get(k, l, j) * d[(l, i)]
                                - coeffs.get(k, i, l) * d[(l, j)];
                        }
                        worst.observe(libm::fabs(r), INVARIANCE_TOL, || {
                            format!("eta_{a}, (i,j,k)=({i},{j},{k}): {:e}", libm::fabs(r))
                        });
                    }
                }
            }
        }
        match self.finite_samples() {
            Ok(samples) => {
                for (label, m) in samples {
                    for i in 0..n {
                        for j in 0..n {
                            let lhs = m.mul_vec(&(0..n).map(|k| coeffs.get(k, i, j)).collect::<Vec<_>>());
                            let rhs = coeffs.contract(&m.column(i), &m.column(j));
                            let r = linalg::max_abs_diff(&lhs, &rhs);
                            worst.observe(r, INVARIANCE_TOL, || format!("{label}, (i,j)=({i},{j}): {r:e}"));
                        }
                    }
                }
            }
            Err(e) => worst.observe(f64::INFINITY, INVARIANCE_TOL, || format!("{e}")),
        }
        worst
            .into_report(NAME, INVARIANCE_TOL)
            .with_scope(self.invariance_scope())
    }

    /// Ad(H)-invariance of a scalar product on 𝔪.
    pub fn check_metric_invariance(&self, metric: &MetricOnM) -> CheckReport {
        const NAME: &str = "metric_invariance";
        let n = self.m_dim();
        if metric.dim() != n {
            return CheckReport::new(NAME, f64::INFINITY, INVARIANCE_TOL).with_witnesses(vec![format!(
                "gram has dimension {}, m has dimension {n}",
                metric.dim()
            )]);
        }
        let g = metric.gram();
        let mut worst = Worst::default();
        for (a, d) in self.h_action.iter().enumerate() {
            let s = d.transpose().matmul(g).add(&g.matmul(d));
            for i in 0..n {
                for j in 0..n {
                    let r = libm::fabs(s[(i, j)]);
                    worst.observe(r, INVARIANCE_TOL, || format!("eta_{a}, (i,j)=({i},{j}): {r:e}"));
                }
            }
        }
        match self.finite_samples() {
            Ok(samples) => {
                for (label, m) in samples {
                    let r = m.transpose().matmul(g).matmul(&m).sub(g).max_abs();
                    worst.observe(r, INVARIANCE_TOL, || format!("{label}: {r:e}"));
                }
            }
            Err(e) => worst.observe(f64::INFINITY, INVARIANCE_TOL, || format!("{e}")),
        }
        worst
            .into_report(NAME, INVARIANCE_TOL)
            .with_scope(self.invariance_scope())
    }

    /// Construction-time invariants restated as reports.
    pub fn structural_reports(&self) -> Vec<CheckReport> {
        let r = &self.residuals;
        let mut out = vec![
            CheckReport::new("projections", r.projection, PROJECTION_TOL),
            CheckReport::new("subalgebra", r.subalgebra, INCLUSION_TOL),
            CheckReport::new("reductivity", r.reductivity, INCLUSION_TOL),
        ];
        if !self.h_generators.is_empty() {
            out.push(CheckReport::new(
                "generator_reductivity",
                r.generators,
                GENERATOR_TOL,
            ));
        }
        if self.symmetric {
            out.push(CheckReport::new("symmetric_pair", r.symmetric, INCLUSION_TOL));
        }
        out
    }
}

/// Nondegenerate symmetric scalar product on 𝔪, possibly indefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricOnM {
    gram: Mat,
    signature: (usize, usize),
    inverse: Mat,
}

impl MetricOnM {
    /// Accepts an exactly symmetric, nondegenerate Gram matrix; the signature
    /// is read off the eigenvalue signs.
    pub fn new(gram: Mat) -> Result<Self> {
        let signature = check_symmetric_nondegenerate(&gram)?;
        let inverse = gram.inverse()?;
        Ok(Self {
            gram,
            signature,
            inverse,
        })
    }

    /// As [`MetricOnM::new`], additionally requiring a declared signature.
    pub fn with_signature(gram: Mat, signature: (usize, usize)) -> Result<Self> {
        let m = Self::new(gram)?;
        if m.signature != signature {
            return Err(Error::SignatureMismatch {
                expected: signature,
                found: m.signature,
            });
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            gram: Mat::identity(n),
            signature: (n, 0),
            inverse: Mat::identity(n),
        }
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn inverse(&self) -> &Mat {
        &self.inverse
    }

    /// `(p, q)`: counts of positive and negative eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(x, &self.gram.mul_vec(y))
    }
}

fn check_symmetric_nondegenerate(g: &Mat) -> Result<(usize, usize)> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            expected: g.rows(),
            found: g.cols(),
        });
    }
    if !g.is_finite() {
        return Err(Error::NonFinite("gram"));
    }
    if !g.is_exactly_symmetric() {
        return Err(Error::AsymmetricGram);
    }
    if g.rows() == 0 {
        return Ok((0, 0));
    }
    let ev = symmetric_eigenvalues(g);
    let largest = ev.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    let smallest = ev.iter().fold(f64::INFINITY, |m, v| m.min(libm::fabs(*v)));
    let ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
    if ratio < DEGENERACY_RATIO {
        return Err(Error::DegenerateMetric { ratio });
    }
    let p = ev.iter().filter(|&&v| v > 0.0).count();
    Ok((p, ev.len() - p))
}

/// Basis of the column space of a projector: the rank-revealing pivot
/// columns, in ascending column order.
fn range_basis(p: &Mat) -> Vec<AlgebraVector> {
    let qr = ColPivQr::new(p);
    let rank = if p.max_abs() == 0.0 { 0 } else { qr.rank(RANK_TOL) };
    let mut cols: Vec<usize> = qr.permutation()[..rank].to_vec();
    cols.sort_unstable();
    cols.into_iter()
        .map(|j| AlgebraVector::new(p.column(j)))
        .collect()
}
