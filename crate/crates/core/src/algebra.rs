//! Finite-dimensional Lie algebras given by structure constants, optionally
//! realized by matrices, and the matrix group elements generated from them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, ColPivQr, Lu, Mat};

/// Structure constants are rejected when antisymmetry fails by more than this.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Per-entry bound on the Jacobi identity.
pub const JACOBI_TOL: f64 = 1e-12;
/// Matrix commutators vs structure constants, per entry.
pub const COMMUTATOR_TOL: f64 = 1e-10;
/// Residual allowed when expressing a matrix in the realized basis.
pub const BASIS_RESIDUAL_TOL: f64 = 1e-8;
/// Relative threshold for rank decisions on basis matrices.
pub const RANK_TOL: f64 = 1e-10;
/// `|det g|` below this is treated as singular.
pub const DETERMINANT_TOL: f64 = 1e-12;
/// Default bound on `‖gᵀg − I‖` for orthogonal groups.
pub const GROUP_DRIFT_TOL: f64 = 1e-8;

/// Coefficient vector in the ξ-basis of an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraVector(Vec<f64>);

impl AlgebraVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The `i`-th basis vector ξ_i.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn norm_inf(&self) -> f64 {
        linalg::norm_inf(&self.0)
    }
}

impl From<Vec<f64>> for AlgebraVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Invertible real matrix acting as an element of a matrix Lie group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: Mat,
}

impl GroupElement {
    pub fn new(matrix: Mat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("group element"));
        }
        let determinant = matrix.determinant().unwrap_or(0.0);
        if libm::fabs(determinant) < DETERMINANT_TOL {
            return Err(Error::NotInvertible { determinant });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: Mat) -> Self {
        Self { matrix }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: Mat::identity(d),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.matmul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.inverse()?,
        })
    }

    /// `max |(gᵀg − I)_ij|`
    pub fn orthogonality_drift(&self) -> f64 {
        let d = self.size();
        self.matrix
            .transpose()
            .matmul(&self.matrix)
            .sub(&Mat::identity(d))
            .max_abs()
    }
}

/// Finite-dimensional real Lie algebra.
///
/// The bracket is `[ξ_i, ξ_j] = Σ_k c[k][i][j] ξ_k`. Constants are stored
/// dense and are exactly antisymmetric after construction. When a matrix
/// basis is attached, the commutators of the basis matrices agree with the
/// constants to [`COMMUTATOR_TOL`].
#[derive(Clone, Debug)]
pub struct StructuredLieAlgebra {
    name: String,
    dim: usize,
    constants: Vec<f64>,
    matrix_basis: Option<Vec<Mat>>,
    solver: Option<BasisSolver>,
    jacobi_residual: f64,
    commutator_residual: Option<f64>,
    orthogonal: bool,
}

impl StructuredLieAlgebra {
    /// Builds an algebra from dense constants `c[k][i][j]`, flattened as
    /// `(k * n + i) * n + j`.
    pub fn from_structure_constants(
        name: impl Into<String>,
        dim: usize,
        constants: Vec<f64>,
    ) -> Result<Self> {
        let constants = validate_constants(dim, constants)?;
        let jacobi_residual = jacobi_residual(dim, &constants);
        if jacobi_residual > JACOBI_TOL {
            return Err(Error::JacobiViolated {
                residual: jacobi_residual,
            });
        }
        Ok(Self {
            name: name.into(),
            dim,
            constants,
            matrix_basis: None,
            solver: None,
            jacobi_residual,
            commutator_residual: None,
            orthogonal: false,
        })
    }

    /// Builds an algebra from linearly independent matrices closed under the
    /// commutator; the structure constants are read off the commutators.
    pub fn from_matrix_basis(name: impl Into<String>, basis: Vec<Mat>) -> Result<Self> {
        let solver = BasisSolver::new(&basis)?;
        let n = basis.len();
        let mut constants = vec![0.0; n * n * n];
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let comm = basis[i].commutator(&basis[j]);
                let (coords, residual) = solver.express(&comm);
                worst = worst.max(residual);
                if residual > COMMUTATOR_TOL {
                    return Err(Error::CommutatorMismatch { i, j, residual });
                }
                for (k, &v) in coords.iter().enumerate() {
                    constants[(k * n + i) * n + j] = v;
                    constants[(k * n + j) * n + i] = -v;
                }
            }
        }
        let jacobi = jacobi_residual(n, &constants);
        if jacobi > JACOBI_TOL {
            return Err(Error::JacobiViolated { residual: jacobi });
        }
        let orthogonal = basis.iter().all(is_skew);
        Ok(Self {
            name: name.into(),
            dim: n,
            constants,
            matrix_basis: Some(basis),
            solver: Some(solver),
            jacobi_residual: jacobi,
            commutator_residual: Some(worst),
            orthogonal,
        })
    }

    /// Both pictures supplied; they must agree to [`COMMUTATOR_TOL`].
    pub fn from_parts(
        name: impl Into<String>,
        dim: usize,
        constants: Vec<f64>,
        basis: Vec<Mat>,
    ) -> Result<Self> {
        let mut alg = Self::from_structure_constants(name, dim, constants)?;
        if basis.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: basis.len(),
            });
        }
        let solver = BasisSolver::new(&basis)?;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i + 1..dim {
                let comm = basis[i].commutator(&basis[j]);
                let mut expected = Mat::zeros(comm.rows(), comm.cols());
                for (k, bk) in basis.iter().enumerate() {
                    expected.axpy(alg.constant(k, i, j), bk);
                }
                let residual = comm.sub(&expected).max_abs();
                worst = worst.max(residual);
                if residual > COMMUTATOR_TOL {
                    return Err(Error::CommutatorMismatch { i, j, residual });
                }
            }
        }
        alg.orthogonal = basis.iter().all(is_skew);
        alg.matrix_basis = Some(basis);
        alg.solver = Some(solver);
        alg.commutator_residual = Some(worst);
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.constants[(k * n + i) * n + j]
    }

    /// Flattened `c[k][i][j]`.
    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    pub fn matrix_basis(&self) -> Option<&[Mat]> {
        self.matrix_basis.as_deref()
    }

    /// Side length `d` of the realizing matrices.
    pub fn matrix_size(&self) -> Option<usize> {
        self.matrix_basis.as_ref().and_then(|b| b.first()).map(Mat::rows)
    }

    /// Maximum per-entry Jacobi residual, computed at construction.
    pub fn jacobi_residual(&self) -> f64 {
        self.jacobi_residual
    }

    /// Maximum per-entry mismatch between basis commutators and constants.
    pub fn commutator_residual(&self) -> Option<f64> {
        self.commutator_residual
    }

    /// True when every basis matrix is skew-symmetric, so `exp` lands in an
    /// orthogonal group.
    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `[a, b]` from the structure constants.
    pub fn bracket(&self, a: &AlgebraVector, b: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_len(a.coords())?;
        self.check_len(b.coords())?;
        Ok(AlgebraVector(self.bracket_coords(a.coords(), b.coords())))
    }

    pub(crate) fn bracket_coords(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0.0 {
                    continue;
                }
                let row = &self.constants[(k * n + i) * n..(k * n + i + 1) * n];
                s += ai * linalg::dot(row, b);
            }
            *o = s;
        }
        out
    }

    /// Matrix of `ad_a = [a, ·]` in the ξ-basis.
    pub fn ad(&self, a: &AlgebraVector) -> Result<Mat> {
        self.check_len(a.coords())?;
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            for (i, &ai) in a.coords().iter().enumerate() {
                if ai == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m[(k, j)] += ai * self.constant(k, i, j);
                }
            }
        }
        Ok(m)
    }

    /// `Σ a_i · matrix(ξ_i)`
    pub fn matrix_of(&self, a: &AlgebraVector) -> Result<Mat> {
        self.check_len(a.coords())?;
        self.matrix_of_coords(a.coords())
    }

    pub(crate) fn matrix_of_coords(&self, a: &[f64]) -> Result<Mat> {
        let basis = self
            .matrix_basis
            .as_ref()
            .ok_or(Error::MissingMatrixRealization)?;
        let d = basis[0].rows();
        let mut m = Mat::zeros(d, d);
        for (bi, &ai) in basis.iter().zip(a) {
            if ai != 0.0 {
                m.axpy(ai, bi);
            }
        }
        Ok(m)
    }

    /// Coordinates of a matrix in the realized basis. Fails when the
    /// least-squares residual exceeds [`BASIS_RESIDUAL_TOL`].
    pub fn coords_of_matrix(&self, m: &Mat) -> Result<AlgebraVector> {
        let (coords, residual) = self.coords_with_residual(m)?;
        if residual > BASIS_RESIDUAL_TOL {
            return Err(Error::NotInBasis { residual });
        }
        Ok(AlgebraVector(coords))
    }

    /// Least-squares coordinates and the max-entry residual, with no
    /// threshold applied.
    pub fn coords_with_residual(&self, m: &Mat) -> Result<(Vec<f64>, f64)> {
        let solver = self.solver.as_ref().ok_or(Error::MissingMatrixRealization)?;
        let d = self.matrix_size().unwrap_or(0);
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.rows(),
            });
        }
        Ok(solver.express(m))
    }

    /// `exp(t · matrix(a))`
    pub fn group_exp(&self, a: &AlgebraVector, t: f64) -> Result<GroupElement> {
        let m = self.matrix_of(a)?;
        Ok(GroupElement::new_unchecked(linalg::expm(&m.scale(t))))
    }

    /// Matrix of `Ad_g: ξ ↦ g ξ g⁻¹` in the ξ-basis.
    pub fn adjoint(&self, g: &GroupElement) -> Result<Mat> {
        let basis = self
            .matrix_basis
            .as_ref()
            .ok_or(Error::MissingMatrixRealization)?;
        let d = basis[0].rows();
        if g.size() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.size(),
            });
        }
        let ginv = Lu::new(g.matrix())?.inverse()?;
        let mut cols = Vec::with_capacity(self.dim);
        for b in basis {
            let conj = g.matrix().matmul(b).matmul(&ginv);
            cols.push(self.coords_of_matrix(&conj)?.into_coords());
        }
        Mat::from_columns(&cols)
    }

    /// Validates a user-supplied element: right size, invertible and, for
    /// orthogonal algebras, within `drift_tol` of the orthogonal group.
    pub fn validate_element(&self, g: &GroupElement, drift_tol: f64) -> Result<()> {
        let d = self.matrix_size().ok_or(Error::MissingMatrixRealization)?;
        if g.size() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.size(),
            });
        }
        if self.orthogonal {
            let drift = g.orthogonality_drift();
            if drift > drift_tol {
                return Err(Error::InvalidParameter(alloc::format!(
                    "element drifts {drift:e} from the orthogonal group"
                )));
            }
        }
        Ok(())
    }
}

fn is_skew(m: &Mat) -> bool {
    m.add(&m.transpose()).max_abs() <= 1e-14
}

fn validate_constants(n: usize, mut c: Vec<f64>) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "algebra dimension must be positive".into(),
        ));
    }
    if c.len() != n * n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n * n,
            found: c.len(),
        });
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("structure constants"));
    }
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let a = c[(k * n + i) * n + j];
                let b = c[(k * n + j) * n + i];
                let residual = libm::fabs(a + b);
                if residual > ANTISYMMETRY_TOL {
                    return Err(Error::NotAntisymmetric { k, i, j, residual });
                }
                // Canonical form: the upper entry wins, the lower is its exact negative.
                if i == j {
                    c[(k * n + i) * n + j] = 0.0;
                } else {
                    c[(k * n + j) * n + i] = -a;
                }
            }
        }
    }
    Ok(c)
}

fn jacobi_residual(n: usize, c: &[f64]) -> f64 {
    let at = |k: usize, i: usize, j: usize| c[(k * n + i) * n + j];
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s +=
                            at(m, i, j) * at(l, m, k) + at(m, j, k) * at(l, m, i) + at(m, k, i) * at(l, m, j);
                    }
                    worst = worst.max(libm::fabs(s));
                }
            }
        }
    }
    worst
}

/// Coordinates in a matrix basis via the normal equations of the
/// Frobenius inner product. Independence is established by a
/// rank-revealing QR first; for bases orthogonal in that inner product
/// (the so(n) bases) the solve is exact on integer data.
#[derive(Clone, Debug)]
struct BasisSolver {
    basis: Vec<Mat>,
    gram: Lu,
}

impl BasisSolver {
    fn new(basis: &[Mat]) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty matrix basis".into()));
        }
        let d = basis[0].rows();
        for b in basis {
            if b.rows() != d || b.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: b.rows().max(b.cols()),
                });
            }
            if !b.is_finite() {
                return Err(Error::NonFinite("matrix basis"));
            }
        }
        let flat: Vec<Vec<f64>> = basis.iter().map(|b| b.as_slice().to_vec()).collect();
        let stacked = Mat::from_columns(&flat)?;
        if ColPivQr::new(&stacked).rank(RANK_TOL) < n {
            return Err(Error::BasisDependent);
        }
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = linalg::dot(basis[i].as_slice(), basis[j].as_slice());
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        let gram = Lu::new(&g).map_err(|_| Error::BasisDependent)?;
        Ok(Self {
            basis: basis.to_vec(),
            gram,
        })
    }

    /// Coordinates and the max-entry reconstruction residual.
    fn express(&self, m: &Mat) -> (Vec<f64>, f64) {
        let rhs: Vec<f64> = self
            .basis
            .iter()
            .map(|b| linalg::dot(b.as_slice(), m.as_slice()))
            .collect();
        let coords = self.gram.solve(&rhs);
        let mut rebuilt = m.clone();
        for (b, &c) in self.basis.iter().zip(&coords) {
            if c != 0.0 {
                rebuilt.axpy(-c, b);
            }
        }
        (coords, rebuilt.max_abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(i: usize) -> AlgebraVector {
        AlgebraVector::basis(3, i)
    }

    #[test]
    fn so3_bracket_matches_matrix_commutator() {
        let so3 = catalog::so3();
        let basis = so3.matrix_basis().unwrap();
        // [E1, E2] = E3 through both routes.
        let via_constants = so3.bracket(&e(0), &e(1)).unwrap();
        assert_eq!(via_constants.coords(), &[0.0, 0.0, 1.0]);
        let comm = basis[0].commutator(&basis[1]);
        assert!(comm.sub(&basis[2]).max_abs() < 1e-15);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear() {
        let so3 = catalog::so3();
        let x = AlgebraVector::new(vec![0.3, -1.2, 2.0]);
        assert!(so3.bracket(&x, &x).unwrap().norm_inf() == 0.0);
        let twice = so3.bracket(&e(0).scale(2.0), &e(1)).unwrap();
        assert_eq!(twice.coords(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        let so3 = catalog::so3();
        let bad = AlgebraVector::new(vec![1.0, 2.0]);
        assert!(matches!(
            so3.bracket(&bad, &e(0)),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn ad_columns_are_brackets() {
        let so3 = catalog::so3();
        assert_eq!(so3.ad(&AlgebraVector::zeros(3)).unwrap(), Mat::zeros(3, 3));
        let ad3 = so3.ad(&e(2)).unwrap();
        // ad(E3) E1 = [E3, E1] = E2
        assert_eq!(ad3.mul_vec(&[1.0, 0.0, 0.0]), vec![0.0, 1.0, 0.0]);
        let a = AlgebraVector::new(vec![0.5, 0.25, -1.0]);
        let ada = so3.ad(&a).unwrap();
        assert!(linalg::norm_inf(&ada.mul_vec(a.coords())) < 1e-15);
        for j in 0..3 {
            let col = ada.column(j);
            let br = so3.bracket(&a, &e(j)).unwrap();
            assert!(linalg::max_abs_diff(&col, br.coords()) < 1e-15);
        }
    }

    #[test]
    fn group_exp_rodrigues() {
        let so3 = catalog::so3();
        assert_eq!(so3.group_exp(&e(2), 0.0).unwrap().matrix(), &Mat::identity(3));
        for &theta in &[0.3, 1.7, -2.5, 7.0] {
            let g = so3.group_exp(&e(2), theta).unwrap();
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            let rz = Mat::from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
            assert!(g.matrix().sub(&rz).max_abs() < 1e-13);
        }
        let a = AlgebraVector::new(vec![0.7, -0.4, 1.3]);
        let prod = so3
            .group_exp(&a, 1.9)
            .unwrap()
            .compose(&so3.group_exp(&a, -1.9).unwrap());
        assert!(prod.matrix().sub(&Mat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn adjoint_matches_exp_of_ad_series() {
        let so3 = catalog::so3();
        assert!(
            so3.adjoint(&GroupElement::identity(3))
                .unwrap()
                .sub(&Mat::identity(3))
                .max_abs()
                < 1e-15
        );
        let a = AlgebraVector::new(vec![0.4, -0.9, 0.6]);
        let ad = so3.ad(&a).unwrap();
        // Oracle: 20-term power series of exp(ad_a).
        let mut series = Mat::identity(3);
        let mut term = Mat::identity(3);
        for k in 1..=20 {
            term = term.matmul(&ad).scale(1.0 / k as f64);
            series = series.add(&term);
        }
        let big = so3.adjoint(&so3.group_exp(&a, 1.0).unwrap()).unwrap();
        assert!(big.sub(&series).max_abs() < 1e-12);
    }

    #[test]
    fn adjoint_rejects_non_normalizing_element() {
        let so3 = catalog::so3();
        let g = GroupElement::new(Mat::diag(&[1.0, 2.0, 3.0])).unwrap();
        assert!(matches!(so3.adjoint(&g), Err(Error::NotInBasis { .. })));
    }

    #[test]
    fn rejects_non_antisymmetric_constants() {
        let mut c = vec![0.0; 8];
        c[1] = 1.0; // c[0][0][1]
        c[2] = 0.5; // c[0][1][0], should be -1
        assert!(matches!(
            StructuredLieAlgebra::from_structure_constants("bad", 2, c),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn rejects_jacobi_violation() {
        // [e0,e1] = e2, [e1,e2] = e0, [e2,e0] = 2 e1 is not a Lie algebra
        // unless the third coefficient matches the other two up to sign pattern
        // compatible with Jacobi; pick one that breaks it.
        let n = 3;
        let mut c = vec![0.0; 27];
        let mut set = |k: usize, i: usize, j: usize, v: f64| {
            c[(k * n + i) * n + j] = v;
            c[(k * n + j) * n + i] = -v;
        };
        set(2, 0, 1, 1.0);
        set(0, 1, 2, 1.0);
        set(1, 2, 0, 1.0);
        set(2, 0, 2, 1.0);
        assert!(matches!(
            StructuredLieAlgebra::from_structure_constants("bad", 3, c),
            Err(Error::JacobiViolated { .. })
        ));
    }

    #[test]
    fn structure_only_algebra_has_no_exp() {
        let alg = StructuredLieAlgebra::from_structure_constants(
            "so3-abstract",
            3,
            catalog::so3().constants().to_vec(),
        )
        .unwrap();
        assert_eq!(
            alg.group_exp(&e(0), 1.0).unwrap_err(),
            Error::MissingMatrixRealization
        );
    }

    #[test]
    fn from_parts_detects_inconsistent_constants() {
        let so3 = catalog::so3();
        let mut c = so3.constants().to_vec();
        for v in c.iter_mut() {
            *v = -*v;
        }
        let basis = so3.matrix_basis().unwrap().to_vec();
        assert!(matches!(
            StructuredLieAlgebra::from_parts("flipped", 3, c, basis),
            Err(Error::CommutatorMismatch { .. })
        ));
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = catalog::so3().matrix_basis().unwrap().to_vec();
        let dup = alloc::vec![b[0].clone(), b[1].clone(), b[0].add(&b[1])];
        assert_eq!(
            StructuredLieAlgebra::from_matrix_basis("dup", dup).unwrap_err(),
            Error::BasisDependent
        );
    }

    #[test]
    fn singular_element_rejected() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(GroupElement::new(m), Err(Error::NotInvertible { .. })));
    }
}
