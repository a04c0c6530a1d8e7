//! Invariant covariant derivatives ∇^α stored as coefficient arrays on the
//! 𝔪-basis, with torsion, curvature and the metric diagnostics.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Lu, Tensor3};
use crate::reductive::{MetricOnM, ReductiveDecomposition, INVARIANCE_TOL};
use crate::report::{CheckReport, Worst};

/// Algebraic identities (metric compatibility, natural reductivity,
/// curvature leak).
pub const IDENTITY_TOL: f64 = 1e-10;
/// Planes with `⟨X,X⟩⟨Y,Y⟩ − ⟨X,Y⟩²` below this are refused.
pub const PLANE_TOL: f64 = 1e-12;

const TAINT: &str = "alpha unchecked: not verified Ad(H)-invariant, nabla may not be well-defined on G/H";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlphaLabel {
    Explicit,
    CanonicalFirst,
    CanonicalSecond,
    LeviCivita,
}

impl AlphaLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Explicit => "explicit",
            Self::CanonicalFirst => "canonical_first",
            Self::CanonicalSecond => "canonical_second",
            Self::LeviCivita => "levi_civita",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "explicit" => Some(Self::Explicit),
            "canonical_first" => Some(Self::CanonicalFirst),
            "canonical_second" => Some(Self::CanonicalSecond),
            "levi_civita" => Some(Self::LeviCivita),
            _ => None,
        }
    }
}

impl fmt::Display for AlphaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ad(H)-invariant bilinear map `α: 𝔪 × 𝔪 → 𝔪`,
/// `α(A_i, A_j) = Σ_k a[k][i][j] A_k`.
#[derive(Clone, Debug)]
pub struct AlphaMap {
    dec: Arc<ReductiveDecomposition>,
    coeffs: Tensor3,
    label: AlphaLabel,
    unchecked: bool,
    invariance: CheckReport,
}

impl AlphaMap {
    fn build(dec: Arc<ReductiveDecomposition>, coeffs: Tensor3, label: AlphaLabel) -> Result<Self> {
        if coeffs.dim() != dec.m_dim() {
            return Err(Error::DimensionMismatch {
                expected: dec.m_dim(),
                found: coeffs.dim(),
            });
        }
        if coeffs.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("alpha coefficients"));
        }
        let invariance = dec.check_bilinear_invariance(&coeffs);
        Ok(Self {
            dec,
            coeffs,
            label,
            unchecked: false,
            invariance,
        })
    }

    /// User-supplied coefficients; rejected unless Ad(H)-invariant.
    pub fn explicit(dec: Arc<ReductiveDecomposition>, coeffs: Tensor3) -> Result<Self> {
        let a = Self::build(dec, coeffs, AlphaLabel::Explicit)?;
        if !a.invariance.pass {
            return Err(Error::AlphaNotInvariant {
                residual: a.invariance.max_residual,
            });
        }
        Ok(a)
    }

    /// Skips the invariance gate. Everything derived from the result is
    /// marked as tainted.
    pub fn explicit_unchecked(dec: Arc<ReductiveDecomposition>, coeffs: Tensor3) -> Result<Self> {
        let mut a = Self::build(dec, coeffs, AlphaLabel::Explicit)?;
        a.unchecked = !a.invariance.pass;
        Ok(a)
    }

    /// `α(X,Y) = ½[X,Y]_𝔪`
    pub fn canonical_first(dec: Arc<ReductiveDecomposition>) -> Self {
        let n = dec.m_dim();
        let bm = dec.m_bracket_table();
        let mut coeffs = Tensor3::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    coeffs.set(k, i, j, 0.5 * bm.get(k, i, j));
                }
            }
        }
        Self::build(dec, coeffs, AlphaLabel::CanonicalFirst).expect("shape matches by construction")
    }

    /// `α = 0`
    pub fn canonical_second(dec: Arc<ReductiveDecomposition>) -> Self {
        let n = dec.m_dim();
        Self::build(dec, Tensor3::zeros(n), AlphaLabel::CanonicalSecond)
            .expect("shape matches by construction")
    }

    /// `α(X,Y) = ½[X,Y]_𝔪 + U(X,Y)` with U fixed by
    /// `2⟨U(X,Y),Z⟩ = ⟨[Z,X]_𝔪,Y⟩ + ⟨X,[Z,Y]_𝔪⟩`.
    pub fn levi_civita(dec: Arc<ReductiveDecomposition>, metric: &MetricOnM) -> Result<Self> {
        let report = dec.check_metric_invariance(metric);
        if !report.pass {
            return Err(Error::MetricNotInvariant {
                residual: report.max_residual,
            });
        }
        let n = dec.m_dim();
        let g = metric.gram();
        let bm = dec.m_bracket_table();
        let lu = Lu::new(g)?;
        // gb[l][i][j] = ⟨[A_l, A_i]_𝔪, A_j⟩
        let mut gb = vec![0.0; n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    gb[(l * n + i) * n + j] = (0..n).map(|k| bm.get(k, l, i) * g[(k, j)]).sum();
                }
            }
        }
        let mut coeffs = Tensor3::zeros(n);
        for i in 0..n {
            for j in i..n {
                let r: Vec<f64> = (0..n)
                    .map(|l| 0.5 * (gb[(l * n + i) * n + j] + gb[(l * n + j) * n + i]))
                    .collect();
                let u = lu.solve(&r);
                for k in 0..n {
                    coeffs.set(k, i, j, 0.5 * bm.get(k, i, j) + u[k]);
                    coeffs.set(k, j, i, 0.5 * bm.get(k, j, i) + u[k]);
                }
            }
        }
        Self::build(dec, coeffs, AlphaLabel::LeviCivita)
    }

    pub fn decomposition(&self) -> &Arc<ReductiveDecomposition> {
        &self.dec
    }

    pub fn coeffs(&self) -> &Tensor3 {
        &self.coeffs
    }

    pub fn label(&self) -> AlphaLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    /// True for maps built with [`AlphaMap::explicit_unchecked`] that failed
    /// the invariance check.
    pub fn is_tainted(&self) -> bool {
        self.unchecked
    }

    pub fn invariance_report(&self) -> &CheckReport {
        &self.invariance
    }

    fn mark(&self, report: CheckReport) -> CheckReport {
        if self.unchecked {
            let scope = match &report.scope {
                Some(s) => format!("{s}; {TAINT}"),
                None => String::from(TAINT),
            };
            report.with_scope(scope)
        } else {
            report
        }
    }

    /// `α(X, Y)`
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.dec.check_m_len(x)?;
        self.dec.check_m_len(y)?;
        Ok(self.coeffs.contract(x, y))
    }

    /// `∇^α_X Y` at the origin: `−[X,Y]_𝔪 + α(X,Y)`.
    pub fn nabla_at_origin(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let b = self.dec.bracket_m(x, y)?;
        let a = self.eval(x, y)?;
        Ok(a.iter().zip(&b).map(|(a, b)| a - b).collect())
    }

    /// `Tor(A_i, A_j) = α(A_i,A_j) − α(A_j,A_i) − [A_i,A_j]_𝔪`.
    pub fn torsion(&self) -> TensorAtOrigin {
        let n = self.dim();
        let bm = self.dec.m_bracket_table();
        let mut t = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    let v = self.coeffs.get(k, i, j) - self.coeffs.get(k, j, i) - bm.get(k, i, j);
                    t[(k * n + i) * n + j] = v;
                    t[(k * n + j) * n + i] = -v;
                }
            }
        }
        TensorAtOrigin {
            kind: TensorKind::Torsion,
            n,
            coeffs: t,
        }
    }

    /// `R(X,Y)Z`; fails with [`Error::CurvatureLeak`] if `[[X,Y]_𝔥, Z]`
    /// carries an 𝔥-component above 1e−10.
    pub fn curvature_apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        self.dec.check_m_len(z)?;
        let alg = self.dec.algebra();
        let xv = self.dec.from_m_coords(x)?;
        let yv = self.dec.from_m_coords(y)?;
        let zv = self.dec.from_m_coords(z)?;
        let (xy_h, xy_m) = self.dec.split(&alg.bracket_coords(xv.coords(), yv.coords()));
        let xy_h = self.dec.from_h_coords(&xy_h)?;
        let (leak, hz) = self.dec.split(&alg.bracket_coords(xy_h.coords(), zv.coords()));
        let leak = linalg::norm_inf(&leak);
        if leak > IDENTITY_TOL {
            return Err(Error::CurvatureLeak { residual: leak });
        }
        let a = &self.coeffs;
        let t1 = a.contract(x, &a.contract(y, z));
        let t3 = a.contract(&xy_m, z);
        let t4 = a.contract(y, &a.contract(x, z));
        Ok((0..self.dim()).map(|l| t1[l] - hz[l] - t3[l] - t4[l]).collect())
    }

    /// `R[l][i][j][k]` = coordinates of `R(A_i, A_j) A_k`.
    pub fn curvature(&self) -> Result<TensorAtOrigin> {
        let n = self.dim();
        let mut r = vec![0.0; n * n * n * n];
        let basis = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.curvature_apply(&basis(i), &basis(j), &basis(k))?;
                    for (l, &c) in v.iter().enumerate() {
                        r[((l * n + i) * n + j) * n + k] = c;
                    }
                }
            }
        }
        Ok(TensorAtOrigin {
            kind: TensorKind::Curvature,
            n,
            coeffs: r,
        })
    }

    /// `K(X,Y) = ⟨R(X,Y)Y, X⟩ / (⟨X,X⟩⟨Y,Y⟩ − ⟨X,Y⟩²)`
    pub fn sectional_curvature(&self, metric: &MetricOnM, x: &[f64], y: &[f64]) -> Result<f64> {
        if metric.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: metric.dim(),
            });
        }
        self.dec.check_m_len(x)?;
        self.dec.check_m_len(y)?;
        let den = metric.inner(x, x) * metric.inner(y, y) - metric.inner(x, y) * metric.inner(x, y);
        if libm::fabs(den) < PLANE_TOL {
            return Err(Error::DegeneratePlane { denominator: den });
        }
        let r = self.curvature_apply(x, y, y)?;
        Ok(metric.inner(&r, x) / den)
    }

    /// Skew-adjointness `⟨α(X,Y),Z⟩ = −⟨Y,α(X,Z)⟩` over basis triples.
    pub fn is_metric(&self, metric: &MetricOnM) -> CheckReport {
        const NAME: &str = "is_metric";
        let n = self.dim();
        if metric.dim() != n {
            return CheckReport::new(NAME, f64::INFINITY, IDENTITY_TOL);
        }
        let g = metric.gram();
        let mut worst = Worst::default();
        for i in 0..n {
            // s[k][j] = ⟨A_k, α(A_i, A_j)⟩
            let s =
                |k: usize, j: usize| -> f64 { (0..n).map(|l| g[(k, l)] * self.coeffs.get(l, i, j)).sum() };
            for j in 0..n {
                for k in j..n {
                    let r = libm::fabs(s(k, j) + s(j, k));
                    worst.observe(r, IDENTITY_TOL, || format!("X=A_{i}, (Y,Z)=(A_{j},A_{k}): {r:e}"));
                }
            }
        }
        self.mark(worst.into_report(NAME, IDENTITY_TOL))
    }

    /// Infinitesimal Ad(H)-invariance of the curvature tensor:
    /// `[η,R(X,Y)Z]_𝔪 = R([η,X],Y)Z + R(X,[η,Y])Z + R(X,Y)[η,Z]`.
    pub fn curvature_invariance(&self, r: &TensorAtOrigin) -> CheckReport {
        const NAME: &str = "curvature_invariance";
        let n = self.dim();
        let mut worst = Worst::default();
        for a in 0..self.dec.h_dim() {
            let d = self.dec.h_action(a);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let mut res = 0.0;
                            for m in 0..n {
                                res += d[(l, m)] * r.get4(m, i, j, k)
                                    - r.get4(l, m, j, k) * d[(m, i)]
                                    - r.get4(l, i, m, k) * d[(m, j)]
                                    - r.get4(l, i, j, m) * d[(m, k)];
                            }
                            let res = libm::fabs(res);
                            worst.observe(res, INVARIANCE_TOL, || {
                                format!("eta_{a}, R[{l}][{i}][{j}][{k}]: {res:e}")
                            });
                        }
                    }
                }
            }
        }
        self.mark(worst.into_report(NAME, INVARIANCE_TOL))
    }

    /// Largest coefficient difference to another map on the same 𝔪.
    pub fn max_coeff_diff(&self, other: &AlphaMap) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.coeffs.max_abs_diff(&other.coeffs)
    }

    /// Wraps a report with the taint note when this map is unchecked.
    pub fn annotate(&self, report: CheckReport) -> CheckReport {
        self.mark(report)
    }
}

/// `⟨[X,Y]_𝔪, Z⟩ = ⟨X, [Y,Z]_𝔪⟩` over basis triples.
pub fn naturally_reductive_check(dec: &ReductiveDecomposition, metric: &MetricOnM) -> CheckReport {
    const NAME: &str = "naturally_reductive";
    let n = dec.m_dim();
    if metric.dim() != n {
        return CheckReport::new(NAME, f64::INFINITY, IDENTITY_TOL);
    }
    let g = metric.gram();
    let bm = dec.m_bracket_table();
    let mut worst = Worst::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs: f64 = (0..n).map(|l| bm.get(l, i, j) * g[(l, k)]).sum();
                let rhs: f64 = (0..n).map(|l| g[(i, l)] * bm.get(l, j, k)).sum();
                let r = libm::fabs(lhs - rhs);
                worst.observe(r, IDENTITY_TOL, || format!("(X,Y,Z)=(A_{i},A_{j},A_{k}): {r:e}"));
            }
        }
    }
    worst.into_report(NAME, IDENTITY_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    /// Two inputs, one output: `T[k][i][j]`.
    Torsion,
    /// Three inputs, one output: `R[l][i][j][k]`.
    Curvature,
}

impl TensorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Torsion => "torsion",
            Self::Curvature => "curvature",
        }
    }
}

/// Torsion or curvature at the origin in 𝔪-coordinates, output index first.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorAtOrigin {
    kind: TensorKind,
    n: usize,
    coeffs: Vec<f64>,
}

impl TensorAtOrigin {
    pub fn kind(&self) -> TensorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> Vec<usize> {
        match self.kind {
            TensorKind::Torsion => vec![self.n; 3],
            TensorKind::Curvature => vec![self.n; 4],
        }
    }

    /// Row-major coefficients.
    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get3(&self, k: usize, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.kind, TensorKind::Torsion);
        self.coeffs[(k * self.n + i) * self.n + j]
    }

    pub fn get4(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        debug_assert_eq!(self.kind, TensorKind::Curvature);
        self.coeffs[((l * self.n + i) * self.n + j) * self.n + k]
    }

    pub fn max_abs(&self) -> f64 {
        linalg::norm_inf(&self.coeffs)
    }

    /// Largest violation of antisymmetry in the first two inputs.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        match self.kind {
            TensorKind::Torsion => {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            worst = worst.max(libm::fabs(self.get3(k, i, j) + self.get3(k, j, i)));
                        }
                    }
                }
            }
            TensorKind::Curvature => {
                for l in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                worst = worst.max(libm::fabs(self.get4(l, i, j, k) + self.get4(l, j, i, k)));
                            }
                        }
                    }
                }
            }
        }
        worst
    }
}
