//! Space-definition files.
//!
//! A definition is a TOML document. Either a named space
//!
//! ```toml
//! space = "stiefel(4,2)"
//! ```
//!
//! or explicit `[algebra]`, `[decomposition]`, `[metric]` and `[connection]`
//! blocks. A named space may still carry `[metric]` and `[connection]`.
//! All indices are 0-based. Unknown keys are rejected.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use homspace_core::catalog::{self, Diagnostic, SpaceBundle};
use homspace_core::linalg::{Mat, Tensor3};
use homspace_core::{
    AlgebraVector, AlphaLabel, AlphaMap, CheckReport, Error, GroupElement, MetricOnM, ReductiveDecomposition,
    StructuredLieAlgebra,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Definition {
    pub space: Option<String>,
    pub name: Option<String>,
    pub algebra: Option<AlgebraBlock>,
    pub decomposition: Option<DecompositionBlock>,
    pub metric: Option<MetricBlock>,
    pub connection: Option<ConnectionBlock>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub name: Option<String>,
    pub dim: Option<usize>,
    /// Entries `[k, i, j, value]` meaning `c[k][i][j] = value`; the
    /// antisymmetric partner is filled in unless given explicitly.
    pub structure_constants: Option<Vec<Vec<f64>>>,
    /// One square matrix (list of rows) per basis element.
    pub matrix_basis: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionBlock {
    pub h_basis: Option<Vec<Vec<f64>>>,
    pub m_basis: Option<Vec<Vec<f64>>>,
    pub h_generators: Option<Vec<Vec<Vec<f64>>>>,
    pub sigma: Option<Vec<Vec<f64>>>,
    pub biinvariant_gram: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricBlock {
    pub gram: Vec<Vec<f64>>,
    pub signature: Option<[usize; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionBlock {
    pub alpha: AlphaSpec,
    #[serde(default)]
    pub unchecked: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Named(String),
    /// Entries `[k, i, j, value]`; missing coefficients are zero.
    Explicit(Vec<Vec<f64>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shortcut {
    Sphere2,
    SoN(usize),
    Stiefel(usize, usize),
    Grassmann(usize, usize),
}

impl Shortcut {
    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "sphere2" {
            return Some(Self::Sphere2);
        }
        let (head, rest) = s.split_once('(')?;
        let args: Vec<usize> = rest
            .strip_suffix(')')?
            .split(',')
            .map(|a| a.parse().ok())
            .collect::<Option<_>>()?;
        match (head, args.as_slice()) {
            ("so", [n]) => Some(Self::SoN(*n)),
            ("stiefel", [n, k]) => Some(Self::Stiefel(*n, *k)),
            ("grassmann", [n, k]) => Some(Self::Grassmann(*n, *k)),
            _ => None,
        }
    }

    fn bundle(self) -> Result<SpaceBundle, Error> {
        match self {
            Self::Sphere2 => Ok(catalog::sphere2()),
            Self::SoN(n) => {
                let alg = Arc::new(catalog::so_n(n)?);
                let dim = alg.dim();
                catalog::group_as_space(alg, Some(MetricOnM::identity(dim)))
            }
            Self::Stiefel(n, k) => catalog::stiefel(n, k),
            Self::Grassmann(n, k) => catalog::grassmann_like(n, k),
        }
    }
}

/// A definition turned into numerical objects. Construction failures are
/// kept as failed reports so that `check` can show them.
#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    pub algebra: Option<Arc<StructuredLieAlgebra>>,
    pub dec: Option<Arc<ReductiveDecomposition>>,
    pub metric: Option<MetricOnM>,
    pub alpha: Option<AlphaMap>,
    pub failures: Vec<CheckReport>,
}

impl Space {
    /// Construction failures followed by the full battery.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = self
            .failures
            .iter()
            .map(|r| Diagnostic {
                report: r.clone(),
                mandatory: true,
            })
            .collect();
        if let (Some(algebra), Some(dec)) = (&self.algebra, &self.dec) {
            let bundle = SpaceBundle {
                algebra: algebra.clone(),
                dec: dec.clone(),
                metric: self.metric.clone(),
                suggested_alphas: self.alpha.iter().cloned().collect(),
                provenance: self.name.clone(),
            };
            out.extend(bundle.diagnostics());
        }
        out
    }

    pub fn alpha_label(&self) -> &'static str {
        self.alpha.as_ref().map_or("none", |a| a.label().as_str())
    }

    pub fn require_alpha(&self) -> Result<&AlphaMap, CliError> {
        self.alpha.as_ref().ok_or_else(|| {
            let why = self
                .failures
                .iter()
                .flat_map(|f| f.witnesses.iter())
                .cloned()
                .collect::<Vec<_>>()
                .join("; ");
            CliError::Schema(format!("no connection could be built: {why}"))
        })
    }
}

/// Residual carried by a construction error, if it has one.
fn error_residual(e: &Error) -> f64 {
    match e {
        Error::NotAntisymmetric { residual, .. }
        | Error::JacobiViolated { residual }
        | Error::CommutatorMismatch { residual, .. }
        | Error::NotInBasis { residual }
        | Error::ProjectionDefect { residual }
        | Error::NotInvolution { residual }
        | Error::NotAutomorphism { residual }
        | Error::NotSymmetricPair { residual }
        | Error::GramNotAdInvariant { residual }
        | Error::MetricNotInvariant { residual }
        | Error::AlphaNotInvariant { residual }
        | Error::CurvatureLeak { residual } => *residual,
        Error::NotSubalgebra { leak, .. }
        | Error::NotReductive { leak, .. }
        | Error::GeneratorBreaksReductivity { leak, .. } => *leak,
        _ => f64::INFINITY,
    }
}

fn failure(stage: &str, tolerance: f64, e: &Error) -> CheckReport {
    let mut r = CheckReport::new(stage, error_residual(e), tolerance).with_witnesses(vec![e.to_string()]);
    // A construction error is a failure whatever the residual says.
    r.pass = false;
    r
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn check_finite(values: &[f64], what: &str) -> Result<(), CliError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(schema(format!("{what}: all numeric literals must be finite")))
    }
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<Mat, CliError> {
    for r in rows {
        check_finite(r, what)?;
    }
    if rows.is_empty() {
        return Err(schema(format!("{what}: empty matrix")));
    }
    let m = Mat::from_rows(rows).map_err(|_| schema(format!("{what}: ragged rows")))?;
    if !m.is_square() {
        return Err(schema(format!(
            "{what}: expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn square_of(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Mat, CliError> {
    let m = matrix(rows, what)?;
    if m.rows() != n {
        return Err(schema(format!(
            "{what}: expected {n}x{n}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn vectors(list: &[Vec<f64>], n: usize, what: &str) -> Result<Vec<AlgebraVector>, CliError> {
    list.iter()
        .enumerate()
        .map(|(i, v)| {
            check_finite(v, what)?;
            if v.len() != n {
                return Err(schema(format!(
                    "{what}[{i}]: expected {n} coordinates, got {}",
                    v.len()
                )));
            }
            Ok(AlgebraVector::new(v.clone()))
        })
        .collect()
}

fn index(v: f64, bound: usize, what: &str) -> Result<usize, CliError> {
    if v < 0.0 || v.fract() != 0.0 || v >= bound as f64 {
        return Err(schema(format!(
            "{what}: index {v} is not an integer in 0..{bound}"
        )));
    }
    Ok(v as usize)
}

/// Dense `[k][i][j]` array from `[k, i, j, value]` entries.
fn coefficient_entries(
    entries: &[Vec<f64>],
    n: usize,
    mirror: bool,
    what: &str,
) -> Result<Vec<f64>, CliError> {
    let mut dense = vec![0.0; n * n * n];
    let mut given = vec![false; n * n * n];
    let mut parsed = Vec::with_capacity(entries.len());
    for (e, entry) in entries.iter().enumerate() {
        check_finite(entry, what)?;
        let [k, i, j, v] = entry.as_slice() else {
            return Err(schema(format!("{what}[{e}]: expected [k, i, j, value]")));
        };
        let (k, i, j) = (index(*k, n, what)?, index(*i, n, what)?, index(*j, n, what)?);
        let at = (k * n + i) * n + j;
        if given[at] {
            return Err(schema(format!("{what}: duplicate entry for ({k}, {i}, {j})")));
        }
        given[at] = true;
        dense[at] = *v;
        parsed.push((k, i, j, *v));
    }
    if mirror {
        for (k, i, j, v) in parsed {
            let at = (k * n + j) * n + i;
            if !given[at] {
                dense[at] = -v;
            }
        }
    }
    Ok(dense)
}

impl Definition {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    fn shortcut(&self) -> Result<Option<Shortcut>, CliError> {
        match &self.space {
            None => Ok(None),
            Some(s) => Shortcut::parse(s).map(Some).ok_or_else(|| {
                schema(format!(
                    "unknown space {s:?}; expected sphere2, so(n), stiefel(n,k) or grassmann(n,k)"
                ))
            }),
        }
    }

    /// Builds the space. With `force`, an explicit α failing the invariance
    /// check is accepted as tainted instead of rejected.
    pub fn build(&self, force: bool) -> Result<Space, CliError> {
        let shortcut = self.shortcut()?;
        let mut space = Space {
            name: self
                .name
                .clone()
                .or_else(|| self.space.clone())
                .or_else(|| self.algebra.as_ref().and_then(|a| a.name.clone()))
                .unwrap_or_else(|| "custom".into()),
            algebra: None,
            dec: None,
            metric: None,
            alpha: None,
            failures: Vec::new(),
        };
        let default_label;
        match shortcut {
            Some(sc) => {
                if self.algebra.is_some() || self.decomposition.is_some() {
                    return Err(schema(
                        "[algebra] and [decomposition] cannot be combined with `space`",
                    ));
                }
                let bundle = sc.bundle().map_err(|e| schema(e.to_string()))?;
                default_label = bundle.suggested_alphas[0].label();
                space.algebra = Some(bundle.algebra);
                space.dec = Some(bundle.dec);
                space.metric = bundle.metric;
            }
            None => {
                default_label = AlphaLabel::CanonicalFirst;
                if !self.build_custom(&mut space)? {
                    return Ok(space);
                }
            }
        }
        let dec = space.dec.clone().expect("decomposition built");

        if let Some(mb) = &self.metric {
            let n = dec.m_dim();
            let gram = if mb.gram.is_empty() && n == 0 {
                Mat::zeros(0, 0)
            } else {
                square_of(&mb.gram, n, "metric.gram")?
            };
            let metric = match mb.signature {
                Some([p, q]) => MetricOnM::with_signature(gram, (p, q)),
                None => MetricOnM::new(gram),
            };
            match metric {
                Ok(m) => space.metric = Some(m),
                Err(e) => {
                    space.failures.push(failure("metric", 0.0, &e));
                    return Ok(space);
                }
            }
        }

        let (label, explicit, unchecked) = match &self.connection {
            None => (default_label, None, false),
            Some(c) => match &c.alpha {
                AlphaSpec::Named(s) => {
                    let l = AlphaLabel::parse(s).filter(|l| *l != AlphaLabel::Explicit).ok_or_else(|| {
                        schema(format!(
                            "connection.alpha: unknown {s:?}; expected canonical_first, canonical_second, levi_civita or a coefficient list"
                        ))
                    })?;
                    (l, None, c.unchecked)
                }
                AlphaSpec::Explicit(entries) => {
                    let n = dec.m_dim();
                    let dense = coefficient_entries(entries, n, false, "connection.alpha")?;
                    (
                        AlphaLabel::Explicit,
                        Some(Tensor3::from_flat(n, dense)?),
                        c.unchecked,
                    )
                }
            },
        };
        let alpha = match label {
            AlphaLabel::CanonicalFirst => Ok(AlphaMap::canonical_first(dec.clone())),
            AlphaLabel::CanonicalSecond => Ok(AlphaMap::canonical_second(dec.clone())),
            AlphaLabel::LeviCivita => {
                let metric = space
                    .metric
                    .as_ref()
                    .ok_or_else(|| schema("levi_civita needs a [metric] block or a biinvariant_gram"))?;
                AlphaMap::levi_civita(dec.clone(), metric)
            }
            AlphaLabel::Explicit => {
                let coeffs = explicit.expect("explicit coefficients parsed");
                if force || unchecked {
                    AlphaMap::explicit_unchecked(dec.clone(), coeffs)
                } else {
                    AlphaMap::explicit(dec.clone(), coeffs)
                }
            }
        };
        match alpha {
            Ok(a) => space.alpha = Some(a),
            Err(e) => space
                .failures
                .push(failure(&format!("{}.construction", label.as_str()), 0.0, &e)),
        }
        Ok(space)
    }

    /// Algebra and decomposition from explicit blocks. Returns false when a
    /// numerical failure stopped construction (recorded in `space`).
    fn build_custom(&self, space: &mut Space) -> Result<bool, CliError> {
        let ab = self
            .algebra
            .as_ref()
            .ok_or_else(|| schema("either `space` or an [algebra] block is required"))?;
        let basis = match &ab.matrix_basis {
            Some(list) => {
                let mats = list
                    .iter()
                    .enumerate()
                    .map(|(i, m)| matrix(m, &format!("algebra.matrix_basis[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(first) = mats.first() {
                    if mats.iter().any(|m| m.rows() != first.rows()) {
                        return Err(schema("algebra.matrix_basis: matrices of different sizes"));
                    }
                }
                Some(mats)
            }
            None => None,
        };
        let n = match (ab.dim, &basis) {
            (Some(d), Some(b)) if d != b.len() => {
                return Err(schema(format!(
                    "algebra.dim = {d} but matrix_basis has {} elements",
                    b.len()
                )))
            }
            (Some(d), _) => d,
            (None, Some(b)) => b.len(),
            (None, None) => {
                return Err(schema(
                    "algebra: give dim with structure_constants, or matrix_basis",
                ))
            }
        };
        if n == 0 {
            return Err(schema("algebra: dimension must be positive"));
        }
        let name = ab.name.clone().unwrap_or_else(|| space.name.clone());
        let constants = match &ab.structure_constants {
            Some(entries) => Some(coefficient_entries(
                entries,
                n,
                true,
                "algebra.structure_constants",
            )?),
            None => None,
        };
        let algebra = match (constants, basis) {
            (Some(c), Some(b)) => StructuredLieAlgebra::from_parts(name, n, c, b),
            (Some(c), None) => StructuredLieAlgebra::from_structure_constants(name, n, c),
            (None, Some(b)) => StructuredLieAlgebra::from_matrix_basis(name, b),
            (None, None) => unreachable!("dimension check requires one of them"),
        };
        let algebra = match algebra {
            Ok(a) => Arc::new(a),
            Err(e) => {
                space
                    .failures
                    .push(failure("algebra", homspace_core::algebra::JACOBI_TOL, &e));
                return Ok(false);
            }
        };
        space.algebra = Some(algebra.clone());

        let dec = match &self.decomposition {
            None => ReductiveDecomposition::trivial_isotropy(algebra.clone()).map(|d| (d, None)),
            Some(db) => {
                let modes = [
                    db.h_basis.is_some() && db.biinvariant_gram.is_none() || db.m_basis.is_some(),
                    db.sigma.is_some(),
                    db.biinvariant_gram.is_some(),
                ];
                if modes.iter().filter(|m| **m).count() != 1 {
                    return Err(schema(
                        "decomposition: give exactly one of h_basis + m_basis, sigma, or biinvariant_gram (+ h_basis)",
                    ));
                }
                if db.h_generators.is_some() && db.m_basis.is_none() {
                    return Err(schema(
                        "decomposition.h_generators requires explicit h_basis and m_basis",
                    ));
                }
                if let Some(sigma) = &db.sigma {
                    let s = square_of(sigma, n, "decomposition.sigma")?;
                    ReductiveDecomposition::symmetric(algebra.clone(), &s).map(|d| (d, None))
                } else if let Some(gram) = &db.biinvariant_gram {
                    let g = square_of(gram, n, "decomposition.biinvariant_gram")?;
                    let h = vectors(db.h_basis.as_deref().unwrap_or(&[]), n, "decomposition.h_basis")?;
                    ReductiveDecomposition::normal(algebra.clone(), &g, h).map(|(d, m)| (d, Some(m)))
                } else {
                    let (Some(h), Some(m)) = (&db.h_basis, &db.m_basis) else {
                        return Err(schema(
                            "decomposition: h_basis and m_basis must be given together",
                        ));
                    };
                    let h = vectors(h, n, "decomposition.h_basis")?;
                    let m = vectors(m, n, "decomposition.m_basis")?;
                    let d = algebra.matrix_size();
                    let gens = match &db.h_generators {
                        None => Vec::new(),
                        Some(list) => {
                            let d =
                                d.ok_or_else(|| schema("decomposition.h_generators need a matrix_basis"))?;
                            let mut out = Vec::new();
                            for (i, g) in list.iter().enumerate() {
                                let what = format!("decomposition.h_generators[{i}]");
                                let mat = square_of(g, d, &what)?;
                                out.push(GroupElement::new(mat).map_err(|e| schema(format!("{what}: {e}")))?);
                            }
                            out
                        }
                    };
                    ReductiveDecomposition::new(algebra.clone(), h, m, gens).map(|d| (d, None))
                }
            }
        };
        match dec {
            Ok((d, metric)) => {
                space.dec = Some(Arc::new(d));
                space.metric = metric;
                Ok(true)
            }
            Err(Error::DimensionMismatch { expected, found }) => Err(schema(format!(
                "decomposition: dimension mismatch (expected {expected}, found {found})"
            ))),
            Err(e) => {
                space.failures.push(failure(
                    "decomposition",
                    homspace_core::reductive::INCLUSION_TOL,
                    &e,
                ));
                Ok(false)
            }
        }
    }
}

/// Parses `name=value` tolerance overrides.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--tol expects name=value, got {s:?}")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--tol {name}: {value:?} is not a number")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(CliError::Usage(format!(
            "--tol {name}: tolerance must be finite and >= 0"
        )));
    }
    Ok((name.trim().to_string(), v))
}

/// Parses comma-separated coordinates.
pub fn parse_coords(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|c| {
            let v: f64 = c
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{what}: {c:?} is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Usage(format!("{what}: values must be finite")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(text: &str) -> Result<Space, CliError> {
        Definition::parse(text, Path::new("test.toml"))?.build(false)
    }

    #[test]
    fn shortcuts_parse() {
        assert_eq!(Shortcut::parse("sphere2"), Some(Shortcut::Sphere2));
        assert_eq!(Shortcut::parse("so(3)"), Some(Shortcut::SoN(3)));
        assert_eq!(Shortcut::parse("stiefel( 4, 2 )"), Some(Shortcut::Stiefel(4, 2)));
        assert_eq!(Shortcut::parse("grassmann(4,2)"), Some(Shortcut::Grassmann(4, 2)));
        assert_eq!(Shortcut::parse("grassmann(4)"), None);
        assert_eq!(Shortcut::parse("torus"), None);
    }

    #[test]
    fn sphere_shortcut_builds() {
        let s = build("space = \"sphere2\"\n").unwrap();
        assert_eq!(s.alpha_label(), "canonical_first");
        assert!(s.failures.is_empty());
        assert!(s.diagnostics().iter().all(|d| d.report.pass || !d.mandatory));
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let err = build("space = \"sphere2\"\ncolour = 3\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn non_finite_rejected() {
        let text = "space = \"sphere2\"\n[metric]\ngram = [[1.0, 0.0], [0.0, inf]]\n";
        assert!(matches!(build(text), Err(CliError::Schema(_))));
    }

    #[test]
    fn shortcut_excludes_algebra_block() {
        let text = "space = \"sphere2\"\n[algebra]\ndim = 1\nstructure_constants = []\n";
        assert!(matches!(build(text), Err(CliError::Schema(_))));
    }

    #[test]
    fn custom_structure_constants_are_mirrored() {
        let text = r#"
[algebra]
name = "so3"
dim = 3
structure_constants = [[2, 0, 1, 1.0], [0, 1, 2, 1.0], [1, 2, 0, 1.0]]
"#;
        let s = build(text).unwrap();
        let alg = s.algebra.unwrap();
        assert_eq!(alg.constant(2, 1, 0), -1.0);
        assert_eq!(s.dec.unwrap().m_dim(), 3);
    }

    #[test]
    fn jacobi_failure_is_a_check_failure() {
        let text = r#"
[algebra]
dim = 3
structure_constants = [[2, 0, 1, 1.0], [0, 1, 2, 1.0], [0, 2, 0, 1.0]]
"#;
        let s = build(text).unwrap();
        assert_eq!(s.failures.len(), 1);
        assert!(!s.failures[0].pass);
        assert!(s.alpha.is_none());
    }

    #[test]
    fn bad_index_is_schema_error() {
        let text = "[algebra]\ndim = 2\nstructure_constants = [[2, 0, 1, 1.0]]\n";
        assert!(matches!(build(text), Err(CliError::Schema(_))));
        let text = "[algebra]\ndim = 2\nstructure_constants = [[0.5, 0, 1, 1.0]]\n";
        assert!(matches!(build(text), Err(CliError::Schema(_))));
    }

    #[test]
    fn non_invariant_metric_keeps_reports() {
        let text = "space = \"sphere2\"\n[metric]\ngram = [[1.0, 0.0], [0.0, 2.0]]\n[connection]\nalpha = \"levi_civita\"\n";
        let s = build(text).unwrap();
        assert!(s.alpha.is_none());
        let d = s.diagnostics();
        let inv = d.iter().find(|d| d.report.check == "metric_invariance").unwrap();
        assert!(!inv.report.pass);
        assert!(!inv.report.witnesses.is_empty());
    }

    #[test]
    fn explicit_alpha_and_force() {
        let text = "space = \"sphere2\"\n[connection]\nalpha = [[0, 0, 0, 1.0]]\n";
        let s = build(text).unwrap();
        assert!(s.alpha.is_none());
        let forced = Definition::parse(text, Path::new("t"))
            .unwrap()
            .build(true)
            .unwrap();
        assert!(forced.alpha.as_ref().unwrap().is_tainted());
    }

    #[test]
    fn normal_decomposition_block() {
        let text = r#"
[algebra]
matrix_basis = [
  [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
  [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
  [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
]
[decomposition]
biinvariant_gram = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
h_basis = [[0, 0, 1]]
[connection]
alpha = "levi_civita"
"#;
        let s = build(text).unwrap();
        assert_eq!(s.metric.as_ref().unwrap().gram(), &Mat::identity(2));
        assert!(s.diagnostics().iter().all(|d| d.report.pass || !d.mandatory));
    }

    #[test]
    fn tolerance_and_coords() {
        assert_eq!(
            parse_tolerance("is_metric=1e-6").unwrap(),
            ("is_metric".into(), 1e-6)
        );
        assert!(parse_tolerance("is_metric").is_err());
        assert!(parse_tolerance("x=nan").is_err());
        assert_eq!(parse_coords("1, -2.5,0", "x0").unwrap(), vec![1.0, -2.5, 0.0]);
        assert!(parse_coords("1,a", "x0").is_err());
    }
}
