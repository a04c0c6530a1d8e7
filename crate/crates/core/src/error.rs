use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::transport::Trajectory;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A numeric input was NaN or infinite.
    NonFinite(&'static str),
    InvalidParameter(String),
    SingularMatrix,

    NotAntisymmetric {
        k: usize,
        i: usize,
        j: usize,
        residual: f64,
    },
    JacobiViolated {
        residual: f64,
    },
    CommutatorMismatch {
        i: usize,
        j: usize,
        residual: f64,
    },
    BasisDependent,
    /// A matrix could not be expressed in the realized basis.
    NotInBasis {
        residual: f64,
    },
    MissingMatrixRealization,
    NotInvertible {
        determinant: f64,
    },

    NotDirectSum,
    ProjectionDefect {
        residual: f64,
    },
    NotSubalgebra {
        i: usize,
        j: usize,
        leak: f64,
    },
    /// `[h_basis[h], m_basis[m]]` has an 𝔥-component of norm `leak`.
    NotReductive {
        h: usize,
        m: usize,
        leak: f64,
    },
    GeneratorBreaksReductivity {
        generator: usize,
        leak: f64,
    },
    NotInvolution {
        residual: f64,
    },
    NotAutomorphism {
        residual: f64,
    },
    NotSymmetricPair {
        residual: f64,
    },
    GramNotAdInvariant {
        residual: f64,
    },
    DegenerateSubalgebra,

    AsymmetricGram,
    DegenerateMetric {
        ratio: f64,
    },
    SignatureMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    MetricNotInvariant {
        residual: f64,
    },

    AlphaNotInvariant {
        residual: f64,
    },
    /// `[[X,Y]_𝔥, Z]` left 𝔪; the decomposition is not reductive to the
    /// precision curvature needs.
    CurvatureLeak {
        residual: f64,
    },
    DegeneratePlane {
        denominator: f64,
    },

    InvalidStep(f64),
    EmptySpan,
    NotIncreasing {
        index: usize,
    },
    TooFewSamples {
        needed: usize,
        found: usize,
    },
    EmptyTrajectory,
    /// `‖x‖` exceeded the blow-up guard; `partial` holds every sample up to
    /// and including the last good one.
    BlowUp {
        time: f64,
        norm: f64,
        partial: Box<Trajectory>,
    },
    TooFewSteps(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Self::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Self::SingularMatrix => f.write_str("matrix is singular"),
            Self::NotAntisymmetric { k, i, j, residual } => write!(
                f,
                "structure constants not antisymmetric at (k={k}, i={i}, j={j}): residual {residual:e}"
            ),
            Self::JacobiViolated { residual } => {
                write!(f, "Jacobi identity violated: residual {residual:e}")
            }
            Self::CommutatorMismatch { i, j, residual } => write!(
                f,
                "matrix commutator of basis {i},{j} disagrees with structure constants: residual {residual:e}"
            ),
            Self::BasisDependent => f.write_str("basis vectors are linearly dependent"),
            Self::NotInBasis { residual } => {
                write!(
                    f,
                    "matrix not expressible in the algebra basis: residual {residual:e}"
                )
            }
            Self::MissingMatrixRealization => f.write_str("algebra has no matrix realization"),
            Self::NotInvertible { determinant } => {
                write!(f, "group element not invertible: determinant {determinant:e}")
            }
            Self::NotDirectSum => f.write_str("h_basis and m_basis do not form a direct sum"),
            Self::ProjectionDefect { residual } => {
                write!(f, "projection identities violated: residual {residual:e}")
            }
            Self::NotSubalgebra { i, j, leak } => {
                write!(f, "h is not a subalgebra: [h_{i}, h_{j}] leaks {leak:e} into m")
            }
            Self::NotReductive { h, m, leak } => write!(
                f,
                "reductivity violated: [h_{h}, m_{m}] has h-component of norm {leak:e}"
            ),
            Self::GeneratorBreaksReductivity { generator, leak } => write!(
                f,
                "Ad of h_generators[{generator}] does not preserve m: leak {leak:e}"
            ),
            Self::NotInvolution { residual } => {
                write!(f, "sigma is not an involution: residual {residual:e}")
            }
            Self::NotAutomorphism { residual } => {
                write!(
                    f,
                    "sigma is not a Lie algebra automorphism: residual {residual:e}"
                )
            }
            Self::NotSymmetricPair { residual } => {
                write!(f, "[m, m] not contained in h: residual {residual:e}")
            }
            Self::GramNotAdInvariant { residual } => {
                write!(f, "bilinear form is not ad-invariant: residual {residual:e}")
            }
            Self::DegenerateSubalgebra => {
                f.write_str("h is degenerate for the bilinear form; no orthogonal complement")
            }
            Self::AsymmetricGram => f.write_str("gram matrix is not symmetric"),
            Self::DegenerateMetric { ratio } => write!(
                f,
                "gram matrix is degenerate: smallest/largest singular value {ratio:e}"
            ),
            Self::SignatureMismatch { expected, found } => write!(
                f,
                "signature mismatch: declared {expected:?}, eigenvalues give {found:?}"
            ),
            Self::MetricNotInvariant { residual } => {
                write!(f, "metric is not Ad(H)-invariant: residual {residual:e}")
            }
            Self::AlphaNotInvariant { residual } => {
                write!(f, "alpha is not Ad(H)-invariant: residual {residual:e}")
            }
            Self::CurvatureLeak { residual } => write!(
                f,
                "[[X,Y]_h, Z] has an h-component {residual:e}; decomposition not reductive"
            ),
            Self::DegeneratePlane { denominator } => write!(
                f,
                "plane is degenerate for the metric: denominator {denominator:e}"
            ),
            Self::InvalidStep(h) => write!(f, "step must be positive, got {h}"),
            Self::EmptySpan => f.write_str("time span is empty"),
            Self::NotIncreasing { index } => {
                write!(f, "sample times not strictly increasing at index {index}")
            }
            Self::TooFewSamples { needed, found } => {
                write!(f, "need at least {needed} samples, got {found}")
            }
            Self::EmptyTrajectory => f.write_str("trajectory has no samples"),
            Self::BlowUp { time, norm, .. } => write!(
                f,
                "velocity blew up at t = {time} (|x| = {norm:e}); partial trajectory kept"
            ),
            Self::TooFewSteps(n) => {
                write!(f, "convergence probe needs at least 3 step sizes, got {n}")
            }
        }
    }
}

impl core::error::Error for Error {}
