use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of one numerical diagnostic.
///
/// Checks never throw; a failing identity shows up as `pass == false` with
/// the largest residual and a few human-readable witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witnesses: Vec<String>,
    /// What the check actually covered, when that is narrower than the
    /// identity it names (e.g. only the identity component of H).
    pub scope: Option<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
            witnesses: Vec::new(),
            scope: None,
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<String>) -> Self {
        self.witnesses = witnesses;
        self
    }

    pub fn with_scope(mut self, scope: impl Into<String>) -> Self {
        self.scope = Some(scope.into());
        self
    }

    /// Same residual judged against a different tolerance.
    pub fn rejudged(&self, tolerance: f64) -> Self {
        let mut r = self.clone();
        r.tolerance = tolerance;
        r.pass = r.max_residual.is_finite() && r.max_residual <= tolerance;
        r
    }
}

/// Tracks the worst residual seen and keeps a bounded list of witnesses.
#[derive(Debug, Default)]
pub(crate) struct Worst {
    pub max: f64,
    pub witnesses: Vec<(f64, String)>,
}

impl Worst {
    const KEEP: usize = 4;

    pub fn observe(&mut self, residual: f64, tolerance: f64, describe: impl FnOnce() -> String) {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.max {
            self.max = residual;
        }
        if residual > tolerance {
            self.witnesses.push((residual, describe()));
            self.witnesses.sort_by(|a, b| b.0.total_cmp(&a.0));
            self.witnesses.truncate(Self::KEEP);
        }
    }

    pub fn into_report(self, check: &str, tolerance: f64) -> CheckReport {
        CheckReport::new(check, self.max, tolerance)
            .with_witnesses(self.witnesses.into_iter().map(|(_, w)| w).collect())
    }
}
