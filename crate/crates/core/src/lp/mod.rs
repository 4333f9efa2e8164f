//! Generic linear-program model and a self-contained two-phase simplex solver.
//!
//! Every weight-selection problem in this crate is assembled as a
//! [`LinearProgram`] and handed to [`solve`]. The solver works on a dense
//! tableau with bounded variables (finite lower/upper bounds are handled
//! implicitly, not as extra rows), uses Bland's rule after a degenerate-pivot
//! streak to rule out cycling, and reports per-row dual values alongside the
//! primal point.
//!
//! Tolerances are fixed here once and inherited by everything downstream.

mod simplex;

pub mod oracle;

use thiserror::Error;

/// Pivot eligibility threshold: reduced costs and pivot elements smaller in
/// magnitude than this are treated as zero.
pub const PIVOT_TOL: f64 = 1e-9;
/// A point is accepted as feasible when every constraint and bound holds to
/// within this tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Two objective values are considered equal within this tolerance.
pub const OBJ_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One constraint row `coeffs . x  (<=|>=|=)  rhs`.
#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program over `num_vars` variables with per-variable bounds.
///
/// Bounds default to `[0, +inf)`; use `f64::NEG_INFINITY` / `f64::INFINITY`
/// for unbounded sides.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(sense: Sense, num_vars: usize) -> Self {
        LinearProgram {
            sense,
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); num_vars],
        }
    }

    pub fn minimize(num_vars: usize) -> Self {
        Self::new(Sense::Minimize, num_vars)
    }

    pub fn maximize(num_vars: usize) -> Self {
        Self::new(Sense::Maximize, num_vars)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_objective(&mut self, coeffs: Vec<f64>) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.objective = coeffs;
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.bounds[var] = (lo, hi);
    }

    /// Marks a variable as free (no bounds on either side).
    pub fn set_free(&mut self, var: usize) {
        self.bounds[var] = (f64::NEG_INFINITY, f64::INFINITY);
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push(LpRow {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Validates the model invariants: finite coefficients, consistent row
    /// lengths, lower bound not above upper bound.
    pub fn validate(&self) -> Result<(), LpError> {
        let v = self.num_vars();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Invalid("non-finite objective coefficient".into()));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != v {
                return Err(LpError::Invalid(format!(
                    "row {k} has {} coefficients, expected {v}",
                    row.coeffs.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(LpError::Invalid(format!("row {k} has a non-finite entry")));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(LpError::Invalid(format!("variable {j} has invalid bounds")));
            }
            if lo > hi {
                return Err(LpError::Invalid(format!(
                    "variable {j} has lower bound {lo} above upper bound {hi}"
                )));
            }
        }
        Ok(())
    }

    /// Plain-text dump of the model in a fixed format, for reproducing solver
    /// issues outside the calling code.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(match self.sense {
            Sense::Minimize => "minimize\n",
            Sense::Maximize => "maximize\n",
        });
        out.push_str("obj:");
        for c in &self.objective {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str("row:");
            for c in &row.coeffs {
                out.push_str(&format!(" {c}"));
            }
            out.push_str(&format!(" {} {}\n", row.relation.symbol(), row.rhs));
        }
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            out.push_str(&format!("bound: x{j} {lo} {hi}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver result. `point`, `objective` and `duals` are present iff the status
/// is `Optimal`.
///
/// `duals[k]` is the shadow price of row `k`: the rate of change of the
/// optimal objective (in the problem's stated sense) per unit increase of
/// `rhs[k]`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub duals: Option<Vec<f64>>,
}

impl LpSolution {
    /// The optimal point; panics if the status is not `Optimal`.
    pub fn point(&self) -> &[f64] {
        self.point.as_deref().expect("no optimal point")
    }

    pub fn objective(&self) -> f64 {
        self.objective.expect("no optimal objective")
    }

    pub fn duals(&self) -> &[f64] {
        self.duals.as_deref().expect("no duals")
    }
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("invalid linear program: {0}")]
    Invalid(String),
    /// The pivot limit was hit before reaching a conclusion. Indicates
    /// numerical trouble; never silently reported as optimal.
    #[error("simplex iteration limit exceeded after {pivots} pivots")]
    IterationLimit { pivots: usize },
    #[error("numerical failure in simplex: {0}")]
    Numerical(String),
}

/// Solves the program with the two-phase simplex method.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    simplex::solve(lp)
}

/// Checks whether `point` satisfies every row and bound of `lp` within `tol`.
pub fn check_feasible(lp: &LinearProgram, point: &[f64], tol: f64) -> bool {
    assert_eq!(point.len(), lp.num_vars());
    for row in &lp.rows {
        let lhs: f64 = row.coeffs.iter().zip(point).map(|(c, x)| c * x).sum();
        let ok = match row.relation {
            Relation::Le => lhs <= row.rhs + tol,
            Relation::Ge => lhs >= row.rhs - tol,
            Relation::Eq => (lhs - row.rhs).abs() <= tol,
        };
        if !ok {
            return false;
        }
    }
    for (&x, &(lo, hi)) in point.iter().zip(&lp.bounds) {
        if x < lo - tol || x > hi + tol {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests;
