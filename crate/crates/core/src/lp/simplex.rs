//! Dense two-phase simplex over bounded variables.
//!
//! Nonbasic variables rest at one of their finite bounds (or at zero when
//! free); finite bounds never become extra rows. Phase 1 minimizes the sum of
//! artificial variables from a slack-preferring starting basis, phase 2 the
//! caller's objective. Entering column: most negative effective reduced cost,
//! ties to the lowest index; after a streak of degenerate pivots the rule
//! switches to Bland's until a real step is made. Ratio-test ties go to the
//! lowest variable index, so the pivot sequence is deterministic.

use super::{LinearProgram, LpError, LpSolution, LpStatus, Relation, Sense, PIVOT_TOL};

const DEGEN_STREAK_LIMIT: usize = 12;
const DEGEN_STEP: f64 = 1e-12;
const RATIO_TIE: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable, resting at zero.
    Free,
}

struct Tableau {
    m: usize,
    width: usize,
    nstruct: usize,
    /// Current rows of B^-1 A, one Vec per constraint row.
    rows: Vec<Vec<f64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    value: Vec<f64>,
    state: Vec<VarState>,
    /// Variable basic in each row.
    basis: Vec<usize>,
    /// Cost vector of the current phase.
    cost: Vec<f64>,
    /// Reduced costs for the current phase.
    rc: Vec<f64>,
    slack_of_row: Vec<Option<usize>>,
    art_of_row: Vec<Option<usize>>,
    /// Sign of the slack (+1 for <=, -1 for >=) per row, where present.
    slack_sign: Vec<f64>,
    /// Sign of the artificial per row, where present.
    art_sign: Vec<f64>,
    pivots: usize,
    degen_streak: usize,
    max_pivots: usize,
}

enum StepOutcome {
    Optimal,
    Pivoted,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Tableau, LpError> {
        let m = lp.rows.len();
        let nstruct = lp.num_vars();
        let n_slack = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();

        // Column layout: structurals, then slacks, then artificials.
        let mut lo = Vec::with_capacity(nstruct + n_slack + m);
        let mut hi = Vec::with_capacity(nstruct + n_slack + m);
        for &(l, h) in &lp.bounds {
            lo.push(l);
            hi.push(h);
        }

        let mut slack_of_row = vec![None; m];
        let mut slack_sign = vec![0.0; m];
        for (i, row) in lp.rows.iter().enumerate() {
            match row.relation {
                Relation::Le => {
                    slack_of_row[i] = Some(lo.len());
                    slack_sign[i] = 1.0;
                    lo.push(0.0);
                    hi.push(f64::INFINITY);
                }
                Relation::Ge => {
                    slack_of_row[i] = Some(lo.len());
                    slack_sign[i] = -1.0;
                    lo.push(0.0);
                    hi.push(f64::INFINITY);
                }
                Relation::Eq => {}
            }
        }
        let width_no_art = lo.len();

        // Nonbasic rest position: finite lower bound if any, else finite
        // upper bound, else zero (free).
        let mut value = vec![0.0; width_no_art];
        let mut state = vec![VarState::Free; width_no_art];
        for j in 0..width_no_art {
            if lo[j].is_finite() {
                value[j] = lo[j];
                state[j] = VarState::AtLower;
            } else if hi[j].is_finite() {
                value[j] = hi[j];
                state[j] = VarState::AtUpper;
            }
        }

        // Residuals of each row at the rest position (structurals only;
        // slacks start at zero).
        let mut residual = vec![0.0; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let dot: f64 = row
                .coeffs
                .iter()
                .zip(&value[..nstruct])
                .map(|(c, x)| c * x)
                .sum();
            residual[i] = row.rhs - dot;
        }

        // Pick a starting basic variable per row: the slack when its implied
        // value is nonnegative, otherwise a fresh artificial.
        let mut basis = vec![usize::MAX; m];
        let mut art_of_row = vec![None; m];
        let mut art_sign = vec![0.0; m];
        let mut art_cols: Vec<(usize, usize, f64)> = Vec::new(); // (col, row, sign)
        for i in 0..m {
            let mut use_art = true;
            if let Some(s) = slack_of_row[i] {
                let val = slack_sign[i] * residual[i];
                if val >= -1e-12 {
                    basis[i] = s;
                    use_art = false;
                }
            }
            if use_art {
                let col = width_no_art + art_cols.len();
                let sign = if residual[i] >= 0.0 { 1.0 } else { -1.0 };
                art_of_row[i] = Some(col);
                art_sign[i] = sign;
                art_cols.push((col, i, sign));
                basis[i] = col;
            }
        }
        let width = width_no_art + art_cols.len();
        for _ in width_no_art..width {
            lo.push(0.0);
            hi.push(f64::INFINITY);
        }
        value.resize(width, 0.0);
        state.resize(width, VarState::AtLower);

        // Assemble rows; scale each so its basic column carries +1, which
        // makes the starting basis matrix the identity.
        let mut rows = vec![vec![0.0; width]; m];
        for (i, row) in lp.rows.iter().enumerate() {
            rows[i][..nstruct].copy_from_slice(&row.coeffs);
            if let Some(s) = slack_of_row[i] {
                rows[i][s] = slack_sign[i];
            }
            if let Some(a) = art_of_row[i] {
                rows[i][a] = art_sign[i];
            }
            let bcoef = rows[i][basis[i]];
            debug_assert!(bcoef == 1.0 || bcoef == -1.0);
            if bcoef < 0.0 {
                for v in rows[i].iter_mut() {
                    *v = -*v;
                }
            }
        }

        // Basic starting values.
        for i in 0..m {
            let b = basis[i];
            state[b] = VarState::Basic;
            let v = if art_of_row[i] == Some(b) {
                residual[i].abs()
            } else {
                (slack_sign[i] * residual[i]).max(0.0)
            };
            value[b] = v;
        }

        let max_pivots = 2000 + 8 * (m + width);
        Ok(Tableau {
            m,
            width,
            nstruct,
            rows,
            lo,
            hi,
            value,
            state,
            basis,
            cost: vec![0.0; width],
            rc: vec![0.0; width],
            slack_of_row,
            art_of_row,
            slack_sign,
            art_sign,
            pivots: 0,
            degen_streak: 0,
            max_pivots,
        })
    }

    /// Reduced costs for the current phase cost vector, from scratch.
    fn recompute_rc(&mut self) {
        for j in 0..self.width {
            self.rc[j] = self.cost[j];
        }
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.rows[i];
                for j in 0..self.width {
                    self.rc[j] -= cb * row[j];
                }
            }
        }
        for i in 0..self.m {
            self.rc[self.basis[i]] = 0.0;
        }
    }

    fn objective_value(&self) -> f64 {
        (0..self.width).map(|j| self.cost[j] * self.value[j]).sum()
    }

    /// Entering column and its movement direction (+1 up, -1 down), or None
    /// at optimality. `bland` selects by lowest index instead of steepest.
    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None; // (col, dir, score)
        for j in 0..self.width {
            if self.state[j] == VarState::Basic || self.lo[j] == self.hi[j] {
                continue;
            }
            let rc = self.rc[j];
            let dir = match self.state[j] {
                VarState::AtLower if rc < -PIVOT_TOL => 1.0,
                VarState::AtUpper if rc > PIVOT_TOL => -1.0,
                VarState::Free if rc < -PIVOT_TOL => 1.0,
                VarState::Free if rc > PIVOT_TOL => -1.0,
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let score = rc.abs();
            match best {
                Some((_, _, s)) if s >= score => {}
                _ => best = Some((j, dir, score)),
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    /// One simplex step for the current phase.
    fn step(&mut self, bland: bool) -> Result<StepOutcome, LpError> {
        let Some((e, dir)) = self.choose_entering(bland) else {
            return Ok(StepOutcome::Optimal);
        };

        // Step length at which the entering variable reaches its own
        // opposite bound (a bound flip, no basis change).
        let flip_t = if self.lo[e].is_finite() && self.hi[e].is_finite() {
            self.hi[e] - self.lo[e]
        } else {
            f64::INFINITY
        };

        // Ratio test over basic variables. delta = change of basic value per
        // unit step of the entering variable.
        let mut best_t = f64::INFINITY;
        let mut best_row: Option<(usize, VarState)> = None; // (row, leaving target state)
        for i in 0..self.m {
            let a = self.rows[i][e];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let delta = -dir * a;
            let b = self.basis[i];
            let (t, target) = if delta > 0.0 {
                if self.hi[b].is_finite() {
                    ((self.hi[b] - self.value[b]) / delta, VarState::AtUpper)
                } else {
                    continue;
                }
            } else {
                if self.lo[b].is_finite() {
                    ((self.value[b] - self.lo[b]) / -delta, VarState::AtLower)
                } else {
                    continue;
                }
            };
            let t = t.max(0.0);
            let replace = match best_row {
                None => t < best_t - RATIO_TIE || t < best_t + RATIO_TIE,
                Some((r, _)) => {
                    t < best_t - RATIO_TIE
                        || ((t - best_t).abs() <= RATIO_TIE && self.basis[i] < self.basis[r])
                }
            };
            if replace {
                best_t = t.min(best_t);
                best_row = Some((i, target));
            }
        }

        if flip_t <= best_t {
            if !flip_t.is_finite() {
                return Ok(StepOutcome::Unbounded);
            }
            // Bound flip: entering moves across to its other bound.
            let t = flip_t;
            for i in 0..self.m {
                let a = self.rows[i][e];
                if a != 0.0 {
                    let b = self.basis[i];
                    self.value[b] += -dir * a * t;
                }
            }
            self.value[e] += dir * t;
            self.state[e] = if dir > 0.0 {
                VarState::AtUpper
            } else {
                VarState::AtLower
            };
            self.note_step(t);
            return Ok(StepOutcome::Pivoted);
        }

        let (r, leave_state) = best_row.expect("ratio test found no blocking row");
        let t = best_t;

        // Update values.
        for i in 0..self.m {
            let a = self.rows[i][e];
            if a != 0.0 {
                let b = self.basis[i];
                self.value[b] += -dir * a * t;
            }
        }
        self.value[e] += dir * t;
        let leaving = self.basis[r];
        // Snap the leaving variable exactly onto the bound it hit.
        self.value[leaving] = match leave_state {
            VarState::AtLower => self.lo[leaving],
            VarState::AtUpper => self.hi[leaving],
            _ => unreachable!(),
        };
        self.state[leaving] = leave_state;
        self.state[e] = VarState::Basic;
        self.basis[r] = e;

        // Pivot the tableau on (r, e).
        let piv = self.rows[r][e];
        if piv.abs() <= PIVOT_TOL {
            return Err(LpError::Numerical(format!(
                "pivot element {piv} below tolerance"
            )));
        }
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rows[r][e] = 1.0;
        let pivot_row = self.rows[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.rows[i][e];
            if factor != 0.0 {
                let row = &mut self.rows[i];
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
                row[e] = 0.0;
            }
        }
        let factor = self.rc[e];
        if factor != 0.0 {
            for (v, p) in self.rc.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.rc[e] = 0.0;

        self.note_step(t);
        Ok(StepOutcome::Pivoted)
    }

    fn note_step(&mut self, t: f64) {
        self.pivots += 1;
        if t <= DEGEN_STEP {
            self.degen_streak += 1;
        } else {
            self.degen_streak = 0;
        }
    }

    /// Runs the current phase to optimality (or unboundedness).
    fn run_phase(&mut self) -> Result<StepOutcome, LpError> {
        loop {
            if self.pivots >= self.max_pivots {
                return Err(LpError::IterationLimit {
                    pivots: self.pivots,
                });
            }
            let bland = self.degen_streak >= DEGEN_STREAK_LIMIT;
            match self.step(bland)? {
                StepOutcome::Pivoted => {}
                other => return Ok(other),
            }
        }
    }

    /// Pivots still-basic artificials out of the basis where possible; rows
    /// whose artificial cannot leave are all-zero across real columns and
    /// stay inert.
    fn expel_artificials(&mut self) {
        for r in 0..self.m {
            let b = self.basis[r];
            if b < self.width && self.art_of_row.iter().flatten().any(|&a| a == b) {
                let mut target = None;
                for j in 0..self.width {
                    if self.state[j] != VarState::Basic
                        && self.art_of_row.iter().flatten().all(|&a| a != j)
                        && self.rows[r][j].abs() > PIVOT_TOL
                    {
                        target = Some(j);
                        break;
                    }
                }
                if let Some(e) = target {
                    // Degenerate pivot: the artificial is at zero, so values
                    // do not move.
                    let piv = self.rows[r][e];
                    let inv = 1.0 / piv;
                    for v in self.rows[r].iter_mut() {
                        *v *= inv;
                    }
                    self.rows[r][e] = 1.0;
                    let pivot_row = self.rows[r].clone();
                    for i in 0..self.m {
                        if i == r {
                            continue;
                        }
                        let factor = self.rows[i][e];
                        if factor != 0.0 {
                            let row = &mut self.rows[i];
                            for (v, p) in row.iter_mut().zip(&pivot_row) {
                                *v -= factor * p;
                            }
                            row[e] = 0.0;
                        }
                    }
                    self.state[b] = VarState::AtLower;
                    self.value[b] = 0.0;
                    self.state[e] = VarState::Basic;
                    // The entering variable keeps its current (bound) value:
                    // the pivot is degenerate.
                    self.basis[r] = e;
                }
            }
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let mut t = Tableau::build(lp)?;

    // Phase 1: minimize the sum of artificials.
    let has_artificials = t.art_of_row.iter().any(|a| a.is_some());
    if has_artificials {
        for j in 0..t.width {
            t.cost[j] = 0.0;
        }
        for a in t.art_of_row.iter().flatten() {
            t.cost[*a] = 1.0;
        }
        t.recompute_rc();
        match t.run_phase()? {
            StepOutcome::Optimal => {}
            StepOutcome::Unbounded => {
                return Err(LpError::Numerical(
                    "phase-1 objective reported unbounded".into(),
                ));
            }
            StepOutcome::Pivoted => unreachable!(),
        }
        if t.objective_value() > super::FEAS_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                point: None,
                objective: None,
                duals: None,
            });
        }
        t.expel_artificials();
        // Freeze artificials at zero for phase 2.
        let arts: Vec<usize> = t.art_of_row.iter().flatten().copied().collect();
        for a in arts {
            t.lo[a] = 0.0;
            t.hi[a] = 0.0;
            if t.state[a] != VarState::Basic {
                t.state[a] = VarState::AtLower;
                t.value[a] = 0.0;
            }
        }
    }

    // Phase 2: the caller's objective (internally always minimized).
    let flip = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    for j in 0..t.width {
        t.cost[j] = 0.0;
    }
    for j in 0..t.nstruct {
        t.cost[j] = flip * lp.objective[j];
    }
    t.recompute_rc();
    t.degen_streak = 0;
    match t.run_phase()? {
        StepOutcome::Optimal => {}
        StepOutcome::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                point: None,
                objective: None,
                duals: None,
            });
        }
        StepOutcome::Pivoted => unreachable!(),
    }

    let point: Vec<f64> = t.value[..t.nstruct].to_vec();
    let objective: f64 = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();

    // Row duals from the reduced costs of each row's slack or artificial
    // column: rc = -y * coef, so y = -rc * coef for coef in {+1, -1}. The
    // internal sign flip for maximization is undone so the reported value is
    // the shadow price in the caller's sense.
    let mut duals = vec![0.0; t.m];
    for i in 0..t.m {
        let (col, coef) = match (t.slack_of_row[i], t.art_of_row[i]) {
            (Some(s), _) => (s, t.slack_sign[i]),
            (None, Some(a)) => (a, t.art_sign[i]),
            (None, None) => unreachable!("every row has a slack or artificial"),
        };
        duals[i] = flip * (-t.rc[col] * coef);
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        point: Some(point),
        objective: Some(objective),
        duals: Some(duals),
    })
}
