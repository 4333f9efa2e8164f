//! Brute-force LP reference for cross-checking the simplex solver on small
//! instances. Test support only: it enumerates every basic point, so it is
//! exponential in the variable count.
//!
//! All variables are clipped to an artificial box `[-box, box]` first, which
//! makes the feasible set (if nonempty) a polytope whose vertices can be
//! enumerated as intersections of constraint/bound hyperplanes. Unboundedness
//! is detected by growing the box: if the best objective keeps improving the
//! original program has an improving ray. The box must dominate the scale of
//! the true vertices, which holds comfortably for the small integer-coefficient
//! programs this is used on.

use super::{LinearProgram, LpStatus, Relation, Sense};
use rand::Rng;

const SINGULAR_TOL: f64 = 1e-10;
const REL_FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct OracleOutcome {
    pub status: LpStatus,
    pub objective: Option<f64>,
}

/// Solves `lp` by vertex enumeration. Intended for programs with at most
/// ~10 variables and a couple dozen hyperplanes.
pub fn enumerate_solve(lp: &LinearProgram, box_bound: f64) -> OracleOutcome {
    let first = best_vertex(lp, box_bound);
    let second = best_vertex(lp, box_bound * 16.0);
    match (first, second) {
        (None, None) => OracleOutcome {
            status: LpStatus::Infeasible,
            objective: None,
        },
        (Some(a), Some(b)) => {
            let improvement = match lp.sense {
                Sense::Minimize => a - b,
                Sense::Maximize => b - a,
            };
            if improvement > 1e-6 * a.abs().max(1.0) {
                OracleOutcome {
                    status: LpStatus::Unbounded,
                    objective: None,
                }
            } else {
                OracleOutcome {
                    status: LpStatus::Optimal,
                    objective: Some(a),
                }
            }
        }
        // A vertex appearing or vanishing with the box means the box was too
        // small for the problem's scale.
        _ => panic!("oracle box too small for this program"),
    }
}

/// Best objective over all feasible basic points of the boxed program, or
/// None if no feasible basic point exists.
fn best_vertex(lp: &LinearProgram, box_bound: f64) -> Option<f64> {
    let v = lp.num_vars();
    assert!(v <= 12, "enumeration oracle limited to small programs");

    let mut boxed = lp.clone();
    for b in boxed.bounds.iter_mut() {
        b.0 = b.0.max(-box_bound);
        b.1 = b.1.min(box_bound);
    }

    // Hyperplane set: every row as an equality plus both bound planes of
    // every variable.
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let mut offsets: Vec<f64> = Vec::new();
    for row in &boxed.rows {
        normals.push(row.coeffs.clone());
        offsets.push(row.rhs);
    }
    for j in 0..v {
        let mut e = vec![0.0; v];
        e[j] = 1.0;
        normals.push(e.clone());
        offsets.push(boxed.bounds[j].0);
        normals.push(e);
        offsets.push(boxed.bounds[j].1);
    }

    let h = normals.len();
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..v).collect();
    loop {
        if let Some(x) = solve_square(&combo, &normals, &offsets, v) {
            if feasible_scaled(&boxed, &x) {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
                let better = match (best, lp.sense) {
                    (None, _) => true,
                    (Some(b), Sense::Minimize) => obj < b,
                    (Some(b), Sense::Maximize) => obj > b,
                };
                if better {
                    best = Some(obj);
                }
            }
        }
        if !advance(&mut combo, h) {
            break;
        }
    }
    best
}

/// Feasibility with tolerances relative to each row's magnitude: box-scale
/// vertices carry box-scale roundoff, so an absolute cutoff would drop them
/// inconsistently between the two box sizes.
fn feasible_scaled(lp: &LinearProgram, point: &[f64]) -> bool {
    for row in &lp.rows {
        let mut lhs = 0.0;
        let mut scale = row.rhs.abs() + 1.0;
        for (c, x) in row.coeffs.iter().zip(point) {
            let term = c * x;
            lhs += term;
            scale += term.abs();
        }
        let tol = REL_FEAS_TOL * scale;
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
        let tol = REL_FEAS_TOL * (x.abs() + 1.0);
        if x < lo - tol || x > hi + tol {
            return false;
        }
    }
    true
}

/// Gaussian elimination with partial pivoting on the subsystem selected by
/// `combo`; None when (near-)singular.
fn solve_square(
    combo: &[usize],
    normals: &[Vec<f64>],
    offsets: &[f64],
    v: usize,
) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = combo.iter().map(|&k| normals[k].clone()).collect();
    let mut b: Vec<f64> = combo.iter().map(|&k| offsets[k]).collect();
    for col in 0..v {
        let (pivot_row, pivot_abs) = (col..v)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pivot_abs < SINGULAR_TOL {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let inv = 1.0 / a[col][col];
        for r in 0..v {
            if r == col {
                continue;
            }
            let factor = a[r][col] * inv;
            if factor != 0.0 {
                for c in col..v {
                    let upd = a[col][c] * factor;
                    a[r][c] -= upd;
                }
                b[r] -= b[col] * factor;
            }
        }
    }
    Some((0..v).map(|r| b[r] / a[r][r]).collect())
}

/// Advances `combo` to the next k-subset of `{0..n}` in lexicographic order.
fn advance(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 || k > n {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Random small program with integer data, for solver/oracle agreement
/// sweeps. Variables are nonnegative with a mix of finite and infinite upper
/// bounds, so the feasible set is pointed and vertex enumeration is exact.
pub fn random_lp<R: Rng>(rng: &mut R, max_vars: usize, max_rows: usize) -> LinearProgram {
    let v = rng.random_range(1..=max_vars);
    let r = rng.random_range(1..=max_rows);
    let sense = if rng.random_bool(0.5) {
        Sense::Minimize
    } else {
        Sense::Maximize
    };
    let mut lp = LinearProgram::new(sense, v);
    let mut objective = vec![0.0; v];
    for c in objective.iter_mut() {
        *c = rng.random_range(-5..=5) as f64;
    }
    lp.set_objective(objective);
    for j in 0..v {
        if rng.random_bool(0.3) {
            lp.set_bounds(j, 0.0, rng.random_range(1..=8) as f64);
        }
    }
    for _ in 0..r {
        let mut coeffs = vec![0.0; v];
        for c in coeffs.iter_mut() {
            *c = rng.random_range(-5..=5) as f64;
        }
        let relation = match rng.random_range(0..6) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        let rhs = rng.random_range(-10..=10) as f64;
        lp.add_row(coeffs, relation, rhs);
    }
    lp
}
