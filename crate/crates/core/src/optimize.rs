//! Deterministic numerical search routines: angular maximization on the unit
//! circle, Levenberg–Marquardt least squares, and constrained descent on the
//! zero set of a residual map.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Grid resolution and golden-section refinement count for maximizing a
/// function of an angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AngleSearch {
    pub grid: usize,
    pub refine_steps: usize,
}

impl AngleSearch {
    /// Used for the sup of `|Ψ_η|` over the circle.
    pub const MEMBERSHIP: Self = Self {
        grid: 1024,
        refine_steps: 40,
    };

    /// Used for the distance-type suprema over `ω ∈ ∂𝔻`.
    pub const EXTREMAL: Self = Self {
        grid: 1024,
        refine_steps: 60,
    };
}

impl Default for AngleSearch {
    fn default() -> Self {
        Self::EXTREMAL
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
/// Returns the best abscissa seen and its value.
pub fn golden_section_max(
    f: &mut impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    steps: usize,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..steps {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximizes `f(θ)` over `θ ∈ [0, 2π)`: dense grid, then golden-section
/// refinement on the bracket around the best grid node.
pub fn maximize_on_circle(mut f: impl FnMut(f64) -> f64, search: AngleSearch) -> (f64, f64) {
    let n = search.grid.max(3);
    let h = TAU / n as f64;
    let (mut best_theta, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let theta = k as f64 * h;
        let v = f(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    if search.refine_steps > 0 {
        let (theta, v) = golden_section_max(&mut f, best_theta - h, best_theta + h, search.refine_steps);
        if v > best {
            best = v;
            best_theta = theta.rem_euclid(TAU);
        }
    }
    (best_theta, best)
}

/// Counts objective evaluations against a fixed allowance.
#[derive(Clone, Debug)]
pub struct EvalBudget {
    limit: usize,
    used: usize,
}

impl EvalBudget {
    pub fn new(limit: usize) -> Self {
        Self { limit, used: 0 }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.limit.saturating_sub(self.used)
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }

    pub(crate) fn charge(&mut self, n: usize) {
        self.used += n;
    }
}

/// A vector residual map `x ↦ r(x)` with a fixed output length.
pub trait Residual {
    fn len(&self) -> usize;
    fn eval(&self, x: &[f64], out: &mut [f64]);
}

fn residual_vec(r: &impl Residual, x: &[f64], budget: &mut EvalBudget) -> DVector<f64> {
    let mut out = vec![0.0; r.len()];
    r.eval(x, &mut out);
    budget.charge(1);
    DVector::from_vec(out)
}

/// Central-difference Jacobian.
fn jacobian(r: &impl Residual, x: &[f64], budget: &mut EvalBudget) -> DMatrix<f64> {
    let m = r.len();
    let n = x.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    for j in 0..n {
        let h = 1e-6 * x[j].abs().max(1.0);
        xp[j] = x[j] + h;
        r.eval(&xp, &mut plus);
        xp[j] = x[j] - h;
        r.eval(&xp, &mut minus);
        xp[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    budget.charge(2 * n);
    jac
}

#[derive(Clone, Debug)]
pub struct LeastSquaresOutcome {
    pub x: Vec<f64>,
    /// Sum of squared residuals at `x`.
    pub cost: f64,
}

/// Levenberg–Marquardt with a central-difference Jacobian. Stops when the
/// sum of squares drops below `target_cost`, progress stalls, or the budget
/// runs out.
pub fn levenberg_marquardt(
    r: &impl Residual,
    x0: Vec<f64>,
    target_cost: f64,
    max_iters: usize,
    budget: &mut EvalBudget,
) -> LeastSquaresOutcome {
    let n = x0.len();
    let mut x = x0;
    let mut res = residual_vec(r, &x, budget);
    let mut cost = res.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_iters {
        if cost <= target_cost || budget.exhausted() || !cost.is_finite() {
            break;
        }
        let jac = jacobian(r, &x, budget);
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let grad = &jt * &res;
        let mut accepted = false;
        while mu < 1e16 && !budget.exhausted() {
            let mut lhs = normal.clone();
            for i in 0..n {
                lhs[(i, i)] += mu * normal[(i, i)].max(1e-12);
            }
            let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_res = residual_vec(r, &trial, budget);
            let trial_cost = trial_res.norm_squared();
            if trial_cost.is_finite() && trial_cost < cost {
                let small = step.norm() <= 1e-15 * (1.0 + DVector::from_column_slice(&x).norm());
                x = trial;
                res = trial_res;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-12);
                accepted = !small;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    LeastSquaresOutcome { x, cost }
}

/// Minimum-norm Gauss–Newton steps `x ← x - J⁺ r(x)` driving `x` onto the
/// zero set of `r`. Returns the final point and sum of squares.
pub fn restore_feasibility(
    r: &impl Residual,
    x0: Vec<f64>,
    target_cost: f64,
    max_iters: usize,
    budget: &mut EvalBudget,
) -> LeastSquaresOutcome {
    let mut x = x0;
    let mut res = residual_vec(r, &x, budget);
    let mut cost = res.norm_squared();
    for _ in 0..max_iters {
        if cost <= target_cost || budget.exhausted() || !cost.is_finite() {
            break;
        }
        let jac = jacobian(r, &x, budget);
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&res, 1e-10 * svd.singular_values.max()) else {
            break;
        };
        let mut alpha = 1.0;
        let mut improved = false;
        while alpha > 1e-4 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - alpha * s).collect();
            let trial_res = residual_vec(r, &trial, budget);
            let trial_cost = trial_res.norm_squared();
            if trial_cost.is_finite() && trial_cost < cost {
                x = trial;
                res = trial_res;
                cost = trial_cost;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    LeastSquaresOutcome { x, cost }
}

/// Gradient-projection descent of `objective` along the zero set of
/// `constraints`, starting from a (nearly) feasible point. Each accepted step
/// moves along the null space of the constraint Jacobian and is followed by a
/// feasibility restoration; steps that lose feasibility or fail to decrease
/// the objective are halved.
pub fn descend_on_zero_set(
    objective: &impl Fn(&[f64]) -> f64,
    constraints: &impl Residual,
    x0: Vec<f64>,
    feasible_cost: f64,
    max_iters: usize,
    budget: &mut EvalBudget,
) -> LeastSquaresOutcome {
    let mut current = restore_feasibility(constraints, x0, feasible_cost * 1e-6, 30, budget);
    if current.cost > feasible_cost {
        return current;
    }
    let n = current.x.len();
    let mut value = objective(&current.x);
    let mut alpha = 0.1;
    for _ in 0..max_iters {
        if budget.exhausted() {
            break;
        }
        let x = &current.x;
        let mut grad = DVector::zeros(n);
        let mut xp = x.clone();
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            xp[j] = x[j] + h;
            let up = objective(&xp);
            xp[j] = x[j] - h;
            let down = objective(&xp);
            xp[j] = x[j];
            grad[j] = (up - down) / (2.0 * h);
        }
        budget.charge(2 * n);
        let jac = jacobian(constraints, x, budget);
        let svd = jac.clone().svd(true, true);
        let projected = match svd.solve(&(&jac * &grad), 1e-10 * svd.singular_values.max()) {
            Ok(component) => &grad - component,
            Err(_) => grad.clone(),
        };
        let direction = -projected;
        if direction.norm() <= 1e-13 {
            break;
        }
        let mut moved = false;
        while alpha > 1e-12 && !budget.exhausted() {
            let trial: Vec<f64> = x.iter().zip(direction.iter()).map(|(a, d)| a + alpha * d).collect();
            let restored = restore_feasibility(constraints, trial, feasible_cost * 1e-6, 30, budget);
            if restored.cost <= feasible_cost {
                let v = objective(&restored.x);
                if v < value - 1e-15 {
                    value = v;
                    current = restored;
                    alpha *= 2.0;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    current
}
