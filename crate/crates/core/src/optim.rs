//! Riemannian gradient descent and conjugate gradient on the product
//! manifold, both with Armijo backtracking line search.

use thiserror::Error;

use crate::manifold::{
    inner, project_tangent, retract, tangent_norm, transport, AmbientGradient, ProductPoint,
    ProductTangent,
};

/// Backtracking gives up after this many step reductions.
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimError {
    #[error("objective returned a non-finite loss or gradient at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    GradientDescent,
    #[default]
    ConjugateGradient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimConfig {
    pub method: Method,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_init: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// Upper bound on the tangent length `t·|d|` of a trial step.
    pub max_displacement: f64,
    /// Steepest-descent restart period for CG; `None` uses the sphere
    /// dimension `n`.
    pub cg_restart_period: Option<usize>,
}

impl Default for OptimConfig {
    fn default() -> Self {
        Self {
            method: Method::ConjugateGradient,
            max_iters: 2000,
            grad_tol: 1e-7,
            step_init: 1.0,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            max_displacement: 1.0,
            cg_restart_period: None,
        }
    }
}

impl OptimConfig {
    pub fn validate(&self) -> Result<(), OptimError> {
        if !(self.grad_tol >= 0.0) {
            return Err(OptimError::InvalidConfig("grad_tol must be nonnegative"));
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return Err(OptimError::InvalidConfig("step_init must be positive"));
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return Err(OptimError::InvalidConfig("armijo_c must lie in (0, 1)"));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return Err(OptimError::InvalidConfig("backtrack_factor must lie in (0, 1)"));
        }
        if !(self.max_displacement > 0.0) {
            return Err(OptimError::InvalidConfig("max_displacement must be positive"));
        }
        if self.cg_restart_period == Some(0) {
            return Err(OptimError::InvalidConfig("cg_restart_period must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Riemannian gradient norm fell to `grad_tol`.
    GradientTolerance,
    MaxIterations,
    /// No step along the current direction satisfied the Armijo condition.
    LineSearchStalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerReport {
    pub iters_used: usize,
    pub final_loss: f64,
    pub final_grad_norm: f64,
    pub converged: bool,
    /// Loss at the start followed by the loss after every accepted step.
    pub loss_trace: Vec<f64>,
    pub stop_reason: StopReason,
}

fn evaluate<F>(objective: &mut F, p: &ProductPoint, iteration: usize) -> Result<(f64, AmbientGradient), OptimError>
where
    F: FnMut(&ProductPoint) -> (f64, AmbientGradient),
{
    let (loss, grad) = objective(p);
    if !loss.is_finite() || !grad.is_finite() {
        return Err(OptimError::NonFiniteObjective { iteration });
    }
    Ok((loss, grad))
}

/// Minimizes `objective` starting from `start`.
///
/// The objective returns the loss together with its ambient (Euclidean)
/// gradient; the Riemannian gradient is obtained by [`project_tangent`].
/// Trial points with an infinite loss are treated as rejected steps, NaN
/// anywhere is reported as [`OptimError::NonFiniteObjective`].
///
/// CG uses the Polak–Ribière+ coefficient with projection transport and
/// restarts to steepest descent every `cg_restart_period` iterations or
/// whenever the CG direction is not a descent direction.
pub fn minimize<F>(
    mut objective: F,
    start: ProductPoint,
    cfg: &OptimConfig,
) -> Result<(ProductPoint, OptimizerReport), OptimError>
where
    F: FnMut(&ProductPoint) -> (f64, AmbientGradient),
{
    cfg.validate()?;
    let restart_period = cfg.cg_restart_period.unwrap_or(start.dim()).max(1);

    let mut x = start;
    let (mut loss, g) = evaluate(&mut objective, &x, 0)?;
    let mut grad = project_tangent(&x, &g);
    let mut grad_norm = tangent_norm(&x, &grad);
    let mut trace = vec![loss];

    // (point, gradient, direction, slope, step) of the previous iteration.
    let mut previous: Option<(ProductPoint, ProductTangent, ProductTangent, f64, f64)> = None;
    let mut since_restart = 0usize;
    let mut iters = 0usize;

    let stop_reason = loop {
        if grad_norm <= cfg.grad_tol {
            break StopReason::GradientTolerance;
        }
        if iters >= cfg.max_iters {
            break StopReason::MaxIterations;
        }

        let steepest = grad.scaled(-1.0);
        let mut direction = steepest.clone();
        if cfg.method == Method::ConjugateGradient && since_restart < restart_period {
            if let Some((px, pg, pd, _, _)) = &previous {
                let tg = transport(px, &x, pg);
                let td = transport(px, &x, pd);
                let beta = (inner(&x, &grad, &grad.add_scaled(-1.0, &tg)) / inner(px, pg, pg)).max(0.0);
                direction = steepest.add_scaled(beta, &td);
            }
        }
        let mut slope = inner(&x, &grad, &direction);
        if !(slope < 0.0) {
            direction = steepest;
            slope = -grad_norm * grad_norm;
            since_restart = 0;
        }

        let mut step = match &previous {
            // Carry the previous first-order decrease over to the new direction.
            Some((_, _, _, prev_slope, prev_step)) => {
                (prev_step * prev_slope / slope / cfg.backtrack_factor).min(1e6 * cfg.step_init)
            }
            None => cfg.step_init,
        };
        if !(step > 0.0 && step.is_finite()) {
            step = cfg.step_init;
        }
        step = step.min(cfg.max_displacement / tangent_norm(&x, &direction));

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let candidate = retract(&x, &direction, step);
            let (c_loss, c_grad) = objective(&candidate);
            if c_loss.is_nan() || (c_loss.is_finite() && !c_grad.is_finite()) {
                return Err(OptimError::NonFiniteObjective { iteration: iters + 1 });
            }
            if c_loss.is_finite() && c_loss <= loss + cfg.armijo_c * step * slope {
                accepted = Some((candidate, c_loss, c_grad));
                break;
            }
            step *= cfg.backtrack_factor;
        }
        let Some((next, next_loss, next_g)) = accepted else {
            break StopReason::LineSearchStalled;
        };

        iters += 1;
        since_restart += 1;
        if since_restart >= restart_period {
            since_restart = 0;
        }
        let next_grad = project_tangent(&next, &next_g);
        previous = Some((x, grad, direction, slope, step));
        x = next;
        loss = next_loss;
        grad = next_grad;
        grad_norm = tangent_norm(&x, &grad);
        trace.push(loss);
    };

    let report = OptimizerReport {
        iters_used: iters,
        final_loss: loss,
        final_grad_norm: grad_norm,
        converged: stop_reason == StopReason::GradientTolerance,
        loss_trace: trace,
        stop_reason,
    };
    Ok((x, report))
}
