//! Gradient descent for θ and Cyclic Adamax for the reference coefficients.
//!
//! Cyclic Adamax is plain Adamax whose moment estimates are periodically
//! scaled by `α ∈ [0, 1]` (a soft reset; `α = 0` is a full reset). The bias
//! correction `1 − β1^t` counts `t` from the most recent reset.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdamaxConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub learning_rate: f64,
    pub epsilon: f64,
}

impl Default for AdamaxConfig {
    fn default() -> Self {
        AdamaxConfig {
            beta1: 0.9,
            beta2: 0.999,
            learning_rate: 0.01,
            epsilon: 1e-8,
        }
    }
}

impl AdamaxConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.learning_rate > 0.0
            && self.epsilon > 0.0
            && self.learning_rate.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid Adamax hyperparameters {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamaxState {
    config: AdamaxConfig,
    m: Vec<f64>,
    u: Vec<f64>,
    t: u64,
}

impl AdamaxState {
    pub fn new(dim: usize, config: AdamaxConfig) -> Result<Self> {
        config.validate()?;
        Ok(AdamaxState {
            config,
            m: vec![0.0; dim],
            u: vec![0.0; dim],
            t: 0,
        })
    }

    pub fn config(&self) -> &AdamaxConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.m
    }

    pub fn max_norm(&self) -> &[f64] {
        &self.u
    }

    /// Steps taken since the last reset.
    pub fn steps(&self) -> u64 {
        self.t
    }

    /// One in-place update of `params` from `grad`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        if params.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: params.len(),
            });
        }
        if grad.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: grad.len(),
            });
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        let AdamaxConfig {
            beta1,
            beta2,
            learning_rate,
            epsilon,
        } = self.config;
        self.t += 1;
        let bias = 1.0 - beta1.powi(self.t.min(i32::MAX as u64) as i32);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g;
            self.u[i] = (beta2 * self.u[i]).max(g.abs());
            params[i] -= learning_rate * (self.m[i] / bias) / (self.u[i] + epsilon);
        }
        Ok(())
    }

    /// `m ← αm`, `u ← αu`, and the bias-correction clock restarts.
    pub fn soft_reset(&mut self, alpha: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("reset factor {alpha} outside [0, 1]")));
        }
        self.m.iter_mut().for_each(|x| *x *= alpha);
        self.u.iter_mut().for_each(|x| *x *= alpha);
        self.t = 0;
        Ok(())
    }

    /// Appends `k` fresh coordinates with zero moments.
    pub fn grow(&mut self, k: usize) {
        self.m.resize(self.m.len() + k, 0.0);
        self.u.resize(self.u.len() + k, 0.0);
    }

    /// Drops coordinates whose flag is unset.
    pub fn retain_mask(&mut self, keep: &[bool]) -> Result<()> {
        if keep.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: keep.len(),
            });
        }
        let filter = |v: &mut Vec<f64>| {
            let mut i = 0;
            v.retain(|_| {
                i += 1;
                keep[i - 1]
            });
        };
        filter(&mut self.m);
        filter(&mut self.u);
        Ok(())
    }
}

/// Functional form of one Adamax step.
pub fn adamax_step(state: &AdamaxState, params: &[f64], grad: &[f64]) -> Result<(AdamaxState, Vec<f64>)> {
    let mut next = state.clone();
    let mut p = params.to_vec();
    next.step(&mut p, grad)?;
    Ok((next, p))
}

/// Functional form of a soft reset.
pub fn soft_reset(state: &AdamaxState, alpha: f64) -> Result<AdamaxState> {
    let mut next = state.clone();
    next.soft_reset(alpha)?;
    Ok(next)
}

/// `params − step · grad`.
pub fn gd_step(params: &[f64], grad: &[f64], step_size: f64) -> Result<Vec<f64>> {
    if !(step_size > 0.0 && step_size.is_finite()) {
        return Err(Error::invalid(format!("step size {step_size} must be positive")));
    }
    if params.len() != grad.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            got: grad.len(),
        });
    }
    if params.iter().chain(grad).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("gradient-descent inputs"));
    }
    Ok(params.iter().zip(grad).map(|(p, g)| p - step_size * g).collect())
}

/// Stagnation trigger: relative spread `(max − min)/max` of the windowed
/// gradient norms below `tol`. A partially filled window never fires; an
/// all-zero window always does.
pub fn adaptive_reset_check(history: &[f64], window: usize, tol: f64) -> bool {
    if window == 0 || history.len() < window {
        return false;
    }
    let w = &history[history.len() - window..];
    let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= 0.0 {
        return true;
    }
    (max - min) / max < tol
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptiveReset {
    pub window: usize,
    pub stagnation_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RestartPolicy {
    /// Iterations between scheduled resets.
    pub period: u64,
    /// Soft-reset factor.
    pub alpha: f64,
    /// Sliding-window stagnation trigger; off when `None`.
    pub adaptive: Option<AdaptiveReset>,
}

impl Default for RestartPolicy {
    fn default() -> Self {
        RestartPolicy {
            period: 200,
            alpha: 0.0,
            adaptive: None,
        }
    }
}

impl RestartPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::invalid("restart period must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::invalid("restart alpha must lie in [0, 1]"));
        }
        if let Some(a) = self.adaptive {
            if a.window < 2 {
                return Err(Error::invalid("adaptive-reset window must be at least 2"));
            }
            if a.stagnation_tol.is_nan() || a.stagnation_tol < 0.0 {
                return Err(Error::invalid("adaptive-reset tolerance must be non-negative"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetReason {
    Scheduled,
    Stagnation,
}

/// Decides after each iteration whether the moments should be reset.
#[derive(Debug, Clone)]
pub struct RestartScheduler {
    policy: RestartPolicy,
    iteration: u64,
    history: VecDeque<f64>,
}

impl RestartScheduler {
    pub fn new(policy: RestartPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(RestartScheduler {
            policy,
            iteration: 0,
            history: VecDeque::new(),
        })
    }

    pub fn policy(&self) -> &RestartPolicy {
        &self.policy
    }

    /// Records one completed iteration and its gradient norm.
    pub fn observe(&mut self, grad_norm: f64) -> Option<ResetReason> {
        self.iteration += 1;
        if self.iteration.is_multiple_of(self.policy.period) {
            self.history.clear();
            return Some(ResetReason::Scheduled);
        }
        let adaptive = self.policy.adaptive?;
        self.history.push_back(grad_norm);
        while self.history.len() > adaptive.window {
            self.history.pop_front();
        }
        let window = self.history.make_contiguous();
        if adaptive_reset_check(window, adaptive.window, adaptive.stagnation_tol) {
            self.history.clear();
            return Some(ResetReason::Stagnation);
        }
        None
    }

    /// Applies the reset policy to `state` if `observe` fired.
    pub fn apply(&self, state: &mut AdamaxState) -> Result<()> {
        state.soft_reset(self.policy.alpha)
    }
}
