//! Semidefinite-program solvers for the atomic-norm regularized estimation
//! problem.
//!
//! The model splits the data misfit into an explicit residual block `g` and
//! couples `(z, eps, U)` to the PSD variable `Theta` through the bordered
//! block-Toeplitz matrix `[[T(U), z], [z^H, eps]]`:
//!
//! ```text
//! min  1/2 ||g||^2 + lambda/(2MN) Tr(T(U)) + lambda/2 eps + mu ||e||_1
//! s.t. g = r - e - S z,   Theta = [[T(U), z], [z^H, eps]],  Theta PSD
//! ```
//!
//! `sgs_admm_solve` runs the symmetric Gauss-Seidel ADMM: the `(e, g)` group
//! is swept `g -> e -> g`, the `(z, eps, U, Theta)` group is swept
//! `z -> eps -> U -> Theta -> U -> eps -> z`, and the multipliers take an
//! over-relaxed step. `admm_solve` is the directly-extended baseline that
//! updates `z -> eps -> U -> e -> Theta` once per iteration on the
//! formulation without the `g` split. Every subproblem has a closed form;
//! the symbol diagonal makes the linear solves elementwise.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{kkt_residuals_form, KktForm, KktReport};
use crate::error::{invalid, Result};
use crate::proxops::{psd_project, soft_threshold_scalar};
use crate::scene::ReceivedData;
use crate::toeplitz::{bordered, t_star, BlockToeplitzCoeffs};
use crate::{CMatrix, CVector, C64};

/// Upper bound (exclusive) for the multiplier step length.
pub const MAX_STEP_LENGTH: f64 = 1.618033988749895; // (1 + sqrt 5) / 2

/// Solver configuration.
///
/// The regularization weights follow `lambda = sigma_reg sqrt(MN log MN)`
/// and `mu = lambda / sqrt(MN)` unless explicit `lambda`/`mu` are supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Penalty parameter of the augmented Lagrangian.
    pub rho: f64,
    /// Multiplier step length, strictly inside `(0, (1+sqrt 5)/2)`.
    pub varrho: f64,
    /// Scalar driving the derived regularization weights.
    pub sigma_reg: f64,
    /// Explicit regularization weight overriding the derived rule.
    pub lambda: Option<f64>,
    /// Explicit sparsity weight overriding the derived rule.
    pub mu: Option<f64>,
    /// Stopping tolerance on the maximum relative KKT residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Period (in iterations) of the KKT evaluation.
    pub check_every: usize,
    /// Residual form used for stopping; reports can be computed in either.
    pub stop_form: KktForm,
    /// Run exactly this many iterations, ignoring the tolerance.
    pub forced_steps: Option<usize>,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            varrho: 1.618,
            sigma_reg: 0.1,
            lambda: None,
            mu: None,
            tol: 1e-4,
            max_iter: 2000,
            check_every: 1,
            stop_form: KktForm::Stationarity,
            forced_steps: None,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(invalid(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.varrho > 0.0 && self.varrho < MAX_STEP_LENGTH) {
            return Err(invalid(format!(
                "step length must lie strictly inside (0, {MAX_STEP_LENGTH}), got {}",
                self.varrho
            )));
        }
        if self.sigma_reg < 0.0 {
            return Err(invalid("sigma_reg must be nonnegative"));
        }
        if self.lambda.is_some() != self.mu.is_some() {
            return Err(invalid("lambda and mu must be overridden together"));
        }
        if self.tol < 0.0 {
            return Err(invalid("tolerance must be nonnegative"));
        }
        if self.max_iter == 0 || self.check_every == 0 {
            return Err(invalid("max_iter and check_every must be at least 1"));
        }
        Ok(())
    }

    /// The `(lambda, mu)` pair for a grid of `mn` samples.
    pub fn weights(&self, mn: usize) -> (f64, f64) {
        match (self.lambda, self.mu) {
            (Some(lambda), Some(mu)) => (lambda, mu),
            _ => {
                let mnf = mn as f64;
                let lambda = self.sigma_reg * (mnf * mnf.ln()).sqrt();
                (lambda, lambda / mnf.sqrt())
            }
        }
    }
}

/// Primal iterates and multipliers of either solver.
///
/// `theta` and `gamma` are Hermitian of size `MN + 1`, partitioned as
/// `[[Theta_0, theta_1], [theta_1^H, theta_bar]]` (and likewise
/// `[[Gamma_0, gamma_vec], [gamma_vec^H, gamma_bar]]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverState {
    pub e: CVector,
    pub g: CVector,
    pub z: CVector,
    pub eps: f64,
    pub coeffs: BlockToeplitzCoeffs,
    pub theta: CMatrix,
    /// Multiplier of the residual-split constraint.
    pub beta: CVector,
    /// Multiplier of the PSD coupling constraint.
    pub gamma: CMatrix,
}

impl SolverState {
    pub fn zeros(blocks: usize, subcarriers: usize) -> Self {
        let mn = blocks * subcarriers;
        Self {
            e: CVector::zeros(mn),
            g: CVector::zeros(mn),
            z: CVector::zeros(mn),
            eps: 0.0,
            coeffs: BlockToeplitzCoeffs::zeros(blocks, subcarriers),
            theta: CMatrix::zeros(mn + 1, mn + 1),
            beta: CVector::zeros(mn),
            gamma: CMatrix::zeros(mn + 1, mn + 1),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.z.len()
    }

    pub fn theta0(&self) -> CMatrix {
        let mn = self.grid_size();
        self.theta.view((0, 0), (mn, mn)).into_owned()
    }

    pub fn theta1(&self) -> CVector {
        let mn = self.grid_size();
        CVector::from_fn(mn, |i, _| self.theta[(i, mn)])
    }

    pub fn theta_bar(&self) -> f64 {
        let mn = self.grid_size();
        self.theta[(mn, mn)].re
    }

    pub fn gamma0(&self) -> CMatrix {
        let mn = self.grid_size();
        self.gamma.view((0, 0), (mn, mn)).into_owned()
    }

    pub fn gamma_vec(&self) -> CVector {
        let mn = self.grid_size();
        CVector::from_fn(mn, |i, _| self.gamma[(i, mn)])
    }

    pub fn gamma_bar(&self) -> f64 {
        let mn = self.grid_size();
        self.gamma[(mn, mn)].re
    }

    /// The bordered matrix `[[T(U), z], [z^H, eps]]` of the current iterate.
    pub fn coupling_matrix(&self) -> CMatrix {
        bordered(&self.coeffs, &self.z, self.eps)
    }

    fn is_finite(&self) -> bool {
        let finite_vec = |v: &CVector| v.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        finite_vec(&self.e)
            && finite_vec(&self.z)
            && finite_vec(&self.g)
            && finite_vec(&self.beta)
            && self.eps.is_finite()
            && self.coeffs.norm().is_finite()
            && self.theta.iter().all(|c| c.re.is_finite() && c.im.is_finite())
            && self.gamma.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    NumericFailure,
}

/// One row of the convergence trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRecord {
    pub iter: usize,
    pub objective: f64,
    pub kkt: KktReport,
    pub seconds: f64,
}

/// Result of a solve: final state, trace, and termination status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub state: SolverState,
    pub iterations: usize,
    pub history: Vec<HistoryRecord>,
    pub status: Status,
}

impl Solution {
    /// Writes the trace as CSV with columns
    /// `iter, obj, eta1..eta6, eta_max, seconds`.
    pub fn write_history_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iter,obj,eta1,eta2,eta3,eta4,eta5,eta6,eta_max,seconds")?;
        for rec in &self.history {
            write!(w, "{},{:.16e}", rec.iter, rec.objective)?;
            for eta in rec.kkt.etas() {
                write!(w, ",{eta:.16e}")?;
            }
            writeln!(w, ",{:.16e},{:.6}", rec.kkt.eta_max, rec.seconds)?;
        }
        Ok(())
    }
}

/// The estimation objective
/// `1/2 ||r - e - S z||^2 + lambda/(2MN) Tr(T(U)) + lambda/2 eps + mu ||e||_1`
/// with `Tr(T(U))` evaluated as `MN Re(u_0(0))`.
pub fn objective(state: &SolverState, data: &ReceivedData, lambda: f64, mu: f64) -> f64 {
    let misfit: f64 = (0..state.grid_size())
        .map(|i| (data.r[i] - state.e[i] - data.s_hat[i] * state.z[i]).norm_sqr())
        .sum();
    let l1: f64 = state.e.iter().map(|v| v.norm()).sum();
    0.5 * misfit + 0.5 * lambda * state.coeffs.get(0, 0).re + 0.5 * lambda * state.eps + mu * l1
}

/// Real inner product `Re <A, B>` on complex matrices.
fn inner_re(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// The augmented Lagrangian value at a state. The PSD indicator is omitted
/// so the function stays finite at arbitrary iterates; the solvers keep
/// `Theta` inside the cone by construction.
pub fn aug_lagrangian(
    state: &SolverState,
    data: &ReceivedData,
    rho: f64,
    lambda: f64,
    mu: f64,
) -> f64 {
    let mn = state.grid_size();
    let split = CVector::from_fn(mn, |i, _| {
        state.g[i] - data.r[i] + state.e[i] + data.s_hat[i] * state.z[i]
    });
    let coupling = &state.theta - state.coupling_matrix();
    let l1: f64 = state.e.iter().map(|v| v.norm()).sum();
    let beta_term: f64 = state
        .beta
        .iter()
        .zip(split.iter())
        .map(|(b, s)| (b.conj() * s).re)
        .sum();

    0.5 * state.g.norm_squared()
        + 0.5 * lambda * state.coeffs.get(0, 0).re
        + 0.5 * lambda * state.eps
        + mu * l1
        + beta_term
        + inner_re(&state.gamma, &coupling)
        + 0.5 * rho * split.norm_squared()
        + 0.5 * rho * coupling.norm_squared()
}

/// Gradient of the augmented Lagrangian in `g`:
/// `(1 + rho) g + beta - rho (r - e - S z)`.
pub fn grad_g(state: &SolverState, data: &ReceivedData, rho: f64) -> CVector {
    CVector::from_fn(state.grid_size(), |i, _| {
        (1.0 + rho) * state.g[i] + state.beta[i]
            - rho * (data.r[i] - state.e[i] - data.s_hat[i] * state.z[i])
    })
}

/// Gradient of the augmented Lagrangian in `z`:
/// `rho S^H (S z + g - r + e + beta/rho) + 2 rho (z - theta_1) - 2 gamma`.
pub fn grad_z(state: &SolverState, data: &ReceivedData, rho: f64) -> CVector {
    let theta1 = state.theta1();
    let gamma_vec = state.gamma_vec();
    CVector::from_fn(state.grid_size(), |i, _| {
        let s = data.s_hat[i];
        let inner = s * state.z[i] + state.g[i] - data.r[i] + state.e[i] + state.beta[i] / rho;
        rho * s.conj() * inner + 2.0 * rho * (state.z[i] - theta1[i]) - 2.0 * gamma_vec[i]
    })
}

/// Gradient of the augmented Lagrangian in `eps`:
/// `lambda/2 + rho (eps - theta_bar) - gamma_bar`.
pub fn grad_eps(state: &SolverState, rho: f64, lambda: f64) -> f64 {
    0.5 * lambda + rho * (state.eps - state.theta_bar()) - state.gamma_bar()
}

/// Gradient of the augmented Lagrangian in the Toeplitz coefficients:
/// `(N-|l|)(M-|m|) rho u_l(m) - sum_j Tr_m(S_{l,j}(rho Theta_0 + Gamma_0))`,
/// plus `lambda/2` on the central coefficient.
pub fn grad_u(state: &SolverState, rho: f64, lambda: f64) -> BlockToeplitzCoeffs {
    let (m, n) = state.coeffs.dims();
    let mn = state.grid_size();
    let combined = CMatrix::from_fn(mn, mn, |i, j| {
        rho * state.theta[(i, j)] + state.gamma[(i, j)]
    });
    // t_star averages the diagonal sums; rescale back to plain sums.
    let sums = t_star(&combined, m, n).expect("state dimensions are consistent");
    let mut grad = BlockToeplitzCoeffs::zeros(m, n);
    for (l, mi, q) in sums.iter() {
        let w = ((n - l.unsigned_abs()) * (m - mi.unsigned_abs())) as f64;
        let mut val = w * rho * state.coeffs.get(l, mi) - w * q;
        if l == 0 && mi == 0 {
            val += C64::new(0.5 * lambda, 0.0);
        }
        *grad.get_mut(l, mi) = val;
    }
    grad
}

/// Closed-form minimizer in `g`.
fn g_update(e: &CVector, z: &CVector, beta: &CVector, data: &ReceivedData, rho: f64) -> CVector {
    let scale = 1.0 / (1.0 + rho);
    CVector::from_fn(e.len(), |i, _| {
        (rho * (data.r[i] - e[i] - data.s_hat[i] * z[i]) - beta[i]) * scale
    })
}

/// Closed-form minimizer in `z` for the split formulation:
/// `(S^H S + 2 I)^{-1} [S^H (r - g - e - beta/rho) + 2 theta_1 + 2 gamma/rho]`,
/// solved elementwise because the symbol matrix is diagonal.
fn z_update(
    e: &CVector,
    g: &CVector,
    beta: &CVector,
    theta1: &CVector,
    gamma_vec: &CVector,
    data: &ReceivedData,
    rho: f64,
) -> CVector {
    CVector::from_fn(e.len(), |i, _| {
        let s = data.s_hat[i];
        let rhs = s.conj() * (data.r[i] - g[i] - e[i] - beta[i] / rho)
            + 2.0 * theta1[i]
            + 2.0 * gamma_vec[i] / rho;
        rhs / (s.norm_sqr() + 2.0)
    })
}

/// Closed-form minimizer of the coefficient block:
/// `T*(Theta_0 + Gamma_0/rho) - lambda/(2 MN rho) I_(M,N)`.
fn u_update(
    theta0: &CMatrix,
    gamma0: &CMatrix,
    m: usize,
    n: usize,
    rho: f64,
    lambda: f64,
) -> BlockToeplitzCoeffs {
    let mn = (m * n) as f64;
    let combined = CMatrix::from_fn(m * n, m * n, |i, j| theta0[(i, j)] + gamma0[(i, j)] / rho);
    let mut u = t_star(&combined, m, n).expect("dimensions are consistent");
    *u.get_mut(0, 0) -= C64::new(lambda / (2.0 * mn * rho), 0.0);
    u
}

/// Closed-form minimizer in `eps`: `gamma_bar/rho + theta_bar - lambda/(2 rho)`.
fn eps_update(theta_bar: f64, gamma_bar: f64, rho: f64, lambda: f64) -> f64 {
    gamma_bar / rho + theta_bar - lambda / (2.0 * rho)
}

/// sGS sweep over the `(e, g)` group: `g -> e -> g` with `z` and the
/// multipliers fixed at their incoming values.
pub fn step1_eg(state: &mut SolverState, data: &ReceivedData, rho: f64, mu: f64) {
    let g_tilde = g_update(&state.e, &state.z, &state.beta, data, rho);
    let kappa = mu / rho;
    state.e = CVector::from_fn(state.grid_size(), |i, _| {
        let arg = data.r[i] - g_tilde[i] - data.s_hat[i] * state.z[i] - state.beta[i] / rho;
        soft_threshold_scalar(arg, kappa)
    });
    state.g = g_update(&state.e, &state.z, &state.beta, data, rho);
}

/// sGS sweep over the `(z, eps, U, Theta)` group: temporaries
/// `z -> eps -> U`, the PSD projection for `Theta`, then the final
/// `U -> eps -> z` at the updated `Theta`. The multipliers stay at their
/// incoming values throughout.
pub fn step2_z_eps_u_theta(
    state: &mut SolverState,
    data: &ReceivedData,
    rho: f64,
    lambda: f64,
) -> Result<()> {
    let (m, n) = state.coeffs.dims();
    let gamma0 = state.gamma0();
    let gamma_vec = state.gamma_vec();
    let gamma_bar = state.gamma_bar();

    // Step 2.1: temporary points from the current Theta.
    let z_tilde = z_update(
        &state.e,
        &state.g,
        &state.beta,
        &state.theta1(),
        &gamma_vec,
        data,
        rho,
    );
    let eps_tilde = eps_update(state.theta_bar(), gamma_bar, rho, lambda);
    let u_tilde = u_update(&state.theta0(), &gamma0, m, n, rho, lambda);

    // Step 2.2: project the bordered temporary onto the PSD cone, then
    // recompute U, eps, z from the projected Theta.
    let target = bordered(&u_tilde, &z_tilde, eps_tilde) - state.gamma.clone() / C64::new(rho, 0.0);
    state.theta = psd_project(&target)?;

    state.coeffs = u_update(&state.theta0(), &gamma0, m, n, rho, lambda);
    state.eps = eps_update(state.theta_bar(), gamma_bar, rho, lambda);
    state.z = z_update(
        &state.e,
        &state.g,
        &state.beta,
        &state.theta1(),
        &gamma_vec,
        data,
        rho,
    );
    Ok(())
}

/// Over-relaxed multiplier step:
/// `beta += varrho rho (g - r + e + S z)`,
/// `Gamma += varrho rho (Theta - [[T(U), z], [z^H, eps]])`.
pub fn update_multipliers(
    state: &mut SolverState,
    data: &ReceivedData,
    rho: f64,
    varrho: f64,
) -> Result<()> {
    if !(varrho > 0.0 && varrho < MAX_STEP_LENGTH) {
        return Err(invalid(format!(
            "step length must lie strictly inside (0, {MAX_STEP_LENGTH}), got {varrho}"
        )));
    }
    let step = varrho * rho;
    for i in 0..state.grid_size() {
        state.beta[i] += step * (state.g[i] - data.r[i] + state.e[i] + data.s_hat[i] * state.z[i]);
    }
    let coupling = &state.theta - state.coupling_matrix();
    state.gamma += coupling * C64::new(step, 0.0);
    Ok(())
}

/// Which algorithm produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    SgsAdmm,
    Admm,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::SgsAdmm => write!(f, "sgs_admm"),
            Algorithm::Admm => write!(f, "admm"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgs" | "sgs_admm" | "sgsa" => Ok(Algorithm::SgsAdmm),
            "admm" | "da" => Ok(Algorithm::Admm),
            other => Err(invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Runs the symmetric Gauss-Seidel ADMM until the maximum relative KKT
/// residual drops below the tolerance (checked every `check_every`
/// iterations) or the iteration cap is hit.
pub fn sgs_admm_solve(
    data: &ReceivedData,
    params: &SolverParams,
    initial: Option<SolverState>,
) -> Result<Solution> {
    solve_loop(data, params, initial, Algorithm::SgsAdmm)
}

/// Runs the directly-extended ADMM baseline: one pass
/// `z -> eps -> U -> e -> Theta` per iteration on the formulation without
/// the residual split (the `e` subproblem keeps the quadratic misfit), then
/// the multiplier step on the PSD coupling.
pub fn admm_solve(
    data: &ReceivedData,
    params: &SolverParams,
    initial: Option<SolverState>,
) -> Result<Solution> {
    solve_loop(data, params, initial, Algorithm::Admm)
}

/// Dispatches on the algorithm enum.
pub fn solve(
    algorithm: Algorithm,
    data: &ReceivedData,
    params: &SolverParams,
    initial: Option<SolverState>,
) -> Result<Solution> {
    solve_loop(data, params, initial, algorithm)
}

fn admm_iteration(
    state: &mut SolverState,
    data: &ReceivedData,
    rho: f64,
    lambda: f64,
    mu: f64,
) -> Result<()> {
    let (m, n) = state.coeffs.dims();
    let theta1 = state.theta1();
    let gamma_vec = state.gamma_vec();

    // z: data misfit plus the PSD-coupling penalty, elementwise since the
    // symbol matrix is diagonal: (S^H S + 2 rho I) z = S^H (r - e)
    // + 2 rho theta_1 + 2 gamma.
    state.z = CVector::from_fn(state.grid_size(), |i, _| {
        let s = data.s_hat[i];
        let rhs =
            s.conj() * (data.r[i] - state.e[i]) + 2.0 * rho * theta1[i] + 2.0 * gamma_vec[i];
        rhs / (s.norm_sqr() + 2.0 * rho)
    });
    state.eps = eps_update(state.theta_bar(), state.gamma_bar(), rho, lambda);
    state.coeffs = u_update(&state.theta0(), &state.gamma0(), m, n, rho, lambda);
    // e: prox of the l1 term against the residual r - S z.
    state.e = CVector::from_fn(state.grid_size(), |i, _| {
        soft_threshold_scalar(data.r[i] - data.s_hat[i] * state.z[i], mu)
    });
    let target = state.coupling_matrix() - state.gamma.clone() / C64::new(rho, 0.0);
    state.theta = psd_project(&target)?;
    // g is not a variable of this splitting; keep it at the residual it
    // stands for so shared reporting code sees a consistent state.
    state.g = CVector::from_fn(state.grid_size(), |i, _| {
        data.r[i] - state.e[i] - data.s_hat[i] * state.z[i]
    });
    Ok(())
}

fn solve_loop(
    data: &ReceivedData,
    params: &SolverParams,
    initial: Option<SolverState>,
    algorithm: Algorithm,
) -> Result<Solution> {
    params.validate()?;
    data.validate()?;
    let (blocks, subcarriers) = data.dims;
    let mn = blocks * subcarriers;
    let (lambda, mu) = params.weights(mn);
    let rho = params.rho;

    let mut state = match initial {
        Some(s) => {
            if s.grid_size() != mn {
                return Err(invalid("initial state dimensions do not match the data"));
            }
            s
        }
        None => SolverState::zeros(blocks, subcarriers),
    };

    let start = Instant::now();
    let mut history = Vec::new();
    let total = params.forced_steps.unwrap_or(params.max_iter);
    let mut status = Status::MaxIter;
    let mut iterations = 0;

    for iter in 1..=total {
        iterations = iter;
        match algorithm {
            Algorithm::SgsAdmm => {
                step1_eg(&mut state, data, rho, mu);
                step2_z_eps_u_theta(&mut state, data, rho, lambda)?;
                update_multipliers(&mut state, data, rho, params.varrho)?;
            }
            Algorithm::Admm => {
                admm_iteration(&mut state, data, rho, lambda, mu)?;
                let coupling = &state.theta - state.coupling_matrix();
                state.gamma += coupling * C64::new(params.varrho * rho, 0.0);
            }
        }

        if !state.is_finite() {
            status = Status::NumericFailure;
            break;
        }

        let last = iter == total;
        if iter % params.check_every == 0 || last {
            let kkt = kkt_residuals_form(&state, data, lambda, mu, params.stop_form)?;
            history.push(HistoryRecord {
                iter,
                objective: kkt.objective,
                kkt: kkt.clone(),
                seconds: start.elapsed().as_secs_f64(),
            });
            if kkt.eta_max <= params.tol && (params.forced_steps.is_none() || last) {
                status = Status::Converged;
                if params.forced_steps.is_none() {
                    break;
                }
            }
        }
    }

    Ok(Solution {
        state,
        iterations,
        history,
        status,
    })
}
