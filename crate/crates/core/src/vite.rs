//! Variational imaginary time evolution.
//!
//! The parameters follow A·θ̇ = C with
//! A_ij = Re⟨∂_iφ|∂_jφ⟩ and C_i = −Re⟨∂_iφ|H|φ⟩, integrated with forward
//! Euler steps of size `delta_tau`. A step that would raise the energy by
//! more than `10·energy_tol` is retried at half the step size: near
//! rank-deficient points of A the full step overshoots.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{expectation, inner_re, Circuit, PauliHamiltonian, C64};

const MAX_HALVINGS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ViteConfig {
    pub delta_tau: f64,
    pub max_steps: usize,
    /// Stop once |E_k − E_{k−1}| falls below this.
    pub energy_tol: f64,
    /// Tikhonov term added to the diagonal of A.
    pub ridge: f64,
    /// Initial angles are drawn from Uniform(−init_scale, init_scale).
    pub init_scale: f64,
    pub seed: u64,
    /// Reuse the previous circuit's converged angles when a gate is appended.
    pub warm_start: bool,
}

impl Default for ViteConfig {
    fn default() -> Self {
        Self {
            delta_tau: 0.1,
            max_steps: 500,
            energy_tol: 1e-7,
            ridge: 1e-6,
            init_scale: 0.1,
            seed: 0,
            warm_start: false,
        }
    }
}

impl ViteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_tau > 0.0) || !self.delta_tau.is_finite() {
            return Err(Error::Config(format!(
                "delta_tau must be positive, got {}",
                self.delta_tau
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        if !(self.energy_tol > 0.0) {
            return Err(Error::Config(format!(
                "energy_tol must be positive, got {}",
                self.energy_tol
            )));
        }
        if !(self.ridge >= 0.0) {
            return Err(Error::Config(format!(
                "ridge must be non-negative, got {}",
                self.ridge
            )));
        }
        if !(self.init_scale >= 0.0) {
            return Err(Error::Config(format!(
                "init_scale must be non-negative, got {}",
                self.init_scale
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn initial_params(&self, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..n)
            .map(|_| sample_angle(&mut rng, self.init_scale))
            .collect()
    }
}

fn sample_angle(rng: &mut impl Rng, scale: f64) -> f64 {
    if scale > 0.0 {
        rng.gen_range(-scale..scale)
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViteResult {
    pub final_params: Vec<f64>,
    /// E at the initial parameters followed by E after every step.
    pub energy_trace: Vec<f64>,
    /// Imaginary time reached at each trace entry.
    pub tau_trace: Vec<f64>,
    pub converged: bool,
    pub steps_used: usize,
}

impl ViteResult {
    pub fn final_energy(&self) -> f64 {
        *self.energy_trace.last().expect("trace is never empty")
    }
}

/// A and C assembled from one derivative sweep, plus the current energy.
#[derive(Clone, Debug)]
pub struct McLachlanSystem {
    pub a: DMatrix<f64>,
    pub c: DVector<f64>,
    pub energy: f64,
}

pub fn mclachlan_system(
    circuit: &Circuit,
    params: &[f64],
    ham: &PauliHamiltonian,
) -> Result<McLachlanSystem> {
    if ham.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            got: ham.n_qubits(),
        });
    }
    let (state, derivs) = circuit.state_and_derivatives(params)?;
    let h_phi = ham.apply(state.amplitudes())?;
    let energy = expectation(&state, ham)?;
    Ok(McLachlanSystem {
        a: metric(&derivs),
        c: drive(&derivs, &h_phi),
        energy,
    })
}

fn metric(derivs: &[Vec<C64>]) -> DMatrix<f64> {
    let n = derivs.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = inner_re(&derivs[i], &derivs[j]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

fn drive(derivs: &[Vec<C64>], h_phi: &[C64]) -> DVector<f64> {
    DVector::from_iterator(derivs.len(), derivs.iter().map(|d| -inner_re(d, h_phi)))
}

/// A_ij = Re⟨∂_iφ|∂_jφ⟩.
pub fn build_a(circuit: &Circuit, params: &[f64]) -> Result<DMatrix<f64>> {
    if circuit.n_params() == 0 {
        return Err(Error::NoParameters);
    }
    let (_, derivs) = circuit.state_and_derivatives(params)?;
    Ok(metric(&derivs))
}

/// C_i = −Re⟨∂_iφ|H|φ⟩.
pub fn build_c(circuit: &Circuit, params: &[f64], ham: &PauliHamiltonian) -> Result<DVector<f64>> {
    if circuit.n_params() == 0 {
        return Err(Error::NoParameters);
    }
    Ok(mclachlan_system(circuit, params, ham)?.c)
}

/// Solves (A + ridge·I)·θ̇ = C, falling back to a truncated pseudo-inverse
/// when the regularized matrix is not positive definite.
pub fn solve_rate(a: &DMatrix<f64>, c: &DVector<f64>, ridge: f64) -> Result<DVector<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let reg = a + DMatrix::identity(n, n) * ridge;
    let rate = match reg.clone().cholesky() {
        Some(ch) => ch.solve(c),
        None => {
            let svd = reg.svd(true, true);
            let cutoff = 1e-8 * svd.singular_values.max().max(f64::MIN_POSITIVE);
            svd.solve(c, cutoff)
                .map_err(|e| Error::Numerical(format!("McLachlan solve failed: {e}")))?
        }
    };
    if rate.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(
            "McLachlan solve produced non-finite rates".into(),
        ));
    }
    Ok(rate)
}

/// θ + δτ·θ̇.
pub fn vite_step(
    a: &DMatrix<f64>,
    c: &DVector<f64>,
    params: &[f64],
    config: &ViteConfig,
) -> Result<Vec<f64>> {
    if params.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: c.len(),
            got: params.len(),
        });
    }
    let rate = solve_rate(a, c, config.ridge)?;
    Ok(params
        .iter()
        .zip(rate.iter())
        .map(|(p, r)| p + config.delta_tau * r)
        .collect())
}

/// Runs VITE from angles drawn with `config.seed`.
pub fn run_vite(
    circuit: &Circuit,
    ham: &PauliHamiltonian,
    config: &ViteConfig,
) -> Result<ViteResult> {
    run_vite_from(
        circuit,
        ham,
        config,
        config.initial_params(circuit.n_params()),
    )
}

/// Runs VITE starting from `previous` angles extended with freshly drawn
/// ones for any rotations beyond `previous.len()`.
pub fn run_vite_warm(
    circuit: &Circuit,
    ham: &PauliHamiltonian,
    config: &ViteConfig,
    previous: &[f64],
) -> Result<ViteResult> {
    let n = circuit.n_params();
    let mut params: Vec<f64> = previous.iter().copied().take(n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while params.len() < n {
        params.push(sample_angle(&mut rng, config.init_scale));
    }
    run_vite_from(circuit, ham, config, params)
}

pub fn run_vite_from(
    circuit: &Circuit,
    ham: &PauliHamiltonian,
    config: &ViteConfig,
    init: Vec<f64>,
) -> Result<ViteResult> {
    config.validate()?;
    if init.len() != circuit.n_params() {
        return Err(Error::ParamCount {
            expected: circuit.n_params(),
            got: init.len(),
        });
    }
    if circuit.n_params() == 0 {
        let e = expectation(&circuit.prepare(&[])?, ham)?;
        check_finite(e)?;
        return Ok(ViteResult {
            final_params: init,
            energy_trace: vec![e],
            tau_trace: vec![0.0],
            converged: true,
            steps_used: 0,
        });
    }

    let mut params = init;
    let mut sys = mclachlan_system(circuit, &params, ham)?;
    check_finite(sys.energy)?;
    let mut trace = vec![sys.energy];
    let mut taus = vec![0.0];
    let mut converged = false;
    let mut steps = 0;
    let slack = 10.0 * config.energy_tol;
    while steps < config.max_steps {
        let rate = solve_rate(&sys.a, &sys.c, config.ridge)?;
        let prev = sys.energy;
        let mut dt = config.delta_tau;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = params
                .iter()
                .zip(rate.iter())
                .map(|(p, r)| p + dt * r)
                .collect();
            let trial_sys = mclachlan_system(circuit, &trial, ham)?;
            check_finite(trial_sys.energy)?;
            if trial_sys.energy <= prev + slack {
                accepted = Some((trial, trial_sys));
                break;
            }
            dt *= 0.5;
        }
        let Some((next, next_sys)) = accepted else {
            // no descent left along the McLachlan direction
            converged = true;
            break;
        };
        params = next;
        sys = next_sys;
        steps += 1;
        trace.push(sys.energy);
        taus.push(taus.last().unwrap() + dt);
        if dt == config.delta_tau && (sys.energy - prev).abs() < config.energy_tol {
            converged = true;
            break;
        }
    }
    Ok(ViteResult {
        final_params: params,
        energy_trace: trace,
        tau_trace: taus,
        converged,
        steps_used: steps,
    })
}

fn check_finite(e: f64) -> Result<()> {
    if e.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "non-finite energy {e} during VITE"
        )))
    }
}
