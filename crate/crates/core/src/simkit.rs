//! Ensembles of Brownian trajectories by direct integration of the
//! (generalized) Langevin equation
//!
//!   m dv/dt = −∫₀^t ζ(t−s) v(s) ds − k r + f_R(t),
//!
//! with the random force tied to the friction kernel by the
//! fluctuation–dissipation theorem ⟨f_R(t) f_R(0)⟩ = k_BT ζ(|t|). Each
//! medium gets the strongest discretization its kernel admits:
//!
//! * Newtonian fluid: the velocity is an Ornstein–Uhlenbeck process, so
//!   the exact discrete propagator v ← e^{−dt/τ} v + ξ with the exact
//!   one-step variance (kT/m)(1 − e^{−2dt/τ}) is used; no discretization
//!   bias at any step size (Gillespie, Phys. Rev. E 54, 2084 (1996)).
//! * Harmonic trap, Maxwell, Jeffreys: the kernel is a δ spike plus at
//!   most one exponential, so the dynamics is Markovian in two variables
//!   (position–velocity for the trap, velocity plus one auxiliary
//!   Ornstein–Uhlenbeck stress for the exponential kernels). The exact
//!   Gaussian transition is sampled from the matrix exponential Φ = e^{A dt}
//!   and the step covariance Q = Σ∞ − Φ Σ∞ Φᵀ implied by the stationary
//!   covariance Σ∞, again with no step-size bias in the stationary law.
//! * Power-law (springpot) and hydrodynamic (Basset) kernels have no
//!   finite Markov embedding; the memory force is accumulated with the
//!   Grünwald–Letnikov convolution over the stored history and the random
//!   force is synthesized up front as stationary Gaussian noise with the
//!   cell-averaged kernel covariance, via circulant embedding of the
//!   covariance into a nonnegative FFT spectrum (Dietrich & Newsam,
//!   SIAM J. Sci. Comput. 18, 1088 (1997)). These convolution schemes are
//!   first-order weak: stationary moments carry an O(dt/λ) bias that the
//!   exact propagators above do not have, which is why the step products
//!   are held below 0.1.
//!
//! Trajectories are statistically independent and each one draws from its
//! own counter-based RNG stream derived from (seed, trajectory index), so
//! the ensemble is bit-reproducible no matter how many workers run it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::curves::TimeCurve;
use crate::specfun::gl_weights;
use crate::spectra::{hydro_params, Medium, MediumSpec, SpectraError};
use crate::Complex64;

/// Failures of configuration, synthesis, or integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// A scalar parameter is outside its admissible range.
    #[error("parameter {name} = {value} is outside its admissible range")]
    BadParameter { name: &'static str, value: f64 },
    /// The integration scheme does not apply to the medium.
    #[error("scheme {scheme:?} does not integrate the {medium} medium")]
    IncompatibleScheme { scheme: Scheme, medium: &'static str },
    /// The step violates the resolution invariant dt · rate < 0.1.
    #[error(
        "step too coarse: {name} = {value:.3} exceeds 0.1; shrink dt or set override_stability"
    )]
    CoarseStep { name: &'static str, value: f64 },
    /// The state left the thermal ball; the trajectory has blown up.
    #[error("trajectory {traj} diverged at step {step}: state exceeded 1e9 x thermal scale")]
    Diverged { traj: usize, step: usize },
    /// The requested stationary covariance is not positive semidefinite.
    #[error(
        "covariance is indefinite: circulant eigenvalue {min:.3e} below -1e-10 x max {max:.3e}"
    )]
    IndefiniteCovariance { min: f64, max: f64 },
    /// The covariance curve is not a uniform grid of lags from t = 0.
    #[error("covariance curve must be sampled on a uniform grid starting at t = 0")]
    BadCovarianceGrid,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Integration scheme. Each medium admits exactly one: the exact
/// Ornstein–Uhlenbeck propagator for the Newtonian fluid, the exact
/// Gaussian propagator of the two-variable Markov embedding for the trap
/// and the exponential kernels, and presynthesized spectral noise with a
/// Grünwald–Letnikov memory convolution for the power-law and
/// hydrodynamic kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    ExactOu,
    MarkovEmbedding,
    SpectralNoiseGlConvolution,
}

/// Everything that determines an ensemble, bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub medium: MediumSpec,
    /// Time step (s).
    pub dt: f64,
    /// Samples recorded per trajectory (after the burn-in).
    pub n_steps: usize,
    pub n_traj: usize,
    /// Seed of the trajectory RNG streams; fully determines the output.
    pub seed: u64,
    pub scheme: Scheme,
    /// Steps integrated and discarded before recording starts.
    pub burn_in: usize,
    /// Accept steps coarser than dt · rate = 0.1 (the integrators stay
    /// well defined; statistics degrade for the convolution schemes).
    pub override_stability: bool,
    /// Optional cap on the memory-convolution history length, trading the
    /// accuracy-first full O(n²) sum for speed. `None` keeps everything.
    pub max_history: Option<usize>,
}

impl SimConfig {
    /// A configuration with the medium's native scheme and the default
    /// burn-in of ten relaxation times (τ, or λ for the power-law and
    /// hydrodynamic media), rounded up to whole steps.
    pub fn new(
        medium: MediumSpec,
        dt: f64,
        n_steps: usize,
        n_traj: usize,
        seed: u64,
    ) -> Result<Self, SimError> {
        check_pos("dt", dt)?;
        let scheme = match medium.medium {
            Medium::Viscous { .. } => Scheme::ExactOu,
            Medium::HarmonicTrap { .. } | Medium::Maxwell { .. } | Medium::Jeffreys { .. } => {
                Scheme::MarkovEmbedding
            }
            Medium::Subdiffusive { .. } | Medium::Hydrodynamic { .. } => {
                Scheme::SpectralNoiseGlConvolution
            }
        };
        let burn_in = (10.0 * medium.time_scale() / dt).ceil() as usize;
        Ok(Self {
            medium,
            dt,
            n_steps,
            n_traj,
            seed,
            scheme,
            burn_in,
            override_stability: false,
            max_history: None,
        })
    }

    /// Check counts, scheme compatibility, and the resolution invariant
    /// dt · max relevant rate < 0.1 (unless overridden).
    pub fn validate(&self) -> Result<(), SimError> {
        check_pos("dt", self.dt)?;
        if self.n_steps == 0 {
            return Err(SimError::BadParameter { name: "n_steps", value: 0.0 });
        }
        if self.n_traj == 0 {
            return Err(SimError::BadParameter { name: "n_traj", value: 0.0 });
        }
        let compatible = matches!(
            (self.scheme, self.medium.medium),
            (Scheme::ExactOu, Medium::Viscous { .. })
                | (Scheme::MarkovEmbedding, Medium::HarmonicTrap { .. })
                | (Scheme::MarkovEmbedding, Medium::Maxwell { .. })
                | (Scheme::MarkovEmbedding, Medium::Jeffreys { .. })
                | (Scheme::SpectralNoiseGlConvolution, Medium::Subdiffusive { .. })
                | (Scheme::SpectralNoiseGlConvolution, Medium::Hydrodynamic { .. })
        );
        if !compatible {
            return Err(SimError::IncompatibleScheme {
                scheme: self.scheme,
                medium: self.medium.medium.name(),
            });
        }
        if !self.override_stability {
            for (name, value) in step_products(self) {
                if value >= 0.1 {
                    return Err(SimError::CoarseStep { name, value });
                }
            }
        }
        Ok(())
    }
}

/// Verdict of the step-resolution diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    Pass,
    Warn,
    Fail,
}

/// Dimensionless step products and the worst-case verdict: every product
/// below 0.1 passes, anything in [0.1, 1) warns, and 1 or more fails.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub products: Vec<(&'static str, f64)>,
    pub verdict: StabilityVerdict,
}

/// The products dt · rate over every rate the medium exposes: 1/τ for
/// viscous relaxation, the resonance ω_R, the kernel rate 1/θ, 1/λ for
/// the power-law and hydrodynamic scales.
fn step_products(cfg: &SimConfig) -> Vec<(&'static str, f64)> {
    let ctx = &cfg.medium.ctx;
    let dt = cfg.dt;
    let six_pi_r = ctx.six_pi_r();
    let m = ctx.mass;
    match cfg.medium.medium {
        Medium::Viscous { eta } => vec![("dt/tau", dt * six_pi_r * eta / m)],
        Medium::HarmonicTrap { g, eta } => vec![
            ("dt/tau", dt * six_pi_r * eta / m),
            ("omega_R*dt", dt * (six_pi_r * g / m).sqrt()),
        ],
        Medium::Maxwell { g, eta } => vec![
            ("omega_R*dt", dt * (six_pi_r * g / m).sqrt()),
            ("dt/theta", dt * g / eta),
        ],
        Medium::Jeffreys { g, eta, eta_inf } => vec![
            ("omega_R*dt", dt * (six_pi_r * g / m).sqrt()),
            ("dt/theta", dt * g / eta),
            ("dt/tau_inf", dt * six_pi_r * eta_inf / m),
        ],
        Medium::Subdiffusive { .. } => vec![("dt/lambda", dt / cfg.medium.time_scale())],
        Medium::Hydrodynamic { eta, rho_f, rho_p } => {
            let h = hydro_params(ctx, eta, rho_f, rho_p);
            vec![("dt/lambda", dt / h.lambda), ("dt/tau", dt * h.zeta / h.m_eff)]
        }
    }
}

/// Report the step products and the pass/warn/fail verdict for a
/// configuration without running it.
pub fn stability_report(cfg: &SimConfig) -> Result<StabilityReport, SimError> {
    check_pos("dt", cfg.dt)?;
    let products = step_products(cfg);
    let worst = products.iter().map(|&(_, v)| v).fold(0.0_f64, f64::max);
    let verdict = if worst < 0.1 {
        StabilityVerdict::Pass
    } else if worst < 1.0 {
        StabilityVerdict::Warn
    } else {
        StabilityVerdict::Fail
    };
    Ok(StabilityReport { products, verdict })
}

/// A recorded ensemble: sample j of trajectory i is the state at time
/// j · dt after the burn-in point. Positions are not re-zeroed at the end
/// of the burn-in, so displacement statistics must difference against the
/// first recorded sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub dt: f64,
    pub velocities: Vec<Vec<f64>>,
    pub positions: Vec<Vec<f64>>,
    pub medium: MediumSpec,
    pub seed: u64,
}

impl Ensemble {
    pub fn n_traj(&self) -> usize {
        self.velocities.len()
    }

    pub fn n_steps(&self) -> usize {
        self.velocities.first().map_or(0, Vec::len)
    }
}

fn check_pos(name: &'static str, value: f64) -> Result<(), SimError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(SimError::BadParameter { name, value });
    }
    Ok(())
}

/// Per-trajectory RNG: one ChaCha stream per trajectory index, all
/// derived from the ensemble seed. Streams are independent by cipher
/// design, so parallel scheduling cannot change any trajectory's draws.
fn traj_rng(seed: u64, traj: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(traj as u64);
    rng
}

/// Integrate the configured ensemble. Trajectories run independently (in
/// parallel when a rayon pool is installed) and are assembled in index
/// order, so the output is identical for any worker count.
pub fn simulate(cfg: &SimConfig) -> Result<Ensemble, SimError> {
    cfg.validate()?;
    let stepper = TrajStepper::prepare(cfg)?;
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..cfg.n_traj)
        .into_par_iter()
        .map(|traj| stepper.run(cfg, traj))
        .collect::<Result<_, _>>()?;
    let mut velocities = Vec::with_capacity(cfg.n_traj);
    let mut positions = Vec::with_capacity(cfg.n_traj);
    for (v, r) in pairs {
        velocities.push(v);
        positions.push(r);
    }
    Ok(Ensemble {
        dt: cfg.dt,
        velocities,
        positions,
        medium: cfg.medium,
        seed: cfg.seed,
    })
}

/// Shared, read-only per-run tables (propagators, GL weights, noise
/// spectra), prepared once and borrowed by every trajectory.
enum TrajStepper {
    Ou {
        decay: f64,
        kick: f64,
        sigma_v: f64,
        dt: f64,
    },
    Linear2(Linear2),
    Gl(GlSetup),
}

impl TrajStepper {
    fn prepare(cfg: &SimConfig) -> Result<Self, SimError> {
        let ctx = &cfg.medium.ctx;
        let kt_eff = ctx.n_dim as f64 * ctx.kt;
        let m = ctx.mass;
        let six_pi_r = ctx.six_pi_r();
        let dt = cfg.dt;
        match cfg.medium.medium {
            Medium::Viscous { eta } => {
                let tau = m / (six_pi_r * eta);
                let sigma_v = (kt_eff / m).sqrt();
                let decay = (-dt / tau).exp();
                // Exact one-step conditional variance of the OU velocity:
                // (kT/m)(1 − e^{−2dt/τ}).
                let kick = sigma_v * (-decay).mul_add(decay, 1.0).sqrt();
                Ok(TrajStepper::Ou { decay, kick, sigma_v, dt })
            }
            Medium::HarmonicTrap { g, eta } => {
                if g == 0.0 {
                    // The stationary position variance kT/(6πRg) is
                    // infinite; free diffusion is the viscous medium.
                    return Err(SimError::BadParameter { name: "trap stiffness g", value: g });
                }
                let k_spring = six_pi_r * g;
                let a = [[0.0, 1.0], [-k_spring / m, -six_pi_r * eta / m]];
                let sigma = [kt_eff / k_spring, kt_eff / m];
                Ok(TrajStepper::Linear2(Linear2::build(a, sigma, dt, StateKind::PositionVelocity)))
            }
            Medium::Maxwell { g, eta } => {
                let kk = six_pi_r * g;
                let a = [[0.0, 1.0 / m], [-kk, -g / eta]];
                let sigma = [kt_eff / m, kt_eff * kk];
                Ok(TrajStepper::Linear2(Linear2::build(a, sigma, dt, StateKind::VelocityStress)))
            }
            Medium::Jeffreys { g, eta, eta_inf } => {
                let kk = six_pi_r * g;
                let a = [[-six_pi_r * eta_inf / m, 1.0 / m], [-kk, -g / eta]];
                let sigma = [kt_eff / m, kt_eff * kk];
                Ok(TrajStepper::Linear2(Linear2::build(a, sigma, dt, StateKind::VelocityStress)))
            }
            Medium::Subdiffusive { mu_alpha, alpha } => {
                let total = cfg.burn_in + cfg.n_steps - 1;
                let k_frac = six_pi_r * mu_alpha;
                let cov = springpot_noise_cov(kt_eff, k_frac, alpha, dt, total.max(1));
                let sampler = CirculantSampler::new(&cov)?;
                Ok(TrajStepper::Gl(GlSetup {
                    weights: Arc::from(gl_weights(alpha, total + 1)),
                    sampler,
                    kind: GlKind::PositionMemory { k_frac, alpha },
                    mass: m,
                    sigma_v: (kt_eff / m).sqrt(),
                    dt,
                }))
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                let h = hydro_params(ctx, eta, rho_f, rho_p);
                let total = cfg.burn_in + cfg.n_steps - 1;
                let cov = basset_noise_cov(kt_eff, h.zeta, h.z, dt, total.max(1));
                let sampler = CirculantSampler::new(&cov)?;
                Ok(TrajStepper::Gl(GlSetup {
                    weights: Arc::from(gl_weights(0.5, total + 1)),
                    sampler,
                    kind: GlKind::VelocityMemory { zeta0: h.zeta, z: h.z },
                    mass: h.m_eff,
                    sigma_v: (kt_eff / h.m_eff).sqrt(),
                    dt,
                }))
            }
        }
    }

    fn run(&self, cfg: &SimConfig, traj: usize) -> Result<(Vec<f64>, Vec<f64>), SimError> {
        let mut rng = traj_rng(cfg.seed, traj);
        match self {
            TrajStepper::Ou { decay, kick, sigma_v, dt } => {
                run_ou(cfg, traj, &mut rng, *decay, *kick, *sigma_v, *dt)
            }
            TrajStepper::Linear2(lin) => run_linear2(cfg, traj, &mut rng, lin),
            TrajStepper::Gl(setup) => run_gl(cfg, traj, &mut rng, setup),
        }
    }
}

/// Exact Ornstein–Uhlenbeck stepping for the Newtonian fluid; positions
/// accumulate by the trapezoid rule over the recorded velocities.
#[allow(clippy::too_many_arguments)]
fn run_ou(
    cfg: &SimConfig,
    traj: usize,
    rng: &mut ChaCha8Rng,
    decay: f64,
    kick: f64,
    sigma_v: f64,
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>), SimError> {
    let limit = 1e9 * sigma_v;
    let mut v = sigma_v * sample_normal(rng);
    let mut r = 0.0;
    let mut vel = Vec::with_capacity(cfg.n_steps);
    let mut pos = Vec::with_capacity(cfg.n_steps);
    if cfg.burn_in == 0 {
        vel.push(v);
        pos.push(r);
    }
    let mut step = 0usize;
    while vel.len() < cfg.n_steps {
        step += 1;
        let v_new = decay * v + kick * sample_normal(rng);
        r += 0.5 * dt * (v + v_new);
        v = v_new;
        if !(v.abs() <= limit) {
            return Err(SimError::Diverged { traj, step });
        }
        if step >= cfg.burn_in {
            vel.push(v);
            pos.push(r);
        }
    }
    Ok((vel, pos))
}

/// Which physical pair the two-variable Markov state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StateKind {
    /// (r, v): the harmonic trap, whose force needs the position.
    PositionVelocity,
    /// (v, u): velocity plus the auxiliary Ornstein–Uhlenbeck memory
    /// force of an exponential kernel; positions by the trapezoid rule.
    VelocityStress,
}

/// Exact Gaussian transition of a stationary linear pair: Φ = e^{A dt}
/// and per-step noise L Lᵀ = Σ∞ − Φ Σ∞ Φᵀ, the unique covariance that
/// keeps Σ∞ invariant under x ← Φx + Lξ.
struct Linear2 {
    phi: [[f64; 2]; 2],
    chol: [[f64; 2]; 2],
    sigma: [f64; 2],
    kind: StateKind,
    dt: f64,
}

impl Linear2 {
    fn build(a: [[f64; 2]; 2], sigma: [f64; 2], dt: f64, kind: StateKind) -> Self {
        let phi = expm_2x2(a, dt);
        // Q = Σ∞ − Φ Σ∞ Φᵀ with diagonal Σ∞.
        let q00 = sigma[0] - (phi[0][0] * phi[0][0] * sigma[0] + phi[0][1] * phi[0][1] * sigma[1]);
        let q11 = sigma[1] - (phi[1][0] * phi[1][0] * sigma[0] + phi[1][1] * phi[1][1] * sigma[1]);
        let q01 = -(phi[0][0] * phi[1][0] * sigma[0] + phi[0][1] * phi[1][1] * sigma[1]);
        // Cholesky of the 2x2, clamping the rounding dust that appears
        // when dt is far below any relaxation time.
        let l00 = q00.max(0.0).sqrt();
        let l10 = if l00 > 0.0 { q01 / l00 } else { 0.0 };
        let l11 = (q11 - l10 * l10).max(0.0).sqrt();
        Linear2 { phi, chol: [[l00, 0.0], [l10, l11]], sigma, kind, dt }
    }
}

/// e^{A dt} for a real 2x2 matrix by the Cayley–Hamilton split
/// A = sI + B with tr B = 0, so B² = −det(B)·I and
/// e^{A dt} = e^{s dt} (cosh(ν dt) I + sinh(ν dt)/ν · B), ν² = −det B;
/// trigonometric for ν² < 0, series for the near-degenerate middle.
fn expm_2x2(a: [[f64; 2]; 2], dt: f64) -> [[f64; 2]; 2] {
    let s = 0.5 * (a[0][0] + a[1][1]);
    let b = [[a[0][0] - s, a[0][1]], [a[1][0], a[1][1] - s]];
    let nu_sq = b[0][0] * b[0][0] + b[0][1] * b[1][0];
    let x_sq = nu_sq * dt * dt;
    let (ch, shc) = if x_sq > 1e-12 {
        let nu = nu_sq.sqrt();
        (f64::cosh(nu * dt), f64::sinh(nu * dt) / nu)
    } else if x_sq < -1e-12 {
        let om = (-nu_sq).sqrt();
        (f64::cos(om * dt), f64::sin(om * dt) / om)
    } else {
        // cosh x = 1 + x²/2 + O(x⁴), sinh(x)/ν = dt (1 + x²/6 + O(x⁴));
        // the x⁴ truncation is below f64 resolution here.
        (1.0 + 0.5 * x_sq, dt * (1.0 + x_sq / 6.0))
    };
    let e = (s * dt).exp();
    [
        [e * (ch + shc * b[0][0]), e * shc * b[0][1]],
        [e * shc * b[1][0], e * (ch + shc * b[1][1])],
    ]
}

fn run_linear2(
    cfg: &SimConfig,
    traj: usize,
    rng: &mut ChaCha8Rng,
    lin: &Linear2,
) -> Result<(Vec<f64>, Vec<f64>), SimError> {
    let scale = [lin.sigma[0].sqrt(), lin.sigma[1].sqrt()];
    let limit = [1e9 * scale[0], 1e9 * scale[1]];
    // Velocity starts in equilibrium; the position (trap) and the
    // auxiliary stress start at zero and relax over the burn-in.
    let mut x = match lin.kind {
        StateKind::PositionVelocity => [0.0, scale[1] * sample_normal(rng)],
        StateKind::VelocityStress => [scale[0] * sample_normal(rng), 0.0],
    };
    let mut r_trapz = 0.0;
    let record = |x: &[f64; 2], r_trapz: f64| -> (f64, f64) {
        match lin.kind {
            StateKind::PositionVelocity => (x[1], x[0]),
            StateKind::VelocityStress => (x[0], r_trapz),
        }
    };
    let mut vel = Vec::with_capacity(cfg.n_steps);
    let mut pos = Vec::with_capacity(cfg.n_steps);
    if cfg.burn_in == 0 {
        let (v, r) = record(&x, r_trapz);
        vel.push(v);
        pos.push(r);
    }
    let mut step = 0usize;
    while vel.len() < cfg.n_steps {
        step += 1;
        let n0 = sample_normal(rng);
        let n1 = sample_normal(rng);
        let v_old = match lin.kind {
            StateKind::PositionVelocity => x[1],
            StateKind::VelocityStress => x[0],
        };
        let x_new = [
            lin.phi[0][0] * x[0] + lin.phi[0][1] * x[1] + lin.chol[0][0] * n0,
            lin.phi[1][0] * x[0] + lin.phi[1][1] * x[1] + lin.chol[1][0] * n0 + lin.chol[1][1] * n1,
        ];
        x = x_new;
        if lin.kind == StateKind::VelocityStress {
            r_trapz += 0.5 * lin.dt * (v_old + x[0]);
        }
        if !(x[0].abs() <= limit[0] && x[1].abs() <= limit[1]) {
            return Err(SimError::Diverged { traj, step });
        }
        if step >= cfg.burn_in {
            let (v, r) = record(&x, r_trapz);
            vel.push(v);
            pos.push(r);
        }
    }
    Ok((vel, pos))
}

/// Which history the Grünwald–Letnikov convolution runs over.
enum GlKind {
    /// Springpot memory −6πR μ_α d^α r/dt^α on the position history.
    PositionMemory { k_frac: f64, alpha: f64 },
    /// Basset memory −z d^{1/2} v/dt^{1/2} plus Stokes drag −ζ₀ v on the
    /// velocity history.
    VelocityMemory { zeta0: f64, z: f64 },
}

struct GlSetup {
    weights: Arc<[f64]>,
    sampler: CirculantSampler,
    kind: GlKind,
    mass: f64,
    sigma_v: f64,
    dt: f64,
}

/// Cell-averaged discrete covariance of the springpot kernel noise,
/// c(t) = kT · 6πR μ_α t^{−α}/Γ(1−α): averaging f_R over step cells turns
/// the kernel into the second difference of its double integral
/// G(t) = kT K t^{2−α}/(Γ(1−α)(1−α)(2−α)), which is finite at zero lag.
/// α = 1 is the Newtonian endpoint where the kernel is a δ spike and only
/// the zero lag survives, with the 1/dt white-noise rule.
fn springpot_noise_cov(kt_eff: f64, k_frac: f64, alpha: f64, dt: f64, n: usize) -> Vec<f64> {
    let mut cov = vec![0.0; n];
    if alpha == 1.0 {
        cov[0] = 2.0 * kt_eff * k_frac / dt;
        return cov;
    }
    let gamma_1ma = crate::specfun::gamma_fn(1.0 - alpha)
        .expect("Gamma(1-alpha) is finite for alpha in (0,1)");
    let scale =
        kt_eff * k_frac / (gamma_1ma * (1.0 - alpha) * (2.0 - alpha)) * dt.powf(-alpha);
    let p = 2.0 - alpha;
    for (j, slot) in cov.iter_mut().enumerate() {
        let j = j as f64;
        *slot = scale * ((j + 1.0).powf(p) - 2.0 * j.powf(p) + (j - 1.0).abs().powf(p));
    }
    cov
}

/// Cell-averaged discrete covariance of the Basset kernel noise,
/// c(t) = kT [2ζ₀ δ(t) + z d/dt(t^{−1/2}/√π)]: the double integral of the
/// fractional part is (2z/√π)√t, so lags j ≥ 1 carry the negative
/// anticorrelation (2z kT/√π) dt^{−3/2} (√(j+1) − 2√j + √(j−1)) and the
/// zero lag adds the white 2kTζ₀/dt.
fn basset_noise_cov(kt_eff: f64, zeta0: f64, z: f64, dt: f64, n: usize) -> Vec<f64> {
    let frac = 2.0 * z * kt_eff / PI_SQRT * dt.powf(-1.5);
    let mut cov = vec![0.0; n];
    for (j, slot) in cov.iter_mut().enumerate() {
        let j = j as f64;
        *slot = frac * ((j + 1.0).sqrt() - 2.0 * j.sqrt() + (j - 1.0).abs().sqrt());
    }
    cov[0] += 2.0 * kt_eff * zeta0 / dt;
    cov
}

const PI_SQRT: f64 = 1.7724538509055160273;

/// Grünwald–Letnikov memory stepping. The springpot memory acts on the
/// position history and is taken fully explicit, with the position then
/// advanced by the fresh velocity: symplectic (semi-implicit) Euler for
/// the elastic channel, whose stability boundary ω dt < 2 sits far above
/// the dt/λ < 0.1 resolution invariant. The Basset memory acts on the
/// velocity history and has no elastic channel, so its newest term is
/// taken at the unknown velocity, a scalar solve that keeps the
/// half-order drag a contraction at any step.
fn run_gl(
    cfg: &SimConfig,
    traj: usize,
    rng: &mut ChaCha8Rng,
    setup: &GlSetup,
) -> Result<(Vec<f64>, Vec<f64>), SimError> {
    let dt = setup.dt;
    let m = setup.mass;
    let total = cfg.burn_in + cfg.n_steps - 1;
    let limit = 1e9 * setup.sigma_v;
    let mut v = setup.sigma_v * sample_normal(rng);
    let noise = setup.sampler.sample(total, rng);
    let w = &setup.weights[..];
    let cap = cfg.max_history.unwrap_or(usize::MAX);
    // Full trajectories from t = 0 (the convolution needs them anyway);
    // recording slices from the burn-in index.
    let mut vel_full = Vec::with_capacity(total + 1);
    let mut pos_full = Vec::with_capacity(total + 1);
    vel_full.push(v);
    pos_full.push(0.0);
    let mut r = 0.0;
    match setup.kind {
        GlKind::PositionMemory { k_frac, alpha } => {
            let da = dt.powf(-alpha);
            for k in 1..=total {
                // Memory at the known time: dt^{−α} Σ_{j≥0} w_j r_{k−1−j}.
                let last = k - 1;
                let reach = last.min(cap);
                let mut mem = w[0] * r;
                for (wj, hj) in
                    w[1..=reach].iter().zip(pos_full[last - reach..last].iter().rev())
                {
                    mem += wj * hj;
                }
                v += dt * (noise[k - 1] - k_frac * da * mem) / m;
                r += dt * v;
                vel_full.push(v);
                pos_full.push(r);
                if !(v.abs() <= limit) {
                    return Err(SimError::Diverged { traj, step: k });
                }
            }
        }
        GlKind::VelocityMemory { zeta0, z } => {
            let dh = dt.powf(-0.5);
            let denom = m / dt + zeta0 + z * dh;
            for k in 1..=total {
                // M(v′−v)/dt = −ζ₀v′ − z dt^{−1/2}(w₀v′ + Σ_{j≥1} w_j v_{k−j}) + f
                let reach = k.min(cap);
                let mut conv = 0.0;
                for (wj, hj) in
                    w[1..=reach].iter().zip(vel_full[k - reach..k].iter().rev())
                {
                    conv += wj * hj;
                }
                let v_new = (m * v / dt - z * dh * conv + noise[k - 1]) / denom;
                r += 0.5 * dt * (v + v_new);
                v = v_new;
                vel_full.push(v);
                pos_full.push(r);
                if !(v.abs() <= limit) {
                    return Err(SimError::Diverged { traj, step: k });
                }
            }
        }
    }
    let first = cfg.burn_in;
    Ok((vel_full[first..=total].to_vec(), pos_full[first..=total].to_vec()))
}

fn sample_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Stationary Gaussian sampler by circulant embedding: the covariance
/// lags are reflected onto a circle of length 2n−2, whose eigenvalues are
/// the real FFT of the circle. Nonnegative eigenvalues give an exact
/// factorization; dust below 1e-10 of the peak is clipped, anything more
/// negative is a genuinely indefinite model and is refused.
struct CirculantSampler {
    m: usize,
    sqrt_eigs: Vec<f64>,
    inverse: Arc<dyn rustfft::Fft<f64>>,
}

impl CirculantSampler {
    fn new(cov: &[f64]) -> Result<Self, SimError> {
        let mut lags = cov.to_vec();
        if lags.len() < 2 {
            lags.resize(2, 0.0);
        }
        let n = lags.len();
        let m = 2 * n - 2;
        let mut circle: Vec<Complex64> = Vec::with_capacity(m);
        circle.extend(lags.iter().map(|&c| Complex64::new(c, 0.0)));
        circle.extend(lags[1..n - 1].iter().rev().map(|&c| Complex64::new(c, 0.0)));
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m).process(&mut circle);
        let eigs: Vec<f64> = circle.iter().map(|z| z.re).collect();
        let max = eigs.iter().copied().fold(0.0_f64, f64::max);
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-10 * max {
            return Err(SimError::IndefiniteCovariance { min, max });
        }
        let sqrt_eigs = eigs.iter().map(|&l| l.max(0.0).sqrt()).collect();
        Ok(CirculantSampler { m, sqrt_eigs, inverse: planner.plan_fft_inverse(m) })
    }

    /// Draw one series of length `n_out` ≤ m. A proper complex Gaussian
    /// is shaped by √λ and transformed back; the real part, scaled by
    /// 1/√m, has exactly the embedded covariance.
    fn sample(&self, n_out: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .sqrt_eigs
            .iter()
            .map(|&s| Complex64::new(s * sample_normal(rng), s * sample_normal(rng)))
            .collect();
        self.inverse.process(&mut buf);
        let norm = 1.0 / (self.m as f64).sqrt();
        buf[..n_out.min(self.m)].iter().map(|z| z.re * norm).collect()
    }
}

/// Synthesize a stationary Gaussian series of length n whose lag-j
/// autocovariance matches cov.values[j] (lags beyond the curve are taken
/// as zero). The curve must be sampled uniformly from t = 0; its values
/// are used as the discrete per-step covariance directly, so a white
/// continuous kernel of strength S·δ(t) must be passed pre-discretized as
/// cov(0) = S/dt (step-cell averaging rule).
pub fn synthesize_colored_noise(
    cov: &TimeCurve,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>, SimError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if cov.t_grid.first() != Some(&0.0) || (cov.len() > 1 && cov.uniform_step().is_none()) {
        return Err(SimError::BadCovarianceGrid);
    }
    let mut lags = vec![0.0; n];
    for (slot, &c) in lags.iter_mut().zip(cov.values.iter()) {
        *slot = c;
    }
    let sampler = CirculantSampler::new(&lags)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.sample(n, &mut rng))
}
