//! Velocity power spectra, autocorrelations, and mean-square displacements
//! of a Brownian microparticle in six media.
//!
//! Every medium maps to a mechanical network (its analogue including the
//! particle's distributed inertance), and the velocity power spectral
//! density follows from one master formula,
//! S(ω) = (NkT/3πR)·Re{iω/G(ω)},
//! equivalently the fluctuation–dissipation theorem read through the
//! network's fluidity. The module carries the specialized closed forms as
//! well; the master path must reproduce them to near machine precision,
//! which is the central self-check of the whole crate.
//!
//! Transform convention: see [`crate::curves::SPECTRUM_CONVENTION`]. The
//! spectrum is the two-sided density evaluated on ω ≥ 0, with
//! ∫₀^∞ S(ω) dω = π⟨v²⟩ = π·NkT/m (M in place of m when the medium
//! carries the added-mass correction).

use num_complex::Complex64;
use thiserror::Error;

use crate::curves::{
    CurveError, CurveKind, Normalization, SpectrumCurve, TimeCurve,
};
use crate::quad::{gauss16, integrate_oscillatory_tail, integrate_singular_head};
use crate::rheology::{
    DimensionlessGroups, PhysicalContext, RheoError, RheoNetwork,
};
use crate::specfun::erfcx_complex;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Rheo(#[from] RheoError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("{name} must be positive and finite, got {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("springpot order must lie in (0, 1] for a subdiffusive medium, got {0}")]
    SubdiffusiveOrder(f64),
    #[error("expected a curve of kind {expected:?}, got {got:?}")]
    WrongCurveKind { expected: CurveKind, got: CurveKind },
    #[error("curve needs at least {0} samples for this operation")]
    TooFewSamples(usize),
}

fn check_pos(name: &'static str, value: f64) -> Result<f64, SpectraError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SpectraError::BadParameter { name, value })
    }
}

fn check_nonneg(name: &'static str, value: f64) -> Result<f64, SpectraError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(SpectraError::BadParameter { name, value })
    }
}

fn check_freq(omega: f64) -> Result<f64, SpectraError> {
    if omega.is_finite() {
        // Spectra are even; negative frequencies fold onto the positive axis.
        Ok(omega.abs())
    } else {
        Err(SpectraError::BadParameter { name: "omega", value: omega })
    }
}

/// Material parameters of the six media. Together with a
/// [`PhysicalContext`] these determine the analogue network and every
/// spectral quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium {
    /// Newtonian fluid, viscosity eta.
    Viscous { eta: f64 },
    /// Kelvin-Voigt solid: harmonic trap of stiffness g in a viscous
    /// background eta (g = 0 degenerates to the viscous fluid).
    HarmonicTrap { g: f64, eta: f64 },
    /// Maxwell fluid: modulus g, viscosity eta, relaxation time eta/g.
    Maxwell { g: f64, eta: f64 },
    /// Jeffreys fluid: Maxwell arm (g, eta) in parallel with a solvent
    /// dashpot eta_inf.
    Jeffreys { g: f64, eta: f64, eta_inf: f64 },
    /// Power-law (springpot) medium, mu_alpha with exponent alpha in
    /// (0, 1]; the particle's MSD grows like t^alpha.
    Subdiffusive { mu_alpha: f64, alpha: f64 },
    /// Newtonian fluid with unsteady-Stokes (Basset) memory; the particle
    /// mass is derived from rho_p and the context radius, and the
    /// added-mass correction uses rho_f.
    Hydrodynamic { eta: f64, rho_f: f64, rho_p: f64 },
}

impl Medium {
    /// Stable lower-case tag naming the medium in errors, reports, and
    /// file headers.
    pub fn name(&self) -> &'static str {
        match self {
            Medium::Viscous { .. } => "viscous",
            Medium::HarmonicTrap { .. } => "trap",
            Medium::Maxwell { .. } => "maxwell",
            Medium::Jeffreys { .. } => "jeffreys",
            Medium::Subdiffusive { .. } => "subdiffusive",
            Medium::Hydrodynamic { .. } => "hydrodynamic",
        }
    }
}

/// A medium bound to the particle it surrounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub medium: Medium,
    pub ctx: PhysicalContext,
}

/// Derived quantities of the hydrodynamic medium: effective mass
/// M = m + ½m_f, its distributed form m_R = M/(6πR), the half-order
/// springpot coefficient μ = R√(ρ_f η), the time scale λ = (m_R/μ)², and
/// the density group γ = η m_R/μ² = (1/9)(1 + 2ρ_p/ρ_f).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HydroParams {
    pub(crate) m_eff: f64,
    pub(crate) m_r: f64,
    pub(crate) mu: f64,
    pub(crate) lambda: f64,
    pub(crate) gamma: f64,
    pub(crate) zeta: f64,
    pub(crate) z: f64,
}

pub(crate) fn hydro_params(
    ctx: &PhysicalContext,
    eta: f64,
    rho_f: f64,
    rho_p: f64,
) -> HydroParams {
    let r = ctx.radius;
    let sphere = 4.0 / 3.0 * PI * r.powi(3);
    let m_eff = sphere * (rho_p + 0.5 * rho_f);
    let m_r = m_eff / (6.0 * PI * r);
    let mu = r * (rho_f * eta).sqrt();
    let lambda = (m_r / mu).powi(2);
    let gamma = eta * m_r / (mu * mu);
    HydroParams {
        m_eff,
        m_r,
        mu,
        lambda,
        gamma,
        zeta: 6.0 * PI * r * eta,
        z: 6.0 * PI * r * r * (rho_f * eta).sqrt(),
    }
}

impl MediumSpec {
    pub fn new(medium: Medium, ctx: PhysicalContext) -> Result<Self, SpectraError> {
        match medium {
            Medium::Viscous { eta } => {
                check_pos("viscosity eta", eta)?;
            }
            Medium::HarmonicTrap { g, eta } => {
                // g = 0 is admitted: the trap degenerates exactly to the
                // viscous fluid (the constructor drops the spring).
                check_nonneg("trap stiffness g", g)?;
                check_pos("viscosity eta", eta)?;
            }
            Medium::Maxwell { g, eta } => {
                check_pos("modulus g", g)?;
                check_pos("viscosity eta", eta)?;
            }
            Medium::Jeffreys { g, eta, eta_inf } => {
                check_pos("modulus g", g)?;
                check_pos("viscosity eta", eta)?;
                check_nonneg("solvent viscosity eta_inf", eta_inf)?;
            }
            Medium::Subdiffusive { mu_alpha, alpha } => {
                check_pos("springpot parameter mu_alpha", mu_alpha)?;
                if !alpha.is_finite() || !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(SpectraError::SubdiffusiveOrder(alpha));
                }
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                check_pos("viscosity eta", eta)?;
                check_pos("fluid density rho_f", rho_f)?;
                check_pos("particle density rho_p", rho_p)?;
            }
        }
        Ok(Self { medium, ctx })
    }

    /// The mechanical network whose fluidity carries this medium's
    /// spectrum: the material analogue in parallel with the particle's
    /// inerter. For the hydrodynamic medium the masses come from the
    /// densities and the context radius; ctx.mass is not consulted there.
    pub fn analogue_network(&self) -> Result<RheoNetwork, SpectraError> {
        let m_r = self.ctx.m_r();
        let net = match self.medium {
            Medium::Viscous { eta } => RheoNetwork::interviscous(eta, m_r)?,
            Medium::HarmonicTrap { g, eta } => RheoNetwork::inertoviscoelastic(g, eta, m_r)?,
            Medium::Maxwell { g, eta } => RheoNetwork::maxwell_inerter(g, eta, m_r)?,
            Medium::Jeffreys { g, eta, eta_inf } => {
                RheoNetwork::jeffreys_inerter(g, eta, eta_inf, m_r)?
            }
            Medium::Subdiffusive { mu_alpha, alpha } => {
                RheoNetwork::springpot_inerter(mu_alpha, alpha, m_r)?
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                let h = hydro_params(&self.ctx, eta, rho_f, rho_p);
                RheoNetwork::hydrodynamic_network(eta, h.mu, h.m_r)?
            }
        };
        Ok(net)
    }

    /// Dimensionless groups of this medium (only the defined ones are
    /// present).
    pub fn groups(&self) -> DimensionlessGroups {
        let m_r = self.ctx.m_r();
        let mut g = DimensionlessGroups::default();
        match self.medium {
            Medium::Viscous { eta } => {
                g.tau = Some(m_r / eta);
            }
            Medium::HarmonicTrap { g: k, eta }
            | Medium::Maxwell { g: k, eta } => {
                g.tau = Some(m_r / eta);
                g.omega_r_tau = Some((k * m_r).sqrt() / eta);
            }
            Medium::Jeffreys { g: k, eta, eta_inf } => {
                g.tau = Some(m_r / eta);
                g.omega_r_tau = Some((k * m_r).sqrt() / eta);
                g.xi = Some(eta_inf / eta);
            }
            Medium::Subdiffusive { mu_alpha, alpha } => {
                g.lambda = Some((m_r / mu_alpha).powf(1.0 / (2.0 - alpha)));
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                let h = hydro_params(&self.ctx, eta, rho_f, rho_p);
                g.lambda = Some(h.lambda);
                g.gamma_ratio = Some(h.gamma);
            }
        }
        g
    }

    /// The time scale dividing the figure frequency axis: τ for the
    /// viscous-family media, λ for the power-law and hydrodynamic ones.
    pub fn time_scale(&self) -> f64 {
        let g = self.groups();
        g.tau.or(g.lambda).expect("every medium defines tau or lambda")
    }

    /// The reference level S_ref dividing the figure spectrum axis, so
    /// that the normalized spectrum is the pure shape function.
    pub fn s_ref(&self) -> f64 {
        let pref = self.ctx.psd_prefactor();
        match self.medium {
            Medium::Viscous { eta }
            | Medium::HarmonicTrap { eta, .. }
            | Medium::Maxwell { eta, .. }
            | Medium::Jeffreys { eta, .. } => pref / eta,
            Medium::Subdiffusive { mu_alpha, alpha } => {
                let lambda = (self.ctx.m_r() / mu_alpha).powf(1.0 / (2.0 - alpha));
                pref * lambda.powf(alpha - 1.0) / mu_alpha
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                let h = hydro_params(&self.ctx, eta, rho_f, rho_p);
                pref * h.m_r / (h.mu * h.mu)
            }
        }
    }

    /// The mass entering equipartition, ⟨v²⟩ = NkT/thermal_mass: the bare
    /// particle mass, except the hydrodynamic medium where the added-mass
    /// corrected M applies.
    pub fn thermal_mass(&self) -> f64 {
        match self.medium {
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                hydro_params(&self.ctx, eta, rho_f, rho_p).m_eff
            }
            _ => self.ctx.mass,
        }
    }

    /// The dimensionless shape of this medium's spectrum.
    pub fn normalized(&self) -> NormalizedMedium {
        let g = self.groups();
        match self.medium {
            Medium::Viscous { .. } => NormalizedMedium::Viscous,
            Medium::HarmonicTrap { .. } => NormalizedMedium::HarmonicTrap {
                omega_r_tau: g.omega_r_tau.unwrap(),
            },
            Medium::Maxwell { .. } => NormalizedMedium::Maxwell {
                omega_r_tau: g.omega_r_tau.unwrap(),
            },
            Medium::Jeffreys { .. } => NormalizedMedium::Jeffreys {
                omega_r_tau: g.omega_r_tau.unwrap(),
                xi: g.xi.unwrap(),
            },
            Medium::Subdiffusive { alpha, .. } => NormalizedMedium::Subdiffusive { alpha },
            Medium::Hydrodynamic { .. } => NormalizedMedium::Hydrodynamic {
                gamma: g.gamma_ratio.unwrap(),
            },
        }
    }

    /// Dimensional closed-form spectrum of this medium at ω.
    pub fn psd_closed(&self, omega: f64) -> Result<f64, SpectraError> {
        match self.medium {
            Medium::Viscous { eta } => psd_viscous(&self.ctx, eta, omega),
            Medium::HarmonicTrap { g, eta } => psd_trap(&self.ctx, g, eta, omega),
            Medium::Maxwell { g, eta } => psd_maxwell(&self.ctx, g, eta, omega),
            Medium::Jeffreys { g, eta, eta_inf } => {
                psd_jeffreys(&self.ctx, g, eta, eta_inf, omega)
            }
            Medium::Subdiffusive { mu_alpha, alpha } => {
                psd_subdiffusive(&self.ctx, mu_alpha, alpha, omega)
            }
            Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                psd_hydrodynamic(&self.ctx, eta, rho_f, rho_p, omega)
            }
        }
    }
}

/// The six spectra reduced to dimensionless shape functions of the
/// dimensionless frequency x = ωτ (or ωλ). Each shape is the full
/// spectrum divided by its medium's S_ref, and each integrates to π/2
/// over x ∈ [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizedMedium {
    Viscous,
    HarmonicTrap { omega_r_tau: f64 },
    Maxwell { omega_r_tau: f64 },
    Jeffreys { omega_r_tau: f64, xi: f64 },
    Subdiffusive { alpha: f64 },
    Hydrodynamic { gamma: f64 },
}

impl NormalizedMedium {
    pub fn validate(&self) -> Result<(), SpectraError> {
        match *self {
            Self::Viscous => Ok(()),
            Self::HarmonicTrap { omega_r_tau } => {
                check_nonneg("omega_R tau", omega_r_tau).map(|_| ())
            }
            Self::Maxwell { omega_r_tau } => check_pos("omega_R tau", omega_r_tau).map(|_| ()),
            Self::Jeffreys { omega_r_tau, xi } => {
                check_pos("omega_R tau", omega_r_tau)?;
                check_nonneg("viscosity ratio xi", xi).map(|_| ())
            }
            Self::Subdiffusive { alpha } => {
                if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
                    Ok(())
                } else {
                    Err(SpectraError::SubdiffusiveOrder(alpha))
                }
            }
            Self::Hydrodynamic { gamma } => check_pos("density group gamma", gamma).map(|_| ()),
        }
    }

    /// Shape value at dimensionless frequency x ≥ 0.
    pub fn shape(&self, x: f64) -> f64 {
        let x = x.abs();
        match *self {
            Self::Viscous => 1.0 / (1.0 + x * x),
            Self::HarmonicTrap { omega_r_tau: a } => {
                let (x2, a2) = (x * x, a * a);
                let d = a2 - x2;
                x2 / (d * d + x2)
            }
            Self::Maxwell { omega_r_tau: a } => {
                let (x2, a2) = (x * x, a * a);
                let a4 = a2 * a2;
                let d = a2 - x2;
                a4 / (d * d + x2 * a4)
            }
            Self::Jeffreys { omega_r_tau: a, xi } => {
                let (x2, a2) = (x * x, a * a);
                let a4 = a2 * a2;
                let d = (1.0 + xi) * a2 - x2;
                let s = xi + a2;
                (a4 * (1.0 + xi) + xi * x2) / (d * d + x2 * s * s)
            }
            Self::Subdiffusive { alpha } => {
                // alpha = 1 is the dashpot endpoint and must coincide with
                // the viscous shape exactly, while cos(pi/2) only rounds
                // to ~6e-17 in floating point.
                if alpha == 1.0 {
                    return Self::Viscous.shape(x);
                }
                if x == 0.0 {
                    return 0.0;
                }
                let (s, c) = (alpha * FRAC_PI_2).sin_cos();
                let xa = x.powf(alpha);
                let d = xa * c - x * x;
                let e = xa * s;
                x.powf(1.0 + alpha) * s / (d * d + e * e)
            }
            Self::Hydrodynamic { gamma } => {
                let sq = x.sqrt() * FRAC_1_SQRT_2;
                let re = gamma + sq;
                let im = sq + x;
                re / (re * re + im * im)
            }
        }
    }

    /// Large-x tail S/S_ref ≈ c·x^{−q}, returned as (c, q). Used to append
    /// analytic tails to truncated frequency integrals.
    pub fn tail(&self) -> (f64, f64) {
        match *self {
            Self::Viscous => (1.0, 2.0),
            Self::HarmonicTrap { .. } => (1.0, 2.0),
            Self::Maxwell { omega_r_tau: a } => (a.powi(4), 4.0),
            Self::Jeffreys { omega_r_tau: a, xi } => {
                if xi == 0.0 {
                    (a.powi(4), 4.0)
                } else {
                    (xi, 2.0)
                }
            }
            Self::Subdiffusive { alpha } => ((alpha * FRAC_PI_2).sin(), 3.0 - alpha),
            Self::Hydrodynamic { .. } => (FRAC_1_SQRT_2, 1.5),
        }
    }

    /// Shape samples on a dimensionless grid, as a normalized spectrum.
    pub fn curve(&self, grid: &[f64]) -> Result<SpectrumCurve, SpectraError> {
        self.validate()?;
        let values = grid.iter().map(|&x| self.shape(x)).collect();
        Ok(SpectrumCurve::new(grid.to_vec(), values, Normalization::Normalized)?)
    }
}

/// Master formula S(ω) = (NkT/3πR)·Re{iω/G(ω)} through the analogue
/// network's fluidity. This single code path must reproduce every
/// specialized closed form below; a pole of the fluidity (an undamped
/// resonance) propagates as an error naming the frequency.
pub fn psd_master(spec: &MediumSpec, omega: f64) -> Result<f64, SpectraError> {
    let w = check_freq(omega)?;
    let net = spec.analogue_network()?;
    let phi = net.fluidity(w)?;
    Ok(spec.ctx.psd_prefactor() * phi.re)
}

/// Newtonian fluid: S(ω) = (NkT/3πRη)/(1 + (ωτ)²), τ = m/(6πRη).
pub fn psd_viscous(ctx: &PhysicalContext, eta: f64, omega: f64) -> Result<f64, SpectraError> {
    check_pos("viscosity eta", eta)?;
    let w = check_freq(omega)?;
    let tau = ctx.m_r() / eta;
    Ok(ctx.psd_prefactor() / eta * NormalizedMedium::Viscous.shape(w * tau))
}

/// Harmonic trap in a viscous background:
/// S(ω) = (NkT/3πRη)·(ωτ)²/([(ω_Rτ)² − (ωτ)²]² + (ωτ)²), ω_R = √(G/m_R).
/// S(0) = 0: the solid pins DC diffusion. g = 0 reduces to the viscous
/// form.
pub fn psd_trap(
    ctx: &PhysicalContext,
    g: f64,
    eta: f64,
    omega: f64,
) -> Result<f64, SpectraError> {
    check_nonneg("trap stiffness g", g)?;
    check_pos("viscosity eta", eta)?;
    let w = check_freq(omega)?;
    let m_r = ctx.m_r();
    let tau = m_r / eta;
    let a = (g * m_r).sqrt() / eta;
    Ok(ctx.psd_prefactor() / eta
        * NormalizedMedium::HarmonicTrap { omega_r_tau: a }.shape(w * tau))
}

/// Maxwell fluid:
/// S(ω) = (NkT/3πRη)·(ω_Rτ)⁴/([(ω_Rτ)² − (ωτ)²]² + (ωτ)²(ω_Rτ)⁴).
pub fn psd_maxwell(
    ctx: &PhysicalContext,
    g: f64,
    eta: f64,
    omega: f64,
) -> Result<f64, SpectraError> {
    check_pos("modulus g", g)?;
    check_pos("viscosity eta", eta)?;
    let w = check_freq(omega)?;
    let m_r = ctx.m_r();
    let tau = m_r / eta;
    let a = (g * m_r).sqrt() / eta;
    Ok(ctx.psd_prefactor() / eta
        * NormalizedMedium::Maxwell { omega_r_tau: a }.shape(w * tau))
}

/// Jeffreys fluid (Maxwell arm plus solvent dashpot η_∞ = ξη):
/// S(ω) = (NkT/3πRη)·[(ω_Rτ)⁴(1+ξ) + ξ(ωτ)²] /
///        ([(1+ξ)(ω_Rτ)² − (ωτ)²]² + (ωτ)²[ξ + (ω_Rτ)²]²).
/// ξ = 0 recovers the Maxwell form identically; ω → 0 gives the viscous
/// level reduced by 1/(1+ξ).
pub fn psd_jeffreys(
    ctx: &PhysicalContext,
    g: f64,
    eta: f64,
    eta_inf: f64,
    omega: f64,
) -> Result<f64, SpectraError> {
    check_pos("modulus g", g)?;
    check_pos("viscosity eta", eta)?;
    check_nonneg("solvent viscosity eta_inf", eta_inf)?;
    let w = check_freq(omega)?;
    let m_r = ctx.m_r();
    let tau = m_r / eta;
    let a = (g * m_r).sqrt() / eta;
    let xi = eta_inf / eta;
    Ok(ctx.psd_prefactor() / eta
        * NormalizedMedium::Jeffreys { omega_r_tau: a, xi }.shape(w * tau))
}

/// Power-law medium:
/// S(ω) = S_ref·(ωλ)^{1+α} sin(απ/2) /
///        ([(ωλ)^α cos(απ/2) − (ωλ)²]² + [(ωλ)^α sin(απ/2)]²),
/// λ = (m_R/μ_α)^{1/(2−α)}, S_ref = (NkT/3πR)·λ^{α−1}/μ_α. The high-
/// frequency decay exponent is 3−α; α = 1 recovers the viscous form.
pub fn psd_subdiffusive(
    ctx: &PhysicalContext,
    mu_alpha: f64,
    alpha: f64,
    omega: f64,
) -> Result<f64, SpectraError> {
    check_pos("springpot parameter mu_alpha", mu_alpha)?;
    if !alpha.is_finite() || !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SpectraError::SubdiffusiveOrder(alpha));
    }
    let w = check_freq(omega)?;
    let lambda = (ctx.m_r() / mu_alpha).powf(1.0 / (2.0 - alpha));
    let s_ref = ctx.psd_prefactor() * lambda.powf(alpha - 1.0) / mu_alpha;
    Ok(s_ref * NormalizedMedium::Subdiffusive { alpha }.shape(w * lambda))
}

/// Unsteady-Stokes (Basset) medium:
/// S(ω) = S_ref·(γ + √(ωλ)·√2/2) /
///        ([γ + √(ωλ)·√2/2]² + [√(ωλ)·√2/2 + ωλ]²),
/// with S_ref = (NkT/3πR)·m_R/μ², λ = (m_R/μ)², μ = R√(ρ_f η), and
/// γ = ηm_R/μ² = (1/9)(1 + 2ρ_p/ρ_f). S(0) = NkT/(3πRη); the high-
/// frequency decay exponent is 3/2.
pub fn psd_hydrodynamic(
    ctx: &PhysicalContext,
    eta: f64,
    rho_f: f64,
    rho_p: f64,
    omega: f64,
) -> Result<f64, SpectraError> {
    check_pos("viscosity eta", eta)?;
    check_pos("fluid density rho_f", rho_f)?;
    check_pos("particle density rho_p", rho_p)?;
    let w = check_freq(omega)?;
    let h = hydro_params(ctx, eta, rho_f, rho_p);
    let s_ref = ctx.psd_prefactor() * h.m_r / (h.mu * h.mu);
    Ok(s_ref * NormalizedMedium::Hydrodynamic { gamma: h.gamma }.shape(w * h.lambda))
}

/// Velocity autocorrelation of the viscous medium,
/// ⟨v(0)·v(t)⟩ = (NkT/m)·e^{−t/τ}.
pub fn vacf_viscous(ctx: &PhysicalContext, eta: f64, t: f64) -> Result<f64, SpectraError> {
    check_pos("viscosity eta", eta)?;
    check_nonneg("time t", t)?;
    let tau = ctx.m_r() / eta;
    Ok(ctx.n_dim as f64 * ctx.kt / ctx.mass * (-t / tau).exp())
}

/// Velocity autocorrelation with hydrodynamic memory (Clercx–Schram):
/// ⟨v(0)·v(t)⟩ = (NkT/M)·[b·e^{b²t}erfc(b√t) − a·e^{a²t}erfc(a√t)]/(b−a),
/// a,b = (z ± √(z²−4ζM))/(2M), ζ = 6πRη, z = 6πR²√(ρ_f η).
///
/// The products e^{x²}erfc(x) are evaluated as the scaled complementary
/// error function erfcx, which avoids overflow at large t; complex-
/// conjugate roots (z² < 4ζM, the common dense-particle case) cancel to a
/// real value, and a double root falls back to the analytic limit.
/// The t → ∞ tail decays as t^{−3/2}.
pub fn vacf_hydrodynamic(
    ctx: &PhysicalContext,
    eta: f64,
    rho_f: f64,
    rho_p: f64,
    t: f64,
) -> Result<f64, SpectraError> {
    check_pos("viscosity eta", eta)?;
    check_pos("fluid density rho_f", rho_f)?;
    check_pos("particle density rho_p", rho_p)?;
    check_nonneg("time t", t)?;
    let h = hydro_params(ctx, eta, rho_f, rho_p);
    let disc = h.z * h.z - 4.0 * h.zeta * h.m_eff;
    let sq = Complex64::new(disc, 0.0).sqrt();
    let a = (h.z + sq) / (2.0 * h.m_eff);
    let b = (h.z - sq) / (2.0 * h.m_eff);
    let st = t.sqrt();
    let val = if (b - a).norm() <= 1e-6 * (a.norm() + b.norm()) {
        // Double root z² = 4ζM: the difference quotient degenerates to
        // d/db[b·erfcx(b√t)] = (1 + 2b²t)·erfcx(b√t) − 2b√t/√π.
        let x = a * st;
        (1.0 + 2.0 * x * x) * erfcx_complex(x) - 2.0 * x / PI.sqrt()
    } else {
        (b * erfcx_complex(b * st) - a * erfcx_complex(a * st)) / (b - a)
    };
    // Conjugate roots cancel analytically; anything beyond rounding noise
    // in the imaginary part would mean a root bookkeeping bug. The bound
    // is on the normalized value (1 at t = 0) because near-coincident
    // roots amplify the erfcx rounding by up to the 1e-6 separation
    // threshold before the limit branch takes over.
    debug_assert!(
        val.im.abs() <= 1e-6,
        "imaginary residue {} on real VACF",
        val.im
    );
    Ok(ctx.n_dim as f64 * ctx.kt / h.m_eff * val.re)
}

/// Mean-square displacement in the viscous medium,
/// ⟨Δr²(t)⟩ = (NkT/3πRη)·[t − τ(1 − e^{−t/τ})]; ballistic (NkT/m)t² for
/// t ≪ τ, diffusive slope NkT/(3πRη) for t ≫ τ.
pub fn msd_viscous(ctx: &PhysicalContext, eta: f64, t: f64) -> Result<f64, SpectraError> {
    check_pos("viscosity eta", eta)?;
    check_nonneg("time t", t)?;
    let tau = ctx.m_r() / eta;
    let x = t / tau;
    let c = ctx.psd_prefactor() / eta * tau;
    // t − τ(1−e^{−x}) = τ(x + expm1(−x)). Below x = 1/2 the expm1 form
    // keeps the quadratic regime accurate; above it the sample is
    // assembled as fl(c(x−1) + c·e^{−x}) in a single fused step, where
    // x − 1 is exact (the integer 1 lives on every binade grid down to
    // 2^-53), so each value is correctly rounded. Second differences of
    // these samples then resolve curvature as small as a few ε of the
    // sample magnitude, which a plain product chain would bury in
    // rounding noise (Higham, Accuracy and Stability, ch. 1 cancellation
    // analysis).
    if x < 0.5 {
        Ok(c * (x + (-x).exp_m1()))
    } else {
        Ok(c.mul_add(x - 1.0, c * (-x).exp()))
    }
}

/// Mean-square displacement of any medium through the generalized
/// Stokes–Einstein relation: ⟨Δr²(t)⟩ = (NkT/3πR)·J(t) with J the creep
/// compliance of the material network alone (no inerter; inertia enters
/// the MSD only through the short-time ballistic regime, which the creep
/// of the material-plus-inerter analogue reproduces automatically).
pub fn msd_from_network(spec: &MediumSpec, t_grid: &[f64]) -> Result<TimeCurve, SpectraError> {
    let pref = spec.ctx.psd_prefactor();
    let values: Vec<f64> = match spec.medium {
        // Closed path: the viscous analogue's creep is elementary.
        Medium::Viscous { eta } => {
            let mut vals = Vec::with_capacity(t_grid.len());
            for &t in t_grid {
                vals.push(msd_viscous(&spec.ctx, eta, t)?);
            }
            vals
        }
        _ => {
            let net = spec.analogue_network()?;
            let j = net.creep_compliance_numeric(t_grid)?;
            j.values.iter().map(|v| pref * v).collect()
        }
    };
    Ok(TimeCurve::new(CurveKind::Msd, t_grid.to_vec(), values)?)
}

/// Velocity autocorrelation as half the second time-derivative of the
/// MSD. Interior points use the three-point second difference (exact for
/// quadratics, also on non-uniform grids); each endpoint reuses its
/// adjacent triple one-sidedly.
pub fn vacf_from_msd(msd: &TimeCurve) -> Result<TimeCurve, SpectraError> {
    if msd.kind != CurveKind::Msd {
        return Err(SpectraError::WrongCurveKind { expected: CurveKind::Msd, got: msd.kind });
    }
    let n = msd.t_grid.len();
    if n < 3 {
        return Err(SpectraError::TooFewSamples(3));
    }
    // Quadratic through (t_{i-1}, t_i, t_{i+1}) has the constant second
    // derivative 2[f_{i+1}h_0 − f_i(h_0+h_1) + f_{i-1}h_1]/(h_0 h_1 (h_0+h_1))
    // with h_0 = t_i − t_{i-1}, h_1 = t_{i+1} − t_i. Evaluated as a
    // difference of one-sided slopes: subtracting nearby samples first is
    // exact in floating point (Sterbenz), so when the curvature is many
    // orders below the curve magnitude no rounding is added beyond what
    // the samples themselves carry.
    let second = |i: usize| {
        let (t0, t1, t2) = (msd.t_grid[i - 1], msd.t_grid[i], msd.t_grid[i + 1]);
        let (f0, f1, f2) = (msd.values[i - 1], msd.values[i], msd.values[i + 1]);
        let h0 = t1 - t0;
        let h1 = t2 - t1;
        2.0 * ((f2 - f1) / h1 - (f1 - f0) / h0) / (h0 + h1)
    };
    let mut values = Vec::with_capacity(n);
    values.push(0.5 * second(1));
    for i in 1..n - 1 {
        values.push(0.5 * second(i));
    }
    values.push(0.5 * second(n - 2));
    Ok(TimeCurve::new(CurveKind::Vacf, msd.t_grid.clone(), values)?)
}

/// 2·Re of the one-sided Fourier transform of a velocity autocorrelation,
/// S(ω) = 2∫₀^∞ C(t) cos(ωt) dt, by quadrature in u = ωt: log-graded
/// panels on (0, π] absorb any fast decay or mild singularity at the
/// origin, and the alternating π-panel sum over the tail is accelerated
/// by iterated averaging (handles both exponential and algebraic decay).
/// Returns (value, residual estimate).
pub fn spectrum_from_vacf(
    vacf: &dyn Fn(f64) -> f64,
    omega: f64,
) -> Result<(f64, f64), SpectraError> {
    check_pos("omega", omega)?;
    let h = |u: f64| vacf(u / omega) * u.cos();
    let head = integrate_singular_head(&h, PI, 1.0);
    let (tail, residual) = integrate_oscillatory_tail(&h, PI, PI, 192);
    Ok(((head + tail) * 2.0 / omega, residual * 2.0 / omega))
}

/// Result of the equipartition sum-rule check
/// ∫₀^∞ S(ω) dω = π·NkT/m (M for the hydrodynamic medium).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleReport {
    pub integral: f64,
    pub expected: f64,
    pub rel_err: f64,
}

/// Integrate the spectrum over all frequencies: Gauss panels on the
/// dimensionless body x ∈ [0, 10⁶] (log-graded above 10⁻⁶) plus this
/// medium's analytic power-law tail beyond.
pub fn psd_sum_rule(spec: &MediumSpec) -> Result<SumRuleReport, SpectraError> {
    let shape = spec.normalized();
    shape.validate()?;
    let scale = spec.time_scale();
    let s_ref = spec.s_ref();

    let f = |x: f64| shape.shape(x);
    let mut body = gauss16(&f, 0.0, 1e-6);
    let per_decade = 16;
    for i in 0..12 * per_decade {
        let lo = 1e-6 * 10f64.powf(i as f64 / per_decade as f64);
        let hi = 1e-6 * 10f64.powf((i + 1) as f64 / per_decade as f64);
        body += gauss16(&f, lo, hi);
    }
    let (c_tail, q) = shape.tail();
    let tail = c_tail * 1e6f64.powf(1.0 - q) / (q - 1.0);

    let integral = s_ref / scale * (body + tail);
    let expected =
        PI * spec.ctx.n_dim as f64 * spec.ctx.kt / spec.thermal_mass();
    Ok(SumRuleReport {
        integral,
        expected,
        rel_err: ((integral - expected) / expected).abs(),
    })
}
