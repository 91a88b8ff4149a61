//! Mechanical elements, rheological networks, and their material functions.
//!
//! A medium is a composition tree of springs, dashpots, springpots, and an
//! inerter. Parallel branches add moduli; series branches add compliances.
//! The complex dynamic modulus G(ω) of the tree determines everything else:
//! the fluidity φ(ω) = iω/G(ω), the relaxation modulus, and the creep
//! compliance J(t), which is also the mean-square displacement up to the
//! thermal prefactor NkT/(3πR).

use num_complex::Complex64;
use thiserror::Error;

use crate::curves::{CurveKind, TimeCurve};
use crate::quad::{integrate_oscillatory_tail, integrate_singular_head};
use crate::specfun::{frac_power_iomega, gamma_fn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RheoError {
    #[error("{name} must be nonnegative and finite, got {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("springpot order must lie in [0, 1], got {0}")]
    SpringpotOrder(f64),
    #[error("network has no elements (all constructor parameters were zero)")]
    EmptyNetwork,
    #[error("fluidity pole: G(omega) = 0 at omega = {omega} rad/s (network resonance)")]
    FluidityPole { omega: f64 },
    #[error("relaxation modulus unsupported for this topology (supported: spring, dashpot, \
             springpot, spring-dashpot series, and parallel combinations of those)")]
    UnsupportedRelaxation,
    #[error("closed-form creep unsupported for this topology (supported: spring, dashpot, \
             springpot, dashpot-inerter parallel); use creep_compliance_numeric")]
    UnsupportedCreep,
    #[error("time must be {bound}, got {value}")]
    BadTime { bound: &'static str, value: f64 },
    #[error("creep inversion requires G ~ c (i omega)^p with p <= 1 at DC, network has p = {0}")]
    NonIntegrableDc(f64),
    #[error("creep quadrature did not converge at t = {t} (residual {residual:e}); \
             the network may have an undamped resonance")]
    QuadratureAccuracy { t: f64, residual: f64 },
    #[error("physical context: {0}")]
    BadContext(&'static str),
}

fn check_param(name: &'static str, value: f64) -> Result<f64, RheoError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(RheoError::BadParameter { name, value })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<f64, RheoError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(RheoError::BadParameter { name, value })
    }
}

/// A primitive mechanical element. Material constants are strictly
/// positive; a vanishing element is expressed by leaving it out of the
/// network instead (the named constructors do this automatically).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Hookean spring, shear modulus g (Pa).
    Spring { g: f64 },
    /// Newtonian dashpot, shear viscosity eta (Pa·s).
    Dashpot { eta: f64 },
    /// Inerter, distributed inertance m_r (Pa·s²); for a particle of mass m
    /// and radius R, m_r = m/(6πR).
    Inerter { m_r: f64 },
    /// Scott-Blair springpot, mu_alpha (Pa·s^alpha) with order alpha in
    /// [0, 1]; alpha = 0 is the spring, alpha = 1 the dashpot. The order
    /// 3/2 appears only inside [`RheoNetwork::hydrodynamic_network`].
    Springpot { mu_alpha: f64, alpha: f64 },
}

impl Element {
    pub fn spring(g: f64) -> Result<Self, RheoError> {
        Ok(Self::Spring { g: check_positive("spring modulus g", g)? })
    }

    pub fn dashpot(eta: f64) -> Result<Self, RheoError> {
        Ok(Self::Dashpot { eta: check_positive("dashpot viscosity eta", eta)? })
    }

    pub fn inerter(m_r: f64) -> Result<Self, RheoError> {
        Ok(Self::Inerter { m_r: check_positive("inertance m_r", m_r)? })
    }

    pub fn springpot(mu_alpha: f64, alpha: f64) -> Result<Self, RheoError> {
        check_positive("springpot parameter mu_alpha", mu_alpha)?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(RheoError::SpringpotOrder(alpha));
        }
        Ok(Self::Springpot { mu_alpha, alpha })
    }

    /// Complex dynamic modulus of the bare element.
    pub fn modulus(&self, omega: f64) -> Complex64 {
        match *self {
            Self::Spring { g } => Complex64::new(g, 0.0),
            Self::Dashpot { eta } => Complex64::new(0.0, omega * eta),
            Self::Inerter { m_r } => Complex64::new(-omega * omega * m_r, 0.0),
            Self::Springpot { mu_alpha, alpha } => {
                // Exact endpoint behavior so alpha = 0 and alpha = 1 are
                // indistinguishable from the spring and the dashpot.
                if alpha == 0.0 {
                    Complex64::new(mu_alpha, 0.0)
                } else if alpha == 1.0 {
                    Complex64::new(0.0, omega * mu_alpha)
                } else {
                    mu_alpha * frac_power_iomega(omega, alpha)
                }
            }
        }
    }

    /// Leading DC behavior G(ω) → c (iω)^p as ω → 0⁺.
    fn dc(&self) -> (f64, f64) {
        match *self {
            Self::Spring { g } => (g, 0.0),
            Self::Dashpot { eta } => (eta, 1.0),
            Self::Inerter { m_r } => (m_r, 2.0),
            Self::Springpot { mu_alpha, alpha } => (mu_alpha, alpha),
        }
    }
}

/// A composition tree of elements. Parallel nodes add moduli; series nodes
/// add compliances.
#[derive(Debug, Clone, PartialEq)]
pub enum RheoNetwork {
    Element(Element),
    Parallel(Vec<RheoNetwork>),
    Series(Vec<RheoNetwork>),
}

impl From<Element> for RheoNetwork {
    fn from(e: Element) -> Self {
        Self::Element(e)
    }
}

impl RheoNetwork {
    /// Dashpot ∥ inerter: memoryless viscous fluid seen by an inertial
    /// particle.
    pub fn interviscous(eta: f64, m_r: f64) -> Result<Self, RheoError> {
        Self::assemble(vec![optional_dashpot(eta)?, optional_inerter(m_r)?])
    }

    /// Spring ∥ dashpot ∥ inerter: harmonic trap in a viscous background
    /// (Kelvin-Voigt solid). A zero parameter drops that element, so g = 0
    /// reduces exactly to the interviscous network.
    pub fn inertoviscoelastic(g: f64, eta: f64, m_r: f64) -> Result<Self, RheoError> {
        Self::assemble(vec![optional_spring(g)?, optional_dashpot(eta)?, optional_inerter(m_r)?])
    }

    /// (Spring–series–dashpot) ∥ inerter: Maxwell fluid. The Maxwell arm
    /// needs both constants; if either vanishes the arm carries no stress
    /// and is dropped.
    pub fn maxwell_inerter(g: f64, eta: f64, m_r: f64) -> Result<Self, RheoError> {
        Self::assemble(vec![maxwell_arm(g, eta)?, optional_inerter(m_r)?])
    }

    /// (Spring–series–dashpot) ∥ dashpot(eta_inf) ∥ inerter: Jeffreys
    /// fluid. With eta_inf = 0 the tree is identical to the Maxwell
    /// network, making that limit exact rather than approximate.
    pub fn jeffreys_inerter(
        g: f64,
        eta: f64,
        eta_inf: f64,
        m_r: f64,
    ) -> Result<Self, RheoError> {
        Self::assemble(vec![
            maxwell_arm(g, eta)?,
            optional_dashpot(eta_inf)?,
            optional_inerter(m_r)?,
        ])
    }

    /// Springpot ∥ inerter: subdiffusive power-law medium, alpha in [0, 1].
    pub fn springpot_inerter(mu_alpha: f64, alpha: f64, m_r: f64) -> Result<Self, RheoError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(RheoError::SpringpotOrder(alpha));
        }
        let pot = if mu_alpha == 0.0 {
            check_param("springpot parameter mu_alpha", mu_alpha)?;
            None
        } else {
            Some(Element::springpot(mu_alpha, alpha)?.into())
        };
        Self::assemble(vec![pot, optional_inerter(m_r)?])
    }

    /// Dashpot ∥ springpot(mu_32, 3/2) ∥ inerter: unsteady-Stokes
    /// (Basset–Boussinesq) drag. The order-3/2 springpot exists only here;
    /// for a particle of radius R in a fluid of density rho_f,
    /// mu_32 = R·sqrt(rho_f·eta) and the inertance uses the added-mass
    /// effective mass M = m + ½m_f.
    pub fn hydrodynamic_network(eta: f64, mu_32: f64, m_r: f64) -> Result<Self, RheoError> {
        let pot = if mu_32 == 0.0 {
            check_param("springpot parameter mu_32", mu_32)?;
            None
        } else {
            check_positive("springpot parameter mu_32", mu_32)?;
            Some(Element::Springpot { mu_alpha: mu_32, alpha: 1.5 }.into())
        };
        Self::assemble(vec![optional_dashpot(eta)?, pot, optional_inerter(m_r)?])
    }

    fn assemble(parts: Vec<Option<RheoNetwork>>) -> Result<Self, RheoError> {
        let mut children: Vec<RheoNetwork> = parts.into_iter().flatten().collect();
        match children.len() {
            0 => Err(RheoError::EmptyNetwork),
            1 => Ok(children.pop().unwrap()),
            _ => Ok(Self::Parallel(children)),
        }
    }

    /// Complex dynamic modulus G(ω) by recursive composition. Negative
    /// frequencies follow conjugate symmetry, G(−ω) = conj(G(ω)), because
    /// every element does.
    ///
    /// A series node with a zero-modulus child (a pure dashpot at DC, say)
    /// has infinite compliance: the node's modulus is exactly zero, which
    /// is the explicit representation of that pole. A series node whose
    /// compliances cancel (an undamped spring-inerter resonance) is rigid:
    /// its modulus is infinite.
    pub fn dynamic_modulus(&self, omega: f64) -> Complex64 {
        match self {
            Self::Element(e) => e.modulus(omega),
            Self::Parallel(children) => {
                children.iter().map(|c| c.dynamic_modulus(omega)).sum()
            }
            Self::Series(children) => {
                let mut recip = Complex64::new(0.0, 0.0);
                for c in children {
                    let g = c.dynamic_modulus(omega);
                    if g.re == 0.0 && g.im == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    recip += g.finv();
                }
                if recip.re == 0.0 && recip.im == 0.0 {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    recip.finv()
                }
            }
        }
    }

    /// Complex dynamic fluidity φ(ω) = iω/G(ω).
    ///
    /// At ω = 0 the analytic limit is taken from the DC exponent of G:
    /// for G ~ c(iω)^p, φ(0) is 0 for p < 1 (solids and sub-linear media),
    /// 1/c for p = 1 (fluids, where c is the effective viscosity), and a
    /// pole for p > 1 (a free inertial branch).
    pub fn fluidity(&self, omega: f64) -> Result<Complex64, RheoError> {
        if omega == 0.0 {
            let (c, p) = self.dc_behavior().ok_or(RheoError::FluidityPole { omega })?;
            return if p < 1.0 {
                Ok(Complex64::new(0.0, 0.0))
            } else if p == 1.0 {
                Ok(Complex64::new(1.0 / c, 0.0))
            } else {
                Err(RheoError::FluidityPole { omega })
            };
        }
        let g = self.dynamic_modulus(omega);
        if g.re == 0.0 && g.im == 0.0 {
            return Err(RheoError::FluidityPole { omega });
        }
        if g.re.is_infinite() || g.im.is_infinite() {
            // Rigid resonance of a series-inerter branch pins the particle.
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(Complex64::new(0.0, omega) / g)
    }

    /// Leading DC behavior G(ω) → c (iω)^p as ω → 0⁺, or None for a
    /// network that carries no stress at any frequency.
    ///
    /// Parallel: the smallest exponent dominates (stiffest path at DC),
    /// coefficients of tied exponents add. Series: the largest exponent
    /// dominates (softest member), compliances of tied exponents add.
    pub(crate) fn dc_behavior(&self) -> Option<(f64, f64)> {
        match self {
            Self::Element(e) => Some(e.dc()),
            Self::Parallel(children) => {
                let mut best: Option<(f64, f64)> = None;
                for c in children {
                    let (cc, cp) = c.dc_behavior()?;
                    best = Some(match best {
                        None => (cc, cp),
                        Some((_, bp)) if cp < bp => (cc, cp),
                        Some((bc, bp)) if cp == bp => (bc + cc, bp),
                        Some(b) => b,
                    });
                }
                best
            }
            Self::Series(children) => {
                let mut worst: Option<(f64, f64)> = None;
                for c in children {
                    let (cc, cp) = c.dc_behavior()?;
                    worst = Some(match worst {
                        None => (1.0 / cc, cp),
                        Some((_, bp)) if cp > bp => (1.0 / cc, cp),
                        Some((bj, bp)) if cp == bp => (bj + 1.0 / cc, bp),
                        Some(b) => b,
                    });
                }
                worst.map(|(j, p)| (1.0 / j, p))
            }
        }
    }

    /// Stress response to a unit step strain, split into a δ(t) impulse
    /// weight and a regular part evaluated at t.
    ///
    /// Supported: spring, dashpot, springpot, the spring-dashpot series
    /// (Maxwell) arm, and parallel combinations of those; anything
    /// containing an inerter or a deeper series is rejected rather than
    /// silently approximated.
    pub fn relaxation_modulus(&self, t: f64) -> Result<RelaxationResponse, RheoError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(RheoError::BadTime { bound: "positive and finite", value: t });
        }
        self.relaxation_at(t)
    }

    fn relaxation_at(&self, t: f64) -> Result<RelaxationResponse, RheoError> {
        match self {
            Self::Element(Element::Spring { g }) => {
                Ok(RelaxationResponse { impulse_weight: 0.0, regular: *g })
            }
            Self::Element(Element::Dashpot { eta }) => {
                Ok(RelaxationResponse { impulse_weight: *eta, regular: 0.0 })
            }
            Self::Element(Element::Springpot { mu_alpha, alpha }) => {
                if *alpha == 0.0 {
                    Ok(RelaxationResponse { impulse_weight: 0.0, regular: *mu_alpha })
                } else if *alpha == 1.0 {
                    Ok(RelaxationResponse { impulse_weight: *mu_alpha, regular: 0.0 })
                } else {
                    // G_ve(t) = mu_alpha t^{-alpha} / Γ(1-alpha).
                    let g1ma = gamma_fn(1.0 - alpha).expect("1-alpha in (0,1), not a pole");
                    Ok(RelaxationResponse {
                        impulse_weight: 0.0,
                        regular: mu_alpha * t.powf(-alpha) / g1ma,
                    })
                }
            }
            Self::Element(Element::Inerter { .. }) => Err(RheoError::UnsupportedRelaxation),
            Self::Series(children) => match spring_dashpot_pair(children) {
                // Maxwell arm: G e^{-(G/eta) t}.
                Some((g, eta)) => Ok(RelaxationResponse {
                    impulse_weight: 0.0,
                    regular: g * (-g * t / eta).exp(),
                }),
                None => Err(RheoError::UnsupportedRelaxation),
            },
            Self::Parallel(children) => {
                let mut acc = RelaxationResponse { impulse_weight: 0.0, regular: 0.0 };
                for c in children {
                    let r = c.relaxation_at(t)?;
                    acc.impulse_weight += r.impulse_weight;
                    acc.regular += r.regular;
                }
                Ok(acc)
            }
        }
    }

    /// Strain response to a unit step stress, where a closed form exists:
    /// spring (1/g), dashpot (t/eta), springpot (t^α/(μ_α Γ(1+α))), and
    /// the dashpot-inerter pair ((1/η)[t − τ(1−e^{−t/τ})], τ = m_r/η).
    pub fn creep_compliance_closed(&self, t: f64) -> Result<f64, RheoError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(RheoError::BadTime { bound: "nonnegative and finite", value: t });
        }
        match self {
            Self::Element(Element::Spring { g }) => Ok(1.0 / g),
            Self::Element(Element::Dashpot { eta }) => Ok(t / eta),
            Self::Element(Element::Springpot { mu_alpha, alpha }) => {
                let g1pa = gamma_fn(1.0 + alpha).expect("1+alpha >= 1, not a pole");
                Ok(t.powf(*alpha) / (mu_alpha * g1pa))
            }
            Self::Parallel(children) => match dashpot_inerter_pair(children) {
                Some((eta, m_r)) => {
                    let tau = m_r / eta;
                    let x = t / tau;
                    // t - tau(1 - e^{-x}) = tau(x + expm1(-x)); the expm1
                    // form keeps the small-t quadratic regime accurate.
                    Ok(tau * (x + (-x).exp_m1()) / eta)
                }
                None => Err(RheoError::UnsupportedCreep),
            },
            _ => Err(RheoError::UnsupportedCreep),
        }
    }

    /// Creep compliance by numerical inversion of the complex creep
    /// function C(ω) = 1/(iω G(ω)).
    ///
    /// The long-time flow term r_∞·t (r_∞ = 1/η_eff from the DC exponent,
    /// zero for solids and sub-linear media) is split off analytically;
    /// the remainder is the sine transform
    /// J(t) − r_∞ t = (2/π) ∫₀^∞ Re{1/G(ω)} sin(ωt)/ω dω,
    /// integrated with log-graded panels near zero and an accelerated
    /// alternating-panel sum over the oscillatory tail. Accuracy contract:
    /// within 1% of the closed form wherever one exists (in practice
    /// ~1e-6 for the networks here).
    pub fn creep_compliance_numeric(&self, t_grid: &[f64]) -> Result<TimeCurve, RheoError> {
        if t_grid.is_empty()
            || !t_grid.windows(2).all(|w| w[1] > w[0])
            || !(t_grid[0] >= 0.0)
            || !t_grid.iter().all(|t| t.is_finite())
        {
            return Err(RheoError::BadTime {
                bound: "an ascending nonnegative grid",
                value: *t_grid.first().unwrap_or(&f64::NAN),
            });
        }
        let (c_dc, p_dc) = self.dc_behavior().ok_or(RheoError::NonIntegrableDc(f64::NAN))?;
        if p_dc > 1.0 {
            return Err(RheoError::NonIntegrableDc(p_dc));
        }
        let r_inf = if p_dc == 1.0 { 1.0 / c_dc } else { 0.0 };
        // Re{1/G} decays like a power at the singular end; its exponent is
        // -p_dc, so the log-graded head converges at rate 1 - p_dc (rate 1
        // when the real part is regular at DC).
        let head_rate = if p_dc < 1.0 { 1.0 - p_dc } else { 1.0 };

        let mut values = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            if t == 0.0 {
                values.push(0.0);
                continue;
            }
            let h = |u: f64| {
                let g = self.dynamic_modulus(u / t);
                let re_inv = (g.finv()).re;
                re_inv * u.sin() / u
            };
            let head = integrate_singular_head(&h, std::f64::consts::PI, head_rate);
            let (tail, residual) =
                integrate_oscillatory_tail(&h, std::f64::consts::PI, std::f64::consts::PI, 96);
            let j_osc = std::f64::consts::FRAC_2_PI * (head + tail);
            let j = r_inf * t + j_osc;
            let scale = j.abs().max(j_osc.abs()).max(f64::MIN_POSITIVE);
            if !j.is_finite() || std::f64::consts::FRAC_2_PI * residual > 1e-3 * scale {
                return Err(RheoError::QuadratureAccuracy { t, residual });
            }
            values.push(j);
        }
        TimeCurve::new(CurveKind::Compliance, t_grid.to_vec(), values)
            .map_err(|_| RheoError::BadTime { bound: "an ascending nonnegative grid", value: 0.0 })
    }
}

/// Relaxation modulus response: an optional δ(t) impulse (a dashpot in
/// parallel contributes its viscosity here) plus the regular part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationResponse {
    pub impulse_weight: f64,
    pub regular: f64,
}

fn optional_spring(g: f64) -> Result<Option<RheoNetwork>, RheoError> {
    check_param("spring modulus g", g)?;
    Ok(if g > 0.0 { Some(Element::spring(g)?.into()) } else { None })
}

fn optional_dashpot(eta: f64) -> Result<Option<RheoNetwork>, RheoError> {
    check_param("dashpot viscosity eta", eta)?;
    Ok(if eta > 0.0 { Some(Element::dashpot(eta)?.into()) } else { None })
}

fn optional_inerter(m_r: f64) -> Result<Option<RheoNetwork>, RheoError> {
    check_param("inertance m_r", m_r)?;
    Ok(if m_r > 0.0 { Some(Element::inerter(m_r)?.into()) } else { None })
}

/// Spring-series-dashpot arm; if either constant vanishes the arm carries
/// no stress at any frequency, which is exactly the g → 0 or eta → 0
/// limit, so it is dropped.
fn maxwell_arm(g: f64, eta: f64) -> Result<Option<RheoNetwork>, RheoError> {
    check_param("spring modulus g", g)?;
    check_param("dashpot viscosity eta", eta)?;
    Ok(if g > 0.0 && eta > 0.0 {
        Some(RheoNetwork::Series(vec![
            Element::spring(g)?.into(),
            Element::dashpot(eta)?.into(),
        ]))
    } else {
        None
    })
}

fn spring_dashpot_pair(children: &[RheoNetwork]) -> Option<(f64, f64)> {
    if children.len() != 2 {
        return None;
    }
    let mut g = None;
    let mut eta = None;
    for c in children {
        match c {
            RheoNetwork::Element(Element::Spring { g: v }) => g = Some(*v),
            RheoNetwork::Element(Element::Dashpot { eta: v }) => eta = Some(*v),
            _ => return None,
        }
    }
    Some((g?, eta?))
}

fn dashpot_inerter_pair(children: &[RheoNetwork]) -> Option<(f64, f64)> {
    if children.len() != 2 {
        return None;
    }
    let mut eta = None;
    let mut m_r = None;
    for c in children {
        match c {
            RheoNetwork::Element(Element::Dashpot { eta: v }) => eta = Some(*v),
            RheoNetwork::Element(Element::Inerter { m_r: v }) => m_r = Some(*v),
            _ => return None,
        }
    }
    Some((eta?, m_r?))
}

/// Thermal and geometric context of the suspended particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalContext {
    /// Thermal energy k_B·T (J).
    pub kt: f64,
    /// Spatial dimensions counted by the MSD/PSD prefactor, 1..=3.
    pub n_dim: u32,
    /// Particle radius (m).
    pub radius: f64,
    /// Particle mass (kg).
    pub mass: f64,
    /// Particle mass density (kg/m³), when known.
    pub rho_p: Option<f64>,
    /// Fluid mass density (kg/m³), needed by the hydrodynamic medium.
    pub rho_f: Option<f64>,
}

impl PhysicalContext {
    pub fn new(kt: f64, n_dim: u32, radius: f64, mass: f64) -> Result<Self, RheoError> {
        check_positive("thermal energy kT", kt)?;
        check_positive("particle radius R", radius)?;
        check_positive("particle mass m", mass)?;
        if !(1..=3).contains(&n_dim) {
            return Err(RheoError::BadContext("spatial dimensions must be 1, 2, or 3"));
        }
        Ok(Self { kt, n_dim, radius, mass, rho_p: None, rho_f: None })
    }

    pub fn with_densities(
        mut self,
        rho_p: Option<f64>,
        rho_f: Option<f64>,
    ) -> Result<Self, RheoError> {
        if let Some(v) = rho_p {
            check_positive("particle density rho_p", v)?;
        }
        if let Some(v) = rho_f {
            check_positive("fluid density rho_f", v)?;
        }
        self.rho_p = rho_p;
        self.rho_f = rho_f;
        Ok(self)
    }

    /// Context with the particle mass derived from its density,
    /// m = (4/3)πR³ρ_p.
    pub fn from_densities(
        kt: f64,
        n_dim: u32,
        radius: f64,
        rho_p: f64,
        rho_f: f64,
    ) -> Result<Self, RheoError> {
        check_positive("particle density rho_p", rho_p)?;
        let mass = 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3) * rho_p;
        Self::new(kt, n_dim, radius, mass)?.with_densities(Some(rho_p), Some(rho_f))
    }

    /// Stokes geometric factor 6πR.
    pub fn six_pi_r(&self) -> f64 {
        6.0 * std::f64::consts::PI * self.radius
    }

    /// Distributed inertance m/(6πR).
    pub fn m_r(&self) -> f64 {
        self.mass / self.six_pi_r()
    }

    /// Displaced-fluid mass (4/3)πR³ρ_f.
    pub fn fluid_mass(&self) -> Option<f64> {
        self.rho_f
            .map(|rho| 4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3) * rho)
    }

    /// Effective mass M = m + ½m_f carrying the added-mass correction of
    /// unsteady Stokes flow.
    pub fn effective_mass(&self) -> Option<f64> {
        self.fluid_mass().map(|mf| self.mass + 0.5 * mf)
    }

    /// Distributed inertance M/(6πR) for the hydrodynamic medium.
    pub fn m_r_hydrodynamic(&self) -> Option<f64> {
        self.effective_mass().map(|m| m / self.six_pi_r())
    }

    /// PSD prefactor N·kT/(3πR).
    pub fn psd_prefactor(&self) -> f64 {
        self.n_dim as f64 * self.kt / (3.0 * std::f64::consts::PI * self.radius)
    }
}

/// Dimensionless groups of the six media; only the groups a given medium
/// defines are present.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DimensionlessGroups {
    /// Dissipation time τ = m/(6πRη) (s).
    pub tau: Option<f64>,
    /// Dimensionless network stiffness ω_R·τ = (1/η)·sqrt(G·m/(6πR)).
    pub omega_r_tau: Option<f64>,
    /// Jeffreys viscosity ratio ξ = η_∞/η.
    pub xi: Option<f64>,
    /// Springpot time scale (m_R/μ_α)^{1/(2−α)} or hydrodynamic time
    /// scale (m_R/μ_{3/2})² (s).
    pub lambda: Option<f64>,
    /// Hydrodynamic density group γ = η·m_R/μ_{3/2}² = (1/9)(1+2ρ_p/ρ_f).
    pub gamma_ratio: Option<f64>,
}
