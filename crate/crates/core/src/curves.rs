//! Shared curve containers passed between modules.

use thiserror::Error;

/// Transform convention stamped on every spectrum this crate produces.
///
/// The spectral density is two-sided in frequency, S(ω) = 2 Re ∫₀^∞
/// ⟨v(0)v(t)⟩ e^{-iωt} dt with no 1/2π, so the one-sided integral
/// ∫₀^∞ S(ω) dω equals π⟨v²⟩ and the zero-frequency viscous value is
/// NkT/(3πRη).
pub const SPECTRUM_CONVENTION: &str = "S(omega) = 2 Re int_0^inf <v(0)v(t)> exp(-i omega t) dt; \
     two-sided density, no 1/(2 pi); int_0^inf S d omega = pi <v^2>";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("grid and values must have equal nonzero length ({grid} vs {values})")]
    LengthMismatch { grid: usize, values: usize },
    #[error("grid must be strictly ascending and nonnegative (violation near index {0})")]
    BadGrid(usize),
    #[error("curve value at index {0} is not finite")]
    NonFiniteValue(usize),
    #[error("spectrum value at index {0} is negative")]
    NegativeSpectrum(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Msd,
    Vacf,
    Compliance,
}

/// Samples of a time-domain material or correlation function on an
/// ascending time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

impl TimeCurve {
    pub fn new(kind: CurveKind, t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self, CurveError> {
        check_grid(&t_grid, &values)?;
        Ok(Self { t_grid, values, kind })
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Uniform grid step, if the grid is uniform to relative tolerance 1e-9.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.t_grid.len() < 2 {
            return None;
        }
        let h = self.t_grid[1] - self.t_grid[0];
        let uniform = self
            .t_grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
        uniform.then_some(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// SI values: rad/s against m²/s² per rad/s.
    Dimensional,
    /// Figure-axis form: dimensionless frequency (ωτ or ωλ) against
    /// S(ω)/S_ref.
    Normalized,
}

/// One-sided samples (ω ≥ 0) of the two-sided velocity power spectral
/// density; see [`SPECTRUM_CONVENTION`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub omega_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub convention_note: &'static str,
}

impl SpectrumCurve {
    pub fn new(
        omega_grid: Vec<f64>,
        values: Vec<f64>,
        normalization: Normalization,
    ) -> Result<Self, CurveError> {
        check_grid(&omega_grid, &values)?;
        if let Some(i) = values.iter().position(|v| *v < 0.0) {
            return Err(CurveError::NegativeSpectrum(i));
        }
        Ok(Self { omega_grid, values, normalization, convention_note: SPECTRUM_CONVENTION })
    }

    pub fn len(&self) -> usize {
        self.omega_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_grid.is_empty()
    }
}

fn check_grid(grid: &[f64], values: &[f64]) -> Result<(), CurveError> {
    if grid.is_empty() || grid.len() != values.len() {
        return Err(CurveError::LengthMismatch { grid: grid.len(), values: values.len() });
    }
    if !grid[0].is_finite() || grid[0] < 0.0 {
        return Err(CurveError::BadGrid(0));
    }
    for (i, w) in grid.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(CurveError::BadGrid(i + 1));
        }
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(CurveError::NonFiniteValue(i));
    }
    Ok(())
}

/// Log-spaced grid of `n` points covering [start, stop): exponents advance
/// by (log10(stop) − log10(start))/n, so index i sits at exactly
/// start·(stop/start)^{i/n}. Start-inclusive, stop-exclusive; with n a
/// multiple of the decade count the grid hits integer powers of ten (and
/// the midpoint) exactly.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    assert!(start > 0.0 && stop > start && n > 0, "log_grid needs 0 < start < stop, n > 0");
    let la = start.log10();
    let lb = stop.log10();
    (0..n)
        .map(|i| 10f64.powf(la + (lb - la) * i as f64 / n as f64))
        .collect()
}
