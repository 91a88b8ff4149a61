//! C ABI over the rheospec library: opaque handles, integer status
//! codes, and caller-owned output buffers.
//!
//! Conventions:
//!
//! * Every function returns a [`RheospecStatus`]; results travel through
//!   out-pointers, which are written only when the status is `Ok`.
//! * Handles created by a `rheospec_*_new`-style constructor are owned
//!   by the caller and must be released with the paired `*_free`
//!   function exactly once; `*_free` accepts null as a no-op.
//! * All strings returned are static: never free them.
//! * Panics cannot cross the boundary; any internal panic is caught and
//!   reported as `InternalPanic`.
//!
//! The header `include/rheospec.h` is regenerated from these
//! declarations at every build.

use std::ffi::{c_char, c_uint};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rheospec::rheology::PhysicalContext;
use rheospec::simkit::{simulate, Ensemble, SimConfig, SimError};
use rheospec::spectra::{Medium, MediumSpec};

/// Status code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RheospecStatus {
    /// The call succeeded and out-parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter violated its physical or numerical domain.
    BadParameter = 2,
    /// The requested scheme cannot integrate the requested medium.
    IncompatibleScheme = 3,
    /// The time step fails the stability bound dt * rate < 0.1.
    CoarseStep = 4,
    /// A trajectory diverged during integration.
    Diverged = 5,
    /// The noise covariance was not positive semidefinite.
    IndefiniteCovariance = 6,
    /// An internal invariant failed; the library caught a panic.
    InternalPanic = 7,
}

fn status_of(err: &SimError) -> RheospecStatus {
    match err {
        SimError::BadParameter { .. } | SimError::BadCovarianceGrid | SimError::Spectra(_) => {
            RheospecStatus::BadParameter
        }
        SimError::IncompatibleScheme { .. } => RheospecStatus::IncompatibleScheme,
        SimError::CoarseStep { .. } => RheospecStatus::CoarseStep,
        SimError::Diverged { .. } => RheospecStatus::Diverged,
        SimError::IndefiniteCovariance { .. } => RheospecStatus::IndefiniteCovariance,
    }
}

/// An immutable medium-plus-particle description (opaque).
pub struct RheospecMedium {
    spec: MediumSpec,
}

/// A simulated trajectory ensemble (opaque).
pub struct RheospecEnsemble {
    ens: Ensemble,
}

/// Static, human-readable description of a status code. Never free the
/// returned pointer.
#[no_mangle]
pub extern "C" fn rheospec_status_message(status: RheospecStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        RheospecStatus::Ok => b"ok\0",
        RheospecStatus::NullPointer => b"a required pointer argument was null\0",
        RheospecStatus::BadParameter => b"a parameter violated its domain\0",
        RheospecStatus::IncompatibleScheme => b"the scheme cannot integrate this medium\0",
        RheospecStatus::CoarseStep => b"the time step fails the stability bound\0",
        RheospecStatus::Diverged => b"a trajectory diverged during integration\0",
        RheospecStatus::IndefiniteCovariance => b"the noise covariance was indefinite\0",
        RheospecStatus::InternalPanic => b"an internal invariant failed\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version as a static C string. Never free the returned
/// pointer.
#[no_mangle]
pub extern "C" fn rheospec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn build_medium(
    medium: Medium,
    ctx: Result<PhysicalContext, rheospec::rheology::RheoError>,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    if out.is_null() {
        return RheospecStatus::NullPointer;
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let ctx = ctx.map_err(|_| ())?;
        let spec = MediumSpec::new(medium, ctx).map_err(|_| ())?;
        Ok::<MediumSpec, ()>(spec)
    }));
    match result {
        Ok(Ok(spec)) => {
            let handle = Box::new(RheospecMedium { spec });
            // SAFETY: out was checked non-null; the caller promised a
            // valid location per the function contract.
            unsafe { *out = Box::into_raw(handle) };
            RheospecStatus::Ok
        }
        Ok(Err(())) => RheospecStatus::BadParameter,
        Err(_) => RheospecStatus::InternalPanic,
    }
}

/// Create a viscous (Newtonian) medium around a particle.
///
/// `kt` is the thermal energy in J, `n_dim` the number of independent
/// one-dimensional degrees of freedom sharing the record, `radius` the
/// particle radius in m, `mass` its mass in kg, `eta` the viscosity in
/// Pa s. On success writes a handle to `*out` that must be released
/// with `rheospec_medium_free`.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_viscous(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    mass: f64,
    eta: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::Viscous { eta },
        PhysicalContext::new(kt, n_dim, radius, mass),
        out,
    )
}

/// Create a harmonic-trap (Kelvin-Voigt) medium: stiffness `g` in Pa in
/// a viscous background `eta`. See `rheospec_medium_viscous` for the
/// shared parameters and ownership rules.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_trap(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    mass: f64,
    g: f64,
    eta: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::HarmonicTrap { g, eta },
        PhysicalContext::new(kt, n_dim, radius, mass),
        out,
    )
}

/// Create a Maxwell medium: modulus `g` in Pa relaxing through a
/// dashpot `eta` in Pa s. See `rheospec_medium_viscous` for the shared
/// parameters and ownership rules.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_maxwell(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    mass: f64,
    g: f64,
    eta: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::Maxwell { g, eta },
        PhysicalContext::new(kt, n_dim, radius, mass),
        out,
    )
}

/// Create a Jeffreys medium: a Maxwell arm (`g`, `eta`) in parallel
/// with a background dashpot `eta_inf`. See `rheospec_medium_viscous`
/// for the shared parameters and ownership rules.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_jeffreys(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    mass: f64,
    g: f64,
    eta: f64,
    eta_inf: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::Jeffreys { g, eta, eta_inf },
        PhysicalContext::new(kt, n_dim, radius, mass),
        out,
    )
}

/// Create a power-law (springpot) medium with coefficient `mu_alpha` in
/// Pa s^alpha and exponent `alpha` in (0, 1]. See
/// `rheospec_medium_viscous` for the shared parameters and ownership
/// rules.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_subdiffusive(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    mass: f64,
    mu_alpha: f64,
    alpha: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::Subdiffusive { mu_alpha, alpha },
        PhysicalContext::new(kt, n_dim, radius, mass),
        out,
    )
}

/// Create a Newtonian medium with unsteady-Stokes (Basset) memory. The
/// particle mass follows from `rho_p` and `radius`; `rho_f` is the
/// fluid density. Densities are in kg/m^3. See
/// `rheospec_medium_viscous` for the shared parameters and ownership
/// rules.
///
/// # Safety
///
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_hydrodynamic(
    kt: f64,
    n_dim: c_uint,
    radius: f64,
    eta: f64,
    rho_p: f64,
    rho_f: f64,
    out: *mut *mut RheospecMedium,
) -> RheospecStatus {
    build_medium(
        Medium::Hydrodynamic { eta, rho_f, rho_p },
        PhysicalContext::from_densities(kt, n_dim, radius, rho_p, rho_f),
        out,
    )
}

/// Release a medium handle. Null is a no-op.
///
/// # Safety
///
/// `medium` must be null or a pointer obtained from a
/// `rheospec_medium_*` constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_free(medium: *mut RheospecMedium) {
    if !medium.is_null() {
        // SAFETY: per the contract this is an unfreed constructor
        // result, so reconstituting the box is sound.
        drop(unsafe { Box::from_raw(medium) });
    }
}

unsafe fn with_medium<F>(
    medium: *const RheospecMedium,
    out: *mut f64,
    eval: F,
) -> RheospecStatus
where
    F: Fn(&MediumSpec) -> Result<f64, ()>,
{
    if medium.is_null() || out.is_null() {
        return RheospecStatus::NullPointer;
    }
    // SAFETY: non-null, and the contract requires a live handle.
    let spec = unsafe { &(*medium).spec };
    match catch_unwind(AssertUnwindSafe(|| eval(spec))) {
        Ok(Ok(v)) => {
            // SAFETY: out was checked non-null.
            unsafe { *out = v };
            RheospecStatus::Ok
        }
        Ok(Err(())) => RheospecStatus::BadParameter,
        Err(_) => RheospecStatus::InternalPanic,
    }
}

/// Velocity power spectral density S(omega) of the medium, in SI units
/// (m^2/s), written to `*out`.
///
/// # Safety
///
/// `medium` must be a live handle from a constructor; `out` must be
/// null or point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_psd(
    medium: *const RheospecMedium,
    omega: f64,
    out: *mut f64,
) -> RheospecStatus {
    unsafe { with_medium(medium, out, |spec| spec.psd_closed(omega).map_err(|_| ())) }
}

/// Dimensionless spectrum shape at dimensionless frequency `x`
/// (omega times the medium's time scale), written to `*out`.
///
/// # Safety
///
/// `medium` must be a live handle from a constructor; `out` must be
/// null or point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_psd_normalized(
    medium: *const RheospecMedium,
    x: f64,
    out: *mut f64,
) -> RheospecStatus {
    unsafe {
        with_medium(medium, out, |spec| {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(());
            }
            Ok(spec.normalized().shape(x))
        })
    }
}

/// The medium's characteristic time scale in s (the momentum relaxation
/// time for the viscous family, the memory time scale for the power-law
/// and hydrodynamic media), written to `*out`.
///
/// # Safety
///
/// `medium` must be a live handle from a constructor; `out` must be
/// null or point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_time_scale(
    medium: *const RheospecMedium,
    out: *mut f64,
) -> RheospecStatus {
    unsafe { with_medium(medium, out, |spec| Ok(spec.time_scale())) }
}

/// The reference spectrum level in m^2/s dividing the shape out of the
/// dimensional spectrum, written to `*out`.
///
/// # Safety
///
/// `medium` must be a live handle from a constructor; `out` must be
/// null or point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn rheospec_medium_s_ref(
    medium: *const RheospecMedium,
    out: *mut f64,
) -> RheospecStatus {
    unsafe { with_medium(medium, out, |spec| Ok(spec.s_ref())) }
}

/// Integrate a trajectory ensemble: `n_traj` trajectories of `n_steps`
/// recorded samples at time step `dt`, from RNG seed `seed`. The
/// integrator, burn-in, and stability policy follow the library
/// defaults; `override_stability` runs despite a warning-band step.
/// On success writes a handle to `*out` that must be released with
/// `rheospec_ensemble_free`.
///
/// # Safety
///
/// `medium` must be a live handle from a constructor; `out` must be
/// null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn rheospec_simulate(
    medium: *const RheospecMedium,
    dt: f64,
    n_steps: usize,
    n_traj: usize,
    seed: u64,
    override_stability: bool,
    out: *mut *mut RheospecEnsemble,
) -> RheospecStatus {
    if medium.is_null() || out.is_null() {
        return RheospecStatus::NullPointer;
    }
    // SAFETY: non-null, and the contract requires a live handle.
    let spec = unsafe { (*medium).spec };
    let result = catch_unwind(AssertUnwindSafe(|| {
        let mut cfg = SimConfig::new(spec, dt, n_steps, n_traj, seed)?;
        cfg.override_stability = override_stability;
        simulate(&cfg)
    }));
    match result {
        Ok(Ok(ens)) => {
            let handle = Box::new(RheospecEnsemble { ens });
            // SAFETY: out was checked non-null.
            unsafe { *out = Box::into_raw(handle) };
            RheospecStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => RheospecStatus::InternalPanic,
    }
}

/// Release an ensemble handle. Null is a no-op.
///
/// # Safety
///
/// `ensemble` must be null or a pointer obtained from
/// `rheospec_simulate` that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rheospec_ensemble_free(ensemble: *mut RheospecEnsemble) {
    if !ensemble.is_null() {
        // SAFETY: per the contract this is an unfreed simulate result.
        drop(unsafe { Box::from_raw(ensemble) });
    }
}

/// Report the ensemble dimensions: trajectories to `*n_traj` and
/// samples per trajectory to `*n_steps`.
///
/// # Safety
///
/// `ensemble` must be a live handle; the out-pointers must be null or
/// point to writable storage for one size each.
#[no_mangle]
pub unsafe extern "C" fn rheospec_ensemble_shape(
    ensemble: *const RheospecEnsemble,
    n_traj: *mut usize,
    n_steps: *mut usize,
) -> RheospecStatus {
    if ensemble.is_null() || n_traj.is_null() || n_steps.is_null() {
        return RheospecStatus::NullPointer;
    }
    // SAFETY: all pointers checked non-null; the handle is live per the
    // contract.
    unsafe {
        *n_traj = (*ensemble).ens.n_traj();
        *n_steps = (*ensemble).ens.n_steps();
    }
    RheospecStatus::Ok
}

unsafe fn copy_channel(
    ensemble: *const RheospecEnsemble,
    traj: usize,
    buffer: *mut f64,
    len: usize,
    velocity: bool,
) -> RheospecStatus {
    if ensemble.is_null() || buffer.is_null() {
        return RheospecStatus::NullPointer;
    }
    // SAFETY: non-null, and the contract requires a live handle.
    let ens = unsafe { &(*ensemble).ens };
    if traj >= ens.n_traj() || len != ens.n_steps() {
        return RheospecStatus::BadParameter;
    }
    let src = if velocity {
        &ens.velocities[traj]
    } else {
        &ens.positions[traj]
    };
    // SAFETY: buffer holds `len` doubles per the contract, and len was
    // checked to match the source length.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buffer, len) };
    RheospecStatus::Ok
}

/// Copy one trajectory's velocity samples (m/s) into a caller buffer of
/// exactly `len == n_steps` doubles.
///
/// # Safety
///
/// `ensemble` must be a live handle; `buffer` must be null or point to
/// writable storage for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rheospec_ensemble_velocity(
    ensemble: *const RheospecEnsemble,
    traj: usize,
    buffer: *mut f64,
    len: usize,
) -> RheospecStatus {
    unsafe { copy_channel(ensemble, traj, buffer, len, true) }
}

/// Copy one trajectory's position samples (m) into a caller buffer of
/// exactly `len == n_steps` doubles.
///
/// # Safety
///
/// `ensemble` must be a live handle; `buffer` must be null or point to
/// writable storage for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rheospec_ensemble_position(
    ensemble: *const RheospecEnsemble,
    traj: usize,
    buffer: *mut f64,
    len: usize,
) -> RheospecStatus {
    unsafe { copy_channel(ensemble, traj, buffer, len, false) }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KT: f64 = 4.11e-21;
    const R: f64 = 1e-6;
    const MASS: f64 = 8.2e-15;

    fn make_viscous() -> *mut RheospecMedium {
        let mut handle: *mut RheospecMedium = ptr::null_mut();
        let status =
            unsafe { rheospec_medium_viscous(KT, 1, R, MASS, 1e-3, &mut handle) };
        assert_eq!(status, RheospecStatus::Ok, "viscous constructor must succeed");
        assert!(!handle.is_null(), "constructor must write the handle");
        handle
    }

    #[test]
    fn psd_matches_the_library_closed_form() {
        let handle = make_viscous();
        let ctx = PhysicalContext::new(KT, 1, R, MASS).unwrap();
        let spec = MediumSpec::new(Medium::Viscous { eta: 1e-3 }, ctx).unwrap();
        for omega in [1e3, 1e6, 1e9] {
            let mut got = 0.0;
            let status = unsafe { rheospec_medium_psd(handle, omega, &mut got) };
            assert_eq!(status, RheospecStatus::Ok, "psd call must succeed");
            let want = spec.psd_closed(omega).unwrap();
            assert_eq!(got, want, "ABI must return the library value bit for bit");
        }
        unsafe { rheospec_medium_free(handle) };
    }

    #[test]
    fn null_pointers_are_reported_not_dereferenced() {
        let mut value = 0.0;
        let status = unsafe { rheospec_medium_psd(ptr::null(), 1.0, &mut value) };
        assert_eq!(status, RheospecStatus::NullPointer, "null handle must be caught");
        let handle = make_viscous();
        let status = unsafe { rheospec_medium_psd(handle, 1.0, ptr::null_mut()) };
        assert_eq!(status, RheospecStatus::NullPointer, "null out must be caught");
        unsafe { rheospec_medium_free(handle) };
        unsafe { rheospec_medium_free(ptr::null_mut()) };
        unsafe { rheospec_ensemble_free(ptr::null_mut()) };
    }

    #[test]
    fn bad_parameters_map_to_bad_parameter() {
        let mut handle: *mut RheospecMedium = ptr::null_mut();
        let status =
            unsafe { rheospec_medium_viscous(KT, 1, R, MASS, -1e-3, &mut handle) };
        assert_eq!(
            status,
            RheospecStatus::BadParameter,
            "negative viscosity must be rejected"
        );
        assert!(handle.is_null(), "no handle may be written on failure");
    }

    #[test]
    fn simulate_round_trips_an_ensemble() {
        let handle = make_viscous();
        let mut ens: *mut RheospecEnsemble = ptr::null_mut();
        // tau = m/(6 pi R eta) ~ 4.35e-7 s; dt at 2% of tau.
        let status = unsafe {
            rheospec_simulate(handle, 8.7e-9, 64, 3, 11, false, &mut ens)
        };
        assert_eq!(status, RheospecStatus::Ok, "simulate must succeed");
        let (mut nt, mut ns) = (0usize, 0usize);
        let status = unsafe { rheospec_ensemble_shape(ens, &mut nt, &mut ns) };
        assert_eq!(status, RheospecStatus::Ok, "shape must succeed");
        assert_eq!((nt, ns), (3, 64), "dimensions must round-trip");

        let mut buf = vec![0.0f64; ns];
        let status = unsafe { rheospec_ensemble_velocity(ens, 2, buf.as_mut_ptr(), ns) };
        assert_eq!(status, RheospecStatus::Ok, "velocity copy must succeed");
        assert!(
            buf.iter().all(|v| v.is_finite()),
            "copied samples must be finite"
        );
        let sigma = (KT / MASS).sqrt();
        assert!(
            buf.iter().any(|v| v.abs() > 1e-3 * sigma),
            "samples must carry thermal motion"
        );

        let status = unsafe { rheospec_ensemble_velocity(ens, 3, buf.as_mut_ptr(), ns) };
        assert_eq!(
            status,
            RheospecStatus::BadParameter,
            "out-of-range trajectory index must be rejected"
        );
        let status = unsafe { rheospec_ensemble_velocity(ens, 0, buf.as_mut_ptr(), ns - 1) };
        assert_eq!(
            status,
            RheospecStatus::BadParameter,
            "wrong buffer length must be rejected"
        );
        unsafe { rheospec_ensemble_free(ens) };
        unsafe { rheospec_medium_free(handle) };
    }

    #[test]
    fn coarse_step_is_its_own_status() {
        let handle = make_viscous();
        let mut ens: *mut RheospecEnsemble = ptr::null_mut();
        // dt roughly equal to tau violates the resolution invariant.
        let status = unsafe { rheospec_simulate(handle, 4e-7, 64, 2, 1, false, &mut ens) };
        assert_eq!(
            status,
            RheospecStatus::CoarseStep,
            "a coarse step must be distinguishable from other failures"
        );
        unsafe { rheospec_medium_free(handle) };
    }

    #[test]
    fn version_and_messages_are_c_strings() {
        let v = rheospec_version();
        assert!(!v.is_null(), "version must exist");
        let msg = rheospec_status_message(RheospecStatus::Diverged);
        let text = unsafe { std::ffi::CStr::from_ptr(msg) }.to_str().unwrap();
        assert!(text.contains("diverged"), "message must describe the code");
    }
}
