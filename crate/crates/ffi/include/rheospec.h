/* C interface to the rheospec thermal-spectra and Langevin toolkit. */

#ifndef RHEOSPEC_H
#define RHEOSPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every C-ABI call.
typedef enum rheospec_status {
  // The call succeeded and out-parameters are valid.
  RHEOSPEC_STATUS_OK = 0,
  // A required pointer argument was null.
  RHEOSPEC_STATUS_NULL_POINTER = 1,
  // A parameter violated its physical or numerical domain.
  RHEOSPEC_STATUS_BAD_PARAMETER = 2,
  // The requested scheme cannot integrate the requested medium.
  RHEOSPEC_STATUS_INCOMPATIBLE_SCHEME = 3,
  // The time step fails the stability bound dt * rate < 0.1.
  RHEOSPEC_STATUS_COARSE_STEP = 4,
  // A trajectory diverged during integration.
  RHEOSPEC_STATUS_DIVERGED = 5,
  // The noise covariance was not positive semidefinite.
  RHEOSPEC_STATUS_INDEFINITE_COVARIANCE = 6,
  // An internal invariant failed; the library caught a panic.
  RHEOSPEC_STATUS_INTERNAL_PANIC = 7,
} rheospec_status;

// A simulated trajectory ensemble (opaque).
typedef struct RheospecEnsemble RheospecEnsemble;

// An immutable medium-plus-particle description (opaque).
typedef struct RheospecMedium RheospecMedium;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, human-readable description of a status code. Never free the
// returned pointer.
const char *rheospec_status_message(enum rheospec_status status);

// Library version as a static C string. Never free the returned
// pointer.
const char *rheospec_version(void);

// Create a viscous (Newtonian) medium around a particle.
//
// `kt` is the thermal energy in J, `n_dim` the number of independent
// one-dimensional degrees of freedom sharing the record, `radius` the
// particle radius in m, `mass` its mass in kg, `eta` the viscosity in
// Pa s. On success writes a handle to `*out` that must be released
// with `rheospec_medium_free`.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_viscous(double kt,
                                             unsigned int n_dim,
                                             double radius,
                                             double mass,
                                             double eta,
                                             struct RheospecMedium **out);

// Create a harmonic-trap (Kelvin-Voigt) medium: stiffness `g` in Pa in
// a viscous background `eta`. See `rheospec_medium_viscous` for the
// shared parameters and ownership rules.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_trap(double kt,
                                          unsigned int n_dim,
                                          double radius,
                                          double mass,
                                          double g,
                                          double eta,
                                          struct RheospecMedium **out);

// Create a Maxwell medium: modulus `g` in Pa relaxing through a
// dashpot `eta` in Pa s. See `rheospec_medium_viscous` for the shared
// parameters and ownership rules.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_maxwell(double kt,
                                             unsigned int n_dim,
                                             double radius,
                                             double mass,
                                             double g,
                                             double eta,
                                             struct RheospecMedium **out);

// Create a Jeffreys medium: a Maxwell arm (`g`, `eta`) in parallel
// with a background dashpot `eta_inf`. See `rheospec_medium_viscous`
// for the shared parameters and ownership rules.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_jeffreys(double kt,
                                              unsigned int n_dim,
                                              double radius,
                                              double mass,
                                              double g,
                                              double eta,
                                              double eta_inf,
                                              struct RheospecMedium **out);

// Create a power-law (springpot) medium with coefficient `mu_alpha` in
// Pa s^alpha and exponent `alpha` in (0, 1]. See
// `rheospec_medium_viscous` for the shared parameters and ownership
// rules.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_subdiffusive(double kt,
                                                  unsigned int n_dim,
                                                  double radius,
                                                  double mass,
                                                  double mu_alpha,
                                                  double alpha,
                                                  struct RheospecMedium **out);

// Create a Newtonian medium with unsteady-Stokes (Basset) memory. The
// particle mass follows from `rho_p` and `radius`; `rho_f` is the
// fluid density. Densities are in kg/m^3. See
// `rheospec_medium_viscous` for the shared parameters and ownership
// rules.
//
// # Safety
//
// `out` must be null or point to writable storage for one pointer.
enum rheospec_status rheospec_medium_hydrodynamic(double kt,
                                                  unsigned int n_dim,
                                                  double radius,
                                                  double eta,
                                                  double rho_p,
                                                  double rho_f,
                                                  struct RheospecMedium **out);

// Release a medium handle. Null is a no-op.
//
// # Safety
//
// `medium` must be null or a pointer obtained from a
// `rheospec_medium_*` constructor that has not been freed yet.
void rheospec_medium_free(struct RheospecMedium *medium);

// Velocity power spectral density S(omega) of the medium, in SI units
// (m^2/s), written to `*out`.
//
// # Safety
//
// `medium` must be a live handle from a constructor; `out` must be
// null or point to writable storage for one double.
enum rheospec_status rheospec_medium_psd(const struct RheospecMedium *medium,
                                         double omega,
                                         double *out);

// Dimensionless spectrum shape at dimensionless frequency `x`
// (omega times the medium's time scale), written to `*out`.
//
// # Safety
//
// `medium` must be a live handle from a constructor; `out` must be
// null or point to writable storage for one double.
enum rheospec_status rheospec_medium_psd_normalized(const struct RheospecMedium *medium,
                                                    double x,
                                                    double *out);

// The medium's characteristic time scale in s (the momentum relaxation
// time for the viscous family, the memory time scale for the power-law
// and hydrodynamic media), written to `*out`.
//
// # Safety
//
// `medium` must be a live handle from a constructor; `out` must be
// null or point to writable storage for one double.
enum rheospec_status rheospec_medium_time_scale(const struct RheospecMedium *medium, double *out);

// The reference spectrum level in m^2/s dividing the shape out of the
// dimensional spectrum, written to `*out`.
//
// # Safety
//
// `medium` must be a live handle from a constructor; `out` must be
// null or point to writable storage for one double.
enum rheospec_status rheospec_medium_s_ref(const struct RheospecMedium *medium, double *out);

// Integrate a trajectory ensemble: `n_traj` trajectories of `n_steps`
// recorded samples at time step `dt`, from RNG seed `seed`. The
// integrator, burn-in, and stability policy follow the library
// defaults; `override_stability` runs despite a warning-band step.
// On success writes a handle to `*out` that must be released with
// `rheospec_ensemble_free`.
//
// # Safety
//
// `medium` must be a live handle from a constructor; `out` must be
// null or point to writable storage for one pointer.
enum rheospec_status rheospec_simulate(const struct RheospecMedium *medium,
                                       double dt,
                                       size_t n_steps,
                                       size_t n_traj,
                                       uint64_t seed,
                                       bool override_stability,
                                       struct RheospecEnsemble **out);

// Release an ensemble handle. Null is a no-op.
//
// # Safety
//
// `ensemble` must be null or a pointer obtained from
// `rheospec_simulate` that has not been freed yet.
void rheospec_ensemble_free(struct RheospecEnsemble *ensemble);

// Report the ensemble dimensions: trajectories to `*n_traj` and
// samples per trajectory to `*n_steps`.
//
// # Safety
//
// `ensemble` must be a live handle; the out-pointers must be null or
// point to writable storage for one size each.
enum rheospec_status rheospec_ensemble_shape(const struct RheospecEnsemble *ensemble,
                                             size_t *n_traj,
                                             size_t *n_steps);

// Copy one trajectory's velocity samples (m/s) into a caller buffer of
// exactly `len == n_steps` doubles.
//
// # Safety
//
// `ensemble` must be a live handle; `buffer` must be null or point to
// writable storage for `len` doubles.
enum rheospec_status rheospec_ensemble_velocity(const struct RheospecEnsemble *ensemble,
                                                size_t traj,
                                                double *buffer,
                                                size_t len);

// Copy one trajectory's position samples (m) into a caller buffer of
// exactly `len == n_steps` doubles.
//
// # Safety
//
// `ensemble` must be a live handle; `buffer` must be null or point to
// writable storage for `len` doubles.
enum rheospec_status rheospec_ensemble_position(const struct RheospecEnsemble *ensemble,
                                                size_t traj,
                                                double *buffer,
                                                size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RHEOSPEC_H */
