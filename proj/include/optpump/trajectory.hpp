#pragma once

#include <span>
#include <vector>

#include "optpump/core.hpp"
#include "optpump/spectrum.hpp"

namespace optpump {

// H(t) - i (gamma_e/2) |e><e|, with H(t) the detuned drive Hamiltonian.
Eigen::Matrix3cd effective_hamiltonian(const AtomParams& params, const DriveProfile& drive, double t);

// Zero-photon branch of the conditional dynamics.
struct NoJumpTrajectory {
    std::vector<double> times;
    std::vector<StateVector> psi;
    // gamma_e * int_0^t |psi_e|^2, co-integrated with psi: the probability that
    // a photon has been emitted by time t.
    std::vector<double> emitted;
};

// RK4 integration of d psi/dt = -i H_eff(t) psi. Throws ConvergenceError if
// the norm grows by more than 1e-8 over a step.
NoJumpTrajectory propagate_no_jump(const StateVector& psi0, const AtomParams& params, const DriveProfile& drive,
                                   double t_end, double dt);

// One-photon branch: psi_w(t) = (0, 0, f_w(t)) for every grid frequency.
struct PhotonTrajectorySet {
    FrequencyGrid grid;
    std::vector<double> sample_times;
    std::vector<std::vector<Complex>> f_values; // [frequency][sample]
    std::vector<double> final_norms;            // <psi_w(tau)|psi_w(tau)>
};

// Co-integrates the no-jump state from |g> and the one-photon amplitudes
// df/dt = sqrt(gamma_e/tau) psi_e(t) - i w f over [0, tau]. Samples of f are
// kept every record_stride steps (0 keeps only the final value).
PhotonTrajectorySet photon_trajectories(const AtomParams& params, const DriveProfile& drive, double tau,
                                        const FrequencyGrid& grid, double dt, std::size_t record_stride = 0);

// Full three-component integration of the one-photon state for a single
// frequency, straight from H_eff. Slow; used as a reference for the
// vectorized path. Returns psi_w at every step.
std::vector<StateVector> one_photon_state_reference(const AtomParams& params, const DriveProfile& drive,
                                                    double tau, double omega, double dt);

// Peak-normalized one-photon spectrum for constant drive at delta = 0.
// s_values are the normalized final norms, abs2 their squares. Runs at dt and
// dt/2 and throws ConvergenceError if the normalized spectra differ by more
// than 1e-4.
SpectrumResult single_photon_spectrum(const AtomParams& params, const DriveProfile& drive, double tau,
                                      const FrequencyGrid& grid, double dt);

// Same machinery for any drive profile and detuning.
SpectrumResult transient_spectrum(const AtomParams& params, const DriveProfile& drive, double tau,
                                  const FrequencyGrid& grid, double dt);

inline constexpr double kStepHalvingTolerance = 1e-4;

// Closed-form one-photon amplitude for constant resonant drive, up to an
// overall constant:
//   [sin(W t/2) e^{-g t/4} (i w - g/4) - (W/2) cos(W t/2) e^{-g t/4} + (W/2) e^{-i w t}]
//     / ((i w - g/4)^2 + W^2/4)
// with W = omega_eff, g = gamma_e.
Complex analytic_f(const AtomParams& params, double omega, double t);

// Least-squares a minimizing |a * model - data|.
double fit_scale(std::span<const double> model, std::span<const double> data);

// Fraction of sum(abs2) carried by grid points with |omega| < half_width.
double band_weight(const SpectrumResult& spec, double half_width);

} // namespace optpump
