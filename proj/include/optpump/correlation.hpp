#pragma once

#include <vector>

#include "optpump/core.hpp"
#include "optpump/spectrum.hpp"

namespace optpump {

// Samples of K(tau) = <sigma_+^{et}(t + tau) sigma_-^{et}(t)> in steady state,
// with sigma_-^{et} = |t><e|. taus are uniformly spaced from 0.
struct CorrelationTrace {
    std::vector<double> taus;
    std::vector<Complex> k_values;
};

// Coefficients of the closed pair of equations for the coherences
// (rho_tg, rho_te), read off the master-equation generator. The regression
// vector (X_tg, X_te) evolves with exactly these coefficients.
Eigen::Matrix2cd regression_matrix(const AtomParams& params);

// Correlation span that brings the slowest coherence envelope
// exp(-(gamma_e/4 + gamma_t/2) tau) below 1e-7, and at least 40/gamma_e.
double default_correlation_span(const AtomParams& params);

// Quantum-regression evaluation of K(tau) on [0, tau_max] with fixed-step
// RK4. Requires gamma_t > 0, gamma_e > 0 and delta = 0.
CorrelationTrace qrt_correlation(const AtomParams& params, double tau_max, double dt);

// S(omega_j) = 2 Re int_0^T K(tau) e^{-i omega_j tau} d tau (trapezoidal), i.e.
// the two-sided transform with K(-tau) = conj K(tau). Throws ConvergenceError
// when |K(T)| >= 1e-6 |K(0)|.
SpectrumResult spectrum_from_correlation(const CorrelationTrace& corr, const FrequencyGrid& grid);

// Closed-form AC-Stark-split doublet, weighted by the steady-state trap
// population. Requires rabi^2 > gamma_e^2/4 and delta = 0.
SpectrumResult analytic_spectrum(const AtomParams& params, const FrequencyGrid& grid);

enum class LimitStatus { Converged, NotConverged, NotAssessed };

struct GammaTLimitResult {
    SpectrumResult spectrum;              // the last (smallest gamma_t) QRT spectrum
    std::vector<double> gamma_t;          // sequence that was run
    std::vector<double> differences;      // L-inf of successive peak-normalized abs2
    LimitStatus status = LimitStatus::NotAssessed;
};

inline constexpr double kGammaTLimitTolerance = 1e-3;

// Runs the QRT spectrum for a strictly decreasing sequence of positive
// gamma_t values. Converged when the last successive difference is below
// kGammaTLimitTolerance.
GammaTLimitResult gamma_t_limit_spectrum(const AtomParams& params_base, const FrequencyGrid& grid,
                                         const std::vector<double>& gamma_t_sequence, double tau_max,
                                         double dt);

} // namespace optpump
