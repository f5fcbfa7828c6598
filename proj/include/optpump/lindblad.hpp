#pragma once

#include <functional>
#include <vector>

#include "optpump/core.hpp"

namespace optpump {

inline constexpr Eigen::Index kVecDim = kLevels * kLevels;

using VecRho = Eigen::Matrix<Complex, kVecDim, 1>;
using SuperMatrix = Eigen::Matrix<Complex, kVecDim, kVecDim>;

// Row-major vectorization: v[3*i + j] = rho(i, j).
VecRho vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const VecRho& v);

// Generator of the master equation, d(vec rho)/dt = mat * vec rho.
struct Liouvillian {
    SuperMatrix mat = SuperMatrix::Zero();
    bool time_dependent = false;

    DensityMatrix apply(const DensityMatrix& rho) const { return unvectorize(mat * vectorize(rho)); }
};

// Hamiltonian (Omega(t)/2)(|e><g| e^{i delta t} + |g><e| e^{-i delta t}) plus
// the e -> t (rate gamma_e) and t -> g (rate gamma_t) dissipators.
Liouvillian build_generator(const AtomParams& params, const DriveProfile& drive, double t);

// 0.005 / max(Omega_max, gamma_e, gamma_t, |delta|, 1)
double default_time_step(const AtomParams& params, const DriveProfile& drive);

struct PopulationTrace {
    std::vector<double> times;
    std::vector<double> rho_gg, rho_ee, rho_tt;
    std::vector<Complex> rho_ge, rho_et, rho_gt;
    DensityMatrix final_state = DensityMatrix::Zero();

    std::size_t size() const { return times.size(); }
};

// Called with every stored sample, including t = 0.
using DensityObserver = std::function<void(double t, const DensityMatrix& rho)>;

// Fixed-step RK4 integration of the master equation over [0, t_end]. The
// step is shrunk, if needed, so that it divides t_end. Throws
// ConvergenceError when the state leaves the physical set by more than 1e-8.
PopulationTrace propagate(const DensityMatrix& rho0, const AtomParams& params, const DriveProfile& drive,
                          double t_end, double dt, const DensityObserver& observer = {});

// Null space of the constant-drive generator with unit trace. For delta != 0
// the solve is done in the frame co-rotating with the laser phase, so the
// populations are exact and the g-e coherence carries no e^{i delta t}.
// Throws DomainError when the stationary state is not unique.
DensityMatrix steady_state(const AtomParams& params);

} // namespace optpump
