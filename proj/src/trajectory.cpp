#include "optpump/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optpump/errors.hpp"
#include "optpump/integrator.hpp"
#include "optpump/kernels.hpp"

namespace optpump {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_trajectory_inputs(const AtomParams& params, double tau, const FrequencyGrid& grid) {
    params.validate();
    if (!(tau > 0.0)) throw DomainError("trajectory spectrum: tau must be > 0");
    if (std::abs(grid.tau() - tau) > 1e-12 * tau)
        throw DomainError("trajectory spectrum: frequency grid tau does not match the observation interval");
}

struct NoJumpSources {
    TimeStepping steps;
    std::vector<kernels::StageSources> stages;
};

// RK4 for psi alone, keeping the e-amplitude of every stage state as the
// one-photon source. This is the psi-part of one RK4 step of the joint
// (psi, f_w) system, so feeding the stages to the f kernel reproduces joint
// RK4 exactly.
NoJumpSources no_jump_sources(const AtomParams& params, const DriveProfile& drive, double tau, double dt) {
    NoJumpSources out{TimeStepping::cover(tau, dt), {}};
    const double h = out.steps.dt;
    const double h2 = 0.5 * h;
    const double coupling = std::sqrt(params.gamma_e / tau);
    const Eigen::Index e = idx(Level::E);

    auto rhs = [&](double t, const StateVector& y) -> StateVector {
        return -kI * (effective_hamiltonian(params, drive, t) * y);
    };

    out.stages.resize(out.steps.steps);
    StateVector y = StateVector::Zero();
    y(idx(Level::G)) = 1.0;
    for (std::size_t n = 0; n < out.steps.steps; ++n) {
        const double t = out.steps.time(n);
        const StateVector k1 = rhs(t, y);
        const StateVector y2 = y + h2 * k1;
        const StateVector k2 = rhs(t + h2, y2);
        const StateVector y3 = y + h2 * k2;
        const StateVector k3 = rhs(t + h2, y3);
        const StateVector y4 = y + h * k3;
        const StateVector k4 = rhs(t + h, y4);
        out.stages[n] = {coupling * y(e), coupling * y2(e), coupling * y3(e), coupling * y4(e)};
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

std::vector<double> final_norms(const AtomParams& params, const DriveProfile& drive, double tau,
                                const FrequencyGrid& grid, double dt) {
    const auto src = no_jump_sources(params, drive, tau, dt);
    const auto omegas = grid.omegas();
    std::vector<double> fr(omegas.size(), 0.0), fi(omegas.size(), 0.0);
    kernels::advance_one_photon(omegas, src.stages, src.steps.dt, fr, fi);
    std::vector<double> norms(omegas.size());
    for (std::size_t j = 0; j < norms.size(); ++j) norms[j] = fr[j] * fr[j] + fi[j] * fi[j];
    return norms;
}

std::vector<double> peak_normalized(std::vector<double> v) {
    const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    if (peak > 0.0)
        for (auto& x : v) x /= peak;
    return v;
}

SpectrumResult conditional_spectrum(const AtomParams& params, const DriveProfile& drive, double tau,
                                    const FrequencyGrid& grid, double dt) {
    require_trajectory_inputs(params, tau, grid);
    const auto coarse = peak_normalized(final_norms(params, drive, tau, grid, dt));
    const auto fine = peak_normalized(final_norms(params, drive, tau, grid, 0.5 * dt));

    double disagreement = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j)
        disagreement = std::max(disagreement, std::abs(fine[j] - coarse[j]));
    if (disagreement > kStepHalvingTolerance) {
        std::ostringstream os;
        os << "trajectory spectrum: step-halving disagreement " << disagreement << " exceeds "
           << kStepHalvingTolerance << " at dt = " << dt << "; reduce dt";
        throw ConvergenceError(os.str());
    }

    std::vector<Complex> s(fine.begin(), fine.end());
    return SpectrumResult(grid, std::move(s));
}

} // namespace

Eigen::Matrix3cd effective_hamiltonian(const AtomParams& params, const DriveProfile& drive, double t) {
    const double half_rabi = 0.5 * drive.evaluate(t);
    const Complex phase = std::polar(1.0, params.delta * t);
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(idx(Level::E), idx(Level::G)) = half_rabi * phase;
    h(idx(Level::G), idx(Level::E)) = half_rabi * std::conj(phase);
    h(idx(Level::E), idx(Level::E)) = Complex(0.0, -0.5 * params.gamma_e);
    return h;
}

NoJumpTrajectory propagate_no_jump(const StateVector& psi0, const AtomParams& params, const DriveProfile& drive,
                                   double t_end, double dt) {
    params.validate();
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9) throw DomainError("propagate_no_jump: psi0 must be normalized");
    const TimeStepping steps = TimeStepping::cover(t_end, dt);

    // (psi_g, psi_e, psi_t, emitted probability)
    using Augmented = Eigen::Matrix<Complex, 4, 1>;
    auto rhs = [&](double t, const Augmented& y) -> Augmented {
        Augmented d;
        d.head<3>() = -kI * (effective_hamiltonian(params, drive, t) * y.head<3>());
        d(3) = params.gamma_e * std::norm(y(1));
        return d;
    };

    NoJumpTrajectory out;
    out.times.reserve(steps.steps + 1);
    out.psi.reserve(steps.steps + 1);
    out.emitted.reserve(steps.steps + 1);

    Augmented y;
    y.head<3>() = psi0;
    y(3) = 0.0;
    out.times.push_back(0.0);
    out.psi.push_back(psi0);
    out.emitted.push_back(0.0);

    double lowest_norm2 = psi0.squaredNorm();
    for (std::size_t k = 0; k < steps.steps; ++k) {
        y = rk4_step(y, steps.time(k), steps.dt, rhs);
        const double t = steps.time(k + 1);
        const StateVector psi = y.head<3>();
        const double norm2 = psi.squaredNorm();
        if (norm2 > lowest_norm2 + 1e-8) {
            std::ostringstream os;
            os << "propagate_no_jump: norm grew to " << norm2 << " at t = " << t << "; reduce dt (" << steps.dt
               << ")";
            throw ConvergenceError(os.str());
        }
        lowest_norm2 = std::min(lowest_norm2, norm2);
        out.times.push_back(t);
        out.psi.push_back(psi);
        out.emitted.push_back(y(3).real());
    }
    return out;
}

PhotonTrajectorySet photon_trajectories(const AtomParams& params, const DriveProfile& drive, double tau,
                                        const FrequencyGrid& grid, double dt, std::size_t record_stride) {
    require_trajectory_inputs(params, tau, grid);
    const auto src = no_jump_sources(params, drive, tau, dt);
    const auto omegas = grid.omegas();
    const std::size_t n_freq = omegas.size();
    const std::size_t n_steps = src.steps.steps;

    PhotonTrajectorySet out{grid, {}, std::vector<std::vector<Complex>>(n_freq), {}};
    std::vector<double> fr(n_freq, 0.0), fi(n_freq, 0.0);
    auto record = [&](std::size_t step) {
        out.sample_times.push_back(src.steps.time(step));
        for (std::size_t j = 0; j < n_freq; ++j) out.f_values[j].emplace_back(fr[j], fi[j]);
    };

    const std::size_t stride = record_stride == 0 ? n_steps : record_stride;
    if (record_stride != 0) record(0);
    const std::span<const kernels::StageSources> all(src.stages);
    for (std::size_t n = 0; n < n_steps; n += stride) {
        const std::size_t chunk = std::min(stride, n_steps - n);
        kernels::advance_one_photon(omegas, all.subspan(n, chunk), src.steps.dt, fr, fi);
        record(n + chunk);
    }

    out.final_norms.resize(n_freq);
    for (std::size_t j = 0; j < n_freq; ++j) out.final_norms[j] = fr[j] * fr[j] + fi[j] * fi[j];
    return out;
}

std::vector<StateVector> one_photon_state_reference(const AtomParams& params, const DriveProfile& drive,
                                                    double tau, double omega, double dt) {
    params.validate();
    const TimeStepping steps = TimeStepping::cover(tau, dt);
    const double coupling = std::sqrt(params.gamma_e / tau);
    const Eigen::Matrix3cd lower_et = transition(Level::T, Level::E);

    // (psi, psi_w) stacked
    using Joint = Eigen::Matrix<Complex, 6, 1>;
    auto rhs = [&](double t, const Joint& y) -> Joint {
        const Eigen::Matrix3cd heff = effective_hamiltonian(params, drive, t);
        Joint d;
        d.head<3>() = -kI * (heff * y.head<3>());
        d.tail<3>() = coupling * (lower_et * y.head<3>()) -
                      kI * ((heff + omega * Eigen::Matrix3cd::Identity()) * y.tail<3>());
        return d;
    };

    Joint y = Joint::Zero();
    y(idx(Level::G)) = 1.0;
    std::vector<StateVector> out;
    out.reserve(steps.steps + 1);
    out.push_back(y.tail<3>());
    for (std::size_t k = 0; k < steps.steps; ++k) {
        y = rk4_step(y, steps.time(k), steps.dt, rhs);
        out.push_back(y.tail<3>());
    }
    return out;
}

SpectrumResult single_photon_spectrum(const AtomParams& params, const DriveProfile& drive, double tau,
                                      const FrequencyGrid& grid, double dt) {
    if (!drive.is_constant())
        throw DomainError("single_photon_spectrum: constant drive required; use transient_spectrum");
    if (params.delta != 0.0)
        throw DomainError("single_photon_spectrum: delta must be 0; use transient_spectrum");
    return conditional_spectrum(params, drive, tau, grid, dt);
}

SpectrumResult transient_spectrum(const AtomParams& params, const DriveProfile& drive, double tau,
                                  const FrequencyGrid& grid, double dt) {
    return conditional_spectrum(params, drive, tau, grid, dt);
}

Complex analytic_f(const AtomParams& params, double omega, double t) {
    params.validate();
    const double w_eff = omega_eff(params);
    const double half = 0.5 * w_eff;
    const double quarter_g = 0.25 * params.gamma_e;
    const Complex b(-quarter_g, omega);
    const double envelope = std::exp(-quarter_g * t);
    const Complex m = std::sin(half * t) * envelope * b - half * std::cos(half * t) * envelope +
                      half * std::polar(1.0, -omega * t);
    return m / (b * b + half * half);
}

double fit_scale(std::span<const double> model, std::span<const double> data) {
    if (model.size() != data.size()) throw DomainError("fit_scale: size mismatch");
    const double num = std::inner_product(model.begin(), model.end(), data.begin(), 0.0);
    const double den = std::inner_product(model.begin(), model.end(), model.begin(), 0.0);
    if (!(den > 0.0)) throw DomainError("fit_scale: model is identically zero");
    return num / den;
}

double band_weight(const SpectrumResult& spec, double half_width) {
    if (!(half_width > 0.0)) throw DomainError("band_weight: half_width must be > 0");
    double total = 0.0;
    double inside = 0.0;
    for (std::size_t j = 0; j < spec.abs2.size(); ++j) {
        total += spec.abs2[j];
        if (std::abs(spec.grid.omega(j)) < half_width) inside += spec.abs2[j];
    }
    return total > 0.0 ? inside / total : 0.0;
}

} // namespace optpump
