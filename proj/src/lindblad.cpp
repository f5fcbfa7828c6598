#include "optpump/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optpump/errors.hpp"
#include "optpump/integrator.hpp"

namespace optpump {

namespace {

constexpr Complex kI{0.0, 1.0};

SuperMatrix kron(const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& b) {
    SuperMatrix out;
    for (Eigen::Index i = 0; i < kLevels; ++i)
        for (Eigen::Index j = 0; j < kLevels; ++j)
            out.block<kLevels, kLevels>(i * kLevels, j * kLevels) = a(i, j) * b;
    return out;
}

// -i[H, .] for a Hamiltonian H.
SuperMatrix commutator(const Eigen::Matrix3cd& h) {
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    return -kI * (kron(h, id) - kron(id, h.transpose()));
}

// rate * (c rho c^+ - {c^+ c, rho}/2)
SuperMatrix dissipator(const Eigen::Matrix3cd& c, double rate) {
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    const Eigen::Matrix3cd cdc = c.adjoint() * c;
    return rate * (kron(c, c.conjugate()) - 0.5 * kron(cdc, id) - 0.5 * kron(id, cdc.transpose()));
}

// L(t) = fixed + (Omega(t)/2) (e^{i delta t} raise + e^{-i delta t} lower)
struct GeneratorParts {
    SuperMatrix fixed;
    SuperMatrix raise;
    SuperMatrix lower;

    explicit GeneratorParts(const AtomParams& p) {
        fixed = dissipator(transition(Level::T, Level::E), p.gamma_e) +
                dissipator(transition(Level::G, Level::T), p.gamma_t);
        raise = commutator(transition(Level::E, Level::G));
        lower = commutator(transition(Level::G, Level::E));
    }

    SuperMatrix at(double omega, double delta, double t) const {
        const Complex phase = std::polar(1.0, delta * t);
        return fixed + (0.5 * omega) * (phase * raise + std::conj(phase) * lower);
    }
};

bool generator_is_time_dependent(const AtomParams& params, const DriveProfile& drive) {
    return !drive.is_constant() || params.delta != 0.0;
}

} // namespace

VecRho vectorize(const DensityMatrix& rho) {
    VecRho v;
    for (Eigen::Index i = 0; i < kLevels; ++i)
        for (Eigen::Index j = 0; j < kLevels; ++j) v(i * kLevels + j) = rho(i, j);
    return v;
}

DensityMatrix unvectorize(const VecRho& v) {
    DensityMatrix rho;
    for (Eigen::Index i = 0; i < kLevels; ++i)
        for (Eigen::Index j = 0; j < kLevels; ++j) rho(i, j) = v(i * kLevels + j);
    return rho;
}

Liouvillian build_generator(const AtomParams& params, const DriveProfile& drive, double t) {
    const GeneratorParts parts(params);
    return {parts.at(drive.evaluate(t), params.delta, t), generator_is_time_dependent(params, drive)};
}

double default_time_step(const AtomParams& params, const DriveProfile& drive) {
    const double scale =
        std::max({drive.peak(), params.gamma_e, params.gamma_t, std::abs(params.delta), 1.0});
    return 0.005 / scale;
}

PopulationTrace propagate(const DensityMatrix& rho0, const AtomParams& params, const DriveProfile& drive,
                          double t_end, double dt, const DensityObserver& observer) {
    params.validate();
    const auto initial = is_physical(rho0, 1e-9);
    if (!initial.physical) throw DomainError("propagate: initial state is not physical: " + initial.diagnostic);
    const TimeStepping steps = TimeStepping::cover(t_end, dt);

    const GeneratorParts parts(params);
    const bool td = generator_is_time_dependent(params, drive);
    const SuperMatrix constant_gen = parts.at(drive.evaluate(0.0), params.delta, 0.0);

    PopulationTrace trace;
    const std::size_t n = steps.steps + 1;
    trace.times.reserve(n);
    trace.rho_gg.reserve(n);
    trace.rho_ee.reserve(n);
    trace.rho_tt.reserve(n);
    trace.rho_ge.reserve(n);
    trace.rho_et.reserve(n);
    trace.rho_gt.reserve(n);

    auto record = [&](double t, const DensityMatrix& rho) {
        trace.times.push_back(t);
        trace.rho_gg.push_back(rho(0, 0).real());
        trace.rho_ee.push_back(rho(1, 1).real());
        trace.rho_tt.push_back(rho(2, 2).real());
        trace.rho_ge.push_back(rho(0, 1));
        trace.rho_et.push_back(rho(1, 2));
        trace.rho_gt.push_back(rho(0, 2));
        if (observer) observer(t, rho);
    };

    auto rhs = [&](double t, const VecRho& v) -> VecRho {
        if (!td) return constant_gen * v;
        return parts.at(drive.evaluate(t), params.delta, t) * v;
    };

    VecRho v = vectorize(rho0);
    record(0.0, rho0);
    for (std::size_t k = 0; k < steps.steps; ++k) {
        v = rk4_step(v, steps.time(k), steps.dt, rhs);
        const double t = steps.time(k + 1);
        const DensityMatrix rho = unvectorize(v);
        const auto report = is_physical(rho, 1e-8);
        if (!report.physical) {
            std::ostringstream os;
            os << "propagate: state left the physical set at t = " << t << " (" << report.diagnostic
               << "); step dt = " << steps.dt << " is too large, try dt <= " << 0.5 * steps.dt;
            throw ConvergenceError(os.str());
        }
        record(t, rho);
    }
    trace.final_state = unvectorize(v);
    return trace;
}

DensityMatrix steady_state(const AtomParams& params) {
    params.validate();
    // Co-rotating frame: the e^{i delta t} phase becomes a static +delta |e><e|.
    const Eigen::Matrix3cd h = 0.5 * params.rabi *
                                   (transition(Level::E, Level::G) + transition(Level::G, Level::E)) +
                               params.delta * transition(Level::E, Level::E);
    const SuperMatrix gen = commutator(h) + dissipator(transition(Level::T, Level::E), params.gamma_e) +
                            dissipator(transition(Level::G, Level::T), params.gamma_t);

    Eigen::FullPivLU<SuperMatrix> lu(gen);
    lu.setThreshold(1e-12);
    const auto kernel_dim = lu.dimensionOfKernel();
    if (kernel_dim != 1) {
        std::ostringstream os;
        os << "steady_state: stationary state is not unique (null space dimension " << kernel_dim << ")";
        throw DomainError(os.str());
    }

    Eigen::Matrix<Complex, kVecDim + 1, kVecDim> bordered;
    bordered.topRows<kVecDim>() = gen;
    bordered.row(kVecDim).setZero();
    for (Eigen::Index i = 0; i < kLevels; ++i) bordered(kVecDim, i * kLevels + i) = 1.0;
    Eigen::Matrix<Complex, kVecDim + 1, 1> rhs = Eigen::Matrix<Complex, kVecDim + 1, 1>::Zero();
    rhs(kVecDim) = 1.0;

    const VecRho v = bordered.colPivHouseholderQr().solve(rhs);
    DensityMatrix rho = unvectorize(v);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();

    const auto report = is_physical(rho, 1e-9);
    if (!report.physical) throw ConvergenceError("steady_state: solution not physical: " + report.diagnostic);
    return rho;
}

} // namespace optpump
