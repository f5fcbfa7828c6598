#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "optpump/errors.hpp"
#include "optpump/lindblad.hpp"

using namespace optpump;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr Eigen::Index G = 0, E = 1, T = 2;

// Master equation written out element by element.
DensityMatrix hand_expanded(const DensityMatrix& r, const AtomParams& p, double omega, double t) {
    const Complex a = 0.5 * omega * std::polar(1.0, p.delta * t); // H_eg
    const Complex ac = std::conj(a);                              // H_ge
    const double ge = p.gamma_e, gt = p.gamma_t;
    DensityMatrix d;
    d(G, G) = -kI * (ac * r(E, G) - a * r(G, E)) + gt * r(T, T);
    d(E, E) = -kI * (a * r(G, E) - ac * r(E, G)) - ge * r(E, E);
    d(T, T) = ge * r(E, E) - gt * r(T, T);
    d(G, E) = -kI * ac * (r(E, E) - r(G, G)) - 0.5 * ge * r(G, E);
    d(G, T) = -kI * ac * r(E, T) - 0.5 * gt * r(G, T);
    d(E, T) = -kI * a * r(G, T) - 0.5 * (ge + gt) * r(E, T);
    d(E, G) = std::conj(d(G, E));
    d(T, G) = std::conj(d(G, T));
    d(T, E) = std::conj(d(E, T));
    return d;
}

DensityMatrix random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix3cd a;
    for (Eigen::Index i = 0; i < 9; ++i) a(i / 3, i % 3) = Complex(g(rng), g(rng));
    DensityMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

DensityMatrix ground() {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(G, G) = 1.0;
    return rho;
}

} // namespace

TEST_CASE("row-major vectorization") {
    DensityMatrix rho;
    for (Eigen::Index i = 0; i < 9; ++i) rho(i / 3, i % 3) = Complex(static_cast<double>(i), 0.0);
    const VecRho v = vectorize(rho);
    for (Eigen::Index i = 0; i < 9; ++i) CHECK(v(i).real() == static_cast<double>(i));
    CHECK(unvectorize(v) == rho);
}

TEST_CASE("generator agrees with the element-wise master equation") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        AtomParams p{3.0 * u(rng), u(rng), u(rng), 2.0 * u(rng) - 3.0};
        const double t = 5.0 * u(rng);
        const auto drive = trial % 2 ? DriveProfile::constant(p.rabi) : DriveProfile::exp_ramp(p.rabi, 0.7);
        const DensityMatrix rho = random_state(rng);
        const auto L = build_generator(p, drive, t);
        CHECK(L.time_dependent == (p.delta != 0.0 || !drive.is_constant()));
        const DensityMatrix diff = L.apply(rho) - hand_expanded(rho, p, drive.evaluate(t), t);
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("generator preserves trace") {
    AtomParams p{4.0, 1.3, 0.7, 0.4};
    const auto L = build_generator(p, DriveProfile::constant(p.rabi), 1.1);
    // The trace functional is the sum of rows 0, 4, 8 of the superoperator.
    const auto trace_row = L.mat.row(0) + L.mat.row(4) + L.mat.row(8);
    CHECK(trace_row.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("time-step default") {
    AtomParams p;
    CHECK(default_time_step(p, DriveProfile::constant(5.0)) == doctest::Approx(0.001));
    p.rabi = 0.1;
    p.gamma_e = 0.2;
    CHECK(default_time_step(p, DriveProfile::constant(0.1)) == doctest::Approx(0.005));
}

TEST_CASE("propagation: complete pumping into the trap state") {
    AtomParams p; // rabi 5, gamma_e 1, gamma_t 0
    std::size_t calls = 0;
    const auto tr = propagate(ground(), p, DriveProfile::constant(5.0), 40.0, 0.001,
                              [&](double, const DensityMatrix&) { ++calls; });
    CHECK(tr.size() == 40001);
    CHECK(calls == tr.size());
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(40.0).epsilon(1e-15));
    CHECK(tr.rho_gg.front() == 1.0);
    CHECK(tr.rho_tt.back() > 0.999);
    // With no t -> g channel the trap population can only grow.
    for (std::size_t k = 1; k < tr.size(); ++k) CHECK_MESSAGE(tr.rho_tt[k] >= tr.rho_tt[k - 1] - 1e-14, k);
    CHECK(std::abs(tr.final_state(T, T).real() - tr.rho_tt.back()) == 0.0);
}

TEST_CASE("propagation shrinks the step to divide the horizon") {
    AtomParams p;
    const auto tr = propagate(ground(), p, DriveProfile::constant(5.0), 1.0, 0.3);
    CHECK(tr.size() == 5);
    CHECK(tr.times[1] == doctest::Approx(0.25));
}

TEST_CASE("propagation rejects bad input") {
    AtomParams p;
    DensityMatrix bad = ground() * 2.0;
    CHECK_THROWS_AS(propagate(bad, p, DriveProfile::constant(5.0), 1.0, 0.01), DomainError);
    CHECK_THROWS_AS(propagate(ground(), p, DriveProfile::constant(5.0), -1.0, 0.01), DomainError);
    CHECK_THROWS_AS(propagate(ground(), p, DriveProfile::constant(5.0), 1.0, 0.0), DomainError);
    p.gamma_t = -1.0;
    CHECK_THROWS_AS(propagate(ground(), p, DriveProfile::constant(5.0), 1.0, 0.01), DomainError);
}

TEST_CASE("unstable step is reported as a convergence failure") {
    AtomParams p;
    p.rabi = 50.0;
    CHECK_THROWS_AS(propagate(ground(), p, DriveProfile::constant(50.0), 10.0, 0.2), ConvergenceError);
}

TEST_CASE("steady state: cycling regime") {
    AtomParams p;
    p.gamma_t = 2.0;
    const DensityMatrix ss = steady_state(p);
    CHECK(is_physical(ss, 1e-12).physical);
    CHECK(p.gamma_e * ss(E, E).real() == doctest::Approx(p.gamma_t * ss(T, T).real()).epsilon(1e-12));
    const auto L = build_generator(p, DriveProfile::constant(p.rabi), 0.0);
    CHECK(L.apply(ss).cwiseAbs().maxCoeff() < 1e-12);

    const auto tr = propagate(ground(), p, DriveProfile::constant(p.rabi), 40.0, 0.001);
    CHECK((tr.final_state - ss).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("steady state: pumped into the dark trap state") {
    AtomParams p;
    const DensityMatrix ss = steady_state(p);
    CHECK(std::abs(ss(T, T) - 1.0) < 1e-12);
    CHECK(ss.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steady state with detuning is written in the laser frame") {
    AtomParams p{5.0, 1.0, 2.0, 1.5};
    const DensityMatrix ss = steady_state(p);
    const auto tr = propagate(ground(), p, DriveProfile::constant(p.rabi), 40.0, 0.001);
    const DensityMatrix& lab = tr.final_state;
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(lab(i, i) - ss(i, i)) < 1e-7);
    // lab rho_eg = rot rho_eg * e^{i delta t}
    const Complex rotated = ss(E, G) * std::polar(1.0, p.delta * tr.times.back());
    CHECK(std::abs(lab(E, G) - rotated) < 1e-7);
}

TEST_CASE("steady state must be unique") {
    AtomParams p{5.0, 0.0, 0.0, 0.0}; // closed g-e system plus an isolated trap state
    CHECK_THROWS_AS(steady_state(p), DomainError);
}

TEST_CASE("RK4 population error is fourth order") {
    for (double gamma_t : {0.0, 2.0}) {
        CAPTURE(gamma_t);
        AtomParams p;
        p.gamma_t = gamma_t;
        const auto L = build_generator(p, DriveProfile::constant(p.rabi), 0.0);
        auto error = [&](double dt) {
            const auto tr = propagate(ground(), p, DriveProfile::constant(p.rabi), 10.0, dt);
            double worst = 0.0;
            for (std::size_t k = 0; k < tr.size(); ++k) {
                const SuperMatrix prop = (L.mat * tr.times[k]).exp();
                const DensityMatrix exact = unvectorize(prop * vectorize(ground()));
                for (Eigen::Index i = 0; i < 3; ++i)
                    worst = std::max(worst, std::abs(exact(i, i).real() - (i == 0   ? tr.rho_gg[k]
                                                                           : i == 1 ? tr.rho_ee[k]
                                                                                    : tr.rho_tt[k])));
            }
            return worst;
        };
        const double ratio = error(0.005) / error(0.0025);
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }
}
