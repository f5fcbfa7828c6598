#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "optpump/correlation.hpp"
#include "optpump/errors.hpp"
#include "optpump/lindblad.hpp"

using namespace optpump;

namespace {

AtomParams cycling(double gamma_t) {
    AtomParams p;
    p.gamma_t = gamma_t;
    return p;
}

} // namespace

TEST_CASE("regression coefficients are the (tg, te) block of the generator") {
    const AtomParams p = cycling(0.3);
    const auto L = build_generator(p, DriveProfile::constant(p.rabi), 0.0);
    const Eigen::Matrix2cd m = regression_matrix(p);
    CHECK((m - L.mat.block<2, 2>(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("correlation starts at the excited population") {
    const AtomParams p = cycling(1.0);
    const auto k = qrt_correlation(p, 5.0, 0.001);
    CHECK(k.taus.size() == 5001);
    CHECK(std::abs(k.k_values.front() - steady_state(p)(1, 1)) < 1e-15);
}

TEST_CASE("regression agrees with the full superoperator propagator") {
    // K(tau) = Tr[|e><t| exp(L tau)(|t><e| rho_ss)]
    const AtomParams p = cycling(0.5);
    const auto L = build_generator(p, DriveProfile::constant(p.rabi), 0.0);
    const DensityMatrix x0 = transition(Level::T, Level::E) * steady_state(p);
    const auto k = qrt_correlation(p, 6.0, 0.001);
    for (std::size_t i = 0; i < k.taus.size(); i += 500) {
        const DensityMatrix x = unvectorize((L.mat * k.taus[i]).exp() * vectorize(x0));
        CHECK(std::abs(k.k_values[i] - x(idx(Level::T), idx(Level::E))) < 1e-10);
    }
}

TEST_CASE("qrt preconditions") {
    AtomParams p;
    CHECK_THROWS_WITH_AS(qrt_correlation(p, 10.0, 0.01), doctest::Contains("gamma_t"), DomainError);
    p.gamma_t = 1.0;
    p.delta = 1.0;
    CHECK_THROWS_AS(qrt_correlation(p, 10.0, 0.01), DomainError);
    p.delta = 0.0;
    p.gamma_e = 0.0;
    CHECK_THROWS_AS(qrt_correlation(p, 10.0, 0.01), DomainError);
}

TEST_CASE("transform of an exponential decay is a Lorentzian") {
    // K = e^{-tau}  =>  S(w) = 2 / (1 + w^2)
    CorrelationTrace c;
    const double dt = 1e-3;
    for (std::size_t k = 0; k <= 20000; ++k) {
        c.taus.push_back(static_cast<double>(k) * dt);
        c.k_values.emplace_back(std::exp(-c.taus.back()), 0.0);
    }
    const FrequencyGrid grid(20.0, 40);
    const auto s = spectrum_from_correlation(c, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid.omega(j);
        CHECK(std::abs(s.s_values[j].real() - 2.0 / (1.0 + w * w)) < 1e-4);
        CHECK(s.s_values[j].imag() == 0.0);
    }
}

TEST_CASE("truncated correlation is a convergence failure") {
    CorrelationTrace c;
    for (std::size_t k = 0; k <= 100; ++k) {
        c.taus.push_back(0.1 * static_cast<double>(k));
        c.k_values.emplace_back(std::exp(-0.1 * c.taus.back()), 0.0);
    }
    CHECK_THROWS_AS(spectrum_from_correlation(c, FrequencyGrid(10.0, 4)), ConvergenceError);

    CorrelationTrace uneven{{0.0, 0.1, 0.3}, {1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(spectrum_from_correlation(uneven, FrequencyGrid(10.0, 4)), DomainError);
}

TEST_CASE("default correlation span reaches the decay floor") {
    const AtomParams p = cycling(0.0);
    const double span = default_correlation_span(p);
    CHECK(span >= 40.0);
    CHECK(std::exp(-0.25 * span) <= 1e-7 * (1.0 + 1e-12));
}

TEST_CASE("closed-form doublet peaks at half the effective Rabi frequency") {
    const AtomParams p = cycling(0.0);
    const FrequencyGrid grid(40.0, 64);
    const auto s = analytic_spectrum(p, grid);
    const auto d = find_doublet(s);
    const double half = 0.5 * omega_eff(p);
    CHECK(std::abs(d.upper.omega - half) < grid.spacing());
    CHECK(std::abs(d.lower.omega + half) < grid.spacing());
    CHECK(d.upper.omega == doctest::Approx(-d.lower.omega));

    AtomParams detuned = p;
    detuned.delta = 1.0;
    CHECK_THROWS_AS(analytic_spectrum(detuned, grid), DomainError);
    AtomParams weak = p;
    weak.rabi = 0.3;
    CHECK_THROWS_AS(analytic_spectrum(weak, grid), DomainError);
}

TEST_CASE("qrt spectrum is symmetric at resonance and shows the doublet") {
    const AtomParams p = cycling(0.01);
    const FrequencyGrid grid(40.0, 64);
    const auto s = spectrum_from_correlation(qrt_correlation(p, default_correlation_span(p), 0.001), grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(s.abs2[j] == doctest::Approx(s.abs2[grid.size() - 1 - j]).epsilon(1e-8));
    const auto d = find_doublet(s);
    CHECK(std::abs(d.separation() - omega_eff(p)) < grid.spacing());
}

TEST_CASE("gamma_t -> 0 limit") {
    const AtomParams p = cycling(0.0);
    const FrequencyGrid grid(40.0, 64);
    const double span = default_correlation_span(p);

    const auto conv = gamma_t_limit_spectrum(p, grid, {0.1, 0.01, 1e-3, 1e-4, 1e-5}, span, 0.001);
    CHECK(conv.status == LimitStatus::Converged);
    REQUIRE(conv.differences.size() == 4);
    CHECK(conv.differences.back() < kGammaTLimitTolerance);
    // successive differences shrink roughly tenfold with gamma_t
    for (std::size_t i = 1; i < conv.differences.size(); ++i)
        CHECK(conv.differences[i] < 0.2 * conv.differences[i - 1]);

    const auto coarse = gamma_t_limit_spectrum(p, grid, {0.1, 0.01}, span, 0.001);
    CHECK(coarse.status == LimitStatus::NotConverged);

    const auto single = gamma_t_limit_spectrum(p, grid, {0.01}, span, 0.001);
    CHECK(single.status == LimitStatus::NotAssessed);

    CHECK_THROWS_AS(gamma_t_limit_spectrum(p, grid, {}, span, 0.001), DomainError);
    CHECK_THROWS_AS(gamma_t_limit_spectrum(p, grid, {0.01, 0.1}, span, 0.001), DomainError);
    CHECK_THROWS_AS(gamma_t_limit_spectrum(p, grid, {0.1, 0.0}, span, 0.001), DomainError);
}
