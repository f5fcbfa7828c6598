#include "optpump/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "optpump/errors.hpp"
#include "optpump/integrator.hpp"
#include "optpump/kernels.hpp"
#include "optpump/lindblad.hpp"

namespace optpump {

namespace {

constexpr Eigen::Index kRowT = idx(Level::T) * kLevels;

void require_qrt_params(const AtomParams& params) {
    params.validate();
    if (!(params.gamma_t > 0.0))
        throw DomainError("qrt_correlation: gamma_t must be > 0 (the steady state is the dark trap state "
                          "otherwise); use gamma_t_limit_spectrum with a decreasing gamma_t sequence");
    if (!(params.gamma_e > 0.0)) throw DomainError("qrt_correlation: gamma_e must be > 0");
    if (params.delta != 0.0) throw DomainError("qrt_correlation: only resonant drive (delta = 0) is supported");
}

} // namespace

Eigen::Matrix2cd regression_matrix(const AtomParams& params) {
    const auto gen = build_generator(params, DriveProfile::constant(params.rabi), 0.0).mat;
    // (rho_tg, rho_te) evolve among themselves only.
    SuperMatrix outside = gen;
    outside.block<2, 2>(kRowT, kRowT).setZero();
    const double leak = outside.middleRows<2>(kRowT).cwiseAbs().maxCoeff();
    if (leak != 0.0) throw std::logic_error("regression_matrix: (rho_tg, rho_te) are not closed");
    return gen.block<2, 2>(kRowT, kRowT);
}

double default_correlation_span(const AtomParams& params) {
    const double rate = 0.25 * params.gamma_e + 0.5 * params.gamma_t;
    if (!(rate > 0.0)) throw DomainError("correlation span: no decay (gamma_e = gamma_t = 0)");
    const double span = std::log(1e7) / rate;
    return params.gamma_e > 0.0 ? std::max(span, 40.0 / params.gamma_e) : span;
}

CorrelationTrace qrt_correlation(const AtomParams& params, double tau_max, double dt) {
    require_qrt_params(params);
    const TimeStepping steps = TimeStepping::cover(tau_max, dt);

    const DensityMatrix rho_ss = steady_state(params);
    const Eigen::Matrix2cd g = regression_matrix(params);

    // X(0) = sigma_-^{et} rho_ss = |t><e| rho_ss has only a t-row, equal to
    // the e-row of rho_ss; K(tau) = Tr[sigma_+^{et} X(tau)] = X_te(tau).
    Eigen::Vector2cd y(rho_ss(idx(Level::E), idx(Level::G)), rho_ss(idx(Level::E), idx(Level::E)));
    auto rhs = [&g](double, const Eigen::Vector2cd& v) -> Eigen::Vector2cd { return g * v; };

    CorrelationTrace out;
    out.taus.reserve(steps.steps + 1);
    out.k_values.reserve(steps.steps + 1);
    out.taus.push_back(0.0);
    out.k_values.push_back(y(1));
    for (std::size_t k = 0; k < steps.steps; ++k) {
        y = rk4_step(y, steps.time(k), steps.dt, rhs);
        out.taus.push_back(steps.time(k + 1));
        out.k_values.push_back(y(1));
    }
    return out;
}

SpectrumResult spectrum_from_correlation(const CorrelationTrace& corr, const FrequencyGrid& grid) {
    const std::size_t n = corr.k_values.size();
    if (n < 2 || corr.taus.size() != n) throw DomainError("spectrum_from_correlation: need >= 2 samples");
    const double dtau = corr.taus[1] - corr.taus[0];
    if (!(dtau > 0.0) || corr.taus[0] != 0.0)
        throw DomainError("spectrum_from_correlation: taus must start at 0 and increase");
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(corr.taus[k] - static_cast<double>(k) * dtau) > 1e-9 * (1.0 + corr.taus[k]))
            throw DomainError("spectrum_from_correlation: taus must be uniformly spaced");

    const double k0 = std::abs(corr.k_values.front());
    const double tail = std::abs(corr.k_values.back());
    if (!(tail < 1e-6 * k0) && !(k0 == 0.0 && tail == 0.0)) {
        std::ostringstream os;
        os << "spectrum_from_correlation: insufficient decay at tau_max = " << corr.taus.back()
           << " (|K(tau_max)|/|K(0)| = " << tail / k0 << ", need < 1e-6); truncation would ring";
        throw ConvergenceError(os.str());
    }

    std::vector<Complex> weighted(corr.k_values.begin(), corr.k_values.end());
    for (auto& c : weighted) c *= dtau;
    weighted.front() *= 0.5;
    weighted.back() *= 0.5;

    const auto omegas = grid.omegas();
    const auto half = kernels::half_line_transform(weighted, dtau, omegas);
    std::vector<Complex> s(half.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = Complex(2.0 * half[j].real(), 0.0);
    return SpectrumResult(grid, std::move(s));
}

SpectrumResult analytic_spectrum(const AtomParams& params, const FrequencyGrid& grid) {
    params.validate();
    if (params.delta != 0.0) throw DomainError("analytic_spectrum: closed form holds for delta = 0 only");
    const double w_eff = omega_eff(params);
    const double half_split = 0.5 * w_eff;
    const double width = 0.25 * params.gamma_e + 0.5 * params.gamma_t;
    const double rho_tt = steady_state(params)(idx(Level::T), idx(Level::T)).real();
    const double prefactor = rho_tt / (std::numbers::pi * w_eff);

    const Complex weight_plus(half_split, 0.25 * params.gamma_e);  // peak at -Omega_eff/2
    const Complex weight_minus(half_split, -0.25 * params.gamma_e); // peak at +Omega_eff/2

    std::vector<Complex> s(grid.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double w = grid.omega(j);
        const double dp = w + half_split;
        const double dm = w - half_split;
        s[j] = prefactor * (weight_plus * width / (width * width + dp * dp) +
                            weight_minus * width / (width * width + dm * dm));
    }
    return SpectrumResult(grid, std::move(s));
}

GammaTLimitResult gamma_t_limit_spectrum(const AtomParams& params_base, const FrequencyGrid& grid,
                                         const std::vector<double>& gamma_t_sequence, double tau_max,
                                         double dt) {
    if (gamma_t_sequence.empty()) throw DomainError("gamma_t_limit_spectrum: empty gamma_t sequence");
    for (std::size_t i = 0; i < gamma_t_sequence.size(); ++i) {
        if (!(gamma_t_sequence[i] > 0.0))
            throw DomainError("gamma_t_limit_spectrum: every gamma_t must be > 0");
        if (i > 0 && !(gamma_t_sequence[i] < gamma_t_sequence[i - 1]))
            throw DomainError("gamma_t_limit_spectrum: gamma_t sequence must be strictly decreasing");
    }

    std::vector<double> previous;
    std::vector<double> differences;
    std::optional<SpectrumResult> last;
    for (const double gt : gamma_t_sequence) {
        AtomParams p = params_base;
        p.gamma_t = gt;
        SpectrumResult spec = spectrum_from_correlation(qrt_correlation(p, tau_max, dt), grid);
        auto shape = spec.normalized_abs2();
        if (!previous.empty()) {
            double linf = 0.0;
            for (std::size_t j = 0; j < shape.size(); ++j) linf = std::max(linf, std::abs(shape[j] - previous[j]));
            differences.push_back(linf);
        }
        previous = std::move(shape);
        last = std::move(spec);
    }

    GammaTLimitResult out{*last, gamma_t_sequence, differences, LimitStatus::NotAssessed};
    if (!differences.empty())
        out.status = differences.back() < kGammaTLimitTolerance ? LimitStatus::Converged : LimitStatus::NotConverged;
    return out;
}

} // namespace optpump
