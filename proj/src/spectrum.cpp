#include "optpump/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optpump/errors.hpp"

namespace optpump {

FrequencyGrid::FrequencyGrid(double tau, std::size_t n_half) : tau_(tau), n_half_(n_half) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("frequency grid: tau must be > 0");
    if (n_half == 0) throw DomainError("frequency grid: n_half must be positive");
}

FrequencyGrid FrequencyGrid::covering(double tau, double omega_max) {
    if (!(tau > 0.0)) throw DomainError("frequency grid: tau must be > 0");
    const double step = 2.0 * std::numbers::pi / tau;
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(omega_max) / step));
    return FrequencyGrid(tau, std::max<std::size_t>(n, 1));
}

double FrequencyGrid::spacing() const { return 2.0 * std::numbers::pi / tau_; }

double FrequencyGrid::omega(std::size_t index) const {
    const auto j = static_cast<double>(static_cast<long long>(index) - static_cast<long long>(n_half_));
    return j * spacing();
}

std::vector<double> FrequencyGrid::omegas() const {
    std::vector<double> w(size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = omega(i);
    return w;
}

SpectrumResult::SpectrumResult(FrequencyGrid g, std::vector<Complex> s)
    : grid(g), s_values(std::move(s)) {
    if (s_values.size() != grid.size())
        throw DomainError("spectrum: sample count does not match the frequency grid");
    abs2.resize(s_values.size());
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double re = s_values[i].real();
        const double im = s_values[i].imag();
        abs2[i] = re * re + im * im;
    }
}

std::vector<double> SpectrumResult::normalized_abs2() const {
    std::vector<double> out = abs2;
    const double peak = out.empty() ? 0.0 : *std::max_element(out.begin(), out.end());
    if (peak > 0.0)
        for (auto& v : out) v /= peak;
    return out;
}

std::vector<Peak> local_maxima(const SpectrumResult& spec) {
    const auto& y = spec.abs2;
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        const double curvature = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double shift = 0.0;
        if (curvature < 0.0) shift = 0.5 * (y[i - 1] - y[i + 1]) / curvature;
        peaks.push_back({i, spec.grid.omega(i) + shift * spec.grid.spacing(), y[i]});
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return peaks;
}

Doublet find_doublet(const SpectrumResult& spec) {
    const auto peaks = local_maxima(spec);
    if (peaks.size() < 2) throw DomainError("spectrum has fewer than two local maxima");
    Doublet d{peaks[0], peaks[1]};
    if (d.lower.omega > d.upper.omega) std::swap(d.lower, d.upper);
    return d;
}

ShapeDifference compare_shapes(const SpectrumResult& a, const SpectrumResult& b) {
    if (!(a.grid == b.grid)) throw DomainError("spectra compared on different frequency grids");
    const auto na = a.normalized_abs2();
    const auto nb = b.normalized_abs2();
    ShapeDifference d;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < na.size(); ++i) {
        const double diff = std::abs(na[i] - nb[i]);
        d.linf = std::max(d.linf, diff);
        sum2 += diff * diff;
    }
    d.rms = std::sqrt(sum2 / static_cast<double>(na.size()));
    return d;
}

} // namespace optpump
