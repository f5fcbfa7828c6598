#pragma once

#include <cstddef>
#include <vector>

#include "optpump/core.hpp"

namespace optpump {

// omega_j = j * 2*pi/tau for j = -n_half..n_half. Index 0 of every sample
// array corresponds to j = -n_half.
class FrequencyGrid {
public:
    FrequencyGrid(double tau, std::size_t n_half);

    // Smallest grid on the 2*pi/tau lattice whose window reaches |omega_max|.
    static FrequencyGrid covering(double tau, double omega_max);

    double tau() const { return tau_; }
    std::size_t n_half() const { return n_half_; }
    std::size_t size() const { return 2 * n_half_ + 1; }
    double spacing() const;
    double omega(std::size_t index) const;
    std::vector<double> omegas() const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    double tau_;
    std::size_t n_half_;
};

struct SpectrumResult {
    FrequencyGrid grid;
    std::vector<Complex> s_values;
    std::vector<double> abs2;

    // abs2 is derived from s_values.
    SpectrumResult(FrequencyGrid grid, std::vector<Complex> s);

    // abs2 scaled to unit maximum (all zeros stay zeros).
    std::vector<double> normalized_abs2() const;
};

struct Peak {
    std::size_t index = 0; // grid index of the sampled maximum
    double omega = 0.0;    // parabolically refined position
    double height = 0.0;   // sampled abs2 at index
};

// Strict local maxima of abs2, refined by a three-point parabola, sorted by
// descending height.
std::vector<Peak> local_maxima(const SpectrumResult& spec);

struct Doublet {
    Peak lower; // smaller omega
    Peak upper;
    double separation() const { return upper.omega - lower.omega; }
};

// The two tallest local maxima of abs2. Throws DomainError when the
// spectrum has fewer than two.
Doublet find_doublet(const SpectrumResult& spec);

struct ShapeDifference {
    double linf = 0.0;
    double rms = 0.0;
};

// Differences of peak-normalized abs2. Grids must be identical.
ShapeDifference compare_shapes(const SpectrumResult& a, const SpectrumResult& b);

} // namespace optpump
