#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace optpump {

using Complex = std::complex<double>;

// Internal states of the atom. The numeric value is the basis index used by
// every vector and matrix in the library.
enum class Level : Eigen::Index { G = 0, E = 1, T = 2 };

inline constexpr Eigen::Index kLevels = 3;

constexpr Eigen::Index idx(Level l) { return static_cast<Eigen::Index>(l); }

// Amplitudes over (g, e, t).
using StateVector = Eigen::Vector3cd;

// Density matrix over (g, e, t); row and column indexed by Level.
using DensityMatrix = Eigen::Matrix3cd;

// |to><from|
Eigen::Matrix3cd transition(Level to, Level from);

// Atom and laser parameters in units of a reference rate (Gamma_e = 1 by
// convention). There is deliberately no e -> g decay channel.
struct AtomParams {
    double rabi = 5.0;    // peak Rabi frequency
    double gamma_e = 1.0; // e -> t spontaneous emission rate
    double gamma_t = 0.0; // t -> g spontaneous emission rate
    double delta = 0.0;   // laser detuning

    // Throws DomainError naming the offending field.
    void validate() const;
};

struct ConstantDrive {
    double omega0 = 0.0;
};

// omega_max * (1 - exp(-(t - t_start) / rise_time)) for t >= t_start, else 0.
struct ExpRampDrive {
    double omega_max = 0.0;
    double rise_time = 1.0;
    double t_start = 0.0;
};

// Time-dependent Rabi envelope Omega(t).
class DriveProfile {
public:
    using Shape = std::variant<ConstantDrive, ExpRampDrive>;

    DriveProfile() = default;
    explicit DriveProfile(Shape shape);

    static DriveProfile constant(double omega0) { return DriveProfile(ConstantDrive{omega0}); }
    static DriveProfile exp_ramp(double omega_max, double rise_time, double t_start = 0.0) {
        return DriveProfile(ExpRampDrive{omega_max, rise_time, t_start});
    }

    double evaluate(double t) const;
    // Supremum of evaluate(t) over all t.
    double peak() const;
    bool is_constant() const { return std::holds_alternative<ConstantDrive>(shape_); }
    const Shape& shape() const { return shape_; }

private:
    Shape shape_{ConstantDrive{}};
};

// sqrt(Omega^2 - Gamma_e^2 / 4). Throws DomainError in the overdamped regime.
double omega_eff(const AtomParams& params);

// sqrt(Omega^2 + delta^2)
double generalized_rabi(const AtomParams& params);

// |psi><psi| / <psi|psi>
DensityMatrix dm_from_pure(const StateVector& psi);

struct PhysicalityReport {
    bool physical = true;
    double hermiticity_defect = 0.0; // max |rho_ij - conj(rho_ji)|
    double trace_defect = 0.0;       // |Tr rho - 1|
    double min_eigenvalue = 0.0;     // of the Hermitian part

    // Lists each failed check with the size of the violation; empty when
    // physical.
    std::string diagnostic;
};

PhysicalityReport is_physical(const DensityMatrix& rho, double tol);

} // namespace optpump
