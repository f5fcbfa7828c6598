#include "optpump/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optpump/errors.hpp"

namespace optpump {

Eigen::Matrix3cd transition(Level to, Level from) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(idx(to), idx(from)) = 1.0;
    return m;
}

void AtomParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v)) throw DomainError(std::string(name) + ": must be finite");
        if (v < 0.0) {
            std::ostringstream os;
            os << name << ": must be >= 0 (got " << v << ")";
            throw DomainError(os.str());
        }
    };
    check(rabi, "rabi");
    check(gamma_e, "gamma_e");
    check(gamma_t, "gamma_t");
    if (!std::isfinite(delta)) throw DomainError("delta: must be finite");
}

DriveProfile::DriveProfile(Shape shape) : shape_(shape) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantDrive>) {
                if (!(s.omega0 >= 0.0) || !std::isfinite(s.omega0))
                    throw DomainError("drive: constant Rabi frequency must be finite and >= 0");
            } else {
                if (!(s.omega_max >= 0.0) || !std::isfinite(s.omega_max))
                    throw DomainError("drive: omega_max must be finite and >= 0");
                if (!(s.rise_time > 0.0) || !std::isfinite(s.rise_time))
                    throw DomainError("drive: rise_time must be finite and > 0");
                if (!std::isfinite(s.t_start)) throw DomainError("drive: t_start must be finite");
            }
        },
        shape_);
}

double DriveProfile::evaluate(double t) const {
    if (const auto* c = std::get_if<ConstantDrive>(&shape_)) return c->omega0;
    const auto& r = std::get<ExpRampDrive>(shape_);
    if (t < r.t_start) return 0.0;
    return r.omega_max * -std::expm1(-(t - r.t_start) / r.rise_time);
}

double DriveProfile::peak() const {
    if (const auto* c = std::get_if<ConstantDrive>(&shape_)) return c->omega0;
    return std::get<ExpRampDrive>(shape_).omega_max;
}

double omega_eff(const AtomParams& params) {
    const double disc = params.rabi * params.rabi - 0.25 * params.gamma_e * params.gamma_e;
    if (!(disc > 0.0))
        throw DomainError("overdamped regime: doublet peak structure undefined (rabi^2 <= gamma_e^2/4)");
    return std::sqrt(disc);
}

double generalized_rabi(const AtomParams& params) {
    return std::hypot(params.rabi, params.delta);
}

DensityMatrix dm_from_pure(const StateVector& psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw DomainError("dm_from_pure: zero state vector");
    DensityMatrix rho = psi * psi.adjoint() / n2;
    return rho;
}

PhysicalityReport is_physical(const DensityMatrix& rho, double tol) {
    if (!(tol > 0.0)) throw DomainError("is_physical: tol must be > 0");

    PhysicalityReport r;
    r.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    r.trace_defect = std::abs(rho.trace() - 1.0);

    const Eigen::Matrix3cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();

    std::ostringstream os;
    if (!(r.hermiticity_defect < tol)) os << "hermiticity violation " << r.hermiticity_defect << "; ";
    if (!(r.trace_defect < tol)) os << "trace violation " << r.trace_defect << "; ";
    if (!(r.min_eigenvalue >= -tol)) os << "positivity violation " << -r.min_eigenvalue << "; ";
    r.diagnostic = os.str();
    if (!r.diagnostic.empty()) {
        r.physical = false;
        r.diagnostic.resize(r.diagnostic.size() - 2);
    }
    return r;
}

} // namespace optpump
