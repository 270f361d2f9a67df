#pragma once

// Special-relativity kinematics in natural units (c = 1).
//
// Four-vectors are ordered (t, x, y, z). Every transform is a plain
// Eigen 4x4 matrix so results compose with ordinary Eigen expressions.
// All functions are templated on the scalar type; long double is useful
// when the matrix route is pushed close to the speed of light.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "relcov/errors.hpp"

namespace relcov {

template <typename Scalar>
using FourVector = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using ThreeVector = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using LorentzTransform = Eigen::Matrix<Scalar, 4, 4>;

using FourVectord = FourVector<double>;
using LorentzTransformd = LorentzTransform<double>;

/// Largest accepted speed; keeps gamma finite.
inline constexpr double kMaxSpeed = 1.0 - 1e-12;

/// Two momentum components closer than this are the same basis label.
inline constexpr double kMergeTolerance = 1e-9;

/// Relative mass-shell tolerance used by standard_boost.
inline constexpr double kOnShellTolerance = 1e-9;

template <typename Scalar>
LorentzTransform<Scalar> minkowski_metric() {
    return FourVector<Scalar>(1, -1, -1, -1).asDiagonal();
}

template <typename Derived>
typename Derived::Scalar minkowski_square(const Eigen::MatrixBase<Derived>& v) {
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 4);
    return v(0) * v(0) - v.template tail<3>().squaredNorm();
}

/// Largest entrywise deviation of L^T g L from g.
template <typename Derived>
typename Derived::Scalar metric_violation(const Eigen::MatrixBase<Derived>& lam) {
    using Scalar = typename Derived::Scalar;
    const LorentzTransform<Scalar> g = minkowski_metric<Scalar>();
    return (lam.transpose() * g * lam - g).cwiseAbs().maxCoeff();
}

template <typename Scalar>
void check_speed(Scalar beta, const char* what) {
    if (!(beta >= Scalar(0)) || !(beta <= Scalar(kMaxSpeed))) {
        std::ostringstream os;
        os << what << " must lie in [0, 1 - 1e-12], got " << static_cast<double>(beta);
        throw DomainError(os.str());
    }
}

/// Lorentz factor (1 - beta^2)^(-1/2).
template <typename Scalar>
Scalar gamma(Scalar beta) {
    check_speed(beta, "beta");
    using std::sqrt;
    return Scalar(1) / sqrt((Scalar(1) - beta) * (Scalar(1) + beta));
}

/// Pure boost with proper velocity u = gamma * beta_vec.
///
/// Written in terms of u so the rest-frame case needs no direction and
/// the spatial block u u^T / (1 + gamma) stays well conditioned.
template <typename Scalar>
LorentzTransform<Scalar> boost_from_proper_velocity(const ThreeVector<Scalar>& u, Scalar gam) {
    LorentzTransform<Scalar> lam;
    lam(0, 0) = gam;
    lam.template block<1, 3>(0, 1) = u.transpose();
    lam.template block<3, 1>(1, 0) = u;
    lam.template block<3, 3>(1, 1) =
        Eigen::Matrix<Scalar, 3, 3>::Identity() + u * u.transpose() / (Scalar(1) + gam);
    return lam;
}

/// Active pure boost with velocity beta * direction.
template <typename Scalar>
LorentzTransform<Scalar> boost_transform(Scalar beta, const ThreeVector<Scalar>& direction) {
    using std::abs;
    const Scalar gam = gamma(beta);
    const Scalar norm_err = abs(direction.norm() - Scalar(1));
    if (!(norm_err <= Scalar(1e-12))) {
        std::ostringstream os;
        os << "boost direction must be a unit vector, |n| - 1 = " << static_cast<double>(norm_err);
        throw DomainError(os.str());
    }
    return boost_from_proper_velocity<Scalar>(gam * beta * direction, gam);
}

namespace detail {

template <typename Scalar>
void check_on_shell(const FourVector<Scalar>& p, Scalar m) {
    using std::abs;
    if (!(m > Scalar(0))) {
        throw DomainError("mass must be positive");
    }
    if (!(p(0) > Scalar(0))) {
        throw DomainError("energy component must be positive");
    }
    const Scalar shell = minkowski_square(p) - m * m;
    const Scalar scale = std::max(m * m, p(0) * p(0));
    if (!(abs(shell) <= Scalar(kOnShellTolerance) * scale)) {
        std::ostringstream os;
        os << "four-momentum is off shell: p^2 - m^2 = " << static_cast<double>(shell);
        throw PrecisionError(os.str(), static_cast<double>(shell));
    }
}

}  // namespace detail

/// Standard boost L(p) carrying the rest momentum (m, 0, 0, 0) to p.
template <typename Scalar>
LorentzTransform<Scalar> standard_boost(const FourVector<Scalar>& p, Scalar m) {
    detail::check_on_shell(p, m);
    return boost_from_proper_velocity<Scalar>(p.template tail<3>() / m, p(0) / m);
}

/// Exact inverse of standard_boost(p, m), built as the opposite boost.
template <typename Scalar>
LorentzTransform<Scalar> inverse_standard_boost(const FourVector<Scalar>& p, Scalar m) {
    detail::check_on_shell(p, m);
    return boost_from_proper_velocity<Scalar>(-p.template tail<3>() / m, p(0) / m);
}

/// Wigner transform W(lam, p) = L^-1(lam p) lam L(p); a rotation fixing (m,0,0,0).
template <typename Scalar>
LorentzTransform<Scalar> wigner_transform(const LorentzTransform<Scalar>& lam,
                                          const FourVector<Scalar>& p, Scalar m) {
    const FourVector<Scalar> boosted = lam * p;
    return inverse_standard_boost<Scalar>(boosted, m) * lam * standard_boost<Scalar>(p, m);
}

/// Rotation about +y (or -y) extracted from a Wigner transform.
///
/// The rotation acting on spin is D_{axis_sign * y}(omega), omega >= 0.
template <typename Scalar>
struct WignerRotation {
    Scalar omega{0};
    int axis_sign{1};

    /// Angle about +y.
    Scalar signed_angle() const { return axis_sign * omega; }
    Scalar cos_omega() const {
        using std::cos;
        return cos(omega);
    }

    /// The 4x4 matrix with rows/cols (t, x, y, z) for this rotation.
    LorentzTransform<Scalar> matrix() const {
        using std::cos;
        using std::sin;
        const Scalar c = cos(signed_angle());
        const Scalar s = sin(signed_angle());
        LorentzTransform<Scalar> w = LorentzTransform<Scalar>::Identity();
        w(1, 1) = c;
        w(1, 3) = s;
        w(3, 1) = -s;
        w(3, 3) = c;
        return w;
    }
};

/// Tolerance on the trivial y row/column of a Wigner transform.
inline constexpr double kWignerStructureTolerance = 1e-9;

/// Extracts the y-axis rotation angle from W = wigner_transform(lam, p, m).
///
/// Throws StructureError if W is not a pure rotation about the y axis.
template <typename Scalar>
WignerRotation<Scalar> wigner_angle(const LorentzTransform<Scalar>& lam,
                                    const FourVector<Scalar>& p, Scalar m) {
    using std::abs;
    using std::atan2;
    const LorentzTransform<Scalar> w = wigner_transform(lam, p, m);
    const FourVector<Scalar> e_y(0, 0, 1, 0);
    const Scalar dev = std::max((w.row(2).transpose() - e_y).cwiseAbs().maxCoeff(),
                                (w.col(2) - e_y).cwiseAbs().maxCoeff());
    if (!(dev <= Scalar(kWignerStructureTolerance))) {
        std::ostringstream os;
        os << "Wigner transform is not a rotation about y (deviation " << static_cast<double>(dev)
           << ")";
        throw StructureError(os.str());
    }
    const Scalar angle = atan2(w(1, 3), w(1, 1));
    WignerRotation<Scalar> rot;
    rot.axis_sign = angle < Scalar(0) ? -1 : 1;
    rot.omega = abs(angle);
    return rot;
}

/// Boost speed, particle speed and boost direction angle.
///
/// The boost direction is z cos(alpha) - x sin(alpha), alpha in [0, pi].
template <typename Scalar>
struct BoostParams {
    Scalar beta{0};
    Scalar beta_v{0};
    Scalar alpha{0};

    BoostParams() = default;
    BoostParams(Scalar beta_, Scalar beta_v_, Scalar alpha_)
        : beta(beta_), beta_v(beta_v_), alpha(alpha_) {
        validate();
    }

    void validate() const {
        check_speed(beta, "beta");
        check_speed(beta_v, "beta_v");
        if (!(alpha >= Scalar(0)) || !(alpha <= std::numbers::pi_v<Scalar>)) {
            throw DomainError("alpha must lie in [0, pi]");
        }
    }

    Scalar gamma() const { return relcov::gamma(beta); }
    Scalar gamma_v() const { return relcov::gamma(beta_v); }

    ThreeVector<Scalar> direction() const {
        using std::cos;
        using std::sin;
        return ThreeVector<Scalar>(-sin(alpha), Scalar(0), cos(alpha));
    }

    LorentzTransform<Scalar> boost() const {
        return boost_from_proper_velocity<Scalar>(gamma() * beta * direction(), gamma());
    }
};

using BoostParamsd = BoostParams<double>;

/// Closed-form cos(Omega) for a particle moving along +z.
template <typename Scalar>
Scalar wigner_cos_closed_form(const BoostParams<Scalar>& bp) {
    using std::cos;
    bp.validate();
    const Scalar g = bp.gamma();
    const Scalar gv = bp.gamma_v();
    const Scalar ca = cos(bp.alpha);
    const Scalar cross = bp.beta * bp.beta_v * g * gv * ca;
    const Scalar num = g + gv + cross + (Scalar(1) - g - gv + g * gv) * ca * ca;
    const Scalar den = Scalar(1) + g * gv + cross;
    return num / den;
}

/// On-shell momentum (gamma_v m, 0, 0, sign * gamma_v m beta_v).
template <typename Scalar>
FourVector<Scalar> particle_momentum(Scalar beta_v, Scalar m, int sign) {
    const Scalar gv = gamma(beta_v);
    return FourVector<Scalar>(gv * m, 0, 0, Scalar(sign) * gv * m * beta_v);
}

/// Boosted momenta of the +z and -z branches and which components coincide.
template <typename Scalar>
struct BranchMomenta {
    FourVector<Scalar> plus;
    FourVector<Scalar> minus;
    bool t_equal{false};
    bool x_equal{false};
    bool z_equal{false};

    bool any_equal() const { return t_equal || x_equal || z_equal; }
};

template <typename Scalar>
BranchMomenta<Scalar> branch_momenta(const BoostParams<Scalar>& bp, Scalar m) {
    using std::abs;
    const LorentzTransform<Scalar> lam = bp.boost();
    BranchMomenta<Scalar> out;
    out.plus = lam * particle_momentum(bp.beta_v, m, +1);
    out.minus = lam * particle_momentum(bp.beta_v, m, -1);
    const Scalar tol(kMergeTolerance);
    out.t_equal = abs(out.plus(0) - out.minus(0)) <= tol;
    out.x_equal = abs(out.plus(1) - out.minus(1)) <= tol;
    out.z_equal = abs(out.plus(3) - out.minus(3)) <= tol;
    return out;
}

}  // namespace relcov
