#pragma once

// Jones/Pauli algebra for fully polarized light: states on the Poincare
// sphere, Pauli matrices along arbitrary axes, PMD rotations, PDL filters,
// and the filter*rotation polar split of a general network operator.

#include <array>
#include <complex>
#include <cstddef>

namespace pmdsim {

using complexd = std::complex<double>;

/// Direction on the Poincare sphere, stored as a unit 3-vector.
/// Constructors renormalize small deviations (up to 1e-9 in norm) and
/// reject anything worse.
class Axis {
public:
    Axis(double nx, double ny, double nz);

    /// (theta, phi): polar angle from +z, azimuth from +x. Any finite angles.
    static Axis from_angles(double theta, double phi);

    static Axis x() { return Axis(1.0, 0.0, 0.0); }
    static Axis y() { return Axis(0.0, 1.0, 0.0); }
    static Axis z() { return Axis(0.0, 0.0, 1.0); }

    double nx() const { return nx_; }
    double ny() const { return ny_; }
    double nz() const { return nz_; }

    double theta() const;       ///< in [0, pi]
    double phi() const;         ///< in (-pi, pi]

    Axis flipped() const { return Axis(-nx_, -ny_, -nz_); }

    double dot(const Axis& o) const { return nx_ * o.nx_ + ny_ * o.ny_ + nz_ * o.nz_; }

private:
    double nx_, ny_, nz_;
};

/// Unnormalized complex 2-vector in the {|H>, |V>} basis. Intermediate
/// quantity for filtered (post-selected) fields; use PolState for
/// physical polarization states.
struct Vec2 {
    complexd h{0.0, 0.0};
    complexd v{0.0, 0.0};

    double norm_sq() const { return std::norm(h) + std::norm(v); }
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.h + b.h, a.v + b.v}; }
inline Vec2 operator*(const complexd& s, const Vec2& a) { return {s * a.h, s * a.v}; }

/// <a|b>, antilinear in the first argument.
inline complexd inner(const Vec2& a, const Vec2& b) {
    return std::conj(a.h) * b.h + std::conj(a.v) * b.v;
}

/// Unit-norm polarization state a|H> + b|V>.
class PolState {
public:
    /// Requires |a|^2+|b|^2 = 1 within 1e-6; the stored amplitudes are
    /// rescaled so the norm is exact to machine precision.
    PolState(complexd a, complexd b);

    /// Normalize an arbitrary nonzero vector. Throws annihilation_error
    /// when the norm is below 1e-12.
    static PolState normalized(const Vec2& vec);

    complexd a() const { return a_; }
    complexd b() const { return b_; }
    Vec2 vec() const { return {a_, b_}; }

private:
    PolState() = default;
    complexd a_, b_;
};

/// 2x2 complex Jones matrix (row-major).
struct JonesOp {
    std::array<complexd, 4> m{}; // [ hh hv ; vh vv ]

    complexd& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const complexd& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    static JonesOp identity() { return {{complexd(1.0), complexd(0.0), complexd(0.0), complexd(1.0)}}; }

    JonesOp adjoint() const;
    complexd det() const { return m[0] * m[3] - m[1] * m[2]; }
    complexd trace() const { return m[0] + m[3]; }

    /// max |entry| of (this - other)
    double max_abs_diff(const JonesOp& other) const;
};

JonesOp operator*(const JonesOp& a, const JonesOp& b);
JonesOp operator*(const complexd& s, const JonesOp& a);
JonesOp operator+(const JonesOp& a, const JonesOp& b);
Vec2 operator*(const JonesOp& a, const Vec2& x);

/// n . sigma: Hermitian, traceless, squares to the identity.
JonesOp pauli(const Axis& axis);

/// +1 eigenstate of pauli(axis): cos(theta/2)|H> + sin(theta/2)e^{i phi}|V>.
/// The |H> coefficient is real and non-negative.
PolState plus_state(const Axis& axis);

/// The orthogonal complement of a state, with the first nonzero component
/// made real positive.
PolState orthogonal_state(const PolState& psi);

/// PMD element at angular frequency omega: exp(i b omega sigma_axis / 2).
/// b is the group-delay split (DGD) in ps, omega in rad/ps. Unitary.
JonesOp pmd_operator(double b, const Axis& axis, double omega);

/// PDL element: exp(mu sigma_axis / 2) = cosh(mu/2) + sinh(mu/2) sigma_axis.
/// Hermitian positive-definite with eigenvalues e^{+-mu/2}, det = 1.
/// mu must be >= 0; flip the axis to represent loss along the other mode.
JonesOp pdl_operator(double mu, const Axis& axis);

/// <psi| M |psi>
complexd expectation(const PolState& psi, const JonesOp& op);

/// Result of the filter*rotation split of an invertible operator:
/// t = filter * rotation, filter Hermitian positive-definite, rotation
/// unitary. principal_states are the filtered images of the rotation's
/// eigenmodes: the output polarizations with extremal group delay.
struct PolarParts {
    JonesOp filter;
    JonesOp rotation;
    std::array<PolState, 2> principal_states;
};

/// Closed-form 2x2 polar decomposition (no iteration). Throws
/// std::invalid_argument when |det t| <= 1e-12: a singular operator is an
/// infinite-PDL element and has no finite filter factor.
PolarParts polar_decompose(const JonesOp& t);

/// f|psi0> renormalized, together with its orthogonal complement.
/// Throws annihilation_error when f annihilates the state.
std::array<PolState, 2> filtered_state(const JonesOp& f, const PolState& psi0);

} // namespace pmdsim
