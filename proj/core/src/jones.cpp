#include "pmdsim/jones.hpp"

#include "pmdsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmdsim {

namespace {

constexpr double kAxisNormTol = 1e-9;

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Axis

Axis::Axis(double nx, double ny, double nz) : nx_(nx), ny_(ny), nz_(nz) {
    require_finite(nx, "axis component");
    require_finite(ny, "axis component");
    require_finite(nz, "axis component");
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (std::abs(norm - 1.0) > kAxisNormTol) {
        throw std::invalid_argument("axis must be a unit vector (|norm - 1| <= 1e-9), got norm " +
                                    std::to_string(norm));
    }
    if (norm != 1.0) {
        nx_ /= norm;
        ny_ /= norm;
        nz_ /= norm;
    }
}

Axis Axis::from_angles(double theta, double phi) {
    require_finite(theta, "theta");
    require_finite(phi, "phi");
    const double st = std::sin(theta);
    return Axis(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

double Axis::theta() const {
    return std::acos(std::clamp(nz_, -1.0, 1.0));
}

double Axis::phi() const {
    if (nx_ == 0.0 && ny_ == 0.0) {
        return 0.0; // poles: azimuth is arbitrary
    }
    return std::atan2(ny_, nx_);
}

// ---------------------------------------------------------------------------
// PolState

PolState::PolState(complexd a, complexd b) : a_(a), b_(b) {
    const double n2 = std::norm(a) + std::norm(b);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-6) {
        throw std::invalid_argument("polarization state must be unit-norm");
    }
    const double n = std::sqrt(n2);
    if (n != 1.0) {
        a_ /= n;
        b_ /= n;
    }
}

PolState PolState::normalized(const Vec2& vec) {
    const double n = std::sqrt(vec.norm_sq());
    if (!(n >= 1e-12)) {
        throw annihilation_error("cannot normalize: state amplitude below 1e-12");
    }
    PolState s;
    s.a_ = vec.h / n;
    s.b_ = vec.v / n;
    return s;
}

// ---------------------------------------------------------------------------
// JonesOp

JonesOp JonesOp::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

double JonesOp::max_abs_diff(const JonesOp& other) const {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) {
        d = std::max(d, std::abs(m[static_cast<std::size_t>(i)] - other.m[static_cast<std::size_t>(i)]));
    }
    return d;
}

JonesOp operator*(const JonesOp& a, const JonesOp& b) {
    JonesOp r;
    r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
    r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
    r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
    r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
    return r;
}

JonesOp operator*(const complexd& s, const JonesOp& a) {
    return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
}

JonesOp operator+(const JonesOp& a, const JonesOp& b) {
    return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}};
}

Vec2 operator*(const JonesOp& a, const Vec2& x) {
    return {a.m[0] * x.h + a.m[1] * x.v, a.m[2] * x.h + a.m[3] * x.v};
}

// ---------------------------------------------------------------------------
// Constructors of the physical operators

JonesOp pauli(const Axis& axis) {
    const complexd n_minus(axis.nx(), -axis.ny());
    const complexd n_plus(axis.nx(), axis.ny());
    return {{complexd(axis.nz()), n_minus, n_plus, complexd(-axis.nz())}};
}

PolState plus_state(const Axis& axis) {
    const double half = 0.5 * axis.theta();
    const double phi = axis.phi();
    return PolState(complexd(std::cos(half)),
                    std::sin(half) * complexd(std::cos(phi), std::sin(phi)));
}

PolState orthogonal_state(const PolState& psi) {
    Vec2 perp{-std::conj(psi.b()), std::conj(psi.a())};
    // fix the phase: first nonzero component real positive
    complexd lead = (std::abs(perp.h) > 1e-15) ? perp.h : perp.v;
    const complexd phase = std::conj(lead) / std::abs(lead);
    return PolState::normalized(phase * perp);
}

JonesOp pmd_operator(double b, const Axis& axis, double omega) {
    require_finite(omega, "omega");
    require_finite(b, "dgd");
    if (b < 0.0) {
        throw std::invalid_argument("dgd must be >= 0");
    }
    const double half = 0.5 * b * omega;
    const complexd c(std::cos(half));
    const complexd is(0.0, std::sin(half));
    return c * JonesOp::identity() + is * pauli(axis);
}

JonesOp pdl_operator(double mu, const Axis& axis) {
    require_finite(mu, "mu");
    if (mu < 0.0) {
        throw std::invalid_argument("pdl strength mu must be >= 0; flip the axis instead of negating mu");
    }
    const complexd c(std::cosh(0.5 * mu));
    const complexd s(std::sinh(0.5 * mu));
    return c * JonesOp::identity() + s * pauli(axis);
}

complexd expectation(const PolState& psi, const JonesOp& op) {
    return inner(psi.vec(), op * psi.vec());
}

// ---------------------------------------------------------------------------
// Polar decomposition

namespace {

using complexl = std::complex<long double>;

struct Mat2l {
    complexl m[4];

    static Mat2l from(const JonesOp& a) {
        return {{complexl(a.m[0]), complexl(a.m[1]), complexl(a.m[2]), complexl(a.m[3])}};
    }

    JonesOp to_double() const {
        JonesOp r;
        for (int i = 0; i < 4; ++i) {
            r.m[static_cast<std::size_t>(i)] =
                complexd(static_cast<double>(m[i].real()), static_cast<double>(m[i].imag()));
        }
        return r;
    }

    Mat2l mul(const Mat2l& b) const {
        return {{m[0] * b.m[0] + m[1] * b.m[2], m[0] * b.m[1] + m[1] * b.m[3],
                 m[2] * b.m[0] + m[3] * b.m[2], m[2] * b.m[1] + m[3] * b.m[3]}};
    }

    Mat2l adj() const { return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }

    complexl det() const { return m[0] * m[3] - m[1] * m[2]; }
};

/// Eigenvectors of a (near-)unitary 2x2 u written as e^{i chi}(cos(eta) +
/// i sin(eta) sigma_a): the +-1 eigenstates of sigma_a. Falls back to the
/// H/V basis when u is a pure phase (eta ~ 0, axis undefined).
std::array<PolState, 2> unitary_eigenbasis(const JonesOp& u) {
    const complexd half_tr = 0.5 * u.trace();
    const complexd i_unit(0.0, 1.0);
    // traceless part divided by i equals (e^{i chi} sin eta) sigma_a
    const JonesOp k = (1.0 / i_unit) * (u + (-half_tr) * JonesOp::identity());
    const complexd zeta_sq = -k.det();
    const double zeta_mag = std::sqrt(std::abs(zeta_sq));
    if (zeta_mag < 1e-9) {
        return {PolState(complexd(1.0), complexd(0.0)), PolState(complexd(0.0), complexd(1.0))};
    }
    const complexd zeta = std::sqrt(zeta_sq);
    const complexd s10 = k(1, 0) / zeta;
    const complexd s00 = k(0, 0) / zeta;
    const Axis a(s10.real(), s10.imag(), s00.real());
    return {plus_state(a), plus_state(a.flipped())};
}

} // namespace

PolarParts polar_decompose(const JonesOp& t) {
    const double abs_det = std::abs(t.det());
    if (!(abs_det > 1e-12)) {
        throw std::invalid_argument(
            "operator is singular (infinite PDL): no finite filter/rotation split exists");
    }

    // All internal arithmetic in extended precision: forming t t^dag squares
    // the condition number, and the contract allows condition numbers to 1e6.
    const Mat2l tl = Mat2l::from(t);
    const Mat2l p = tl.mul(tl.adj()); // Hermitian positive definite

    const long double p0 = 0.5L * (p.m[0].real() + p.m[3].real());
    const long double pz = 0.5L * (p.m[0].real() - p.m[3].real());
    const long double px = p.m[1].real();
    const long double py = -p.m[1].imag();
    const long double pmag = std::sqrt(px * px + py * py + pz * pz);

    const long double det_t_mag = std::abs(tl.det());
    // small eigenvalue via det(p) = lam_hi * lam_lo; avoids the p0 - pmag
    // cancellation that dominates the error for strong PDL
    const long double lam_hi = p0 + pmag;
    const long double lam_lo = (det_t_mag * det_t_mag) / lam_hi;
    const long double r_hi = std::sqrt(lam_hi);
    const long double r_lo = std::sqrt(lam_lo);

    Mat2l f;
    if (pmag <= 1e-30L * p0) {
        // no PDL: filter is a multiple of the identity
        const complexl s0(std::sqrt(p0));
        f = {{s0, complexl(0.0L), complexl(0.0L), s0}};
    } else {
        const long double s0 = 0.5L * (r_hi + r_lo);
        const long double sv = 0.5L * (r_hi - r_lo) / pmag;
        f = {{complexl(s0 + sv * pz), complexl(sv * px, -sv * py),
              complexl(sv * px, sv * py), complexl(s0 - sv * pz)}};
    }

    // rotation = f^{-1} t, with det(f) taken as |det t| exactly
    const complexl inv_det(1.0L / (r_hi * r_lo));
    const Mat2l f_inv = {{f.m[3] * inv_det, -f.m[1] * inv_det, -f.m[2] * inv_det, f.m[0] * inv_det}};
    const Mat2l u = f_inv.mul(tl);

    const JonesOp filter = f.to_double();
    const JonesOp rotation = u.to_double();
    const auto modes = unitary_eigenbasis(rotation);
    return PolarParts{filter, rotation,
                      {PolState::normalized(filter * modes[0].vec()),
                       PolState::normalized(filter * modes[1].vec())}};
}

std::array<PolState, 2> filtered_state(const JonesOp& f, const PolState& psi0) {
    const Vec2 filtered = f * psi0.vec();
    if (std::sqrt(filtered.norm_sq()) < 1e-12) {
        throw annihilation_error("post-selection annihilates the state");
    }
    const PolState psi_f = PolState::normalized(filtered);
    return {psi_f, orthogonal_state(psi_f)};
}

} // namespace pmdsim
