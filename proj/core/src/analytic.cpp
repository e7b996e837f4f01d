#include "pmdsim/analytic.hpp"

#include "pmdsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmdsim {

namespace {

constexpr double kDenominatorFloor = 1e-15;

struct PauliVector {
    double x, y, z;
};

PauliVector sigma_expectation(const PolState& psi) {
    const complexd cross = std::conj(psi.a()) * psi.b();
    return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi.a()) - std::norm(psi.b())};
}

void require_regime(double ratio) {
    if (!(std::isfinite(ratio) && ratio >= 0.0)) {
        throw std::invalid_argument("measurement strength ratio must be >= 0");
    }
}

/// Weak value of sigma_obs with post-selection on the mixed state of a
/// PDL element (mu, n): generalizes the z-observable form by replacing
/// n_z with n . obs.
double mixed_weak_value_about(const PolState& psi, double mu, const Axis& pdl_axis,
                              const Axis& obs_axis) {
    const double gamma = std::tanh(mu);
    const PauliVector s = sigma_expectation(psi);
    const double s_obs = obs_axis.nx() * s.x + obs_axis.ny() * s.y + obs_axis.nz() * s.z;
    const double s_pdl = pdl_axis.nx() * s.x + pdl_axis.ny() * s.y + pdl_axis.nz() * s.z;
    const double den = 1.0 + gamma * s_pdl;
    if (std::abs(den) <= kDenominatorFloor) {
        throw annihilation_error("mixed post-selection annihilates the state (weak value diverges)");
    }
    return (s_obs + gamma * pdl_axis.dot(obs_axis)) / den;
}

/// Direct matrix route: Re(<psi| P sigma_obs |psi> / <psi| P |psi>) for a
/// positive post-selection operator P.
double matrix_weak_value(const PolState& psi, const JonesOp& post, const JonesOp& sigma_obs) {
    const complexd den = expectation(psi, post);
    if (std::abs(den) <= kDenominatorFloor) {
        throw annihilation_error("post-selection annihilates the state (weak value diverges)");
    }
    const complexd num = expectation(psi, post * sigma_obs);
    return (num / den).real();
}

} // namespace

AbCoefficients ab_coefficients(const PolState& psi0, const PolState& psi1, double b,
                               double omega0) {
    const double half = 0.5 * b * omega0;
    const complexd rot(std::cos(half), std::sin(half));
    return {psi0.a() * rot * std::conj(psi1.a()), psi0.b() * std::conj(rot) * std::conj(psi1.b())};
}

PolState rotated_state(const PolState& psi0, double b, double omega0, const Axis& axis) {
    return PolState::normalized(pmd_operator(b, axis, omega0) * psi0.vec());
}

double abl_probability(const PolState& psi0, const PolState& psi1, Outcome outcome) {
    const double p_h = std::norm(psi1.a()) * std::norm(psi0.a());
    const double p_v = std::norm(psi1.b()) * std::norm(psi0.b());
    const double den = p_h + p_v;
    if (den <= kDenominatorFloor) {
        throw annihilation_error("post-selection incompatible with both intermediate outcomes");
    }
    const double prob_h = p_h / den;
    return (outcome == Outcome::horizontal) ? prob_h : 1.0 - prob_h;
}

double sigma_z_exact_pure(const PolState& psi0, const PolState& psi1, double b, double omega0,
                          double ratio) {
    require_regime(ratio);
    const auto [a, bb] = ab_coefficients(psi0, psi1, b, omega0);
    const double a2 = std::norm(a);
    const double b2 = std::norm(bb);
    const double overlap = std::exp(-0.5 * ratio * ratio);
    const double den = a2 + b2 + 2.0 * (std::conj(a) * bb).real() * overlap;
    if (std::abs(den) <= kDenominatorFloor) {
        throw annihilation_error("post-selected intensity vanishes at this measurement strength");
    }
    return (a2 - b2) / den;
}

WeakValue weak_value_pure(const PolState& psi, const PolState& psi1) {
    const complexd overlap = inner(psi1.vec(), psi.vec());
    if (std::abs(overlap) <= 1e-12) {
        throw annihilation_error("orthogonal pre/post-selection: pure weak value diverges");
    }
    const complexd num = std::conj(psi1.a()) * psi.a() - std::conj(psi1.b()) * psi.b();
    return {(num / overlap).real(), 0.0};
}

WeakValue weak_value_mixed(const PolState& psi, double mu, const Axis& axis) {
    const double value = mixed_weak_value_about(psi, mu, axis, Axis::z());

    // dual-form consistency: the gamma form must reproduce the filter form
    const JonesOp f = pdl_operator(mu, axis);
    const double filter_form = matrix_weak_value(psi, f.adjoint() * f, pauli(Axis::z()));
    if (std::abs(value - filter_form) > 1e-12 * std::max(1.0, std::abs(value))) {
        throw std::logic_error("mixed weak value: gamma form and filter form disagree");
    }
    return {value, 0.0};
}

double mean_toa_pmd_pdl(const PolState& psi0, double b, double omega0, double mu, const Axis& axis,
                        double t_c) {
    if (!(std::isfinite(b) && b >= 0.0)) {
        throw std::invalid_argument("dgd must be >= 0");
    }
    if (!(std::isfinite(t_c) && t_c > 0.0)) {
        throw std::invalid_argument("t_c must be > 0");
    }
    if (!(std::isfinite(mu) && mu >= 0.0)) {
        throw std::invalid_argument("mu must be >= 0");
    }
    const double gamma = std::tanh(mu);
    const double sz0 = std::norm(psi0.a()) - std::norm(psi0.b());
    const complexd n_plus(axis.nx(), axis.ny());
    const complexd carrier(std::cos(b * omega0), std::sin(b * omega0));
    const double coherence = (psi0.a() * std::conj(psi0.b()) * n_plus * carrier).real();
    const double ratio = 0.5 * b / t_c;
    const double overlap = std::exp(-0.5 * ratio * ratio);
    const double den = 1.0 + gamma * (axis.nz() * sz0 + 2.0 * coherence * overlap);
    if (std::abs(den) <= kDenominatorFloor) {
        throw annihilation_error("post-selected intensity vanishes: mean arrival time undefined");
    }
    return 0.5 * b * (sz0 + gamma * axis.nz()) / den;
}

std::vector<WeakTerm> multi_trunk_weak_terms(const NetworkSpec& network, const PolState& psi0,
                                             double omega0) {
    if (!network.is_alternating_odd()) {
        throw topology_error(
            "multi-trunk expansion needs an alternating PMD/PDL/.../PMD chain (2N+1 trunks)");
    }

    const std::size_t count = network.trunks.size();
    std::vector<WeakTerm> terms;
    terms.reserve(count / 2 + 1);

    for (std::size_t k = 0; k < count; k += 2) {
        const Trunk& element = network.trunks[k];

        // pre-selection: evolve through trunks 0..k at the carrier frequency
        // (the element's own rotation commutes with its observable)
        JonesOp upstream = JonesOp::identity();
        for (std::size_t i = 0; i <= k; ++i) {
            const Trunk& t = network.trunks[i];
            const JonesOp op = (t.kind == Trunk::Kind::pmd) ? pmd_operator(t.value, t.axis, omega0)
                                                            : pdl_operator(t.value, t.axis);
            upstream = op * upstream;
        }
        const PolState pre = PolState::normalized(upstream * psi0.vec());

        // post-selection: D'D of everything downstream at the carrier frequency
        JonesOp downstream = JonesOp::identity();
        for (std::size_t i = k + 1; i < count; ++i) {
            const Trunk& t = network.trunks[i];
            const JonesOp op = (t.kind == Trunk::Kind::pmd) ? pmd_operator(t.value, t.axis, omega0)
                                                            : pdl_operator(t.value, t.axis);
            downstream = op * downstream;
        }
        const JonesOp post = downstream.adjoint() * downstream;

        const double w = matrix_weak_value(pre, post, pauli(element.axis));
        terms.push_back(WeakTerm{element.value, element.axis, w});
    }
    return terms;
}

double multi_trunk_weak_toa(const NetworkSpec& network, const PolState& psi0, double omega0) {
    double total = 0.0;
    for (const auto& term : multi_trunk_weak_terms(network, psi0, omega0)) {
        total += term.contribution();
    }
    return total;
}

} // namespace pmdsim
