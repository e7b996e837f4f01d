#pragma once

// Closed-form results: intermediate-outcome probabilities under pre- and
// post-selection, the exact pointer value of a PMD measurement at any
// strength, pure and mixed weak values, the finite-PDL mean time of
// arrival, and the first-order multi-trunk expansion.
//
// All time-of-arrival values here are quoted in the pointer frame
// (<t> = (dgd/2) <sigma>), i.e. the negative of PropagationResult::mean_toa;
// see propagate.hpp.

#include "pmdsim/jones.hpp"
#include "pmdsim/netspec.hpp"

#include <vector>

namespace pmdsim {

enum class Outcome { horizontal, vertical };

/// A conditional mean of a Pauli observable. regime_strength records the
/// dgd/(2 t_c) value it was requested at; 0 marks the ideal weak limit.
struct WeakValue {
    double value;
    double regime_strength;
};

/// A = alpha~ * conj(mu1), B = beta~ * conj(nu1): the post-selected
/// amplitudes of the early and late pulse, with the carrier rotation
/// alpha~ = alpha e^{+i b w0 / 2}, beta~ = beta e^{-i b w0 / 2} folded in.
struct AbCoefficients {
    complexd a_coef;
    complexd b_coef;
};

AbCoefficients ab_coefficients(const PolState& psi0, const PolState& psi1, double b, double omega0);

/// Global carrier rotation of the chain: U(b omega0, axis)|psi0>.
PolState rotated_state(const PolState& psi0, double b, double omega0, const Axis& axis);

/// Probability of the intermediate strong outcome K given preparation
/// psi0 and post-selection psi1:
///   P(K) = P(psi1|K) P(K|psi0) / sum_K' P(psi1|K') P(K'|psi0).
/// The two outcomes sum to one exactly.
double abl_probability(const PolState& psi0, const PolState& psi1, Outcome outcome);

/// Exact pointer reading for pure post-selection at any measurement
/// strength ratio = dgd/(2 t_c):
///   (|A|^2 - |B|^2) / (|A|^2 + |B|^2 + 2 Re(conj(A) B) e^{-ratio^2/2}).
/// ratio = 0 reduces to the pure weak value, ratio -> inf to the
/// strong-outcome difference P(H) - P(V).
double sigma_z_exact_pure(const PolState& psi0, const PolState& psi1, double b, double omega0,
                          double ratio);

/// Weak value of sigma_z with pure post-selection:
/// Re(<psi1|sigma_z|psi> / <psi1|psi>). Unbounded; throws
/// annihilation_error when the overlap is below 1e-12.
WeakValue weak_value_pure(const PolState& psi, const PolState& psi1);

/// Weak value of sigma_z post-selected on the mixed state that a finite
/// PDL element leaves behind:
///   (<sigma_z>_psi + gamma n_z) / (1 + gamma n.<sigma>_psi),  gamma = tanh mu.
/// The equivalent filter form Re(<F'F sigma_z>_psi / <F'F>_psi) is
/// evaluated alongside as an internal consistency check.
WeakValue weak_value_mixed(const PolState& psi, double mu, const Axis& axis);

/// Closed-form pointer-frame mean time of arrival after PMD(b, z) followed
/// by PDL(mu, axis), for a pulse of coherence time t_c:
///   (b/2) (<sz>0 + gamma n_z) /
///         (1 + gamma [n_z <sz>0 + 2 R e^{-(b/2t_c)^2/2}]),
/// R = Re(alpha conj(beta) n_+ e^{i b omega0}), <sz>0 = |alpha|^2 - |beta|^2.
double mean_toa_pmd_pdl(const PolState& psi0, double b, double omega0, double mu, const Axis& axis,
                        double t_c);

/// One PMD element's first-order contribution to the multi-trunk mean
/// time of arrival: (dgd/2) * weak value of sigma along its axis, with
/// the pre-selection evolved through everything upstream and the
/// post-selection on the mixed state of everything downstream.
struct WeakTerm {
    double dgd;
    Axis axis;
    double weak_value;

    double contribution() const { return 0.5 * dgd * weak_value; }
};

/// Per-PMD weak terms of an alternating PMD/PDL/.../PMD chain, with all
/// carrier rotations evaluated at omega0. Valid to first order in
/// dgd_k / t_c.
std::vector<WeakTerm> multi_trunk_weak_terms(const NetworkSpec& network, const PolState& psi0,
                                             double omega0);

/// Sum of the weak-term contributions: the pointer-frame <t> to first
/// order. Throws topology_error unless the chain alternates PMD/PDL
/// starting and ending with PMD.
double multi_trunk_weak_toa(const NetworkSpec& network, const PolState& psi0, double omega0);

} // namespace pmdsim
