#pragma once

// Exact numeric engine: apply a trunk chain to a pulse in the frequency
// domain and measure the output intensity trace.
//
// Pointer sign convention (pinned by tests): under the transform pair in
// pulse.hpp, the +1 eigenmode of a PMD axis leaves the fiber EARLY, at
// t = -dgd/2. pointer_sigma_z therefore negates the raw first moment,
//
//     pointer_sigma_z = -2 * mean_toa / dgd_ref,
//
// so that an |H> launch through a z-axis PMD reads +1. The closed forms in
// analytic.hpp quote the pointer-frame time of arrival, i.e. -mean_toa.

#include "pmdsim/jones.hpp"
#include "pmdsim/netspec.hpp"
#include "pmdsim/pulse.hpp"

#include <vector>

namespace pmdsim {

struct PropagationResult {
    SampledField field;          ///< output baseband amplitudes
    std::vector<double> intensity; ///< |h|^2 + |v|^2 per time sample
    double total_intensity;      ///< trapezoid-rule integral of intensity
    double mean_toa;             ///< first moment of intensity, ps
    double survival_fraction;    ///< total out / total in (1 for unitary chains)
};

/// Fraction of the output intensity before and after t = 0; the t = 0
/// sample contributes half to each side. early + late = 1.
struct SplitProbabilities {
    double early;
    double late;
};

/// Ordered operator product of the chain at angular frequency omega;
/// the first trunk is applied first (rightmost factor).
JonesOp network_operator_at(const NetworkSpec& network, double omega);

/// Frequency-domain propagation of a Gaussian pulse in polarization state
/// state0 through the chain. The grid must satisfy the sizing rule in
/// pulse.hpp for this network. Throws annihilation_error when the output
/// carries no intensity (total < 1e-15).
PropagationResult propagate(const NetworkSpec& network, const GaussianPulse& pulse,
                            const PolState& state0, const Grid& grid);

/// Pointer readout: -2 * mean_toa / dgd_ref (see file header). dgd_ref > 0.
double pointer_sigma_z(const PropagationResult& result, double dgd_ref);

/// Early/late detection probabilities; meaningful as a strong polarization
/// measurement when dgd >> t_c. Throws annihilation_error on zero total.
SplitProbabilities strong_limit_probabilities(const PropagationResult& result);

} // namespace pmdsim
