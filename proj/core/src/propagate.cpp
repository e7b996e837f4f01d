#include "pmdsim/propagate.hpp"

#include "pmdsim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace pmdsim {

namespace {

JonesOp trunk_operator_at(const Trunk& trunk, double omega) {
    if (trunk.kind == Trunk::Kind::pmd) {
        return pmd_operator(trunk.value, trunk.axis, omega);
    }
    return pdl_operator(trunk.value, trunk.axis);
}

} // namespace

JonesOp network_operator_at(const NetworkSpec& network, double omega) {
    if (network.trunks.empty()) {
        throw std::invalid_argument("network must contain at least one trunk");
    }
    JonesOp op = trunk_operator_at(network.trunks.front(), omega);
    for (std::size_t i = 1; i < network.trunks.size(); ++i) {
        op = trunk_operator_at(network.trunks[i], omega) * op;
    }
    return op;
}

PropagationResult propagate(const NetworkSpec& network, const GaussianPulse& pulse,
                            const PolState& state0, const Grid& grid) {
    const auto envelope = gaussian_envelope(pulse, grid);
    const auto spectrum = forward_transform(envelope, grid);

    const std::uint32_t n = grid.n();
    std::vector<std::complex<double>> spec_h(n);
    std::vector<std::complex<double>> spec_v(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        const JonesOp op = network_operator_at(network, pulse.omega0 + grid.freq_at(k));
        const Vec2 out = op * Vec2{spectrum[k] * state0.a(), spectrum[k] * state0.b()};
        spec_h[k] = out.h;
        spec_v[k] = out.v;
    }

    PropagationResult result{SampledField(grid), {}, 0.0, 0.0, 0.0};
    result.field.h = inverse_transform(spec_h, grid);
    result.field.v = inverse_transform(spec_v, grid);

    result.intensity.resize(n);
    std::vector<double> input_intensity(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        result.intensity[j] = std::norm(result.field.h[j]) + std::norm(result.field.v[j]);
        input_intensity[j] = std::norm(envelope[j]);
    }

    result.total_intensity = total_intensity(result.intensity, grid);
    if (result.total_intensity < 1e-15) {
        throw annihilation_error("post-selection annihilated the pulse: total output intensity " +
                                 std::to_string(result.total_intensity));
    }
    result.survival_fraction = result.total_intensity / total_intensity(input_intensity, grid);
    result.mean_toa = mean_time(result.intensity, grid);
    return result;
}

double pointer_sigma_z(const PropagationResult& result, double dgd_ref) {
    if (!(std::isfinite(dgd_ref) && dgd_ref > 0.0)) {
        throw std::invalid_argument("dgd_ref must be > 0");
    }
    return -2.0 * result.mean_toa / dgd_ref;
}

SplitProbabilities strong_limit_probabilities(const PropagationResult& result) {
    const Grid& grid = result.field.grid;
    const std::uint32_t n = grid.n();
    // trapezoid weights throughout so early + late reproduces the total
    double early = 0.5 * result.intensity.front();
    for (std::uint32_t j = 1; j < n / 2; ++j) {
        early += result.intensity[j];
    }
    early += 0.5 * result.intensity[n / 2]; // t = 0 sample, split evenly
    early *= grid.dt();

    const double total = total_intensity(result.intensity, grid);
    if (!(total > 0.0)) {
        throw annihilation_error("no intensity to split between early and late arrival");
    }
    const double p_early = early / total;
    return SplitProbabilities{p_early, 1.0 - p_early};
}

} // namespace pmdsim
