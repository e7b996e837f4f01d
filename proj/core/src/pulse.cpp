#include "pmdsim/pulse.hpp"

#include "pmdsim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace pmdsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::uint32_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// One forward and one backward plan per grid size, created lazily.
// Plan creation is not thread-safe in FFTW, execution on distinct buffers
// is; UNALIGNED plans accept any heap buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::uint32_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& slot = plans_[{n, sign}];
        if (slot == nullptr) {
            std::vector<std::complex<double>> in(n), out(n);
            slot = fftw_plan_dft_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        return slot;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::uint32_t, int>, fftw_plan> plans_;
};

// Centered-grid DFT: with t_j = (j - n/2) dt and x_k = (k - n/2) dw the
// exponent splits into the plain FFT kernel times (-1)^{j+k} (n is a
// multiple of 4, so the residual constant phase is 1).
std::vector<std::complex<double>> centered_fft(const std::vector<std::complex<double>>& in,
                                               std::uint32_t n, int sign) {
    std::vector<std::complex<double>> staged(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        staged[j] = (j & 1u) ? -in[j] : in[j];
    }
    std::vector<std::complex<double>> out(n);
    fftw_execute_dft(PlanCache::instance().get(n, sign),
                     reinterpret_cast<fftw_complex*>(staged.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (std::uint32_t k = 0; k < n; ++k) {
        if (k & 1u) {
            out[k] = -out[k];
        }
    }
    return out;
}

} // namespace

GaussianPulse::GaussianPulse(double t_c_, double omega0_) : t_c(t_c_), omega0(omega0_) {
    if (!(std::isfinite(t_c) && t_c > 0.0)) {
        throw std::invalid_argument("pulse coherence time t_c must be > 0");
    }
    if (!(std::isfinite(omega0) && omega0 >= 0.0)) {
        throw std::invalid_argument("carrier frequency omega0 must be >= 0");
    }
}

Grid::Grid(std::uint32_t n, double t_span) : n_(n), t_span_(t_span) {
    if (!is_pow2(n) || n < 64) {
        throw std::invalid_argument("grid size must be a power of two >= 64");
    }
    if (!(std::isfinite(t_span) && t_span > 0.0)) {
        throw std::invalid_argument("grid time span must be > 0");
    }
    dt_ = t_span_ / static_cast<double>(n_);
    domega_ = kTwoPi / (static_cast<double>(n_) * dt_);
    half_ = static_cast<double>(n_ / 2);
}

Grid sized_grid(double t_c, double total_abs_dgd, std::uint32_t n_floor) {
    if (!(std::isfinite(t_c) && t_c > 0.0)) {
        throw std::invalid_argument("t_c must be > 0");
    }
    if (!(std::isfinite(total_abs_dgd) && total_abs_dgd >= 0.0)) {
        throw std::invalid_argument("total |DGD| must be >= 0");
    }
    const double t_span = 16.0 * t_c + 2.0 * total_abs_dgd;
    std::uint32_t n = std::bit_ceil(std::max<std::uint32_t>(n_floor, 64));
    while (t_span / static_cast<double>(n) > t_c / 32.0) {
        n *= 2;
    }
    return Grid(n, t_span);
}

SampledField::SampledField(const Grid& g) : grid(g), h(g.n()), v(g.n()) {}

std::vector<std::complex<double>> gaussian_envelope(const GaussianPulse& pulse, const Grid& grid) {
    if (grid.t_span() < 16.0 * pulse.t_c) {
        throw std::invalid_argument("grid window too narrow: need t_span >= 16 t_c");
    }
    const double amp = 1.0 / std::sqrt(std::sqrt(kTwoPi) * pulse.t_c);
    std::vector<std::complex<double>> g(grid.n());
    for (std::uint32_t j = 0; j < grid.n(); ++j) {
        const double u = grid.time_at(j) / pulse.t_c;
        g[j] = amp * std::exp(-0.25 * u * u);
    }
    return g;
}

std::vector<std::complex<double>> forward_transform(const std::vector<std::complex<double>>& field,
                                                    const Grid& grid) {
    if (field.size() != grid.n()) {
        throw std::invalid_argument("field length does not match grid size");
    }
    auto out = centered_fft(field, grid.n(), FFTW_FORWARD);
    for (auto& c : out) {
        c *= grid.dt();
    }
    return out;
}

std::vector<std::complex<double>> inverse_transform(const std::vector<std::complex<double>>& spectrum,
                                                    const Grid& grid) {
    if (spectrum.size() != grid.n()) {
        throw std::invalid_argument("spectrum length does not match grid size");
    }
    auto out = centered_fft(spectrum, grid.n(), FFTW_BACKWARD);
    const double scale = 1.0 / (static_cast<double>(grid.n()) * grid.dt());
    for (auto& c : out) {
        c *= scale;
    }
    return out;
}

double total_intensity(const std::vector<double>& intensity, const Grid& grid) {
    if (intensity.size() != grid.n()) {
        throw std::invalid_argument("intensity length does not match grid size");
    }
    double sum = 0.0;
    for (std::uint32_t j = 0; j < grid.n(); ++j) {
        sum += intensity[j];
    }
    sum -= 0.5 * (intensity.front() + intensity.back());
    return sum * grid.dt();
}

double mean_time(const std::vector<double>& intensity, const Grid& grid) {
    const double total = total_intensity(intensity, grid);
    if (!(total > 0.0)) {
        throw annihilation_error("mean time-of-arrival undefined: total intensity is zero");
    }
    double first = 0.0;
    for (std::uint32_t j = 0; j < grid.n(); ++j) {
        first += grid.time_at(j) * intensity[j];
    }
    first -= 0.5 * (grid.time_at(0) * intensity.front() +
                    grid.time_at(grid.n() - 1) * intensity.back());
    return first * grid.dt() / total;
}

} // namespace pmdsim
