#pragma once

// Gaussian pulse model, centered time/frequency grids, and the discrete
// Fourier transform pair used by the propagation engine.
//
// Transform convention (pinned; the single most bug-prone sign in the
// whole engine):
//
//   forward:  spectrum(x_k) = sum_j field(t_j) e^{-i x_k t_j} dt
//   inverse:  field(t_j)    = (1/2pi) sum_k spectrum(x_k) e^{+i x_k t_j} dw
//
// Consequences, each pinned by a test:
//   * multiplying the spectrum by e^{+i x tau} maps field(t) -> field(t+tau),
//     i.e. moves the envelope peak to -tau;
//   * a PMD factor e^{+i b x / 2} on a component therefore moves that
//     component EARLIER by b/2;
//   * Parseval: sum |field|^2 dt = sum |spectrum|^2 dw / (2pi).

#include <complex>
#include <cstdint>
#include <vector>

namespace pmdsim {

/// Fourier-transform-limited Gaussian pulse: envelope
/// g(t) = (sqrt(2 pi) t_c)^{-1/2} exp(-(t/t_c)^2 / 4), so that |g|^2
/// integrates to one. Fields are stored baseband: the e^{-i omega0 t}
/// carrier is factored out and enters only through per-element phases.
struct GaussianPulse {
    double t_c;    ///< coherence time, ps (> 0)
    double omega0; ///< carrier angular frequency, rad/ps (>= 0)

    GaussianPulse(double t_c_, double omega0_);
};

/// Centered sampling grid: n samples (power of two, >= 64) spanning t_span
/// picoseconds. t_j = (j - n/2) dt; baseband offsets x_k = (k - n/2) dw
/// with dt dw n = 2 pi.
class Grid {
public:
    Grid(std::uint32_t n, double t_span);

    std::uint32_t n() const { return n_; }
    double t_span() const { return t_span_; }
    double dt() const { return dt_; }
    double domega() const { return domega_; }

    double time_at(std::uint32_t j) const { return (static_cast<double>(j) - half_) * dt_; }
    double freq_at(std::uint32_t k) const { return (static_cast<double>(k) - half_) * domega_; }

private:
    std::uint32_t n_;
    double t_span_;
    double dt_;
    double domega_;
    double half_;
};

/// Sizing rule used for grid defaults: t_span = 16 t_c + 2 * total |DGD|,
/// and n the smallest power of two (>= n_floor, >= 64) with dt <= t_c / 32.
/// Keeps envelope truncation and aliasing below the engine's 1e-8 budget.
Grid sized_grid(double t_c, double total_abs_dgd, std::uint32_t n_floor = 64);

/// Two-component complex field sampled on a grid.
struct SampledField {
    Grid grid;
    std::vector<std::complex<double>> h; ///< |H> amplitude per time sample
    std::vector<std::complex<double>> v; ///< |V> amplitude per time sample

    SampledField(const Grid& g);
};

/// Baseband Gaussian envelope samples on the grid. Real, positive, peak at
/// t = 0. Requires t_span >= 16 t_c so the truncated tails stay below the
/// test tolerances.
std::vector<std::complex<double>> gaussian_envelope(const GaussianPulse& pulse, const Grid& grid);

/// Time samples -> spectrum over the baseband offsets x_k (forward kernel
/// e^{-i x t}, weight dt). Input length must equal grid.n().
std::vector<std::complex<double>> forward_transform(const std::vector<std::complex<double>>& field,
                                                    const Grid& grid);

/// Spectrum -> time samples (inverse kernel e^{+i x t}, weight dw/2pi).
std::vector<std::complex<double>> inverse_transform(const std::vector<std::complex<double>>& spectrum,
                                                    const Grid& grid);

/// Trapezoid-rule first moment of a non-negative intensity trace, divided
/// by its trapezoid-rule total. Throws annihilation_error when the total
/// vanishes (everything lost to PDL).
double mean_time(const std::vector<double>& intensity, const Grid& grid);

/// Trapezoid-rule total: sum of intensity * dt with half-weight endpoints.
double total_intensity(const std::vector<double>& intensity, const Grid& grid);

} // namespace pmdsim
