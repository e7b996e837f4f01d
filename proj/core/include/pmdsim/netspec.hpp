#pragma once

// Experiment description model: trunk chains, pulse and input-state
// parameters, the JSON document format, and PDL unit conversions.
// The canonical document layout is described in the project README.

#include "pmdsim/jones.hpp"
#include "pmdsim/pulse.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pmdsim {

/// One element of the concatenation: a PMD fiber (dgd in ps) or a PDL
/// element (dimensionless strength mu), each with its Poincare axis.
struct Trunk {
    enum class Kind { pmd, pdl };

    Kind kind;
    double value; ///< dgd (ps) for pmd, mu for pdl; both >= 0
    Axis axis;

    static Trunk pmd(double dgd, const Axis& axis);
    static Trunk pdl(double mu, const Axis& axis);
};

struct NetworkSpec {
    std::string name;
    std::vector<Trunk> trunks; ///< applied in order, first trunk first

    double total_abs_dgd() const;
    bool has_pdl() const;

    /// PMD / PDL / ... / PMD with 2N+1 trunks (N >= 0)?
    bool is_alternating_odd() const;
};

/// Grid settings as written in a document; unset fields fall back to the
/// defaults described in the README (n = 4096, t_span from the sizing rule).
struct GridOverrides {
    std::optional<std::uint32_t> n;
    std::optional<double> t_span;
};

struct ExperimentSpec {
    NetworkSpec network;
    GaussianPulse pulse;
    double input_theta; ///< Poincare angles of the launched state
    double input_phi;
    GridOverrides grid;

    PolState input_state() const { return plus_state(Axis::from_angles(input_theta, input_phi)); }

    /// Resolve the grid: explicit values win, then default_n (e.g. from the
    /// environment), then the documented defaults.
    Grid resolved_grid(std::optional<std::uint32_t> default_n = std::nullopt) const;
};

/// PDL strength from the datasheet max/min transmission ratio in dB:
/// the intensity ratio of the two modes is e^{2 mu}, so mu = dB ln(10)/20.
double mu_from_db(double pdl_db);
double db_from_mu(double mu);

/// Parse and fully validate an experiment document (JSON). Unknown keys
/// and duplicate keys are rejected; every failure throws parse_error with
/// a category and a message. Never crashes on malformed input.
ExperimentSpec parse_experiment(const std::string& text);

/// Deterministic canonical serialization: defaults applied, pdl_db
/// converted to mu, axes stored as unit vectors. parse(to_canonical(s))
/// reproduces s exactly, and a canonical document is a fixed point.
std::string to_canonical(const ExperimentSpec& spec);

} // namespace pmdsim
