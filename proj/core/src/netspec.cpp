#include "pmdsim/netspec.hpp"

#include "pmdsim/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace pmdsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kLn10 = 2.302585092994045684017991454684;
constexpr double kDefaultOmega0 = 1216.0; // rad/ps, ~1550 nm
constexpr std::uint32_t kDefaultGridN = 4096;

[[noreturn]] void fail(parse_error::kind k, const std::string& msg) {
    throw parse_error(k, msg);
}

// SAX pass that rejects duplicate keys (the DOM parser would silently keep
// the first occurrence) and reports syntax errors with their position.
struct DocumentScan : json::json_sax_t {
    std::vector<std::set<std::string>> object_keys;
    std::string duplicate;
    std::string syntax_message;

    bool null() override { return true; }
    bool boolean(bool) override { return true; }
    bool number_integer(number_integer_t) override { return true; }
    bool number_unsigned(number_unsigned_t) override { return true; }
    bool number_float(number_float_t, const string_t&) override { return true; }
    bool string(string_t&) override { return true; }
    bool binary(binary_t&) override { return true; }
    bool start_object(std::size_t) override {
        object_keys.emplace_back();
        return true;
    }
    bool key(string_t& val) override {
        if (!object_keys.back().insert(val).second) {
            duplicate = val;
            return false;
        }
        return true;
    }
    bool end_object() override {
        object_keys.pop_back();
        return true;
    }
    bool start_array(std::size_t) override { return true; }
    bool end_array() override { return true; }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
        syntax_message = ex.what();
        return false;
    }
};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            fail(parse_error::kind::unknown_key, where + ": unknown key '" + item.key() + "'");
        }
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(parse_error::kind::missing_field, where + ": missing required field '" + key + "'");
    }
    return *it;
}

double get_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        fail(parse_error::kind::constraint, where + ": expected a number");
    }
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
        fail(parse_error::kind::constraint, where + ": value must be finite");
    }
    return x;
}

const json& get_object(const json& value, const std::string& where) {
    if (!value.is_object()) {
        fail(parse_error::kind::constraint, where + ": expected an object");
    }
    return value;
}

Axis parse_axis(const json& value, const std::string& where) {
    const json& obj = get_object(value, where);
    check_keys(obj, {"angles", "vector"}, where);
    const bool has_angles = obj.contains("angles");
    const bool has_vector = obj.contains("vector");
    if (has_angles == has_vector) {
        fail(has_angles ? parse_error::kind::constraint : parse_error::kind::missing_field,
             where + ": give exactly one of 'angles' ([theta, phi]) or 'vector' ([nx, ny, nz])");
    }
    if (has_angles) {
        const json& arr = obj["angles"];
        if (!arr.is_array() || arr.size() != 2) {
            fail(parse_error::kind::constraint, where + ".angles: expected [theta, phi]");
        }
        return Axis::from_angles(get_number(arr[0], where + ".angles[0]"),
                                 get_number(arr[1], where + ".angles[1]"));
    }
    const json& arr = obj["vector"];
    if (!arr.is_array() || arr.size() != 3) {
        fail(parse_error::kind::constraint, where + ".vector: expected [nx, ny, nz]");
    }
    double x = get_number(arr[0], where + ".vector[0]");
    double y = get_number(arr[1], where + ".vector[1]");
    double z = get_number(arr[2], where + ".vector[2]");
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (std::abs(norm - 1.0) > 1e-6) {
        fail(parse_error::kind::constraint,
             where + ".vector: axis must be unit length within 1e-6, got norm " + std::to_string(norm));
    }
    if (std::abs(norm - 1.0) > 1e-12) { // skip when already normalized: keeps canonical form a fixed point
        x /= norm;
        y /= norm;
        z /= norm;
    }
    return Axis(x, y, z);
}

Trunk parse_trunk(const json& value, const std::string& where) {
    const json& obj = get_object(value, where);
    const json& type = require_key(obj, "type", where);
    if (!type.is_string()) {
        fail(parse_error::kind::constraint, where + ".type: expected \"pmd\" or \"pdl\"");
    }
    const std::string kind = type.get<std::string>();
    if (kind == "pmd") {
        check_keys(obj, {"type", "dgd", "axis"}, where);
        const double dgd = get_number(require_key(obj, "dgd", where), where + ".dgd");
        if (dgd < 0.0) {
            fail(parse_error::kind::constraint, where + ".dgd: must be >= 0");
        }
        return Trunk::pmd(dgd, parse_axis(require_key(obj, "axis", where), where + ".axis"));
    }
    if (kind == "pdl") {
        check_keys(obj, {"type", "mu", "pdl_db", "axis"}, where);
        const bool has_mu = obj.contains("mu");
        const bool has_db = obj.contains("pdl_db");
        if (has_mu == has_db) {
            fail(has_mu ? parse_error::kind::constraint : parse_error::kind::missing_field,
                 where + ": give exactly one of 'mu' or 'pdl_db'");
        }
        double mu;
        if (has_mu) {
            mu = get_number(obj["mu"], where + ".mu");
            if (mu < 0.0) {
                fail(parse_error::kind::constraint, where + ".mu: must be >= 0 (flip the axis instead)");
            }
        } else {
            const double db = get_number(obj["pdl_db"], where + ".pdl_db");
            if (db < 0.0) {
                fail(parse_error::kind::constraint, where + ".pdl_db: must be >= 0 (flip the axis instead)");
            }
            mu = mu_from_db(db);
        }
        return Trunk::pdl(mu, parse_axis(require_key(obj, "axis", where), where + ".axis"));
    }
    fail(parse_error::kind::constraint, where + ".type: expected \"pmd\" or \"pdl\", got \"" + kind + "\"");
}

} // namespace

Trunk Trunk::pmd(double dgd, const Axis& axis) {
    if (!(std::isfinite(dgd) && dgd >= 0.0)) {
        throw std::invalid_argument("dgd must be >= 0");
    }
    return Trunk{Kind::pmd, dgd, axis};
}

Trunk Trunk::pdl(double mu, const Axis& axis) {
    if (!(std::isfinite(mu) && mu >= 0.0)) {
        throw std::invalid_argument("mu must be >= 0");
    }
    return Trunk{Kind::pdl, mu, axis};
}

double NetworkSpec::total_abs_dgd() const {
    double sum = 0.0;
    for (const auto& t : trunks) {
        if (t.kind == Trunk::Kind::pmd) {
            sum += std::abs(t.value);
        }
    }
    return sum;
}

bool NetworkSpec::has_pdl() const {
    for (const auto& t : trunks) {
        if (t.kind == Trunk::Kind::pdl) {
            return true;
        }
    }
    return false;
}

bool NetworkSpec::is_alternating_odd() const {
    if (trunks.empty() || trunks.size() % 2 == 0) {
        return false;
    }
    for (std::size_t i = 0; i < trunks.size(); ++i) {
        const auto expected = (i % 2 == 0) ? Trunk::Kind::pmd : Trunk::Kind::pdl;
        if (trunks[i].kind != expected) {
            return false;
        }
    }
    return true;
}

Grid ExperimentSpec::resolved_grid(std::optional<std::uint32_t> default_n) const {
    const double t_span =
        grid.t_span.value_or(16.0 * pulse.t_c + 2.0 * network.total_abs_dgd());
    std::uint32_t n;
    if (grid.n) {
        n = *grid.n;
    } else if (default_n) {
        n = *default_n;
    } else {
        const double required = std::ceil(32.0 * t_span / pulse.t_c);
        n = kDefaultGridN;
        if (required > static_cast<double>(n)) {
            n = std::bit_ceil(static_cast<std::uint32_t>(required));
        }
    }
    return Grid(n, t_span);
}

double mu_from_db(double pdl_db) {
    return pdl_db * kLn10 / 20.0;
}

double db_from_mu(double mu) {
    return mu * 20.0 / kLn10;
}

ExperimentSpec parse_experiment(const std::string& text) {
    DocumentScan scan;
    if (!json::sax_parse(text, &scan)) {
        if (!scan.duplicate.empty()) {
            fail(parse_error::kind::syntax, "duplicate key '" + scan.duplicate + "'");
        }
        fail(parse_error::kind::syntax, scan.syntax_message.empty() ? "malformed document"
                                                                    : scan.syntax_message);
    }

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& ex) {
        fail(parse_error::kind::syntax, ex.what()); // unreachable after the scan, kept as a guard
    }

    const json& root = get_object(doc, "document");
    check_keys(root, {"name", "network", "pulse", "input_state", "grid"}, "document");

    NetworkSpec network;
    if (root.contains("name")) {
        if (!root["name"].is_string()) {
            fail(parse_error::kind::constraint, "name: expected a string");
        }
        network.name = root["name"].get<std::string>();
    }

    const json& net = require_key(root, "network", "document");
    if (!net.is_array() || net.empty()) {
        fail(parse_error::kind::constraint, "network: expected a non-empty array of trunks");
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        network.trunks.push_back(parse_trunk(net[i], "network[" + std::to_string(i) + "]"));
    }

    const json& pulse_obj = get_object(require_key(root, "pulse", "document"), "pulse");
    check_keys(pulse_obj, {"t_c", "omega0"}, "pulse");
    const double t_c = get_number(require_key(pulse_obj, "t_c", "pulse"), "pulse.t_c");
    if (!(t_c > 0.0)) {
        fail(parse_error::kind::constraint, "pulse.t_c: must be > 0");
    }
    double omega0 = kDefaultOmega0;
    if (pulse_obj.contains("omega0")) {
        omega0 = get_number(pulse_obj["omega0"], "pulse.omega0");
        if (omega0 < 0.0) {
            fail(parse_error::kind::constraint, "pulse.omega0: must be >= 0");
        }
    }

    const json& state = get_object(require_key(root, "input_state", "document"), "input_state");
    check_keys(state, {"theta", "phi"}, "input_state");
    const double theta = get_number(require_key(state, "theta", "input_state"), "input_state.theta");
    const double phi = get_number(require_key(state, "phi", "input_state"), "input_state.phi");

    GridOverrides overrides;
    if (root.contains("grid")) {
        const json& g = get_object(root["grid"], "grid");
        check_keys(g, {"n", "t_span"}, "grid");
        if (g.contains("n")) {
            const json& n_val = g["n"];
            if (!n_val.is_number_integer() && !n_val.is_number_unsigned()) {
                fail(parse_error::kind::constraint, "grid.n: expected an integer");
            }
            const auto n_signed = n_val.get<std::int64_t>();
            if (n_signed < 64 || n_signed > (1 << 24) ||
                (n_signed & (n_signed - 1)) != 0) {
                fail(parse_error::kind::constraint, "grid.n: must be a power of two in [64, 2^24]");
            }
            overrides.n = static_cast<std::uint32_t>(n_signed);
        }
        if (g.contains("t_span")) {
            const double span = get_number(g["t_span"], "grid.t_span");
            if (!(span > 0.0)) {
                fail(parse_error::kind::constraint, "grid.t_span: must be > 0");
            }
            overrides.t_span = span;
        }
    }

    return ExperimentSpec{std::move(network), GaussianPulse(t_c, omega0), theta, phi, overrides};
}

std::string to_canonical(const ExperimentSpec& spec) {
    ordered_json doc;
    doc["name"] = spec.network.name;
    ordered_json net = ordered_json::array();
    for (const auto& t : spec.network.trunks) {
        ordered_json trunk;
        trunk["type"] = (t.kind == Trunk::Kind::pmd) ? "pmd" : "pdl";
        trunk[(t.kind == Trunk::Kind::pmd) ? "dgd" : "mu"] = t.value;
        trunk["axis"]["vector"] = {t.axis.nx(), t.axis.ny(), t.axis.nz()};
        net.push_back(std::move(trunk));
    }
    doc["network"] = std::move(net);
    doc["pulse"]["t_c"] = spec.pulse.t_c;
    doc["pulse"]["omega0"] = spec.pulse.omega0;
    doc["input_state"]["theta"] = spec.input_theta;
    doc["input_state"]["phi"] = spec.input_phi;
    const Grid resolved = spec.resolved_grid();
    doc["grid"]["n"] = resolved.n();
    doc["grid"]["t_span"] = resolved.t_span();
    return doc.dump(2) + "\n";
}

} // namespace pmdsim
