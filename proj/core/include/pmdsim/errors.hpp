#pragma once

#include <stdexcept>
#include <string>

namespace pmdsim {

/// Post-selection removed (essentially) all of the light: a filter or
/// polarizer annihilated the state, or a weak-value denominator vanished.
class annihilation_error : public std::runtime_error {
public:
    explicit annihilation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Network layout not supported by the requested operation
/// (e.g. a non-alternating chain passed to the multi-trunk expansion).
class topology_error : public std::runtime_error {
public:
    explicit topology_error(const std::string& what) : std::runtime_error(what) {}
};

/// Failure while reading an experiment document. Every parser failure is
/// classified; `kind()` is stable, `what()` is the human-readable message.
class parse_error : public std::runtime_error {
public:
    enum class kind {
        syntax,        ///< malformed document (bad JSON, duplicate key)
        unknown_key,   ///< well-formed but contains an unrecognized key
        missing_field, ///< a required field is absent
        constraint     ///< a value violates its constraint (negative dgd, ...)
    };

    parse_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}

    kind category() const noexcept { return kind_; }

private:
    kind kind_;
};

} // namespace pmdsim
