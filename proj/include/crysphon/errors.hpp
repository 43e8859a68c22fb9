#pragma once

#include <stdexcept>
#include <string>

namespace crysphon {

/// Input failed structural/schema validation (bad field, bad shape).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Input is well-formed but violates a domain invariant
/// (non-crystallographic generators, inadmissible translations, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested numerical computation refused as unstable (CFL bound, negative
/// Christoffel eigenvalues without an explicit override).
class stability_error : public std::runtime_error {
public:
    explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace crysphon
