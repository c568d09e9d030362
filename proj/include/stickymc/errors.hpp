// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace stickymc {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller broke a documented precondition or an internal invariant failed.
class contract_error : public error {
public:
    using error::error;
};

/// Projection target lies outside the band where the nearest boundary
/// point is unique.
class nonunique_projection_error : public contract_error {
public:
    using contract_error::contract_error;
};

/// Invalid user-facing configuration (bad study file, bad CLI flags,
/// out-of-range problem parameters).
class config_error : public error {
public:
    using error::error;
};

/// Requested operation needs data the object does not carry
/// (e.g. deriving a boundary datum without an exact solution).
class unsupported_error : public error {
public:
    using error::error;
};

/// Least-squares order fit cannot be formed from the given rows.
class degenerate_fit_error : public error {
public:
    using error::error;
};

/// A trajectory exceeded its step budget; indicates a scheme or
/// problem-setup bug rather than a statistical event.
class runaway_error : public error {
public:
    using error::error;
};

/// File could not be read or written.
class io_error : public error {
public:
    using error::error;
};

} // namespace stickymc
