/// Shared fixtures for the unit suites: small grids and data helpers.

#pragma once

#include <random>

#include "mhdctrl/config.hpp"
#include "mhdctrl/data.hpp"

namespace mhdctrl::testing {

/// Default duct at unit-test resolution (square cells, hx = hy = 1/16).
inline GridSpec small_square_grid() {
    DomainSpec dom = build_domains(1.0, 1.0, 0.25);
    return GridSpec::make(dom, 32, 32, 32);
}

/// Desk-shaped duct at reduced resolution.
inline GridSpec small_duct_grid(int nt = 64) {
    DomainSpec dom = build_domains(2.0, 1.0, 0.5);
    return GridSpec::make(dom, 48, 24, nt);
}

inline VectorField random_smooth_field(const GridSpec& g, std::uint64_t seed, double amp = 1.0) {
    return random_stream_field(g, seed, 2, 2, amp);
}

}  // namespace mhdctrl::testing
