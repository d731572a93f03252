/// @file config.hpp
/// @brief Run configuration: geometry, grid, iteration parameters and the
///        analytic data coefficients, read from a JSON file.

#pragma once

#include <cstdint>
#include <string>

#include "mhdctrl/controller.hpp"

namespace mhdctrl {

struct RunConfig {
    double L = 2.0, W = 1.0, l = 0.5;
    int nx = 128, ny = 64, nt = 256;
    double k_weight = 8.0, d = 0.1, M_override = 0.0, mu = 1.0, alpha = 0.5;
    int mtilde = 3;
    double T = 1.0, eps_cap = 0.25, tol_X = 1e-8;
    int max_iter = 40;
    std::uint64_t seed = 1234;
    double resolution_scale = 1.0;
    int snapshot_stride = 4;
    std::vector<StreamMode> u0, H0, uT, HT;  // stream-function data coefficients

    static RunConfig from_file(const std::string& path);

    GridSpec make_grid() const;
    ControllerConfig controller() const;
};

}  // namespace mhdctrl
