/// @file data.hpp
/// @brief Analytic initial/target data from truncated Fourier stream
///        functions on Omega: divergence-free and wall-tangent by
///        construction, sampled with exact zeros on the walls.

#pragma once

#include <cstdint>

#include "mhdctrl/solvers.hpp"

namespace mhdctrl {

/// psi = [a_cos cos(m pi x/L) + a_sin sin(m pi x/L)] * sin(n pi y/W),
/// field = perp_grad(psi).
struct StreamMode {
    int m = 0, n = 1;
    double a_cos = 0.0, a_sin = 0.0;
};

VectorField field_from_stream(const GridSpec& g, const std::vector<StreamMode>& modes);

/// Seeded random mode mix, rescaled so the sup norm over closure(Omega) is amp.
VectorField random_stream_field(const GridSpec& g, std::uint64_t seed, int max_m, int max_n,
                                double amp);

/// Discrete divergence-free threshold: 10 h^2 (field max-norm over Omega).
double div_tol_omega(const VectorField& v);

/// Validates loaded data on Omega: wall-normal residue snapped to zero when
/// tiny, divergence residue projected once (Leray) when within div_tol,
/// rejected beyond it.
void admit_initial_data(VectorField& z0);

}  // namespace mhdctrl
