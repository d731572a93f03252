/// @file io.hpp
/// @brief Field snapshot files (bit-exact text format), trajectory manifests,
///        and small CSV / PPM writers for run artifacts.
///
/// Snapshot format: line 1 holds `nx ny hx hy x0 y0` where nx and ny count
/// the values per line and the number of lines; then ny lines of nx
/// space-separated decimals, row-major, 17 significant digits.

#pragma once

#include <string>
#include <vector>

#include "mhdctrl/field.hpp"

namespace mhdctrl {

struct SnapshotData {
    int cols = 0, rows = 0;
    double hx = 0, hy = 0, x0 = 0, y0 = 0;
    std::vector<double> values;  // row-major
};

void write_snapshot(const std::string& path, const ScalarField& f);
SnapshotData read_snapshot(const std::string& path);

/// Rebuilds a grid field from a snapshot, validating the header against g.
ScalarField snapshot_to_field(const SnapshotData& s, const GridSpec& g);

/// Greyscale PPM rendering of a field slice (linear map of values to [0,255]).
void write_ppm(const std::string& path, const ScalarField& f);

/// CSV cross-section along the horizontal midline of Omega.
void write_midline_csv(const std::string& path, const std::vector<const ScalarField*>& fields,
                       const std::vector<std::string>& names);

}  // namespace mhdctrl
