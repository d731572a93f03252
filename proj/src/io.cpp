#include "mhdctrl/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace mhdctrl {

namespace {
struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f) {
    FilePtr fp(std::fopen(path.c_str(), "w"));
    if (!fp) throw config_error("write_snapshot: cannot open " + path);
    const GridSpec& g = f.grid();
    std::fprintf(fp.get(), "%d %d %.17g %.17g %.17g %.17g\n", g.npx(), g.npy(), g.hx, g.hy,
                 g.x0, g.y0);
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i)
            std::fprintf(fp.get(), i ? " %.17g" : "%.17g", f.at(i, j));
        std::fputc('\n', fp.get());
    }
}

SnapshotData read_snapshot(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "r"));
    if (!fp) throw config_error("read_snapshot: cannot open " + path);
    SnapshotData s;
    if (std::fscanf(fp.get(), "%d %d %lf %lf %lf %lf", &s.cols, &s.rows, &s.hx, &s.hy, &s.x0,
                    &s.y0) != 6)
        throw config_error("read_snapshot: malformed header in " + path);
    if (s.cols <= 0 || s.rows <= 0) throw config_error("read_snapshot: bad dimensions in " + path);
    s.values.resize(std::size_t(s.cols) * s.rows);
    for (double& v : s.values)
        if (std::fscanf(fp.get(), "%lf", &v) != 1)
            throw config_error("read_snapshot: truncated data in " + path);
    return s;
}

ScalarField snapshot_to_field(const SnapshotData& s, const GridSpec& g) {
    if (s.cols != g.npx() || s.rows != g.npy() || std::abs(s.hx - g.hx) > 1e-12 ||
        std::abs(s.hy - g.hy) > 1e-12)
        throw config_error("snapshot_to_field: header does not match grid");
    ScalarField f(g);
    std::memcpy(f.data(), s.values.data(), s.values.size() * sizeof(double));
    return f;
}

void write_ppm(const std::string& path, const ScalarField& f) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw config_error("write_ppm: cannot open " + path);
    const GridSpec& g = f.grid();
    double lo = f.data()[0], hi = f.data()[0];
    for (std::size_t k = 0; k < f.size(); ++k) {
        lo = std::min(lo, f.data()[k]);
        hi = std::max(hi, f.data()[k]);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;
    std::fprintf(fp.get(), "P5\n%d %d\n255\n", g.npx(), g.npy());
    for (int j = g.ny; j >= 0; --j)
        for (int i = 0; i <= g.nx; ++i) {
            int v = int(255.0 * (f.at(i, j) - lo) / span + 0.5);
            std::fputc(v, fp.get());
        }
}

void write_midline_csv(const std::string& path, const std::vector<const ScalarField*>& fields,
                       const std::vector<std::string>& names) {
    if (fields.empty() || fields.size() != names.size())
        throw config_error("write_midline_csv: field/name mismatch");
    FilePtr fp(std::fopen(path.c_str(), "w"));
    if (!fp) throw config_error("write_midline_csv: cannot open " + path);
    const GridSpec& g = fields[0]->grid();
    const IndexBox om = g.box_omega();
    const int jmid = (om.j0 + om.j1) / 2;
    std::fprintf(fp.get(), "x");
    for (auto& n : names) std::fprintf(fp.get(), ",%s", n.c_str());
    std::fputc('\n', fp.get());
    for (int i = om.i0; i <= om.i1; ++i) {
        std::fprintf(fp.get(), "%.17g", g.x_of(i));
        for (auto* f : fields) std::fprintf(fp.get(), ",%.17g", f->at(i, jmid));
        std::fputc('\n', fp.get());
    }
}

}  // namespace mhdctrl
