#include "zk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "zk/error.hpp"

namespace zk {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double Grid::transverse_measure() const {
    const double w = 2.0 * half_width;
    return dim == 3 ? w * w : w;
}

Grid build_grid(double L, int dim, int nx, int ny, int nz, double half_width) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("grid.L must be positive");
    if (dim != 2 && dim != 3) throw InvalidArgument("grid.dim must be 2 or 3");
    if (nx < 8) throw InvalidArgument("grid.Nx must be at least 8");
    if (ny < 8 || !power_of_two(ny)) throw InvalidArgument("grid.Ny must be a power of two >= 8");
    if (dim == 3 && (nz < 8 || !power_of_two(nz)))
        throw InvalidArgument("grid.Nz must be a power of two >= 8");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw InvalidArgument("grid.half_width must be positive");
    Grid g;
    g.L = L;
    g.dim = dim;
    g.nx = nx;
    g.ny = ny;
    g.nz = dim == 3 ? nz : 1;
    g.half_width = half_width;
    g.dx = L / (nx + 1);
    g.dy = 2.0 * half_width / ny;
    g.dz = dim == 3 ? 2.0 * half_width / nz : 0.0;
    return g;
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatch("fields live on different grids");
}

Field::Field(const Grid& g) : grid_(g), values_(g.size(), 0.0) {}

Field::Field(const Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != g.size())
        throw InvalidArgument("field size " + std::to_string(values_.size()) +
                              " does not match grid size " + std::to_string(g.size()));
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
}

Field Field::operator+(const Field& o) const {
    require_same_grid(grid_, o.grid_);
    std::vector<double> v(values_);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] += o.values_[n];
    return Field(grid_, std::move(v));
}

Field Field::operator-(const Field& o) const {
    require_same_grid(grid_, o.grid_);
    std::vector<double> v(values_);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] -= o.values_[n];
    return Field(grid_, std::move(v));
}

Field Field::operator*(double a) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= a;
    return Field(grid_, std::move(v));
}

Field operator*(double a, const Field& f) { return f * a; }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::string to_string(ProfileFamily f) {
    switch (f) {
        case ProfileFamily::zero: return "zero";
        case ProfileFamily::separable_sine_gauss: return "separable-sine-gauss";
        case ProfileFamily::bump: return "bump";
        case ProfileFamily::custom_table: return "custom-table";
    }
    return "zero";
}

ProfileFamily profile_family_from_string(const std::string& s) {
    if (s == "zero") return ProfileFamily::zero;
    if (s == "separable-sine-gauss") return ProfileFamily::separable_sine_gauss;
    if (s == "bump") return ProfileFamily::bump;
    if (s == "custom-table") return ProfileFamily::custom_table;
    throw InvalidArgument("unknown profile family '" + s + "'");
}

namespace {

struct XFactor {
    double value;
    double slope;
};

XFactor x_factor(const ProfileSpec& spec, double L, double x) {
    using std::numbers::pi;
    switch (spec.family) {
        case ProfileFamily::separable_sine_gauss:
            return {x * (L - x) * (L - x), (L - x) * (L - x) - 2.0 * x * (L - x)};
        case ProfileFamily::bump: {
            const double s = std::sin(pi * x / L);
            const double c = std::cos(pi * x / L);
            const int p = spec.power;
            return {std::pow(s, p), p * std::pow(s, p - 1) * c * pi / L};
        }
        default: return {0.0, 0.0};
    }
}

double transverse_factor(const ProfileSpec& spec, const Grid& g, int j, int k) {
    const double s2 = spec.transverse_scale * spec.transverse_scale;
    const double y = g.y(j) - spec.center_y;
    double r2 = y * y;
    if (g.dim == 3) {
        const double z = g.z(k) - spec.center_z;
        r2 += z * z;
    }
    return std::exp(-r2 / s2);
}

void check_spec(const Grid& g, const ProfileSpec& spec) {
    if (!std::isfinite(spec.amplitude)) throw InvalidArgument("profile.amplitude must be finite");
    if (spec.family == ProfileFamily::zero || spec.family == ProfileFamily::custom_table) return;
    if (!(spec.transverse_scale > 0.0))
        throw InvalidArgument("profile.transverse_scale must be positive");
    if (spec.family == ProfileFamily::bump && spec.power < 2)
        throw InvalidArgument("profile.power must be at least 2");
    // Transverse decay at the box edge.
    const double s = spec.transverse_scale;
    const double dy = g.half_width - std::abs(spec.center_y);
    double edge = std::exp(-(dy * dy) / (s * s));
    if (g.dim == 3) {
        const double dz = g.half_width - std::abs(spec.center_z);
        edge = std::max(edge, std::exp(-(dz * dz) / (s * s)));
    }
    if (!(dy > 0.0) || edge > 1e-12)
        throw InvalidArgument("profile does not decay below 1e-12 at the transverse box edge; "
                              "increase grid.half_width or reduce profile.transverse_scale");
}

}  // namespace

Field make_profile(const Grid& g, const ProfileSpec& spec) {
    check_spec(g, spec);
    if (spec.family == ProfileFamily::zero) return Field(g);
    if (spec.family == ProfileFamily::custom_table) {
        Field f = read_custom_table(g, spec.table_path);
        return f * spec.amplitude;
    }
    std::vector<double> v(g.size());
    std::vector<double> tf(g.transverse_size());
    for (int j = 0; j < g.ny; ++j)
        for (int k = 0; k < g.nz; ++k) tf[j * g.nz + k] = transverse_factor(spec, g, j, k);
    const int ts = g.transverse_size();
    for (int i = 0; i < g.nx; ++i) {
        const double xf = spec.amplitude * x_factor(spec, g.L, g.x(i)).value;
        for (int t = 0; t < ts; ++t) v[static_cast<std::size_t>(i) * ts + t] = xf * tf[t];
    }
    return Field(g, std::move(v));
}

double profile_boundary_defect(const Grid& g, const ProfileSpec& spec) {
    if (spec.family == ProfileFamily::zero || spec.family == ProfileFamily::custom_table) return 0.0;
    const XFactor a = x_factor(spec, g.L, 0.0);
    const XFactor b = x_factor(spec, g.L, g.L);
    return std::abs(spec.amplitude) *
           std::max({std::abs(a.value), std::abs(b.value), std::abs(b.slope)});
}

Field read_custom_table(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("custom table: cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string expected = g.dim == 3 ? "x,y,z,value" : "x,y,value";
    if (line != expected)
        throw InvalidArgument("custom table: header must be '" + expected + "', got '" + line + "'");
    std::vector<double> v(g.size(), 0.0);
    std::vector<char> seen(g.size(), 0);
    std::size_t rows = 0;
    const int ncols = g.dim == 3 ? 4 : 3;
    auto node = [](double coord, double origin, double h, int n, const char* axis) {
        const double r = (coord - origin) / h;
        const long idx = std::lround(r);
        if (std::abs(r - idx) > 1e-6 || idx < 0 || idx >= n)
            throw InvalidArgument(std::string("custom table: ") + axis + " = " +
                                  std::to_string(coord) + " is not a grid node");
        return static_cast<int>(idx);
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> c;
        while (std::getline(ss, cell, ',')) {
            try {
                c.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InvalidArgument("custom table: bad number '" + cell + "'");
            }
        }
        if (static_cast<int>(c.size()) != ncols)
            throw InvalidArgument("custom table: expected " + std::to_string(ncols) +
                                  " columns per row, got " + std::to_string(c.size()));
        const int i = node(c[0], g.dx, g.dx, g.nx, "x");
        const int j = node(c[1], -g.half_width, g.dy, g.ny, "y");
        const int k = g.dim == 3 ? node(c[2], -g.half_width, g.dz, g.nz, "z") : 0;
        const std::size_t n = static_cast<std::size_t>(i) * g.transverse_size() + j * g.nz + k;
        if (seen[n]) throw InvalidArgument("custom table: duplicate node in row " + std::to_string(rows + 2));
        seen[n] = 1;
        v[n] = c.back();
        ++rows;
    }
    if (rows != g.size())
        throw InvalidArgument("custom table: wrong shape, " + std::to_string(rows) + " rows for " +
                              std::to_string(g.size()) + " grid nodes");
    return Field(g, std::move(v));
}

double discrete_bc_residual(const Field& u) {
    const Grid& g = u.grid();
    const int ts = g.transverse_size();
    double slope_max = 0.0, end_max = 0.0;
    for (int t = 0; t < ts; ++t) {
        auto at = [&](int i) { return i < 0 || i >= g.nx ? 0.0 : u[static_cast<std::size_t>(i) * ts + t]; };
        for (int i = 0; i < g.nx; ++i)
            slope_max = std::max(slope_max, std::abs(at(i + 1) - at(i - 1)) / (2 * g.dx));
        const double end = (at(g.nx - 2) - 4.0 * at(g.nx - 1)) / (2 * g.dx);
        end_max = std::max(end_max, std::abs(end));
    }
    return slope_max > 0.0 ? end_max / slope_max : 0.0;
}

bool bc_compliant(const Field& u, double tol) { return discrete_bc_residual(u) <= tol; }

double quadrature(const Field& f) {
    const Grid& g = f.grid();
    const int ts = g.transverse_size();
    double s = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) s += f[n];
    for (int t = 0; t < ts; ++t)
        s += 0.5 * (f[t] + f[static_cast<std::size_t>(g.nx - 1) * ts + t]);
    return s * g.dx * g.cell_area();
}

double quadrature_dirichlet(std::span<const double> density, const Grid& g) {
    double s = 0.0;
    for (double v : density) s += v;
    return s * g.dx * g.cell_area();
}

}  // namespace zk
