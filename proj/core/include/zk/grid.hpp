#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace zk {

struct Grid {
    double L = 1.0;
    int dim = 2;
    int nx = 0;
    int ny = 0;
    int nz = 1;              // 1 when dim == 2
    double half_width = 1.0; // transverse box is (-half_width, half_width)
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;         // 0 when dim == 2

    int transverse_size() const { return ny * nz; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * transverse_size(); }
    double x(int i) const { return (i + 1) * dx; }
    double y(int j) const { return -half_width + j * dy; }
    double z(int k) const { return dim == 3 ? -half_width + k * dz : 0.0; }
    // Measure of one transverse cell (dy, or dy*dz).
    double cell_area() const { return dim == 3 ? dy * dz : dy; }
    double transverse_measure() const;

    bool operator==(const Grid&) const = default;
};

Grid build_grid(double L, int dim, int nx, int ny, int nz, double half_width);

// Grid function over interior x nodes times transverse nodes.
// Layout: index = i * transverse_size() + j * nz + k.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& g);  // zero field
    Field(const Grid& g, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t n) const { return values_[n]; }
    double at(int i, int j, int k = 0) const {
        return values_[static_cast<std::size_t>(i) * grid_.transverse_size() + j * grid_.nz + k];
    }

    Field operator+(const Field& o) const;
    Field operator-(const Field& o) const;
    Field operator*(double a) const;
    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator*(double a, const Field& f);

enum class ProfileFamily { zero, separable_sine_gauss, bump, custom_table };

std::string to_string(ProfileFamily f);
ProfileFamily profile_family_from_string(const std::string& s);

struct ProfileSpec {
    ProfileFamily family = ProfileFamily::zero;
    double amplitude = 1.0;
    double transverse_scale = 1.0;  // sigma in exp(-(y^2+z^2)/sigma^2)
    int power = 2;                  // bump: sin^power(pi x / L)
    double center_y = 0.0;
    double center_z = 0.0;
    std::string table_path;         // custom-table
};

Field make_profile(const Grid& g, const ProfileSpec& spec);

// Node values from a CSV with header x,y[,z],value; every grid node must appear once.
Field read_custom_table(const Grid& g, const std::string& path);

// Analytic boundary defect max(|u0(0)|, |u0(L)|, |u0_x(L)|) of the x-factor of a
// built-in family, scaled by the amplitude.
double profile_boundary_defect(const Grid& g, const ProfileSpec& spec);

// Largest relative one-sided slope at x = L, an O(dx^2) discrete check of u_x(L) = 0.
double discrete_bc_residual(const Field& u);
bool bc_compliant(const Field& u, double tol);

// Trapezoid in x and rectangle rule in y, z. Wall values are taken from the
// nearest interior node, so constants integrate exactly.
double quadrature(const Field& f);

// Same rule for densities that vanish at both walls (wall terms are zero).
double quadrature_dirichlet(std::span<const double> density, const Grid& g);

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace zk
