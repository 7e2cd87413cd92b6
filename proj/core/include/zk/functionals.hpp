#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zk/grid.hpp"
#include "zk/operators.hpp"

namespace zk {

struct FunctionalSnapshot {
    double t = 0.0;
    double l2 = 0.0;
    double weighted = 0.0;
    double h1 = 0.0;
    double h2_partial = 0.0;
    double bracket2 = 0.0;
    double trace0 = 0.0;
    double ut_l2 = 0.0;
    double ut_weighted = 0.0;
    double boundary_leak = 0.0;
    // Outflow at x = L of the discrete scheme; O(dx^2), not part of the CSV schema.
    double flux_right = 0.0;

    bool operator==(const FunctionalSnapshot&) const = default;
};

using FunctionalSeries = std::vector<FunctionalSnapshot>;

// Names accepted by series_values: the CSV columns plus the composites
// "h2" (h1 + h2_partial) and "h2_ut" (h1 + h2_partial + ut_l2).
std::vector<double> series_values(const FunctionalSeries& s, const std::string& name);
std::vector<double> series_times(const FunctionalSeries& s);

FunctionalSnapshot snapshot(const OperatorSet& ops, const Field& u, double eps, double t);

// Pieces of the snapshot, usable without building a Field.
double l2_norm2(const Grid& g, std::span<const double> u);
double weighted_norm2(const Grid& g, std::span<const double> u);
// ||u_x||^2 by forward differences over half nodes, walls included.
double dx_norm2(const Grid& g, std::span<const double> u);
double trace0_raw(const Grid& g, std::span<const double> u);
double flux_right_raw(const Grid& g, std::span<const double> u);
// x part of ||u||_[2]^2 consistent with the fourth-derivative closure.
double uxx_norm2(const Grid& g, std::span<const double> u);
double bracket2_raw(const OperatorSet& ops, std::span<const double> u, std::span<const cplx> uhat);

double j0_functional(const OperatorSet& ops, const Field& u0);

enum class ConstantSet { theorem, estimate4 };
std::string to_string(ConstantSet c);
ConstantSet constant_set_from_string(const std::string& s);

struct SmallnessReport {
    ConstantSet constants = ConstantSet::theorem;
    double L = 0.0;
    double norm_u0 = 0.0;
    double J0 = 0.0;
    double C1 = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double chi = 0.0;
    double threshold_u0 = 0.0;
    double threshold_J0 = 0.0;
    double margin_u0 = 0.0;  // ||u0||^4 / threshold_u0
    double margin_J0 = 0.0;  // J0^2 / threshold_J0
    bool geometric_ok = false;
    bool u0_ok = false;
    bool J0_ok = false;
    bool pass = false;

    bool operator==(const SmallnessReport&) const = default;
};

SmallnessReport smallness_check(double L, double norm_u0, double J0,
                                ConstantSet constants = ConstantSet::theorem);

// Rayleigh quotient ||v_x||^2 / ||v||^2 of interior values v on (0, L) with zero walls.
double steklov_ratio(std::span<const double> v, double L);

struct InterpolationResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double theta = 0.0;
    bool holds(double tol) const { return lhs <= rhs * (1.0 + tol); }
};

// ||u||_q against 4^theta ||grad u||^theta ||u||^(1-theta), theta = 3(1/2 - 1/q).
InterpolationResult interpolation_check(const OperatorSet& ops, const Field& u, double q);

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<double> f;
};

// RK4 on f' = -(alpha - k f^n) f.
OdeTrajectory integrate_comparison_ode(double alpha, double k, int n, double f0, double T,
                                       double dt = 1e-3);
bool ode_comparison_check(double alpha, double k, int n, double f0, double T);

}  // namespace zk
