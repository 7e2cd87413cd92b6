#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "zk/error.hpp"
#include "zk/functionals.hpp"

using namespace zk;
using std::numbers::pi;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

ProfileSpec spec_of(ProfileFamily f, double a = 1.0, double sigma = 1.0, int power = 2) {
    ProfileSpec s;
    s.family = f;
    s.amplitude = a;
    s.transverse_scale = sigma;
    s.power = power;
    return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Oracle {
    big C1, K1, K2, chi, thr_u0, thr_J0;
};

Oracle oracle(const big& L, const big& n, bool estimate4) {
    const big P = boost::multiprecision::pow(big(2), 16) * 27;
    const big pi50 = boost::math::constants::pi<big>();
    Oracle o;
    o.C1 = 2 + big(8192) / 3 * n * n * n * n;
    o.K1 = estimate4 ? P * boost::multiprecision::pow(1 + L, 4) * (big(8) / 25 * o.C1 * o.C1 + 1)
                     : P * (1 + L) * (big(8) / 25 * o.C1 + 1);
    o.K2 = boost::multiprecision::pow(big(2), 19) * 27 * boost::multiprecision::pow(1 + L, 6);
    o.chi = pi50 * pi50 / (2 * L * L * (1 + L));
    o.thr_u0 = pi50 * pi50 / (8 * o.K1 * L * L);
    o.thr_J0 = pi50 * pi50 / (200 * o.K2 * L * L);
    return o;
}

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> N;
    std::vector<double> v(g.size());
    for (double& x : v) x = N(rng);
    return Field(g, std::move(v));
}

}  // namespace

TEST_CASE("smallness constants in closed form") {
    const SmallnessReport r = smallness_check(1.0, 0.0, 0.0);
    CHECK(r.K2 == 905969664.0);
    CHECK(r.C1 == 2.0);
    const SmallnessReport q = smallness_check(pi / 2, 0.0, 0.0);
    CHECK(rel(q.chi, pi * pi / (2 * (pi / 2) * (pi / 2) * (1 + pi / 2))) <= 1e-15);
    CHECK(rel(q.K1, 65536.0 * 27.0 * (1 + pi / 2) * (16.0 / 25.0 + 1)) <= 1e-15);
    CHECK(q.pass);
}

TEST_CASE("smallness constants against an extended-precision oracle") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> UL(0.1, 2.0), Un(0.0, 0.05), UJ(0.0, 1e-4);
    for (int trial = 0; trial < 200; ++trial) {
        const double L = trial == 0 ? pi / 2 : UL(rng);
        const double n = trial == 0 ? 0.0 : Un(rng);
        const double J0 = UJ(rng);
        for (bool e4 : {false, true}) {
            const SmallnessReport r = smallness_check(L, n, J0, e4 ? ConstantSet::estimate4 : ConstantSet::theorem);
            const Oracle o = oracle(big(L), big(n), e4);
            CHECK(rel(r.C1, o.C1.convert_to<double>()) <= 1e-14);
            CHECK(rel(r.K1, o.K1.convert_to<double>()) <= 1e-14);
            CHECK(rel(r.K2, o.K2.convert_to<double>()) <= 1e-14);
            CHECK(rel(r.chi, o.chi.convert_to<double>()) <= 1e-14);
            CHECK(rel(r.threshold_u0, o.thr_u0.convert_to<double>()) <= 1e-14);
            CHECK(rel(r.threshold_J0, o.thr_J0.convert_to<double>()) <= 1e-14);
            const big n4 = big(n) * n * n * n;
            CHECK(r.u0_ok == (n4 <= o.thr_u0));
            CHECK(r.J0_ok == (big(J0) * J0 <= o.thr_J0));
        }
    }
}

TEST_CASE("smallness verdicts") {
    const SmallnessReport wide = smallness_check(pi, 0.0, 0.0);
    CHECK_FALSE(wide.geometric_ok);
    CHECK_FALSE(wide.pass);
    CHECK(smallness_check(pi / 2, 0.0, 0.0).geometric_ok);
    CHECK_THROWS_AS(smallness_check(0.0, 0.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(smallness_check(1.0, -1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(smallness_check(1.0, 0.0, std::nan("")), InvalidArgument);
}

TEST_CASE("smallness verdict is monotone in the data and in L") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> UL(0.2, 1.8);
    std::uniform_real_distribution<double> Ulog(-8, -2);
    for (int trial = 0; trial < 500; ++trial) {
        const double L = UL(rng), n = std::pow(10, Ulog(rng)), J = std::pow(10, Ulog(rng) - 2);
        for (auto cs : {ConstantSet::theorem, ConstantSet::estimate4}) {
            const bool base = smallness_check(L, n, J, cs).pass;
            if (!base) {
                CHECK_FALSE(smallness_check(L, 2 * n, J, cs).pass);
                CHECK_FALSE(smallness_check(L, n, 2 * J, cs).pass);
                CHECK_FALSE(smallness_check(L * 1.1, n, J, cs).pass);
            }
        }
    }
}

TEST_CASE("snapshot of zero is zero") {
    const Grid g = build_grid(pi / 2, 3, 8, 8, 8, 2.0);
    const OperatorSet ops(g);
    const FunctionalSnapshot s = snapshot(ops, Field(g), 0.1, 2.0);
    FunctionalSnapshot expect;
    expect.t = 2.0;
    CHECK(s == expect);
}

TEST_CASE("snapshot l2 against analytic and refined-grid oracles") {
    const double L = pi / 2, sigma = 1.0;
    const ProfileSpec sp = spec_of(ProfileFamily::separable_sine_gauss, 1.0, sigma);
    auto l2_at = [&](int nx) {
        const Grid g = build_grid(L, 2, nx, 128, 1, 6.0);
        const OperatorSet ops(g);
        return snapshot(ops, make_profile(g, sp), 0.0, 0.0).l2;
    };
    const double coarse = l2_at(128);
    const double fine = l2_at(4 * 129 - 1);
    // int x^2 (L-x)^4 dx = L^7 / 105, int exp(-2 y^2 / s^2) dy = s sqrt(pi / 2)
    const double exact = std::pow(L, 7) / 105.0 * sigma * std::sqrt(pi / 2);
    CHECK(rel(coarse, fine) <= 1e-6);
    CHECK(rel(coarse, exact) <= 1e-6);
}

TEST_CASE("weighted norm is bracketed by l2") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const Grid g = build_grid(0.3 + 0.1 * seed, 2, 16, 8, 1, 1.0);
        const Field u = random_field(g, seed);
        const double l2 = l2_norm2(g, u.values()), w = weighted_norm2(g, u.values());
        CHECK(l2 <= w);
        CHECK(w <= (1 + g.L) * l2);
    }
}

TEST_CASE("J0 is the initial weighted u_t norm and scales quadratically") {
    const Grid g = build_grid(pi / 2, 2, 64, 64, 1, 6.0);
    const OperatorSet ops(g);
    for (auto sp : {spec_of(ProfileFamily::separable_sine_gauss), spec_of(ProfileFamily::bump, 1, 1, 2),
                    spec_of(ProfileFamily::bump, 1, 1, 6)}) {
        sp.amplitude = 0.1;
        const Field u0 = make_profile(g, sp);
        const double j0 = j0_functional(ops, u0);
        CHECK(rel(j0, snapshot(ops, u0, 0.0, 0.0).ut_weighted) <= 1e-12);
        sp.amplitude = 1e-3;
        const double a = j0_functional(ops, make_profile(g, sp));
        sp.amplitude = 1e-4;
        const double b = j0_functional(ops, make_profile(g, sp));
        const double slope = std::log10(a / b);
        CHECK(slope >= 1.9);
        CHECK(slope <= 2.1);
    }
    CHECK(j0_functional(ops, Field(g)) == 0.0);
}

TEST_CASE("steklov ratio") {
    const double L = pi / 2;
    auto sampled = [&](int n, auto&& f) {
        std::vector<double> v(n);
        const double h = L / (n + 1);
        for (int i = 0; i < n; ++i) v[i] = f((i + 1) * h);
        return v;
    };
    for (int n : {64, 128, 256}) {
        const double h = L / (n + 1);
        const double lam1 = pi * pi / (L * L);
        const double r1 = steklov_ratio(sampled(n, [&](double x) { return std::sin(pi * x / L); }), L);
        CHECK(r1 >= lam1 * (1 - 10 * h * h));
        CHECK(r1 <= lam1 * (1 + 10 * h * h));
        const double r2 = steklov_ratio(sampled(n, [&](double x) { return std::sin(2 * pi * x / L); }), L);
        CHECK(std::abs(r2 / (4 * lam1) - 1) <= 10 * 4 * h * h);
        const double r3 = steklov_ratio(sampled(n, [&](double x) { return x * (L - x); }), L);
        CHECK(std::abs(r3 / (10 / (L * L)) - 1) <= 10 * h * h);
        CHECK(r3 > lam1);
    }
    CHECK_THROWS_AS(steklov_ratio(std::vector<double>(8, 0.0), L), InvalidArgument);
}

TEST_CASE("steklov bound over random vanishing profiles") {
    const double L = pi / 2;
    std::mt19937 rng(20240611);
    std::normal_distribution<double> N;
    std::uniform_int_distribution<int> Un(8, 300);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = Un(rng);
        const double h = L / (n + 1);
        std::vector<double> v(n);
        for (double& x : v) x = N(rng);
        CHECK(steklov_ratio(v, L) >= pi * pi / (L * L) * (1 - 10 * h * h / (L * L)));
    }
}

TEST_CASE("interpolation check") {
    const Grid g = build_grid(pi / 2, 3, 16, 16, 16, 3.0);
    const OperatorSet ops(g);
    const InterpolationResult z = interpolation_check(ops, Field(g), 4.0);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);

    const Field u = make_profile(g, spec_of(ProfileFamily::separable_sine_gauss, 1.0, 0.5));
    const InterpolationResult two = interpolation_check(ops, u, 2.0);
    CHECK(two.theta == 0.0);
    CHECK(two.rhs == doctest::Approx(std::sqrt(l2_norm2(g, u.values()))).epsilon(1e-14));
    CHECK(two.lhs == doctest::Approx(two.rhs).epsilon(1e-14));
    CHECK(two.holds(0.0));

    const InterpolationResult four = interpolation_check(ops, u, 4.0);
    CHECK(four.theta == doctest::Approx(0.75));
    CHECK(four.lhs <= four.rhs);

    CHECK_THROWS_AS(interpolation_check(ops, u, 7.0), InvalidArgument);
    const Grid g2 = build_grid(1.0, 2, 16, 16, 1, 3.0);
    CHECK_THROWS_AS(interpolation_check(OperatorSet(g2), Field(g2), 4.0), InvalidArgument);
}

TEST_CASE("comparison ODE") {
    CHECK(ode_comparison_check(1, 0, 1, 1, 20));
    const OdeTrajectory lin = integrate_comparison_ode(1, 0, 1, 1, 5);
    for (std::size_t s = 0; s < lin.t.size(); s += 97) CHECK(std::abs(lin.f[s] - std::exp(-lin.t[s])) <= 1e-10);

    CHECK(ode_comparison_check(1, 1, 1, 0.5, 20));
    const OdeTrajectory lg = integrate_comparison_ode(1, 1, 1, 0.5, 20);
    double worst = 0;
    for (std::size_t s = 0; s < lg.t.size(); ++s) {
        const double e = std::exp(-lg.t[s]);
        worst = std::max(worst, std::abs(lg.f[s] - 0.5 * e / (1 - 0.5 + 0.5 * e)));
    }
    CHECK(worst <= 1e-6);
    CHECK_THROWS_AS(ode_comparison_check(1, 1, 1, 2, 20), PreconditionFailure);
}

TEST_CASE("series accessors") {
    FunctionalSeries s(3);
    for (int n = 0; n < 3; ++n) {
        s[n].t = n;
        s[n].h1 = 1;
        s[n].h2_partial = 2;
        s[n].ut_l2 = 4;
    }
    CHECK(series_times(s) == std::vector<double>{0, 1, 2});
    CHECK(series_values(s, "h2") == std::vector<double>{3, 3, 3});
    CHECK(series_values(s, "h2_ut") == std::vector<double>{7, 7, 7});
    CHECK_THROWS_AS(series_values(s, "h3"), InvalidArgument);
    CHECK(to_string(constant_set_from_string("estimate4")) == "estimate4");
    CHECK_THROWS_AS(constant_set_from_string("other"), InvalidArgument);
}
