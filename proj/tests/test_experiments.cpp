#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zk/error.hpp"
#include "zk/experiments.hpp"

using namespace zk;
using std::numbers::pi;

namespace {

std::pair<std::vector<double>, std::vector<double>> sampled(int n, double T, auto&& f) {
    std::vector<double> t(n), v(n);
    for (int k = 0; k < n; ++k) {
        t[k] = T * k / (n - 1);
        v[k] = f(t[k]);
    }
    return {t, v};
}

Scenario small_scenario(int nx, int ny, double T, double amplitude = 1e-5) {
    Scenario sc;
    sc.grid = build_grid(pi / 2, 2, nx, ny, 1, 6.0);
    sc.profile.family = ProfileFamily::bump;
    sc.profile.amplitude = amplitude;
    sc.profile.power = 2;
    sc.integrator.T = T;
    sc.integrator.diagnostic_stride = std::max(1, static_cast<int>(std::lround(0.1 / effective_dt(sc.integrator, sc.grid))));
    return sc;
}

}  // namespace

TEST_CASE("fit_decay on exact exponentials") {
    const auto [t, v] = sampled(50, 10.0, [](double s) { return 5 * std::exp(-0.3 * s); });
    const DecayFit f = fit_decay(t, v, 0.0, 10.0, "synthetic");
    CHECK(std::abs(f.fitted_rate - 0.3) <= 1e-9);
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.samples == 50);
    CHECK(f.functional_name == "synthetic");

    const auto [t2, v2] = sampled(50, 10.0, [](double s) { return 5 * std::exp(-0.3 * s) * (1 + 0.01 * std::sin(s)); });
    CHECK(std::abs(fit_decay(t2, v2, 0.0, 10.0).fitted_rate - 0.3) <= 0.01 * 0.3);

    const auto [t3, v3] = sampled(50, 10.0, [](double) { return 2.5; });
    CHECK(fit_decay(t3, v3, 0.0, 10.0).fitted_rate == 0.0);
}

TEST_CASE("fit_decay is invariant under rescaling") {
    const auto [t, v] = sampled(80, 8.0, [](double s) { return std::exp(-1.7 * s) * (2 + std::cos(3 * s)); });
    const double base = fit_decay(t, v, 1.0, 7.0).fitted_rate;
    for (double c : {1e-30, 0.5, 3.0, 1e40}) {
        std::vector<double> w(v);
        for (double& x : w) x *= c;
        CHECK(fit_decay(t, w, 1.0, 7.0).fitted_rate == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("fit_decay window handling") {
    auto [t, v] = sampled(40, 4.0, [](double s) { return std::exp(-s); });
    for (std::size_t k = 25; k < v.size(); ++k) v[k] = 0.0;
    const DecayFit f = fit_decay(t, v, 0.0, 4.0);
    CHECK(f.samples == 25);
    CHECK(f.t_end == doctest::Approx(t[24]));
    CHECK(f.fitted_rate == doctest::Approx(1.0));
    for (std::size_t k = 5; k < v.size(); ++k) v[k] = 0.0;
    CHECK_THROWS_AS(fit_decay(t, v, 0.0, 4.0), FitError);
    CHECK_THROWS_AS(fit_decay(t, v, 3.0, 1.0), InvalidArgument);
}

TEST_CASE("decay experiment on zero data is degenerate") {
    Scenario sc = small_scenario(32, 16, 1.0);
    sc.profile.family = ProfileFamily::zero;
    const DecayReport r = decay_experiment(sc);
    CHECK(r.degenerate);
    CHECK(r.fits.empty());
    CHECK(r.label == "certified");
    CHECK(r.status == RunStatus::completed);
}

TEST_CASE("decay experiment labels data outside the theorem") {
    Scenario sc = small_scenario(32, 16, 1.0, 1.0);
    sc.integrator.diagnostic_stride = 1;
    const DecayReport refused = decay_experiment(sc);
    CHECK_FALSE(refused.smallness.pass);
    CHECK(refused.label == "refused");
    CHECK(refused.step_count == 0);
    DecayOptions opt;
    opt.allow_outside_theorem = true;
    const DecayReport outside = decay_experiment(sc, opt);
    CHECK(outside.label == "outside-theorem");
    CHECK(outside.step_count > 0);
}

TEST_CASE("small data decays at least at the predicted rates") {
    const Scenario sc = small_scenario(64, 64, 5.0);
    const DecayReport r = decay_experiment(sc);
    REQUIRE(r.smallness.pass);
    REQUIRE(r.status == RunStatus::completed);
    CHECK(r.weighted_monotone);
    REQUIRE(r.fits.size() == 5);
    const double L = sc.grid.L;
    for (const auto& f : r.fits) {
        CAPTURE(f.functional_name);
        CHECK(f.fitted_rate >= 0.8 * f.predicted_rate);
        CHECK(f.r_squared >= 0.99);
    }
    CHECK(r.fits[0].predicted_rate == doctest::Approx(pi * pi / (L * L * (1 + L))));
}

TEST_CASE("epsilon convergence") {
    Scenario sc = small_scenario(48, 32, 0.5, 0.1);
    CHECK_THROWS_AS(epsilon_convergence(sc, {1e-2}), InvalidArgument);
    CHECK_THROWS_AS(epsilon_convergence(sc, {4e-3, 2e-3, 0.0}), InvalidArgument);

    sc.integrator.nonlinear = false;
    const ConvergenceReport lin = epsilon_convergence(sc, {4e-3, 2e-3, 1e-3});
    CHECK_FALSE(lin.degenerate);
    CHECK(lin.fitted_order >= 0.8);
    CHECK(lin.errors[0] > lin.errors[1]);
    CHECK(lin.errors[1] > lin.errors[2]);

    sc.profile.family = ProfileFamily::zero;
    const ConvergenceReport z = epsilon_convergence(sc, {4e-3, 2e-3, 1e-3});
    CHECK(z.degenerate);
    CHECK(std::isnan(z.fitted_order));
    CHECK(z == z);
}

TEST_CASE("perturbation experiment") {
    const Scenario sc = small_scenario(48, 32, 2.0);
    PerturbationOptions opt;
    opt.secondary.family = ProfileFamily::separable_sine_gauss;
    opt.secondary.amplitude = 1e-5;
    opt.delta = 0.0;
    const PerturbationReport zero = perturbation_experiment(sc, opt);
    for (double g : zero.gap) CHECK(g <= 1e-12 * zero.norm_u0_sq);

    opt.delta = 1e-3;
    const PerturbationReport p = perturbation_experiment(sc, opt);
    CHECK(p.status == RunStatus::completed);
    CHECK(p.gap0 > 0.0);
    CHECK(p.bound_satisfied);
    CHECK(p.within_constant);
    CHECK(p.times.size() == p.gap.size());
    CHECK(p.envelope.size() == p.gap.size());

    opt.swap = true;
    const PerturbationReport s = perturbation_experiment(sc, opt);
    REQUIRE(s.gap.size() == p.gap.size());
    for (std::size_t n = 0; n < p.gap.size(); ++n) CHECK(s.gap[n] == doctest::Approx(p.gap[n]).epsilon(1e-9));
}

TEST_CASE("lemma suite passes at default settings") {
    const LemmaReport r = lemma_suite();
    CHECK(r.total == 3 + 2 + 100 + 12 + 27 + 1);
    for (const auto& e : r.entries) {
        CAPTURE(e.name);
        CHECK(e.pass);
    }
    CHECK(r.all_pass());
}
