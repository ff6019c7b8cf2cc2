#include <doctest.h>

#include <cmath>

#include "sesf/errors.hpp"
#include "sesf/gallery.hpp"
#include "sesf/integrals.hpp"

using namespace sesf;

namespace {

const BreakFn no_breaks = [](double, double) { return std::vector<double>{}; };

}  // namespace

TEST_CASE("quadrature integrates affine log-integrands exactly") {
    QuadratureConfig q;
    const auto r = integrate_log([](double t) { return 800.0 - 40.0 * t; }, 0.0, 10.0, no_breaks, q);
    CHECK(r.converged);
    CHECK(r.log_value == doctest::Approx(800.0 - std::log(40.0)).epsilon(1e-12));
    CHECK(std::isinf(r.value));
}

TEST_CASE("quadrature handles smooth and improper integrands") {
    QuadratureConfig q;
    const auto s = integrate_log([](double t) { return std::log(std::sin(t) + 2.0); }, 0.0, 3.0, no_breaks, q);
    CHECK(s.value == doctest::Approx(6.0 + 1.0 - std::cos(3.0)).epsilon(1e-10));
    const auto g = integrate_log_tail([](double t) { return -t * t; }, 0.0, no_breaks, q);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(std::sqrt(std::acos(-1.0)) / 2.0).epsilon(1e-8));
    const auto d = integrate_log_tail([](double t) { return -std::log1p(t); }, 0.0, no_breaks, q);
    CHECK_FALSE(d.converged);
    CHECK_FALSE(d.note.empty());
    QuadratureConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("datko integrals of pure decay have closed forms") {
    const auto g = pure_decay_system(2.0);
    const std::vector<double> s{0.0, 3.0};
    const auto gap = datko_check(g.system, 1.0, s);
    REQUIRE(gap.points.size() == 2);
    for (const auto& p : gap.points) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_FALSE(gap.refuted);
    const auto plain = datko_check(g.system, 0.0, s);
    CHECK(plain.points[0].value == doctest::Approx(0.5).epsilon(1e-8));
    const auto abs = gain_integral(g.system, Weight::absolute(1.0), 1.0, 0.0, StateVector({1.0}));
    CHECK(abs.value == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    CHECK_THROWS_AS(gain_integral(g.system, Weight::gap(-1.0), 0.0, 0.0, StateVector({1.0})), InvalidArgument);
    CHECK(to_string(Weight::gap(1.5)) == "gap:1.5");
}

TEST_CASE("datko refutes systems without exponential decay") {
    for (const auto& g : {subexp_system(), growth_system()}) {
        const auto p = datko_check(g.system, 1.0, {0.0, 1.0});
        CHECK(p.refuted);
        REQUIRE(p.first_failure);
        CHECK(*p.first_failure == 0.0);
    }
}

TEST_CASE("the unweighted integral of a diagonal matrix cocycle takes its sup on the slow axis") {
    auto diag = [](double t, double s, double) {
        const double d[] = {std::exp(-0.5 * (t - s)), std::exp(-2.0 * (t - s))};
        return Matrix::diagonal(d);
    };
    SkewEvolutionSystem sys(EvolutionSemiflow::translation(), EvolutionCocycle::dense(2, diag), "diag");
    const auto p = datko_check(sys, 0.0, {0.0, 2.0});
    for (const auto& pt : p.points) CHECK(pt.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("rolewicz with the identity function reduces to datko") {
    const auto g = pure_decay_system(2.0);
    const std::vector<double> s{0.0, 1.0, 5.0};
    const auto r = rolewicz_check(g.system, RolewiczFunction::power(1.0), 1.0, s);
    const auto d = datko_check(g.system, 1.0, s);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(r.points[i].value == doctest::Approx(d.points[i].value));
    const auto sq = rolewicz_check(g.system, RolewiczFunction::power(2.0), 1.0, s);
    CHECK(sq.points[0].value == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(rolewicz_check(g.system, RolewiczFunction::power(2.0), 2.5, s).refuted);
    CHECK_THROWS_AS(parse_rolewicz("power:0.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_rolewicz("cubic"), InvalidArgument);
    CHECK(parse_rolewicz("saturating")(0.5) == doctest::Approx(0.25));
    RolewiczFunction bad{"bad", [](double log_r) { return -log_r; }};
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("bv-datko estimates N and respects its cap") {
    const auto pd = pure_decay_system(2.0);
    const auto r = bv_datko_check(pd.system, 1.0, 1.0, {0.0, 1.0, 4.0});
    CHECK(r.passed);
    CHECK(r.n_hat == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(bv_datko_check(pd.system, 1.0, 0.5, {0.0}), InvalidArgument);
    const auto es = exp_sin_system();
    CHECK(bv_datko_check(es.system, 0.5, 4.0, default_s_grid()).passed);
    const auto spike = spike_system();
    CHECK_FALSE(bv_datko_check(spike.system, 0.5, 0.5, default_s_grid()).passed);
}

TEST_CASE("barbashin functional closed form and edge cases") {
    const auto g = pure_decay_system(1.0);
    const StateVector v({1.0});
    // integral over [s, t] of e^{2 (t - tau)} e^{-(t - tau)} = e^3 - 1 for t - s = 3
    const auto r = barbashin_functional(g.system, 2.0, 3.0, 0.0, 0.0, v);
    CHECK(r.value == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-10));
    const auto z = barbashin_functional(g.system, 0.5, 4.0, 4.0, 0.0, v);
    CHECK(z.value == 0.0);
    CHECK_THROWS_AS(barbashin_functional(g.system, 0.5, 1.0, 2.0, 0.0, v), TimeOrderError);
    CHECK_THROWS_AS(barbashin_functional(g.system, 0.0, 3.0, 0.0, 0.0, v), InvalidArgument);
}

TEST_CASE("barbashin boundedness agrees with the classification") {
    const auto pd = pure_decay_system(2.0);
    const auto r = barbashin_check(pd.system, 1.0, default_t_grid(), default_grid(pd));
    CHECK(r.bounded);
    CHECK(r.consistent);
    REQUIRE(r.classified);
    CHECK(*r.classified == StabilityClass::UES);
    const auto gr = growth_system();
    CHECK_FALSE(barbashin_check(gr.system, 1.0, default_t_grid(), default_grid(gr)).bounded);
}

TEST_CASE("stability constructed from the unweighted integral") {
    const auto pd = pure_decay_system(2.0);
    const auto r = proposition_crosscheck(pd.system, default_grid(pd), default_s_grid());
    CHECK(r.applicable);
    REQUIRE(r.constructed);
    CHECK(r.passed);
    const auto gr = growth_system();
    const auto n = proposition_crosscheck(gr.system, default_grid(gr), default_s_grid());
    CHECK_FALSE(n.applicable);
    CHECK_FALSE(n.reason.empty());
}
