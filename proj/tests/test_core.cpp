#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sesf/certificate.hpp"
#include "sesf/core.hpp"
#include "sesf/errors.hpp"
#include "sesf/gallery.hpp"

using namespace sesf;
constexpr double pi = std::numbers::pi;

TEST_CASE("time pairs and state vectors validate their arguments") {
    CHECK_THROWS_AS(TimePair(1.0, 2.0), TimeOrderError);
    CHECK_THROWS_AS(TimePair(1.0, -0.5), TimeOrderError);
    CHECK(TimePair(3.0, 1.0).gap() == 2.0);
    CHECK_THROWS_AS(StateVector(std::vector<double>{}), InvalidArgument);
    CHECK_THROWS_AS(StateVector(std::vector<double>(9, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(StateVector({1.0, NAN}), InvalidArgument);
    CHECK(StateVector({3.0, 4.0}).norm() == doctest::Approx(5.0));
}

TEST_CASE("exp-sin log-gain at the documented points") {
    const auto g = exp_sin_system();
    CHECK(g.system.log_gain(pi / 2, 0.0, 0.0) == doctest::Approx(-pi / 2).epsilon(1e-12));
    CHECK(g.system.log_gain(5 * pi / 2, 2 * pi, 0.0) == doctest::Approx(3 * pi / 2).epsilon(1e-12));
    CHECK(g.system.log_gain(4.0, 4.0, 7.0) == 0.0);
    CHECK_THROWS_AS(g.system.log_gain(1.0, 2.0, 0.0), TimeOrderError);
}

TEST_CASE("spike log u and its node gain") {
    CHECK(spike_log_u(0.0) == 0.0);
    CHECK(spike_log_u(2.0) == 32.0);
    CHECK(spike_log_u(2.0625) == 0.0);
    CHECK(spike_log_u(0.5) == 2.0);
    const auto g = spike_system();
    CHECK(g.system.log_gain(2.0625, 2.0, 0.0) == doctest::Approx(31.9375));
    CHECK(g.system.evolve(9.0, 2.0, 1.5) == 1.5);
    const auto k = g.system.kinks(1.5, 2.5);
    REQUIRE(k.size() == 2);
    CHECK(k[0] == 2.0);
    CHECK(k[1] == 2.0625);
}

TEST_CASE("gallery identifiers") {
    CHECK(make_gallery_system("pure-decay:2").system.log_gain(3.0, 1.0, 0.0) == doctest::Approx(-4.0));
    CHECK(make_gallery_system("pure-decay:0.5").id == "pure-decay:0.5");
    CHECK_THROWS_AS(make_gallery_system("pure-decay:-1"), InvalidArgument);
    CHECK_THROWS_AS(make_gallery_system("pure-decay:x"), InvalidArgument);
    CHECK_THROWS_AS(make_gallery_system("nope"), InvalidArgument);
    CHECK_THROWS_AS(spike_system(0), InvalidArgument);
    CHECK(gallery_ids().size() == 5);
}

TEST_CASE("gallery systems satisfy the semiflow and cocycle laws") {
    const auto samples = random_axiom_samples(300, 60.0, 5.0, 7);
    for (const auto& id : gallery_ids()) {
        CAPTURE(id);
        const auto g = make_gallery_system(id);
        CHECK(check_semiflow_axioms(g.system, samples).empty());
        CHECK(check_cocycle_axioms(g.system, samples).empty());
    }
}

TEST_CASE("a broken semiflow is caught with the expected residual") {
    EvolutionSemiflow broken{[](double t, double, double x) { return t + x; }, "broken"};
    SkewEvolutionSystem sys(broken, EvolutionCocycle::scalar([](double, double, double) { return 0.0; }), "broken");
    const auto v = check_semiflow_axioms(sys, {{2.0, 1.0, 0.0, 0.0}});
    bool saw_es2 = false;
    for (const auto& e : v)
        if (e.law == "es2") {
            saw_es2 = true;
            CHECK(e.residual == doctest::Approx(1.0));
        }
    CHECK(saw_es2);
}

TEST_CASE("shift adds alpha (t - s) in log space") {
    const auto g = pure_decay_system(2.0);
    const auto s = shift(g.system, 0.5);
    CHECK(s.log_gain(4.0, 1.0, 0.0) == doctest::Approx(-6.0 + 1.5));
    CHECK(s.shifted(0.5).log_gain(4.0, 1.0, 0.0) == doctest::Approx(-3.0));
    CHECK(s.shift_rate() == 0.5);
}

TEST_CASE("evolution operators induce skew-evolution semiflows") {
    EvolutionOperator e;
    e.log_factor = [](double t, double s) { return -(t - s); };
    const auto sys = from_evolution_operator(e);
    CHECK(sys.evolve(5.0, 2.0, 1.0) == 4.0);
    // Phi(t, s, x) = E(t - s + x, x)
    CHECK(sys.log_gain(5.0, 2.0, 1.0) == doctest::Approx(-3.0));
    const auto samples = random_axiom_samples(100, 20.0, 3.0, 1);
    CHECK(check_cocycle_axioms(sys, samples).empty());
}

TEST_CASE("matrix cocycles: gains, adjoint and axioms") {
    auto diag = [](double t, double s, double) {
        const double d[] = {std::exp(-(t - s)), std::exp(-3.0 * (t - s))};
        return Matrix::diagonal(d);
    };
    SkewEvolutionSystem sys(EvolutionSemiflow::translation(), EvolutionCocycle::dense(2, diag), "diag");
    CHECK(sys.log_gain(3.0, 1.0, 0.0, StateVector({1.0, 0.0})) == doctest::Approx(-2.0));
    CHECK(sys.log_gain(3.0, 1.0, 0.0, StateVector({0.0, 2.0})) == doctest::Approx(-6.0));
    CHECK(check_cocycle_axioms(sys, random_axiom_samples(100, 10.0, 2.0, 3)).empty());

    auto shear = [](double, double, double) { return Matrix(2, {1.0, 1.0, 0.0, 1.0}); };
    SkewEvolutionSystem sh(EvolutionSemiflow::translation(), EvolutionCocycle::dense(2, shear), "shear");
    const StateVector v({0.0, 1.0});
    CHECK(sh.log_gain(2.0, 1.0, 0.0, v) == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(sh.adjoint_log_gain(2.0, 1.5, 1.0, 0.0, v) == doctest::Approx(0.0));
    CHECK_THROWS_AS(sh.log_gain(2.0, 1.0, 0.0, StateVector({1.0, 0.0, 0.0})), InvalidArgument);
}

TEST_CASE("profiles interpolate tables and hold their ends") {
    const auto p = Profile::table({0.0, 1.0, 3.0}, {0.0, 2.0, 4.0});
    CHECK(p(0.5) == doctest::Approx(1.0));
    CHECK(p(2.0) == doctest::Approx(3.0));
    CHECK(p(1.0) == 2.0);
    CHECK(p(10.0) == 4.0);
    CHECK(Profile::constant(1.5)(123.0) == 1.5);
}

TEST_CASE("certificates validate their constants") {
    CHECK_THROWS_AS(validate(UesCertificate{0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(validate(UesCertificate{-0.1, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(validate(BvesCertificate{0.0, 2.0, 1.0}), InvalidArgument);
    CHECK_NOTHROW(validate(BvesCertificate{0.0, 1.0, 3.0}));
    CHECK_THROWS_AS(validate(EsCertificate{Profile::constant(0.0), -1.0}), InvalidArgument);
    CHECK_THROWS_AS(validate(StableCertificate{Profile::constant(-1.0)}, {0.0}), InvalidArgument);
    CHECK(parse_class("bves") == StabilityClass::BVES);
    CHECK(!parse_class("XYZ"));
}

TEST_CASE("weakening keeps the certified bound") {
    const UesCertificate u{0.5, 2.0};
    const auto b = weaken(u);
    CHECK(b.alpha == 2.0);
    CHECK(b.beta == 2.0);
    const auto e = weaken(b);
    const auto s = weaken(e);
    const auto g = weaken(s);
    for (double sv : {0.0, 1.0, 7.5})
        for (double gap : {0.0, 0.3, 5.0}) {
            const double t = sv + gap;
            const double lu = certified_log_bound(u, t, sv);
            CHECK(certified_log_bound(b, t, sv) == doctest::Approx(lu));
            CHECK(certified_log_bound(e, t, sv) == doctest::Approx(lu));
            CHECK(certified_log_bound(s, t, sv) >= lu);
            CHECK(certified_log_bound(g, t, sv) >= certified_log_bound(s, t, sv) - 1e-12);
        }
    CHECK(class_of(weaken(Certificate{g})) == StabilityClass::EG);
}
