#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sesf/errors.hpp"
#include "sesf/gallery.hpp"
#include "sesf/stability.hpp"

using namespace sesf;
constexpr double pi = std::numbers::pi;

namespace {

/// Grid made of the given pairs only (plus t = s pairs on their times).
SampleGrid pairs_grid(double horizon, std::vector<std::pair<double, double>> pairs) {
    GridSpec spec;
    spec.horizon = horizon;
    spec.log_points = 0;
    spec.uniform_step = 0.0;
    spec.band = 1e-300;
    spec.explicit_pairs = std::move(pairs);
    return SampleGrid(spec, 1);
}

void check_witness_reproduces(const SkewEvolutionSystem& sys, const Certificate& c, const Witness& w) {
    const double lg = sys.log_gain(w.t, w.s, w.x, w.v);
    CHECK(lg == w.log_gain);
    CHECK(lg - certified_log_bound(c, w.t, w.s) == w.margin);
}

}  // namespace

TEST_CASE("grids are sorted by (s, t) and grouped by s") {
    GridSpec spec;
    spec.horizon = 10.0;
    spec.log_points = 4;
    spec.log_min = 0.1;
    spec.uniform_step = 5.0;
    const SampleGrid g(spec, 1);
    const auto& p = g.pairs();
    for (std::size_t i = 1; i < p.size(); ++i)
        CHECK((p[i - 1].s < p[i].s || (p[i - 1].s == p[i].s && p[i - 1].t < p[i].t)));
    for (const auto& pr : p) CHECK(pr.t >= pr.s);
    CHECK(g.groups().front().s == 0.0);
    CHECK_THROWS_AS(SampleGrid(GridSpec{.horizon = -1.0}, 1), InvalidArgument);
}

TEST_CASE("check_ues: pure decay with a too-fast claimed rate") {
    const auto g = pure_decay_system(2.0);
    GridSpec spec;
    spec.horizon = 1.0;
    spec.log_points = 0;
    spec.uniform_step = 0.0;
    const SampleGrid grid(spec, 1);
    const UesCertificate c{0.0, 3.0};
    const auto out = check_ues(g.system, c, grid);
    REQUIRE(out.witness);
    CHECK(out.witness->margin == doctest::Approx(1.0));
    CHECK(out.witness->t == 1.0);
    CHECK(out.witness->s == 0.0);
    check_witness_reproduces(g.system, c, *out.witness);
    CHECK(check_ues(g.system, UesCertificate{0.0, 2.0}, grid).passed);
}

TEST_CASE("exp-sin: the printed BV certificate fails at t = 5pi/2, s = 3pi/2") {
    const auto g = exp_sin_system();
    const auto grid = pairs_grid(10.0, {{5 * pi / 2, 3 * pi / 2}});
    const auto out = check_certificate(g.system, *g.claimed_certificate, grid);
    REQUIRE(out.witness);
    CHECK(out.witness->margin == doctest::Approx(5 * pi / 2).epsilon(1e-12));
    check_witness_reproduces(g.system, *g.claimed_certificate, *out.witness);
}

TEST_CASE("exp-sin: the corrected BV certificate holds and UES is refuted") {
    const auto g = exp_sin_system();
    const auto grid = default_grid(g);
    CHECK(check_certificate(g.system, *g.known_certificate, grid).passed);
    const auto ues = check_ues(g.system, UesCertificate{100.0, 0.1}, grid);
    CHECK_FALSE(ues.passed);
    const auto fit = fit_ues(g.system, grid);
    CHECK_FALSE(fit.feasible);
}

TEST_CASE("spike: known ES certificate holds, BV certificates fail at the nodes") {
    const auto g = spike_system();
    const auto grid = default_grid(g);
    CHECK(check_certificate(g.system, *g.known_certificate, grid).passed);
    const BvesCertificate bv{10.0, 1.0, 10.0};
    const auto out = check_bves(g.system, bv, grid);
    REQUIRE(out.witness);
    check_witness_reproduces(g.system, bv, *out.witness);
}

TEST_CASE("subexp is not exponentially stable and growth is not stable") {
    GridSpec spec;
    spec.horizon = 100.0;
    const auto sub = subexp_system();
    const auto es = check_es(sub.system, EsCertificate{Profile::constant(10.0), 0.5}, default_grid(sub, spec));
    CHECK_FALSE(es.passed);
    const auto gr = growth_system();
    const auto st = check_stable(gr.system, StableCertificate{Profile([](double s) { return s; }, "s")},
                                 default_grid(gr, spec));
    CHECK_FALSE(st.passed);
    CHECK(check_certificate(gr.system, *gr.known_certificate, default_grid(gr, spec)).passed);
    CHECK(check_certificate(sub.system, *sub.known_certificate, default_grid(sub, spec)).passed);
}

TEST_CASE("fitting pure decay recovers its constants") {
    const auto g = pure_decay_system(2.0);
    const auto grid = default_grid(g);
    const auto u = fit_ues(g.system, grid);
    REQUIRE(u.feasible);
    CHECK(u.certificate.alpha == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(u.certificate.log_n == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(u.envelope_slope == doctest::Approx(-2.0).epsilon(1e-2));
    const auto eg = fit_profiles(g.system, grid).growth;
    CHECK(eg.feasible);
    CHECK(eg.omega_rate == 0.0);
}

TEST_CASE("rate floor") {
    FitConfig cfg;
    CHECK(rate_floor(cfg, 200.0) == doctest::Approx(std::log(201.0) / 200.0));
    cfg.horizon_floor = false;
    CHECK(rate_floor(cfg, 200.0) == cfg.alpha_min);
}

TEST_CASE("classification of pure decay and growth") {
    const auto pd = pure_decay_system(2.0);
    const auto v = classify(pd.system, default_grid(pd));
    REQUIRE(v.strongest);
    CHECK(*v.strongest == StabilityClass::UES);
    for (auto c : kAllClasses) CHECK(v[c].outcome == Outcome::Certified);
    CHECK(v[StabilityClass::BVES].derived == false);

    const auto gr = growth_system();
    const auto w = classify(gr.system, default_grid(gr));
    REQUIRE(w.strongest);
    CHECK(*w.strongest == StabilityClass::EG);
    const auto& s = w[StabilityClass::S];
    CHECK(s.outcome == Outcome::Refuted);
    REQUIRE(s.witness);
    check_witness_reproduces(gr.system, *s.certificate, *s.witness);
}

TEST_CASE("gap envelope keeps the largest gain per gap") {
    const auto g = pure_decay_system(1.0);
    GridSpec spec;
    spec.horizon = 4.0;
    spec.log_points = 0;
    spec.uniform_step = 1.0;
    const SampleGrid grid(spec, 1);
    const auto env = gap_envelope(GainTable(g.system, grid));
    REQUIRE(env.size() == 5);
    for (const auto& [gap, lg] : env) CHECK(lg == doctest::Approx(-gap));
}
