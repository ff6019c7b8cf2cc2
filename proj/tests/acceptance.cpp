#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sesf/config.hpp"
#include "sesf/gallery.hpp"
#include "sesf/integrals.hpp"
#include "sesf/report.hpp"
#include "sesf/stability.hpp"

using namespace sesf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) { return format_double(v); }

/// 1. Semiflow and cocycle laws on 1000 seeded samples.
void axioms() {
    const auto start = Clock::now();
    const auto samples = random_axiom_samples(1000, 100.0, 10.0, 2024);
    double worst = 0.0;
    std::size_t bad = 0;
    for (const auto& id : gallery_ids()) {
        const auto g = make_gallery_system(id);
        for (const auto& v : check_semiflow_axioms(g.system, samples, 0.0)) worst = std::max(worst, v.residual);
        for (const auto& v : check_cocycle_axioms(g.system, samples, 0.0)) worst = std::max(worst, v.residual);
        bad += check_semiflow_axioms(g.system, samples).size() + check_cocycle_axioms(g.system, samples).size();
    }
    const double secs = seconds_since(start);
    report(1, bad == 0 && worst < 1e-9 && secs < 5.0,
           "max residual " + fmt(worst) + " (< 1e-9), " + fmt(secs) + " s (< 5 s)");
}

/// 2. Separation chain on the default grids.
void separation() {
    struct Expect {
        const char* id;
        StabilityClass strongest;
        std::optional<StabilityClass> refuted;
    };
    const Expect chain[] = {
        {"pure-decay:2", StabilityClass::UES, std::nullopt},
        {"exp-sin", StabilityClass::BVES, StabilityClass::UES},
        {"spike", StabilityClass::ES, StabilityClass::BVES},
        {"subexp", StabilityClass::S, StabilityClass::ES},
        {"growth", StabilityClass::EG, StabilityClass::S},
    };
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& e : chain) {
        const auto g = make_gallery_system(e.id);
        const auto v = classify(g.system, default_grid(g));
        bool good = v.strongest && *v.strongest == e.strongest;
        if (e.refuted) good = good && v[*e.refuted].outcome == Outcome::Refuted && v[*e.refuted].witness;
        ok = ok && good;
        detail += std::string(e.id) + "->" + std::string(v.strongest ? to_string(*v.strongest) : "none") +
                  (e.refuted && v[*e.refuted].witness ? " (" + std::string(to_string(*e.refuted)) + " witness)" : "") +
                  "; ";
    }
    const double secs = seconds_since(start);
    report(2, ok && secs < 30.0, detail + fmt(secs) + " s (< 30 s)");
}

/// 3. The two example certificates on a grid of at least 10^4 points.
void certificates() {
    GridSpec spec;
    spec.uniform_step = 0.5;
    std::string detail;
    bool ok = true;
    {
        const auto g = exp_sin_system();
        const auto grid = default_grid(g, spec);
        const auto c = check_bves(g.system, BvesCertificate{0.0, 2.0, 3.0}, grid);
        ok = ok && c.passed && grid.pairs().size() >= 10000;
        detail += "exp-sin N=1 alpha=2 beta=3: " + std::to_string(c.violations) + " violations on " +
                  std::to_string(grid.pairs().size()) + " points";
        if (c.witness)
            detail += " (worst at t=" + fmt(c.witness->t) + " s=" + fmt(c.witness->s) + ", margin " +
                      fmt(c.witness->margin) + ")";
    }
    {
        const auto g = spike_system();
        const auto grid = default_grid(g, spec);
        const auto c = check_certificate(g.system, *g.known_certificate, grid);
        ok = ok && c.passed && grid.pairs().size() >= 10000;
        detail += "; spike N(s)=u(s)e^s alpha=1: " + std::to_string(c.violations) + " violations on " +
                  std::to_string(grid.pairs().size()) + " points";
    }
    report(3, ok, detail);
}

/// 4. Closed forms of the four functionals on pure decay.
void quadrature() {
    double worst_err = 0.0;
    double worst_ms = 0.0;
    const StateVector v({1.0});
    auto timed = [&](double expected, const std::function<double()>& f) {
        const auto start = Clock::now();
        const double got = f();
        worst_ms = std::max(worst_ms, 1e3 * seconds_since(start));
        worst_err = std::max(worst_err, std::abs(got - expected) / std::abs(expected));
    };
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto g = pure_decay_system(lambda);
        const double h = lambda / 2.0;
        const double s = 1.0;
        timed(2.0 / lambda, [&] { return gain_integral(g.system, Weight::gap(h), s, 0.0, v).value; });
        timed(std::exp(h * s) * 2.0 / lambda,
              [&] { return gain_integral(g.system, Weight::absolute(h), s, 0.0, v).value; });
        timed(2.0 / lambda, [&] { return bv_datko_check(g.system, h, h, {s}, {{0.0}, {v}}).n_hat; });
        timed(1.0 / lambda, [&] {
            return rolewicz_check(g.system, RolewiczFunction::power(2.0), h, {s}, {{0.0}, {v}}).points[0].value;
        });
        const double T = 3.0;
        timed((1.0 - std::exp(-h * T)) / h, [&] { return barbashin_functional(g.system, h, s + T, s, 0.0, v).value; });
    }
    report(4, worst_err < 1e-6 && worst_ms < 50.0,
           "max relative error " + fmt(worst_err) + " (< 1e-6), slowest integral " + fmt(worst_ms) + " ms (< 50 ms)");
}

/// 5. Cross-checks between the integral criteria and the classification.
void crosschecks() {
    const auto s_grid = default_s_grid();
    std::size_t compared = 0;
    std::size_t broken = 0;
    for (const auto& id : gallery_ids()) {
        const auto g = make_gallery_system(id);
        const auto weighted = datko_check(g.system, 0.5, s_grid);
        const auto plain = datko_check(g.system, 0.0, s_grid);
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            if (!weighted.points[i].converged || !plain.points[i].converged) continue;
            ++compared;
            if (weighted.points[i].log_value < plain.points[i].log_value - 1e-12) ++broken;
        }
    }
    const bool i_ok = compared > 0 && broken == 0;

    double worst = 0.0;
    for (const char* id : {"pure-decay:0.5", "pure-decay:2", "exp-sin"}) {
        const auto g = make_gallery_system(id);
        const auto r = rolewicz_check(g.system, RolewiczFunction::power(1.0), 0.5, s_grid);
        const auto d = datko_check(g.system, 0.5, s_grid);
        for (std::size_t i = 0; i < s_grid.size(); ++i)
            worst = std::max(worst, std::abs(r.points[i].value - d.points[i].value) / d.points[i].value);
    }
    const bool ii_ok = worst < 1e-10;

    bool iii_ok = true;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto g = pure_decay_system(lambda);
        iii_ok = iii_ok && proposition_crosscheck(g.system, default_grid(g), s_grid).passed;
    }

    std::size_t bounded = 0;
    bool iv_ok = true;
    for (const auto& id : gallery_ids()) {
        const auto g = make_gallery_system(id);
        const auto b = barbashin_check(g.system, 0.5, default_t_grid(), default_grid(g));
        if (b.bounded) ++bounded;
        iv_ok = iv_ok && b.consistent;
    }
    report(5, i_ok && ii_ok && iii_ok && iv_ok,
           std::string("(i) ") + (i_ok ? "ok" : "broken") + " on " + std::to_string(compared) + " points, " +
               std::to_string(broken) + " violations; (ii) max relative difference " + fmt(worst) +
               " (< 1e-10); (iii) " + (iii_ok ? "ok" : "failed") + "; (iv) " + (iv_ok ? "ok" : "failed") + ", " +
               std::to_string(bounded) + " bounded systems confirmed");
}

/// 6. Weakening passing certificates keeps them passing on random piecewise-linear cocycles.
void lattice() {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> rate(-0.5, 1.5);
    std::size_t checked = 0;
    std::size_t counterexamples = 0;
    for (int k = 0; k < 50; ++k) {
        const double r = rate(rng);
        std::ostringstream logu;
        logu << "nodes:";
        for (int i = 0; i <= 30; ++i) {
            if (i) logu << ';';
            const double t = 2.0 * i;
            logu << format_double(t) << ':' << format_double(i == 0 ? 0.0 : r * t + noise(rng));
        }
        AnalysisConfig c = parse_config("system=inline horizon=60 logu=" + logu.str());
        const auto g = build_system(c);
        const SampleGrid grid = build_grid(c, g);
        const GainTable gains(g.system, grid);
        const FitConfig fit = fit_config(c);

        std::vector<Certificate> passing;
        if (auto u = fit_ues(gains, fit); u.feasible) passing.emplace_back(u.certificate);
        if (auto b = fit_bves(gains, fit); b.feasible) passing.emplace_back(b.certificate);
        const auto p = fit_profiles(gains, fit);
        if (p.es.feasible) passing.emplace_back(p.es.certificate);
        if (p.stable.feasible) passing.emplace_back(p.stable.certificate);
        if (p.growth.feasible) passing.emplace_back(p.growth.certificate);

        for (Certificate cert : passing) {
            if (!check_certificate(gains, cert, fit).passed) continue;
            while (class_of(cert) != StabilityClass::EG) {
                cert = weaken(cert);
                ++checked;
                if (!check_certificate(gains, cert, fit).passed) ++counterexamples;
            }
        }
    }
    report(6, counterexamples == 0 && checked > 0,
           std::to_string(checked) + " weakened certificates checked, " + std::to_string(counterexamples) +
               " counterexamples");
}

/// 7. Two runs of the default config give identical report bytes outside the timing section.
void determinism() {
    std::ifstream in("configs/default.cfg");
    if (!in) {
        report(7, false, "configs/default.cfg not found");
        return;
    }
    std::stringstream text;
    text << in.rdbuf();
    const AnalysisConfig c = parse_config(text.str());
    const auto a = run(c);
    const auto b = run(c);
    const std::string ja = results_json(a).dump();
    const std::string jb = results_json(b).dump();
    const bool tables = to_table(a) == to_table(b);
    report(7, ja == jb && tables && a.all_completed(),
           std::to_string(ja.size()) + " report bytes, " + (ja == jb ? "identical" : "different") + ", table " +
               (tables ? "identical" : "different"));
}

}  // namespace

int main() {
    axioms();
    separation();
    certificates();
    quadrature();
    crosschecks();
    lattice();
    determinism();
    return failures == 0 ? 0 : 1;
}
