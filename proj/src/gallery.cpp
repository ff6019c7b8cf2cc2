#include "sesf/gallery.hpp"

#include <cmath>
#include <numbers>

#include "sesf/errors.hpp"

namespace sesf {

std::vector<std::pair<double, double>> WitnessFamily::materialize(double horizon) const {
    std::vector<std::pair<double, double>> out;
    for (int n = n_min; n <= n_max; ++n) {
        const auto p = point(n);
        if (p.first <= horizon) out.push_back(p);
    }
    return out;
}

GallerySystem translation_system(LogProfile u, RatioForm form, EvolutionSemiflow semiflow, std::string id) {
    if (!u.log_u) throw InvalidArgument("translation_system needs log u");
    const auto lu = u.log_u;
    std::function<double(double, double, double)> lg;
    switch (form) {
        case RatioForm::Plain:
            lg = [lu](double t, double s, double) { return lu(s) - lu(t); };
            break;
        case RatioForm::Decay:
            lg = [lu](double t, double s, double) { return (lu(s) + s) - (lu(t) + t); };
            break;
        case RatioForm::Growth:
            lg = [lu](double t, double s, double) { return (lu(s) - s) - (lu(t) - t); };
            break;
    }
    SkewEvolutionSystem sys(std::move(semiflow), EvolutionCocycle::scalar(std::move(lg), u.kinks), id);
    GallerySystem g{std::move(id), std::move(sys), std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::move(u)};
    return g;
}

GallerySystem exp_sin_system() {
    LogProfile u{[](double t) { return 2.0 * t - t * std::sin(t); }, {}, "2t - t sin t"};
    GallerySystem g = translation_system(std::move(u), RatioForm::Plain, EvolutionSemiflow::translation(), "exp-sin");
    g.expected_class = StabilityClass::BVES;
    g.known_certificate = BvesCertificate{0.0, 1.0, 3.0};
    g.claimed_certificate = BvesCertificate{0.0, 2.0, 3.0};
    constexpr double pi = std::numbers::pi;
    g.witness_family = WitnessFamily{"t = 2n pi + pi/2, s = 2n pi",
                                     [](int n) { return std::pair{2.0 * n * pi + pi / 2.0, 2.0 * n * pi}; }, 0, 40};
    return g;
}

double spike_log_u(double t, int nodes) {
    if (t <= 0.0) return 0.0;
    const double n = std::floor(t);
    if (n < 1.0) return t * 4.0;  // from (0, 0) up to (1, 1 * 4^1)
    if (n > nodes) return 0.0;
    const double width = std::ldexp(1.0, -2 * static_cast<int>(n));  // 4^{-n}
    const double peak = std::ldexp(n, 2 * static_cast<int>(n));      // n 4^n
    const double dx = t - n;
    if (dx <= width) return peak * (1.0 - dx / width);
    if (n == nodes) return 0.0;
    const double next_peak = std::ldexp(n + 1.0, 2 * static_cast<int>(n + 1.0));
    return next_peak * (dx - width) / (1.0 - width);
}

GallerySystem spike_system(int nodes) {
    if (nodes < 1 || nodes > kSpikeNodesMax)
        throw InvalidArgument("spike nodes must be in [1, " + std::to_string(kSpikeNodesMax) + "]");
    KinkFn kinks = [nodes](double lo, double hi) {
        std::vector<double> k;
        for (int n = 1; n <= nodes; ++n) {
            const double a = n;
            const double b = n + std::ldexp(1.0, -2 * n);
            if (a > lo && a < hi) k.push_back(a);
            if (b > lo && b < hi) k.push_back(b);
        }
        return k;
    };
    LogProfile u{[nodes](double t) { return spike_log_u(t, nodes); }, kinks,
                 "piecewise-linear log u: n 4^n at n, 0 at n + 4^-n"};
    GallerySystem g = translation_system(std::move(u), RatioForm::Decay, EvolutionSemiflow::constant(), "spike");
    g.expected_class = StabilityClass::ES;
    g.known_certificate =
        EsCertificate{Profile([nodes](double s) { return spike_log_u(s, nodes) + s; }, "log u(s) + s"), 1.0};
    g.witness_family = WitnessFamily{"t = n + 4^-n, s = n",
                                     [](int n) { return std::pair{n + std::ldexp(1.0, -2 * n), double(n)}; }, 1,
                                     nodes};
    return g;
}

GallerySystem subexp_system() {
    LogProfile u{[](double t) { return std::log1p(t); }, {}, "log(1 + t)"};
    GallerySystem g = translation_system(std::move(u), RatioForm::Plain, EvolutionSemiflow::translation(), "subexp");
    g.expected_class = StabilityClass::S;
    g.known_certificate = StableCertificate{Profile([](double s) { return std::log1p(s); }, "log(1 + s)")};
    return g;
}

GallerySystem growth_system() {
    LogProfile u{[](double t) { return std::log1p(t); }, {}, "log(1 + t)"};
    GallerySystem g = translation_system(std::move(u), RatioForm::Growth, EvolutionSemiflow::translation(), "growth");
    g.expected_class = StabilityClass::EG;
    g.known_certificate = GrowthCertificate{Profile([](double s) { return std::log1p(s); }, "log(1 + s)"),
                                            Profile([](double r) { return r; }, "omega(r) = r")};
    return g;
}

GallerySystem pure_decay_system(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("pure-decay needs lambda > 0");
    std::string id = "pure-decay:" + [&] {
        std::string s = std::to_string(lambda);
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.') s.pop_back();
        return s;
    }();
    SkewEvolutionSystem sys(EvolutionSemiflow::translation(),
                            EvolutionCocycle::scalar([lambda](double t, double s, double) { return -lambda * (t - s); }),
                            id);
    GallerySystem g{id, std::move(sys), StabilityClass::UES, UesCertificate{0.0, lambda}, std::nullopt, std::nullopt,
                    std::nullopt};
    return g;
}

GallerySystem make_gallery_system(const std::string& id) {
    if (id == "exp-sin") return exp_sin_system();
    if (id == "spike") return spike_system();
    if (id == "subexp") return subexp_system();
    if (id == "growth") return growth_system();
    const std::string prefix = "pure-decay:";
    if (id.rfind(prefix, 0) == 0) {
        const std::string arg = id.substr(prefix.size());
        std::size_t used = 0;
        double lambda = 0.0;
        try {
            lambda = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size()) throw InvalidArgument("bad pure-decay rate '" + arg + "'");
        return pure_decay_system(lambda);
    }
    throw InvalidArgument("unknown gallery system '" + id + "'");
}

std::vector<std::string> gallery_ids() { return {"pure-decay:2", "exp-sin", "spike", "subexp", "growth"}; }

}  // namespace sesf
