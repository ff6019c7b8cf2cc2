#include "sesf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sesf/errors.hpp"
#include "sesf/gallery.hpp"

namespace sesf {

std::vector<StateVector> unit_directions(std::size_t dim, int random_directions, unsigned long long seed) {
    std::vector<StateVector> out;
    if (dim == 1) {
        out.emplace_back(std::vector<double>{1.0});
        return out;
    }
    for (std::size_t i = 0; i < dim; ++i) out.push_back(StateVector::axis(dim, i));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < random_directions; ++k) {
        std::vector<double> v(dim);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (double& x : v) {
                x = g(rng);
                n2 += x * x;
            }
        } while (n2 < 1e-12);
        out.push_back(StateVector(std::move(v)).normalized());
    }
    return out;
}

SampleGrid::SampleGrid(const GridSpec& spec, std::size_t dim) : spec_(spec), horizon_(spec.horizon) {
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) throw InvalidArgument("grid horizon must be > 0");
    if (spec.log_points < 0) throw InvalidArgument("grid log_points must be >= 0");
    if (spec.log_points > 0 && !(spec.log_min > 0.0 && spec.log_min < spec.horizon))
        throw InvalidArgument("grid log_min must be in (0, horizon)");
    if (spec.uniform_step < 0.0) throw InvalidArgument("grid uniform_step must be >= 0");
    if (spec.band < 0.0) throw InvalidArgument("grid band must be >= 0");
    if (spec.x_samples.empty()) throw InvalidArgument("grid needs at least one base point");

    std::vector<double> ts{0.0, spec.horizon};
    if (spec.log_points == 1) ts.push_back(spec.log_min);
    if (spec.log_points > 1) {
        const double a = std::log(spec.log_min);
        const double b = std::log(spec.horizon);
        for (int i = 0; i < spec.log_points; ++i)
            ts.push_back(std::exp(a + (b - a) * i / (spec.log_points - 1)));
    }
    if (spec.uniform_step > 0.0) {
        const auto n = static_cast<long>(std::floor(spec.horizon / spec.uniform_step));
        for (long i = 0; i <= n; ++i) ts.push_back(static_cast<double>(i) * spec.uniform_step);
    }
    for (double t : spec.extra_t)
        if (t >= 0.0 && t <= spec.horizon) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    t_values_ = ts;

    for (double s : ts)
        for (double t : ts)
            if (t >= s && (spec.band == 0.0 || t - s <= spec.band)) pairs_.push_back({t, s});
    for (const auto& [t, s] : spec.explicit_pairs) {
        if (!(t >= s && s >= 0.0)) throw TimeOrderError("explicit grid pair must have t >= s >= 0");
        if (t <= spec.horizon) pairs_.push_back({t, s});
    }
    std::sort(pairs_.begin(), pairs_.end(),
              [](const SamplePair& a, const SamplePair& b) { return a.s != b.s ? a.s < b.s : a.t < b.t; });
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end(),
                             [](const SamplePair& a, const SamplePair& b) { return a.s == b.s && a.t == b.t; }),
                 pairs_.end());

    for (std::size_t i = 0; i < pairs_.size();) {
        std::size_t j = i;
        while (j < pairs_.size() && pairs_[j].s == pairs_[i].s) ++j;
        groups_.push_back({pairs_[i].s, i, j});
        i = j;
    }

    x_samples_ = spec.x_samples;
    v_samples_ = unit_directions(dim, spec.random_directions, spec.seed);
}

SampleGrid default_grid(const GallerySystem& g, GridSpec base) {
    if (g.witness_family) {
        for (const auto& [t, s] : g.witness_family->materialize(base.horizon)) {
            base.extra_t.push_back(t);
            base.extra_t.push_back(s);
            base.explicit_pairs.emplace_back(t, s);
        }
    }
    return SampleGrid(base, g.system.dim());
}

}  // namespace sesf
