#include "sesf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sesf/errors.hpp"

namespace sesf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double tol_for(const FitConfig& cfg, double a, double b) {
    return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a), std::abs(b));
}

/// Running maxima over the near and far halves of some progress coordinate.
struct HeadTail {
    double head = kNegInf;
    double tail = kNegInf;

    void add(bool in_tail, double h) {
        if (in_tail)
            tail = std::max(tail, h);
        else
            head = std::max(head, h);
    }
    double max() const { return std::max(head, tail); }
    bool settles(const FitConfig& cfg) const {
        if (tail == kNegInf || head == kNegInf) return true;
        return tail <= head + tol_for(cfg, head, tail);
    }
};

/// Largest x in [lo, hi] with pred(x), for pred true on a prefix. pred(lo) must hold.
double bisect_max(const std::function<bool(double)>& pred, double lo, double hi, int steps) {
    if (pred(hi)) return hi;
    for (int k = 0; k < steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Smallest x in [lo, hi] with pred(x), for pred true on a suffix. pred(hi) must hold.
double bisect_min(const std::function<bool(double)>& pred, double lo, double hi, int steps) {
    if (pred(lo)) return lo;
    for (int k = 0; k < steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

double max_gap(const SampleGrid& g) {
    double r = 0.0;
    for (const auto& p : g.pairs()) r = std::max(r, p.t - p.s);
    return r;
}

double max_t(const SampleGrid& g) {
    double r = 0.0;
    for (const auto& p : g.pairs()) r = std::max(r, p.t);
    return r;
}

double max_s(const SampleGrid& g) {
    return g.groups().empty() ? 0.0 : g.groups().back().s;
}

// UES: h = lg + alpha (t - s), progress coordinate t - s.
HeadTail ues_envelope(const GainTable& gains, double alpha) {
    const auto& pairs = gains.grid().pairs();
    const double split = 0.5 * max_gap(gains.grid());
    HeadTail ht;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double r = pairs[i].t - pairs[i].s;
        ht.add(r > split, gains[i] + alpha * r);
    }
    return ht;
}

/// Per-s compensated maxima with a settle test over t inside each s group whose t-range covers at
/// least half of the largest gap.
struct GroupEnvelope {
    bool settles = true;
    std::vector<double> s;
    std::vector<double> max;
};

GroupEnvelope group_envelope(const GainTable& gains, const FitConfig& cfg,
                             const std::function<double(std::size_t)>& h) {
    const auto& pairs = gains.grid().pairs();
    const double min_span = 0.5 * max_gap(gains.grid());
    GroupEnvelope out;
    for (const SGroup& g : gains.grid().groups()) {
        const double span = pairs[g.end - 1].t - g.s;
        const double split = g.s + 0.5 * span;
        HeadTail ht;
        for (std::size_t i = g.begin; i < g.end; ++i) ht.add(pairs[i].t > split, h(i));
        /// Short groups near the horizon carry too little of the t-axis to judge a trend.
        if (span >= min_span && !ht.settles(cfg)) out.settles = false;
        out.s.push_back(g.s);
        out.max.push_back(ht.max());
    }
    return out;
}

GroupEnvelope es_envelope(const GainTable& gains, const FitConfig& cfg, double alpha) {
    const auto& pairs = gains.grid().pairs();
    return group_envelope(gains, cfg, [&](std::size_t i) { return gains[i] + alpha * pairs[i].t; });
}

GroupEnvelope eg_envelope(const GainTable& gains, const FitConfig& cfg, double omega) {
    const auto& pairs = gains.grid().pairs();
    return group_envelope(gains, cfg,
                          [&](std::size_t i) { return gains[i] - omega * (pairs[i].t - pairs[i].s); });
}

// BV on top of an ES envelope: B(s) = A(s) - beta s, progress coordinate s.
HeadTail bv_profile(const GroupEnvelope& a, double beta, double s_split) {
    HeadTail ht;
    for (std::size_t k = 0; k < a.s.size(); ++k) ht.add(a.s[k] > s_split, a.max[k] - beta * a.s[k]);
    return ht;
}

std::vector<double> clamp_nonnegative(std::vector<double> v) {
    for (double& x : v) x = std::max(0.0, x);
    return v;
}

double envelope_slope(const GainTable& gains) {
    const auto& pairs = gains.grid().pairs();
    const double rmax = max_gap(gains.grid());
    if (!(rmax > 0.0)) return 0.0;
    constexpr int kBins = 32;
    std::vector<double> env(kBins, kNegInf);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double r = pairs[i].t - pairs[i].s;
        const int b = std::min(kBins - 1, static_cast<int>(r / rmax * kBins));
        env[b] = std::max(env[b], gains[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int b = kBins / 2; b < kBins; ++b) {
        if (env[b] == kNegInf) continue;
        const double x = (b + 0.5) * rmax / kBins;
        sx += x;
        sy += env[b];
        sxx += x * x;
        sxy += x * env[b];
        ++n;
    }
    if (n < 2) return 0.0;
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

bool witness_precedes(const Witness& a, const Witness& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.t != b.t ? a.t < b.t : a.s < b.s;
}

}  // namespace

double rate_floor(const FitConfig& cfg, double horizon) {
    if (!cfg.horizon_floor || !(horizon > 0.0)) return cfg.alpha_min;
    return std::max(cfg.alpha_min, std::log1p(horizon) / horizon);
}

GainTable::GainTable(const SkewEvolutionSystem& sys, const SampleGrid& grid) : grid_(&grid) {
    const auto& pairs = grid.pairs();
    lg_.resize(pairs.size());
    xi_.resize(pairs.size());
    vi_.resize(pairs.size());
    const auto& xs = grid.x_samples();
    const auto& vs = grid.v_samples();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double best = kNegInf;
        for (std::size_t a = 0; a < xs.size(); ++a)
            for (std::size_t b = 0; b < (sys.is_scalar() ? 1 : vs.size()); ++b) {
                const double g = sys.log_gain(pairs[i].t, pairs[i].s, xs[a],
                                              sys.is_scalar() ? StateVector{1.0} : vs[b]);
                if (g > best) {
                    best = g;
                    xi_[i] = a;
                    vi_[i] = b;
                }
            }
        lg_[i] = best;
    }
}

CheckOutcome check_certificate(const GainTable& gains, const Certificate& cert, const FitConfig& cfg) {
    std::vector<double> s_samples;
    for (const SGroup& g : gains.grid().groups()) s_samples.push_back(g.s);
    validate(cert, s_samples);

    const auto& pairs = gains.grid().pairs();
    CheckOutcome out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double bound = certified_log_bound(cert, pairs[i].t, pairs[i].s);
        const double margin = gains[i] - bound;
        if (!(margin > tol_for(cfg, gains[i], bound))) continue;
        ++out.violations;
        Witness w{pairs[i].t, pairs[i].s, gains.x_at(i), gains.v_at(i), gains[i], bound, margin};
        if (!out.witness || witness_precedes(w, *out.witness)) out.witness = std::move(w);
    }
    out.passed = out.violations == 0;
    return out;
}

CheckOutcome check_certificate(const SkewEvolutionSystem& sys, const Certificate& cert, const SampleGrid& grid,
                               const FitConfig& cfg) {
    return check_certificate(GainTable(sys, grid), cert, cfg);
}

CheckOutcome check_ues(const SkewEvolutionSystem& sys, const UesCertificate& c, const SampleGrid& grid,
                       const FitConfig& cfg) {
    return check_certificate(sys, c, grid, cfg);
}
CheckOutcome check_bves(const SkewEvolutionSystem& sys, const BvesCertificate& c, const SampleGrid& grid,
                        const FitConfig& cfg) {
    return check_certificate(sys, c, grid, cfg);
}
CheckOutcome check_es(const SkewEvolutionSystem& sys, const EsCertificate& c, const SampleGrid& grid,
                      const FitConfig& cfg) {
    return check_certificate(sys, c, grid, cfg);
}
CheckOutcome check_stable(const SkewEvolutionSystem& sys, const StableCertificate& c, const SampleGrid& grid,
                          const FitConfig& cfg) {
    return check_certificate(sys, c, grid, cfg);
}
CheckOutcome check_eg(const SkewEvolutionSystem& sys, const GrowthCertificate& c, const SampleGrid& grid,
                      const FitConfig& cfg) {
    return check_certificate(sys, c, grid, cfg);
}

UesFit fit_ues(const GainTable& gains, const FitConfig& cfg) {
    UesFit fit;
    fit.envelope_slope = envelope_slope(gains);
    auto feasible = [&](double alpha) {
        const HeadTail ht = ues_envelope(gains, alpha);
        return ht.settles(cfg) && ht.max() <= cfg.log_n_cap;
    };
    if (!feasible(0.0)) {
        fit.reason = "log-gain envelope exceeds the log N cap or keeps growing with t - s";
        return fit;
    }
    const double alpha = bisect_max(feasible, 0.0, cfg.rate_cap, cfg.bisection_steps);
    const double floor = rate_floor(cfg, gains.grid().horizon());
    fit.certificate = {std::max(0.0, ues_envelope(gains, alpha).max()), alpha};
    if (alpha <= floor) {
        fit.reason = "best decay rate " + std::to_string(alpha) + " is not above the rate floor " +
                     std::to_string(floor);
        return fit;
    }
    fit.feasible = true;
    return fit;
}

BvesFit fit_bves(const GainTable& gains, const FitConfig& cfg) {
    BvesFit fit;
    const double s_split = 0.5 * max_s(gains.grid());
    auto feasible = [&](double alpha, double beta) {
        const GroupEnvelope a = es_envelope(gains, cfg, alpha);
        if (!a.settles) return false;
        const HeadTail b = bv_profile(a, beta, s_split);
        return b.settles(cfg) && b.max() <= cfg.log_n_cap;
    };
    const double beta_hi = cfg.rate_cap;
    if (!feasible(0.0, beta_hi)) {
        fit.reason = "no decay rate admits beta within the rate cap and log N within the cap";
        return fit;
    }
    const double alpha =
        bisect_max([&](double a) { return feasible(a, std::max(beta_hi, a)); }, 0.0, beta_hi, cfg.bisection_steps);
    const double beta =
        bisect_min([&](double b) { return feasible(alpha, b); }, alpha, std::max(beta_hi, alpha), cfg.bisection_steps);
    const GroupEnvelope a = es_envelope(gains, cfg, alpha);
    fit.certificate = {std::max(0.0, bv_profile(a, beta, s_split).max()), alpha, beta};
    const double floor = rate_floor(cfg, gains.grid().horizon());
    if (alpha <= floor) {
        fit.reason = "best decay rate " + std::to_string(alpha) + " is not above the rate floor " +
                     std::to_string(floor);
        return fit;
    }
    fit.feasible = true;
    return fit;
}

EsFit fit_es(const GainTable& gains, const FitConfig& cfg) {
    EsFit fit;
    auto settles = [&](double alpha) { return es_envelope(gains, cfg, alpha).settles; };
    if (!settles(0.0)) {
        fit.reason = "log-gain keeps growing in t for some s";
        return fit;
    }
    const double alpha = bisect_max(settles, 0.0, cfg.rate_cap, cfg.bisection_steps);
    GroupEnvelope a = es_envelope(gains, cfg, alpha);
    fit.certificate = {Profile::table(a.s, clamp_nonnegative(a.max), "fitted log N(s)"), alpha};
    const double floor = rate_floor(cfg, gains.grid().horizon());
    if (alpha <= floor) {
        fit.reason = "best decay rate " + std::to_string(alpha) + " is not above the rate floor " +
                     std::to_string(floor);
        return fit;
    }
    fit.feasible = true;
    return fit;
}

StableFit fit_stable(const GainTable& gains, const FitConfig& cfg) {
    StableFit fit;
    GroupEnvelope a = es_envelope(gains, cfg, 0.0);
    fit.certificate = {Profile::table(a.s, clamp_nonnegative(a.max), "fitted log N(s)")};
    if (!a.settles) {
        fit.reason = "log-gain keeps growing in t for some s";
        return fit;
    }
    fit.feasible = true;
    return fit;
}

GrowthFit fit_eg(const GainTable& gains, const FitConfig& cfg) {
    GrowthFit fit;
    auto settles = [&](double w) { return eg_envelope(gains, cfg, w).settles; };
    if (!settles(cfg.rate_cap)) {
        fit.reason = "log-gain grows faster than the rate cap";
        return fit;
    }
    const double omega = bisect_min(settles, 0.0, cfg.rate_cap, cfg.bisection_steps);
    GroupEnvelope a = eg_envelope(gains, cfg, omega);
    std::vector<double> m = clamp_nonnegative(a.max);
    for (std::size_t k = 1; k < m.size(); ++k) m[k] = std::max(m[k], m[k - 1]);
    fit.omega_rate = omega;
    fit.certificate = {Profile::table(a.s, std::move(m), "fitted log M(s)"),
                       Profile([omega](double r) { return omega * r; }, "omega(r) = rate * r")};
    fit.feasible = true;
    return fit;
}

ProfileFits fit_profiles(const GainTable& gains, const FitConfig& cfg) {
    return {fit_es(gains, cfg), fit_stable(gains, cfg), fit_eg(gains, cfg)};
}

UesFit fit_ues(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg) {
    return fit_ues(GainTable(sys, grid), cfg);
}
BvesFit fit_bves(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg) {
    return fit_bves(GainTable(sys, grid), cfg);
}
ProfileFits fit_profiles(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg) {
    return fit_profiles(GainTable(sys, grid), cfg);
}

Certificate refutation_candidate(const GainTable& gains, StabilityClass c, const FitConfig& cfg) {
    const auto& pairs = gains.grid().pairs();
    const double alpha = rate_floor(cfg, gains.grid().horizon());
    auto capped = [&](double v) { return std::clamp(v, 0.0, cfg.log_n_cap); };
    auto head_profile = [&](const std::function<double(std::size_t)>& h) {
        std::vector<double> s;
        std::vector<double> m;
        for (const SGroup& g : gains.grid().groups()) {
            const double split = 0.5 * (g.s + pairs[g.end - 1].t);
            double best = kNegInf;
            for (std::size_t i = g.begin; i < g.end && pairs[i].t <= split; ++i) best = std::max(best, h(i));
            s.push_back(g.s);
            m.push_back(std::max(0.0, best));
        }
        return std::pair{std::move(s), std::move(m)};
    };
    switch (c) {
        case StabilityClass::UES: {
            const double split = 0.5 * max_gap(gains.grid());
            double best = 0.0;
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const double r = pairs[i].t - pairs[i].s;
                if (r <= split) best = std::max(best, gains[i] + alpha * r);
            }
            return UesCertificate{capped(best), alpha};
        }
        case StabilityClass::BVES: {
            const double beta = std::max(cfg.rate_cap, alpha);
            const double split = 0.5 * max_t(gains.grid());
            double best = 0.0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (pairs[i].t <= split) best = std::max(best, gains[i] + alpha * pairs[i].t - beta * pairs[i].s);
            return BvesCertificate{capped(best), alpha, beta};
        }
        case StabilityClass::ES: {
            auto [s, m] = head_profile([&](std::size_t i) { return gains[i] + alpha * pairs[i].t; });
            return EsCertificate{Profile::table(std::move(s), std::move(m), "near-half log N(s)"), alpha};
        }
        case StabilityClass::S: {
            auto [s, m] = head_profile([&](std::size_t i) { return gains[i]; });
            return StableCertificate{Profile::table(std::move(s), std::move(m), "near-half log N(s)")};
        }
        case StabilityClass::EG: {
            const double omega = cfg.rate_cap;
            auto [s, m] = head_profile([&](std::size_t i) { return gains[i] - omega * (pairs[i].t - pairs[i].s); });
            for (std::size_t k = 1; k < m.size(); ++k) m[k] = std::max(m[k], m[k - 1]);
            return GrowthCertificate{Profile::table(std::move(s), std::move(m), "near-half log M(s)"),
                                     Profile([omega](double r) { return omega * r; }, "omega(r) = rate cap * r")};
        }
    }
    throw InvalidArgument("unknown stability class");
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Certified: return "certified";
        case Outcome::Refuted: return "refuted";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

LatticeVerdict classify(const GainTable& gains, const FitConfig& cfg) {
    LatticeVerdict v;
    v.horizon = gains.grid().horizon();
    v.rate_floor = rate_floor(cfg, v.horizon);

    const UesFit ues = fit_ues(gains, cfg);
    const BvesFit bves = fit_bves(gains, cfg);
    const ProfileFits prof = fit_profiles(gains, cfg);
    v.envelope_slope = ues.envelope_slope;

    struct Fitted {
        bool feasible;
        Certificate cert;
        std::string reason;
    };
    const std::array<Fitted, 5> fits{Fitted{ues.feasible, ues.certificate, ues.reason},
                                     Fitted{bves.feasible, bves.certificate, bves.reason},
                                     Fitted{prof.es.feasible, prof.es.certificate, prof.es.reason},
                                     Fitted{prof.stable.feasible, prof.stable.certificate, prof.stable.reason},
                                     Fitted{prof.growth.feasible, prof.growth.certificate, prof.growth.reason}};

    std::size_t strongest = fits.size();
    for (std::size_t k = 0; k < fits.size(); ++k)
        if (fits[k].feasible) {
            strongest = k;
            break;
        }
    if (strongest < fits.size()) v.strongest = static_cast<StabilityClass>(strongest);

    for (std::size_t k = 0; k < fits.size(); ++k) {
        ClassResult& r = v.classes[k];
        if (k >= strongest) {
            std::optional<Certificate> cert;
            if (fits[k].feasible) {
                cert = fits[k].cert;
            } else {
                cert = weaken(*v.classes[k - 1].certificate);
                r.derived = true;
            }
            const CheckOutcome chk = check_certificate(gains, *cert, cfg);
            r.certificate = cert;
            if (chk.passed) {
                r.outcome = Outcome::Certified;
            } else {
                r.outcome = Outcome::Inconclusive;
                r.witness = chk.witness;
                r.note = "fitted certificate failed its own check";
            }
            continue;
        }
        const Certificate cand = refutation_candidate(gains, static_cast<StabilityClass>(k), cfg);
        const CheckOutcome chk = check_certificate(gains, cand, cfg);
        r.certificate = cand;
        r.note = fits[k].reason;
        if (!chk.passed) {
            r.outcome = Outcome::Refuted;
            r.witness = chk.witness;
        } else {
            r.outcome = Outcome::Inconclusive;
        }
    }
    return v;
}

LatticeVerdict classify(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg) {
    return classify(GainTable(sys, grid), cfg);
}

std::vector<std::pair<double, double>> gap_envelope(const GainTable& gains) {
    const auto& pairs = gains.grid().pairs();
    std::vector<std::pair<double, double>> pts;
    pts.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) pts.emplace_back(pairs[i].t - pairs[i].s, gains[i]);
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& p : pts) {
        if (!out.empty() && out.back().first == p.first)
            out.back().second = std::max(out.back().second, p.second);
        else
            out.push_back(p);
    }
    return out;
}

}  // namespace sesf
