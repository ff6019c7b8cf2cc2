#include "sesf/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sesf/errors.hpp"

namespace sesf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Relative growth of a profile over the far half of its range that still counts as bounded.
constexpr double kBoundedSlack = 1e-3;

std::string format_number(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::vector<StateVector> directions(const SkewEvolutionSystem& sys, const IntegralSamples& samples) {
    if (!samples.v.empty()) {
        for (const auto& v : samples.v)
            if (v.dim() != sys.dim()) throw InvalidArgument("sample direction has the wrong dimension");
        return samples.v;
    }
    return unit_directions(sys.dim(), GridSpec{}.random_directions, GridSpec{}.seed);
}

BreakFn kink_breaks(const SkewEvolutionSystem& sys) {
    return [&sys](double lo, double hi) { return sys.kinks(lo, hi); };
}

/// Folds one sampled integral into the sup at a profile point.
void absorb(ProfilePoint& p, const IntegralReport& r, bool first) {
    if (first || r.log_value > p.log_value) {
        p.log_value = r.log_value;
        p.value = r.value;
    }
    if (!r.converged) {
        if (p.converged) p.note = r.note;
        p.converged = false;
    }
    p.truncation_T = std::max(p.truncation_T, r.truncation_T);
    p.evaluations += r.evaluations;
}

void close_point(CriterionProfile& prof, ProfilePoint p) {
    if (!p.converged && !prof.refuted) {
        prof.refuted = true;
        prof.first_failure = p.at;
    }
    prof.log_sup = std::max(prof.log_sup, p.log_value);
    prof.points.push_back(std::move(p));
}

/// Sup over samples of integrate_log_tail of log_integrand(t, s, x, v), one point per s.
CriterionProfile tail_profile(const SkewEvolutionSystem& sys, const std::vector<double>& s_grid,
                              const IntegralSamples& samples, const QuadratureConfig& q,
                              const std::function<double(double t, double s, double x, const StateVector& v)>& f) {
    validate(q);
    if (samples.x.empty()) throw InvalidArgument("integral samples need at least one base point");
    const auto vs = directions(sys, samples);
    const BreakFn breaks = kink_breaks(sys);
    CriterionProfile prof;
    for (double s : s_grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("integral s values must be finite and >= 0");
        ProfilePoint p;
        p.at = s;
        bool first = true;
        for (double x : samples.x)
            for (const auto& v : vs) {
                const auto r = integrate_log_tail([&](double t) { return f(t, s, x, v); }, s, breaks, q);
                absorb(p, r, first);
                first = false;
            }
        close_point(prof, std::move(p));
    }
    return prof;
}

bool settles(const std::vector<ProfilePoint>& pts) {
    if (pts.size() < 2) return true;
    const double split = 0.5 * (pts.front().at + pts.back().at);
    double head = kNegInf;
    double tail = kNegInf;
    for (const auto& p : pts) {
        double& side = p.at > split ? tail : head;
        side = std::max(side, p.log_value);
    }
    if (tail == kNegInf) return true;
    return tail <= head + std::log1p(kBoundedSlack);
}

}  // namespace

Weight Weight::gap(double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("gap weight rate must be >= 0");
    return {Kind::Gap, d};
}

Weight Weight::absolute(double a) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("absolute weight rate must be >= 0");
    return {Kind::Absolute, a};
}

double Weight::log_weight(double t, double s) const {
    switch (kind) {
        case Kind::None: return 0.0;
        case Kind::Gap: return rate * (t - s);
        case Kind::Absolute: return rate * t;
    }
    return 0.0;
}

std::string to_string(const Weight& w) {
    switch (w.kind) {
        case Weight::Kind::None: return "none";
        case Weight::Kind::Gap: return "gap:" + format_number(w.rate);
        case Weight::Kind::Absolute: return "absolute:" + format_number(w.rate);
    }
    return "none";
}

IntegralReport gain_integral(const SkewEvolutionSystem& sys, const Weight& w, double s, double x,
                             const StateVector& v, const QuadratureConfig& q) {
    if (!(w.rate >= 0.0)) throw InvalidArgument("weight rate must be >= 0");
    if (!(s >= 0.0)) throw InvalidArgument("gain_integral needs s >= 0");
    if (!(v.norm() > 0.0)) throw InvalidArgument("gain_integral needs a nonzero vector");
    return integrate_log_tail([&](double t) { return w.log_weight(t, s) + sys.log_gain(t, s, x, v); }, s,
                              kink_breaks(sys), q);
}

std::vector<double> default_s_grid() {
    std::vector<double> s;
    for (int i = 0; i <= 20; ++i) s.push_back(i);
    return s;
}

std::vector<double> default_t_grid() { return default_s_grid(); }

CriterionProfile datko_check(const SkewEvolutionSystem& sys, double d, const std::vector<double>& s_grid,
                             const IntegralSamples& samples, const QuadratureConfig& q) {
    const Weight w = d == 0.0 ? Weight::none() : Weight::gap(d);
    return tail_profile(sys, s_grid, samples, q, [&](double t, double s, double x, const StateVector& v) {
        return w.log_weight(t, s) + sys.log_gain(t, s, x, v);
    });
}

RolewiczFunction RolewiczFunction::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("Rolewicz power must be >= 1");
    return {"power:" + format_number(p), [p](double lr) { return p * lr; }};
}

RolewiczFunction RolewiczFunction::saturating() {
    return {"saturating", [](double lr) { return lr + std::min(lr, 0.0); }};
}

double RolewiczFunction::operator()(double r) const {
    if (r < 0.0) throw InvalidArgument("Rolewicz function needs r >= 0");
    return std::exp(log_f(std::log(r)));
}

RolewiczFunction parse_rolewicz(const std::string& text) {
    if (text == "saturating") return RolewiczFunction::saturating();
    const std::string prefix = "power:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string arg = text.substr(prefix.size());
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != arg.size()) throw InvalidArgument("bad Rolewicz power '" + arg + "'");
        return RolewiczFunction::power(p);
    }
    throw InvalidArgument("unknown Rolewicz function '" + text + "' (expected power:<p> or saturating)");
}

void validate(const RolewiczFunction& F) {
    if (!F.log_f) throw InvalidArgument("Rolewicz function '" + F.name + "' is empty");
    if (F.log_f(kNegInf) != kNegInf) throw InvalidArgument("Rolewicz function '" + F.name + "' needs F(0) = 0");
    double prev = kNegInf;
    for (int k = -12; k <= 12; ++k) {
        const double v = F.log_f(k * std::log(10.0) / 2.0);
        if (!(v > kNegInf) || std::isnan(v))
            throw InvalidArgument("Rolewicz function '" + F.name + "' must be positive for r > 0");
        if (v < prev) throw InvalidArgument("Rolewicz function '" + F.name + "' must be nondecreasing");
        prev = v;
    }
}

CriterionProfile rolewicz_check(const SkewEvolutionSystem& sys, const RolewiczFunction& F, double d,
                                const std::vector<double>& s_grid, const IntegralSamples& samples,
                                const QuadratureConfig& q) {
    validate(F);
    const Weight w = Weight::gap(d);
    const double log_f1 = F.log_f(0.0);
    return tail_profile(sys, s_grid, samples, q, [&](double t, double s, double x, const StateVector& v) {
        return F.log_f(w.log_weight(t, s) + sys.log_gain(t, s, x, v)) - log_f1;
    });
}

BvDatkoResult bv_datko_check(const SkewEvolutionSystem& sys, double a, double b, const std::vector<double>& s_grid,
                             const IntegralSamples& samples, const QuadratureConfig& q, double log_n_cap) {
    if (!(a > 0.0)) throw InvalidArgument("bv-datko needs a > 0");
    if (!(b >= a)) throw InvalidArgument("bv-datko needs b >= a");
    BvDatkoResult r;
    r.a = a;
    r.b = b;
    const Weight w = Weight::absolute(a);
    r.profile = tail_profile(sys, s_grid, samples, q, [&](double t, double s, double x, const StateVector& v) {
        return w.log_weight(t, s) + sys.log_gain(t, s, x, v);
    });
    for (const auto& p : r.profile.points) r.log_n_hat = std::max(r.log_n_hat, p.log_value - b * p.at);
    r.n_hat = std::exp(r.log_n_hat);
    if (r.profile.refuted) {
        r.note = "integral does not converge at s = " + format_number(*r.profile.first_failure);
    } else if (r.log_n_hat > log_n_cap) {
        r.note = "log N exceeds the cap " + format_number(log_n_cap);
    } else {
        r.passed = true;
    }
    return r;
}

IntegralReport barbashin_functional(const SkewEvolutionSystem& sys, double b, double t, double s, double x,
                                    const StateVector& vstar, const QuadratureConfig& q) {
    const TimePair tp(t, s);
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("barbashin needs b > 0");
    if (!(vstar.norm() > 0.0)) throw InvalidArgument("barbashin needs a nonzero vector");
    return integrate_log(
        [&](double tau) { return b * (t - tau) + sys.adjoint_log_gain(t, tau, s, x, vstar); }, tp.s(), tp.t(),
        kink_breaks(sys), q);
}

BarbashinResult barbashin_check(const SkewEvolutionSystem& sys, double b, const std::vector<double>& t_grid,
                                const SampleGrid& classify_grid, const IntegralSamples& samples,
                                const QuadratureConfig& q, const FitConfig& fit) {
    validate(q);
    if (samples.x.empty()) throw InvalidArgument("integral samples need at least one base point");
    std::vector<double> ts = t_grid;
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const auto vs = directions(sys, samples);

    BarbashinResult r;
    r.b = b;
    for (double t : ts) {
        ProfilePoint p;
        p.at = t;
        bool first = true;
        for (double s : ts) {
            if (s > t) break;
            for (double x : samples.x)
                for (const auto& v : vs) {
                    absorb(p, barbashin_functional(sys, b, t, s, x, v, q), first);
                    first = false;
                }
        }
        close_point(r.profile, std::move(p));
    }
    r.bounded = !r.profile.refuted && settles(r.profile.points);
    r.classified = classify(sys, classify_grid, fit).strongest;
    const bool es_or_stronger = r.classified && *r.classified <= StabilityClass::ES;
    r.consistent = !r.bounded || es_or_stronger;
    if (!r.bounded)
        r.note = "B(t) keeps growing over the grid; no conclusion drawn";
    else if (!es_or_stronger)
        r.note = "B(t) bounded but exponential stability was not certified on the grid";
    return r;
}

PropositionResult proposition_crosscheck(const SkewEvolutionSystem& sys, const SampleGrid& grid,
                                         const std::vector<double>& s_grid, const IntegralSamples& samples,
                                         const QuadratureConfig& q, const FitConfig& fit) {
    PropositionResult r;
    r.integral = datko_check(sys, 0.0, s_grid, samples, q);
    const GainTable gains(sys, grid);
    r.growth = fit_eg(gains, fit);

    if (r.growth.feasible) {
        const auto& ys = r.growth.certificate.log_m.ys();
        const auto& xs = r.growth.certificate.log_m.xs();
        r.log_m = ys.empty() ? 0.0 : ys.back();
        double head = 0.0;
        const double split = xs.empty() ? 0.0 : 0.5 * (xs.front() + xs.back());
        for (std::size_t k = 0; k < xs.size() && xs[k] <= split; ++k) head = std::max(head, ys[k]);
        r.growth_bounded = r.log_m <= head + fit.abs_tol + fit.rel_tol * std::abs(head) && r.log_m <= fit.log_n_cap;
    }

    std::vector<std::string> reasons;
    if (r.integral.refuted)
        reasons.push_back("integral of the gain does not converge at s = " + format_number(*r.integral.first_failure));
    if (!r.growth.feasible)
        reasons.push_back("no exponential growth certificate: " + r.growth.reason);
    else if (!r.growth_bounded)
        reasons.push_back("growth profile M(s) is unbounded on the grid");
    r.applicable = reasons.empty();
    for (std::size_t k = 0; k < reasons.size(); ++k) r.reason += (k ? "; " : "") + reasons[k];
    if (!r.applicable) return r;

    const Profile omega = r.growth.certificate.omega;
    const IntegralReport c = integrate_log([&](double u) { return -omega(u); }, 0.0, 1.0, {}, q);
    r.c_hat = c.value;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : r.integral.points) {
        const double a = p.log_value - std::log(r.c_hat);
        const double e = omega(p.at);
        const double hi = std::max(a, e);
        xs.push_back(p.at);
        ys.push_back(r.log_m + hi + std::log1p(std::exp(std::min(a, e) - hi)));
    }
    r.constructed = StableCertificate{Profile::table(std::move(xs), std::move(ys), "M (D(s) / c + e^omega(s))")};
    r.check = check_certificate(gains, *r.constructed, fit);
    r.passed = r.check->passed;
    if (!r.passed) r.reason = "constructed stability certificate fails on the grid";
    return r;
}

}  // namespace sesf
