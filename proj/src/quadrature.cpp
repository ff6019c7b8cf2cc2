#include "sesf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sesf/errors.hpp"

namespace sesf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// 15-point Kronrod rule on [-1, 1] with the embedded 7-point Gauss weights (0 at Kronrod-only nodes).
struct Rule {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

const Rule& rule() {
    static const Rule r = [] {
        const auto& ax = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
        const auto& kw = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
        const auto& gw = boost::math::quadrature::gauss<double, 7>::weights();
        Rule out;
        // Boost lists the non-negative half, 0 first; Gauss nodes sit at the even indices.
        std::size_t k = 0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double wg = i % 2 == 0 ? gw[i / 2] : 0.0;
            out.x[k] = ax[i];
            out.wk[k] = kw[i];
            out.wg[k] = wg;
            ++k;
            if (i == 0) continue;
            out.x[k] = -ax[i];
            out.wk[k] = kw[i];
            out.wg[k] = wg;
            ++k;
        }
        return out;
    }();
    return r;
}

/// Log-sum-exp accumulator.
class LogAccum {
public:
    void add(double log_v) {
        if (log_v == kNegInf) return;
        if (log_v > m_) {
            sum_ = sum_ * std::exp(m_ - log_v) + 1.0;
            m_ = log_v;
        } else {
            sum_ += std::exp(log_v - m_);
        }
    }
    double log() const { return m_ == kNegInf ? kNegInf : m_ + std::log(sum_); }

private:
    double m_ = kNegInf;
    double sum_ = 0.0;
};

/// Panel estimates scaled by exp(-lmax): integral ~ exp(lmax) * k.
struct Panel {
    double lmax = kNegInf;
    double k = 0.0;
    double g = 0.0;
    /// f is affine on the panel and k is exact.
    bool exact = false;
};

/// log of the integral of exp(la + (lb - la) u) over u in [0, 1], minus max(la, lb).
double log_exp_affine(double la, double lb) {
    const double d = std::abs(lb - la);
    if (d < 1e-12) return -0.5 * d;
    return std::log(-std::expm1(-d) / d);
}

struct Integrator {
    const LogIntegrand& f;
    const QuadratureConfig& q;
    LogAccum acc;
    std::size_t evaluations = 0;
    bool unresolved = false;

    Integrator(const LogIntegrand& fn, const QuadratureConfig& cfg) : f(fn), q(cfg) {}

    double eval(double t) {
        const double v = f(t);
        ++evaluations;
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw EvaluationError("non-finite integrand at " + std::to_string(t));
        return v;
    }

    Panel panel(double a, double b) {
        const Rule& r = rule();
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        std::array<double, 15> lv{};
        const double la = eval(a);
        const double lb = eval(b);
        Panel p;
        p.lmax = std::max(la, lb);
        bool affine = std::isfinite(la) && std::isfinite(lb);
        const double scale = 1e-12 * std::max({1.0, std::abs(la), std::abs(lb)});
        for (std::size_t i = 0; i < lv.size(); ++i) {
            lv[i] = eval(c + h * r.x[i]);
            p.lmax = std::max(p.lmax, lv[i]);
            if (affine) {
                const double line = 0.5 * (la + lb) + 0.5 * (lb - la) * r.x[i];
                affine = std::abs(lv[i] - line) <= scale;
            }
        }
        if (p.lmax == kNegInf) return p;
        if (affine) {
            p.exact = true;
            p.k = p.g = (b - a) * std::exp(log_exp_affine(la, lb));
            return p;
        }
        for (std::size_t i = 0; i < lv.size(); ++i) {
            const double e = std::exp(lv[i] - p.lmax);
            p.k += r.wk[i] * e;
            p.g += r.wg[i] * e;
        }
        p.k *= h;
        p.g *= h;
        return p;
    }

    /// Integrates one smooth piece, returning the largest log-integrand seen on accepted panels.
    double adapt(double a, double b, const Panel& p, int depth) {
        const double err = std::abs(p.k - p.g);
        const bool ok = p.exact || p.lmax == kNegInf || err <= q.rel_tol * p.k ||
                        std::log(err) + p.lmax <= std::log(q.abs_tol * (b - a));
        if (ok || depth >= q.max_depth) {
            if (!ok) unresolved = true;
            if (p.k > 0.0) acc.add(p.lmax + std::log(p.k));
            return p.lmax;
        }
        const double m = 0.5 * (a + b);
        const Panel left = panel(a, m);
        const Panel right = panel(m, b);
        return std::max(adapt(a, m, left, depth + 1), adapt(m, b, right, depth + 1));
    }

    /// Integrates [a, b] split at breakpoints and into panels of at most panel_width.
    double chunk(double a, double b, const BreakFn& breaks) {
        std::vector<double> pts{a};
        if (breaks)
            for (double k : breaks(a, b))
                if (k > a && k < b) pts.push_back(k);
        pts.push_back(b);
        std::sort(pts.begin(), pts.end());
        double lmax = kNegInf;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double lo = pts[i];
            const double hi = pts[i + 1];
            if (!(hi > lo)) continue;
            const auto n = static_cast<long>(std::ceil((hi - lo) / q.panel_width));
            for (long j = 0; j < n; ++j) {
                const double pa = lo + (hi - lo) * j / n;
                const double pb = j + 1 == n ? hi : lo + (hi - lo) * (j + 1) / n;
                lmax = std::max(lmax, adapt(pa, pb, panel(pa, pb), 0));
            }
        }
        return lmax;
    }

    void finish(IntegralReport& r) const {
        r.log_value = acc.log();
        r.value = std::exp(r.log_value);
        r.evaluations = evaluations;
    }
};

}  // namespace

void validate(const QuadratureConfig& q) {
    if (!(q.rel_tol > 0.0)) throw InvalidArgument("quadrature rel_tol must be > 0");
    if (!(q.abs_tol > 0.0)) throw InvalidArgument("quadrature abs_tol must be > 0");
    if (!(q.max_horizon > 0.0) || !std::isfinite(q.max_horizon))
        throw InvalidArgument("quadrature max_horizon must be > 0");
    if (!(q.panel_width > 0.0)) throw InvalidArgument("quadrature panel_width must be > 0");
    if (!(q.tail_window > 0.0)) throw InvalidArgument("quadrature tail_window must be > 0");
    if (q.tail_rate && !(*q.tail_rate > 0.0)) throw InvalidArgument("quadrature tail_rate must be > 0");
    if (q.max_depth < 0) throw InvalidArgument("quadrature max_depth must be >= 0");
}

IntegralReport integrate_log(const LogIntegrand& f, double a, double b, const BreakFn& breaks,
                             const QuadratureConfig& q) {
    validate(q);
    if (!(b >= a)) throw InvalidArgument("integration range must have b >= a");
    Integrator in(f, q);
    if (b > a) in.chunk(a, b, breaks);
    IntegralReport r;
    in.finish(r);
    r.truncation_T = b;
    r.tail_bound = 0.0;
    r.converged = !in.unresolved;
    if (in.unresolved) r.note = "panel refinement depth exhausted";
    return r;
}

IntegralReport integrate_log_tail(const LogIntegrand& f, double a, const BreakFn& breaks, const QuadratureConfig& q) {
    validate(q);
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("integration start must be finite and >= 0");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    Integrator in(f, q);
    IntegralReport r;
    const double end = a + q.max_horizon;
    const double w = q.tail_window;
    double t = a;
    double prev_max = kNegInf;
    bool have_prev = false;
    double log_tail = kInf;
    while (true) {
        const double hi = std::min(t + w, end);
        const double wmax = in.chunk(t, hi, breaks);
        t = hi;
        if (wmax == kNegInf) {
            log_tail = kNegInf;
        } else if (have_prev || q.tail_rate) {
            const double rate = q.tail_rate ? *q.tail_rate : (prev_max - wmax) / w;
            log_tail = rate > 0.0 ? wmax - std::log(rate) : kInf;
        }
        // Stop once the tail is below a tenth of max(rel_tol * value, abs_tol).
        const double log_target = std::log(0.1) + std::max(std::log(q.rel_tol) + in.acc.log(), std::log(q.abs_tol));
        if (log_tail <= log_target) {
            r.converged = !in.unresolved;
            if (in.unresolved) r.note = "panel refinement depth exhausted";
            break;
        }
        if (t >= end) {
            r.note = std::isfinite(log_tail) ? "tail bound above tolerance at max horizon"
                                             : "no decay detected before max horizon";
            break;
        }
        prev_max = wmax;
        have_prev = true;
    }
    in.finish(r);
    r.truncation_T = t;
    r.tail_bound = std::exp(log_tail);
    return r;
}

}  // namespace sesf
