#include "sesf/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sesf/errors.hpp"

namespace sesf {

namespace {

void require_order(double t, double s) {
    if (!std::isfinite(t) || !std::isfinite(s) || s < 0.0 || t < s)
        throw TimeOrderError("time pair must satisfy t >= s >= 0 (got t=" + std::to_string(t) +
                             ", s=" + std::to_string(s) + ")");
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvaluationError(std::string(what) + " evaluated to a non-finite value");
    return v;
}

}  // namespace

TimePair::TimePair(double t, double s) : t_(t), s_(s) { require_order(t, s); }

EvolutionSemiflow EvolutionSemiflow::translation() {
    return {[](double t, double s, double x) { return t - s + x; }, "translation"};
}

EvolutionSemiflow EvolutionSemiflow::constant() {
    return {[](double, double, double x) { return x; }, "constant"};
}

EvolutionCocycle EvolutionCocycle::scalar(std::function<double(double, double, double)> log_factor, KinkFn kinks) {
    EvolutionCocycle c;
    c.kind = CocycleKind::ScalarLog;
    c.dim = 1;
    c.log_factor = std::move(log_factor);
    c.kinks = std::move(kinks);
    return c;
}

EvolutionCocycle EvolutionCocycle::dense(std::size_t dim, std::function<Matrix(double, double, double)> matrix) {
    if (dim == 0 || dim > kMaxDimension) throw InvalidArgument("matrix cocycle dimension out of range");
    EvolutionCocycle c;
    c.kind = CocycleKind::Matrix;
    c.dim = dim;
    c.matrix = std::move(matrix);
    return c;
}

SkewEvolutionSystem::SkewEvolutionSystem(EvolutionSemiflow semiflow, EvolutionCocycle cocycle, std::string label)
    : semiflow_(std::make_shared<const EvolutionSemiflow>(std::move(semiflow))),
      cocycle_(std::make_shared<const EvolutionCocycle>(std::move(cocycle))),
      label_(std::move(label)) {
    if (!semiflow_->evolve) throw InvalidArgument("semiflow has no evolution map");
    if (is_scalar() ? !cocycle_->log_factor : !cocycle_->matrix)
        throw InvalidArgument("cocycle has no evaluation map");
}

double SkewEvolutionSystem::evolve(double t, double s, double x) const {
    require_order(t, s);
    return checked(semiflow_->evolve(t, s, x), "semiflow");
}

double SkewEvolutionSystem::log_gain(double t, double s, double x, const StateVector& v) const {
    require_order(t, s);
    if (!(v.norm() > 0.0)) throw EvaluationError("log_gain needs a nonzero vector");
    double base;
    if (is_scalar()) {
        base = cocycle_->log_factor(t, s, x);
    } else {
        const StateVector w = cocycle_->matrix(t, s, x).apply(v);
        base = std::log(w.norm()) - std::log(v.norm());
    }
    checked(base, "cocycle log-gain");
    return shift_ == 0.0 ? base : base + shift_ * (t - s);
}

double SkewEvolutionSystem::log_gain(double t, double s, double x) const {
    return log_gain(t, s, x, StateVector::axis(dim(), 0));
}

double SkewEvolutionSystem::adjoint_log_gain(double t, double tau, double s, double x,
                                             const StateVector& vstar) const {
    require_order(t, tau);
    require_order(tau, s);
    if (!(vstar.norm() > 0.0)) throw EvaluationError("adjoint_log_gain needs a nonzero vector");
    const double y = evolve(tau, s, x);
    if (is_scalar()) return log_gain(t, tau, y, vstar);
    const StateVector w = cocycle_->matrix(t, tau, y).transposed().apply(vstar);
    const double base = checked(std::log(w.norm()) - std::log(vstar.norm()), "adjoint log-gain");
    return shift_ == 0.0 ? base : base + shift_ * (t - tau);
}

Matrix SkewEvolutionSystem::matrix(double t, double s, double x) const {
    require_order(t, s);
    if (is_scalar()) {
        const double f = std::exp(log_gain(t, s, x));
        return Matrix(1, {f});
    }
    const Matrix m = cocycle_->matrix(t, s, x);
    return shift_ == 0.0 ? m : m.scaled(std::exp(shift_ * (t - s)));
}

std::vector<double> SkewEvolutionSystem::kinks(double lo, double hi) const {
    if (!cocycle_->kinks || !(hi > lo)) return {};
    std::vector<double> k = cocycle_->kinks(lo, hi);
    std::erase_if(k, [&](double v) { return !(v > lo && v < hi); });
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

SkewEvolutionSystem SkewEvolutionSystem::shifted(double alpha) const {
    if (!std::isfinite(alpha)) throw InvalidArgument("shift rate must be finite");
    SkewEvolutionSystem out(*this);
    out.shift_ = shift_ + alpha;
    return out;
}

double evolve_point(const SkewEvolutionSystem& sys, double t, double s, BasePoint x) { return sys.evolve(t, s, x); }

double log_gain(const SkewEvolutionSystem& sys, double t, double s, BasePoint x, const StateVector& v) {
    return sys.log_gain(t, s, x, v);
}

double adjoint_log_gain(const SkewEvolutionSystem& sys, double t, double tau, double s, BasePoint x,
                        const StateVector& vstar) {
    return sys.adjoint_log_gain(t, tau, s, x, vstar);
}

SkewEvolutionSystem shift(const SkewEvolutionSystem& sys, double alpha) { return sys.shifted(alpha); }

SkewEvolutionSystem from_evolution_operator(const EvolutionOperator& e, std::string label) {
    EvolutionSemiflow phi = EvolutionSemiflow::translation();
    if (e.kind == CocycleKind::ScalarLog) {
        if (!e.log_factor) throw InvalidArgument("scalar evolution operator has no log factor");
        auto op = e.log_factor;
        KinkFn kinks;
        if (e.kinks) kinks = e.kinks;
        return {std::move(phi),
                EvolutionCocycle::scalar([op](double t, double s, double x) { return op(t - s + x, x); },
                                         std::move(kinks)),
                std::move(label)};
    }
    if (!e.matrix) throw InvalidArgument("matrix evolution operator has no matrix map");
    auto op = e.matrix;
    return {std::move(phi),
            EvolutionCocycle::dense(e.dim, [op](double t, double s, double x) { return op(t - s + x, x); }),
            std::move(label)};
}

double scaled_residual(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<AxiomViolation> check_semiflow_axioms(const SkewEvolutionSystem& sys,
                                                  const std::vector<AxiomSample>& samples, double tol) {
    std::vector<AxiomViolation> out;
    for (const AxiomSample& p : samples) {
        if (!(p.t >= p.s && p.s >= p.t0 && p.t0 >= 0.0)) throw TimeOrderError("axiom sample must have t >= s >= t0 >= 0");
        const double r1 = std::abs(sys.evolve(p.t, p.t, p.x) - p.x);
        if (r1 > tol) out.push_back({p, "es1", r1});
        const double r2 = std::abs(sys.evolve(p.t, p.s, sys.evolve(p.s, p.t0, p.x)) - sys.evolve(p.t, p.t0, p.x));
        if (r2 > tol) out.push_back({p, "es2", r2});
    }
    return out;
}

std::vector<AxiomViolation> check_cocycle_axioms(const SkewEvolutionSystem& sys,
                                                 const std::vector<AxiomSample>& samples, double tol) {
    std::vector<AxiomViolation> out;
    for (const AxiomSample& p : samples) {
        if (!(p.t >= p.s && p.s >= p.t0 && p.t0 >= 0.0)) throw TimeOrderError("axiom sample must have t >= s >= t0 >= 0");
        const double y = sys.evolve(p.s, p.t0, p.x);
        double r1;
        double r2;
        if (sys.is_scalar()) {
            r1 = std::abs(sys.log_gain(p.t, p.t, p.x));
            const double a = sys.log_gain(p.t, p.s, y);
            const double b = sys.log_gain(p.s, p.t0, p.x);
            const double c = sys.log_gain(p.t, p.t0, p.x);
            r2 = std::abs(a + b - c) / std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
        } else {
            r1 = sys.matrix(p.t, p.t, p.x).max_abs_diff(Matrix::identity(sys.dim()));
            const Matrix lhs = sys.matrix(p.t, p.s, y) * sys.matrix(p.s, p.t0, p.x);
            const Matrix rhs = sys.matrix(p.t, p.t0, p.x);
            r2 = lhs.max_abs_diff(rhs) / std::max(1.0, rhs.max_abs());
        }
        if (r1 > tol) out.push_back({p, "ec1", r1});
        if (r2 > tol) out.push_back({p, "ec2", r2});
    }
    return out;
}

std::vector<AxiomSample> random_axiom_samples(std::size_t count, double t_max, double x_max, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, t_max);
    std::uniform_real_distribution<double> ux(0.0, x_max);
    std::vector<AxiomSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double a[3] = {ut(rng), ut(rng), ut(rng)};
        std::sort(a, a + 3);
        out.push_back({a[2], a[1], a[0], ux(rng)});
    }
    return out;
}

}  // namespace sesf
