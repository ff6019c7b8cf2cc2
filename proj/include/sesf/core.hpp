#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sesf/linalg.hpp"

namespace sesf {

/// Base space point. The base space is R+ in every supported system; its metric is never used.
using BasePoint = double;

/// An ordered pair of times with t >= s >= 0.
class TimePair {
public:
    /// Throws TimeOrderError unless t >= s >= 0 and both are finite.
    TimePair(double t, double s);

    double t() const noexcept { return t_; }
    double s() const noexcept { return s_; }
    double gap() const noexcept { return t_ - s_; }

private:
    double t_;
    double s_;
};

/// Map (t, s, x) -> phi(t, s, x) on the base space.
struct EvolutionSemiflow {
    std::function<double(double t, double s, double x)> evolve;
    std::string name;

    /// phi(t, s, x) = t - s + x
    static EvolutionSemiflow translation();
    /// phi(t, s, x) = x
    static EvolutionSemiflow constant();
};

enum class CocycleKind { ScalarLog, Matrix };

/// Returns the times in the open interval (lo, hi) where a cocycle's log-gain has kinks.
using KinkFn = std::function<std::vector<double>(double lo, double hi)>;

/// An evolution cocycle, either scalar (stored as the log of its factor) or a dense matrix family.
struct EvolutionCocycle {
    CocycleKind kind = CocycleKind::ScalarLog;
    std::size_t dim = 1;
    /// log Phi(t, s, x) for scalar cocycles.
    std::function<double(double t, double s, double x)> log_factor;
    /// Phi(t, s, x) for matrix cocycles.
    std::function<Matrix(double t, double s, double x)> matrix;
    /// Optional kink locations (in either time argument) for quadrature panel breaks.
    KinkFn kinks;

    static EvolutionCocycle scalar(std::function<double(double, double, double)> log_factor, KinkFn kinks = {});
    static EvolutionCocycle dense(std::size_t dim, std::function<Matrix(double, double, double)> matrix);
};

/// An evolution operator E(t, s) on V, scalar (log form) or matrix.
struct EvolutionOperator {
    CocycleKind kind = CocycleKind::ScalarLog;
    std::size_t dim = 1;
    std::function<double(double t, double s)> log_factor;
    std::function<Matrix(double t, double s)> matrix;
    KinkFn kinks;
};

/// The pair (phi, Phi). Immutable after construction and safe to share between threads.
class SkewEvolutionSystem {
public:
    SkewEvolutionSystem(EvolutionSemiflow semiflow, EvolutionCocycle cocycle, std::string label);

    const std::string& label() const noexcept { return label_; }
    CocycleKind kind() const noexcept { return cocycle_->kind; }
    bool is_scalar() const noexcept { return cocycle_->kind == CocycleKind::ScalarLog; }
    std::size_t dim() const noexcept { return cocycle_->dim; }
    /// Accumulated exponential shift rate (zero for an unshifted system).
    double shift_rate() const noexcept { return shift_; }

    /// phi(t, s, x). Throws TimeOrderError unless t >= s >= 0.
    double evolve(double t, double s, double x) const;

    /// log(|Phi(t,s,x) v| / |v|). For scalar cocycles v is ignored apart from the zero check.
    double log_gain(double t, double s, double x, const StateVector& v) const;
    /// Scalar shortcut; v is taken as a unit vector of the system's dimension (axis 0).
    double log_gain(double t, double s, double x) const;

    /// log(|Phi(t, tau, phi(tau, s, x))^T v*| / |v*|).
    double adjoint_log_gain(double t, double tau, double s, double x, const StateVector& vstar) const;

    /// Phi(t, s, x) as a matrix (1x1 for scalar cocycles; may overflow for large gains).
    Matrix matrix(double t, double s, double x) const;

    /// Kink times of the log-gain in (lo, hi), sorted; empty when unknown or smooth.
    std::vector<double> kinks(double lo, double hi) const;

    /// Same system with log-gain increased by alpha (t - s).
    SkewEvolutionSystem shifted(double alpha) const;

private:
    std::shared_ptr<const EvolutionSemiflow> semiflow_;
    std::shared_ptr<const EvolutionCocycle> cocycle_;
    std::string label_;
    double shift_ = 0.0;
};

// Free-function forms of the system operations.

double evolve_point(const SkewEvolutionSystem& sys, double t, double s, BasePoint x);
double log_gain(const SkewEvolutionSystem& sys, double t, double s, BasePoint x, const StateVector& v);
double adjoint_log_gain(const SkewEvolutionSystem& sys, double t, double tau, double s, BasePoint x,
                        const StateVector& vstar);
SkewEvolutionSystem shift(const SkewEvolutionSystem& sys, double alpha);

/// System with phi(t,s,x) = t - s + x and Phi(t,s,x) = E(t - s + x, x).
SkewEvolutionSystem from_evolution_operator(const EvolutionOperator& e, std::string label = "operator");

/// One (t, s, t0, x) sample for axiom checking; t >= s >= t0 >= 0.
struct AxiomSample {
    double t = 0.0;
    double s = 0.0;
    double t0 = 0.0;
    double x = 0.0;
};

struct AxiomViolation {
    AxiomSample sample;
    std::string law;  // "es1", "es2", "ec1" or "ec2"
    double residual = 0.0;
};

/// Default absolute tolerance for axiom residuals.
inline constexpr double kAxiomTolerance = 1e-9;

/// Scaled residual |a - b| / max(1, |a|, |b|).
double scaled_residual(double a, double b);

std::vector<AxiomViolation> check_semiflow_axioms(const SkewEvolutionSystem& sys,
                                                  const std::vector<AxiomSample>& samples,
                                                  double tol = kAxiomTolerance);

/// Scalar cocycles: residuals in log space. Matrix cocycles: max entry difference relative to max(1, |Phi(t,t0,x)|).
std::vector<AxiomViolation> check_cocycle_axioms(const SkewEvolutionSystem& sys,
                                                 const std::vector<AxiomSample>& samples,
                                                 double tol = kAxiomTolerance);

/// Seeded uniform samples with t_max >= t >= s >= t0 >= 0 and x in [0, x_max].
std::vector<AxiomSample> random_axiom_samples(std::size_t count, double t_max, double x_max, unsigned long long seed);

}  // namespace sesf
