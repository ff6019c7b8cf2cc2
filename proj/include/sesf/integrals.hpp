#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sesf/certificate.hpp"
#include "sesf/core.hpp"
#include "sesf/grid.hpp"
#include "sesf/quadrature.hpp"
#include "sesf/stability.hpp"

namespace sesf {

/// Weight w(t) multiplying the gain inside the integral over t in [s, infinity).
struct Weight {
    enum class Kind { None, Gap, Absolute };
    Kind kind = Kind::None;
    double rate = 0.0;

    static Weight none() { return {}; }
    /// e^{d (t - s)}
    static Weight gap(double d);
    /// e^{a t}
    static Weight absolute(double a);

    double log_weight(double t, double s) const;
};

/// "none", "gap:<d>" or "absolute:<a>".
std::string to_string(const Weight& w);

/// Integral over t in [s, infinity) of w(t) |Phi(t,s,x) v| / |v|, integrated in log space.
/// Throws InvalidArgument on a negative weight rate or s < 0.
IntegralReport gain_integral(const SkewEvolutionSystem& sys, const Weight& w, double s, double x,
                             const StateVector& v, const QuadratureConfig& q = {});

/// One point of a sampled integral profile: the sup over base points and directions at one s (or t).
struct ProfilePoint {
    double at = 0.0;
    double value = 0.0;
    double log_value = 0.0;
    bool converged = true;
    double truncation_T = 0.0;
    std::size_t evaluations = 0;
    std::string note;
};

struct CriterionProfile {
    std::vector<ProfilePoint> points;
    /// Some integral did not converge.
    bool refuted = false;
    /// First sample coordinate with a non-converged integral.
    std::optional<double> first_failure;
    /// log of the largest value over the profile.
    double log_sup = -std::numeric_limits<double>::infinity();
};

/// Base points and directions over which each profile value takes its sup.
struct IntegralSamples {
    std::vector<double> x{0.0};
    /// Empty means the axis vectors plus the grid's default random directions.
    std::vector<StateVector> v;
};

/// Default s values for integral profiles: 0, 1, ..., 20.
std::vector<double> default_s_grid();

/// D(s) = sup over samples of the gap-weighted (d > 0) or unweighted (d = 0) gain integral.
CriterionProfile datko_check(const SkewEvolutionSystem& sys, double d, const std::vector<double>& s_grid,
                             const IntegralSamples& samples = {}, const QuadratureConfig& q = {});

/// F in the Rolewicz functional, stored through log F(e^{log r}).
struct RolewiczFunction {
    std::string name;
    std::function<double(double log_r)> log_f;

    /// F(r) = r^p, p >= 1.
    static RolewiczFunction power(double p);
    /// F(r) = min(r, 1) r.
    static RolewiczFunction saturating();
    double operator()(double r) const;
};

/// "power:<p>" or "saturating". Throws InvalidArgument otherwise.
RolewiczFunction parse_rolewicz(const std::string& text);

/// Throws InvalidArgument unless F(0) = 0, F > 0 and nondecreasing on a fixed set of sample points.
void validate(const RolewiczFunction& F);

/// R(s) = sup over unit samples of the integral of F(e^{d (t - s)} |Phi(t,s,x) v|) dt, divided by F(1).
CriterionProfile rolewicz_check(const SkewEvolutionSystem& sys, const RolewiczFunction& F, double d,
                                const std::vector<double>& s_grid, const IntegralSamples& samples = {},
                                const QuadratureConfig& q = {});

struct BvDatkoResult {
    double a = 0.0;
    double b = 0.0;
    CriterionProfile profile;
    /// log N = sup over s of log(integral) - b s.
    double log_n_hat = -std::numeric_limits<double>::infinity();
    double n_hat = 0.0;
    bool passed = false;
    std::string note;
};

/// Integral of e^{a t} |Phi(t,s,x) v| over t >= s against N e^{b s}. Requires a > 0, b >= a.
BvDatkoResult bv_datko_check(const SkewEvolutionSystem& sys, double a, double b, const std::vector<double>& s_grid,
                             const IntegralSamples& samples = {}, const QuadratureConfig& q = {},
                             double log_n_cap = 50.0);

/// Integral over tau in [s, t] of e^{b (t - tau)} |Phi(t, tau, phi(tau, s, x))^T v*| / |v*|.
IntegralReport barbashin_functional(const SkewEvolutionSystem& sys, double b, double t, double s, double x,
                                    const StateVector& vstar, const QuadratureConfig& q = {});

struct BarbashinResult {
    double b = 0.0;
    /// B(t) = sup over s <= t in the grid and over samples.
    CriterionProfile profile;
    /// All functionals finite and B stops growing over the far half of the t-range.
    bool bounded = false;
    /// Strongest class found by classify on the accompanying grid.
    std::optional<StabilityClass> classified;
    /// bounded implies classified is ES or stronger.
    bool consistent = true;
    std::string note;
};

/// Default t values for the Barbashin profile: 0, 1, ..., 20.
std::vector<double> default_t_grid();

BarbashinResult barbashin_check(const SkewEvolutionSystem& sys, double b, const std::vector<double>& t_grid,
                                const SampleGrid& classify_grid, const IntegralSamples& samples = {},
                                const QuadratureConfig& q = {}, const FitConfig& fit = {});

struct PropositionResult {
    /// Both hypotheses hold: D(s) finite on the s grid and the growth profile M bounded.
    bool applicable = false;
    std::string reason;
    CriterionProfile integral;
    GrowthFit growth;
    bool growth_bounded = false;
    double log_m = 0.0;
    /// Integral of e^{-omega(r)} over [0, 1].
    double c_hat = 0.0;
    std::optional<StableCertificate> constructed;
    std::optional<CheckOutcome> check;
    bool passed = false;
};

/// Builds N(s) = M (D(s) / c + e^{omega(s)}) from the unweighted integral profile and the fitted growth
/// certificate, then checks it as a stability certificate on the grid.
PropositionResult proposition_crosscheck(const SkewEvolutionSystem& sys, const SampleGrid& grid,
                                         const std::vector<double>& s_grid, const IntegralSamples& samples = {},
                                         const QuadratureConfig& q = {}, const FitConfig& fit = {});

}  // namespace sesf
