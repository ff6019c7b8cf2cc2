#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sesf/certificate.hpp"
#include "sesf/core.hpp"
#include "sesf/grid.hpp"

namespace sesf {

/// Tolerances and caps shared by the certificate checks and fitters.
struct FitConfig {
    /// Upper bound on log N for constant certificates (UES, BVES).
    double log_n_cap = 50.0;
    /// Smallest accepted decay rate; raised to log(1 + H)/H when horizon_floor is set.
    double alpha_min = 1e-3;
    bool horizon_floor = true;
    /// Upper bound for every fitted rate (alpha, beta, omega).
    double rate_cap = 100.0;
    /// A grid point violates a bound when log_gain - bound > abs_tol + rel_tol * max(|log_gain|, |bound|).
    double abs_tol = 1e-9;
    double rel_tol = 1e-12;
    int bisection_steps = 80;
};

/// Effective minimum decay rate on a grid of the given horizon.
double rate_floor(const FitConfig& cfg, double horizon);

/// A grid point where a certificate inequality fails.
struct Witness {
    double t = 0.0;
    double s = 0.0;
    double x = 0.0;
    StateVector v;
    double log_gain = 0.0;
    double log_bound = 0.0;
    /// log_gain - log_bound
    double margin = 0.0;
};

/// Largest log-gain over the grid's base points and directions, per (t, s) pair.
class GainTable {
public:
    /// Keeps a pointer to grid, which must outlive the table.
    GainTable(const SkewEvolutionSystem& sys, const SampleGrid& grid);
    GainTable(const SkewEvolutionSystem& sys, SampleGrid&& grid) = delete;

    const SampleGrid& grid() const noexcept { return *grid_; }
    double operator[](std::size_t i) const { return lg_[i]; }
    std::size_t size() const noexcept { return lg_.size(); }
    double x_at(std::size_t i) const { return grid_->x_samples()[xi_[i]]; }
    const StateVector& v_at(std::size_t i) const { return grid_->v_samples()[vi_[i]]; }

private:
    const SampleGrid* grid_;
    std::vector<double> lg_;
    std::vector<std::size_t> xi_;
    std::vector<std::size_t> vi_;
};

struct CheckOutcome {
    bool passed = true;
    std::size_t violations = 0;
    /// Maximal-margin violation (ties broken by lexicographic (t, s)).
    std::optional<Witness> witness;
};

/// Pointwise log-space check of any certificate. Throws InvalidArgument on invalid constants.
CheckOutcome check_certificate(const GainTable& gains, const Certificate& cert, const FitConfig& cfg = {});
CheckOutcome check_certificate(const SkewEvolutionSystem& sys, const Certificate& cert, const SampleGrid& grid,
                               const FitConfig& cfg = {});

CheckOutcome check_ues(const SkewEvolutionSystem& sys, const UesCertificate& c, const SampleGrid& grid,
                       const FitConfig& cfg = {});
CheckOutcome check_bves(const SkewEvolutionSystem& sys, const BvesCertificate& c, const SampleGrid& grid,
                        const FitConfig& cfg = {});
CheckOutcome check_es(const SkewEvolutionSystem& sys, const EsCertificate& c, const SampleGrid& grid,
                      const FitConfig& cfg = {});
CheckOutcome check_stable(const SkewEvolutionSystem& sys, const StableCertificate& c, const SampleGrid& grid,
                          const FitConfig& cfg = {});
CheckOutcome check_eg(const SkewEvolutionSystem& sys, const GrowthCertificate& c, const SampleGrid& grid,
                      const FitConfig& cfg = {});

struct UesFit {
    bool feasible = false;
    UesCertificate certificate;
    /// Least-squares slope of the binned sup log-gain against t - s over the upper half of gaps.
    double envelope_slope = 0.0;
    std::string reason;
};

struct BvesFit {
    bool feasible = false;
    BvesCertificate certificate;
    std::string reason;
};

struct EsFit {
    bool feasible = false;
    EsCertificate certificate;
    std::string reason;
};

struct StableFit {
    bool feasible = false;
    StableCertificate certificate;
    std::string reason;
};

struct GrowthFit {
    bool feasible = false;
    GrowthCertificate certificate;
    double omega_rate = 0.0;
    std::string reason;
};

struct ProfileFits {
    EsFit es;
    StableFit stable;
    GrowthFit growth;
};

// Fitters. A rate is feasible when the compensated log-gain stops growing toward the grid horizon
// (its maximum over the far half does not exceed its maximum over the near half) and, for constant
// certificates, log N stays under the cap. The reported rate is the largest feasible one found by
// bisection; it is rejected when not above rate_floor.

UesFit fit_ues(const GainTable& gains, const FitConfig& cfg = {});
BvesFit fit_bves(const GainTable& gains, const FitConfig& cfg = {});
EsFit fit_es(const GainTable& gains, const FitConfig& cfg = {});
StableFit fit_stable(const GainTable& gains, const FitConfig& cfg = {});
GrowthFit fit_eg(const GainTable& gains, const FitConfig& cfg = {});
ProfileFits fit_profiles(const GainTable& gains, const FitConfig& cfg = {});

UesFit fit_ues(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg = {});
BvesFit fit_bves(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg = {});
ProfileFits fit_profiles(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg = {});

/// Candidate certificate used to refute a class: the floor rate (or rate cap for beta / omega) with
/// constants fitted on the near half of the grid and capped.
Certificate refutation_candidate(const GainTable& gains, StabilityClass c, const FitConfig& cfg = {});

enum class Outcome { Certified, Refuted, Inconclusive };
std::string_view to_string(Outcome o);

struct ClassResult {
    Outcome outcome = Outcome::Inconclusive;
    /// Passing certificate (Certified) or the refuted candidate (Refuted / Inconclusive).
    std::optional<Certificate> certificate;
    std::optional<Witness> witness;
    /// True when the certificate was obtained by weakening a stronger class's certificate.
    bool derived = false;
    std::string note;
};

struct LatticeVerdict {
    std::optional<StabilityClass> strongest;
    /// Indexed by StabilityClass.
    std::array<ClassResult, 5> classes;
    double horizon = 0.0;
    double rate_floor = 0.0;
    double envelope_slope = 0.0;

    const ClassResult& operator[](StabilityClass c) const { return classes[static_cast<std::size_t>(c)]; }
};

LatticeVerdict classify(const SkewEvolutionSystem& sys, const SampleGrid& grid, const FitConfig& cfg = {});
LatticeVerdict classify(const GainTable& gains, const FitConfig& cfg = {});

/// (t - s, sup log-gain) envelope: maximum log-gain per distinct gap, sorted by gap.
std::vector<std::pair<double, double>> gap_envelope(const GainTable& gains);

}  // namespace sesf
