#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sesf/certificate.hpp"
#include "sesf/core.hpp"

namespace sesf {

/// log u as a function of time, with optional kink locations.
struct LogProfile {
    std::function<double(double)> log_u;
    KinkFn kinks;
    std::string description;
};

/// Ratio forms of the translation builder:
///   Plain  : u(s) / u(t)
///   Decay  : u(s) e^s / (u(t) e^t)
///   Growth : u(s) e^t / (u(t) e^s)
enum class RatioForm { Plain, Decay, Growth };

/// Parametric family of (t, s) points at which a claimed inequality is expected to fail.
struct WitnessFamily {
    std::string description;
    std::function<std::pair<double, double>(int n)> point;
    int n_min = 0;
    int n_max = 0;

    /// Points for n in [n_min, n_max] with t <= horizon.
    std::vector<std::pair<double, double>> materialize(double horizon) const;
};

struct GallerySystem {
    std::string id;
    SkewEvolutionSystem system;
    /// Strongest class the system belongs to; nullopt for ad-hoc builds.
    std::optional<StabilityClass> expected_class;
    /// A certificate that holds for all times.
    std::optional<Certificate> known_certificate;
    /// A certificate asserted in the literature for this example (may be wrong; see exp_sin_system).
    std::optional<Certificate> claimed_certificate;
    std::optional<WitnessFamily> witness_family;
    /// The function u used by the system, when it is of ratio form.
    std::optional<LogProfile> log_u;
};

/// Phi(t,s,x) v = ratio(u) v over the given semiflow; log-gain = log u(s) - log u(t) (+ form terms).
GallerySystem translation_system(LogProfile u, RatioForm form,
                                 EvolutionSemiflow semiflow = EvolutionSemiflow::translation(),
                                 std::string id = "inline");

/// u(t) = e^{2t - t sin t}, plain ratio over the translation semiflow. BV stable, not uniformly stable.
///
/// The printed certificate (N=1, alpha=2, beta=3) is kept as claimed_certificate; it fails, e.g. at
/// t = 5pi/2, s = 3pi/2. The certificate that holds is (N=1, alpha=1, beta=3), from
/// t sin t - s sin s <= t + s.
GallerySystem exp_sin_system();

/// Default number of spike nodes; n + 4^{-n} is still distinct from n in double precision up to n = 23.
inline constexpr int kSpikeNodes = 20;
inline constexpr int kSpikeNodesMax = 23;

/// log u(n) = n 4^n at integers n = 1..nodes, log u(n + 4^{-n}) = 0, log u(0) = 0, piecewise linear
/// in between and 0 after the last dip. Ratio form u(s)e^s/(u(t)e^t) over the constant semiflow.
/// Exponentially stable, not BV stable.
GallerySystem spike_system(int nodes = kSpikeNodes);

/// log u of the spike system at time t.
double spike_log_u(double t, int nodes = kSpikeNodes);

/// u(t) = 1 + t, plain ratio. Stable, not exponentially stable.
GallerySystem subexp_system();

/// u(t) = 1 + t, ratio u(s)e^t/(u(t)e^s). Exponential growth, not stable.
GallerySystem growth_system();

/// log-gain -lambda (t - s). Throws InvalidArgument unless lambda > 0.
GallerySystem pure_decay_system(double lambda);

/// Identifiers: "exp-sin", "spike", "subexp", "growth", "pure-decay:<lambda>".
/// Throws InvalidArgument on unknown identifiers.
GallerySystem make_gallery_system(const std::string& id);

/// Identifiers of the five reference systems used by the acceptance suite.
std::vector<std::string> gallery_ids();

}  // namespace sesf
