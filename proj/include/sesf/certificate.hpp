#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sesf {

/// The five stability classes, strongest first.
enum class StabilityClass { UES, BVES, ES, S, EG };

inline constexpr StabilityClass kAllClasses[] = {StabilityClass::UES, StabilityClass::BVES, StabilityClass::ES,
                                                 StabilityClass::S, StabilityClass::EG};

std::string_view to_string(StabilityClass c);
/// Accepts "UES", "BVES", "ES", "S", "EG" (case-insensitive). Returns nullopt otherwise.
std::optional<StabilityClass> parse_class(std::string_view text);

/// A real function of one time argument, either closed-form or tabulated.
///
/// Tabulated profiles interpolate linearly between nodes and hold the end values outside them.
class Profile {
public:
    Profile() = default;
    Profile(std::function<double(double)> fn, std::string description);
    static Profile constant(double value);
    static Profile table(std::vector<double> xs, std::vector<double> ys, std::string description = "tabulated");

    double operator()(double x) const;
    const std::string& description() const noexcept { return description_; }
    bool is_table() const noexcept { return !xs_.empty(); }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }

private:
    std::function<double(double)> fn_;
    std::vector<double> xs_;
    std::vector<double> ys_;
    std::string description_;
};

/// |Phi(t,s)v| <= N e^{-alpha (t-s)} |v|
struct UesCertificate {
    double log_n = 0.0;
    double alpha = 0.0;
};

/// |Phi(t,s)v| <= N e^{-alpha t} e^{beta s} |v|
struct BvesCertificate {
    double log_n = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// |Phi(t,s)v| <= N(s) e^{-alpha t} |v|
struct EsCertificate {
    Profile log_n;
    double alpha = 0.0;
};

/// |Phi(t,s)v| <= N(s) |v|
struct StableCertificate {
    Profile log_n;
};

/// |Phi(t,s)v| <= M(s) e^{omega(t-s)} |v|
struct GrowthCertificate {
    Profile log_m;
    Profile omega;
};

using Certificate = std::variant<UesCertificate, BvesCertificate, EsCertificate, StableCertificate, GrowthCertificate>;

StabilityClass class_of(const Certificate& c);

/// Log of the certified bound at (t, s).
double certified_log_bound(const Certificate& c, double t, double s);

/// Throws InvalidArgument if the constants violate their definition (N >= 1, alpha > 0, beta >= alpha, ...).
/// Profiles are validated at the supplied sample points.
void validate(const Certificate& c, const std::vector<double>& s_samples = {});

// Constant transformations along the implication chain UES => BVES => ES => S => EG.
BvesCertificate weaken(const UesCertificate& c);
EsCertificate weaken(const BvesCertificate& c);
StableCertificate weaken(const EsCertificate& c);
GrowthCertificate weaken(const StableCertificate& c);
/// One step down the chain; EG certificates are returned unchanged.
Certificate weaken(const Certificate& c);

}  // namespace sesf
