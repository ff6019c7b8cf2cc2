#include "sesf/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sesf/errors.hpp"

namespace sesf {

std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::UES: return "UES";
        case StabilityClass::BVES: return "BVES";
        case StabilityClass::ES: return "ES";
        case StabilityClass::S: return "S";
        case StabilityClass::EG: return "EG";
    }
    return "?";
}

std::optional<StabilityClass> parse_class(std::string_view text) {
    std::string up(text);
    for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (StabilityClass c : kAllClasses)
        if (to_string(c) == up) return c;
    return std::nullopt;
}

Profile::Profile(std::function<double(double)> fn, std::string description)
    : fn_(std::move(fn)), description_(std::move(description)) {}

Profile Profile::constant(double value) {
    return Profile([value](double) { return value; }, "constant");
}

Profile Profile::table(std::vector<double> xs, std::vector<double> ys, std::string description) {
    if (xs.empty() || xs.size() != ys.size()) throw InvalidArgument("profile table needs matching nonempty columns");
    if (!std::is_sorted(xs.begin(), xs.end())) throw InvalidArgument("profile table abscissae must be sorted");
    Profile p;
    p.xs_ = std::move(xs);
    p.ys_ = std::move(ys);
    p.description_ = std::move(description);
    return p;
}

double Profile::operator()(double x) const {
    if (fn_) return fn_(x);
    if (xs_.empty()) throw InvalidArgument("empty profile evaluated");
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    if (xs_[j] == x) return ys_[j];
    const double w = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
    return ys_[j - 1] + w * (ys_[j] - ys_[j - 1]);
}

StabilityClass class_of(const Certificate& c) {
    return static_cast<StabilityClass>(c.index());
}

double certified_log_bound(const Certificate& c, double t, double s) {
    struct Visitor {
        double t, s;
        double operator()(const UesCertificate& k) const { return k.log_n - k.alpha * (t - s); }
        double operator()(const BvesCertificate& k) const { return k.log_n - k.alpha * t + k.beta * s; }
        double operator()(const EsCertificate& k) const { return k.log_n(s) - k.alpha * t; }
        double operator()(const StableCertificate& k) const { return k.log_n(s); }
        double operator()(const GrowthCertificate& k) const { return k.log_m(s) + k.omega(t - s); }
    };
    return std::visit(Visitor{t, s}, c);
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

void require_profile_at_least_one(const Profile& p, const std::vector<double>& s_samples, const char* name) {
    for (double s : s_samples) {
        const double v = p(s);
        require(std::isfinite(v) && v >= 0.0, std::string(name) + "(s) must be >= 1 (log >= 0) at every sampled s");
    }
}

}  // namespace

void validate(const Certificate& c, const std::vector<double>& s_samples) {
    switch (class_of(c)) {
        case StabilityClass::UES: {
            const auto& k = std::get<UesCertificate>(c);
            require(std::isfinite(k.log_n) && k.log_n >= 0.0, "UES needs constants N >= 1");
            require(std::isfinite(k.alpha) && k.alpha > 0.0, "UES needs alpha > 0");
            break;
        }
        case StabilityClass::BVES: {
            const auto& k = std::get<BvesCertificate>(c);
            require(std::isfinite(k.log_n) && k.log_n >= 0.0, "BVES needs constants N >= 1");
            require(std::isfinite(k.alpha) && k.alpha > 0.0, "BVES needs alpha > 0");
            require(std::isfinite(k.beta) && k.beta >= k.alpha, "BVES needs beta >= alpha");
            break;
        }
        case StabilityClass::ES: {
            const auto& k = std::get<EsCertificate>(c);
            require(std::isfinite(k.alpha) && k.alpha > 0.0, "ES needs alpha > 0");
            require_profile_at_least_one(k.log_n, s_samples, "N");
            break;
        }
        case StabilityClass::S:
            require_profile_at_least_one(std::get<StableCertificate>(c).log_n, s_samples, "N");
            break;
        case StabilityClass::EG: {
            const auto& k = std::get<GrowthCertificate>(c);
            require_profile_at_least_one(k.log_m, s_samples, "M");
            std::vector<double> xs(s_samples);
            std::sort(xs.begin(), xs.end());
            double prev_w = -INFINITY;
            for (double x : xs) {
                const double w = k.omega(x);
                require(std::isfinite(w) && w >= 0.0, "EG needs omega >= 0");
                require(w >= prev_w, "EG needs a nondecreasing omega");
                prev_w = w;
            }
            break;
        }
    }
}

BvesCertificate weaken(const UesCertificate& c) { return {c.log_n, c.alpha, c.alpha}; }

EsCertificate weaken(const BvesCertificate& c) {
    const double log_n = c.log_n;
    const double beta = c.beta;
    return {Profile([log_n, beta](double s) { return log_n + beta * s; }, "N e^{beta s}"), c.alpha};
}

StableCertificate weaken(const EsCertificate& c) { return {c.log_n}; }

GrowthCertificate weaken(const StableCertificate& c) { return {c.log_n, Profile::constant(0.0)}; }

Certificate weaken(const Certificate& c) {
    return std::visit(
        [](const auto& k) -> Certificate {
            if constexpr (std::is_same_v<std::decay_t<decltype(k)>, GrowthCertificate>)
                return k;
            else
                return weaken(k);
        },
        c);
}

}  // namespace sesf
