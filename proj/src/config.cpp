#include "sesf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sesf/errors.hpp"
#include "sesf/integrals.hpp"

namespace sesf {

namespace {

[[noreturn]] void fail(int line, const std::string& field, const std::string& what) {
    throw ConfigError(line, field, what);
}

double parse_number(const std::string& text, int line, const std::string& field) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || p != end || !std::isfinite(v))
        fail(line, field, "'" + text + "' is not a finite number");
    return v;
}

long long parse_integer(const std::string& text, int line, const std::string& field) {
    long long v = 0;
    const char* end = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || p != end) fail(line, field, "'" + text + "' is not an integer");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (text.back() == sep) out.emplace_back();
    return out;
}

/// Comma list of numbers, or a range start:stop:step (inclusive of stop up to rounding).
std::vector<double> parse_number_list(const std::string& text, int line, const std::string& field) {
    std::vector<double> out;
    const auto range = split(text, ':');
    if (range.size() == 3) {
        const double a = parse_number(range[0], line, field);
        const double b = parse_number(range[1], line, field);
        const double h = parse_number(range[2], line, field);
        if (!(h > 0.0) || b < a) fail(line, field, "range needs start <= stop and step > 0");
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
        if (n > 100000) fail(line, field, "range has too many points");
        for (long i = 0; i <= n; ++i) out.push_back(a + h * static_cast<double>(i));
        return out;
    }
    for (const auto& part : split(text, ',')) out.push_back(parse_number(part, line, field));
    return out;
}

std::string join_numbers(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

struct GlobalKey {
    const char* name;
    std::function<void(AnalysisConfig&, const std::string&, int)> set;
    std::function<std::string(const AnalysisConfig&)> get;
};

template <typename T>
GlobalKey number_key(const char* name, T AnalysisConfig::*m) {
    return {name,
            [m, name](AnalysisConfig& c, const std::string& v, int line) {
                if constexpr (std::is_floating_point_v<T>)
                    c.*m = parse_number(v, line, name);
                else
                    c.*m = static_cast<T>(parse_integer(v, line, name));
            },
            [m](const AnalysisConfig& c) {
                if constexpr (std::is_floating_point_v<T>)
                    return format_double(c.*m);
                else
                    return std::to_string(c.*m);
            }};
}

GlobalKey text_key(const char* name, std::string AnalysisConfig::*m) {
    return {name, [m](AnalysisConfig& c, const std::string& v, int) { c.*m = v; },
            [m](const AnalysisConfig& c) { return c.*m; }};
}

GlobalKey list_key(const char* name, std::vector<double> AnalysisConfig::*m) {
    return {name, [m, name](AnalysisConfig& c, const std::string& v, int line) { c.*m = parse_number_list(v, line, name); },
            [m](const AnalysisConfig& c) { return join_numbers(c.*m); }};
}

const std::vector<GlobalKey>& global_keys() {
    static const std::vector<GlobalKey> keys{
        text_key("system", &AnalysisConfig::system),
        text_key("logu", &AnalysisConfig::logu),
        text_key("form", &AnalysisConfig::form),
        text_key("semiflow", &AnalysisConfig::semiflow),
        number_key("horizon", &AnalysisConfig::horizon),
        number_key("log_points", &AnalysisConfig::log_points),
        number_key("log_min", &AnalysisConfig::log_min),
        number_key("uniform_step", &AnalysisConfig::uniform_step),
        number_key("band", &AnalysisConfig::band),
        number_key("n_max", &AnalysisConfig::n_max),
        list_key("x_samples", &AnalysisConfig::x_samples),
        number_key("directions", &AnalysisConfig::directions),
        list_key("s_grid", &AnalysisConfig::s_grid),
        list_key("t_grid", &AnalysisConfig::t_grid),
        {"seed",
         [](AnalysisConfig& c, const std::string& v, int line) {
             const long long s = parse_integer(v, line, "seed");
             if (s < 0) fail(line, "seed", "seed must be >= 0");
             c.seed = static_cast<unsigned long long>(s);
         },
         [](const AnalysisConfig& c) { return std::to_string(c.seed); }},
        number_key("rel_tol", &AnalysisConfig::rel_tol),
        number_key("abs_tol", &AnalysisConfig::abs_tol),
        number_key("max_horizon", &AnalysisConfig::max_horizon),
        number_key("panel_width", &AnalysisConfig::panel_width),
        number_key("tail_window", &AnalysisConfig::tail_window),
        number_key("logN_cap", &AnalysisConfig::log_n_cap),
        number_key("rate_cap", &AnalysisConfig::rate_cap),
        number_key("alpha_min", &AnalysisConfig::alpha_min),
        number_key("check_tol", &AnalysisConfig::check_tol),
        {"formats", [](AnalysisConfig& c, const std::string& v, int) { c.formats = split(v, ','); },
         [](const AnalysisConfig& c) { return join(c.formats); }},
        text_key("out", &AnalysisConfig::out),
    };
    return keys;
}

const GlobalKey* find_global(const std::string& key) {
    for (const auto& k : global_keys())
        if (key == k.name) return &k;
    return nullptr;
}

/// Parameter keys in echo order with their default values.
using ParamDefaults = std::vector<std::pair<std::string, std::string>>;

const std::set<std::string>& param_names() {
    static const std::set<std::string> names{"cert", "N", "alpha", "beta", "M", "omega", "d", "a", "b", "F"};
    return names;
}

/// Canonical task name and its parameter defaults. Throws ConfigError for unknown tasks.
std::pair<std::string, ParamDefaults> task_shape(const std::string& raw, int line) {
    if (raw == "classify" || raw == "proposition") return {raw, {}};
    if (raw == "datko") return {raw, {{"d", "1"}}};
    if (raw == "rolewicz") return {raw, {{"F", "power:2"}, {"d", "1"}}};
    if (raw == "bv-datko") return {raw, {{"a", "1"}, {"b", "1"}}};
    if (raw == "barbashin") return {raw, {{"b", "1"}}};
    const auto colon = raw.find(':');
    if (colon != std::string::npos) {
        const std::string kind = raw.substr(0, colon);
        const auto cls = parse_class(raw.substr(colon + 1));
        if (cls && (kind == "check" || kind == "fit")) {
            const std::string name = kind + ":" + std::string(to_string(*cls));
            if (kind == "fit") return {name, {}};
            switch (*cls) {
                case StabilityClass::UES: return {name, {{"cert", "explicit"}, {"N", "1"}, {"alpha", "1"}}};
                case StabilityClass::BVES:
                    return {name, {{"cert", "explicit"}, {"N", "1"}, {"alpha", "1"}, {"beta", "1"}}};
                case StabilityClass::ES: return {name, {{"cert", "explicit"}, {"N", "1"}, {"alpha", "1"}}};
                case StabilityClass::S: return {name, {{"cert", "explicit"}, {"N", "1"}}};
                case StabilityClass::EG: return {name, {{"cert", "explicit"}, {"M", "1"}, {"omega", "0"}}};
            }
        }
    }
    fail(line, "task",
         "unknown task '" + raw +
             "' (expected classify, check:<class>, fit:<class>, datko, rolewicz, bv-datko, barbashin or proposition)");
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? p : buf);
}

const std::string& TaskSpec::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw InvalidArgument("task '" + name + "' has no parameter '" + key + "'");
}

double TaskSpec::number(const std::string& key) const { return parse_number(param(key), 0, key); }

AnalysisConfig::AnalysisConfig() {
    for (int i = 0; i <= 20; ++i) {
        s_grid.push_back(i);
        t_grid.push_back(i);
    }
}

namespace {

std::string checked_param(const std::string& task, const std::string& key, const std::string& value, int line,
                          const std::map<std::string, std::string>& all) {
    auto num = [&](const std::string& k) { return parse_number(all.at(k), line, k); };
    if (key == "cert") {
        if (value != "explicit" && value != "known" && value != "claimed")
            fail(line, key, "cert must be explicit, known or claimed");
        return value;
    }
    if (key == "F") {
        try {
            return parse_rolewicz(value).name;
        } catch (const InvalidArgument& e) {
            fail(line, key, e.what());
        }
    }
    const double v = num(key);
    if ((key == "N" || key == "M") && !(v >= 1.0)) fail(line, key, key + " must be >= 1 (bound constants satisfy N >= 1)");
    if (key == "alpha" && !(v > 0.0)) fail(line, key, "alpha must be > 0 (decay rate of the bound)");
    if (key == "beta" && !(v >= num("alpha"))) fail(line, key, "beta must be >= alpha");
    if (key == "omega" && !(v >= 0.0)) fail(line, key, "omega must be >= 0 (growth rate)");
    if (key == "d" && !(v > 0.0)) fail(line, key, "d must be > 0 (weight rate e^{d(t-s)})");
    if (key == "a" && !(v > 0.0)) fail(line, key, "a must be > 0 (weight rate e^{at})");
    if (key == "b" && !(v > 0.0)) fail(line, key, "b must be > 0");
    if (key == "b" && task == "bv-datko" && !(v >= num("a"))) fail(line, key, "b must be >= a");
    return format_double(v);
}

void validate_globals(const AnalysisConfig& c, const std::map<std::string, int>& lines) {
    auto at = [&](const char* k) {
        const auto it = lines.find(k);
        return it == lines.end() ? 0 : it->second;
    };
    auto require = [&](bool ok, const char* key, const std::string& what) {
        if (!ok) fail(at(key), key, what);
    };
    require(c.horizon > 0.0, "horizon", "horizon must be > 0");
    require(c.log_points >= 0, "log_points", "log_points must be >= 0");
    require(c.log_points == 0 || (c.log_min > 0.0 && c.log_min < c.horizon), "log_min",
            "log_min must be in (0, horizon)");
    require(c.uniform_step >= 0.0, "uniform_step", "uniform_step must be >= 0");
    require(c.band >= 0.0, "band", "band must be >= 0");
    require(c.n_max >= 0, "n_max", "n_max must be >= 0");
    require(!c.x_samples.empty(), "x_samples", "x_samples needs at least one value");
    require(std::all_of(c.x_samples.begin(), c.x_samples.end(), [](double x) { return x >= 0.0; }), "x_samples",
            "base points must be >= 0");
    require(c.directions >= 0 && c.directions <= 1000, "directions", "directions must be in [0, 1000]");
    for (const char* key : {"s_grid", "t_grid"}) {
        const auto& g = std::string(key) == "s_grid" ? c.s_grid : c.t_grid;
        require(!g.empty(), key, std::string(key) + " needs at least one value");
        require(std::all_of(g.begin(), g.end(), [](double x) { return x >= 0.0; }), key,
                std::string(key) + " values must be >= 0");
    }
    require(c.rel_tol > 0.0, "rel_tol", "rel_tol must be > 0");
    require(c.abs_tol > 0.0, "abs_tol", "abs_tol must be > 0");
    require(c.max_horizon > 0.0, "max_horizon", "max_horizon must be > 0");
    require(c.panel_width > 0.0, "panel_width", "panel_width must be > 0");
    require(c.tail_window > 0.0, "tail_window", "tail_window must be > 0");
    require(c.log_n_cap > 0.0, "logN_cap", "logN_cap must be > 0");
    require(c.rate_cap > 0.0, "rate_cap", "rate_cap must be > 0");
    require(c.alpha_min > 0.0, "alpha_min", "alpha_min must be > 0 (decay rates are positive)");
    require(c.check_tol > 0.0, "check_tol", "check_tol must be > 0");
    for (const auto& f : c.formats)
        require(f == "json" || f == "table" || f == "plot", "formats", "unknown format '" + f + "'");
    require(c.form == "plain" || c.form == "decay" || c.form == "growth", "form", "form must be plain, decay or growth");
    require(c.semiflow == "translation" || c.semiflow == "constant", "semiflow",
            "semiflow must be translation or constant");
    require(c.system == "inline" || c.logu.empty(), "logu", "logu is only used with system=inline");
    if (c.system.empty()) {
        require(c.tasks.empty(), "system", "a system is required when tasks are listed");
        return;
    }
    try {
        build_system(c);
    } catch (const ConfigError& e) {
        fail(at(e.field() == "logu" ? "logu" : "system"), e.field(), e.message());
    }
}

}  // namespace

AnalysisConfig parse_config(const std::string& text) {
    AnalysisConfig c;
    std::map<std::string, int> lines;
    struct Pending {
        std::string name;
        ParamDefaults defaults;
        std::map<std::string, std::string> given;
        int line = 0;
    };
    std::vector<Pending> pending;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream tokens(raw);
        std::string tok;
        Pending* task = nullptr;
        while (tokens >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0) fail(line, tok, "expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            const std::string value = tok.substr(eq + 1);
            if (key == "task") {
                auto [name, defaults] = task_shape(value, line);
                pending.push_back({std::move(name), std::move(defaults), {}, line});
                task = &pending.back();
            } else if (param_names().count(key)) {
                if (!task) fail(line, key, "parameter '" + key + "' must follow a task on the same line");
                const bool known = std::any_of(task->defaults.begin(), task->defaults.end(),
                                               [&](const auto& kv) { return kv.first == key; });
                if (!known) fail(line, key, "parameter '" + key + "' does not apply to task '" + task->name + "'");
                if (!task->given.emplace(key, value).second) fail(line, key, "duplicate parameter '" + key + "'");
            } else if (const GlobalKey* g = find_global(key)) {
                if (!lines.emplace(key, line).second) fail(line, key, "duplicate key '" + key + "'");
                g->set(c, value, line);
            } else {
                fail(line, key, "unknown key '" + key + "'");
            }
        }
    }

    for (auto& p : pending) {
        std::map<std::string, std::string> all;
        for (const auto& [k, v] : p.defaults) all[k] = v;
        for (const auto& [k, v] : p.given) all[k] = v;
        // Unspecified upper rates default to the lower one.
        if (all.count("beta") && !p.given.count("beta")) all["beta"] = all["alpha"];
        if (p.name == "bv-datko" && !p.given.count("b")) all["b"] = all["a"];
        TaskSpec spec{p.name, {}};
        for (const auto& kv : p.defaults) spec.params.emplace_back(kv.first, checked_param(p.name, kv.first, all[kv.first], p.line, all));
        c.tasks.push_back(std::move(spec));
    }
    validate_globals(c, lines);
    return c;
}

std::string echo_config(const AnalysisConfig& c) {
    std::string out;
    for (const auto& k : global_keys()) out += std::string(k.name) + "=" + k.get(c) + "\n";
    for (const auto& t : c.tasks) {
        out += "task=" + t.name;
        for (const auto& [k, v] : t.params) out += " " + k + "=" + v;
        out += "\n";
    }
    return out;
}

namespace {

LogProfile parse_logu(const std::string& text) {
    auto bad = [&](const std::string& why) -> ConfigError { return ConfigError(0, "logu", why); };
    if (text == "log1p") return {[](double t) { return std::log1p(t); }, {}, "log(1 + t)"};
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "const" && !arg.empty()) {
        const double c = parse_number(arg, 0, "logu");
        return {[c](double) { return c; }, {}, "constant " + format_double(c)};
    }
    if (kind == "expsin") {
        const auto parts = split(arg, ',');
        if (parts.size() != 3) throw bad("expsin needs three coefficients a,b,c");
        const double a = parse_number(parts[0], 0, "logu");
        const double b = parse_number(parts[1], 0, "logu");
        const double c = parse_number(parts[2], 0, "logu");
        return {[a, b, c](double t) { return a * t + b * t * std::sin(c * t); }, {},
                format_double(a) + " t + " + format_double(b) + " t sin(" + format_double(c) + " t)"};
    }
    if (kind == "nodes") {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& node : split(arg, ';')) {
            const auto tv = split(node, ':');
            if (tv.size() != 2) throw bad("node '" + node + "' must be t:value");
            xs.push_back(parse_number(tv[0], 0, "logu"));
            ys.push_back(parse_number(tv[1], 0, "logu"));
        }
        if (xs.empty()) throw bad("nodes needs at least one t:value pair");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] < 0.0) throw bad("node times must be >= 0");
            if (i && !(xs[i] > xs[i - 1])) throw bad("node times must be strictly increasing");
        }
        const Profile p = Profile::table(xs, ys, "piecewise-linear log u");
        KinkFn kinks = [xs](double lo, double hi) {
            std::vector<double> k;
            for (double x : xs)
                if (x > lo && x < hi) k.push_back(x);
            return k;
        };
        return {[p](double t) { return p(t); }, std::move(kinks), "piecewise-linear log u"};
    }
    throw bad("logu must be nodes:t:v;..., expsin:a,b,c, log1p or const:c");
}

}  // namespace

GallerySystem build_system(const AnalysisConfig& c) {
    GallerySystem g = [&] {
        if (c.system == "inline") {
            if (c.logu.empty()) throw ConfigError(0, "logu", "system=inline needs logu");
            const RatioForm form = c.form == "decay" ? RatioForm::Decay
                                   : c.form == "growth" ? RatioForm::Growth
                                                        : RatioForm::Plain;
            return translation_system(parse_logu(c.logu), form,
                                      c.semiflow == "constant" ? EvolutionSemiflow::constant()
                                                               : EvolutionSemiflow::translation(),
                                      "inline");
        }
        try {
            return make_gallery_system(c.system);
        } catch (const InvalidArgument& e) {
            throw ConfigError(0, "system", e.what());
        }
    }();
    if (g.witness_family) g.witness_family->n_max = std::min(g.witness_family->n_max, c.n_max);
    return g;
}

GridSpec grid_spec(const AnalysisConfig& c) {
    GridSpec g;
    g.horizon = c.horizon;
    g.log_points = c.log_points;
    g.log_min = c.log_min;
    g.uniform_step = c.uniform_step;
    g.band = c.band;
    g.x_samples = c.x_samples;
    g.random_directions = c.directions;
    g.seed = c.seed;
    return g;
}

SampleGrid build_grid(const AnalysisConfig& c, const GallerySystem& g) { return default_grid(g, grid_spec(c)); }

QuadratureConfig quadrature_config(const AnalysisConfig& c) {
    QuadratureConfig q;
    q.rel_tol = c.rel_tol;
    q.abs_tol = c.abs_tol;
    q.max_horizon = c.max_horizon;
    q.panel_width = c.panel_width;
    q.tail_window = c.tail_window;
    return q;
}

FitConfig fit_config(const AnalysisConfig& c) {
    FitConfig f;
    f.log_n_cap = c.log_n_cap;
    f.rate_cap = c.rate_cap;
    f.alpha_min = c.alpha_min;
    f.abs_tol = c.check_tol;
    return f;
}

}  // namespace sesf
