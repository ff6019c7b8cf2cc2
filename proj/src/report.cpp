#include "sesf/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "sesf/errors.hpp"
#include "sesf/integrals.hpp"

namespace sesf {

using json = nlohmann::ordered_json;

namespace {

json profile_json(const Profile& p) {
    json j;
    j["description"] = p.description();
    if (p.is_table()) {
        json xs = json::array();
        json ys = json::array();
        for (double x : p.xs()) xs.push_back(json_number(x));
        for (double y : p.ys()) ys.push_back(json_number(y));
        j["s"] = std::move(xs);
        j["values"] = std::move(ys);
    }
    return j;
}

json cert_json(const Certificate& c) {
    json j;
    j["class"] = std::string(to_string(class_of(c)));
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, UesCertificate>) {
                j["log_N"] = json_number(x.log_n);
                j["alpha"] = json_number(x.alpha);
            } else if constexpr (std::is_same_v<T, BvesCertificate>) {
                j["log_N"] = json_number(x.log_n);
                j["alpha"] = json_number(x.alpha);
                j["beta"] = json_number(x.beta);
            } else if constexpr (std::is_same_v<T, EsCertificate>) {
                j["log_N"] = profile_json(x.log_n);
                j["alpha"] = json_number(x.alpha);
            } else if constexpr (std::is_same_v<T, StableCertificate>) {
                j["log_N"] = profile_json(x.log_n);
            } else {
                j["log_M"] = profile_json(x.log_m);
                j["omega"] = profile_json(x.omega);
            }
        },
        c);
    return j;
}

json witness_json(const std::optional<Witness>& w) {
    if (!w) return nullptr;
    json v = json::array();
    for (double x : w->v.values()) v.push_back(json_number(x));
    return json{{"t", json_number(w->t)},
                {"s", json_number(w->s)},
                {"x", json_number(w->x)},
                {"v", std::move(v)},
                {"log_gain", json_number(w->log_gain)},
                {"log_bound", json_number(w->log_bound)},
                {"margin", json_number(w->margin)}};
}

json check_json(const CheckOutcome& c) {
    return json{{"passed", c.passed}, {"violations", c.violations}, {"witness", witness_json(c.witness)}};
}

json points_json(const CriterionProfile& p, const char* coord) {
    json arr = json::array();
    for (const auto& pt : p.points) {
        json j;
        j[coord] = json_number(pt.at);
        j["value"] = json_number(pt.value);
        j["log_value"] = json_number(pt.log_value);
        j["converged"] = pt.converged;
        j["truncation_T"] = json_number(pt.truncation_T);
        j["evaluations"] = pt.evaluations;
        j["note"] = pt.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

json criterion_json(const CriterionProfile& p, const char* coord) {
    json j;
    j["refuted"] = p.refuted;
    j["first_failure"] = p.first_failure ? json_number(*p.first_failure) : json(nullptr);
    j["log_sup"] = json_number(p.log_sup);
    j["profile"] = points_json(p, coord);
    return j;
}

PlotSeries series_of(const CriterionProfile& p, std::string name, std::string x_label, std::string y_label) {
    PlotSeries s{std::move(name), std::move(x_label), std::move(y_label), {}};
    for (const auto& pt : p.points) s.points.emplace_back(pt.at, pt.value);
    return s;
}

struct Context {
    const AnalysisConfig& config;
    const GallerySystem& gallery;
    const SampleGrid& grid;
    QuadratureConfig quad;
    FitConfig fit;
    IntegralSamples samples;
};

Certificate task_certificate(const TaskSpec& t, StabilityClass cls, const GallerySystem& g) {
    const std::string& source = t.param("cert");
    if (source != "explicit") {
        const auto& c = source == "known" ? g.known_certificate : g.claimed_certificate;
        if (!c) throw InvalidArgument("system '" + g.id + "' has no " + source + " certificate");
        if (class_of(*c) != cls)
            throw InvalidArgument("the " + source + " certificate of '" + g.id + "' is of class " +
                                  std::string(to_string(class_of(*c))));
        return *c;
    }
    switch (cls) {
        case StabilityClass::UES: return UesCertificate{std::log(t.number("N")), t.number("alpha")};
        case StabilityClass::BVES:
            return BvesCertificate{std::log(t.number("N")), t.number("alpha"), t.number("beta")};
        case StabilityClass::ES: return EsCertificate{Profile::constant(std::log(t.number("N"))), t.number("alpha")};
        case StabilityClass::S: return StableCertificate{Profile::constant(std::log(t.number("N")))};
        case StabilityClass::EG: {
            const double w = t.number("omega");
            return GrowthCertificate{Profile::constant(std::log(t.number("M"))),
                                     Profile([w](double r) { return w * r; }, "omega(r) = " + format_double(w) + " r")};
        }
    }
    throw InvalidArgument("unknown class");
}

void run_classify(const Context& ctx, TaskOutcome& out) {
    const GainTable gains(ctx.gallery.system, ctx.grid);
    const LatticeVerdict v = classify(gains, ctx.fit);
    json& r = out.result;
    r["strongest"] = v.strongest ? json(std::string(to_string(*v.strongest))) : json(nullptr);
    r["horizon"] = json_number(v.horizon);
    r["rate_floor"] = json_number(v.rate_floor);
    r["envelope_slope"] = json_number(v.envelope_slope);
    r["grid_pairs"] = ctx.grid.pairs().size();
    json classes = json::array();
    for (StabilityClass c : kAllClasses) {
        const ClassResult& cr = v[c];
        json j;
        j["class"] = std::string(to_string(c));
        j["outcome"] = std::string(to_string(cr.outcome));
        j["derived"] = cr.derived;
        j["certificate"] = cr.certificate ? cert_json(*cr.certificate) : json(nullptr);
        j["witness"] = witness_json(cr.witness);
        j["note"] = cr.note;
        classes.push_back(std::move(j));
    }
    r["classes"] = std::move(classes);
    out.plots.push_back({"gap-envelope", "t-s", "sup_log_gain", gap_envelope(gains)});
}

void run_check(const Context& ctx, StabilityClass cls, TaskOutcome& out) {
    const Certificate cert = task_certificate(out.task, cls, ctx.gallery);
    const CheckOutcome c = check_certificate(ctx.gallery.system, cert, ctx.grid, ctx.fit);
    out.result["class"] = std::string(to_string(cls));
    out.result["cert_source"] = out.task.param("cert");
    out.result["certificate"] = cert_json(cert);
    out.result.update(check_json(c));
}

void run_fit(const Context& ctx, StabilityClass cls, TaskOutcome& out) {
    const GainTable gains(ctx.gallery.system, ctx.grid);
    json& r = out.result;
    r["class"] = std::string(to_string(cls));
    auto fill = [&](const auto& fit) {
        r["feasible"] = fit.feasible;
        r["certificate"] = cert_json(fit.certificate);
        r["reason"] = fit.reason;
    };
    switch (cls) {
        case StabilityClass::UES: {
            const UesFit f = fit_ues(gains, ctx.fit);
            fill(f);
            r["envelope_slope"] = json_number(f.envelope_slope);
            break;
        }
        case StabilityClass::BVES: fill(fit_bves(gains, ctx.fit)); break;
        case StabilityClass::ES: fill(fit_es(gains, ctx.fit)); break;
        case StabilityClass::S: fill(fit_stable(gains, ctx.fit)); break;
        case StabilityClass::EG: {
            const GrowthFit f = fit_eg(gains, ctx.fit);
            fill(f);
            r["omega_rate"] = json_number(f.omega_rate);
            break;
        }
    }
    r["rate_floor"] = json_number(rate_floor(ctx.fit, ctx.grid.horizon()));
}

void run_integral_task(const Context& ctx, TaskOutcome& out) {
    const TaskSpec& t = out.task;
    const auto& sys = ctx.gallery.system;
    const auto& s_grid = ctx.config.s_grid;
    json& r = out.result;
    if (t.name == "datko") {
        const double d = t.number("d");
        const CriterionProfile p = datko_check(sys, d, s_grid, ctx.samples, ctx.quad);
        r["d"] = json_number(d);
        r["weight"] = to_string(Weight::gap(d));
        r.update(criterion_json(p, "s"));
        out.plots.push_back(series_of(p, "profile", "s", "D(s)"));
    } else if (t.name == "rolewicz") {
        const RolewiczFunction F = parse_rolewicz(t.param("F"));
        const double d = t.number("d");
        const CriterionProfile p = rolewicz_check(sys, F, d, s_grid, ctx.samples, ctx.quad);
        r["F"] = F.name;
        r["d"] = json_number(d);
        r.update(criterion_json(p, "s"));
        out.plots.push_back(series_of(p, "profile", "s", "R(s)"));
    } else if (t.name == "bv-datko") {
        const BvDatkoResult b =
            bv_datko_check(sys, t.number("a"), t.number("b"), s_grid, ctx.samples, ctx.quad, ctx.fit.log_n_cap);
        r["a"] = json_number(b.a);
        r["b"] = json_number(b.b);
        r["log_N_hat"] = json_number(b.log_n_hat);
        r["N_hat"] = json_number(b.n_hat);
        r["passed"] = b.passed;
        r["note"] = b.note;
        r.update(criterion_json(b.profile, "s"));
        out.plots.push_back(series_of(b.profile, "profile", "s", "integral(s)"));
    } else if (t.name == "barbashin") {
        const BarbashinResult b =
            barbashin_check(sys, t.number("b"), ctx.config.t_grid, ctx.grid, ctx.samples, ctx.quad, ctx.fit);
        r["b"] = json_number(b.b);
        r["bounded"] = b.bounded;
        r["classified"] = b.classified ? json(std::string(to_string(*b.classified))) : json(nullptr);
        r["consistent"] = b.consistent;
        r["note"] = b.note;
        r.update(criterion_json(b.profile, "t"));
        out.plots.push_back(series_of(b.profile, "profile", "t", "B(t)"));
    } else if (t.name == "proposition") {
        const PropositionResult p = proposition_crosscheck(sys, ctx.grid, s_grid, ctx.samples, ctx.quad, ctx.fit);
        r["applicable"] = p.applicable;
        r["passed"] = p.passed;
        r["reason"] = p.reason;
        r["growth_feasible"] = p.growth.feasible;
        r["growth_bounded"] = p.growth_bounded;
        r["log_M"] = json_number(p.log_m);
        r["omega_rate"] = json_number(p.growth.omega_rate);
        r["c_hat"] = json_number(p.c_hat);
        r["constructed"] = p.constructed ? cert_json(*p.constructed) : json(nullptr);
        r["check"] = p.check ? check_json(*p.check) : json(nullptr);
        r["integral"] = criterion_json(p.integral, "s");
        out.plots.push_back(series_of(p.integral, "integral", "s", "D(s)"));
    } else {
        throw InvalidArgument("unknown task '" + t.name + "'");
    }
}

TaskOutcome run_task(const Context& ctx, const TaskSpec& task) {
    TaskOutcome out;
    out.task = task;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto colon = task.name.find(':');
        if (task.name == "classify") {
            run_classify(ctx, out);
        } else if (colon != std::string::npos) {
            const StabilityClass cls = *parse_class(task.name.substr(colon + 1));
            if (task.name.compare(0, colon, "check") == 0)
                run_check(ctx, cls, out);
            else
                run_fit(ctx, cls, out);
        } else {
            run_integral_task(ctx, out);
        }
        out.completed = true;
    } catch (const std::exception& e) {
        out.completed = false;
        out.error = e.what();
        out.result = json::object();
        out.plots.clear();
    }
    out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

bool RunReport::all_completed() const {
    for (const auto& t : tasks)
        if (!t.completed) return false;
    return true;
}

RunReport run(const AnalysisConfig& config, bool parallel) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.config = config;
    if (config.system.empty()) {
        rep.system = nullptr;
        rep.total_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return rep;
    }
    const GallerySystem g = build_system(config);
    const SampleGrid grid = build_grid(config, g);
    Context ctx{config, g, grid, quadrature_config(config), fit_config(config), {}};
    ctx.samples.x = config.x_samples;
    ctx.samples.v = unit_directions(g.system.dim(), config.directions, config.seed);

    rep.system = json{{"id", g.id},
                      {"dim", g.system.dim()},
                      {"expected_class", g.expected_class ? json(std::string(to_string(*g.expected_class))) : json(nullptr)},
                      {"log_u", g.log_u ? json(g.log_u->description) : json(nullptr)},
                      {"witness_family", g.witness_family ? json(g.witness_family->description) : json(nullptr)},
                      {"grid_horizon", json_number(grid.horizon())},
                      {"grid_pairs", grid.pairs().size()}};

    if (parallel) {
        std::vector<std::future<TaskOutcome>> futures;
        for (const auto& t : config.tasks)
            futures.push_back(std::async(std::launch::async, [&ctx, &t] { return run_task(ctx, t); }));
        for (auto& f : futures) rep.tasks.push_back(f.get());
    } else {
        for (const auto& t : config.tasks) rep.tasks.push_back(run_task(ctx, t));
    }
    rep.total_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

json results_json(const RunReport& r) {
    json j;
    j["tool"] = "analyze";
    j["version"] = kToolVersion;
    json cfg;
    std::istringstream echo(echo_config(r.config));
    std::string line;
    json tasks = json::array();
    while (std::getline(echo, line)) {
        const auto eq = line.find('=');
        if (line.compare(0, 5, "task=") == 0)
            tasks.push_back(line.substr(5));
        else
            cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    cfg["tasks"] = std::move(tasks);
    j["config"] = std::move(cfg);
    j["system"] = r.system;
    json results = json::array();
    for (const auto& t : r.tasks) {
        json tj;
        tj["task"] = t.task.name;
        json params = json::object();
        for (const auto& [k, v] : t.task.params) params[k] = v;
        tj["params"] = std::move(params);
        tj["status"] = t.completed ? "completed" : "failed";
        if (!t.completed) tj["error"] = t.error;
        tj["result"] = t.result;
        results.push_back(std::move(tj));
    }
    j["results"] = std::move(results);
    return j;
}

json to_json(const RunReport& r) {
    json j = results_json(r);
    json per_task = json::array();
    for (const auto& t : r.tasks) per_task.push_back(json{{"task", t.task.name}, {"millis", t.millis}});
    j["timing"] = json{{"total_millis", r.total_millis}, {"tasks", std::move(per_task)}};
    return j;
}

std::string format_series(const PlotSeries& s) {
    std::string out = "# " + s.x_label + " " + s.y_label + "\n";
    for (const auto& [x, y] : s.points) out += format_double(x) + " " + format_double(y) + "\n";
    return out;
}

std::string to_table(const RunReport& r) {
    std::ostringstream o;
    o << "analyze " << kToolVersion << "\n";
    if (r.system.is_null()) {
        o << "system: (none)\n";
    } else {
        o << "system: " << r.system["id"].get<std::string>() << " (dim " << r.system["dim"].get<std::size_t>()
          << ", grid horizon " << format_double(r.system["grid_horizon"].get<double>()) << ")\n";
    }
    for (std::size_t i = 0; i < r.tasks.size(); ++i) {
        const auto& t = r.tasks[i];
        o << "\n[" << i + 1 << "] " << t.task.name;
        /// Known and claimed certificates come from the gallery, so their constants are not the task's.
        const bool from_gallery = t.task.name.starts_with("check:") && t.task.param("cert") != "explicit";
        for (const auto& [k, v] : t.task.params)
            if (!from_gallery || k == "cert") o << " " << k << "=" << v;
        o << ": " << (t.completed ? "completed" : "FAILED: " + t.error) << "\n";
        if (!t.completed) continue;
        const json& res = t.result;
        if (t.task.name == "classify") {
            o << "  strongest class: " << (res["strongest"].is_null() ? "none" : res["strongest"].get<std::string>())
              << "\n";
            for (const auto& c : res["classes"]) {
                o << "  " << c["class"].get<std::string>() << "\t" << c["outcome"].get<std::string>();
                if (c["derived"].get<bool>()) o << " (derived)";
                if (!c["witness"].is_null())
                    o << "\twitness t=" << c["witness"]["t"].dump() << " s=" << c["witness"]["s"].dump()
                      << " margin=" << c["witness"]["margin"].dump();
                o << "\n";
            }
        } else if (res.contains("profile")) {
            const char* coord = t.task.name == "barbashin" ? "t" : "s";
            o << "  " << coord << "\tvalue\tconverged\n";
            for (const auto& p : res["profile"])
                o << "  " << p[coord].dump() << "\t" << p["value"].dump() << "\t"
                  << (p["converged"].get<bool>() ? "yes" : "no") << "\n";
            if (res.contains("N_hat"))
                o << "  N estimate: " << res["N_hat"].dump() << ", passed: " << (res["passed"].get<bool>() ? "yes" : "no")
                  << "\n";
            if (res.contains("bounded"))
                o << "  bounded: " << (res["bounded"].get<bool>() ? "yes" : "no") << ", classified: "
                  << (res["classified"].is_null() ? "none" : res["classified"].get<std::string>()) << ", consistent: "
                  << (res["consistent"].get<bool>() ? "yes" : "no") << "\n";
            if (res.contains("note") && !res["note"].get<std::string>().empty())
                o << "  note: " << res["note"].get<std::string>() << "\n";
        } else if (res.contains("applicable")) {
            o << "  applicable: " << (res["applicable"].get<bool>() ? "yes" : "no")
              << ", passed: " << (res["passed"].get<bool>() ? "yes" : "no") << "\n";
            if (!res["reason"].get<std::string>().empty()) o << "  reason: " << res["reason"].get<std::string>() << "\n";
        } else if (res.contains("passed")) {
            if (res.contains("cert_source")) o << "  certificate: " << res["certificate"].dump() << "\n";
            o << "  passed: " << (res["passed"].get<bool>() ? "yes" : "no");
            if (res.contains("violations")) o << " (" << res["violations"].dump() << " violations)";
            o << "\n";
            if (res.contains("witness") && !res["witness"].is_null())
                o << "  witness t=" << res["witness"]["t"].dump() << " s=" << res["witness"]["s"].dump()
                  << " margin=" << res["witness"]["margin"].dump() << "\n";
        } else if (res.contains("feasible")) {
            o << "  feasible: " << (res["feasible"].get<bool>() ? "yes" : "no") << "\n";
            o << "  certificate: " << res["certificate"].dump() << "\n";
        }
    }
    return o.str();
}

std::vector<std::filesystem::path> emit(const RunReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error("cannot write " + p.string());
        f << text;
        written.push_back(p);
    };
    const auto& formats = r.config.formats;
    auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
    if (wants("json")) write(dir / "report.json", to_json(r).dump(2) + "\n");
    if (wants("table")) write(dir / "report.txt", to_table(r));
    if (wants("plot")) {
        for (std::size_t i = 0; i < r.tasks.size(); ++i) {
            std::string stem = r.tasks[i].task.name;
            std::replace(stem.begin(), stem.end(), ':', '-');
            for (const auto& s : r.tasks[i].plots) {
                char idx[16];
                std::snprintf(idx, sizeof idx, "%02zu", i + 1);
                write(dir / (std::string(idx) + "-" + stem + "-" + s.name + ".dat"), format_series(s));
            }
        }
    }
    return written;
}

}  // namespace sesf
