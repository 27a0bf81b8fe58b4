#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besov/besov.hpp"

namespace {

using besov::io::Json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

double parse_extended(const std::string& text, const std::string& name) {
    if (text == "inf" || text == "infinity") return besov::kInfinity;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw besov::Error("--" + name + " expects a number or inf, got \"" + text + "\"");
    }
}

struct ParamOptions {
    double s = 0.5;
    double p = 1.0;
    std::string q = "1";
    std::optional<double> s_prime;
    double gamma = 0.5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--s", s, "smoothness s")->capture_default_str();
        cmd->add_option("--p", p, "integrability p")->capture_default_str();
        cmd->add_option("--q", q, "scale exponent q (number or inf)")->capture_default_str();
        cmd->add_option("--s-prime", s_prime, "auxiliary smoothness s' in (0, s); default s/2");
        cmd->add_option("--gamma", gamma, "median level gamma in (0, 1/2]")->capture_default_str();
    }

    besov::BesovParams build() const {
        besov::BesovParams params;
        params.s = s;
        params.p = p;
        params.q = parse_extended(q, "q");
        params.s_prime = s_prime.value_or(s / 2.0);
        params.gamma = gamma;
        params.validate();
        return params;
    }
};

struct GenOptions {
    std::string kind = "line-grid";
    std::size_t n = 8;
    std::size_t side = 3;
    int level = 2;
    double spacing = 1.0;
    std::size_t dim = 2;
    double extent = 1.0;
    bool random_weights = false;
    std::string edges_file;

    void attach(CLI::App* cmd, bool with_kind_flag) {
        auto* opt = cmd->add_option(with_kind_flag ? "--gen" : "--kind", kind,
                                    "generator: line-grid, square-grid, cantor, random-cloud, graph-metric");
        if (!with_kind_flag) opt->capture_default_str();
        cmd->add_option("--n", n, "points for line-grid and random-cloud")->capture_default_str();
        cmd->add_option("--side", side, "square-grid side")->capture_default_str();
        cmd->add_option("--level", level, "cantor level")->capture_default_str();
        cmd->add_option("--spacing", spacing, "grid spacing")->capture_default_str();
        cmd->add_option("--dim", dim, "random-cloud dimension")->capture_default_str();
        cmd->add_option("--extent", extent, "random-cloud cube side")->capture_default_str();
        cmd->add_flag("--random-weights", random_weights, "random-cloud weights uniform in [0.5, 1.5]");
        cmd->add_option("--edges", edges_file, "graph-metric edge file: JSON [[i, j, w], ...]");
    }

    besov::MetricMeasureSpace build(std::uint64_t seed) const {
        besov::GeneratorParams gp;
        gp.n = n;
        gp.side = side;
        gp.level = level;
        gp.spacing = spacing;
        gp.dim = dim;
        gp.extent = extent;
        gp.random_weights = random_weights;
        if (!edges_file.empty()) {
            for (const auto& e : besov::io::read_json(edges_file)) {
                gp.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>());
            }
        }
        return besov::generate(kind, gp, seed);
    }

    Json snapshot() const {
        Json j;
        j["kind"] = kind;
        j["n"] = n;
        j["side"] = side;
        j["level"] = level;
        j["spacing"] = spacing;
        j["dim"] = dim;
        j["extent"] = extent;
        j["random_weights"] = random_weights;
        if (!edges_file.empty()) j["edges"] = edges_file;
        return j;
    }
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        besov::io::write_text(path, text);
    }
}

Json with_manifest(const besov::io::RunManifest& manifest, Json body) {
    Json out;
    out["manifest"] = manifest.to_json();
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    return out;
}

besov::PointSet resolve_set(const std::string& text, const besov::MetricMeasureSpace& space) {
    if (text == "all") return space.all_points();
    return besov::normalize_set(besov::io::parse_set(text), space.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hajlasz-Besov capacities, medians and covering contents on finite metric measure spaces"};
    app.require_subcommand(1);
    unsigned threads = 1;
    bool timing = false;
    app.add_option("--threads", threads, "worker threads for independent suites")->capture_default_str();
    app.add_flag("--timing", timing, "record wall time in manifests (breaks byte-identical output)");

    besov::io::RunManifest manifest;
    const auto started = std::chrono::steady_clock::now();
    auto finish = [&] {
        if (timing) manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    // gen
    auto* gen = app.add_subcommand("gen", "generate a space file");
    GenOptions gen_opts;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen_opts.attach(gen, false);
    gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // median
    auto* med = app.add_subcommand("median", "gamma-median of a function over a set or a ball");
    std::string med_space;
    std::string med_function;
    std::string med_set = "all";
    std::optional<std::size_t> med_center;
    std::optional<double> med_radius;
    double med_gamma = 0.5;
    std::string med_out;
    med->add_option("--space", med_space, "space file")->required();
    med->add_option("--function", med_function, "function file: JSON array of n reals")->required();
    med->add_option("--set", med_set, "point indices \"0,3,7\" or all")->capture_default_str();
    med->add_option("--center", med_center, "ball center (with --radius)");
    med->add_option("--radius", med_radius, "open ball radius (with --center)");
    med->add_option("--gamma", med_gamma, "median level")->capture_default_str();
    med->add_option("--out", med_out, "output path (default stdout)");

    // convolve
    auto* conv = app.add_subcommand("convolve", "discrete gamma-median convolution at radius r");
    std::string conv_space;
    std::string conv_function;
    double conv_radius = 1.0;
    double conv_gamma = 0.5;
    std::string conv_out;
    conv->add_option("--space", conv_space, "space file")->required();
    conv->add_option("--function", conv_function, "function file")->required();
    conv->add_option("--radius", conv_radius, "scale r")->required();
    conv->add_option("--gamma", conv_gamma, "median level")->capture_default_str();
    conv->add_option("--out", conv_out, "output path (default stdout)");

    // gradient
    auto* grad = app.add_subcommand("gradient", "canonical and minimal fractional gradients with norms");
    std::string grad_space;
    std::string grad_function;
    std::string grad_mode = "both";
    ParamOptions grad_params;
    std::string grad_out;
    grad->add_option("--space", grad_space, "space file")->required();
    grad->add_option("--function", grad_function, "function file")->required();
    grad->add_option("--mode", grad_mode, "canonical, minimal or both")->check(CLI::IsMember({"canonical", "minimal", "both"}))->capture_default_str();
    grad_params.attach(grad);
    grad->add_option("--out", grad_out, "output path (default stdout)");

    // capacity
    auto* cap = app.add_subcommand("capacity", "Besov capacity of a set");
    std::string cap_space;
    std::string cap_set;
    ParamOptions cap_params;
    besov::SolverConfig cap_solver;
    std::string cap_out;
    cap->add_option("--space", cap_space, "space file")->required();
    cap->add_option("--set", cap_set, "point indices \"0,3,7\"")->required();
    cap_params.attach(cap);
    cap->add_option("--tol", cap_solver.tol, "relative tolerance")->capture_default_str();
    cap->add_option("--max-iter", cap_solver.max_iter, "iteration cap")->capture_default_str();
    cap->add_flag("--allow-empty", cap_solver.allow_empty, "return 0 for an empty set");
    cap->add_option("--out", cap_out, "output path (default stdout)");

    // content
    auto* cont = app.add_subcommand("content", "Netrusov-Hausdorff content of a set");
    std::string cont_space;
    std::string cont_set;
    std::string cont_gauge = "pow:0.5";
    double cont_theta = 1.0;
    std::string cont_radius = "1";
    std::string cont_method = "auto";
    bool cont_hausdorff = false;
    besov::ContentConfig cont_config;
    std::string cont_out;
    cont->add_option("--space", cont_space, "space file")->required();
    cont->add_option("--set", cont_set, "point indices \"0,3,7\"")->required();
    cont->add_option("--gauge", cont_gauge, "pow:d or table:t/v,...")->capture_default_str();
    cont->add_option("--theta", cont_theta, "class exponent theta")->capture_default_str();
    cont->add_option("--R", cont_radius, "radius cap (number or inf)")->capture_default_str();
    cont->add_option("--method", cont_method, "exact, greedy or auto")->check(CLI::IsMember({"exact", "greedy", "auto"}))->capture_default_str();
    cont->add_flag("--hausdorff", cont_hausdorff, "codimension-d Hausdorff content instead (power gauge only)");
    cont->add_option("--node-budget", cont_config.node_budget, "branch-and-bound node budget")->capture_default_str();
    cont->add_option("--out", cont_out, "output path (default stdout)");

    // compare
    auto* cmp = app.add_subcommand("compare", "capacity against both covering contents over a family of sets");
    std::string cmp_space;
    std::string cmp_family;
    ParamOptions cmp_params;
    besov::CompareConfig cmp_config;
    std::string cmp_method = "auto";
    std::string cmp_out;
    std::string cmp_json;
    cmp->add_option("--space", cmp_space, "space file")->required();
    cmp->add_option("--family", cmp_family, "family file: [{\"id\": ..., \"points\": [...]}, ...]")->required();
    cmp_params.attach(cmp);
    cmp->add_option("--R", cmp_config.radius, "radius R <= 1")->capture_default_str();
    cmp->add_option("--c", cmp_config.dilation, "dilation c of the lower content radius")->capture_default_str();
    cmp->add_option("--d", cmp_config.gauge_exponent, "lower gauge exponent d < sp (0 selects 0.4 sp)")->capture_default_str();
    cmp->add_option("--method", cmp_method, "content method")->check(CLI::IsMember({"exact", "greedy", "auto"}))->capture_default_str();
    cmp->add_option("--out", cmp_out, "CSV output path (default stdout)");
    cmp->add_option("--json", cmp_json, "also write a JSON report here");

    // verify
    auto* ver = app.add_subcommand("verify", "run the property suites; exit 0 iff every asserted check passes");
    std::string ver_space;
    GenOptions ver_gen;
    ver_gen.kind.clear();
    ParamOptions ver_params;
    besov::VerifyConfig ver_config;
    std::string ver_suites = "median,gradient,capacity,content,compare,oracle";
    std::string ver_fixture;
    std::string ver_out;
    std::string ver_csv;
    ver->add_option("--space", ver_space, "space file");
    ver_gen.attach(ver, true);
    ver_params.attach(ver);
    ver->add_option("--suites", ver_suites, "comma-separated subset of median,gradient,capacity,content,compare,oracle")->capture_default_str();
    ver->add_option("--seed", ver_config.seed, "random seed")->capture_default_str();
    ver->add_option("--trials", ver_config.trials, "trials for the median, gradient and content suites")->capture_default_str();
    ver->add_option("--capacity-trials", ver_config.capacity_trials, "trials for the capacity suite")->capture_default_str();
    ver->add_option("--oracle-trials", ver_config.oracle_trials, "random small spaces for the oracle suite")->capture_default_str();
    ver->add_option("--random-sets", ver_config.family_random_sets, "random sets in the comparison family")->capture_default_str();
    ver->add_option("--R", ver_config.radius, "radius R of the comparison")->capture_default_str();
    ver->add_flag("--assert-convolution-monotone", ver_config.assert_convolution_monotone,
                  "fail when the convolution error is not monotone in the scale");
    ver->add_option("--check-gradient-file", ver_fixture, "JSON {\"u\": [...], \"g\": {\"k\": [...]}} checked as a gradient of u");
    ver->add_option("--out", ver_out, "report path (default stdout)");
    ver->add_option("--csv", ver_csv, "also write one CSV row per check here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) {
            manifest.command = "gen";
            manifest.seed = gen_seed;
            manifest.config = gen_opts.snapshot();
            const auto space = gen_opts.build(gen_seed);
            finish();
            emit(gen_out, besov::io::dump(with_manifest(manifest, besov::io::space_to_json(space))));
            return 0;
        }
        if (med->parsed()) {
            const auto space = besov::io::load_space(med_space);
            const auto u = besov::io::field_from_json(besov::io::read_json(med_function), space.size());
            manifest.command = "median";
            manifest.add_artifact(med_space);
            manifest.add_artifact(med_function);
            manifest.config = {{"gamma", med_gamma}};
            Json body;
            if (med_center || med_radius) {
                if (!med_center || !med_radius) throw besov::Error("--center and --radius go together");
                if (*med_center >= space.size()) throw besov::Error("--center out of range");
                manifest.config["center"] = *med_center;
                manifest.config["radius"] = *med_radius;
                const besov::Ball ball{*med_center, *med_radius};
                body["members"] = space.members(ball.center, ball.radius);
                body["median"] = besov::gamma_median(space, u, ball, med_gamma);
            } else {
                const auto set = resolve_set(med_set, space);
                manifest.config["set"] = set;
                body["median"] = besov::gamma_median(space, u, set, med_gamma);
            }
            finish();
            emit(med_out, besov::io::dump(with_manifest(manifest, body)));
            return 0;
        }
        if (conv->parsed()) {
            const auto space = besov::io::load_space(conv_space);
            const auto u = besov::io::field_from_json(besov::io::read_json(conv_function), space.size());
            manifest.command = "convolve";
            manifest.add_artifact(conv_space);
            manifest.add_artifact(conv_function);
            manifest.config = {{"radius", conv_radius}, {"gamma", conv_gamma}};
            const auto pu = besov::partition_of_unity(space, conv_radius);
            Json body;
            body["values"] = besov::median_convolution(space, u, conv_radius, conv_gamma);
            body["centers"] = pu.centers;
            body["overlap"] = pu.overlap;
            body["lipschitz_bound"] = pu.lipschitz_bound();
            finish();
            emit(conv_out, besov::io::dump(with_manifest(manifest, body)));
            return 0;
        }
        if (grad->parsed()) {
            const auto space = besov::io::load_space(grad_space);
            const auto u = besov::io::field_from_json(besov::io::read_json(grad_function), space.size());
            const auto params = grad_params.build();
            manifest.command = "gradient";
            manifest.add_artifact(grad_space);
            manifest.add_artifact(grad_function);
            manifest.config = {{"params", besov::io::params_to_json(params)}, {"mode", grad_mode}};
            Json body;
            auto describe = [&](besov::GradientMode mode) {
                const auto norm = besov::besov_norm(space, u, params, mode);
                Json j;
                j["gradient"] = besov::io::gradient_to_json(norm.gradient);
                j["lp_part"] = norm.lp_part;
                j["grad_part"] = norm.grad_part;
                j["total"] = norm.total;
                j["exact"] = norm.exact;
                return j;
            };
            if (grad_mode != "minimal") body["canonical"] = describe(besov::GradientMode::canonical);
            if (grad_mode != "canonical") body["minimal"] = describe(besov::GradientMode::minimal);
            finish();
            emit(grad_out, besov::io::dump(with_manifest(manifest, body)));
            return 0;
        }
        if (cap->parsed()) {
            const auto space = besov::io::load_space(cap_space);
            const auto params = cap_params.build();
            const auto set = besov::normalize_set(besov::io::parse_set(cap_set), space.size());
            manifest.command = "capacity";
            manifest.add_artifact(cap_space);
            manifest.config = {{"set", set},
                               {"params", besov::io::params_to_json(params)},
                               {"tol", cap_solver.tol},
                               {"max_iter", cap_solver.max_iter}};
            const auto result = besov::capacity(space, set, params, cap_solver);
            finish();
            emit(cap_out, besov::io::dump(with_manifest(manifest, besov::io::capacity_to_json(result))));
            return 0;
        }
        if (cont->parsed()) {
            const auto space = besov::io::load_space(cont_space);
            const auto set = besov::normalize_set(besov::io::parse_set(cont_set), space.size());
            const auto gauge = besov::io::parse_gauge(cont_gauge);
            const double radius = parse_extended(cont_radius, "R");
            const auto method = besov::parse_content_method(cont_method);
            manifest.command = "content";
            manifest.add_artifact(cont_space);
            manifest.config = {{"set", set},          {"gauge", gauge.describe()}, {"theta", cont_theta},
                               {"R", cont_radius},    {"method", cont_method},     {"hausdorff", cont_hausdorff},
                               {"node_budget", cont_config.node_budget}};
            besov::ContentResult result;
            if (cont_hausdorff) {
                if (!gauge.is_power()) throw besov::Error("--hausdorff needs a power gauge");
                result = besov::hausdorff_content(space, set, gauge.exponent(), radius, method, cont_config);
            } else {
                result = besov::netrusov_content(space, set, gauge, cont_theta, radius, method, cont_config);
            }
            finish();
            emit(cont_out, besov::io::dump(with_manifest(manifest, besov::io::content_to_json(result))));
            return 0;
        }
        if (cmp->parsed()) {
            const auto space = besov::io::load_space(cmp_space);
            const auto params = cmp_params.build();
            const auto family = besov::io::family_from_json(besov::io::read_json(cmp_family));
            cmp_config.method = besov::parse_content_method(cmp_method);
            manifest.command = "compare";
            manifest.add_artifact(cmp_space);
            manifest.add_artifact(cmp_family);
            manifest.config = {{"params", besov::io::params_to_json(params)},
                               {"R", cmp_config.radius},
                               {"c", cmp_config.dilation},
                               {"d", cmp_config.gauge_exponent},
                               {"method", cmp_method}};
            const auto report = besov::compare_capacity_content(space, params, family, cmp_config);
            finish();
            emit(cmp_out, "# " + with_manifest(manifest, Json::object()).dump() + "\n" + besov::io::compare_to_csv(report));
            if (!cmp_json.empty()) {
                Json body;
                body["max_ratio54"] = report.max_ratio54;
                body["max_ratio55"] = report.max_ratio55;
                body["all_cutoff_bounds_hold"] = report.all_cutoff_bounds_hold;
                body["gauge"] = {{"leading_exponent", report.gauge.leading_exponent},
                                 {"admissible", report.gauge.admissible},
                                 {"integral", report.gauge.integral}};
                body["rows"] = Json::array();
                for (const auto& r : report.rows) {
                    Json row;
                    row["set_id"] = r.set_id;
                    row["cap"] = r.cap;
                    row["nh_upper"] = r.nh_upper;
                    row["nh_lower"] = r.nh_lower ? Json(*r.nh_lower) : Json(nullptr);
                    row["ratio54"] = r.ratio54 ? Json(*r.ratio54) : Json(nullptr);
                    row["ratio55"] = r.ratio55 ? Json(*r.ratio55) : Json(nullptr);
                    row["status"] = r.status;
                    row["cutoff_bound_holds"] = r.cutoff_bound_holds;
                    body["rows"].push_back(std::move(row));
                }
                besov::io::write_text(cmp_json, besov::io::dump(with_manifest(manifest, body)));
            }
            return report.all_cutoff_bounds_hold ? 0 : kExitFailure;
        }
        if (ver->parsed()) {
            if (ver_space.empty() == ver_gen.kind.empty()) throw besov::Error("verify needs exactly one of --space and --gen");
            ver_config.params = ver_params.build();
            ver_config.threads = threads;
            ver_config.suites.clear();
            for (auto& name : besov::io::parse_suites(ver_suites)) ver_config.suites.push_back(std::move(name));
            besov::check_suite_names(ver_config.suites);
            manifest.command = "verify";
            manifest.seed = ver_config.seed;
            std::optional<besov::MetricMeasureSpace> space;
            if (!ver_space.empty()) {
                space = besov::io::load_space(ver_space);
                manifest.add_artifact(ver_space);
            } else {
                space = ver_gen.build(ver_config.seed);
                manifest.config["generator"] = ver_gen.snapshot();
            }
            if (!ver_fixture.empty()) {
                const auto fixture = besov::io::read_json(ver_fixture);
                ver_config.gradient_fixture = besov::GradientFixture{
                    besov::io::field_from_json(fixture.at("u"), space->size()),
                    besov::io::gradient_from_json(fixture.at("g"), space->size())};
                manifest.add_artifact(ver_fixture);
            }
            manifest.config["params"] = besov::io::params_to_json(ver_config.params);
            manifest.config["suites"] = ver_config.suites;
            manifest.config["trials"] = ver_config.trials;
            manifest.config["capacity_trials"] = ver_config.capacity_trials;
            manifest.config["oracle_trials"] = ver_config.oracle_trials;
            manifest.config["random_sets"] = ver_config.family_random_sets;
            manifest.config["R"] = ver_config.radius;
            manifest.config["assert_convolution_monotone"] = ver_config.assert_convolution_monotone;
            const auto result = besov::run_verify(*space, ver_config);
            finish();
            Json body;
            body["passed"] = result.passed();
            body["suites"] = Json::array();
            for (const auto& rep : result.suites) body["suites"].push_back(besov::io::suite_to_json(rep));
            emit(ver_out, besov::io::dump(with_manifest(manifest, body)));
            if (!ver_csv.empty()) besov::io::write_text(ver_csv, besov::io::suites_to_csv(result.suites));
            for (const auto& rep : result.suites) {
                for (const auto& c : rep.checks) {
                    if (c.passed()) continue;
                    std::cerr << "FAIL " << rep.suite << "/" << c.name << ": " << c.failures << " of " << c.trials << "\n";
                    for (const auto& w : c.witnesses) std::cerr << "  witness: " << w << "\n";
                }
            }
            return result.passed() ? 0 : kExitFailure;
        }
    } catch (const besov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
