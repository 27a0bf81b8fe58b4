// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path to besov CLI>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "besov/besov.hpp"

using namespace besov;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail.clear();
        pass = false;
        if (detail.size() < 600) detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& text) {
        if (pass) detail += (detail.empty() ? "" : "; ") + text;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

BesovParams params(double s, double p, double q) {
    BesovParams out;
    out.s = s;
    out.p = p;
    out.q = q;
    out.s_prime = s / 2.0;
    return out;
}

MetricMeasureSpace two_point(double d) { return MetricMeasureSpace({0.0, d, d, 0.0}, {1.0, 1.0}); }

/// Fails the outcome for every failing asserted check of the report, with its first witness.
void require_passed(Outcome& out, const SuiteReport& rep, const std::string& where) {
    for (const auto& c : rep.checks) {
        if (c.passed()) continue;
        out.fail(where + " " + rep.suite + "." + c.name + " " + std::to_string(c.failures) + "/" + std::to_string(c.trials) +
                 (c.witnesses.empty() ? "" : " e.g. " + c.witnesses.front()));
    }
}

/// Fails unless the named check ran at least `trials` times and is asserted.
void require_asserted(Outcome& out, const SuiteReport& rep, const std::string& name, std::size_t trials) {
    const auto* c = rep.find(name);
    if (!c) {
        out.fail("missing check " + name);
    } else if (!c->asserted) {
        out.fail(name + " is not asserted");
    } else if (c->trials < trials) {
        out.fail(name + " ran " + std::to_string(c->trials) + " < " + std::to_string(trials) + " trials");
    }
}

/// max/min - 1 over positive values.
double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo - 1.0 : (*hi > 0.0 ? kInfinity : 0.0);
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (const double x : v) out += (out.empty() ? "" : ",") + format_double(x);
    return out;
}

Outcome ac1_pinch() {
    Outcome out;
    std::vector<std::pair<std::string, MetricMeasureSpace>> spaces;
    for (const std::size_t n : {2, 4, 8, 16, 32, 64}) spaces.emplace_back("line" + std::to_string(n), line_grid(n));
    for (const std::size_t side : {2, 4, 8}) spaces.emplace_back("square" + std::to_string(side), square_grid(side));
    for (const int level : {1, 2, 3, 4}) spaces.emplace_back("cantor" + std::to_string(level), cantor(level));
    for (const std::size_t n : {4, 8, 16, 32}) spaces.emplace_back("cloud" + std::to_string(n), random_cloud(n, n, 2, 1.0, true));
    const std::vector<BesovParams> grid{params(0.5, 1, 1), params(0.5, 2, 2), params(0.3, 1, 2), params(0.7, 2, kInfinity)};
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t runs = 0;
    for (const auto& [name, space] : spaces) {
        for (const auto& pr : grid) {
            const double value = capacity(space, space.all_points(), pr).value;
            const double rel = std::abs(value - space.total_measure()) / space.total_measure();
            worst = std::max(worst, rel);
            ++runs;
            if (rel > 1e-6) out.fail(name + " p=" + format_double(pr.p) + " q=" + format_double(pr.q) + " C(X)=" + format_double(value));
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 60.0) out.fail("runtime " + fixed(elapsed) + " s >= 60 s");
    out.note(std::to_string(runs) + " spaces x params, max relative error " + format_double(worst));
    return out;
}

Outcome ac2_closed_forms() {
    Outcome out;
    const auto pr = params(0.5, 1, 1);
    const double a = capacity(two_point(1.9), PointSet{0}, pr).value;
    const double a_expected = 1.0 + 1.0 / std::sqrt(1.9);
    if (std::abs(a - a_expected) > 1e-4 * a_expected) out.fail("d=1.9 gives " + format_double(a));
    const double b = capacity(two_point(1.0), PointSet{0}, pr).value;
    if (std::abs(b - 2.0) > 1e-6 * 2.0) out.fail("d=1 gives " + format_double(b));
    out.note("d=1.9: " + format_double(a) + ", d=1: " + format_double(b));
    return out;
}

Outcome ac3_oracle() {
    Outcome out;
    const auto start = Clock::now();
    const auto rep = check_oracle_agreement(50, 20240601);
    const double elapsed = seconds_since(start);
    require_passed(out, rep, "");
    require_asserted(out, rep, "capacity_matches_brute_force", 50);
    if (elapsed >= 300.0) out.fail("runtime " + fixed(elapsed) + " s >= 300 s");
    const auto& m = rep.find("capacity_matches_brute_force")->metrics;
    const auto& c = rep.find("content_matches_brute_force")->metrics;
    out.note("50 spaces, capacity max rel diff " + format_double(m.at("max_relative_difference")) + ", content max rel diff " +
             format_double(c.count("max_relative_difference") ? c.at("max_relative_difference") : 0.0) + ", " +
             fixed(elapsed) + " s");
    return out;
}

Outcome ac4_median() {
    Outcome out;
    const std::vector<std::pair<std::string, MetricMeasureSpace>> spaces{
        {"line8", line_grid(8)}, {"cantor3", cantor(3)}, {"cloud12", random_cloud(12, 5, 2, 1.0, true)}};
    std::uint64_t seed = 41;
    for (const auto& [name, space] : spaces) {
        const auto rep = check_median_properties(space, 1000, seed++);
        require_passed(out, rep, name);
        for (const auto* check : {"level_monotone", "order_monotone", "subset_comparison", "shift", "absolute_value",
                                  "moment_bound", "small_ball"}) {
            require_asserted(out, rep, check, 1000);
        }
        // Scaling draws c of either sign; only c >= 0 is asserted.
        const auto* pos = rep.find("positive_scaling");
        const auto* neg = rep.find("negative_scaling");
        require_asserted(out, rep, "positive_scaling", 1);
        if (pos && neg && pos->trials + neg->trials < 1000) out.fail(name + " scaling ran on fewer than 1000 instances");
    }
    out.note("8 properties on 1000 instances each on line8, cantor3, cloud12; scaling asserted for c >= 0");
    return out;
}

Outcome ac5_gradients() {
    Outcome out;
    const std::vector<std::pair<std::string, MetricMeasureSpace>> spaces{{"line8", line_grid(8)}, {"cantor2", cantor(2)}};
    std::uint64_t seed = 51;
    for (const auto& [name, space] : spaces) {
        for (const auto& pr : {params(0.5, 1, 1), params(0.4, 2, 2)}) {
            const auto rep = check_gradient_constructions(space, pr, 1000, seed++);
            require_passed(out, rep, name + " p=" + format_double(pr.p));
            for (const auto* check : {"canonical_feasible", "minimal_feasible", "max_min_feasible", "sup_feasible",
                                      "derived_feasible", "product_rho_feasible", "product_h_feasible"}) {
                require_asserted(out, rep, check, 1000);
            }
        }
    }
    out.note("7 constructions x 1000 instances on line8, cantor2 with (p,q) in {(1,1),(2,2)}");
    return out;
}

Outcome ac6_inequalities() {
    Outcome out;
    const auto seq = check_sequence_inequalities(1000, 61);
    require_passed(out, seq, "");
    require_asserted(out, seq, "elementary", 1000);
    require_asserted(out, seq, "summing", 1000);
    const auto med = check_median_properties(cantor(3), 1000, 62);
    require_passed(out, med, "cantor3");
    require_asserted(out, med, "deviation_factor_two", 1000);

    std::string constants;
    const std::vector<std::pair<std::string, MetricMeasureSpace>> spaces{{"line8", line_grid(8)}, {"cantor3", cantor(3)}};
    for (const auto& [name, space] : spaces) {
        std::vector<double> per_seed;
        for (const std::uint64_t seed : {1, 2, 3}) {
            const auto est = poincare_constant(space, params(0.5, 1, 1), 200, seed);
            if (est.zero_denominator_failures > 0) out.fail(name + " zero-denominator terms with nonzero oscillation");
            if (!std::isfinite(est.constant)) out.fail(name + " unbounded constant");
            per_seed.push_back(est.constant);
        }
        if (spread(per_seed) > 0.10) out.fail(name + " constant unstable across seeds: " + join(per_seed));
        constants += " " + name + "=" + join(per_seed);
    }
    out.note("summing, elementary, factor-two deviation over 1000 instances; median Poincare constants" + constants);
    return out;
}

Outcome ac7_capacity_order() {
    Outcome out;
    std::uint64_t seed = 71;
    for (const auto& [name, space] : std::vector<std::pair<std::string, MetricMeasureSpace>>{{"line8", line_grid(8)}, {"cantor2", cantor(2)}}) {
        for (const auto& pr : {params(0.5, 1, 1), params(0.5, 2, 2), params(0.5, 1, 2)}) {
            const auto rep = check_capacity_properties(space, pr, 10, seed++);
            require_passed(out, rep, name + " p=" + format_double(pr.p) + " q=" + format_double(pr.q));
            for (const auto* check : {"monotone", "measure_lower_bound", "decreasing_chain"}) require_asserted(out, rep, check, 10);
        }
    }
    out.note("monotonicity, mu(E) <= C(E), stabilized chains exact on line8 and cantor2 for three (p,q)");
    return out;
}

Outcome ac8_mechanism() {
    Outcome out;
    struct Case {
        std::string name;
        MetricMeasureSpace space;
        BesovParams params;
    };
    const std::vector<Case> cases{{"cantor3", cantor(3), params(0.5, 1, 1)},
                                  {"cantor3", cantor(3), params(0.5, 1, 2)},
                                  {"line16", line_grid(16, 1.0 / 15.0), params(0.5, 1, 1)},
                                  {"line16", line_grid(16, 1.0 / 15.0), params(0.5, 1, 2)},
                                  {"line8", line_grid(8, 1.0 / 7.0), params(0.5, 2, 2)}};
    std::string summary;
    for (const auto& c : cases) {
        for (const double radius : {1.0, 0.125}) {
            std::vector<double> upper;
            std::vector<double> lower;
            std::size_t rows = 0;
            std::size_t annulus = 0;
            for (const std::uint64_t seed : {1, 2, 3}) {
                CompareConfig cc;
                cc.radius = radius;
                const auto rep = compare_capacity_content(c.space, c.params, standard_family(c.space, 6, seed), cc);
                const std::string where = c.name + " p=" + format_double(c.params.p) + " q=" + format_double(c.params.q) +
                                          " R=" + format_double(radius) + " seed=" + std::to_string(seed);
                if (!rep.gauge.admissible || !(rep.gauge.leading_exponent < c.params.s * c.params.p)) {
                    out.fail(where + " lower gauge not admissible");
                }
                for (const auto& row : rep.rows) {
                    if (!row.cutoff_bound_holds) {
                        out.fail(where + " " + row.set_id + " cap=" + format_double(row.cap) + " > cutoff " + format_double(row.worst_cutoff_value));
                    }
                    if (row.ratio54 && !std::isfinite(*row.ratio54)) out.fail(where + " " + row.set_id + " unbounded upper ratio");
                    if (row.ratio55) {
                        ++annulus;
                        if (!std::isfinite(*row.ratio55)) out.fail(where + " " + row.set_id + " unbounded lower ratio");
                    }
                }
                rows += rep.rows.size();
                upper.push_back(rep.max_ratio54);
                lower.push_back(rep.max_ratio55);
            }
            const std::string where = c.name + " p=" + format_double(c.params.p) + " q=" + format_double(c.params.q) + " R=" + format_double(radius);
            if (spread(upper) > 0.10) out.fail(where + " upper ratio unstable across seeds: " + join(upper));
            if (annulus > 0 && spread(lower) > 0.10) out.fail(where + " lower ratio unstable across seeds: " + join(lower));
            summary += " " + where + " max54=" + format_double(upper.front()) +
                       (annulus > 0 ? " max55=" + format_double(lower.front()) : std::string(" annulus-unmet")) + " rows=" +
                       std::to_string(rows) + ";";
        }
    }
    out.note("cutoff bound exact on every covering;" + summary);
    return out;
}

Outcome ac9_convolution() {
    Outcome out;
    const std::vector<std::pair<std::string, MetricMeasureSpace>> spaces{
        {"line8", line_grid(8)}, {"cantor3", cantor(3)}, {"cloud12", random_cloud(12, 5, 2, 1.0, true)}, {"square4", square_grid(4)}};
    std::uint64_t seed = 91;
    std::size_t instances = 0;
    for (const auto& [name, space] : spaces) {
        const auto rep = check_median_convolution(space, 25, seed++, 0.5, true);
        require_passed(out, rep, name);
        require_asserted(out, rep, "error_monotone", 25);
        instances += rep.find("error_monotone")->trials;
    }
    out.note(std::to_string(instances) + " instances, exact small-radius identity and monotone error");
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    try {
        return io::read_text(path.string());
    } catch (const Error&) {
        return {};
    }
}

Outcome ac10_determinism(const std::string& cli) {
    Outcome out;
    const auto dir = std::filesystem::temp_directory_path() / ("besov_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::vector<std::string> variants{"", " --threads 4"};
    std::vector<std::string> reports;
    for (std::size_t run = 0; run < 3; ++run) {
        const auto path = dir / ("report" + std::to_string(run) + ".json");
        const std::string threads = run == 2 ? " --threads 4" : "";
        const std::string cmd = "\"" + cli + "\"" + threads + " verify --gen cantor --level 2 --seed 7 --trials 60 --capacity-trials 3 --oracle-trials 6 --out \"" +
                                path.string() + "\" > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (status == -1) out.fail("could not run " + cli);
        reports.push_back(slurp(path));
        if (reports.back().empty()) out.fail("run " + std::to_string(run) + " wrote no report");
    }
    if (reports[0] != reports[1]) out.fail("two identical runs differ");
    if (reports[0] != reports[2]) out.fail("--threads 4 report differs from the single-thread report");
    out.note("3 runs byte-identical (" + std::to_string(reports[0].size()) + " bytes, hash " + io::content_hash(reports[0]) + ")");
    std::filesystem::remove_all(dir);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to besov CLI>\n";
        return 2;
    }
    const std::string cli = argv[1];
    struct Criterion {
        const char* id;
        const char* title;
        Outcome (*run)(const std::string&);
    };
    const std::vector<Criterion> criteria{
        {"AC1", "whole-space capacity equals total measure", [](const std::string&) { return ac1_pinch(); }},
        {"AC2", "two-point closed forms", [](const std::string&) { return ac2_closed_forms(); }},
        {"AC3", "solver agrees with brute force", [](const std::string&) { return ac3_oracle(); }},
        {"AC4", "median properties", [](const std::string&) { return ac4_median(); }},
        {"AC5", "gradient constructions stay feasible", [](const std::string&) { return ac5_gradients(); }},
        {"AC6", "sequence, deviation and Poincare inequalities", [](const std::string&) { return ac6_inequalities(); }},
        {"AC7", "capacity order properties", [](const std::string&) { return ac7_capacity_order(); }},
        {"AC8", "capacity against covering contents", [](const std::string&) { return ac8_mechanism(); }},
        {"AC9", "median convolution error monotone in the scale", [](const std::string&) { return ac9_convolution(); }},
        {"AC10", "verify reports are byte-identical", [](const std::string& path) { return ac10_determinism(path); }},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Outcome result;
        try {
            result = c.run(cli);
        } catch (const std::exception& e) {
            result.fail(std::string("exception: ") + e.what());
        }
        all = all && result.pass;
        std::cout << c.id << ' ' << (result.pass ? "PASS" : "FAIL") << " [" << c.title << "] " << result.detail << " ("
                  << fixed(seconds_since(start)) << " s)" << std::endl;
    }
    return all ? 0 : 1;
}
