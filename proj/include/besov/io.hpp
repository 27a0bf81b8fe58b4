#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "besov/capacity.hpp"
#include "besov/compare.hpp"
#include "besov/content.hpp"
#include "besov/generate.hpp"
#include "besov/gradient.hpp"
#include "besov/report.hpp"
#include "besov/space.hpp"

namespace besov::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(origin + ": " + e.what());
    }
}

inline Json read_json(const std::string& path) { return parse_json(read_text(path), path); }

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream ss;
    ss << std::hex;
    ss.width(16);
    ss.fill('0');
    ss << h;
    return ss.str();
}

inline std::vector<double> to_reals(const Json& j, const std::string& what) {
    if (!j.is_array()) throw Error(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw Error(what + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

/**
 * Accepted layouts:
 *   {"coords": [[...], ...], "metric": "euclidean", "weights": [...]}
 *   {"dist": [[...], ...], "weights": [...]}
 *   {"edges": [[i, j, w], ...], "n": n, "metric": "graph", "weights": [...]}
 * Weights default to 1. The space constructor validates the result.
 */
inline MetricMeasureSpace space_from_json(const Json& j) {
    if (!j.is_object()) throw Error("space file must hold a JSON object");
    std::vector<double> weights;
    if (j.contains("weights")) weights = to_reals(j["weights"], "weights");
    if (j.contains("coords")) {
        const std::string metric = j.value("metric", "euclidean");
        if (metric != "euclidean") throw Error("coords require metric \"euclidean\"");
        std::vector<std::vector<double>> coords;
        for (const auto& row : j["coords"]) coords.push_back(to_reals(row, "coords row"));
        if (weights.empty()) weights.assign(coords.size(), 1.0);
        if (weights.size() != coords.size()) throw Error("weights must have one entry per point");
        auto dist = euclidean_distances(coords);
        return MetricMeasureSpace(std::move(dist), std::move(weights), std::move(coords));
    }
    if (j.contains("dist")) {
        const auto& rows = j["dist"];
        if (!rows.is_array()) throw Error("dist must be a square matrix");
        const std::size_t n = rows.size();
        std::vector<double> dist;
        for (const auto& row : rows) {
            auto r = to_reals(row, "dist row");
            if (r.size() != n) throw Error("dist must be a square matrix");
            dist.insert(dist.end(), r.begin(), r.end());
        }
        if (weights.empty()) weights.assign(n, 1.0);
        if (weights.size() != n) throw Error("weights must have one entry per point");
        return MetricMeasureSpace(std::move(dist), std::move(weights));
    }
    if (j.contains("edges")) {
        if (j.value("metric", "graph") != "graph") throw Error("edges require metric \"graph\"");
        if (!j.contains("n")) throw Error("graph spaces need \"n\"");
        const auto n = j["n"].get<std::size_t>();
        std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 3) throw Error("edges must be [i, j, w] triples");
            edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>());
        }
        return graph_metric(n, edges, weights);
    }
    throw Error("space file needs one of \"coords\", \"dist\" or \"edges\"");
}

inline Json space_to_json(const MetricMeasureSpace& space) {
    Json j;
    Json rows = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < space.size(); ++k) row.push_back(space.d(i, k));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    j["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
    if (!space.coords().empty()) j["coords"] = space.coords();
    return j;
}

inline MetricMeasureSpace load_space(const std::string& path) {
    try {
        return space_from_json(read_json(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

/// A function file: a JSON array of n reals.
inline ScalarField field_from_json(const Json& j, std::size_t n) {
    auto u = to_reals(j, "function");
    if (u.size() != n) throw Error("function has " + std::to_string(u.size()) + " values, the space has " + std::to_string(n));
    for (const double v : u) {
        if (!std::isfinite(v)) throw Error("function values must be finite");
    }
    return u;
}

/// {"k": [g_k values...]} with k the dyadic scale.
inline Json gradient_to_json(const GradientSequence& g) {
    Json j = Json::object();
    for (const auto& [k, f] : g.scales()) j[std::to_string(k)] = f;
    return j;
}

inline GradientSequence gradient_from_json(const Json& j, std::size_t n) {
    if (!j.is_object()) throw Error("gradient must be an object keyed by scale");
    GradientSequence g(n);
    for (const auto& [key, value] : j.items()) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw Error("gradient scale keys must be integers, got \"" + key + "\"");
        }
        auto f = to_reals(value, "gradient field");
        for (const double v : f) {
            if (!(v >= 0.0)) throw Error("gradient values must be nonnegative");
        }
        g.set(k, std::move(f));
    }
    return g;
}

inline Json covering_to_json(const Covering& cov) {
    Json out = Json::array();
    for (const auto& b : cov.balls) out.push_back({{"center", b.center}, {"radius", b.radius}, {"class", radius_class(b.radius)}});
    return out;
}

/// "0,3,7" -> {0, 3, 7}; empty text gives the empty set.
inline PointSet parse_set(const std::string& text) {
    PointSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (v < 0 || item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw Error("bad point index \"" + item + "\"");
        }
    }
    return out;
}

inline std::vector<std::string> parse_suites(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

/// "pow:d" or "table:t1/v1,t2/v2,...".
inline Gauge parse_gauge(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("gauge must look like pow:d or table:t/v,...");
    const auto kind = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    try {
        if (kind == "pow") return Gauge::power(std::stod(rest));
        if (kind == "table") {
            std::vector<double> t;
            std::vector<double> v;
            std::stringstream ss(rest);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto slash = item.find('/');
                if (slash == std::string::npos) throw Error("table gauge entries must be t/v");
                t.push_back(std::stod(item.substr(0, slash)));
                v.push_back(std::stod(item.substr(slash + 1)));
            }
            return Gauge::table(std::move(t), std::move(v));
        }
    } catch (const std::invalid_argument&) {
        throw Error("bad number in gauge \"" + text + "\"");
    }
    throw Error("unknown gauge kind \"" + kind + "\"");
}

/// Either [{"id": ..., "points": [...]}, ...] or {"sets": [...]}.
inline std::vector<NamedSet> family_from_json(const Json& j) {
    const Json& list = j.is_object() && j.contains("sets") ? j["sets"] : j;
    if (!list.is_array()) throw Error("family must be an array of {\"id\", \"points\"} objects");
    std::vector<NamedSet> out;
    for (const auto& item : list) {
        NamedSet named;
        named.id = item.at("id").is_string() ? item.at("id").get<std::string>() : item.at("id").dump();
        for (const auto& x : item.at("points")) named.points.push_back(x.get<std::size_t>());
        out.push_back(std::move(named));
    }
    return out;
}

inline Json family_to_json(const std::vector<NamedSet>& family) {
    Json out = Json::array();
    for (const auto& f : family) out.push_back({{"id", f.id}, {"points", f.points}});
    return out;
}

inline Json params_to_json(const BesovParams& p) {
    Json j;
    j["s"] = p.s;
    j["p"] = p.p;
    if (std::isfinite(p.q)) {
        j["q"] = p.q;
    } else {
        j["q"] = "inf";
    }
    j["s_prime"] = p.s_prime;
    j["gamma"] = p.gamma;
    return j;
}

inline Json capacity_to_json(const CapacityResult& r) {
    Json j;
    j["value"] = r.value;
    j["lp_part"] = r.lp_part;
    j["grad_part"] = r.grad_part;
    j["lower_bound"] = r.lower_bound;
    j["status"] = to_string(r.status);
    j["iterations"] = r.iterations;
    j["final_step"] = r.final_step;
    j["start"] = r.start;
    j["minimizer_u"] = r.minimizer_u;
    j["minimizer_G"] = gradient_to_json(r.minimizer_G);
    return j;
}

inline Json content_to_json(const ContentResult& r) {
    Json j;
    j["value"] = r.value;
    j["method"] = to_string(r.method);
    j["candidates"] = r.candidates;
    j["nodes"] = r.nodes;
    j["covering"] = covering_to_json(r.covering);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline Json check_to_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["property"] = c.property;
    j["asserted"] = c.asserted;
    j["passed"] = c.passed();
    j["trials"] = c.trials;
    j["failures"] = c.failures;
    j["metrics"] = Json::object();
    for (const auto& [k, v] : c.metrics) j["metrics"][k] = v;
    j["witnesses"] = c.witnesses;
    return j;
}

inline Json suite_to_json(const SuiteReport& rep) {
    Json j;
    j["suite"] = rep.suite;
    j["passed"] = rep.passed();
    j["checks"] = Json::array();
    for (const auto& c : rep.checks) j["checks"].push_back(check_to_json(c));
    return j;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string compare_to_csv(const CompareReport& rep) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::string out = "set_id,cap,nh_upper,nh_lower,ratio54,ratio55,status\n";
    for (const auto& r : rep.rows) {
        out += csv_field(r.set_id) + "," + format_double(r.cap) + "," + format_double(r.nh_upper) + "," + opt(r.nh_lower) + "," +
               opt(r.ratio54) + "," + opt(r.ratio55) + "," + csv_field(r.status) + "\n";
    }
    return out;
}

/// One row per check: suite, check, asserted, passed, trials, failures, metrics as key=value pairs.
inline std::string suites_to_csv(const std::vector<SuiteReport>& suites) {
    std::string out = "suite,check,asserted,passed,trials,failures,metrics\n";
    for (const auto& rep : suites) {
        for (const auto& c : rep.checks) {
            std::string metrics;
            for (const auto& [k, v] : c.metrics) metrics += (metrics.empty() ? "" : ";") + k + "=" + format_double(v);
            out += csv_field(rep.suite) + "," + csv_field(c.name) + "," + (c.asserted ? "true" : "false") + "," +
                   (c.passed() ? "true" : "false") + "," + std::to_string(c.trials) + "," + std::to_string(c.failures) + "," +
                   csv_field(metrics) + "\n";
        }
    }
    return out;
}

/**
 * Provenance block embedded in every output. Identical manifests imply identical
 * outputs; wall time is included only on request since it breaks byte equality.
 */
struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> artifacts;  ///< (path, content hash)
    std::optional<double> wall_seconds;

    void add_artifact(const std::string& path) { artifacts.emplace_back(path, content_hash(read_text(path))); }

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["tool_version"] = kToolVersion;
        j["seed"] = seed;
        j["config"] = config;
        j["artifacts"] = Json::array();
        for (const auto& [path, hash] : artifacts) j["artifacts"].push_back({{"path", path}, {"fnv1a64", hash}});
        if (wall_seconds) j["wall_seconds"] = *wall_seconds;
        return j;
    }
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace besov::io
