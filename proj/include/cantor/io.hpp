#pragma once
// Serialization: generator specs as JSON documents (schema documented in
// docs/generator-spec.schema.json), sequence and digit files as
// newline-separated decimal integers, reports as JSON and flat CSV,
// rectangle grids as CSV and SVG, and run manifests sufficient to re-run a
// command bit-identically.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "complexity.hpp"
#include "constructions.hpp"
#include "distribution.hpp"
#include "errors.hpp"
#include "expansion.hpp"
#include "normality.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Rationals travel as "p/q" strings; decimal renderings are additive extras.

inline json rational_json(const Rational& x) { return to_string(x); }

inline json rational_json_pair(const Rational& x) {
    return json{{"exact", to_string(x)}, {"decimal", to_decimal_string(x)}};
}

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    fail(errc::bad_params, "expected a rational as \"p/q\" string or integer");
}

// ---------------------------------------------------------------------------
// GeneratorSpec <-> JSON

inline json spec_to_json(const GeneratorSpec& spec);

namespace detail {

struct SpecJson {
    json operator()(const PeriodicSpec& s) const {
        return json{{"type", "periodic"}, {"pattern", s.pattern}};
    }
    json operator()(const RotationSpec& s) const {
        json cells = json::array();
        for (const auto& c : s.cells)
            cells.push_back(json{{"from", to_string(c.lo)}, {"to", to_string(c.hi)}, {"base", c.base}});
        return json{{"type", "rotation"}, {"alpha", to_string(s.alpha)}, {"cells", cells}};
    }
    json operator()(const NilSpec& s) const {
        return json{{"type", "nil"},
                    {"alpha", to_string(s.alpha)},
                    {"base_ge", s.base_ge},
                    {"base_lt", s.base_lt}};
    }
    json operator()(const SubstitutionSpec& s) const {
        json rules = json::object(), bases = json::object();
        for (const auto& [a, w] : s.rules) rules[std::string(1, a)] = w;
        for (const auto& [a, b] : s.base_of) bases[std::string(1, a)] = b;
        return json{{"type", "substitution"},
                    {"rules", rules},
                    {"bases", bases},
                    {"start", std::string(1, s.start)},
                    {"primitivity_bound", s.primitivity_bound}};
    }
    json operator()(const ConcatenationSpec& s) const {
        const char* kind = s.kind == ConcatKind::champernowne ? "champernowne"
                           : s.kind == ConcatKind::squares    ? "squares"
                           : s.kind == ConcatKind::primes     ? "primes"
                                                              : "aks";
        return json{{"type", "concatenation"}, {"kind", kind}, {"radix", s.radix}, {"offset", s.digit_offset}};
    }
    json operator()(const BernoulliSpec& s) const {
        json weights = json::array();
        for (const auto& w : s.weights) weights.push_back(to_string(w));
        return json{{"type", "bernoulli"}, {"alphabet", s.alphabet}, {"weights", weights}, {"seed", s.seed}};
    }
    json operator()(const NonErgodicWordSpec& s) const {
        json bases = json::object();
        for (const auto& [a, b] : s.base_of) bases[std::string(1, a)] = b;
        return json{{"type", "nonergodic_word"}, {"bases", bases}};
    }
    json operator()(const FileSpec& s) const {
        return json{{"type", "file"}, {"path", s.path}};
    }
};

} // namespace detail

inline json spec_to_json(const GeneratorSpec& spec) {
    return std::visit(detail::SpecJson{}, spec);
}

namespace detail {
GeneratorSpec spec_from_json_impl(const json& j);
}

inline GeneratorSpec spec_from_json(const json& j) {
    GeneratorSpec spec = detail::spec_from_json_impl(j);
    validate_spec(spec);
    return spec;
}

inline GeneratorSpec detail::spec_from_json_impl(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        fail(errc::invalid_spec, "generator spec must be an object with a \"type\"");
    std::string type = j.at("type").get<std::string>();
    if (type == "periodic") {
        PeriodicSpec s;
        s.pattern = j.at("pattern").get<std::vector<Base>>();
        return s;
    }
    if (type == "rotation") {
        RotationSpec s;
        if (j.contains("preset")) {
            std::string p = j.at("preset").get<std::string>();
            Base low = j.value("base_low", 2), high = j.value("base_high", 3);
            if (p == "golden") s = half_split_rotation_spec(golden_alpha(), low, high);
            else if (p == "sqrt2") s = half_split_rotation_spec(sqrt2_alpha(), low, high);
            else if (p == "sturmian_golden") s = sturmian_golden_spec(low, high);
            else fail(errc::invalid_spec, "unknown rotation preset " + p);
            return s;
        }
        s.alpha = parse_rational(j.at("alpha").get<std::string>());
        for (const auto& c : j.at("cells"))
            s.cells.push_back({parse_rational(c.at("from").get<std::string>()),
                               parse_rational(c.at("to").get<std::string>()),
                               c.at("base").get<Base>()});
        return s;
    }
    if (type == "nil") {
        NilSpec s;
        if (j.contains("preset")) {
            std::string p = j.at("preset").get<std::string>();
            if (p == "golden") s.alpha = golden_alpha();
            else if (p == "sqrt2") s.alpha = sqrt2_alpha();
            else fail(errc::invalid_spec, "unknown nil preset " + p);
        } else {
            s.alpha = parse_rational(j.at("alpha").get<std::string>());
        }
        s.base_ge = j.value("base_ge", 2);
        s.base_lt = j.value("base_lt", 3);
        return s;
    }
    if (type == "substitution") {
        SubstitutionSpec s;
        for (const auto& [k, v] : j.at("rules").items()) {
            if (k.size() != 1) fail(errc::invalid_spec, "substitution letters are single characters");
            s.rules[k[0]] = v.get<std::string>();
        }
        for (const auto& [k, v] : j.at("bases").items()) {
            if (k.size() != 1) fail(errc::invalid_spec, "substitution letters are single characters");
            s.base_of[k[0]] = v.get<Base>();
        }
        s.start = j.at("start").get<std::string>().at(0);
        s.primitivity_bound = j.value("primitivity_bound", 16u);
        return s;
    }
    if (type == "concatenation") {
        ConcatenationSpec s;
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "champernowne") s.kind = ConcatKind::champernowne;
        else if (kind == "squares") s.kind = ConcatKind::squares;
        else if (kind == "primes") s.kind = ConcatKind::primes;
        else if (kind == "aks") s.kind = ConcatKind::aks;
        else fail(errc::invalid_spec, "unknown concatenation kind " + kind);
        s.radix = j.value("radix", 10u);
        s.digit_offset = j.value("offset", s.kind == ConcatKind::aks ? 1u : 2u);
        return s;
    }
    if (type == "bernoulli") {
        BernoulliSpec s;
        s.alphabet = j.at("alphabet").get<std::vector<Base>>();
        for (const auto& w : j.at("weights")) s.weights.push_back(rational_from_json(w));
        s.seed = j.value("seed", 0ull);
        return s;
    }
    if (type == "nonergodic_word") {
        NonErgodicWordSpec s;
        if (j.contains("bases")) {
            s.base_of.clear();
            for (const auto& [k, v] : j.at("bases").items()) s.base_of[k[0]] = v.get<Base>();
        }
        return s;
    }
    if (type == "file") {
        return FileSpec{j.at("path").get<std::string>()};
    }
    fail(errc::invalid_spec, "unknown generator type " + type);
}

// ---------------------------------------------------------------------------
// Sequence / digit files: newline-separated decimal integers.

inline void write_integer_file(const std::string& path, const std::vector<std::uint64_t>& values) {
    std::ofstream out(path);
    if (!out) fail(errc::bad_params, "cannot open " + path + " for writing");
    for (std::uint64_t v : values) out << v << "\n";
}

inline std::vector<std::uint64_t> read_integer_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_params, "cannot open " + path);
    std::vector<std::uint64_t> v;
    std::uint64_t x;
    while (in >> x) v.push_back(x);
    return v;
}

// ---------------------------------------------------------------------------
// Report serializers

inline json dyn_gen_report_json(const DynGenReport& rep) {
    json levels = json::array();
    for (const auto& lv : rep.levels) {
        json suspects = json::array();
        for (const auto& s : lv.suspects)
            suspects.push_back(json{{"block", s.block}, {"frequency", rational_json_pair(s.frequency)}});
        levels.push_back(json{{"k", lv.k},
                              {"stable", lv.stable},
                              {"positive", lv.positive},
                              {"sums_to_one", lv.sums_to_one},
                              {"max_drift", rational_json_pair(lv.max_drift)},
                              {"suspects", suspects}});
    }
    auto verdict = [](bool ok) { return ok ? "PASS" : "SUSPECT"; };
    return json{{"N", rep.N},
                {"tolerance", rational_json(rep.tolerance)},
                {"density_floor", rational_json(rep.density_floor)},
                {"levels", levels},
                {"stability", verdict(rep.pass_stability)},
                {"positivity", verdict(rep.pass_positivity)},
                {"tiling", verdict(rep.pass_tiling)}};
}

inline const char* ratio_status_name(RatioStatus s) {
    switch (s) {
        case RatioStatus::pass: return "PASS";
        case RatioStatus::fail: return "FAIL";
        case RatioStatus::insufficient: return "insufficient";
    }
    return "?";
}

inline json ratio_entry_json(const RatioEntry& e) {
    json j{{"D", e.D},
           {"count", e.count},
           {"expectation", rational_json_pair(e.expectation)},
           {"status", ratio_status_name(e.status)}};
    if (!e.B.empty()) j["B"] = e.B;
    if (e.ratio) j["ratio"] = rational_json_pair(*e.ratio);
    return j;
}

inline json normality_report_json(const NormalityReport& rep) {
    json levels = json::array();
    for (const auto& lv : rep.levels) {
        json blocks = json::array(), uniform = json::array(), pairs = json::array();
        for (const auto& e : lv.blocks) blocks.push_back(ratio_entry_json(e));
        for (const auto& e : lv.uniform) uniform.push_back(ratio_entry_json(e));
        for (const auto& p : lv.ratio_pairs)
            pairs.push_back(json{{"D1", p.D1},
                                 {"D2", p.D2},
                                 {"ratio", rational_json_pair(p.ratio)},
                                 {"status", p.pass ? "PASS" : "FAIL"}});
        levels.push_back(json{{"ell", lv.ell},
                              {"blocks", blocks},
                              {"uniform", uniform},
                              {"ratio_pairs", pairs}});
    }
    return json{{"n", rep.n},
                {"tolerance", rational_json(rep.tolerance)},
                {"mass_floor", rational_json(rep.mass_floor)},
                {"all_pass", rep.all_pass},
                {"enumeration_truncated", rep.enumeration_truncated},
                {"levels", levels}};
}

// Flat CSV: ell, D, B, count, expectation_num, expectation_den, ratio, status
inline std::string normality_report_csv(const NormalityReport& rep) {
    std::ostringstream out;
    out << "ell,D,B,count,expectation_num,expectation_den,ratio,status\n";
    auto word_str = [](const auto& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(w[i]);
        }
        return s;
    };
    for (const auto& lv : rep.levels) {
        auto emit = [&](const RatioEntry& e) {
            out << lv.ell << ",\"" << word_str(e.D) << "\",\"" << word_str(e.B) << "\"," << e.count
                << "," << e.expectation.get_num().get_str() << ","
                << e.expectation.get_den().get_str() << ","
                << (e.ratio ? to_decimal_string(*e.ratio) : std::string("")) << ","
                << ratio_status_name(e.status) << "\n";
        };
        for (const auto& e : lv.blocks) emit(e);
        for (const auto& e : lv.uniform) emit(e);
    }
    return out.str();
}

inline json hotspot_result_json(const HotSpotQuery& q, const HotSpotResult& r) {
    return json{{"a", rational_json(q.a)},
                {"b", rational_json(q.b)},
                {"N", q.N},
                {"sigma", rational_json(q.sigma)},
                {"C", rational_json(q.C)},
                {"nu", r.nu},
                {"uncertain", r.uncertain},
                {"ratio", rational_json_pair(r.ratio)},
                {"linear_bound", rational_json_pair(r.linear_bound)},
                {"within_linear", r.within_linear},
                {"power_bound_approx", r.power_bound},
                {"within_power_approx", r.within_power},
                {"exclusion_density", rational_json_pair(r.realized_exclusion_density)},
                {"exclusion_within_budget", r.exclusion_within_budget}};
}

inline json determinism_report_json(const DeterminismReport& rep) {
    json profiles = json::array();
    for (const auto& p : rep.profiles)
        profiles.push_back(json{{"eps", rational_json(p.eps)},
                                {"p_eps", p.p},
                                {"min_log_ratio", p.min_log_ratio},
                                {"drops_below_eps", p.drops_below_eps},
                                {"tail_slope", p.tail_slope}});
    json letters = json::object();
    for (const auto& [b, c] : rep.letter_counts) letters[std::to_string(b)] = c;
    return json{{"N", rep.N},
                {"k_min", rep.k_min},
                {"k_max", rep.k_max},
                {"profiles", profiles},
                {"letter_counts", letters},
                {"letter_entropy_partial_sum", rep.letter_entropy_partial_sum},
                {"letter_entropy_note", "partial sum over observed letters; unseen letters of an "
                                        "infinite alphabet cannot be certified from a prefix"},
                {"observed_letters", rep.observed_letters},
                {"slope_threshold", rep.slope_threshold},
                {"verdict", rep.consistent_with_deterministic ? "CONSISTENT-WITH-DETERMINISTIC"
                                                              : "CONSISTENT-WITH-POSITIVE-ENTROPY"}};
}

inline std::string grid_csv(const std::vector<CellRectangle>& rects) {
    std::ostringstream out;
    out << "B,D,x0,x1,y0,y1\n";
    auto word_str = [](const auto& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(w[i]);
        }
        return s;
    };
    for (const auto& r : rects)
        for (const auto& [x0, x1] : r.horizontal.parts)
            out << "\"" << word_str(r.B) << "\",\"" << word_str(r.D) << "\"," << to_string(x0) << ","
                << to_string(x1) << "," << to_string(r.y0) << "," << to_string(r.y1) << "\n";
    return out.str();
}

inline std::string grid_svg(const std::vector<CellRectangle>& rects, int size = 720) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    auto word_str = [](const auto& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(w[i]);
        }
        return s;
    };
    for (const auto& r : rects) {
        for (const auto& [x0, x1] : r.horizontal.parts) {
            double px = to_double(x0) * size;
            double pw = to_double(x1 - x0) * size;
            double py = (1.0 - to_double(r.y1)) * size; // y axis upward
            double ph = to_double(r.y1 - r.y0) * size;
            out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw << "\" height=\""
                << ph << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
            if (ph > 14 && pw > 30)
                out << "<text x=\"" << px + pw / 2 << "\" y=\"" << py + ph / 2
                    << "\" font-size=\"10\" text-anchor=\"middle\">(" << word_str(r.D) << ")</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Run manifests

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::bad_params, "cannot checksum " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

struct RunManifest {
    std::string tool_version;
    std::vector<std::string> argv;
    json config;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::uint64_t>> inputs;  // path, checksum
    std::vector<std::pair<std::string, std::uint64_t>> outputs; // path, checksum
    double wall_seconds = 0;

    json to_json() const {
        json in = json::array(), outj = json::array();
        for (const auto& [p, c] : inputs) in.push_back(json{{"path", p}, {"fnv1a64", c}});
        for (const auto& [p, c] : outputs) outj.push_back(json{{"path", p}, {"fnv1a64", c}});
        return json{{"tool_version", tool_version}, {"argv", argv},       {"config", config},
                    {"seed", seed},                 {"inputs", in},       {"outputs", outj},
                    {"wall_seconds", wall_seconds}};
    }
};

inline void write_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::bad_params, "cannot open " + path + " for writing");
    out << m.to_json().dump(2) << "\n";
}

} // namespace cantor
