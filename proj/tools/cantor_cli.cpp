// Command-line front end: sequence generation, exact expansion, block
// statistics, cell-geometry grids, orbit diagnostics, hot-spot queries,
// complexity reports, and the counterexample constructions. Every command
// that writes files also writes a <out>.manifest.json sufficient to re-run
// it bit-identically (see `rerun`).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cantor/complexity.hpp>
#include <cantor/constructions.hpp>
#include <cantor/distribution.hpp>
#include <cantor/expansion.hpp>
#include <cantor/io.hpp>
#include <cantor/normality.hpp>
#include <cantor/rational.hpp>
#include <cantor/sequence.hpp>

namespace {

constexpr const char* kToolVersion = "cantor 1.0.0";

using namespace cantor;

struct ManifestScope {
    RunManifest manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit ManifestScope(const std::vector<std::string>& argv) {
        manifest.tool_version = kToolVersion;
        manifest.argv = argv;
    }

    void input(const std::string& path) { manifest.inputs.push_back({path, file_checksum(path)}); }

    void output(const std::string& path) {
        manifest.outputs.push_back({path, file_checksum(path)});
    }

    void finish(const std::string& primary_out) {
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(manifest, primary_out + ".manifest.json");
    }
};

std::vector<std::string> g_argv;

// blanket size cap so a typo cannot ask for terabytes
constexpr std::size_t kMaxN = 100000000;
void check_size(std::size_t n) {
    if (n > kMaxN) fail(errc::resource_limit, "n exceeds the configured cap of 10^8");
}

GeneratorSpec load_spec(const std::string& spec_arg) {
    // inline JSON when the argument looks like an object, else a file path
    if (!spec_arg.empty() && spec_arg[0] == '{')
        return spec_from_json(json::parse(spec_arg));
    std::ifstream in(spec_arg);
    if (!in) fail(errc::invalid_spec, "cannot open spec " + spec_arg);
    json j;
    in >> j;
    return spec_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(errc::bad_params, "cannot open " + path + " for writing");
    out << text;
}

struct DigitArgs {
    std::string x;      // rational "p/q"
    std::string digits; // digit file
};

// digit source for a command: exact rational or digit file
std::unique_ptr<DigitSource> make_digit_source(const DigitArgs& args, const GeneratorSpec& spec,
                                               ManifestScope& scope) {
    if (!args.x.empty()) {
        Rational x = parse_rational(args.x);
        return std::make_unique<RationalDigits>(x, BasicSequence(spec));
    }
    if (!args.digits.empty()) {
        scope.input(args.digits);
        return std::make_unique<VectorDigits>(read_integer_file(args.digits));
    }
    fail(errc::bad_params, "need --x or --digits");
}

// ---------------------------------------------------------------------------

int cmd_seq(const std::string& spec_arg, std::size_t n, const std::string& out,
            const std::string& format) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "seq"}, {"spec", spec_to_json(spec)}, {"n", n}};
    std::vector<Base> bases = generate(spec, n);
    if (format == "json") {
        write_text(out, json(bases).dump(2) + "\n");
    } else {
        write_integer_file(out, bases);
    }
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_expand(const std::string& spec_arg, const std::string& x_str, std::size_t n,
               const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    Rational x = parse_rational(x_str);
    scope.manifest.config =
        json{{"command", "expand"}, {"spec", spec_to_json(spec)}, {"x", to_string(x)}, {"n", n}};
    BasicSequence seq(spec);
    DigitWord digits = digits_of(x, seq, n);
    write_integer_file(out, digits);
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_value(const std::string& spec_arg, const std::string& digits_path, std::size_t n) {
    GeneratorSpec spec = load_spec(spec_arg);
    BasicSequence seq(spec);
    std::vector<std::uint64_t> digits = read_integer_file(digits_path);
    if (n == 0) n = digits.size();
    Rational v = value_of(DigitWord(digits.begin(), digits.end()), seq, n);
    std::cout << to_string(v) << "\n";
    return 0;
}

int cmd_stats(const std::string& spec_arg, const DigitArgs& dargs, std::size_t n,
              std::size_t block_len, const std::string& tol, const std::string& theta,
              const std::string& out, const std::string& format) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "stats"},  {"spec", spec_to_json(spec)},
                                 {"n", n},              {"block_len", block_len},
                                 {"tol", tol},          {"theta", theta},
                                 {"x", dargs.x},        {"digits", dargs.digits}};
    BasicSequence seq(spec);
    auto digits = make_digit_source(dargs, spec, scope);
    NormalityReport rep =
        normality_report(seq, *digits, n, block_len, parse_rational(tol), parse_rational(theta));
    if (format == "csv")
        write_text(out, normality_report_csv(rep));
    else
        write_text(out, normality_report_json(rep).dump(2) + "\n");
    scope.output(out);
    scope.finish(out);
    return 0; // verdicts live in the report, not the exit code
}

int cmd_dyngen(const std::string& spec_arg, std::size_t n, std::size_t k_max,
               const std::string& tol, const std::string& floor, const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "dyngen"}, {"spec", spec_to_json(spec)},
                                 {"n", n},              {"k_max", k_max},
                                 {"tol", tol},          {"floor", floor}};
    BasicSequence seq(spec);
    DynGenReport rep =
        check_dynamic_generation(seq, k_max, n, parse_rational(tol), parse_rational(floor));
    write_text(out, dyn_gen_report_json(rep).dump(2) + "\n");
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_grid(const std::string& model, std::size_t ell, Base low, Base high,
             const std::string& spec_arg, const std::string& out, const std::string& format) {
    ManifestScope scope(g_argv);
    IntervalCodedModel m;
    if (model == "doubling") {
        m = IntervalCodedModel::doubling(low, high);
    } else if (model == "rotation") {
        GeneratorSpec spec = load_spec(spec_arg);
        auto* rot = std::get_if<RotationSpec>(&spec);
        if (!rot) fail(errc::unsupported_model, "grid rotation model needs a rotation spec");
        m = IntervalCodedModel::rotation(*rot);
    } else {
        fail(errc::unsupported_model, "unknown grid model " + model);
    }
    scope.manifest.config =
        json{{"command", "grid"}, {"model", model}, {"ell", ell}, {"low", low}, {"high", high}};
    auto rects = cell_rectangles(m, ell);
    if (format == "svg")
        write_text(out, grid_svg(rects));
    else
        write_text(out, grid_csv(rects));
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_orbit(const std::string& spec_arg, const DigitArgs& dargs, std::size_t n, std::size_t from,
              const std::string& eps, const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "orbit"}, {"spec", spec_to_json(spec)}, {"n", n},
                                 {"from", from},       {"eps", eps},
                                 {"x", dargs.x},       {"digits", dargs.digits}};
    BasicSequence seq(spec);
    OrbitSample sample;
    if (!dargs.x.empty()) {
        sample = orbit_sample_exact(parse_rational(dargs.x), seq, from, n);
    } else {
        auto digits = make_digit_source(dargs, spec, scope);
        sample = orbit_sample_intervals(*digits, seq, from, n, parse_rational(eps));
    }
    std::ostringstream csv;
    csv << "n,point_num,point_den,width_num,width_den\n";
    for (std::size_t i = 0; i < sample.points.size(); ++i)
        csv << from + i << "," << sample.points[i].get_num().get_str() << ","
            << sample.points[i].get_den().get_str() << "," << sample.max_width.get_num().get_str()
            << "," << sample.max_width.get_den().get_str() << "\n";
    write_text(out, csv.str());
    Rational dstar = star_discrepancy(sample);
    json summary{{"N", sample.points.size()},
                 {"star_discrepancy", rational_json_pair(dstar)},
                 {"max_width", rational_json_pair(sample.max_width)},
                 {"weyl", weyl_sums(sample, 5)}};
    std::cout << summary.dump(2) << "\n";
    scope.output(out);
    scope.finish(out);
    return 0;
}

// cells come as "lo:hi:density" triples, e.g. "0:1/2:4/5,1/2:1:6/5"
std::vector<DensityCell> parse_cells(const std::string& text) {
    std::vector<DensityCell> cells;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::stringstream cs(item);
        std::string lo, hi, d;
        if (!std::getline(cs, lo, ':') || !std::getline(cs, hi, ':') || !std::getline(cs, d, ':'))
            fail(errc::bad_density, "cells must be lo:hi:density triples");
        cells.push_back({parse_rational(lo), parse_rational(hi), parse_rational(d)});
    }
    return cells;
}

int cmd_density(const std::string& spec_arg, const DigitArgs& dargs, std::size_t n,
                const std::string& cells_arg, const std::string& eps, const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "density"}, {"spec", spec_to_json(spec)}, {"n", n},
                                 {"cells", cells_arg},   {"eps", eps},
                                 {"x", dargs.x},         {"digits", dargs.digits}};
    BasicSequence seq(spec);
    OrbitSample sample;
    if (!dargs.x.empty()) {
        sample = orbit_sample_exact(parse_rational(dargs.x), seq, 0, n);
    } else {
        auto digits = make_digit_source(dargs, spec, scope);
        sample = orbit_sample_intervals(*digits, seq, 0, n, parse_rational(eps));
    }
    DensityComparison cmp = empirical_vs_density(sample, parse_cells(cells_arg));
    std::ostringstream csv;
    csv << "lo,hi,count,uncertain,empirical_mass,target_mass,error\n";
    for (const auto& row : cmp.rows)
        csv << to_string(row.lo) << "," << to_string(row.hi) << "," << row.count << ","
            << row.uncertain << "," << to_string(row.empirical_mass) << ","
            << to_string(row.target_mass) << "," << to_string(row.error) << "\n";
    write_text(out, csv.str());
    json summary{{"N", sample.points.size()},
                 {"sup_error", rational_json_pair(cmp.sup_error)},
                 {"width_slack", rational_json_pair(cmp.width_slack)}};
    std::cout << summary.dump(2) << "\n";
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_hotspot(const std::string& spec_arg, const DigitArgs& dargs, std::size_t n,
                const std::string& a, const std::string& b, const std::string& sigma,
                const std::string& c, const std::string& exclude, const std::string& eps,
                const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "hotspot"},
                                 {"spec", spec_to_json(spec)},
                                 {"n", n},
                                 {"a", a},
                                 {"b", b},
                                 {"sigma", sigma},
                                 {"C", c},
                                 {"exclude", exclude},
                                 {"x", dargs.x},
                                 {"digits", dargs.digits}};
    BasicSequence seq(spec);
    HotSpotQuery query;
    query.a = parse_rational(a);
    query.b = parse_rational(b);
    query.sigma = parse_rational(sigma);
    query.C = parse_rational(c);
    query.N = n;
    if (!exclude.empty()) {
        scope.input(exclude);
        query.exclusion = IndexSet(read_integer_file(exclude));
    }
    HotSpotResult res;
    if (!dargs.x.empty()) {
        OrbitSample sample = orbit_sample_exact(parse_rational(dargs.x), seq, 0, n);
        res = hotspot_nu(sample, query);
    } else {
        auto digits = make_digit_source(dargs, spec, scope);
        Rational width = parse_rational(eps);
        DigitSource& src = *digits;
        BasicSequence& sq = seq;
        res = hotspot_nu(
            [&](std::size_t idx) { return orbit_interval_from_digits(src, sq, idx, width); }, query);
    }
    write_text(out, hotspot_result_json(query, res).dump(2) + "\n");
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_complexity(const std::string& spec_arg, std::size_t n, std::size_t k_min, std::size_t k_max,
                   const std::vector<std::string>& eps_list, const std::string& out,
                   const std::string& format) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "complexity"}, {"spec", spec_to_json(spec)}, {"n", n},
                                 {"k_min", k_min},          {"k_max", k_max},
                                 {"eps", eps_list}};
    BasicSequence seq(spec);
    std::vector<Rational> eps;
    for (const auto& e : eps_list) eps.push_back(parse_rational(e));
    if (eps.empty()) eps = {Rational(0), make_rational(1, 20), make_rational(1, 10)};
    DeterminismReport rep = determinism_check(seq, n, eps, k_min, k_max);
    if (format == "csv") {
        std::ostringstream csv;
        csv << "k,eps,p_eps,H_k\n";
        for (std::size_t ki = 0; ki < rep.profiles[0].p.size(); ++ki) {
            std::size_t k = k_min + ki;
            BlockEntropy ent = block_entropy(seq, k, n);
            for (const auto& prof : rep.profiles)
                csv << k << "," << to_string(prof.eps) << "," << prof.p[ki] << "," << ent.value
                    << "\n";
        }
        write_text(out, csv.str());
    } else {
        json j = determinism_report_json(rep);
        json entropies = json::array();
        for (std::size_t k = k_min; k <= k_max; ++k) {
            BlockEntropy ent = block_entropy(seq, k, n);
            entropies.push_back(json{{"k", k},
                                     {"H_k", ent.value},
                                     {"H_k_per_symbol", ent.per_symbol},
                                     {"H_k_base2", ent.value / std::log(2.0)},
                                     {"distinct", ent.distinct},
                                     {"sparse", ent.sparse}});
        }
        j["block_entropy"] = entropies;
        LogIntegralEstimate li = log_integral(seq, n);
        json counts = json::object();
        for (const auto& [bb, cc] : li.counts) counts[std::to_string(bb)] = cc;
        j["log_integral"] = json{{"mean", li.mean},
                                 {"mean_first_half", li.mean_half},
                                 {"drift_flag", li.drift_flag},
                                 {"letter_counts", counts}};
        write_text(out, j.dump(2) + "\n");
    }
    scope.output(out);
    scope.finish(out);
    return 0;
}

int cmd_gpower(const std::string& spec_arg, std::size_t n, Base g, std::uint64_t k,
               const std::string& declared_I, const std::string& out) {
    ManifestScope scope(g_argv);
    check_size(n);
    GeneratorSpec spec = load_spec(spec_arg);
    scope.manifest.config = json{{"command", "gpower"}, {"spec", spec_to_json(spec)}, {"n", n},
                                 {"g", g},              {"k", k},
                                 {"I", declared_I}};
    BasicSequence seq(spec);
    auto exponents = exponents_of(seq, g, n);
    std::optional<Rational> I;
    if (!declared_I.empty()) I = parse_rational(declared_I);
    GPowerDensityResult res = gpower_index_density(exponents, k, I);
    json j{{"g", g},
           {"k", k},
           {"N", n},
           {"empirical_density", rational_json_pair(res.empirical_density)},
           {"formula_value", rational_json_pair(res.formula_value)},
           {"difference", rational_json_pair(res.difference)}};
    write_text(out, j.dump(2) + "\n");
    scope.output(out);
    scope.finish(out);
    return 0;
}

struct ReproArgs {
    std::string which;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string c;          // ex32 variant threshold
    Base a = 2, b = 4;      // ex35
    std::string eps = "1/4";
    Base g = 10;            // ex36
    std::uint64_t kmax = 1 << 16;
    std::string source;     // rebase digit file
    Base radix = 6;         // rebase source radix
    std::string pattern = "2,3";
    std::string out_prefix = "repro";
};

int cmd_repro(const ReproArgs& args) {
    ManifestScope scope(g_argv);
    check_size(args.n);
    ConstructionOutput out;
    if (args.which == "ex31") {
        ConcatDigitSource y4(ConcatKind::champernowne, 4);
        out = build_ex31(y4, args.n);
    } else if (args.which == "ex32") {
        ConcatDigitSource y4(ConcatKind::champernowne, 4);
        std::optional<Rational> C;
        if (!args.c.empty()) C = parse_rational(args.c);
        out = build_ex32(y4, args.n, C);
    } else if (args.which == "ex35") {
        out = build_ex35(args.a, args.b, parse_rational(args.eps), args.seed, args.n);
    } else if (args.which == "ex36i") {
        out = build_ex36i(args.g, args.seed, args.n, args.kmax);
    } else if (args.which == "ex36ii") {
        out = build_ex36ii(args.g, args.seed, args.n, args.kmax);
    } else if (args.which == "rebase") {
        scope.input(args.source);
        std::vector<Base> pattern;
        std::stringstream ss(args.pattern);
        std::string tok;
        while (std::getline(ss, tok, ',')) pattern.push_back(std::stoull(tok));
        auto source = read_integer_file(args.source);
        out.digits = rebase(source, args.radix, pattern);
        out.info["construction"] = "rebase";
        for (std::size_t i = 0; out.bases.size() < out.digits.size(); ++i)
            out.bases.push_back(pattern[i % pattern.size()]);
    } else {
        fail(errc::bad_params, "unknown construction " + args.which);
    }

    json targets = json::array();
    for (const auto& [name, value] : out.targets)
        targets.push_back(json{{"name", name}, {"value", rational_json_pair(value)}});
    json info = json::object();
    for (const auto& [k, v] : out.info) info[k] = v;
    scope.manifest.config = json{{"command", "repro"},
                                 {"which", args.which},
                                 {"n", args.n},
                                 {"seed", args.seed},
                                 {"info", info},
                                 {"targets", targets}};
    scope.manifest.seed = args.seed;

    std::string bases_path = args.out_prefix + ".bases.txt";
    std::string digits_path = args.out_prefix + ".digits.txt";
    write_integer_file(bases_path, out.bases);
    write_integer_file(digits_path, out.digits);
    scope.output(bases_path);
    scope.output(digits_path);
    if (!out.exponents.empty()) {
        std::string exp_path = args.out_prefix + ".exponents.txt";
        write_integer_file(exp_path, out.exponents);
        scope.output(exp_path);
    }
    scope.finish(args.out_prefix);
    return 0;
}

int cmd_rerun(const std::string& manifest_path, const char* self) {
    std::ifstream in(manifest_path);
    if (!in) fail(errc::bad_params, "cannot open manifest " + manifest_path);
    json j;
    in >> j;
    std::vector<std::string> argv = j.at("argv").get<std::vector<std::string>>();
    if (argv.empty() || argv[0] == "rerun") fail(errc::bad_params, "manifest has no command");
    std::string cmdline = std::string("'") + self + "'";
    for (const auto& a : argv) cmdline += " '" + a + "'";
    std::cout << "re-running:" << cmdline << "\n";
    int rc = std::system(cmdline.c_str());
    return rc == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_argv.push_back(argv[i]);

    CLI::App app{"exact Cantor-series toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string spec, out = "out.txt", format = "txt", x, digits_path;
    std::size_t n = 100, from = 0, block_len = 1, k_min = 1, k_max = 12, ell = 1;
    std::string tol = "1/20", theta = "10", floor = "1/100", eps = "1/1048576";
    std::string a = "0", b = "1", sigma = "1/2", cbound = "1", exclude, declared_I;
    std::vector<std::string> eps_list;
    Base low = 2, high = 3, gbase = 2;
    std::uint64_t kpow = 0;
    ReproArgs repro;
    std::string manifest_path;
    std::string grid_model = "doubling";

    auto* seq_cmd = app.add_subcommand("seq", "generate a basic sequence prefix");
    seq_cmd->add_option("--spec", spec, "generator spec (JSON file or inline)")->required();
    seq_cmd->add_option("--n", n, "prefix length")->required();
    seq_cmd->add_option("--out", out)->required();
    seq_cmd->add_option("--format", format, "txt|json");

    auto* expand_cmd = app.add_subcommand("expand", "exact digits of a rational");
    expand_cmd->add_option("--spec", spec)->required();
    expand_cmd->add_option("--x", x, "rational p/q in [0,1)")->required();
    expand_cmd->add_option("--n", n)->required();
    expand_cmd->add_option("--out", out)->required();

    auto* value_cmd = app.add_subcommand("value", "exact partial sum of a digit file");
    value_cmd->add_option("--spec", spec)->required();
    value_cmd->add_option("--digits", digits_path)->required();
    value_cmd->add_option("--n", n, "how many digits (default: all)");

    auto* stats_cmd = app.add_subcommand("stats", "normality report");
    stats_cmd->add_option("--spec", spec)->required();
    stats_cmd->add_option("--x", x);
    stats_cmd->add_option("--digits", digits_path);
    stats_cmd->add_option("--n", n)->required();
    stats_cmd->add_option("--block-len", block_len, "max block length");
    stats_cmd->add_option("--tol", tol);
    stats_cmd->add_option("--theta", theta, "minimum expected mass for a verdict");
    stats_cmd->add_option("--out", out)->required();
    stats_cmd->add_option("--format", format, "json|csv");

    auto* dyngen_cmd = app.add_subcommand("dyngen", "dynamical-generation condition check");
    dyngen_cmd->add_option("--spec", spec)->required();
    dyngen_cmd->add_option("--n", n)->required();
    dyngen_cmd->add_option("--k-max", k_max);
    dyngen_cmd->add_option("--tol", tol);
    dyngen_cmd->add_option("--floor", floor);
    dyngen_cmd->add_option("--out", out)->required();

    auto* grid_cmd = app.add_subcommand("grid", "cell rectangles as CSV or SVG");
    grid_cmd->add_option("--model", grid_model, "doubling|rotation");
    grid_cmd->add_option("--spec", spec, "rotation spec when --model rotation");
    grid_cmd->add_option("--ell", ell)->required();
    grid_cmd->add_option("--low", low);
    grid_cmd->add_option("--high", high);
    grid_cmd->add_option("--out", out)->required();
    grid_cmd->add_option("--format", format, "csv|svg");

    auto* orbit_cmd = app.add_subcommand("orbit", "orbit sample + discrepancy");
    orbit_cmd->add_option("--spec", spec)->required();
    orbit_cmd->add_option("--x", x);
    orbit_cmd->add_option("--digits", digits_path);
    orbit_cmd->add_option("--n", n)->required();
    orbit_cmd->add_option("--from", from);
    orbit_cmd->add_option("--eps", eps, "interval width for procedural numbers");
    orbit_cmd->add_option("--out", out)->required();

    std::string cells_arg = "0:1/2:1,1/2:1:1";
    auto* density_cmd = app.add_subcommand("density", "orbit histogram vs a target density");
    density_cmd->add_option("--spec", spec)->required();
    density_cmd->add_option("--x", x);
    density_cmd->add_option("--digits", digits_path);
    density_cmd->add_option("--n", n)->required();
    density_cmd->add_option("--cells", cells_arg, "lo:hi:density triples, comma separated");
    density_cmd->add_option("--eps", eps);
    density_cmd->add_option("--out", out)->required();

    auto* hotspot_cmd = app.add_subcommand("hotspot", "nu_(a,b) count with exclusions");
    hotspot_cmd->add_option("--spec", spec)->required();
    hotspot_cmd->add_option("--x", x);
    hotspot_cmd->add_option("--digits", digits_path);
    hotspot_cmd->add_option("--n", n)->required();
    hotspot_cmd->add_option("--a", a)->required();
    hotspot_cmd->add_option("--b", b)->required();
    hotspot_cmd->add_option("--sigma", sigma);
    hotspot_cmd->add_option("--C", cbound);
    hotspot_cmd->add_option("--exclude", exclude, "file of excluded indices (1-based)");
    hotspot_cmd->add_option("--eps", eps);
    hotspot_cmd->add_option("--out", out)->required();

    auto* cx_cmd = app.add_subcommand("complexity", "determinism diagnostics");
    cx_cmd->add_option("--spec", spec)->required();
    cx_cmd->add_option("--n", n)->required();
    cx_cmd->add_option("--k-min", k_min);
    cx_cmd->add_option("--k-max", k_max);
    cx_cmd->add_option("--eps", eps_list, "exclusion budgets (rationals)");
    cx_cmd->add_option("--out", out)->required();
    cx_cmd->add_option("--format", format, "json|csv");

    auto* gp_cmd = app.add_subcommand("gpower", "index-density check for g-power sequences");
    gp_cmd->add_option("--spec", spec)->required();
    gp_cmd->add_option("--n", n)->required();
    gp_cmd->add_option("--g", gbase)->required();
    gp_cmd->add_option("--k", kpow);
    gp_cmd->add_option("--I", declared_I, "declared limit of the mean exponent");
    gp_cmd->add_option("--out", out)->required();

    auto* repro_cmd = app.add_subcommand("repro", "counterexample constructions");
    repro_cmd->add_option("which", repro.which, "ex31|ex32|ex35|ex36i|ex36ii|rebase")->required();
    repro_cmd->add_option("--n", repro.n);
    repro_cmd->add_option("--seed", repro.seed);
    repro_cmd->add_option("--c", repro.c, "ex32 variant threshold C");
    repro_cmd->add_option("--a", repro.a);
    repro_cmd->add_option("--b", repro.b);
    repro_cmd->add_option("--eps", repro.eps);
    repro_cmd->add_option("--g", repro.g);
    repro_cmd->add_option("--kmax", repro.kmax);
    repro_cmd->add_option("--source", repro.source, "digit file for rebase");
    repro_cmd->add_option("--radix", repro.radix);
    repro_cmd->add_option("--pattern", repro.pattern);
    repro_cmd->add_option("--out-prefix", repro.out_prefix);

    auto* rerun_cmd = app.add_subcommand("rerun", "re-execute a command from its manifest");
    rerun_cmd->add_option("--manifest", manifest_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (seq_cmd->parsed()) return cmd_seq(spec, n, out, format);
        if (expand_cmd->parsed()) return cmd_expand(spec, x, n, out);
        if (value_cmd->parsed()) return cmd_value(spec, digits_path, value_cmd->count("--n") ? n : 0);
        if (stats_cmd->parsed())
            return cmd_stats(spec, {x, digits_path}, n, block_len, tol, theta, out, format);
        if (dyngen_cmd->parsed()) return cmd_dyngen(spec, n, k_max, tol, floor, out);
        if (grid_cmd->parsed()) return cmd_grid(grid_model, ell, low, high, spec, out, format);
        if (orbit_cmd->parsed()) return cmd_orbit(spec, {x, digits_path}, n, from, eps, out);
        if (density_cmd->parsed()) return cmd_density(spec, {x, digits_path}, n, cells_arg, eps, out);
        if (hotspot_cmd->parsed())
            return cmd_hotspot(spec, {x, digits_path}, n, a, b, sigma, cbound, exclude, eps, out);
        if (cx_cmd->parsed()) return cmd_complexity(spec, n, k_min, k_max, eps_list, out, format);
        if (gp_cmd->parsed()) return cmd_gpower(spec, n, gbase, kpow, declared_I, out);
        if (repro_cmd->parsed()) return cmd_repro(repro);
        if (rerun_cmd->parsed()) return cmd_rerun(manifest_path, argv[0]);
    } catch (const error& e) {
        std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
        switch (e.code()) {
            case errc::precision_unreachable: return 3;
            case errc::resource_limit: return 4;
            default: return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
