// bvlab: command-line front end for the BV / Lorentz concentration experiments.
//
// Exit codes: 0 success, 1 invariant failure, 2 configuration or input error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bvlab/audit.hpp"
#include "bvlab/bv.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/io.hpp"
#include "bvlab/profiles.hpp"
#include "bvlab/radial.hpp"
#include "bvlab/rearrange.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bvlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

struct Globals {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Merges the config file with explicitly given flags; rejects keys the command does not know.
class Resolver {
public:
    Resolver(const Globals& g, const CLI::App& app, const std::set<std::string>& keys) : keys_(keys) {
        if (!g.config_path.empty()) {
            std::ifstream in(g.config_path);
            if (!in) fail(ErrorKind::Config, "cannot open config file " + g.config_path);
            try {
                config_ = json::parse(in);
            } catch (const json::parse_error& e) {
                fail(ErrorKind::Config, g.config_path + ": " + e.what());
            }
            if (!config_.is_object()) fail(ErrorKind::Config, g.config_path + ": top level must be an object");
            for (const auto& [key, value] : config_.items()) {
                if (key != "schema_version" && !keys_.count(key) && key != "seed" && key != "threads") {
                    fail(ErrorKind::Config, g.config_path + ": unknown field '" + key + "'");
                }
            }
            config_.erase("schema_version");
        } else {
            config_ = json::object();
        }
        if (app.get_option("--seed")->count() > 0 || !config_.contains("seed")) config_["seed"] = g.seed;
        if (app.get_option("--threads")->count() > 0 || !config_.contains("threads")) config_["threads"] = g.threads;
    }

    template <class T>
    T get(const std::string& key, const T& fallback, const CLI::App& sub, const std::string& flag, const T& flag_value) {
        if (!keys_.count(key) && key != "seed" && key != "threads") fail(ErrorKind::Usage, "internal: undeclared key " + key);
        if (!flag.empty() && sub.get_option(flag)->count() > 0) {
            config_[key] = flag_value;
        } else if (!config_.contains(key)) {
            config_[key] = fallback;
        }
        try {
            return config_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(ErrorKind::Config, "config field '" + key + "' has the wrong type");
        }
    }

    const json& resolved() const { return config_; }

private:
    std::set<std::string> keys_;
    json config_;
};

double parse_exponent(const std::string& text, int dim) {
    if (text == "inf") return kInfinity;
    if (text == "1*") return critical_exponent(dim);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0') fail(ErrorKind::Config, "cannot parse exponent '" + text + "'");
    return v;
}

json envelope(const std::string& command, const json& config) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"config", config}};
}

void emit(const json& doc, const std::string& out_dir, const std::string& name) {
    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / name) << text;
    }
}

void write_text(const std::string& out_dir, const std::string& name, const std::string& text) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / name);
    out << text;
    if (!out) fail(ErrorKind::Io, "cannot write " + (fs::path(out_dir) / name).string());
}

// ---- norms ---------------------------------------------------------------

struct NormsInput {
    StepFunction star;
    int dim = 2;
    std::optional<double> tv;
    std::string kind;
};

NormsInput load_norms_input(const std::string& input, int dim) {
    NormsInput in;
    auto radial = [&](const RadialStep& u) {
        in.star = to_stepfunction(u);
        in.dim = u.dim();
        in.tv = radial_tv(u);
        in.kind = "radial";
    };
    if (input == "annulus2d") {
        radial(annulus_indicator(2));
    } else if (input == "annulus3d") {
        radial(annulus_indicator(3));
    } else if (input == "zero2d") {
        radial(RadialStep::zero(2));
    } else if (input.rfind("staircase2d:", 0) == 0) {
        const std::string n = input.substr(12);
        char* end = nullptr;
        const long v = std::strtol(n.c_str(), &end, 10);
        if (n.empty() || *end != '\0' || v < 1 || v > 60) fail(ErrorKind::Config, "staircase2d:n needs 1 <= n <= 60");
        radial(staircase(2, static_cast<int>(v)));
    } else if (fs::path(input).extension() == ".csv") {
        in.star = read_stepfunction_csv(fs::path(input));
        in.dim = dim;
        in.kind = "stepfunction";
    } else if (fs::exists(input)) {
        const GridFunction u = read_grid(input);
        in.star = decreasing_rearrangement(u);
        in.dim = u.dim();
        in.tv = total_variation(u);
        in.kind = "grid";
    } else {
        fail(ErrorKind::Config, "unknown input '" + input +
                                    "' (builtins: annulus2d, annulus3d, zero2d, staircase2d:N; or a .bvg/.csv file)");
    }
    return in;
}

int cmd_norms(const Globals& g, const CLI::App& app, const CLI::App& sub, const std::string& input_flag,
              const std::string& p_flag, const std::string& q_flag, int dim_flag) {
    Resolver r(g, app, {"input", "p", "q", "dim"});
    const std::string input = r.get<std::string>("input", "annulus2d", sub, "input", input_flag);
    const int dim_hint = r.get<int>("dim", 2, sub, "--dim", dim_flag);
    const std::string p_text = r.get<std::string>("p", "1*", sub, "--p", p_flag);
    const std::string q_text = r.get<std::string>("q", "1", sub, "--q", q_flag);
    const NormsInput in = load_norms_input(input, dim_hint);
    if (in.dim < 2 && p_text == "1*") fail(ErrorKind::Config, "p = 1* needs N >= 2");
    const LorentzIndex idx = LorentzIndex::make(parse_exponent(p_text, in.dim), parse_exponent(q_text, in.dim));

    json doc = envelope("norms", r.resolved());
    const double quad = lorentz_norm(in.star, idx);
    json result = {{"kind", in.kind},
                   {"dim", in.dim},
                   {"p", idx.p},
                   {"q", q_label(idx.q)},
                   {"lorentz_rearrangement", quad},
                   {"total_measure", in.star.total_measure()}};
    if (in.dim >= 1) {
        const double sym = lorentz_norm_symmetrization(in.star, idx, in.dim);
        result["lorentz_symmetrization"] = sym;
        const double scale = std::max(std::abs(quad), std::abs(sym));
        result["relative_difference"] = scale > 0.0 ? std::abs(quad - sym) / scale : 0.0;
    }
    if (idx.p >= 1.0) result["lebesgue_p"] = lebesgue_norm(in.star, idx.p);
    result["tv"] = in.tv ? json(*in.tv) : json(nullptr);
    doc["result"] = result;
    emit(doc, g.out_dir, "norms.json");
    return kExitOk;
}

// ---- counterexample ------------------------------------------------------

int cmd_counterexample(const Globals& g, const CLI::App& app, const CLI::App& sub, int dim_flag, int n_flag,
                       const std::vector<std::string>& q_flag, bool probe_flag) {
    Resolver r(g, app, {"dim", "n_max", "q_list", "nonvanishing_floor", "exponent_tolerance", "plot", "probe"});
    const int dim = r.get<int>("dim", 2, sub, "--dim", dim_flag);
    const int n_max = r.get<int>("n_max", 12, sub, "--n-max", n_flag);
    const auto q_text = r.get<std::vector<std::string>>("q_list", {"1", "1.5", "2"}, sub, "--q", q_flag);
    CounterexampleOptions opt;
    opt.nonvanishing_floor = r.get<double>("nonvanishing_floor", 0.5, sub, "", 0.0);
    opt.exponent_tolerance = r.get<double>("exponent_tolerance", 0.1, sub, "", 0.0);
    opt.threads = r.get<int>("threads", 1, sub, "", 0);
    const bool plot = r.get<bool>("plot", true, sub, "", true);
    const bool probe = r.get<bool>("probe", false, sub, "--probe", probe_flag);
    if (n_max < 1 || n_max > 40) fail(ErrorKind::Config, "n_max must be in [1, 40]");
    std::vector<double> qs;
    for (const auto& t : q_text) {
        const double q = parse_exponent(t, std::max(dim, 2));
        if (!(q >= 1.0)) fail(ErrorKind::Config, "q_list entries must be >= 1, got " + t);
        qs.push_back(q);
    }

    const CounterexampleResult result = run_counterexample(dim, n_max, qs, opt);
    json doc = envelope("counterexample", r.resolved());
    doc["summary"] = to_json(result);
    if (probe) {
        ProbeOptions po;
        po.threads = opt.threads;
        doc["cocompactness"] = to_json(cocompactness_table(dim, n_max, qs, po));
    }
    if (!g.out_dir.empty()) {
        std::ostringstream csv;
        write_counterexample_csv(csv, result);
        write_text(g.out_dir, "counterexample.csv", csv.str());
        if (plot) write_text(g.out_dir, "counterexample.gp", counterexample_gnuplot(result, "counterexample.csv"));
    } else {
        json rows = json::array();
        for (const auto& row : result.rows) {
            json lorentz = json::object();
            for (const auto& [q, v] : row.lorentz) lorentz[q_label(q)] = v;
            rows.push_back({{"n", row.n}, {"tv_coarea", row.tv_coarea}, {"tv_piecewise", row.tv_piecewise},
                            {"l1star", row.l1star}, {"lorentz", lorentz}, {"f0", row.f0}});
        }
        doc["rows"] = rows;
    }
    emit(doc, g.out_dir, "counterexample.json");
    if (!result.pass()) {
        for (const auto& c : result.checks)
            if (!c.pass) std::cerr << "FAIL " << c.name << ": " << c.detail << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

// ---- decompose -----------------------------------------------------------

int cmd_decompose(const Globals& g, const CLI::App& app, const CLI::App& sub, const std::string& input_flag,
                  double eps_flag, int max_flag, double q_flag, int stride_flag) {
    Resolver r(g, app, {"input", "eps", "max_profiles", "q", "scale_min", "scale_max", "window_margin", "cauchy_tol",
                        "vanish_ratio", "tail", "stride", "separation_floor", "delta", "max_cells"});
    const std::string input = r.get<std::string>("input", "", sub, "input", input_flag);
    if (input.empty()) fail(ErrorKind::Usage, "decompose needs a sequence directory");
    ExtractOptions opt;
    opt.eps = r.get<double>("eps", opt.eps, sub, "--eps", eps_flag);
    opt.max_profiles = r.get<int>("max_profiles", opt.max_profiles, sub, "--max-profiles", max_flag);
    opt.q = r.get<double>("q", opt.q, sub, "--q", q_flag);
    opt.scale_min = r.get<int>("scale_min", opt.scale_min, sub, "", 0);
    opt.scale_max = r.get<int>("scale_max", opt.scale_max, sub, "", 0);
    opt.window_margin = r.get<int>("window_margin", opt.window_margin, sub, "", 0);
    opt.cauchy_tol = r.get<double>("cauchy_tol", opt.cauchy_tol, sub, "", 0.0);
    opt.vanish_ratio = r.get<double>("vanish_ratio", opt.vanish_ratio, sub, "", 0.0);
    opt.tail = r.get<int>("tail", opt.tail, sub, "", 0);
    opt.stride = r.get<int>("stride", opt.stride, sub, "--stride", stride_flag);
    opt.threads = r.get<int>("threads", 1, sub, "", 0);
    const double floor = r.get<double>("separation_floor", 4.0, sub, "", 0.0);
    const double delta = r.get<double>("delta", 0.1, sub, "", 0.0);
    const auto max_cells = r.get<std::uint64_t>("max_cells", Limits{}.max_cells, sub, "", 0);
    opt.group.grid.max_cells = static_cast<std::size_t>(max_cells);
    if (opt.window_margin < 0 || opt.tail < 1) fail(ErrorKind::Config, "window_margin >= 0 and tail >= 1 required");
    if (!(opt.q > 1.0)) fail(ErrorKind::Config, "q must exceed 1");

    const SequenceSpec seq = read_sequence(input);
    if (seq.elements.empty()) fail(ErrorKind::Usage, "sequence in " + input + " is empty");
    seq.validate(opt.group.grid);
    const ProfileDecomposition d = extract_profiles(seq, opt);
    const SeparationReport sep = separation_check(d, floor);
    const EnergyReport energy = energy_audit(d, seq, delta, opt.group.grid);

    json doc = envelope("decompose", r.resolved());
    json profiles = json::array();
    for (const auto& p : d.profiles) {
        profiles.push_back({{"tv", p.tv}, {"first_placement", to_json(p.placement.front())},
                            {"last_placement", to_json(p.placement.back())}});
    }
    const bool reconstruction_ok = d.reconstruction_defect <= 1e-12;
    doc["result"] = {{"profiles", profiles},
                     {"stop_reason", d.stop_reason},
                     {"initial_norm_last", d.initial_norms.back()},
                     {"remainder_norm_last", d.remainder_norms.back()},
                     {"remainder_monotone", d.remainder_monotone},
                     {"reconstruction_defect", d.reconstruction_defect},
                     {"separation", to_json(sep)},
                     {"energy", to_json(energy)}};
    const bool pass = sep.pass && energy.pass() && reconstruction_ok && d.remainder_monotone;
    doc["verdict"] = pass ? "PASS" : "FAIL";
    if (!g.out_dir.empty()) write_decomposition(g.out_dir, d, {{"config", r.resolved()}});
    emit(doc, g.out_dir, "audit.json");
    if (!pass) {
        if (!sep.pass) std::cerr << "FAIL separation\n";
        if (!energy.pass()) std::cerr << "FAIL energy\n";
        if (!reconstruction_ok) std::cerr << "FAIL reconstruction\n";
        if (!d.remainder_monotone) std::cerr << "FAIL remainder_monotone\n";
        return kExitInvariant;
    }
    return kExitOk;
}

// ---- audit ---------------------------------------------------------------

int cmd_audit(const Globals& g, const CLI::App& app, const CLI::App& sub, std::size_t size_flag,
              const std::string& fixture_flag, const std::vector<int>& dims_flag) {
    Resolver r(g, app, {"corpus_size", "group_pairs", "dims", "fixture"});
    AuditConfig c;
    c.seed = r.get<std::uint64_t>("seed", 0, sub, "", 0);
    c.threads = r.get<int>("threads", 1, sub, "", 0);
    c.corpus_size = r.get<std::size_t>("corpus_size", c.corpus_size, sub, "--corpus-size", size_flag);
    c.group_pairs = r.get<std::size_t>("group_pairs", c.group_pairs, sub, "", 0);
    c.dims = r.get<std::vector<int>>("dims", c.dims, sub, "--dims", dims_flag);
    c.fixture = r.get<std::string>("fixture", c.fixture, sub, "--fixture", fixture_flag);
    if (c.corpus_size > 100000 || c.group_pairs > 100000) fail(ErrorKind::Config, "corpus too large");

    const AuditReport report = run_audit(c);
    json doc = envelope("audit", r.resolved());
    json suites = json::array();
    for (const auto& s : report.suites) {
        suites.push_back({{"name", s.name}, {"samples", s.samples}, {"violations", s.violations},
                          {"worst", s.worst}, {"detail", s.detail}, {"pass", s.pass()}});
    }
    doc["suites"] = suites;
    doc["warnings"] = report.warnings;
    doc["failed"] = report.failed();
    doc["verdict"] = report.pass() ? "PASS" : "FAIL";
    emit(doc, g.out_dir, "audit.json");
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (!report.pass()) {
        for (const auto& name : report.failed()) std::cerr << "FAIL invariant " << name << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

// ---- fixture -------------------------------------------------------------

int cmd_fixture(const Globals& g, const CLI::App& app, const CLI::App& sub, const std::string& name_flag,
                int level_flag, int count_flag) {
    Resolver r(g, app, {"name", "level", "count"});
    const std::string name = r.get<std::string>("name", "two-profile", sub, "name", name_flag);
    const int level = r.get<int>("level", 6, sub, "--level", level_flag);
    const int count = r.get<int>("count", 8, sub, "--count", count_flag);
    if (g.out_dir.empty()) fail(ErrorKind::Config, "fixture needs --out DIR");
    if (level < 1 || level > 10 || count < 0 || count > 64) fail(ErrorKind::Config, "level in [1,10], count in [0,64]");

    SequenceSpec seq;
    if (name == "two-profile") {
        seq = two_profile_fixture(level, count);
    } else if (name == "static-bump") {
        const GridFunction w = fixture_bump(1, level);
        seq = SequenceSpec::from_generator(2, static_cast<std::size_t>(count), [&](std::size_t) { return DyadicSum(w); },
                                           total_variation(w));
    } else if (name == "staircase") {
        double bound = 0.0;
        std::vector<DyadicSum> elements;
        for (int n = 1; n <= count; ++n) {
            elements.emplace_back(to_grid(staircase(2, n), level));
            bound = std::max(bound, total_variation(elements.back()));
        }
        seq.dim = 2;
        seq.elements = std::move(elements);
        seq.bv_bound = bound;
    } else {
        fail(ErrorKind::Config, "unknown fixture '" + name + "' (two-profile, static-bump, staircase)");
    }
    write_sequence(g.out_dir, seq);
    json doc = envelope("fixture", r.resolved());
    doc["elements"] = seq.elements.size();
    doc["bv_bound"] = seq.bv_bound;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bvlab: BV and Lorentz-space concentration experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON config file; explicit flags override its fields");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "corpus seed");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 256));

    std::string norms_input, norms_p = "1*", norms_q = "1";
    int norms_dim = 2;
    auto* norms = app.add_subcommand("norms", "Lorentz (both forms), Lebesgue and TV norms of one function");
    norms->add_option("input", norms_input, "builtin (annulus2d, annulus3d, zero2d, staircase2d:N) or .bvg/.csv file");
    norms->add_option("--p", norms_p, "first exponent (number or 1*)");
    norms->add_option("--q", norms_q, "second exponent (number, 1* or inf)");
    norms->add_option("--dim", norms_dim, "dimension for .csv step-function input");

    int ce_dim = 2, ce_n = 12;
    std::vector<std::string> ce_q;
    bool ce_probe = false;
    auto* ce = app.add_subcommand("counterexample", "staircase sequence table and invariant verdict");
    ce->add_option("--dim", ce_dim, "dimension N >= 2");
    ce->add_option("--n-max", ce_n, "largest n");
    ce->add_option("--q", ce_q, "second Lorentz indices (repeatable; inf and 1* accepted)");
    ce->add_flag("--probe", ce_probe, "add the D-vanishing probe table");

    std::string dec_input;
    double dec_eps = 0.0, dec_q = 0.0;
    int dec_max = 0, dec_stride = 1;
    auto* dec = app.add_subcommand("decompose", "profile extraction on a sequence directory");
    dec->add_option("input", dec_input, "sequence directory (sequence.json + grid files)");
    dec->add_option("--eps", dec_eps, "stop when the next profile has TV below this");
    dec->add_option("--max-profiles", dec_max, "profile cap");
    dec->add_option("--q", dec_q, "second index of the remainder norm");
    dec->add_option("--stride", dec_stride, "use every stride-th element");

    std::size_t audit_size = 50;
    std::string audit_fixture = "none";
    std::vector<int> audit_dims;
    auto* audit = app.add_subcommand("audit", "invariant suites on a seeded random corpus");
    audit->add_option("--corpus-size", audit_size, "samples per corpus");
    audit->add_option("--fixture", audit_fixture, "none | broken_chi");
    audit->add_option("--dims", audit_dims, "dimensions of the grid corpora");

    std::string fx_name = "two-profile";
    int fx_level = 6, fx_count = 8;
    auto* fixture = app.add_subcommand("fixture", "write a sequence directory for decompose");
    fixture->add_option("name", fx_name, "two-profile | static-bump | staircase");
    fixture->add_option("--level", fx_level, "grid level");
    fixture->add_option("--count", fx_count, "number of elements");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*norms) return cmd_norms(g, app, *norms, norms_input, norms_p, norms_q, norms_dim);
        if (*ce) return cmd_counterexample(g, app, *ce, ce_dim, ce_n, ce_q, ce_probe);
        if (*dec) return cmd_decompose(g, app, *dec, dec_input, dec_eps, dec_max, dec_q, dec_stride);
        if (*audit) return cmd_audit(g, app, *audit, audit_size, audit_fixture, audit_dims);
        if (*fixture) return cmd_fixture(g, app, *fixture, fx_name, fx_level, fx_count);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
