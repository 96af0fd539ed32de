#include "bvlab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bvlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[] = "BVGRID1\n";
constexpr std::size_t kMagicSize = 8;

void put_le(std::string& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class Reader {
public:
    Reader(const std::string& bytes, std::string source) : bytes_(bytes), source_(std::move(source)) {}

    std::uint64_t le(int n) {
        if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) {
            fail(ErrorKind::Io, source_ + ": truncated grid file at byte " + std::to_string(pos_));
        }
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_ + i])} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::size_t pos() const { return pos_; }

private:
    const std::string& bytes_;
    std::string source_;
    std::size_t pos_ = kMagicSize;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

json header_json(const GridFunction& u) {
    json origin = json::array();
    json extents = json::array();
    for (int a = 0; a < u.dim(); ++a) {
        origin.push_back(u.origin()[a]);
        extents.push_back(u.extents()[a]);
    }
    return {{"dim", u.dim()}, {"level", u.level()}, {"origin", origin}, {"extents", extents}};
}

double parse_double(const std::string& field, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end == field.c_str() || *end != '\0') {
        fail(ErrorKind::Io, where + ": cannot parse number '" + field + "'");
    }
    return v;
}

json json_number(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string q_label(double q) {
    if (std::isinf(q)) return "inf";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, q);
        if (std::strtod(buf, nullptr) == q) break;
    }
    return buf;
}

std::string encode_grid(const GridFunction& u) {
    std::string out(kMagic, kMagicSize);
    put_le(out, static_cast<std::uint32_t>(u.dim()), 4);
    put_le(out, static_cast<std::uint32_t>(u.level()), 4);
    for (int a = 0; a < u.dim(); ++a) put_le(out, static_cast<std::uint64_t>(u.origin()[a]), 8);
    for (int a = 0; a < u.dim(); ++a) put_le(out, static_cast<std::uint64_t>(u.extents()[a]), 8);
    out.reserve(out.size() + 8 * u.values().size());
    for (double v : u.values()) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    return out;
}

GridFunction decode_grid(const std::string& bytes, const std::string& source) {
    if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic, kMagicSize) != 0) {
        fail(ErrorKind::Io, source + ": not a grid file (bad magic)");
    }
    Reader r(bytes, source);
    const int dim = static_cast<std::int32_t>(r.le(4));
    const int level = static_cast<std::int32_t>(r.le(4));
    if (dim < 1 || dim > kMaxDim) fail(ErrorKind::Io, source + ": unsupported dimension " + std::to_string(dim));
    CellIndex origin{0, 0, 0};
    CellIndex extents{1, 1, 1};
    for (int a = 0; a < dim; ++a) origin[a] = static_cast<std::int64_t>(r.le(8));
    std::uint64_t count = 1;
    for (int a = 0; a < dim; ++a) {
        extents[a] = static_cast<std::int64_t>(r.le(8));
        if (extents[a] < 0) fail(ErrorKind::Io, source + ": negative extent");
        count *= static_cast<std::uint64_t>(extents[a]);
    }
    if (bytes.size() - r.pos() != 8 * count) {
        fail(ErrorKind::Io, source + ": expected " + std::to_string(count) + " values, found " +
                                std::to_string((bytes.size() - r.pos()) / 8) + " (" +
                                std::to_string(bytes.size() - r.pos()) + " bytes)");
    }
    std::vector<double> values(count);
    for (auto& v : values) v = std::bit_cast<double>(r.le(8));
    return GridFunction(dim, level, origin, extents, std::move(values));
}

void write_grid(const fs::path& path, const GridFunction& u, const json& provenance) {
    spit(path, encode_grid(u));
    json meta = header_json(u);
    meta["schema_version"] = kSchemaVersion;
    meta["format"] = "BVGRID1";
    meta["value_count"] = u.values().size();
    if (!provenance.is_null()) meta["provenance"] = provenance;
    spit(fs::path(path.string() + ".json"), meta.dump(2) + "\n");
}

GridFunction read_grid(const fs::path& path) { return decode_grid(slurp(path), path.string()); }

void write_stepfunction_csv(std::ostream& out, const StepFunction& u) {
    out << "value,measure,cumulative_measure\n";
    const auto cum = u.cumulative();
    for (std::size_t i = 0; i < u.chunks().size(); ++i) {
        out << format_double(u.chunks()[i].value) << ',' << format_double(u.chunks()[i].measure) << ','
            << format_double(cum[i]) << '\n';
    }
}

StepFunction read_stepfunction_csv(std::istream& in, const std::string& source) {
    std::vector<Chunk> pieces;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.rfind("value", 0) == 0) continue;
        std::stringstream fields(line);
        std::string a, b;
        const std::string where = source + ":" + std::to_string(line_no);
        if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',')) {
            fail(ErrorKind::Io, where + ": expected at least two comma-separated fields");
        }
        const double value = parse_double(a, where);
        const double measure = parse_double(b, where);
        if (!(measure >= 0.0) || !std::isfinite(measure) || !std::isfinite(value)) {
            fail(ErrorKind::Io, where + ": value must be finite and measure nonnegative");
        }
        pieces.push_back({value, measure});
    }
    return StepFunction::from_pairs(std::move(pieces));
}

StepFunction read_stepfunction_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    return read_stepfunction_csv(in, path.string());
}

void write_radial_csv(std::ostream& out, const RadialStep& u) {
    out << "r_in,r_out,value\n";
    for (std::size_t m = 1; m <= u.annuli(); ++m) {
        out << format_double(u.radii()[m - 1]) << ',' << format_double(u.radii()[m]) << ','
            << format_double(u.values()[m - 1]) << '\n';
    }
}

json to_json(const RadialStep& u) {
    return {{"schema_version", kSchemaVersion},
            {"dim", u.dim()},
            {"annuli", u.annuli()},
            {"outer_radius", u.outer_radius()},
            {"radii", std::vector<double>(u.radii().begin(), u.radii().end())},
            {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

json to_json(const GroupElement& g) {
    json y = json::array();
    for (int a = 0; a < g.dim(); ++a) y.push_back(g.y_numerators()[a]);
    return {{"j", g.scale()}, {"y_numerators", y}, {"y_level", g.y_level()}};
}

GroupElement group_element_from_json(const json& j, int dim) {
    try {
        const auto& y = j.at("y_numerators");
        if (!y.is_array() || static_cast<int>(y.size()) != dim) {
            fail(ErrorKind::Io, "group element needs " + std::to_string(dim) + " y numerators");
        }
        CellIndex n{0, 0, 0};
        for (int a = 0; a < dim; ++a) n[a] = y[a].get<std::int64_t>();
        return GroupElement(dim, j.at("j").get<int>(), n, j.at("y_level").get<int>());
    } catch (const json::exception& e) {
        fail(ErrorKind::Io, std::string("malformed group element: ") + e.what());
    }
}

json to_json(const TVReport& r) {
    return {{"dim", r.dim},
            {"total", r.total},
            {"cubes", r.per_cube.size()},
            {"sum_per_cube", r.sum_per_cube},
            {"splitting_bound", r.splitting_bound},
            {"holds", r.holds()}};
}

void write_tv_per_cube_csv(std::ostream& out, const TVReport& r) {
    for (int a = 0; a < r.dim; ++a) out << "cube_" << a << ',';
    out << "tv\n";
    for (const auto& [cube, value] : r.per_cube) {
        for (int a = 0; a < r.dim; ++a) out << cube[a] << ',';
        out << format_double(value) << '\n';
    }
}

json to_json(const ChainReport& r) {
    return {{"map", r.map_name},         {"tv_composed", r.tv_composed}, {"tv_input", r.tv_input},
            {"derivative_bound", r.derivative_bound}, {"bound", r.bound}, {"ratio", r.ratio},
            {"holds", r.holds}};
}

json to_json(const BVEmbeddingAudit& a) {
    return {{"q", json_number(a.q)},
            {"lorentz_q", a.lorentz_q},
            {"lorentz_1", a.lorentz_1},
            {"bv_norm", a.bv_norm},
            {"ratio_q_over_1", a.ratio_q_over_1},
            {"ratio_1_over_bv", a.ratio_1_over_bv},
            {"first_inequality_holds", a.first_inequality_holds}};
}

json to_json(const NestedAudit& a) {
    return {{"low", {{"p", a.low.p}, {"q", json_number(a.low.q)}}},
            {"high", {{"p", a.high.p}, {"q", json_number(a.high.q)}}},
            {"norm_low", a.norm_low},
            {"norm_high", a.norm_high},
            {"ratio", a.ratio},
            {"region_measure", a.region_measure}};
}

json to_json(const TruncationProfile& chi) {
    return {{"name", chi.name},
            {"dim", chi.dim},
            {"a", chi.a},
            {"plateau", {chi.plateau_lo, chi.plateau_hi}},
            {"b", chi.b},
            {"derivative_bound", chi.derivative_bound}};
}

json to_json(const LayerAudit& a) {
    json rows = json::array();
    for (const auto& r : a.rows) {
        rows.push_back({{"j", r.j}, {"tv_b", r.tv_b}, {"layer_norm", r.layer_norm}, {"color", r.color}});
    }
    return {{"dim", a.dim},
            {"q", a.q},
            {"lorentz_q_pow", a.lorentz_q_pow},
            {"tv", a.tv},
            {"sup_layer_term", a.sup_layer_term},
            {"sup_j", a.sup_j},
            {"sum_tv_b", a.sum_tv_b},
            {"overlap_bound", a.overlap_bound},
            {"overlap_holds", a.overlap_holds},
            {"empirical_constant", a.empirical_constant},
            {"rows", rows}};
}

void write_counterexample_csv(std::ostream& out, const CounterexampleResult& r) {
    out << "n,tv_coarea,tv_piecewise,l1star";
    for (double q : r.q_list) out << ",lorentz_q" << q_label(q);
    out << ",f0\n";
    for (const auto& row : r.rows) {
        out << row.n << ',' << format_double(row.tv_coarea) << ',' << format_double(row.tv_piecewise) << ','
            << format_double(row.l1star);
        for (double q : r.q_list) out << ',' << format_double(row.lorentz.at(q));
        out << ',' << format_double(row.f0) << '\n';
    }
}

json to_json(const CounterexampleResult& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    json fits = json::object();
    for (const auto& [q, slope] : r.fitted_exponents) fits[q_label(q)] = slope;
    json qs = json::array();
    for (double q : r.q_list) qs.push_back(q_label(q));
    return {{"schema_version", kSchemaVersion},
            {"dim", r.dim},
            {"n_max", r.n_max},
            {"q_list", qs},
            {"annulus_measure", r.annulus_measure},
            {"f0_floor", r.f0_floor},
            {"fitted_exponents", fits},
            {"checks", checks},
            {"verdict", r.pass() ? "PASS" : "FAIL"}};
}

std::string counterexample_gnuplot(const CounterexampleResult& r, const std::string& csv_name) {
    std::ostringstream s;
    s << "# gnuplot script: Lorentz norms of the staircase sequence against n\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set logscale xy\n"
      << "set xlabel 'n'\n"
      << "set ylabel 'norm'\n"
      << "plot ";
    for (std::size_t i = 0; i < r.q_list.size(); ++i) {
        if (i > 0) s << ", \\\n     ";
        s << "'" << csv_name << "' using 1:" << (5 + i) << " with linespoints";
    }
    if (r.q_list.empty()) s << "'" << csv_name << "' using 1:4 with linespoints";
    s << "\n";
    return s.str();
}

json to_json(const CocompactnessTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json lorentz = json::object();
        for (const auto& [q, v] : r.lorentz) lorentz[q_label(q)] = v;
        rows.push_back({{"n", r.n}, {"probe_max", r.probe_max}, {"lorentz", lorentz}});
    }
    json fits = json::object();
    for (const auto& [q, slope] : t.lorentz_exponents) fits[q_label(q)] = slope;
    return {{"dim", t.dim}, {"rows", rows}, {"probe_exponent", t.probe_exponent}, {"probe_fit_from", t.fit_from},
            {"lorentz_exponents", fits}};
}

void write_sequence(const fs::path& dir, const SequenceSpec& seq) {
    fs::create_directories(dir);
    json elements = json::array();
    for (std::size_t k = 0; k < seq.elements.size(); ++k) {
        json files = json::array();
        const auto terms = seq.elements[k].terms();
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const std::string name = "u" + std::to_string(k) + "_t" + std::to_string(t) + ".bvg";
            write_grid(dir / name, terms[t], {{"element", k}, {"term", t}});
            files.push_back(name);
        }
        elements.push_back(files);
    }
    const json meta = {{"schema_version", kSchemaVersion},
                       {"dim", seq.dim},
                       {"bv_bound", seq.bv_bound},
                       {"elements", elements}};
    spit(dir / "sequence.json", meta.dump(2) + "\n");
}

SequenceSpec read_sequence(const fs::path& dir) {
    const fs::path index = dir / "sequence.json";
    json meta;
    try {
        meta = json::parse(slurp(index));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Io, index.string() + ": " + e.what());
    }
    try {
        if (meta.at("schema_version").get<int>() != kSchemaVersion) {
            fail(ErrorKind::Io, index.string() + ": unsupported schema_version");
        }
        SequenceSpec seq;
        seq.dim = meta.at("dim").get<int>();
        check_dim(seq.dim);
        seq.bv_bound = meta.at("bv_bound").get<double>();
        for (const auto& files : meta.at("elements")) {
            std::vector<GridFunction> terms;
            for (const auto& name : files) terms.push_back(read_grid(dir / name.get<std::string>()));
            seq.elements.emplace_back(seq.dim, std::move(terms));
        }
        return seq;
    } catch (const json::exception& e) {
        fail(ErrorKind::Io, index.string() + ": " + e.what());
    }
}

json to_json(const SeparationReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"n", p.n},
                         {"m", p.m},
                         {"distances", p.distances},
                         {"tail_min", p.tail_min},
                         {"increasing", p.increasing},
                         {"pass", p.pass}});
    }
    return {{"floor", r.floor}, {"pairs", pairs}, {"pass", r.pass}};
}

json to_json(const EnergyReport& r) {
    return {{"delta", r.delta},
            {"sum_profile_tv", r.sum_profile_tv},
            {"tv_u", r.tv_u},
            {"tv_r", r.tv_r},
            {"slack", r.slack},
            {"upper_holds", r.upper_holds},
            {"lower_holds", r.lower_holds},
            {"tv_u_samples", r.tv_u_samples},
            {"tv_r_samples", r.tv_r_samples},
            {"pass", r.pass()}};
}

void write_decomposition(const fs::path& dir, const ProfileDecomposition& d, const json& extra) {
    fs::create_directories(dir);
    json profiles = json::array();
    for (std::size_t n = 0; n < d.profiles.size(); ++n) {
        const auto& p = d.profiles[n];
        const std::string name = "profile_" + std::to_string(n + 1) + ".bvg";
        write_grid(dir / name, p.w, {{"profile", n + 1}});
        json align = json::array();
        json place = json::array();
        for (const auto& g : p.alignment) align.push_back(to_json(g));
        for (const auto& g : p.placement) place.push_back(to_json(g));
        profiles.push_back({{"file", name}, {"tv", p.tv}, {"alignment", align}, {"placement", place}});
    }
    json meta = {{"schema_version", kSchemaVersion},
                 {"dim", d.dim},
                 {"q", d.q},
                 {"indices", d.indices},
                 {"profiles", profiles},
                 {"initial_norms", d.initial_norms},
                 {"remainder_norms", d.remainder_norms},
                 {"max_mass_history", d.max_mass_history},
                 {"remainder_monotone", d.remainder_monotone},
                 {"reconstruction_defect", d.reconstruction_defect},
                 {"stop_reason", d.stop_reason}};
    if (!extra.is_null()) meta.update(extra);
    spit(dir / "decomposition.json", meta.dump(2) + "\n");
}

}  // namespace bvlab
