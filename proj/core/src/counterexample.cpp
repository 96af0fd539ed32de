#include "bvlab/counterexample.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "bvlab/parallel.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

std::string q_label(double q) { return std::isinf(q) ? "inf" : fmt(q); }

}  // namespace

bool CounterexampleResult::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::Usage, "log-log fit needs at least two points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorKind::Domain, "log-log fit needs positive data");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / x.size();
    const double my = sy / y.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) fail(ErrorKind::Usage, "log-log fit needs two distinct abscissae");
    return sxy / sxx;
}

CounterexampleResult run_counterexample(int dim, int n_max, const std::vector<double>& q_list,
                                        const CounterexampleOptions& options) {
    if (dim < 2) fail(ErrorKind::UnsupportedDimension, "the staircase counterexample needs N >= 2");
    check_dim(dim);
    if (n_max < 1) fail(ErrorKind::Domain, "n_max must be at least 1");
    for (double q : q_list)
        if (!(q >= 1.0)) fail(ErrorKind::Index, "Lorentz second index must be >= 1, got " + fmt(q));

    const double p = critical_exponent(dim);
    CounterexampleResult result;
    result.dim = dim;
    result.n_max = n_max;
    result.q_list = q_list;
    result.options = options;
    result.annulus_measure = unit_ball_volume(dim) * (std::ldexp(1.0, dim) - 1.0);
    result.f0_floor = 0.5 * result.annulus_measure;
    result.rows.resize(static_cast<std::size_t>(n_max));

    parallel_for(result.rows.size(), options.threads, [&](std::size_t k) {
        const int n = static_cast<int>(k) + 1;
        const RadialStep u = staircase(dim, n);
        const StepFunction star = to_stepfunction(u);
        CounterexampleRow row;
        row.n = n;
        row.tv_coarea = radial_tv(u);
        row.tv_piecewise = piecewise_tv(u);
        row.l1star = lebesgue_norm(star, p);
        for (double q : q_list) row.lorentz[q] = lorentz_norm(star, LorentzIndex::make(p, q));
        row.f0 = dual_pairing_f0(u);
        result.rows[k] = std::move(row);
    });

    auto& checks = result.checks;
    const auto& rows = result.rows;

    {
        InvariantCheck c{"f0_floor", true, "f0 >= " + fmt(result.f0_floor)};
        for (const auto& r : rows) c.pass = c.pass && r.f0 >= result.f0_floor;
        checks.push_back(c);
    }
    {
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(r.f0 - rows.front().f0) / rows.front().f0);
        checks.push_back({"f0_constant", worst <= 1e-12, "max relative drift " + fmt(worst)});
    }
    {
        double worst = 0.0;
        for (const auto& r : rows) {
            const double expected = std::pow(r.n, 1.0 / p - 1.0) * std::pow(result.annulus_measure, 1.0 / p);
            worst = std::max(worst, std::abs(r.l1star - expected) / expected);
        }
        checks.push_back({"l1star_closed_form", worst <= 1e-10, "max relative error " + fmt(worst)});
    }
    {
        InvariantCheck c{"l1star_decreasing", true, "strict decrease in n"};
        for (std::size_t k = 1; k < rows.size(); ++k) c.pass = c.pass && rows[k].l1star < rows[k - 1].l1star;
        checks.push_back(c);
    }
    for (double q : q_list) {
        const std::string label = q_label(q);
        if (q == 1.0) {
            double lowest = rows.front().lorentz.at(q);
            for (const auto& r : rows) lowest = std::min(lowest, r.lorentz.at(q));
            const double ratio = lowest / rows.front().lorentz.at(q);
            checks.push_back({"q1_nonvanishing", ratio >= options.nonvanishing_floor,
                              "min/first = " + fmt(ratio) + ", floor " + fmt(options.nonvanishing_floor)});
            continue;
        }
        if (q < 1.0 || q == 1.0) continue;
        InvariantCheck dec{"lorentz_decreasing_q" + label, true, "strict decrease in n"};
        for (std::size_t k = 1; k < rows.size(); ++k) {
            dec.pass = dec.pass && rows[k].lorentz.at(q) < rows[k - 1].lorentz.at(q);
        }
        checks.push_back(dec);

        const double ratio = rows.back().lorentz.at(q) / rows.front().lorentz.at(q);
        const double envelope = std::isinf(q) ? std::pow(1.0 / n_max, 0.5) : std::pow(1.0 / n_max, (q - 1.0) / (2.0 * q));
        checks.push_back({"envelope_q" + label, n_max == 1 || ratio <= envelope,
                          "ratio " + fmt(ratio) + " vs envelope " + fmt(envelope)});

        if (n_max >= 3) {
            std::vector<double> x, y;
            for (const auto& r : rows) {
                x.push_back(r.n);
                y.push_back(r.lorentz.at(q));
            }
            const double slope = fit_loglog_slope(x, y);
            const double expected = std::isinf(q) ? -1.0 : 1.0 / q - 1.0;
            result.fitted_exponents[q] = slope;
            checks.push_back({"decay_exponent_q" + label, std::abs(slope - expected) <= options.exponent_tolerance,
                              "fitted " + fmt(slope) + ", expected " + fmt(expected)});
        }
    }
    return result;
}

std::vector<GroupElement> probe_elements(int dim, int n, int random_shifts, std::uint64_t seed) {
    check_dim(dim);
    std::vector<GroupElement> out;
    std::mt19937_64 rng(seed);
    for (int j = -n - 3; j <= 3; ++j) {
        int total = 1;
        for (int a = 0; a < dim; ++a) total *= 4;
        for (int code = 0; code < total; ++code) {
            CellIndex y{0, 0, 0};
            int rest = code;
            for (int a = 0; a < dim; ++a) {
                y[a] = rest % 4 - 2;
                rest /= 4;
            }
            out.push_back(GroupElement::lattice(dim, j, y));
        }
        for (int r = 0; r < random_shifts; ++r) {
            CellIndex y{0, 0, 0};
            for (int a = 0; a < dim; ++a) y[a] = static_cast<std::int64_t>(rng() % 8) - 4;
            out.push_back(GroupElement::lattice(dim, j, y));
        }
    }
    return out;
}

namespace {

void finish_probe(ProbeReport& report) {
    report.max_mass = 0.0;
    report.argmax = 0;
    for (std::size_t i = 0; i < report.masses.size(); ++i) {
        if (report.masses[i] > report.max_mass) {
            report.max_mass = report.masses[i];
            report.argmax = i;
        }
    }
}

}  // namespace

ProbeReport dvanishing_probe(const RadialStep& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options) {
    const int dim = u.dim();
    const int level = options.quadrature_level > 0 ? options.quadrature_level : 14 / dim;
    const std::int64_t side = std::int64_t{1} << level;
    std::int64_t count = 1;
    for (int a = 0; a < dim; ++a) count *= side;
    const double h = std::ldexp(1.0, -level);
    const double cell = std::ldexp(1.0, -level * dim);

    ProbeReport report;
    report.elements = elements;
    report.masses.assign(elements.size(), 0.0);
    parallel_for(elements.size(), options.threads, [&](std::size_t e) {
        const GroupElement& g = elements[e];
        if (g.dim() != dim) fail(ErrorKind::DimensionMismatch, "probe element dimension differs");
        double sum = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            Point x{0.0, 0.0, 0.0};
            std::int64_t rest = i;
            for (int a = 0; a < dim; ++a) {
                x[a] = (static_cast<double>(rest % side) + 0.5) * h;
                rest /= side;
            }
            sum += std::abs(u(g.preimage(x)));
        }
        report.masses[e] = g.amplitude() * cell * sum;
    });
    finish_probe(report);
    return report;
}

ProbeReport dvanishing_probe(int dim, int n, const std::vector<GroupElement>& elements, const ProbeOptions& options) {
    return dvanishing_probe(staircase(dim, n), elements, options);
}

double unit_cube_mass(const GridFunction& u, const Limits& limits) {
    const int level = std::max(u.level(), 0);
    const std::int64_t side = std::int64_t{1} << level;
    const CellIndex lo{0, 0, 0};
    const CellIndex hi{side, side, side};
    return crop(u, CellBox::make(u.dim(), level, lo, hi), limits).l1_norm();
}

ProbeReport dvanishing_probe(const GridFunction& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options) {
    ProbeReport report;
    report.elements = elements;
    report.masses.assign(elements.size(), 0.0);
    parallel_for(elements.size(), options.threads, [&](std::size_t e) {
        report.masses[e] = unit_cube_mass(act(elements[e], u, options.group), options.group.grid);
    });
    finish_probe(report);
    return report;
}

ProbeReport dvanishing_probe(const DyadicSum& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options) {
    ProbeReport report;
    report.elements = elements;
    report.masses.assign(elements.size(), 0.0);
    const auto clusters = u.clusters(options.group.grid);
    parallel_for(elements.size(), options.threads, [&](std::size_t e) {
        double m = 0.0;
        for (const auto& c : clusters) m += unit_cube_mass(act(elements[e], c, options.group), options.group.grid);
        report.masses[e] = m;
    });
    finish_probe(report);
    return report;
}

CocompactnessTable cocompactness_table(int dim, int n_max, const std::vector<double>& q_list,
                                       const ProbeOptions& options) {
    const CounterexampleResult ce = run_counterexample(dim, n_max, q_list, {.threads = options.threads});
    CocompactnessTable table;
    table.dim = dim;
    for (const auto& row : ce.rows) {
        const ProbeReport probe = dvanishing_probe(dim, row.n, probe_elements(dim, row.n), options);
        table.rows.push_back({row.n, probe.max_mass, row.lorentz});
    }
    table.fit_from = std::max(1, n_max / 2);
    if (n_max - table.fit_from + 1 >= 2) {
        std::vector<double> x, y;
        for (const auto& r : table.rows) {
            if (r.n < table.fit_from) continue;
            x.push_back(r.n);
            y.push_back(r.probe_max);
        }
        table.probe_exponent = fit_loglog_slope(x, y);
    }
    if (n_max >= 2) {
        for (double q : q_list) {
            std::vector<double> x, y;
            for (const auto& r : table.rows) {
                x.push_back(r.n);
                y.push_back(r.lorentz.at(q));
            }
            table.lorentz_exponents[q] = fit_loglog_slope(x, y);
        }
    }
    return table;
}

}  // namespace bvlab
