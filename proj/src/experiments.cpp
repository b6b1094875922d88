// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - rate-splitting multi-pair massive MIMO relay simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rsrelay/experiments.hpp"
#include "rsrelay/deteq.hpp"
#include "rsrelay/montecarlo.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <omp.h>

namespace rsrelay
{

std::string_view to_string(SweepAxis a)
{
    switch (a)
    {
    case SweepAxis::RhoDb:
        return "rho_dB";
    case SweepAxis::Sigma2SiDb:
        return "sigma2_SI_dB";
    case SweepAxis::M:
        return "M";
    case SweepAxis::K:
        return "K";
    }
    return "?";
}

SweepAxis parse_axis(std::string_view s)
{
    if (s == "rho_dB")
        return SweepAxis::RhoDb;
    if (s == "sigma2_SI_dB")
        return SweepAxis::Sigma2SiDb;
    if (s == "M")
        return SweepAxis::M;
    if (s == "K")
        return SweepAxis::K;
    throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "'");
}

void SweepSpec::validate() const
{
    if (values.empty())
        throw std::invalid_argument("sweep '" + name + "': values must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw std::invalid_argument("sweep '" + name + "': values must be strictly increasing");
    if (n_draws < 1)
        throw std::invalid_argument("sweep '" + name + "': n_draws must be >= 1");
    if (seeds.empty())
        throw std::invalid_argument("sweep '" + name + "': need at least one seed");
    if (strategies.empty() || duplexes.empty() || csits.empty())
        throw std::invalid_argument("sweep '" + name + "': strategy/duplex/csit lists must be non-empty");
    if (!source_mc && !source_de)
        throw std::invalid_argument("sweep '" + name + "': no source selected");
    if (axis == SweepAxis::M || axis == SweepAxis::K)
        for (double v : values)
            if (v != std::floor(v) || v < 1)
                throw std::invalid_argument("sweep '" + name + "': integer axis needs positive integer values");
    for (double v : values)
        config_at(*this, v).validate();
}

namespace
{
template <typename T, typename F>
std::vector<T> parse_list(const nlohmann::json& j, F parse)
{
    std::vector<T> out;
    for (const auto& e : j)
        out.push_back(parse(e.get<std::string>()));
    return out;
}
} // namespace

SweepSpec sweep_from_json(const nlohmann::json& in, bool paper_scale)
{
    nlohmann::json j = in;
    if (paper_scale && j.contains("paper"))
        j.merge_patch(j.at("paper"));
    j.erase("paper");

    SweepSpec s;
    for (const auto& [key, v] : j.items())
    {
        if (key == "name")
            s.name = v.get<std::string>();
        else if (key == "axis")
            s.axis = parse_axis(v.get<std::string>());
        else if (key == "values")
            s.values = v.get<std::vector<double>>();
        else if (key == "base")
            apply_json(s.base, v);
        else if (key == "profile_mode")
        {
            const auto m = v.get<std::string>();
            if (m == "uniform")
                s.profile_mode = ProfileMode::Uniform;
            else if (m == "topology")
                s.profile_mode = ProfileMode::Topology;
            else
                throw std::invalid_argument("unknown profile_mode '" + m + "'");
        }
        else if (key == "uniform_beta")
            s.uniform_beta = v.get<double>();
        else if (key == "disk_diameter_m")
            s.disk_diameter_m = v.get<double>();
        else if (key == "n_draws")
            s.n_draws = v.get<int>();
        else if (key == "seeds")
            s.seeds = v.get<std::vector<std::uint64_t>>();
        else if (key == "emit")
        {
            const auto e = v.get<std::vector<std::string>>();
            s.emit_csv = std::find(e.begin(), e.end(), "csv") != e.end();
            s.emit_plot = std::find(e.begin(), e.end(), "plot") != e.end();
        }
        else if (key == "sources")
        {
            const auto e = v.get<std::vector<std::string>>();
            for (const auto& x : e)
                if (x != "mc" && x != "de")
                    throw std::invalid_argument("unknown source '" + x + "'");
            s.source_mc = std::find(e.begin(), e.end(), "mc") != e.end();
            s.source_de = std::find(e.begin(), e.end(), "de") != e.end();
        }
        else if (key == "strategies")
            s.strategies = parse_list<Strategy>(v, parse_strategy);
        else if (key == "duplexes")
            s.duplexes = parse_list<DuplexMode>(v, parse_duplex);
        else if (key == "csits")
            s.csits = parse_list<CsitMode>(v, parse_csit);
        else
            throw std::invalid_argument("unknown sweep key '" + key + "'");
    }
    s.validate();
    return s;
}

std::vector<SweepSpec> load_sweep_file(const std::filesystem::path& path, bool paper_scale)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open sweep spec '" + path.string() + "'");
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(is);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::runtime_error("sweep spec '" + path.string() + "': " + e.what());
    }
    std::vector<SweepSpec> out;
    if (!j.contains("sweeps"))
    {
        out.push_back(sweep_from_json(j, paper_scale));
        return out;
    }
    const nlohmann::json common = j.value("common", nlohmann::json::object());
    for (const auto& sw : j.at("sweeps"))
    {
        nlohmann::json merged = common;
        merged.merge_patch(sw);
        out.push_back(sweep_from_json(merged, paper_scale));
    }
    return out;
}

SystemConfig config_at(const SweepSpec& spec, double v)
{
    SystemConfig c = spec.base;
    switch (spec.axis)
    {
    case SweepAxis::RhoDb:
        c.rho = db_to_linear(v);
        break;
    case SweepAxis::Sigma2SiDb:
        c.sigma2_SI = db_to_linear(v);
        break;
    case SweepAxis::M:
        c.M = static_cast<int>(v);
        c.N = static_cast<int>(v);
        break;
    case SweepAxis::K:
        c.K = static_cast<int>(v);
        break;
    }
    return c;
}

ResultRow row_from_report(const RateReport& r, const SweepSpec& spec, double axis_value, std::uint64_t seed)
{
    ResultRow row;
    row.axis = std::string(to_string(spec.axis));
    row.axis_value = axis_value;
    row.strategy = r.meta.cfg.strategy;
    row.duplex = r.meta.cfg.duplex_mode;
    row.csit = r.meta.cfg.csit_mode;
    row.source = r.meta.source;
    row.seed = seed;
    row.n_draws = r.meta.n_draws;
    row.sum_rate = r.sum_rate;
    row.rate_hop1 = r.rate_hop1;
    row.rate_hop2 = r.rate_hop2;
    row.rate_common = r.R_c;
    row.t_split = r.t;
    row.lambda = r.lambda;
    return row;
}

int worker_count()
{
    if (const char* env = std::getenv("RSRELAY_WORKERS"))
    {
        char* end = nullptr;
        errno = 0;
        const long n = std::strtol(env, &end, 10);
        if (errno != 0 || end == env || *end != '\0' || n < 1)
            throw std::invalid_argument("RSRELAY_WORKERS must be a positive integer");
        return static_cast<int>(n);
    }
    return omp_get_max_threads();
}

ResultTable run_sweep(const SweepSpec& spec, int workers)
{
    spec.validate();
    if (workers < 1)
        workers = worker_count();

    struct Cell
    {
        double value;
        CsitMode csit;
        DuplexMode duplex;
        Strategy strategy;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double v : spec.values)
        for (auto c : spec.csits)
            for (auto d : spec.duplexes)
                for (auto s : spec.strategies)
                    for (auto seed : spec.seeds)
                        cells.push_back({v, c, d, s, seed});

    std::vector<ResultTable> per_cell(cells.size());
    std::vector<std::string> errors(cells.size());
    const int n_cells = static_cast<int>(cells.size());

#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (int i = 0; i < n_cells; ++i)
    {
        const Cell& cell = cells[static_cast<std::size_t>(i)];
        try
        {
            SystemConfig cfg = config_at(spec, cell.value);
            cfg.csit_mode = cell.csit;
            cfg.duplex_mode = cell.duplex;
            cfg.strategy = cell.strategy;
            const LargeScaleProfile profile = spec.profile_mode == ProfileMode::Uniform
                                                  ? uniform_profile(cfg, spec.uniform_beta)
                                                  : draw_topology(cfg, cell.seed, spec.disk_diameter_m);
            auto& rows = per_cell[static_cast<std::size_t>(i)];
            if (spec.source_mc)
                rows.push_back(row_from_report(mc_sum_rate(cfg, profile, spec.n_draws, cell.seed), spec,
                                               cell.value, cell.seed));
            if (spec.source_de)
            {
                auto de = de_sum_rate(cfg, profile);
                de.meta.seed = cell.seed;
                rows.push_back(row_from_report(de, spec, cell.value, cell.seed));
            }
        }
        catch (const std::exception& e)
        {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s=%g", std::string(to_string(spec.axis)).c_str(), cell.value);
            errors[static_cast<std::size_t>(i)] = "sweep '" + spec.name + "' cell [" + buf + ", " +
                                                  std::string(to_string(cell.strategy)) + ", " +
                                                  std::string(to_string(cell.duplex)) + ", " +
                                                  std::string(to_string(cell.csit)) +
                                                  ", seed=" + std::to_string(cell.seed) + "]: " + e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty())
            throw std::runtime_error(e);

    ResultTable table;
    for (auto& rows : per_cell)
        table.insert(table.end(), rows.begin(), rows.end());
    return table;
}

namespace
{
std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep))
        out.push_back(cur);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
        throw std::invalid_argument("csv: bad number '" + s + "'");
    return v;
}
} // namespace

std::string format_csv(const ResultTable& table)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : table)
    {
        out += r.axis + ',' + fmt_double(r.axis_value) + ',' + std::string(to_string(r.strategy)) + ',' +
               std::string(to_string(r.duplex)) + ',' + std::string(to_string(r.csit)) + ',' +
               std::string(to_string(r.source)) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.n_draws) +
               ',' + fmt_double(r.sum_rate) + ',' + fmt_double(r.rate_hop1) + ',' + fmt_double(r.rate_hop2) + ',' +
               fmt_double(r.rate_common) + ',' + fmt_double(r.t_split) + ',' + fmt_double(r.lambda) + '\n';
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
    os << format_csv(table);
    if (!os)
        throw std::runtime_error("write failed for '" + path.string() + "': " + std::strerror(errno));
}

ResultTable parse_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::invalid_argument("csv: missing or unexpected header");
    ResultTable table;
    int lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 14)
            throw std::invalid_argument("csv: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                                        " fields");
        ResultRow r;
        r.axis = f[0];
        r.axis_value = parse_double(f[1]);
        r.strategy = parse_strategy(f[2]);
        r.duplex = parse_duplex(f[3]);
        r.csit = parse_csit(f[4]);
        if (f[5] == "mc")
            r.source = RateSource::MonteCarlo;
        else if (f[5] == "de")
            r.source = RateSource::DeterministicEquivalent;
        else
            throw std::invalid_argument("csv: unknown source '" + f[5] + "'");
        r.seed = std::stoull(f[6]);
        r.n_draws = std::stoi(f[7]);
        r.sum_rate = parse_double(f[8]);
        r.rate_hop1 = parse_double(f[9]);
        r.rate_hop2 = parse_double(f[10]);
        r.rate_common = parse_double(f[11]);
        r.t_split = parse_double(f[12]);
        r.lambda = parse_double(f[13]);
        table.push_back(std::move(r));
    }
    return table;
}

ResultTable read_csv(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_csv(ss.str());
}

namespace
{
using SeriesKey = std::tuple<Strategy, DuplexMode, CsitMode>;

std::string series_label(const SeriesKey& k)
{
    std::string s = std::get<0>(k) == Strategy::RS ? "RS" : "NoRS";
    s += std::get<1>(k) == DuplexMode::FD ? " FD" : " HD";
    s += std::get<2>(k) == CsitMode::Perfect ? " perfect" : " imperfect";
    return s;
}

std::string axis_label(const std::string& axis)
{
    if (axis == "rho_dB")
        return "&#961; (dB)";
    if (axis == "sigma2_SI_dB")
        return "&#963;&#178; SI (dB)";
    if (axis == "M")
        return "M = N (antennas)";
    if (axis == "K")
        return "K (user pairs)";
    return axis;
}

double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (m * mag >= raw)
            return m * mag;
    return 10.0 * mag;
}

std::string f2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string gfmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string xml_escape(const std::string& in)
{
    std::string out;
    for (char c : in)
    {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
} // namespace

std::string render_plot(const ResultTable& table, const std::string& title)
{
    if (table.empty())
        throw std::invalid_argument("emit_plot: empty table");

    // Seed-averaged (x -> y) per series and source. std::map keeps the order deterministic.
    std::map<SeriesKey, std::map<RateSource, std::map<double, std::pair<double, int>>>> series;
    for (const auto& r : table)
    {
        auto& acc = series[{r.strategy, r.duplex, r.csit}][r.source][r.axis_value];
        acc.first += r.sum_rate;
        acc.second += 1;
    }

    double xmin = table.front().axis_value, xmax = xmin, ymax = 0.0;
    for (const auto& r : table)
    {
        xmin = std::min(xmin, r.axis_value);
        xmax = std::max(xmax, r.axis_value);
        ymax = std::max(ymax, r.sum_rate);
    }
    if (xmax == xmin)
    {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (!(ymax > 0.0))
        ymax = 1.0;
    const double ystep = nice_step(ymax, 6);
    ymax = std::ceil(ymax * 1.05 / ystep) * ystep;

    constexpr double W = 760, H = 500, L = 70, R = 220, T = 40, B = 60;
    const double pw = W - L - R, ph = H - T - B;
    auto X = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return T + ph - y / ymax * ph; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"500\" viewBox=\"0 0 760 500\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"760\" height=\"500\" fill=\"white\"/>\n";
    s += "<text x=\"" + f2(L + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) +
         "</text>\n";

    // Grid and ticks.
    for (double y = 0.0; y <= ymax + 1e-9; y += ystep)
    {
        s += "<line x1=\"" + f2(L) + "\" y1=\"" + f2(Y(y)) + "\" x2=\"" + f2(L + pw) + "\" y2=\"" + f2(Y(y)) +
             "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + f2(L - 6) + "\" y=\"" + f2(Y(y) + 4) + "\" text-anchor=\"end\">" + gfmt(y) +
             "</text>\n";
    }
    const double xstep = nice_step(xmax - xmin, 8);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep)
    {
        s += "<line x1=\"" + f2(X(x)) + "\" y1=\"" + f2(T) + "\" x2=\"" + f2(X(x)) + "\" y2=\"" + f2(T + ph) +
             "\" stroke=\"#eeeeee\"/>\n";
        s += "<text x=\"" + f2(X(x)) + "\" y=\"" + f2(T + ph + 16) + "\" text-anchor=\"middle\">" + gfmt(x) +
             "</text>\n";
    }
    s += "<rect x=\"" + f2(L) + "\" y=\"" + f2(T) + "\" width=\"" + f2(pw) + "\" height=\"" + f2(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + f2(L + pw / 2) + "\" y=\"" + f2(H - 18) + "\" text-anchor=\"middle\">" +
         axis_label(table.front().axis) + "</text>\n";
    s += "<text transform=\"translate(18 " + f2(T + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">Sum-rate (bits/s/Hz)</text>\n";

    int idx = 0;
    for (const auto& [key, by_source] : series)
    {
        const std::string color = kPalette[idx % 8];
        const bool dashed = std::get<1>(key) == DuplexMode::HD;
        const double ly = T + 10 + 18.0 * idx;
        if (auto it = by_source.find(RateSource::DeterministicEquivalent); it != by_source.end())
        {
            std::string pts;
            for (const auto& [x, acc] : it->second)
                pts += (pts.empty() ? "" : " ") + f2(X(x)) + "," + f2(Y(acc.first / acc.second));
            s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\"" +
                 (dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts + "\"/>\n";
        }
        if (auto it = by_source.find(RateSource::MonteCarlo); it != by_source.end())
            for (const auto& [x, acc] : it->second)
                s += "<circle cx=\"" + f2(X(x)) + "\" cy=\"" + f2(Y(acc.first / acc.second)) +
                     "\" r=\"3.5\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.4\"/>\n";

        const double lx = L + pw + 14;
        s += "<line x1=\"" + f2(lx) + "\" y1=\"" + f2(ly) + "\" x2=\"" + f2(lx + 24) + "\" y2=\"" + f2(ly) +
             "\" stroke=\"" + color + "\" stroke-width=\"1.6\"" + (dashed ? " stroke-dasharray=\"6 4\"" : "") +
             "/>\n";
        s += "<circle cx=\"" + f2(lx + 12) + "\" cy=\"" + f2(ly) + "\" r=\"3.5\" fill=\"none\" stroke=\"" + color +
             "\"/>\n";
        s += "<text x=\"" + f2(lx + 30) + "\" y=\"" + f2(ly + 4) + "\">" + series_label(key) + "</text>\n";
        ++idx;
    }
    const double ny = T + 10 + 18.0 * idx + 10;
    s += "<text x=\"" + f2(L + pw + 14) + "\" y=\"" + f2(ny) +
         "\" font-size=\"10\" fill=\"#555555\">lines: DE, markers: MC</text>\n";
    s += "</svg>\n";
    return s;
}

void emit_plot(const ResultTable& table, const std::filesystem::path& path, const std::string& title)
{
    const std::string svg = render_plot(table, title);
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
    os << svg;
    if (!os)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

CompareReport compare_de_mc(const ResultTable& table, double tolerance)
{
    if (!(tolerance >= 0.0))
        throw std::invalid_argument("compare: tolerance must be nonnegative");
    using Key = std::tuple<std::string, double, Strategy, DuplexMode, CsitMode, std::uint64_t>;
    std::map<Key, std::pair<const ResultRow*, const ResultRow*>> pairs;
    for (const auto& r : table)
    {
        auto& slot = pairs[{r.axis, r.axis_value, r.strategy, r.duplex, r.csit, r.seed}];
        auto& dst = r.source == RateSource::MonteCarlo ? slot.first : slot.second;
        if (dst)
            throw std::invalid_argument("compare: duplicate " + std::string(to_string(r.source)) + " row at " +
                                        r.axis + "=" + gfmt(r.axis_value));
        dst = &r;
    }

    CompareReport rep;
    std::vector<double> errs;
    for (const auto& [key, p] : pairs)
    {
        if (!p.first || !p.second)
            throw std::invalid_argument("compare: unpaired row at " + std::get<0>(key) + "=" +
                                        gfmt(std::get<1>(key)) + " seed " + std::to_string(std::get<5>(key)));
        CompareCell c;
        std::tie(c.axis, c.axis_value, c.strategy, c.duplex, c.csit, c.seed) = key;
        c.mc = p.first->sum_rate;
        c.de = p.second->sum_rate;
        if (c.mc == c.de)
            c.rel_error = 0.0;
        else
            c.rel_error = c.mc != 0.0 ? std::abs(c.de - c.mc) / std::abs(c.mc) : INFINITY;
        c.pass = c.rel_error <= tolerance;
        rep.passed = rep.passed && c.pass;
        rep.max_error = std::max(rep.max_error, c.rel_error);
        errs.push_back(c.rel_error);
        rep.cells.push_back(c);
    }
    if (!errs.empty())
    {
        std::sort(errs.begin(), errs.end());
        const auto n = errs.size();
        rep.median_error = n % 2 ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
    }
    return rep;
}

} // namespace rsrelay
