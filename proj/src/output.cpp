// Copyright 2026 The bellherald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellherald/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <system_error>

#include "bellherald/entangle.hpp"
#include "bellherald/errors.hpp"

namespace bellherald {

namespace fs = std::filesystem;

std::string format_float(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

template <typename... Ts>
void row(std::ofstream& out, double first, Ts... rest) {
    out << format_float(first);
    ((out << ',' << format_float(static_cast<double>(rest))), ...);
    out << '\n';
}

}  // namespace

void write_trajectory_csv(const TrajectoryRecord& record, const fs::path& path) {
    auto out = open_for_write(path);
    out << "t,norm,pop_ee,pop_plus_i,pop_minus_i,pop_gg,entanglement,jump_left,jump_right,dxi\n";
    for (const auto& s : record.samples)
        row(out, s.t, s.norm, s.pops.ee, s.pops.plus_i, s.pops.minus_i, s.pops.gg, s.entanglement, s.jumps_left,
            s.jumps_right, s.dxi);
    finish(out, path);
}

void write_stats_csv(const EnsembleStats& stats, const fs::path& path) {
    auto out = open_for_write(path);
    out << "t,mean_pop_ee,se_pop_ee,mean_pop_plus_i,se_pop_plus_i,mean_pop_minus_i,se_pop_minus_i,"
           "mean_pop_gg,se_pop_gg,mean_entanglement,se_entanglement\n";
    for (std::size_t k = 0; k < stats.t.size(); ++k) {
        const auto& m = stats.mean_pops[k];
        const auto& s = stats.se_pops[k];
        row(out, stats.t[k], m[0], s[0], m[1], s[1], m[2], s[2], m[3], s[3], stats.mean_entanglement[k],
            stats.se_entanglement[k]);
    }
    finish(out, path);
}

void write_me_csv(const MeSolution& solution, const fs::path& path) {
    auto out = open_for_write(path);
    out << "t,pop_ee,pop_plus_i,pop_minus_i,pop_gg,concurrence\n";
    for (std::size_t k = 0; k < solution.t.size(); ++k) {
        const auto p = populations(solution.states[k]);
        row(out, solution.t[k], p.ee, p.plus_i, p.minus_i, p.gg, concurrence(solution.states[k]));
    }
    finish(out, path);
}

void write_g2_csv(const G2Curve& curve, const fs::path& path) {
    auto out = open_for_write(path);
    out << "tau,g2\n";
    for (std::size_t k = 0; k < curve.tau.size(); ++k) row(out, curve.tau[k], curve.values[k]);
    finish(out, path);
}

void write_steady_csv(const DensityOp& rho, const fs::path& path) {
    auto out = open_for_write(path);
    out << "row,col,re,im\n";
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const cplx z = rho.mat()(r, c);
            out << r << ',' << c << ',' << format_float(z.real()) << ',' << format_float(z.imag()) << '\n';
        }
    finish(out, path);
}

void write_svg_chart(const fs::path& path, std::string_view title, const std::vector<double>& x,
                     const std::vector<SvgSeries>& series) {
    constexpr double W = 800, H = 480, L = 60, R = 120, T = 40, B = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    double x0 = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
    double x1 = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
    double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
    for (const auto& s : series)
        for (double v : s.values)
            if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    if (!(x1 > x0)) x1 = x0 + 1.0;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

    auto out = open_for_write(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title
        << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << format_float(x0) << "</text>\n";
    out << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_float(x1) << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_float(y0) << "</text>\n";
    out << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_float(y1) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % std::size(colors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        const std::size_t n = std::min(x.size(), series[i].values.size());
        for (std::size_t k = 0; k < n; ++k)
            if (std::isfinite(series[i].values[k]))
                out << format_float(px(x[k])) << ',' << format_float(py(series[i].values[k])) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (i + 1) << "\" font-size=\"12\" fill=\"" << color
            << "\">" << series[i].name << "</text>\n";
    }
    out << "</svg>\n";
    finish(out, path);
}

}  // namespace bellherald
