#include "hive/plot.hpp"
#include "hive/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hive {

namespace {

constexpr double kWidth = 720, kHeight = 440, kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string esc(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void header(std::ostream& out, const std::string& title)
{
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title) << "</text>\n";
}

void axes(std::ostream& out, double x0, double x1, double y0, double y1, const std::string& xl, const std::string& yl)
{
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = kLeft + pw * i / 5.0, fy = kTop + ph - ph * i / 5.0;
        out << "<text x=\"" << num(fx) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
            << tick(x0 + (x1 - x0) * i / 5.0) << "</text>\n";
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(fy + 4) << "\" text-anchor=\"end\">"
            << tick(y0 + (y1 - y0) * i / 5.0) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
        << esc(xl) << "</text>\n";
    out << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(kTop + ph / 2) << ")\">" << esc(yl) << "</text>\n";
}

} // namespace

void write_line_plot_svg(std::ostream& out, const std::string& title, const std::string& xl, const std::string& yl,
                         const std::vector<Series>& series)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    header(out, title);
    axes(out, x0, x1, y0, y1, xl, yl);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(s.y[i])) continue;
            out << num(kLeft + pw * (s.x[i] - x0) / (x1 - x0)) << ',' << num(kTop + ph - ph * (s.y[i] - y0) / (y1 - y0))
                << ' ';
        }
        out << "\"/>\n";
        const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kWidth - kRight + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight + 38) << "\" y=\"" << num(ly + 4) << "\">" << esc(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_regime_svg(std::ostream& out, const RegimeGrid& g)
{
    const int n1 = g.axis1.resolution, n2 = g.axis2.resolution;
    header(out, "Regime diagram");
    const double step1 = n1 > 1 ? (g.axis1.hi - g.axis1.lo) / (n1 - 1) : 1.0;
    const double step2 = n2 > 1 ? (g.axis2.hi - g.axis2.lo) / (n2 - 1) : 1.0;
    const double x0 = g.axis1.lo - step1 / 2, x1 = g.axis1.hi + step1 / 2;
    const double y0 = g.axis2.lo - step2 / 2, y1 = g.axis2.hi + step2 / 2;
    axes(out, x0, x1, y0, y1, g.axis1.param.to_string(), g.axis2.param.to_string());
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = pw / n1, ch = ph / n2;
    auto color = [](Regime r) {
        switch (r) {
        case Regime::unique_stable: return "#b7e4b0";
        case Regime::multiple_stable: return "#fbe79a";
        case Regime::cycles: return "#f8c291";
        case Regime::instability: return "#f5a3a3";
        }
        return "#ffffff";
    };
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i2 = 0; i2 < n2; ++i2) {
            out << "<rect x=\"" << num(kLeft + cw * i1) << "\" y=\"" << num(kTop + ph - ch * (i2 + 1)) << "\" width=\""
                << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"" << color(g.at(i1, i2).classification)
                << "\" stroke=\"white\"/>\n";
        }
    }
    const Regime legend[] = {Regime::unique_stable, Regime::multiple_stable, Regime::cycles, Regime::instability};
    for (int k = 0; k < 4; ++k) {
        const double ly = kTop + 8 + 20.0 * k;
        out << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(ly) << "\" width=\"14\" height=\"14\" fill=\""
            << color(legend[k]) << "\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight + 32) << "\" y=\"" << num(ly + 11) << "\">" << to_string(legend[k])
            << "</text>\n";
    }
    if (g.frontier.axis1) {
        const double fx = kLeft + pw * (*g.frontier.axis1 - x0) / (x1 - x0);
        out << "<line x1=\"" << num(fx) << "\" y1=\"" << kTop << "\" x2=\"" << num(fx) << "\" y2=\"" << kTop + ph
            << "\" stroke=\"#1a3d8f\" stroke-dasharray=\"6,4\" stroke-width=\"2\"/>\n";
    }
    if (g.frontier.axis2) {
        const double fy = kTop + ph - ph * (*g.frontier.axis2 - y0) / (y1 - y0);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << num(fy) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << num(fy)
            << "\" stroke=\"#1a3d8f\" stroke-dasharray=\"6,4\" stroke-width=\"2\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace hive
