#include "sirf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "sirf/errors.hpp"
#include "sirf/format.hpp"
#include "sirf/model_spec.hpp"

namespace sirf {

namespace {

// Pixel coordinates are emitted with two decimals: plenty for a 640x480
// canvas and immune to locale or platform noise.
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Tick labels use %g so 0.30000000000000004 prints as 0.3.
std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

constexpr const char* kPalette[10] = {
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
    "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd"};

struct Canvas {
    double w = 640.0, h = 480.0;
    double ml = 64.0, mr = 18.0, mt = 26.0, mb = 48.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double X(double x) const { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); }
    double Y(double y) const { return h - mb - (y - y0) / (y1 - y0) * (h - mb - mt); }
};

void open_svg(std::ostringstream& s, const Canvas& c) {
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(c.w)
      << "\" height=\"" << px(c.h) << "\" viewBox=\"0 0 " << px(c.w) << " "
      << px(c.h) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

// Round the tick step to 1, 2 or 5 times a power of ten.
double nice_step(double range) {
    double raw = range / 4.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double frac = raw / mag;
    double step = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
    return step * mag;
}

void axes(std::ostringstream& s, const Canvas& c, const std::string& xlabel,
          const std::string& ylabel, const std::string& title) {
    s << "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n"
      << "<path d=\"M" << px(c.X(c.x0)) << " " << px(c.Y(c.y1)) << " L"
      << px(c.X(c.x0)) << " " << px(c.Y(c.y0)) << " L" << px(c.X(c.x1)) << " "
      << px(c.Y(c.y0)) << "\"/>\n</g>\n";

    s << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    double sx = nice_step(c.x1 - c.x0);
    for (double v = std::ceil(c.x0 / sx) * sx; v <= c.x1 + 1e-12 * sx; v += sx) {
        s << "<line x1=\"" << px(c.X(v)) << "\" y1=\"" << px(c.Y(c.y0))
          << "\" x2=\"" << px(c.X(v)) << "\" y2=\"" << px(c.Y(c.y0) + 4)
          << "\" stroke=\"#333333\"/>\n";
        s << "<text x=\"" << px(c.X(v)) << "\" y=\"" << px(c.Y(c.y0) + 18)
          << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
    }
    double sy = nice_step(c.y1 - c.y0);
    for (double v = std::ceil(c.y0 / sy) * sy; v <= c.y1 + 1e-12 * sy; v += sy) {
        s << "<line x1=\"" << px(c.X(c.x0)) << "\" y1=\"" << px(c.Y(v))
          << "\" x2=\"" << px(c.X(c.x0) - 4) << "\" y2=\"" << px(c.Y(v))
          << "\" stroke=\"#333333\"/>\n";
        s << "<text x=\"" << px(c.X(c.x0) - 8) << "\" y=\"" << px(c.Y(v) + 4)
          << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    s << "<text x=\"" << px((c.X(c.x0) + c.X(c.x1)) / 2) << "\" y=\""
      << px(c.h - 10) << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    s << "<text x=\"16\" y=\"" << px((c.Y(c.y0) + c.Y(c.y1)) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px((c.Y(c.y0) + c.Y(c.y1)) / 2) << ")\">" << ylabel << "</text>\n";
    s << "<text x=\"" << px((c.X(c.x0) + c.X(c.x1)) / 2) << "\" y=\"16\" "
      << "text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
    s << "</g>\n";
}

void polyline(std::ostringstream& s, const std::vector<std::pair<double, double>>& pts,
              const Canvas& c, const char* color, bool dashed) {
    if (pts.size() < 2) return;
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) s << " stroke-dasharray=\"6 4\"";
    s << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s << ' ';
        s << px(c.X(pts[i].first)) << ',' << px(c.Y(pts[i].second));
    }
    s << "\"/>\n";
}

void marker(std::ostringstream& s, const Canvas& c, double x, double y,
            const std::string& classification) {
    double cx = c.X(x), cy = c.Y(y);
    if (classification == "stable") {
        s << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy)
          << "\" r=\"5\" fill=\"#2d6a4f\" stroke=\"#ffffff\"/>\n";
    } else if (classification == "saddle") {
        s << "<path d=\"M" << px(cx) << " " << px(cy - 6) << " L" << px(cx + 6)
          << " " << px(cy) << " L" << px(cx) << " " << px(cy + 6) << " L"
          << px(cx - 6) << " " << px(cy)
          << " Z\" fill=\"#c44e52\" stroke=\"#ffffff\"/>\n";
    } else {
        s << "<rect x=\"" << px(cx - 4.5) << "\" y=\"" << px(cy - 4.5)
          << "\" width=\"9\" height=\"9\" fill=\"#8c8c8c\" stroke=\"#ffffff\"/>\n";
    }
}

std::string describe_f(const nlohmann::ordered_json& fobj) {
    std::string kind = fobj.value("kind", "?");
    if (kind == "expr") return "f = " + fobj.value("text", "?");
    if (kind == "constant") {
        return "f = " + format_double(fobj.value("beta_tilde", 0.0));
    }
    if (kind == "example1") {
        std::string out = "example1(n = " +
                          format_double(fobj.value("n", 0.0)) + ", f0 = " +
                          format_double(fobj.value("f0", 0.0)) + ")";
        return out;
    }
    if (kind == "example2") return "example2";
    return kind;
}

} // namespace

std::string plot_report_svg(const nlohmann::ordered_json& report) {
    if (!report.is_object() || !report.contains("model") ||
        !report.contains("equilibria")) {
        throw SpecError("report is missing \"model\" or \"equilibria\"");
    }
    LoadedModel lm = load_model_json(report.at("model"));
    const Model& m = lm.model;

    const int samples = 512;
    std::vector<std::pair<double, double>> f_pts;
    f_pts.reserve(samples + 1);
    double f_max = 0.0, f_min = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double r = static_cast<double>(i) / samples;
        double v = m.f().value(r, m.k());
        f_pts.emplace_back(r, v);
        f_max = std::max(f_max, v);
        f_min = std::min(f_min, v);
    }

    Canvas c;
    c.x0 = 0.0;
    c.x1 = 1.0;
    c.y1 = std::max(f_max, m.k()) * 1.15;
    c.y0 = std::min(0.0, f_min * 1.15);

    // g is monotone increasing on [0, pole); draw it until it leaves the
    // frame through the top.
    std::vector<std::pair<double, double>> g_pts;
    for (int i = 0; i <= samples; ++i) {
        double r = m.pole() * (1.0 - 1e-9) * static_cast<double>(i) / samples;
        double v = g_threshold(r, m.k());
        if (v > c.y1) break;
        g_pts.emplace_back(r, v);
    }

    std::ostringstream s;
    open_svg(s, c);
    axes(s, c, "R", "rate", "f vs g, k = " + format_double(m.k()) + ", " +
                                describe_f(report.at("model").at("f")));
    polyline(s, g_pts, c, "#1f3a5f", false);
    polyline(s, f_pts, c, "#dd8452", true);

    const auto& eq = report.at("equilibria");
    if (eq.contains("endemic")) {
        for (const auto& e : eq.at("endemic")) {
            marker(s, c, e.value("R", 0.0), e.value("f_value", 0.0),
                   e.value("classification", ""));
        }
    }

    // legend
    double lx = c.X(c.x0) + 12, ly = c.Y(c.y1) + 8;
    s << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n"
      << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly + 4) << "\" x2=\""
      << px(lx + 28) << "\" y2=\"" << px(ly + 4)
      << "\" stroke=\"#1f3a5f\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << px(lx + 34) << "\" y=\"" << px(ly + 8)
      << "\">g (solid)</text>\n"
      << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly + 22) << "\" x2=\""
      << px(lx + 28) << "\" y2=\"" << px(ly + 22)
      << "\" stroke=\"#dd8452\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n"
      << "<text x=\"" << px(lx + 34) << "\" y=\"" << px(ly + 26)
      << "\">f (dashed)</text>\n"
      << "<text x=\"" << px(lx + 34) << "\" y=\"" << px(ly + 44)
      << "\">circle = stable, diamond = saddle</text>\n</g>\n";

    s << "</svg>\n";
    return s.str();
}

std::string plot_trajectories_svg(const std::vector<Trajectory<State2>>& trajs) {
    Canvas c; // phase plane [0,1] x [0,1]

    std::ostringstream s;
    open_svg(s, c);
    axes(s, c, "R", "I", "phase plane");

    // simplex edge I + R = 1
    s << "<line x1=\"" << px(c.X(0.0)) << "\" y1=\"" << px(c.Y(1.0)) << "\" x2=\""
      << px(c.X(1.0)) << "\" y2=\"" << px(c.Y(0.0))
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"3 3\"/>\n";

    for (std::size_t t = 0; t < trajs.size(); ++t) {
        const char* color = kPalette[t % 10];
        std::vector<std::pair<double, double>> pts;
        pts.reserve(trajs[t].states.size());
        for (const State2& st : trajs[t].states) pts.emplace_back(st.R, st.I);
        polyline(s, pts, c, color, false);
        if (!pts.empty()) {
            s << "<circle cx=\"" << px(c.X(pts.front().first)) << "\" cy=\""
              << px(c.Y(pts.front().second)) << "\" r=\"4\" fill=\"" << color
              << "\"/>\n";
        }
    }
    s << "</svg>\n";
    return s.str();
}

std::string plot_basin_svg(const BasinMap& map) {
    if (map.n < 2) throw SpecError("basin map needs at least a 2x2 lattice");
    Canvas c;

    std::ostringstream s;
    open_svg(s, c);

    double cell_w = (c.X(1.0) - c.X(0.0)) / (map.n - 1);
    double cell_h = (c.Y(0.0) - c.Y(1.0)) / (map.n - 1);
    std::vector<int> seen_ids;
    s << "<g stroke=\"none\">\n";
    for (const BasinCell& cell : map.cells) {
        const char* color = cell.outcome < 0
                                ? "#e0e0e0"
                                : kPalette[static_cast<std::size_t>(cell.outcome) % 10];
        if (std::find(seen_ids.begin(), seen_ids.end(), cell.outcome) ==
            seen_ids.end()) {
            seen_ids.push_back(cell.outcome);
        }
        s << "<rect x=\"" << px(c.X(cell.R0) - cell_w / 2) << "\" y=\""
          << px(c.Y(cell.I0) - cell_h / 2) << "\" width=\"" << px(cell_w)
          << "\" height=\"" << px(cell_h) << "\" fill=\"" << color << "\"/>\n";
    }
    s << "</g>\n";
    axes(s, c, "R0", "I0", "basins of attraction");

    std::sort(seen_ids.begin(), seen_ids.end());
    double lx = c.X(1.0) - 150, ly = c.Y(1.0) + 8;
    s << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (std::size_t i = 0; i < seen_ids.size(); ++i) {
        int id = seen_ids[i];
        const char* color =
            id < 0 ? "#e0e0e0" : kPalette[static_cast<std::size_t>(id) % 10];
        double y = ly + 18.0 * static_cast<double>(i);
        s << "<rect x=\"" << px(lx) << "\" y=\"" << px(y) << "\" width=\"12\" "
          << "height=\"12\" fill=\"" << color << "\"/>\n"
          << "<text x=\"" << px(lx + 18) << "\" y=\"" << px(y + 10) << "\">"
          << (id < 0 ? std::string("unresolved")
                     : id == 0 ? std::string("disease-free (id 0)")
                               : "equilibrium id " + std::to_string(id))
          << "</text>\n";
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& text, int line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SpecError("CSV line " + std::to_string(line_no) +
                        ": not a number: \"" + text + "\"");
    }
}

} // namespace

Trajectory<State2> read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SpecError("empty trajectory CSV");
    auto header = split_csv_line(line);
    bool three_d = header.size() == 4;
    if (!(header.size() == 3 || three_d) || header[0] != "tau") {
        throw SpecError("trajectory CSV must start with 'tau,I,R' or 'tau,S,I,R'");
    }
    Trajectory<State2> traj;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw SpecError("CSV line " + std::to_string(line_no) +
                            ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        traj.times.push_back(parse_field(fields[0], line_no));
        if (three_d) {
            traj.states.push_back(
                {parse_field(fields[2], line_no), parse_field(fields[3], line_no)});
        } else {
            traj.states.push_back(
                {parse_field(fields[1], line_no), parse_field(fields[2], line_no)});
        }
    }
    return traj;
}

BasinMap read_basin_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SpecError("empty basin CSV");
    if (split_csv_line(line) != std::vector<std::string>{"I0", "R0", "outcome_id"}) {
        throw SpecError("basin CSV must start with 'I0,R0,outcome_id'");
    }
    BasinMap map;
    int line_no = 1;
    std::vector<double> distinct;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw SpecError("CSV line " + std::to_string(line_no) +
                            ": expected 3 fields");
        }
        BasinCell cell;
        cell.I0 = parse_field(fields[0], line_no);
        cell.R0 = parse_field(fields[1], line_no);
        cell.outcome = static_cast<int>(parse_field(fields[2], line_no));
        map.cells.push_back(cell);
        if (std::find(distinct.begin(), distinct.end(), cell.R0) == distinct.end()) {
            distinct.push_back(cell.R0);
        }
    }
    map.n = static_cast<int>(distinct.size());
    if (map.n < 2) throw SpecError("basin CSV holds fewer than two lattice columns");
    return map;
}

} // namespace sirf
