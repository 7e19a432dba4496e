#include "scirank/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scirank::svg {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kMarginLeft = 70, kMarginRight = 40, kMarginTop = 60, kMarginBottom = 60;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return io::fixed(v, 2); }

std::string percent(double share) { return io::fixed(100.0 * share, 1) + "%"; }

struct Frame {
    double xmin, xmax, ymin, ymax;

    double px(double x) const {
        return kMarginLeft + (x - xmin) / (xmax - xmin) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom - (y - ymin) / (ymax - ymin) * (kHeight - kMarginTop - kMarginBottom);
    }
};

}  // namespace

std::string ca_plane(const io::CaReport& rep) {
    const auto& t = *rep.table;
    const auto& m = *rep.model;
    const Eigen::Index a = rep.axis_a, b = rep.axis_b;
    const double plane = plane_inertia(m, a, b);

    // Bounds always include the origin; pad by 10% so labels stay inside.
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    auto extend = [&](const MatrixX<double>& c) {
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            xmin = std::min(xmin, c(i, a));
            xmax = std::max(xmax, c(i, a));
            ymin = std::min(ymin, c(i, b));
            ymax = std::max(ymax, c(i, b));
        }
    };
    extend(m.row_coords);
    extend(m.col_coords);
    extend(rep.supplementary_row_coords);
    extend(rep.supplementary_col_coords);
    const double padx = std::max(1e-6, 0.1 * (xmax - xmin)), pady = std::max(1e-6, 0.1 * (ymax - ymin));
    const Frame f{xmin - padx, xmax + padx, ymin - pady, ymax + pady};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\" data-plane-inertia=\""
       << io::fixed(plane, 4) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << "Correspondence analysis, plane inertia " << percent(plane) << "</text>\n";

    // Axes through the origin.
    os << "<g stroke=\"#999999\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << num(f.px(f.xmin)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << num(f.px(f.xmax))
       << "\" y2=\"" << num(f.py(0)) << "\"/>\n";
    os << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(f.ymin)) << "\" x2=\"" << num(f.px(0))
       << "\" y2=\"" << num(f.py(f.ymax)) << "\"/>\n";
    os << "</g>\n";
    os << "<text x=\"" << num(kWidth - kMarginRight) << "\" y=\"" << num(kHeight - 20)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">Axis " << a + 1 << " ("
       << percent(m.inertia_shares(a)) << ")</text>\n";
    os << "<text x=\"20\" y=\"" << num(kMarginTop - 10) << "\" font-family=\"sans-serif\" font-size=\"13\">Axis " << b + 1
       << " (" << percent(m.inertia_shares(b)) << ")</text>\n";

    auto points = [&](const char* cls, const std::vector<std::string>& ids, const MatrixX<double>& c, bool square,
                      bool supplementary, const char* colour) {
        os << "<g class=\"" << cls << "\">\n";
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            const double x = f.px(c(i, a)), y = f.py(c(i, b));
            const std::string fill = supplementary ? "none" : colour;
            if (square)
                os << "<rect x=\"" << num(x - 4) << "\" y=\"" << num(y - 4)
                   << "\" width=\"8\" height=\"8\" fill=\"" << fill << "\" stroke=\"" << colour << "\"/>\n";
            else
                os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\"" << fill
                   << "\" stroke=\"" << colour << "\"/>\n";
            os << "<text x=\"" << num(x + 6) << "\" y=\"" << num(y - 6) << "\" font-family=\"sans-serif\" font-size=\"12\""
               << (supplementary ? " font-style=\"italic\"" : "") << " fill=\"" << colour << "\">" << escape(ids[i])
               << "</text>\n";
        }
        os << "</g>\n";
    };
    points("rows", t.row_ids, m.row_coords, false, false, "#1f4e9c");
    points("columns", t.col_ids, m.col_coords, true, false, "#b22222");
    points("supplementary-rows", t.supplementary_row_ids, rep.supplementary_row_coords, false, true, "#555555");
    points("supplementary-columns", t.supplementary_col_ids, rep.supplementary_col_coords, true, true, "#555555");
    os << "</svg>\n";
    return os.str();
}

}  // namespace scirank::svg
