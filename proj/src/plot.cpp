#include "bounce/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bounce {

namespace {

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Canvas {
  double width = 880, height = 460;
  double ml = 64, mr = 20, mt = 34, mb = 42;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  std::ostringstream body;

  double px(double x) const { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); }
  double py(double y) const { return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb); }

  void set_range(double xa, double xb, double ya, double yb) {
    x0 = xa;
    x1 = xb;
    if (ya == yb) {
      ya -= 1;
      yb += 1;
    }
    const double pad = (yb - ya) * 0.08;
    y0 = ya - pad;
    y1 = yb + pad;
  }

  void line(double xa, double ya, double xb, double yb, const char* stroke,
            const char* extra = "") {
    body << "<line x1=\"" << fmt(xa) << "\" y1=\"" << fmt(ya) << "\" x2=\"" << fmt(xb)
         << "\" y2=\"" << fmt(yb) << "\" stroke=\"" << stroke << "\" " << extra << "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke) {
    body << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) body << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    body << "\"/>\n";
  }

  void dot(double x, double y, const char* fill, double r = 3) {
    body << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"" << fmt(r)
         << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double xpix, double ypix, const std::string& s, const char* anchor = "middle",
            int size = 12) {
    body << "<text x=\"" << fmt(xpix) << "\" y=\"" << fmt(ypix) << "\" font-size=\"" << size
         << "\" font-family=\"monospace\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }

  void hguide(double y, const char* stroke, const char* dash) {
    std::string extra = std::string("stroke-width=\"1\" stroke-dasharray=\"") + dash + "\"";
    line(px(x0), py(y), px(x1), py(y), stroke, extra.c_str());
  }

  void axes(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    line(px(x0), py(y0), px(x1), py(y0), "#222", "stroke-width=\"1\"");
    line(px(x0), py(y0), px(x0), py(y1), "#222", "stroke-width=\"1\"");
    for (int i = 0; i <= 4; ++i) {
      const double x = x0 + (x1 - x0) * i / 4;
      const double y = y0 + (y1 - y0) * i / 4;
      line(px(x), py(y0), px(x), py(y0) + 4, "#222", "stroke-width=\"1\"");
      text(px(x), py(y0) + 18, fmt(x));
      line(px(x0) - 4, py(y), px(x0), py(y), "#222", "stroke-width=\"1\"");
      text(px(x0) - 8, py(y) + 4, fmt(y), "end");
    }
    text(width / 2, 20, title, "middle", 14);
    text(width / 2, height - 8, xlabel);
    text(14, py((y0 + y1) / 2), ylabel, "middle");
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body.str() << "</svg>\n";
    if (!out) throw Error("failed to write " + path);
  }
};

}  // namespace

void plot_zeta(const PlateProfile& profile, const std::string& path) {
  Canvas c;
  const double delta = profile.delta.approx();
  double lo = -delta, hi = delta;
  std::vector<std::pair<double, double>> pts;
  for (const ZetaNode& n : profile.zeta_nodes) {
    pts.emplace_back(n.tau.approx(), n.value.approx());
    lo = std::min(lo, pts.back().second);
    hi = std::max(hi, pts.back().second);
  }
  c.set_range(0, 1, lo, hi);
  c.hguide(0, "#999", "2,3");
  c.hguide(delta, "#b44", "4,3");
  c.hguide(-delta, "#b44", "4,3");
  c.polyline(pts, "#1f77b4");
  for (const auto& [x, y] : pts) c.dot(x, y, "#1f77b4");
  for (const Breakpoint& bp : profile.breakpoints)
    c.dot(bp.tau.approx(), bp.target.approx(), "#d62728", 3.5);
  c.axes("plate velocity profile (nodes marked, breakpoints in red)", "t mod 1", "zeta");
  c.save(path);
}

void plot_height(const PlateProfile& profile, const std::string& path) {
  Canvas c;
  std::vector<std::pair<double, double>> pts;
  double lo = 0, hi = 0;
  for (const QuadraticPiece& piece : profile.f_pieces) {
    const double a = piece.a.approx(), b = piece.b.approx(), k = piece.c.approx();
    const double u = piece.lo.approx(), w = piece.hi.approx();
    for (int i = 0; i <= 16; ++i) {
      const double t = u + (w - u) * i / 16;
      const double y = (a * t + b) * t + k;
      pts.emplace_back(t, y);
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  c.set_range(0, 1, lo, hi);
  c.hguide(0, "#999", "2,3");
  c.polyline(pts, "#2ca02c");
  for (const Breakpoint& bp : profile.breakpoints) c.dot(bp.tau.approx(), 0, "#d62728", 3.5);
  c.axes("plate motion f (breakpoints at height zero)", "t mod 1", "f");
  c.save(path);
}

void plot_velocity(const Trajectory& traj, const std::string& path) {
  Canvas c;
  std::vector<std::pair<double, double>> pts;
  double lo = 0, hi = 0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const double v = traj.states[n].v.approx();
    pts.emplace_back(static_cast<double>(n), v);
    lo = n == 0 ? v : std::min(lo, v);
    hi = n == 0 ? v : std::max(hi, v);
  }
  c.set_range(0, pts.empty() ? 1 : pts.back().first + 1, lo, hi);
  c.polyline(pts, "#1f77b4");
  for (const auto& [x, y] : pts) c.dot(x, y, "#1f77b4", 2.2);
  c.axes("post-impact velocity by bounce (escape staircase)", "bounce index n", "v");
  c.save(path);
}

void plot_torus(const Trajectory& traj, const std::string& path) {
  Canvas c;
  const double half_g = traj.g.approx() / 2;
  c.set_range(0, 1, 0, half_g);
  std::vector<std::pair<double, double>> pts;
  for (const PhaseState& s : traj.states)
    pts.emplace_back(frac(s.t).approx(), mod(s.v, traj.g / 2).approx());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    c.line(c.px(pts[i].first), c.py(pts[i].second), c.px(pts[i + 1].first),
           c.py(pts[i + 1].second), "#bbb", "stroke-width=\"0.6\"");
  for (const auto& [x, y] : pts) c.dot(x, y, "#9467bd", 3);
  c.axes("orbit on the torus (t mod 1, v mod g/2)", "t mod 1", "v mod g/2");
  c.save(path);
}

}  // namespace bounce
