#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace catmin {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct Frame {
  double minx = kInf, miny = kInf, maxx = -kInf, maxy = -kInf;
  void add(const Vec2& p) {
    minx = std::min(minx, p.x());
    miny = std::min(miny, p.y());
    maxx = std::max(maxx, p.x());
    maxy = std::max(maxy, p.y());
  }
  // Maps into a 480 px box with a margin; y points up.
  Vec2 map(const Vec2& p) const {
    const double span = std::max({maxx - minx, maxy - miny, 1e-12});
    const double s = 440.0 / span;
    return {20.0 + (p.x() - minx) * s, 460.0 - (p.y() - miny) * s};
  }
};

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
         "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string polyline(const std::vector<Vec2>& pts, const char* style) {
  std::string s = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + fmt(pts[i].x()) + "," + fmt(pts[i].y());
  return s + "\"/>\n";
}

}  // namespace

std::string svg_parameter_domain(const MappedDisc& m, const GraphInTarget* gamma) {
  Frame f;
  for (const auto& v : m.vertices) f.add(v);
  std::ostringstream os;
  os << header(480, 480);
  for (const auto& t : m.triangles) {
    std::vector<Vec2> pts;
    for (int k = 0; k <= 3; ++k) pts.push_back(f.map(m.vertices[t[k % 3]]));
    os << polyline(pts, "stroke=\"#bbb\" stroke-width=\"0.7\"");
  }
  {
    std::vector<Vec2> pts;
    for (int v : m.boundary_loop) pts.push_back(f.map(m.vertices[v]));
    if (!pts.empty()) pts.push_back(pts.front());
    os << polyline(pts, "stroke=\"black\" stroke-width=\"1.5\"");
  }
  if (gamma) {
    for (const auto& path : gamma->param_paths) {
      std::vector<Vec2> pts;
      for (const auto& p : path) pts.push_back(f.map(p));
      os << polyline(pts, "stroke=\"#c0392b\" stroke-width=\"2\"");
    }
    for (std::size_t i = 0; i < gamma->param.size(); ++i) {
      const Vec2 p = f.map(gamma->param[i]);
      os << "<circle cx=\"" << fmt(p.x()) << "\" cy=\"" << fmt(p.y()) << "\" r=\"3\" fill=\""
         << (gamma->pinned[i] ? "#2c3e50" : "#c0392b") << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_disc_layout(const PolyhedralDisc& w) {
  const int n = static_cast<int>(w.triangles.size());
  const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const int rows = std::max(1, (n + cols - 1) / cols);
  const double cell = 160.0;
  std::ostringstream os;
  os << header(cols * cell, rows * cell);
  for (int t = 0; t < n; ++t) {
    const auto& tri = w.triangles[t];
    Frame f;
    for (const auto& c : tri.corners) f.add(c);
    const double ox = (t % cols) * cell, oy = (t / cols) * cell;
    auto place = [&](const Vec2& p) {
      const Vec2 q = f.map(p) * (cell - 30.0) / 480.0;
      return Vec2(ox + 15.0 + q.x(), oy + 15.0 + q.y());
    };
    std::vector<Vec2> pts;
    for (int k = 0; k <= 3; ++k) pts.push_back(place(tri.corners[k % 3]));
    os << polyline(pts, "stroke=\"#2c3e50\" stroke-width=\"1.2\"");
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = tri.corners[k], b = tri.corners[(k + 1) % 3], c = tri.corners[(k + 2) % 3];
      const Vec2 u = b - a, v = c - a;
      double ang = 0.0;
      if (u.norm() > 0.0 && v.norm() > 0.0) ang = std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
      const Vec2 p = place(a);
      os << "<text x=\"" << fmt(p.x()) << "\" y=\"" << fmt(p.y()) << "\" font-size=\"9\">v" << tri.v[k] << " "
         << fmt(ang * 180.0 / kPi) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace catmin
