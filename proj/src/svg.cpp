#include "spoly/svg.hpp"

#include <cstdio>
#include <fstream>

namespace spoly {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return std::string(buf);
}

std::vector<std::pair<double, double>> circle_points(double r, int segments = 128) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(std::size_t(segments) + 1);
  for (int i = 0; i <= segments; ++i) {
    double t = 2.0 * kPi * double(i) / double(segments);
    pts.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return pts;
}

}  // namespace

SvgCanvas::SvgCanvas(double x0, double y0, double x1, double y1, int width_px)
    : x0_(x0), y0_(y0), width_(width_px) {
  if (!(x1 > x0) || !(y1 > y0) || width_px < 16)
    throw DomainError("SvgCanvas: degenerate view box");
  scale_ = double(width_px) / (x1 - x0);
  height_ = int((y1 - y0) * scale_ + 0.5);
}

double SvgCanvas::px(double x) const { return (x - x0_) * scale_; }
double SvgCanvas::py(double y) const { return double(height_) - (y - y0_) * scale_; }

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double stroke_px, bool closed) {
  if (pts.size() < 2) return;
  std::string d = "<path d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0) ? "M" : "L";
    d += fmt("%.2f %.2f ", px(pts[i].first), py(pts[i].second));
  }
  if (closed) d += "Z";
  d += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
       fmt("%.2f", stroke_px) + "\"/>\n";
  elems_.push_back(std::move(d));
}

void SvgCanvas::circle(double x, double y, double radius, const std::string& stroke,
                       const std::string& fill, double stroke_px) {
  elems_.push_back("<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) +
                   "\" r=\"" + fmt("%.2f", radius * scale_) + "\" stroke=\"" + stroke +
                   "\" fill=\"" + fill + "\" stroke-width=\"" + fmt("%.2f", stroke_px) +
                   "\" fill-opacity=\"0.35\"/>\n");
}

void SvgCanvas::dot(double x, double y, double radius_px, const std::string& fill) {
  elems_.push_back("<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) +
                   "\" r=\"" + fmt("%.2f", radius_px) + "\" fill=\"" + fill + "\"/>\n");
}

void SvgCanvas::text(double x, double y, const std::string& s, double size_px) {
  elems_.push_back("<text x=\"" + fmt("%.2f", px(x)) + "\" y=\"" + fmt("%.2f", py(y)) +
                   "\" font-family=\"monospace\" font-size=\"" + fmt("%.1f", size_px) +
                   "\">" + s + "</text>\n");
}

void SvgCanvas::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("SvgCanvas: cannot open " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
     << height_ << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& e : elems_) os << e;
  os << "</svg>\n";
  if (!os) throw IoError("SvgCanvas: write failed for " + path);
}

void save_shadow_svg(const ShadowRecord& rec, const VertexGraph& g, const std::string& path) {
  SvgCanvas canvas(-1.2, -1.2, 1.2, 1.2, 640);
  canvas.polyline(circle_points(1.0), "#bbbbbb", 1.0);

  std::vector<std::pair<double, double>> poly;
  poly.reserve(rec.shadow_vertex_ids.size());
  for (int id : rec.shadow_vertex_ids) poly.push_back(rec.plane.project(g.coords[std::size_t(id)]));
  canvas.polyline(poly, "#1f6fb2", 1.6, /*closed=*/true);
  for (auto [x, y] : poly) canvas.dot(x, y, 2.5, "#1f6fb2");
  for (double a : rec.angles) canvas.dot(1.08 * std::cos(a), 1.08 * std::sin(a), 1.2, "#c05050");
  canvas.text(-1.15, 1.12, "shadow size " + std::to_string(rec.size));
  canvas.save(path);
}

void save_stitched_svg(const StitchedPath& sp, const VertexGraph& g, const PlaneSpan& plane,
                       const std::string& path) {
  if (sp.segment_lengths.size() != 2)
    throw DomainError("save_stitched_svg: expected a two-segment path");
  SvgCanvas canvas(-1.2, -1.2, 1.2, 1.2, 640);
  canvas.polyline(circle_points(1.0), "#bbbbbb", 1.0);

  std::vector<std::pair<double, double>> proj;
  proj.reserve(sp.path.size());
  for (int id : sp.path) proj.push_back(plane.project(g.coords[std::size_t(id)]));
  std::size_t junction = sp.segment_lengths[0];
  std::vector<std::pair<double, double>> seg1(proj.begin(), proj.begin() + long(junction) + 1);
  std::vector<std::pair<double, double>> seg2(proj.begin() + long(junction), proj.end());
  canvas.polyline(seg1, "#c05050", 1.6);
  canvas.polyline(seg2, "#1f6fb2", 1.6);
  for (auto [x, y] : proj) canvas.dot(x, y, 1.8, "#444444");
  canvas.dot(proj.front().first, proj.front().second, 4.0, "#c05050");
  canvas.dot(proj[junction].first, proj[junction].second, 4.0, "#111111");
  canvas.dot(proj.back().first, proj.back().second, 4.0, "#1f6fb2");
  canvas.text(-1.15, 1.12,
              "stitched length " + std::to_string(sp.length) + " = " +
                  std::to_string(sp.segment_lengths[0]) + " + " +
                  std::to_string(sp.segment_lengths[1]));
  canvas.save(path);
}

void save_certificate_svg(const LBCertificate& cert, const CurveSample& curve,
                          const std::string& path) {
  if (cert.net.dim != 3)
    throw DomainError("save_certificate_svg: drawing is defined for dimension 3");
  SvgCanvas canvas(-1.25, -1.25, 1.25, 1.25, 720);
  canvas.polyline(circle_points(1.0), "#dddddd", 1.0);

  for (const VecN& q : cert.net.points) canvas.dot(q[0], q[1], 1.5, "#c8c8c8");

  std::vector<std::pair<double, double>> trace;
  trace.reserve(401);
  for (int i = 0; i <= 400; ++i) {
    VecN x = curve.eval(double(i) / 400.0);
    trace.emplace_back(x[0], x[1]);
  }
  canvas.polyline(trace, "#555555", 1.2);

  for (std::size_t i = 0; i < cert.sequence.size(); ++i) {
    const VecN& x = cert.sequence[i].second;
    bool occ = cert.occupied[i];
    canvas.circle(x[0], x[1], cert.epsilon / 2.0, occ ? "#2d8a4e" : "#c05050",
                  occ ? "#2d8a4e" : "none", 1.2);
    canvas.dot(x[0], x[1], 3.0, "#111111");
  }
  canvas.text(-1.2, 1.17,
              "k " + std::to_string(cert.k) + "  pairs " + std::to_string(cert.pair_count) +
                  "  lb " + std::to_string(cert.certified_lb) + "  dist " +
                  std::to_string(cert.exact_distance));
  canvas.save(path);
}

}  // namespace spoly
