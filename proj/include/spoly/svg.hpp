#pragma once
// Minimal standalone SVG writer plus the figure exporters used by the
// experiment driver: shadow polygons, stitched walks and lower-bound
// certificates, all drawn as 2D projections.

#include <string>
#include <utility>
#include <vector>

#include "spoly/common.hpp"
#include "spoly/lower_bound.hpp"
#include "spoly/shadow.hpp"

namespace spoly {

// Collects shapes in logical coordinates and serializes them to a file. The
// logical box [x0,x1] x [y0,y1] maps onto a pixel canvas of the requested
// width (height follows from the aspect ratio) with the y axis flipped so
// mathematical "up" renders up.
class SvgCanvas {
 public:
  SvgCanvas(double x0, double y0, double x1, double y1, int width_px);

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double stroke_px, bool closed = false);
  // radius in logical units (isotropic scale); pass fill "none" for outlines.
  void circle(double x, double y, double radius, const std::string& stroke,
              const std::string& fill, double stroke_px = 1.0);
  // radius in pixels, for markers that should not scale with the view box.
  void dot(double x, double y, double radius_px, const std::string& fill);
  void text(double x, double y, const std::string& s, double size_px = 12.0);

  void save(const std::string& path) const;  // IoError on failure

 private:
  double px(double x) const;
  double py(double y) const;

  double x0_, y0_, scale_;
  int width_, height_;
  std::vector<std::string> elems_;
};

// Shadow polygon of `rec` drawn inside the projected unit circle, vertices in
// angle order with their arc midpoints marked.
void save_shadow_svg(const ShadowRecord& rec, const VertexGraph& g, const std::string& path);

// Stitched walk projected onto `plane`: first segment in one color, sweep
// segment in another, junction and endpoints marked.
void save_stitched_svg(const StitchedPath& sp, const VertexGraph& g, const PlaneSpan& plane,
                       const std::string& path);

// n = 3 certificate figure (DomainError otherwise): boundary curve, net
// points, the extracted subsequence and its eps/2 caps (filled when
// occupied), projected by dropping the last coordinate.
void save_certificate_svg(const LBCertificate& cert, const CurveSample& curve,
                          const std::string& path);

}  // namespace spoly
