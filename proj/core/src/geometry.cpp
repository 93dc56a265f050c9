#include "volthunt/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace volthunt {

namespace {

constexpr double kSeedExtent = 1e3;

Vec2 segment_plane_intersection(const Vec2& a, const Vec2& b,
                                const HalfPlane& h) {
  const double fa = h.a1 * a.x + h.a2 * a.y - h.b;
  const double fb = h.a1 * b.x + h.a2 * b.y - h.b;
  const double t = fa / (fa - fb);
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

std::vector<Vec2> clip(const std::vector<Vec2>& poly, const HalfPlane& h) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % n];
    const bool cur_in = h.contains(cur);
    const bool nxt_in = h.contains(nxt);
    if (cur_in) {
      out.push_back(cur);
      if (!nxt_in) out.push_back(segment_plane_intersection(cur, nxt, h));
    } else if (nxt_in) {
      out.push_back(segment_plane_intersection(cur, nxt, h));
    }
  }
  return out;
}

std::vector<Vec2> dedupe(const std::vector<Vec2>& poly) {
  std::vector<Vec2> out;
  for (const Vec2& v : poly) {
    if (out.empty() || std::abs(v.x - out.back().x) > 1e-12 ||
        std::abs(v.y - out.back().y) > 1e-12) {
      out.push_back(v);
    }
  }
  if (out.size() > 1 && std::abs(out.front().x - out.back().x) <= 1e-12 &&
      std::abs(out.front().y - out.back().y) <= 1e-12) {
    out.pop_back();
  }
  return out;
}

}  // namespace

double ConvexPolygon::area() const {
  if (empty()) return 0.0;
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

double ConvexPolygon::width(int axis) const {
  if (vertices.empty()) return 0.0;
  double lo = axis == 0 ? vertices[0].x : vertices[0].y;
  double hi = lo;
  for (const Vec2& v : vertices) {
    const double c = axis == 0 ? v.x : v.y;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return hi - lo;
}

bool ConvexPolygon::contains(const Vec2& pt, double tol) const {
  if (empty()) return false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % n];
    const double cross = (b.x - a.x) * (pt.y - a.y) - (b.y - a.y) * (pt.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::rectangle(double x0, double y0, double x1,
                                       double y1) {
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) return {};
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

ConvexPolygon intersect_halfplanes(const std::vector<HalfPlane>& hs) {
  if (hs.empty()) {
    throw std::invalid_argument("intersect_halfplanes: empty input");
  }
  std::vector<Vec2> poly = {{-kSeedExtent, -kSeedExtent},
                            {kSeedExtent, -kSeedExtent},
                            {kSeedExtent, kSeedExtent},
                            {-kSeedExtent, kSeedExtent}};
  for (const HalfPlane& h : hs) {
    if (h.a1 == 0.0 && h.a2 == 0.0) {
      throw std::invalid_argument("intersect_halfplanes: zero normal");
    }
    poly = clip(poly, h);
    if (poly.empty()) break;
  }
  ConvexPolygon out{dedupe(poly)};
  if (out.vertices.size() >= 3 && out.area() < 1e-16) {
    // collapse numerically flat results to the degenerate form
    out.vertices.resize(2);
  }
  return out;
}

bool RegionSet::empty() const {
  for (const ConvexPolygon& p : parts) {
    if (!p.empty()) return false;
  }
  return true;
}

double RegionSet::area() const {
  double a = 0.0;
  for (const ConvexPolygon& p : parts) a += p.area();
  return a;
}

bool RegionSet::contains(const Vec2& pt, double tol) const {
  for (const ConvexPolygon& p : parts) {
    if (p.contains(pt, tol)) return true;
  }
  return false;
}

double Rect::distance(const Vec2& pt) const {
  const double dx = std::max({x0 - pt.x, 0.0, pt.x - x1});
  const double dy = std::max({y0 - pt.y, 0.0, pt.y - y1});
  return std::hypot(dx, dy);
}

std::vector<Rect> as_rectangles(const RegionSet& region) {
  std::vector<Rect> rects;
  for (const ConvexPolygon& p : region.parts) {
    if (p.empty()) continue;
    if (p.vertices.size() != 4) {
      throw std::invalid_argument("margin: region part is not a rectangle");
    }
    Rect r{p.vertices[0].x, p.vertices[0].y, p.vertices[0].x, p.vertices[0].y};
    for (const Vec2& v : p.vertices) {
      r.x0 = std::min(r.x0, v.x);
      r.y0 = std::min(r.y0, v.y);
      r.x1 = std::max(r.x1, v.x);
      r.y1 = std::max(r.y1, v.y);
    }
    for (const Vec2& v : p.vertices) {
      const bool on_x = std::abs(v.x - r.x0) < kGeomTol || std::abs(v.x - r.x1) < kGeomTol;
      const bool on_y = std::abs(v.y - r.y0) < kGeomTol || std::abs(v.y - r.y1) < kGeomTol;
      if (!on_x || !on_y) {
        throw std::invalid_argument("margin: region part is not axis-aligned");
      }
    }
    rects.push_back(r);
  }
  return rects;
}

RegionSet margin(const RegionSet& region, double d) {
  if (!(d > 0.0)) {
    throw std::invalid_argument("margin: distance must be positive");
  }
  RegionSet ring;
  for (const Rect& r : as_rectangles(region)) {
    // square-corner export: top/bottom strips span the dilated width
    ring.parts.push_back(
        ConvexPolygon::rectangle(r.x0 - d, r.y1, r.x1 + d, r.y1 + d));
    ring.parts.push_back(
        ConvexPolygon::rectangle(r.x0 - d, r.y0 - d, r.x1 + d, r.y0));
    ring.parts.push_back(ConvexPolygon::rectangle(r.x0 - d, r.y0, r.x0, r.y1));
    ring.parts.push_back(ConvexPolygon::rectangle(r.x1, r.y0, r.x1 + d, r.y1));
  }
  return ring;
}

bool margin_contains(const RegionSet& region, double d, const Vec2& pt) {
  if (!(d > 0.0)) return false;
  bool near = false;
  for (const Rect& r : as_rectangles(region)) {
    const double dist = r.distance(pt);
    if (dist == 0.0) return false;  // inside the set, not in the margin
    if (dist <= d) near = true;
  }
  return near;
}

double margin_ring_area(const Rect& r, double d) {
  const double perimeter = 2.0 * ((r.x1 - r.x0) + (r.y1 - r.y0));
  return perimeter * d + std::numbers::pi * d * d;
}

}  // namespace volthunt
