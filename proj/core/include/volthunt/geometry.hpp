#pragma once

#include <vector>

#include "volthunt/params.hpp"

namespace volthunt {

constexpr double kGeomTol = 1e-9;  ///< halfplane incidence tolerance (p.u.)

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Affine form a1*v1 + a2*v2 + c, the building block for every region
/// boundary in this problem (all conditions are affine in the voltages).
struct Affine {
  double a1 = 0.0;
  double a2 = 0.0;
  double c = 0.0;

  double eval(const VoltagePair& v) const { return a1 * v.v1 + a2 * v.v2 + c; }

  Affine operator+(const Affine& o) const { return {a1 + o.a1, a2 + o.a2, c + o.c}; }
  Affine operator-(const Affine& o) const { return {a1 - o.a1, a2 - o.a2, c - o.c}; }
  Affine operator*(double s) const { return {a1 * s, a2 * s, c * s}; }
  Affine operator+(double s) const { return {a1, a2, c + s}; }
  Affine operator-(double s) const { return {a1, a2, c - s}; }

  static Affine v1() { return {1.0, 0.0, 0.0}; }
  static Affine v2() { return {0.0, 1.0, 0.0}; }
  static Affine constant(double s) { return {0.0, 0.0, s}; }
};

/// Halfplane a1*v1 + a2*v2 <= b. (a1, a2) must be nonzero.
struct HalfPlane {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;

  /// The halfplane {f <= 0}.
  static HalfPlane from_affine(const Affine& f) { return {f.a1, f.a2, -f.c}; }

  bool contains(const Vec2& pt, double tol = kGeomTol) const {
    return a1 * pt.x + a2 * pt.y <= b + tol;
  }
};

/// Convex polygon with counterclockwise vertices. May be empty or
/// degenerate (a segment); both have zero area.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  bool empty() const { return vertices.size() < 3; }
  double area() const;
  /// Extent along axis 0 (v1) or 1 (v2); zero for empty polygons.
  double width(int axis) const;
  bool contains(const Vec2& pt, double tol = kGeomTol) const;

  static ConvexPolygon rectangle(double x0, double y0, double x1, double y1);
};

/// Vertex enumeration of the intersection of the given halfplanes.
/// Callers bound the result themselves (the spec's region constructions all
/// include the operating-box planes); a generous seed box keeps the clip
/// finite if they do not.
ConvexPolygon intersect_halfplanes(const std::vector<HalfPlane>& hs);

/// Union of convex polygons with pairwise-disjoint interiors. area() and
/// the partition machinery rely on disjointness; membership does not.
struct RegionSet {
  std::vector<ConvexPolygon> parts;

  bool empty() const;
  double area() const;
  bool contains(const Vec2& pt, double tol = kGeomTol) const;
  bool contains(const VoltagePair& v, double tol = kGeomTol) const {
    return contains(Vec2{v.v1, v.v2}, tol);
  }
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1], the only shape the margin
/// operator accepts.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(const Vec2& pt, double tol = 0.0) const {
    return pt.x >= x0 - tol && pt.x <= x1 + tol && pt.y >= y0 - tol &&
           pt.y <= y1 + tol;
  }
  /// Euclidean distance from pt to the rectangle (zero inside).
  double distance(const Vec2& pt) const;
};

/// Extracts the axis-aligned rectangle a RegionSet part represents; throws
/// std::invalid_argument if any part is not an axis-aligned rectangle.
std::vector<Rect> as_rectangles(const RegionSet& region);

/// Ring of points outside `region` within Euclidean distance d. The
/// returned polygons use the bounding-square corner approximation; use
/// margin_contains for the exact (quarter-disc corner) membership test.
RegionSet margin(const RegionSet& region, double d);

/// Exact margin membership: outside every rectangle, within distance d of
/// at least one.
bool margin_contains(const RegionSet& region, double d, const Vec2& pt);

/// Exact area of the Euclidean margin ring of a single rectangle:
/// perimeter * d + pi * d^2.
double margin_ring_area(const Rect& r, double d);

}  // namespace volthunt
