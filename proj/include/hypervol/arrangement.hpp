#pragma once

// Cells of the arrangement of all lines through pairs of a planar point set,
// restricted to the convex hull of the points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hypervol/error.hpp"

namespace hypervol {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2, Point2) = default;
};

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

inline constexpr double kCollinearTolerance = 1e-9;

// Throws DegenerateInput when two points coincide or three are collinear:
// the sine of the angle at some vertex of a triple is below tolerance.
inline void check_general_position(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (norm(pts[j] - pts[i]) == 0.0)
        throw DegenerateInput("points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Point2 a = pts[j] - pts[i], b = pts[k] - pts[i];
        double sine = std::abs(cross(a, b)) / (norm(a) * norm(b));
        if (sine < kCollinearTolerance)
          throw DegenerateInput("points " + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                std::to_string(k) + " are collinear");
      }
}

// Counterclockwise hull without collinear vertices (Andrew's monotone chain).
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

inline Point2 polygon_centroid(const std::vector<Point2>& poly) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  Point2 o = poly[0];
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Point2 p = poly[i] - o, q = poly[(i + 1) % poly.size()] - o;
    double c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

struct ArrangementCell {
  std::vector<Point2> polygon;  // counterclockwise, convex
  Point2 interior;              // centroid
  double area = 0.0;
};

namespace detail {

// Splits a convex polygon by the line through a and b. Vertices within tol
// of the line are shared by both halves.
inline void split_convex(const std::vector<Point2>& poly, Point2 a, Point2 b, double tol, std::vector<Point2>& left,
                         std::vector<Point2>& right) {
  left.clear();
  right.clear();
  Point2 dir = b - a;
  double len = norm(dir);
  std::vector<double> side(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    double s = cross(dir, poly[i] - a) / len;
    side[i] = std::abs(s) <= tol ? 0.0 : s;
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    std::size_t j = (i + 1) % poly.size();
    Point2 p = poly[i];
    if (side[i] >= 0) left.push_back(p);
    if (side[i] <= 0) right.push_back(p);
    if ((side[i] > 0 && side[j] < 0) || (side[i] < 0 && side[j] > 0)) {
      double t = side[i] / (side[i] - side[j]);
      Point2 q = p + t * (poly[j] - p);
      left.push_back(q);
      right.push_back(q);
    }
  }
}

}  // namespace detail

// Cells of the line arrangement inside the convex hull of pts, built by
// cutting the hull successively along every line through two points.
inline std::vector<ArrangementCell> arrangement_cells(const std::vector<Point2>& pts) {
  require(pts.size() >= 3, "arrangement needs at least three points");
  check_general_position(pts);
  double scale = 0.0;
  for (auto p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) scale = std::max(scale, norm(pts[i] - pts[j]));
  const double tol = 1e-12 * scale;
  const double min_area = 1e-14 * scale * scale;

  std::vector<std::vector<Point2>> cells{convex_hull(pts)};
  std::vector<std::vector<Point2>> next;
  std::vector<Point2> left, right;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      next.clear();
      for (const auto& poly : cells) {
        detail::split_convex(poly, pts[i], pts[j], tol, left, right);
        bool l = left.size() >= 3 && polygon_area(left) > min_area;
        bool r = right.size() >= 3 && polygon_area(right) > min_area;
        if (l && r) {
          next.push_back(left);
          next.push_back(right);
        } else {
          next.push_back(poly);
        }
      }
      cells.swap(next);
    }
  }
  std::vector<ArrangementCell> out;
  out.reserve(cells.size());
  for (auto& poly : cells) {
    ArrangementCell c;
    c.area = polygon_area(poly);
    c.interior = polygon_centroid(poly);
    c.polygon = std::move(poly);
    out.push_back(std::move(c));
  }
  return out;
}

// Strict containment of p in the open triangle (a, b, c).
inline bool in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  double o1 = orient(a, b, p), o2 = orient(b, c, p), o3 = orient(c, a, p);
  return (o1 > 0 && o2 > 0 && o3 > 0) || (o1 < 0 && o2 < 0 && o3 < 0);
}

inline double triangle_area(Point2 a, Point2 b, Point2 c) { return 0.5 * std::abs(orient(a, b, c)); }

}  // namespace hypervol
