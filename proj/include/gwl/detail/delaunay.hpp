#pragma once

// Incremental Delaunay triangulation (Bowyer-Watson) over integer lattice
// points with exact predicates. Used by the linear motion-map interpolator.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace gwl::detail {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

// > 0 when c lies to the left of a->b.
inline std::int64_t orient(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc.
inline bool in_circumcircle(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c,
                            const LatticePoint& d) {
  __extension__ typedef __int128 wide;
  const wide adx = a.x - d.x, ady = a.y - d.y;
  const wide bdx = b.x - d.x, bdy = b.y - d.y;
  const wide cdx = c.x - d.x, cdy = c.y - d.y;
  const wide al = adx * adx + ady * ady;
  const wide bl = bdx * bdx + bdy * bdy;
  const wide cl = cdx * cdx + cdy * cdy;
  const wide det = adx * (bdy * cl - cdy * bl) - ady * (bdx * cl - cdx * bl) + al * (bdx * cdy - cdx * bdy);
  return det > 0;
}

class Delaunay {
public:
  struct Triangle {
    std::array<int, 3> v{};  // counter-clockwise
    std::array<int, 3> n{};  // neighbour opposite v[k], -1 if none
    bool alive = true;
  };

  // Points must be distinct and lie in [0, extent) on both axes.
  Delaunay(std::vector<LatticePoint> points, std::int64_t extent) : points_(std::move(points)) {
    real_count_ = static_cast<int>(points_.size());
    // Coordinates stay below 2^29 so the in-circle determinant fits in 128 bits.
    const std::int64_t d = std::max<std::int64_t>(extent, 1) + 1;
    if (d > (1 << 16))
      throw std::invalid_argument("Delaunay: extent too large");
    const std::int64_t s = d * 4096;
    const std::int64_t c = d / 2;
    points_.push_back({c - s, c - s});
    points_.push_back({c + s, c - s});
    points_.push_back({c, c + s});
    tris_.push_back({{real_count_, real_count_ + 1, real_count_ + 2}, {-1, -1, -1}, true});
    for (int i = 0; i < real_count_; ++i)
      insert(i);
  }

  int real_count() const noexcept { return real_count_; }
  const LatticePoint& point(int i) const { return points_.at(static_cast<std::size_t>(i)); }
  bool is_super(int v) const noexcept { return v >= real_count_; }
  const std::vector<Triangle>& triangles() const noexcept { return tris_; }

  // Triangle containing p (boundary included), found by a visibility walk.
  int locate(const LatticePoint& p) const {
    int t = last_;
    if (t < 0 || !tris_[static_cast<std::size_t>(t)].alive)
      t = first_alive();
    const std::size_t limit = tris_.size() + 8;
    for (std::size_t steps = 0; steps < limit; ++steps) {
      const Triangle& tri = tris_[static_cast<std::size_t>(t)];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const auto& a = points_[static_cast<std::size_t>(tri.v[(k + 1) % 3])];
        const auto& b = points_[static_cast<std::size_t>(tri.v[(k + 2) % 3])];
        if (orient(a, b, p) < 0) {
          next = tri.n[static_cast<std::size_t>(k)];
          break;
        }
      }
      if (next < 0) {
        last_ = t;
        return t;
      }
      t = next;
    }
    return locate_by_scan(p);
  }

private:
  int first_alive() const {
    for (std::size_t i = 0; i < tris_.size(); ++i)
      if (tris_[i].alive)
        return static_cast<int>(i);
    throw std::logic_error("Delaunay: no triangles");
  }

  bool contains(const Triangle& tri, const LatticePoint& p) const {
    for (int k = 0; k < 3; ++k) {
      const auto& a = points_[static_cast<std::size_t>(tri.v[(k + 1) % 3])];
      const auto& b = points_[static_cast<std::size_t>(tri.v[(k + 2) % 3])];
      if (orient(a, b, p) < 0)
        return false;
    }
    return true;
  }

  int locate_by_scan(const LatticePoint& p) const {
    for (std::size_t i = 0; i < tris_.size(); ++i)
      if (tris_[i].alive && contains(tris_[i], p))
        return static_cast<int>(i);
    throw std::logic_error("Delaunay: point outside triangulation");
  }

  int new_triangle(const Triangle& t) {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tris_[static_cast<std::size_t>(id)] = t;
      return id;
    }
    tris_.push_back(t);
    return static_cast<int>(tris_.size() - 1);
  }

  void insert(int pi) {
    const LatticePoint& p = points_[static_cast<std::size_t>(pi)];
    const int start = locate(p);

    // Cavity: all triangles whose circumcircle strictly contains p.
    std::vector<int> bad{start};
    std::vector<int> stack{start};
    marked_.resize(tris_.size(), 0);
    marked_[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int nb : tris_[static_cast<std::size_t>(t)].n) {
        if (nb < 0 || marked_[static_cast<std::size_t>(nb)])
          continue;
        const Triangle& tn = tris_[static_cast<std::size_t>(nb)];
        if (in_circumcircle(points_[static_cast<std::size_t>(tn.v[0])],
                            points_[static_cast<std::size_t>(tn.v[1])],
                            points_[static_cast<std::size_t>(tn.v[2])], p)) {
          marked_[static_cast<std::size_t>(nb)] = 1;
          bad.push_back(nb);
          stack.push_back(nb);
        }
      }
    }

    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> boundary;
    for (int t : bad) {
      const Triangle& tri = tris_[static_cast<std::size_t>(t)];
      for (int k = 0; k < 3; ++k) {
        const int nb = tri.n[static_cast<std::size_t>(k)];
        if (nb >= 0 && marked_[static_cast<std::size_t>(nb)])
          continue;
        boundary.push_back({tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], nb});
      }
    }
    for (int t : bad) {
      marked_[static_cast<std::size_t>(t)] = 0;
      tris_[static_cast<std::size_t>(t)].alive = false;
      free_.push_back(t);
    }

    std::unordered_map<int, int> by_first;  // edge start vertex -> new triangle
    std::unordered_map<int, int> by_second; // edge end vertex -> new triangle
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const Edge& e : boundary) {
      const int id = new_triangle({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
      created.push_back(id);
      by_first[e.a] = id;
      by_second[e.b] = id;
      if (e.outside >= 0) {
        // Relink by shared edge (b, a); ids of dead triangles may already be reused.
        Triangle& out = tris_[static_cast<std::size_t>(e.outside)];
        for (int k = 0; k < 3; ++k)
          if (out.v[(k + 1) % 3] == e.b && out.v[(k + 2) % 3] == e.a)
            out.n[static_cast<std::size_t>(k)] = id;
      }
    }
    for (int id : created) {
      Triangle& tri = tris_[static_cast<std::size_t>(id)];
      // Opposite a: edge b->p, shared with the triangle starting at b.
      tri.n[0] = by_first.at(tri.v[1]);
      // Opposite b: edge p->a, shared with the triangle ending at a.
      tri.n[1] = by_second.at(tri.v[0]);
    }
    marked_.resize(tris_.size(), 0);
    last_ = created.front();
  }

  std::vector<LatticePoint> points_;
  std::vector<Triangle> tris_;
  std::vector<int> free_;
  std::vector<std::uint8_t> marked_;
  int real_count_ = 0;
  mutable int last_ = 0;
};

} // namespace gwl::detail
