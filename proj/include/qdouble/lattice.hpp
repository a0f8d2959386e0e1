// Copyright 2026 The qdouble Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDOUBLE_LATTICE_HPP
#define QDOUBLE_LATTICE_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdouble {

enum class RegionKind { Free, Torus };
enum class EdgeDir { Right, Up };

struct Vertex {
  int x = 0;
  int y = 0;
  bool operator==(const Vertex&) const = default;
  auto operator<=>(const Vertex&) const = default;
};

/// A face is named by its lower-left corner.
struct Face {
  int x = 0;
  int y = 0;
  bool operator==(const Face&) const = default;
  auto operator<=>(const Face&) const = default;
};

struct Edge {
  Vertex tail;  // the edge points from tail to head, up or right
  Vertex head;
  EdgeDir dir = EdgeDir::Right;
  int index = 0;
};

struct StarEdge {
  int edge = 0;
  bool outgoing = true;
};

struct Star {
  Vertex v;
  std::array<StarEdge, 4> edges;  // right, up, left, down
};

struct PlaquetteEdge {
  int edge = 0;
  int sign = 1;  // +1 if the edge runs counterclockwise around the face
};

struct Plaquette {
  Face f;
  std::array<PlaquetteEdge, 4> edges;  // bottom, right, top, left
};

struct Site {
  Vertex v;
  Face f;
  bool operator==(const Site&) const = default;
  auto operator<=>(const Site&) const = default;
};

enum class TriangleKind { Direct, Dual };

struct Triangle {
  int edge = 0;
  TriangleKind kind = TriangleKind::Direct;
  int sign = 1;
  bool operator==(const Triangle&) const = default;
};

/// Ribbon as the site sequence it visits together with one triangle per step.
struct Ribbon {
  std::vector<Site> sites;
  std::vector<Triangle> triangles;  // triangles[i] joins sites[i] and sites[i+1]

  const Site& start() const { return sites.front(); }
  const Site& end() const { return sites.back(); }
  bool closed() const { return sites.front() == sites.back(); }
  std::vector<int> direct_edges() const;
  std::vector<int> dual_edges() const;
  bool operator==(const Ribbon&) const = default;
};

enum class Routing { HorizontalFirst, VerticalFirst };

/// Rectangular region of the square lattice: width x height vertices, either
/// with free boundary or periodically identified.
///
/// Edges are numbered row-major, all horizontal edges before all vertical
/// ones. On a torus the coordinates of vertices and faces are reduced modulo
/// the periods; on a free region faces outside the region are representable
/// (they appear as faces of boundary sites).
class Region {
 public:
  Region(RegionKind kind, int width, int height);
  /// "free:3x3", "torus:2x2", "lambda:L" (free (2L+1)x(2L+1)).
  static Region parse(std::string_view spec);

  RegionKind kind() const { return kind_; }
  int width() const { return width_; }
  int height() const { return height_; }
  bool is_torus() const { return kind_ == RegionKind::Torus; }
  std::string name() const;

  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_horizontal() const { return num_h_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int index) const { return edges_.at(index); }

  /// Edge index of the edge leaving (x,y) to the right / upward, if present.
  std::optional<int> h_edge(int x, int y) const;
  std::optional<int> v_edge(int x, int y) const;
  /// Edge joining two lattice-adjacent vertices, if present.
  std::optional<int> edge_between(Vertex a, Vertex b) const;

  bool contains_vertex(Vertex v) const;
  bool contains_face(Face f) const;
  Vertex normalize(Vertex v) const;
  Face normalize(Face f) const;

  /// Full four-edge stars (V_Lambda).
  const std::vector<Star>& stars() const { return stars_; }
  const std::vector<Plaquette>& plaquettes() const { return plaqs_; }
  std::optional<Star> star(Vertex v) const;
  std::optional<Plaquette> plaquette(Face f) const;
  bool has_star(Vertex v) const { return star(v).has_value(); }

  /// Pairs (v,f) with v in the vertex box and f in F_Lambda.
  std::vector<Site> sites() const;
  /// Sites whose vertex carries a full star and whose face is in F_Lambda.
  std::vector<Site> interior_sites() const;
  /// Sites with v on the rim and f a face of the circumscribing rectangle
  /// outside F_Lambda. Empty on a torus.
  std::vector<Site> boundary_sites() const;
  bool is_interior_site(const Site& s) const;
  bool is_boundary_site(const Site& s) const;

  /// Faces around v in counterclockwise order starting north-east.
  std::array<Face, 4> faces_around(Vertex v) const;
  bool adjacent(const Site& a, const Site& b) const;
  /// Triangle joining two adjacent sites, if the step stays inside the region.
  std::optional<Triangle> step_triangle(const Site& a, const Site& b) const;
  /// True if s.f is one of the four faces around s.v.
  bool adjacent_face(const Site& s) const;

  /// Closed counterclockwise ribbon around the rectangle with lower-left
  /// vertex (x0,y0) and w x h vertices; its direct loop runs on the rectangle
  /// rim, its dual loop through the faces just inside.
  Ribbon rectangle_ribbon(int x0, int y0, int w, int h) const;

  int coord_distance(Vertex a, Vertex b) const;

 private:
  void build();

  RegionKind kind_;
  int width_;
  int height_;
  int num_h_ = 0;
  std::vector<Edge> edges_;
  std::vector<Star> stars_;
  std::vector<Plaquette> plaqs_;
};

/// Builds a ribbon from a site sequence. Throws std::invalid_argument if the
/// sequence is not a valid ribbon inside the region.
Ribbon make_ribbon(const Region& region, const std::vector<Site>& sites);
/// Structural validity; on failure writes a reason.
bool validate_ribbon(const Region& region, const Ribbon& r, std::string* why = nullptr);

Region build_region(RegionKind kind, int width, int height);
Ribbon boundary_ribbon(const Region& region);
Ribbon ribbon_between(const Region& region, const Site& s0, const Site& s1,
                      Routing routing = Routing::HorizontalFirst);
Ribbon concat(const Ribbon& r0, const Ribbon& r1);
Ribbon reverse(const Ribbon& r);
/// Ribbon from an interior site to the nearest boundary site.
Ribbon ribbon_to_boundary(const Region& region, const Site& s);

std::string format_site(const Site& s);

}  // namespace qdouble

#endif  // QDOUBLE_LATTICE_HPP
