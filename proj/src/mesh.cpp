#include "aapicard/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace aapicard {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::string_view to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::wall: return "wall";
    case BoundaryLabel::lid: return "lid";
    case BoundaryLabel::inflow: return "inflow";
    case BoundaryLabel::outflow: return "outflow";
    case BoundaryLabel::cylinder: return "cylinder";
  }
  return "unknown";
}

BoundaryLabel parse_boundary_label(std::string_view text) {
  for (auto label : {BoundaryLabel::wall, BoundaryLabel::lid, BoundaryLabel::inflow,
                     BoundaryLabel::outflow, BoundaryLabel::cylinder}) {
    if (to_string(label) == text) return label;
  }
  throw MeshError("unknown boundary label '" + std::string(text) + "'");
}

TriMesh::TriMesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary_edges)) {
  validate();
}

double TriMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double TriMesh::total_area() const {
  long double sum = 0.0L;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return static_cast<double>(sum);
}

double TriMesh::h() const {
  double h = 0.0;
  for (const auto& tri : triangles_) {
    h = std::max({h, distance(vertices_[tri[0]], vertices_[tri[1]]),
                  distance(vertices_[tri[1]], vertices_[tri[2]]),
                  distance(vertices_[tri[2]], vertices_[tri[0]])});
  }
  return h;
}

std::size_t TriMesh::num_edges() const {
  std::vector<EdgeKey> edges;
  edges.reserve(3 * triangles_.size());
  for (const auto& tri : triangles_) {
    for (int e = 0; e < 3; ++e) edges.push_back(edge_key(tri[e], tri[(e + 1) % 3]));
  }
  std::sort(edges.begin(), edges.end());
  return static_cast<std::size_t>(std::unique(edges.begin(), edges.end()) - edges.begin());
}

void TriMesh::validate() const {
  const int nv = static_cast<int>(vertices_.size());
  if (triangles_.empty()) throw MeshError("mesh has no triangles");

  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
  }

  std::map<EdgeKey, int> incidence;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("triangle " + std::to_string(t) + " is degenerate");
    }
    if (!(signed_area(t) > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) +
                      " has non-positive signed area (clockwise orientation)");
    }
    for (int e = 0; e < 3; ++e) ++incidence[edge_key(tri[e], tri[(e + 1) % 3])];
  }

  std::map<EdgeKey, bool> labeled;
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    const auto [i, j] = boundary_[b].vertices;
    const auto key = edge_key(i, j);
    const auto it = incidence.find(key);
    if (it == incidence.end()) {
      throw MeshError("boundary edge " + std::to_string(b) + " (" + std::to_string(i) + "," +
                      std::to_string(j) + ") is not an edge of the mesh");
    }
    if (it->second != 1) {
      throw MeshError("boundary edge " + std::to_string(b) + " (" + std::to_string(i) + "," +
                      std::to_string(j) + ") is an interior edge");
    }
    if (!labeled.emplace(key, true).second) {
      throw MeshError("boundary edge " + std::to_string(b) + " is listed twice");
    }
  }

  for (const auto& [key, count] : incidence) {
    if (count > 2) {
      throw MeshError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                      ") is shared by more than two triangles");
    }
    if (count == 1 && !labeled.contains(key)) {
      throw MeshError("unlabeled boundary edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + ")");
    }
  }
}

TriMesh unit_square_mesh(int n, BoundaryLabel lid_label) {
  if (n < 2) throw std::invalid_argument("unit_square_mesh: n must be at least 2");
  const int stride = n + 1;
  auto index = [stride](int i, int j) { return j * stride + i; };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }
  }

  std::vector<BoundaryEdge> boundary;
  boundary.reserve(4 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) boundary.push_back({{index(i, 0), index(i + 1, 0)}, BoundaryLabel::wall});
  for (int j = 0; j < n; ++j) boundary.push_back({{index(n, j), index(n, j + 1)}, BoundaryLabel::wall});
  for (int i = n; i > 0; --i) boundary.push_back({{index(i, n), index(i - 1, n)}, lid_label});
  for (int j = n; j > 0; --j) boundary.push_back({{index(0, j), index(0, j - 1)}, BoundaryLabel::wall});

  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

TriMesh barycentric_refine(const TriMesh& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  std::vector<std::array<int, 3>> triangles;
  vertices.reserve(vertices.size() + mesh.num_triangles());
  triangles.reserve(3 * mesh.num_triangles());

  for (const auto& tri : mesh.triangles()) {
    const Point& a = mesh.vertices()[tri[0]];
    const Point& b = mesh.vertices()[tri[1]];
    const Point& c = mesh.vertices()[tri[2]];
    const int g = static_cast<int>(vertices.size());
    vertices.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
    triangles.push_back({tri[0], tri[1], g});
    triangles.push_back({tri[1], tri[2], g});
    triangles.push_back({tri[2], tri[0], g});
  }
  return TriMesh(std::move(vertices), std::move(triangles), mesh.boundary_edges());
}

namespace {

// Reads the next non-empty, comment-stripped line into a token stream.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      tokens.clear();
      tokens.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("mesh parse error at line " + std::to_string(line_number_) + ": " + what);
  }

  std::istringstream expect_line(const char* what) {
    std::istringstream tokens;
    if (!next(tokens)) fail(std::string("unexpected end of file, expected ") + what);
    return tokens;
  }

  std::size_t expect_section(const std::string& keyword) {
    auto tokens = expect_line(keyword.c_str());
    std::string word;
    long long count = -1;
    if (!(tokens >> word >> count) || word != keyword || count < 0) {
      fail("expected '" + keyword + " <count>'");
    }
    expect_end(tokens);
    return static_cast<std::size_t>(count);
  }

  void expect_end(std::istringstream& tokens) const {
    std::string extra;
    if (tokens >> extra) fail("unexpected trailing token '" + extra + "'");
  }

 private:
  std::istream& in_;
  int line_number_ = 0;
};

}  // namespace

TriMesh read_mesh(std::istream& in) {
  LineReader reader(in);

  {
    auto tokens = reader.expect_line("header");
    std::string magic;
    int version = 0;
    if (!(tokens >> magic >> version) || magic != "trimesh" || version != 1) {
      reader.fail("expected header 'trimesh 1'");
    }
    reader.expect_end(tokens);
  }

  std::vector<Point> vertices(reader.expect_section("vertices"));
  for (auto& p : vertices) {
    auto tokens = reader.expect_line("vertex coordinates");
    if (!(tokens >> p.x >> p.y)) reader.fail("expected 'x y'");
    reader.expect_end(tokens);
  }

  std::vector<std::array<int, 3>> triangles(reader.expect_section("triangles"));
  for (auto& tri : triangles) {
    auto tokens = reader.expect_line("triangle");
    if (!(tokens >> tri[0] >> tri[1] >> tri[2])) reader.fail("expected 'i j k'");
    reader.expect_end(tokens);
  }

  std::vector<BoundaryEdge> boundary(reader.expect_section("boundary"));
  for (auto& edge : boundary) {
    auto tokens = reader.expect_line("boundary edge");
    std::string label;
    if (!(tokens >> edge.vertices[0] >> edge.vertices[1])) reader.fail("expected 'i j label'");
    if (!(tokens >> label)) reader.fail("boundary edge lacks a label");
    try {
      edge.label = parse_boundary_label(label);
    } catch (const MeshError& e) {
      reader.fail(e.what());
    }
    reader.expect_end(tokens);
  }

  std::istringstream rest;
  if (reader.next(rest)) reader.fail("unexpected content after boundary section");

  return TriMesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

TriMesh import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  return read_mesh(in);
}

void write_mesh(const TriMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "trimesh 1\n";
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "boundary " << mesh.boundary_edges().size() << '\n';
  for (const auto& e : mesh.boundary_edges()) {
    out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.label) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace aapicard
