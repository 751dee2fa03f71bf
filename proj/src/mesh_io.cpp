#include "wsvm/mesh_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wsvm/error.hpp"

namespace wsvm {

namespace {

std::string format_real(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

// Whitespace tokenizer that tracks line numbers. `#` starts a comment.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}

  std::optional<std::string> next() {
    while (pos_ >= words_.size()) {
      std::string line;
      if (!std::getline(in_, line)) return std::nullopt;
      ++line_no_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      words_.clear();
      pos_ = 0;
      for (std::string w; ls >> w;) words_.push_back(w);
    }
    return words_[pos_++];
  }

  std::string expect(const char* what) {
    auto t = next();
    if (!t) fail(std::string("unexpected end of file, expected ") + what);
    return *t;
  }

  template <class T>
  T number(const char* what) {
    const std::string s = expect(what);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad " + std::string(what) + " '" + s + "'");
    return value;
  }

  /// Reads the rest of the current physical line verbatim (for headers).
  std::string raw_line() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no_) + ": " + why);
  }

 private:
  std::istream& in_;
  std::vector<std::string> words_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void write_medit(const TetMesh& mesh, std::ostream& out) {
  const TetMesh m = compacted(mesh);
  out << "MeshVersionFormatted 2\n\nDimension 3\n\n";
  out << "Vertices\n" << m.num_vertices() << "\n";
  for (std::size_t v = 0; v < m.vertex_slots(); ++v) {
    const Point3& p = m.position(static_cast<VertexId>(v));
    out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << " 0\n";
  }
  out << "\nTriangles\n" << m.boundary_faces().size() << "\n";
  for (const auto& f : m.boundary_faces()) out << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << " 1\n";
  out << "\nTetrahedra\n" << m.num_tets() << "\n";
  for (std::size_t t = 0; t < m.tet_slots(); ++t) {
    const Tet& k = m.tet(static_cast<TetId>(t));
    out << k[0] + 1 << ' ' << k[1] + 1 << ' ' << k[2] + 1 << ' ' << k[3] + 1 << " 0\n";
  }
  out << "\nEnd\n";
}

void write_vtk(const TetMesh& mesh, std::ostream& out) {
  const TetMesh m = compacted(mesh);
  out << "# vtk DataFile Version 3.0\nwsvm tetrahedral mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.num_vertices() << " double\n";
  for (std::size_t v = 0; v < m.vertex_slots(); ++v) {
    const Point3& p = m.position(static_cast<VertexId>(v));
    out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << '\n';
  }
  out << "CELLS " << m.num_tets() << ' ' << 5 * m.num_tets() << '\n';
  for (std::size_t t = 0; t < m.tet_slots(); ++t) {
    const Tet& k = m.tet(static_cast<TetId>(t));
    out << "4 " << k[0] << ' ' << k[1] << ' ' << k[2] << ' ' << k[3] << '\n';
  }
  out << "CELL_TYPES " << m.num_tets() << '\n';
  for (std::size_t t = 0; t < m.num_tets(); ++t) out << "10\n";
}

VertexId to_index(Tokens& tok, long long one_based, std::size_t nv) {
  if (one_based < 1 || static_cast<std::size_t>(one_based) > nv) {
    tok.fail("vertex index " + std::to_string(one_based) + " out of range");
  }
  return static_cast<VertexId>(one_based - 1);
}

TetMesh read_medit(std::istream& in) {
  Tokens tok(in);
  std::vector<Point3> verts;
  std::vector<Tet> tets;
  bool have_version = false;
  bool have_vertices = false;
  bool have_tets = false;
  for (;;) {
    const auto word = tok.next();
    if (!word) tok.fail("missing End keyword");
    const std::string key = upper(*word);
    if (key == "END") break;
    if (key == "MESHVERSIONFORMATTED") {
      const int version = tok.number<int>("version");
      if (version < 1 || version > 2) tok.fail("unsupported MEDIT version " + std::to_string(version));
      have_version = true;
    } else if (key == "DIMENSION") {
      if (tok.number<int>("dimension") != 3) tok.fail("only Dimension 3 is supported");
    } else if (key == "VERTICES") {
      const auto n = tok.number<std::size_t>("vertex count");
      verts.resize(n);
      for (auto& p : verts) {
        p.x = tok.number<double>("coordinate");
        p.y = tok.number<double>("coordinate");
        p.z = tok.number<double>("coordinate");
        tok.number<long long>("reference");
      }
      have_vertices = true;
    } else if (key == "TRIANGLES") {
      // Boundary faces are recomputed from face multiplicity; only checked here.
      const auto n = tok.number<std::size_t>("triangle count");
      for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < 3; ++j) to_index(tok, tok.number<long long>("vertex index"), verts.size());
        tok.number<long long>("reference");
      }
    } else if (key == "TETRAHEDRA") {
      const auto n = tok.number<std::size_t>("tetrahedron count");
      tets.resize(n);
      for (auto& t : tets) {
        for (int j = 0; j < 4; ++j) t[j] = to_index(tok, tok.number<long long>("vertex index"), verts.size());
        tok.number<long long>("reference");
      }
      have_tets = true;
    } else {
      tok.fail("unknown keyword '" + *word + "'");
    }
  }
  if (!have_version) tok.fail("missing MeshVersionFormatted");
  if (!have_vertices || !have_tets) tok.fail("missing Vertices or Tetrahedra section");
  return TetMesh(std::move(verts), std::move(tets));
}

TetMesh read_vtk(std::istream& in) {
  Tokens tok(in);
  if (tok.raw_line().rfind("# vtk DataFile", 0) != 0) tok.fail("missing VTK header");
  tok.raw_line();  // title
  if (upper(tok.raw_line()).find("ASCII") == std::string::npos) tok.fail("only ASCII VTK is supported");
  if (upper(tok.expect("DATASET")) != "DATASET") tok.fail("expected DATASET");
  if (upper(tok.expect("dataset type")) != "UNSTRUCTURED_GRID") tok.fail("expected UNSTRUCTURED_GRID");
  std::vector<Point3> verts;
  std::vector<Tet> tets;
  bool have_types = false;
  while (auto word = tok.next()) {
    const std::string key = upper(*word);
    if (key == "POINTS") {
      verts.resize(tok.number<std::size_t>("point count"));
      tok.expect("data type");
      for (auto& p : verts) {
        p.x = tok.number<double>("coordinate");
        p.y = tok.number<double>("coordinate");
        p.z = tok.number<double>("coordinate");
      }
    } else if (key == "CELLS") {
      tets.resize(tok.number<std::size_t>("cell count"));
      tok.number<std::size_t>("cell list size");
      for (auto& t : tets) {
        if (tok.number<int>("cell size") != 4) tok.fail("only tetrahedral cells are supported");
        for (int j = 0; j < 4; ++j) t[j] = to_index(tok, tok.number<long long>("vertex index") + 1, verts.size());
      }
    } else if (key == "CELL_TYPES") {
      const auto n = tok.number<std::size_t>("cell type count");
      if (n != tets.size()) tok.fail("CELL_TYPES count differs from CELLS");
      for (std::size_t i = 0; i < n; ++i) {
        if (tok.number<int>("cell type") != 10) tok.fail("only cell type 10 (tetra) is supported");
      }
      have_types = true;
      break;  // attribute sections are ignored
    } else {
      tok.fail("unexpected keyword '" + *word + "'");
    }
  }
  if (!have_types) tok.fail("missing CELL_TYPES section");
  return TetMesh(std::move(verts), std::move(tets));
}

}  // namespace

std::string_view to_string(MeshFormat f) { return f == MeshFormat::Medit ? "medit" : "vtk"; }

MeshFormat parse_format(std::string_view name) {
  if (name == "medit" || name == "mesh") return MeshFormat::Medit;
  if (name == "vtk") return MeshFormat::Vtk;
  throw Error(ErrorCode::UnsupportedFormat, "unknown mesh format '" + std::string(name) + "'");
}

MeshFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".mesh") return MeshFormat::Medit;
  if (ext == ".vtk") return MeshFormat::Vtk;
  throw Error(ErrorCode::UnsupportedFormat, "cannot infer mesh format from '" + path.string() + "'");
}

void write_mesh(const TetMesh& mesh, std::ostream& out, MeshFormat format) {
  if (format == MeshFormat::Medit) {
    write_medit(mesh, out);
  } else {
    write_vtk(mesh, out);
  }
}

void write_mesh(const TetMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  write_mesh(mesh, out, format);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

TetMesh read_mesh(std::istream& in, MeshFormat format) {
  return format == MeshFormat::Medit ? read_medit(in) : read_vtk(in);
}

TetMesh read_mesh(const std::filesystem::path& path, MeshFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return read_mesh(in, format);
}

}  // namespace wsvm
