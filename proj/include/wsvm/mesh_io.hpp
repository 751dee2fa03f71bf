#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "wsvm/mesh.hpp"

namespace wsvm {

/// MEDIT `.mesh` ASCII, or legacy VTK ASCII unstructured grid.
enum class MeshFormat { Medit, Vtk };

std::string_view to_string(MeshFormat f);

/// "medit" or "vtk". Throws UnsupportedFormat.
MeshFormat parse_format(std::string_view name);

/// `.vtk` maps to Vtk, `.mesh` to Medit. Throws UnsupportedFormat.
MeshFormat format_from_path(const std::filesystem::path& path);

/// Writes live elements renumbered densely; reals use 17 significant digits so
/// coordinates round-trip exactly.
void write_mesh(const TetMesh& mesh, std::ostream& out, MeshFormat format);
void write_mesh(const TetMesh& mesh, const std::filesystem::path& path, MeshFormat format);

/// Throws ParseError (with line number), UnsupportedFormat or IoError, plus the
/// TetMesh construction errors.
TetMesh read_mesh(std::istream& in, MeshFormat format);
TetMesh read_mesh(const std::filesystem::path& path, MeshFormat format);

}  // namespace wsvm
