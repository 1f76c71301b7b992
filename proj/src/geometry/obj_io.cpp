// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <fstream>
#include <sstream>

#include "cagewarp/io_util.hpp"
#include "cagewarp/mesh.hpp"

namespace cagewarp {

namespace {

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

long parse_index(const std::string& token, std::size_t line) {
  const auto slash = token.find('/');
  const std::string head = token.substr(0, slash);
  long value = 0;
  const auto* first = head.data();
  const auto* last = head.data() + head.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value == 0) throw ParseError("bad face index '" + token + "'" + at_line(line));
  return value;
}

}  // namespace

TriMesh parse_obj(const std::string& text) {
  TriMesh mesh;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Point3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw ParseError("malformed vertex" + at_line(line));
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (tokens.size() != 3) throw ParseError("non-triangular face" + at_line(line));
      Face face{};
      for (int i = 0; i < 3; ++i) {
        long idx = parse_index(tokens[i], line);
        const long n = static_cast<long>(mesh.vertices.size());
        idx = idx > 0 ? idx - 1 : n + idx;
        if (idx < 0 || idx >= n) throw ParseError("face index out of range" + at_line(line));
        face[i] = static_cast<std::uint32_t>(idx);
      }
      mesh.faces.push_back(face);
    }
  }
  if (is_watertight(mesh)) orient_outward(mesh);
  return mesh;
}

TriMesh load_obj(const std::filesystem::path& path) {
  try {
    return parse_obj(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_obj(const TriMesh& mesh) {
  std::string out;
  char buf[96];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const auto& f : mesh.faces) {
    std::snprintf(buf, sizeof(buf), "f %u %u %u\n", f[0] + 1, f[1] + 1, f[2] + 1);
    out += buf;
  }
  return out;
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) { write_file_atomic(path, format_obj(mesh)); }

}  // namespace cagewarp
