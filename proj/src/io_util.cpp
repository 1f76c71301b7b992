// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/io_util.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace cagewarp {

namespace {

std::string slurp(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) { return slurp(path, std::ios::in); }

std::string read_binary_file(const std::filesystem::path& path) { return slurp(path, std::ios::in | std::ios::binary); }

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace cagewarp
