#include "reval/assets.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reval/error.hpp"

#ifndef REVAL_DEFAULT_ASSET_DIR
#define REVAL_DEFAULT_ASSET_DIR "assets"
#endif

namespace reval {

std::string asset_dir() {
  if (const char* env = std::getenv("REVAL_ASSETS"); env && *env) return env;
  return REVAL_DEFAULT_ASSET_DIR;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write file: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "failed writing file: " + path);
}

}  // namespace reval
