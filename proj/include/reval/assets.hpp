#pragma once

#include <string>

namespace reval {

// Directory holding bundled assets (prompt templates, the built-in rubric).
// Overridable via the REVAL_ASSETS environment variable; defaults to the
// source tree's assets/ directory.
std::string asset_dir();

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace reval
