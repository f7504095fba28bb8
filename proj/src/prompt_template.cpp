#include "reval/prompt_template.hpp"

#include <filesystem>

#include "reval/assets.hpp"
#include "reval/error.hpp"
#include "reval/hash.hpp"

namespace reval {

std::string render_template(const std::string& template_text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(template_text.size());
  std::size_t i = 0;
  while (i < template_text.size()) {
    const auto open = template_text.find("{{", i);
    if (open == std::string::npos) {
      out.append(template_text, i, std::string::npos);
      break;
    }
    out.append(template_text, i, open - i);
    const auto close = template_text.find("}}", open + 2);
    if (close == std::string::npos)
      throw Error(ErrorCode::ConfigError, "unterminated {{placeholder}} in template");
    const std::string name = template_text.substr(open + 2, close - open - 2);
    auto it = values.find(name);
    if (it == values.end())
      throw Error(ErrorCode::ConfigError, "no value for template placeholder {{" + name + "}}");
    out += it->second;
    i = close + 2;
  }
  return out;
}

PromptTemplateSet PromptTemplateSet::load(const std::string& dir, const std::string& id) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::ConfigError, "prompt template directory not found: " + dir);

  PromptTemplateSet set;
  set.id_ = id;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    set.templates_[entry.path().stem().string()] = read_text_file(entry.path().string());
  }
  if (set.templates_.empty())
    throw Error(ErrorCode::ConfigError, "no .txt templates in " + dir);
  return set;
}

PromptTemplateSet PromptTemplateSet::from_memory(std::string id,
                                                 std::map<std::string, std::string> templates) {
  PromptTemplateSet set;
  set.id_ = std::move(id);
  set.templates_ = std::move(templates);
  return set;
}

const std::string& PromptTemplateSet::raw(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end())
    throw Error(ErrorCode::ConfigError,
                "prompt template set '" + id_ + "' has no template '" + name + "'");
  return it->second;
}

std::string PromptTemplateSet::render(const std::string& name,
                                      const std::map<std::string, std::string>& values) const {
  return render_template(raw(name), values);
}

std::string PromptTemplateSet::content_hash() const {
  std::uint64_t h = fnv1a64(id_);
  for (const auto& [name, text] : templates_) {  // std::map: stable order
    h = fnv1a64(name, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(text, h);
    h = fnv1a64("\x1e", h);
  }
  return hash_hex(h);
}

}  // namespace reval
