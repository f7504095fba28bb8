#pragma once

#include <map>
#include <string>

namespace reval {

// Substitutes {{name}} placeholders. A placeholder with no value is a
// ConfigError; text outside placeholders passes through verbatim.
std::string render_template(const std::string& template_text,
                            const std::map<std::string, std::string>& values);

// A named set of prompt template files loaded from one directory. The
// content hash of the whole set enters the version manifest, so any prompt
// change shows up in run provenance.
class PromptTemplateSet {
 public:
  static PromptTemplateSet load(const std::string& dir, const std::string& id);
  static PromptTemplateSet from_memory(std::string id,
                                       std::map<std::string, std::string> templates);

  const std::string& id() const { return id_; }
  bool has(const std::string& name) const { return templates_.count(name) > 0; }
  const std::string& raw(const std::string& name) const;
  std::string render(const std::string& name,
                     const std::map<std::string, std::string>& values) const;
  std::string content_hash() const;

 private:
  std::string id_;
  std::map<std::string, std::string> templates_;  // name (file stem) -> text
};

}  // namespace reval
