#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

/// Flat `key=value` settings, one per line, `#` comments. Keys keep file
/// order for echoing.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view data) {
    KeyValueConfig cfg;
    std::size_t lineno = 0;
    for (std::string_view raw : text::lines(data)) {
      ++lineno;
      const std::string_view line = text::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        fail(ErrorKind::config, "config line " + std::to_string(lineno) + ": expected key=value");
      }
      const std::string key(text::trim(line.substr(0, eq)));
      if (key.empty()) fail(ErrorKind::config, "config line " + std::to_string(lineno) + ": empty key");
      if (cfg.contains(key)) fail(ErrorKind::config, "config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      cfg.set(key, std::string(text::trim(line.substr(eq + 1))));
    }
    return cfg;
  }

  void set(const std::string& key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(key, std::move(value));
  }

  bool contains(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return true;
    }
    return false;
  }

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  std::string serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace tokbench
