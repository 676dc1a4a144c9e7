#pragma once

// Flat key=value configuration files with [section] headers, UTF-8, '#'
// comments.  Unknown sections or keys abort before any computation.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hjym::cli {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline ConfigMap parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ConfigMap out;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(lineno) + ": empty section name");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside any section");
    if (!out[section].insert({key, value}).second)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
  }
  return out;
}

// Schema check: every present section/key must be declared.
inline void validate_config(const ConfigMap& cfg,
                            const std::map<std::string, std::set<std::string>>& schema,
                            const std::string& path) {
  for (const auto& [section, kv] : cfg) {
    const auto s = schema.find(section);
    if (s == schema.end()) throw ConfigError(path + ": unknown section [" + section + "]");
    for (const auto& [key, value] : kv) {
      (void)value;
      if (!s->second.count(key))
        throw ConfigError(path + ": unknown key '" + key + "' in [" + section + "]");
    }
  }
}

// Typed getters; absent keys leave the destination untouched.
inline void get(const ConfigMap& c, const std::string& s, const std::string& k, double& dst) {
  if (auto si = c.find(s); si != c.end())
    if (auto ki = si->second.find(k); ki != si->second.end()) {
      try {
        dst = std::stod(ki->second);
      } catch (...) {
        throw ConfigError("bad numeric value for " + s + "." + k + ": " + ki->second);
      }
    }
}
inline void get(const ConfigMap& c, const std::string& s, const std::string& k, int& dst) {
  if (auto si = c.find(s); si != c.end())
    if (auto ki = si->second.find(k); ki != si->second.end()) {
      try {
        dst = std::stoi(ki->second);
      } catch (...) {
        throw ConfigError("bad integer value for " + s + "." + k + ": " + ki->second);
      }
    }
}
inline void get(const ConfigMap& c, const std::string& s, const std::string& k, bool& dst) {
  if (auto si = c.find(s); si != c.end())
    if (auto ki = si->second.find(k); ki != si->second.end()) {
      const std::string& v = ki->second;
      if (v == "true" || v == "1" || v == "yes")
        dst = true;
      else if (v == "false" || v == "0" || v == "no")
        dst = false;
      else
        throw ConfigError("bad boolean value for " + s + "." + k + ": " + v);
    }
}
inline void get(const ConfigMap& c, const std::string& s, const std::string& k,
                std::string& dst) {
  if (auto si = c.find(s); si != c.end())
    if (auto ki = si->second.find(k); ki != si->second.end()) dst = ki->second;
}

}  // namespace hjym::cli
