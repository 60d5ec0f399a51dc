#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lmpcc {

// Minimal sectioned key-value file: `[section]` headers, `key = value` lines,
// `#`/`;` comments. Repeated keys are kept in order (used for waypoint lists).
class IniFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
  };

  static IniFile parse(const std::string& text);
  static IniFile load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_string() const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void append(const std::string& section, const std::string& key, const std::string& value);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  std::vector<std::string> sections() const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;

  const std::vector<Entry>& entries() const { return entries_; }

  // Parses a comma-separated list of doubles.
  static std::vector<double> parse_doubles(const std::string& value);

 private:
  std::vector<Entry> entries_;
};

}  // namespace lmpcc
