#include "lmpcc/ini.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lmpcc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniFile IniFile::parse(const std::string& text) {
  IniFile ini;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("ini: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("ini: expected key = value at line " + std::to_string(lineno));
    ini.entries_.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ini: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void IniFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ini: cannot write " + path);
  out << to_string();
}

std::string IniFile::to_string() const {
  std::ostringstream out;
  std::string current;
  bool first = true;
  for (const auto& e : entries_) {
    if (e.section != current || first) {
      if (!first) out << "\n";
      out << "[" << e.section << "]\n";
      current = e.section;
      first = false;
    }
    out << e.key << " = " << e.value << "\n";
  }
  return out.str();
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = value;
      return;
    }
  }
  entries_.push_back({section, key, value});
}

void IniFile::append(const std::string& section, const std::string& key,
                     const std::string& value) {
  entries_.push_back({section, key, value});
}

std::optional<std::string> IniFile::get(const std::string& section, const std::string& key) const {
  std::optional<std::string> out;
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) out = e.value;
  return out;
}

std::vector<std::string> IniFile::get_all(const std::string& section,
                                          const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) out.push_back(e.value);
  return out;
}

bool IniFile::has_section(const std::string& section) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.section == section; });
}

std::vector<std::string> IniFile::sections() const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (std::find(out.begin(), out.end(), e.section) == out.end()) out.push_back(e.section);
  return out;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
  const auto v = get(section, key);
  return v ? std::stod(*v) : fallback;
}

int IniFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  const auto v = get(section, key);
  return v ? std::stoi(*v) : fallback;
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw std::runtime_error("ini: bad boolean value '" + *v + "' for " + section + "." + key);
}

std::string IniFile::get_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
  const auto v = get(section, key);
  return v ? *v : fallback;
}

std::vector<double> IniFile::parse_doubles(const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace lmpcc
