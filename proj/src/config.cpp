#include "mheat/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mheat/errors.hpp"

namespace mheat {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw argument_error("config: key '" + key + "' is not a number: " + s);
  }
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw argument_error("config: line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw argument_error("config: line " + std::to_string(lineno) + ": empty key or value");
    if (cfg.scalars_.count(key) || cfg.lists_.count(key))
      throw argument_error("config: duplicate key '" + key + "'");
    if (value.front() == '[') {
      if (value.back() != ']')
        throw argument_error("config: line " + std::to_string(lineno) + ": unterminated list");
      std::vector<double> vals;
      std::string body = value.substr(1, value.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        vals.push_back(to_double(item, key));
      }
      cfg.lists_[key] = std::move(vals);
    } else {
      cfg.scalars_[key] = value;
    }
  }
  return cfg;
}

bool RunConfig::has(const std::string& key) const {
  return scalars_.count(key) > 0 || lists_.count(key) > 0;
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) throw argument_error("config: missing key '" + key + "'");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return to_double(get_string(key), key);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : to_double(it->second, key);
}

int RunConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (v != i) throw argument_error("config: key '" + key + "' is not an integer");
  return i;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw argument_error("config: key '" + key + "' is not a boolean");
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  const auto it = lists_.find(key);
  if (it == lists_.end()) throw argument_error("config: missing list '" + key + "'");
  return it->second;
}

std::vector<double> RunConfig::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
  const auto it = lists_.find(key);
  return it == lists_.end() ? fallback : it->second;
}

}  // namespace mheat
