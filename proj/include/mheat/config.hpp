#pragma once

#include <map>
#include <string>
#include <vector>

namespace mheat {

// Flat key = value configuration. Values are scalars (number, word, bool) or
// bracketed lists: key = [1, 2, 3]. '#' starts a comment. Keys are unique;
// redefining one is an error.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

 private:
  std::map<std::string, std::string> scalars_;
  std::map<std::string, std::vector<double>> lists_;
};

}  // namespace mheat
