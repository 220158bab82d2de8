#pragma once

// key=value configuration files. Blank lines and '#' comments are ignored.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace arnold {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(const std::string& text);
ConfigMap read_config(const std::string& path);
// Throws ConfigError naming the first key outside `allowed`.
void reject_unknown(const ConfigMap& cfg, const std::vector<std::string>& allowed);

double config_double(const std::string& key, const std::string& value);
long config_long(const std::string& key, const std::string& value);
// Comma-separated reals, e.g. "1,0.5".
std::vector<double> parse_real_list(const std::string& key, const std::string& value);

}  // namespace arnold
