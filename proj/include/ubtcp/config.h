#ifndef UBTCP_CONFIG_H_
#define UBTCP_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ubtcp/simulator.h"

namespace ubtcp {

// Bad configuration: unknown key, malformed value, out-of-range setting.
// The message always names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Setting {
  std::string key;
  std::string value;
  int line = 0;
};

// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
// Throws ConfigError on lines without `=` or with an empty key.
std::vector<Setting> ParseConfigText(std::string_view text);

// Throws ConfigError when the file cannot be read.
std::vector<Setting> LoadConfigFile(const std::filesystem::path& path);

// Throws ConfigError for unknown keys and unparsable values.
void ApplySetting(SimConfig& cfg, std::string_view key, std::string_view value);
void ApplySettings(SimConfig& cfg, const std::vector<Setting>& settings);

// Every accepted key, sorted.
std::vector<std::string> KnownConfigKeys();

// Current value of `key` rendered as config text.
std::string GetSetting(const SimConfig& cfg, std::string_view key);

// "1,2,3" -> {"1","2","3"}; surrounding whitespace trimmed, empties dropped.
std::vector<std::string> SplitList(std::string_view text);

}  // namespace ubtcp

#endif  // UBTCP_CONFIG_H_
