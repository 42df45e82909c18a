// SPDX-License-Identifier: Apache-2.0
#include "waistlab/run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "waistlab/errors.hpp"

namespace waistlab {

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["samples"] = samples;
  j["workers"] = workers;
  j["out_dir"] = out_dir;
  j["csv"] = write_csv;
  j["json"] = write_json;
  j["svg"] = write_svg;
  return j;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) return *cli_seed;
  if (const char* env = std::getenv("WAISTLAB_SEED")) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || *env == '-')
      throw ValidationError(std::string("WAISTLAB_SEED is not a decimal unsigned "
                                        "integer: \"") + env + "\"");
    return static_cast<std::uint64_t>(v);
  }
  return kDefaultSeed;
}

std::string prepare_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file not readable: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::size_t first = 0;
  while (first < text.size() &&
         std::isspace(static_cast<unsigned char>(text[first])))
    ++first;
  if (first == text.size() || text[first] != '{') return path;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config file looks like JSON but fails to parse: " +
                          std::string(e.what()));
  }
  if (!doc.is_object())
    throw ValidationError("JSON config must be a flat object of key=value pairs");

  std::ostringstream ini;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object() || value.is_array())
      throw ValidationError("JSON config must be flat; nested value at key \"" +
                            key + "\"");
    if (value.is_string())
      ini << key << '=' << value.get<std::string>() << '\n';
    else
      ini << key << '=' << value.dump() << '\n';
  }

  const auto tmp =
      std::filesystem::temp_directory_path() /
      ("waistlab-config-" +
       std::to_string(std::hash<std::string>{}(std::filesystem::absolute(path).string())) +
       ".ini");
  std::ofstream out(tmp);
  if (!out) throw NumericError("cannot write converted config: " + tmp.string());
  out << ini.str();
  out.close();
  return tmp.string();
}

}  // namespace waistlab
