#include "tgf/report.hpp"

#include <fstream>
#include <stdexcept>

namespace tgf {

const char* version_string() { return "tgf 0.1.0"; }

nlohmann::json report_skeleton(const std::string& kind, const std::string& config_json,
                               std::uint64_t config_hash) {
  nlohmann::json j;
  j["kind"] = kind;
  j["version"] = version_string();
  j["config_hash"] = config_hash;
  j["config"] = nlohmann::json::parse(config_json);
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? ',' : '\n');
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out << r[i] << (i + 1 < r.size() ? ',' : '\n');
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace tgf
