#pragma once
// Report emission: one report.json per experiment (config echo, hash, code
// version, results) plus CSV matrices for plotting. Reports contain no wall
// clock timestamps, so identical (config, seed) runs produce byte-identical
// files except for the separate timing block.

#include <string>
#include <vector>

#include <json.hpp>

namespace tgf {

const char* version_string();

// report skeleton with config echo, hash and version filled in
nlohmann::json report_skeleton(const std::string& kind, const std::string& config_json,
                               std::uint64_t config_hash);

void write_text_file(const std::string& path, const std::string& text);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace tgf
