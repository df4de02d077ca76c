#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cop/money.hpp"

namespace cop {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance for one command invocation. Every emitted artifact embeds
/// hash_hex() so outputs can be traced back to their exact inputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> config_paths;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::map<std::string, std::string> parameters;
  std::string tool_version = kToolVersion;
  std::uint64_t content_hash = 0;

  /// FNV-1a over the bytes of every config path (files and directory trees,
  /// in sorted order) plus the parameter map.
  void compute_content_hash();
  std::string hash_hex() const;

  /// Writes manifest.json into output_dir.
  void write() const;
};

/// Money for aligned text tables: 4 significant figures.
std::string display_money(const ExtMoney& value);

/// Full-precision CSV field.
std::string csv_money(const ExtMoney& value);

/// Writes a CSV with a `# manifest_hash=...` provenance header line.
void write_csv(const std::string& path, const std::string& manifest_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Renders an aligned text table to stdout.
void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

std::vector<std::string> split_csv_list(const std::string& arg);

}  // namespace cop
