#include "cop/cli_support.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cop/errors.hpp"

namespace cop {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void hash_bytes(std::uint64_t& h, const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
}

void hash_file(std::uint64_t& h, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    hash_bytes(h, buf, static_cast<std::size_t>(in.gcount()));
  }
}

}  // namespace

void RunManifest::compute_content_hash() {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : config_paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(p))
        if (entry.is_regular_file()) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const std::string name = f.string();
        hash_bytes(h, name.data(), name.size());
        hash_file(h, f);
      }
    } else if (fs::is_regular_file(p)) {
      hash_bytes(h, p.data(), p.size());
      hash_file(h, p);
    }
  }
  for (const auto& [k, v] : parameters) {
    hash_bytes(h, k.data(), k.size());
    hash_bytes(h, v.data(), v.size());
  }
  hash_bytes(h, command.data(), command.size());
  content_hash = h;
}

std::string RunManifest::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(content_hash));
  return buf;
}

void RunManifest::write() const {
  fs::create_directories(output_dir);
  json j;
  j["command"] = command;
  j["config_paths"] = config_paths;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["parameters"] = parameters;
  j["tool_version"] = tool_version;
  j["manifest_hash"] = hash_hex();
  std::ofstream out(fs::path(output_dir) / "manifest.json");
  out << j.dump(2) << "\n";
}

std::string display_money(const ExtMoney& value) {
  if (value.is_infinite()) return "inf";
  const double v = value.finite().to_double();
  if (v == 0) return "0";
  std::ostringstream oss;
  oss.precision(4);
  // %.4g-style: scientific for very small/large, fixed otherwise
  const double mag = std::fabs(v);
  if (mag >= 1e-4 && mag < 1e6)
    oss << std::defaultfloat << v;
  else
    oss << std::scientific << v;
  return oss.str();
}

std::string csv_money(const ExtMoney& value) { return value.to_string(); }

void write_csv(const std::string& path, const std::string& manifest_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "# manifest_hash=" << manifest_hash << "\n";
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        out << '"';
        for (char c : row[i]) {
          if (c == '"') out << '"';
          out << c;
        }
        out << '"';
      } else {
        out << row[i];
      }
    }
    out << "\n";
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
}

void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) widths[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::cout << (i ? "  " : "") << row[i] << std::string(widths[i] - row[i].size(), ' ');
    std::cout << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

std::vector<std::string> split_csv_list(const std::string& arg) {
  std::vector<std::string> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace cop
