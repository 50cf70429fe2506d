#include <ofem/experiment.hpp>

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

#ifndef OFEM_GIT_HASH
#define OFEM_GIT_HASH "unversioned"
#endif

namespace ofem {

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_num(int v) { return std::to_string(v); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_cols_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open CSV for writing: " + path);
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw std::logic_error("CSV row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i)
    out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

std::string version_string() { return std::string("ofem 0.1.0+") + OFEM_GIT_HASH; }

void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& config,
                    double wall_seconds) {
  nlohmann::json j;
  j["version"] = version_string();
  j["wall_seconds"] = wall_seconds;
  j["config"] = config;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

} // namespace ofem
