#pragma once

//
// Shared plumbing for the experiment drivers: deterministic CSV output,
// key=value config files, and per-run manifests.
//

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace ofem {

// fixed %.12g formatting so identical configs reproduce byte-identical files
std::string csv_num(double v);
std::string csv_num(int v);

class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

private:
  std::ofstream out_;
  size_t n_cols_;
};

// one `key=value` per line; '#' starts a comment; blank lines skipped
std::map<std::string, std::string> read_config_file(const std::string& path);

std::string version_string();

// manifest.json next to the run outputs: config, version, wall-clock seconds
void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& config,
                    double wall_seconds);

} // namespace ofem
