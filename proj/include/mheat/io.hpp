#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "mheat/slice.hpp"

namespace mheat {

// CSV writer: one provenance comment line (tool version, config hash, seed),
// then a header row, then data rows. Values are printed with enough digits to
// round-trip doubles, so identical runs produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& provenance);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);
  static std::string num(int v);

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

// FNV-1a hash of a file's bytes; used as the config fingerprint in CSV
// provenance lines.
unsigned long long fnv1a_file(const std::string& path);

// Legacy-VTK structured-points snapshot of a slice: phi values and the active
// mask on the background grid.
void write_vtk_slice(const std::string& path, const LevelSetField& field,
                     const DomainSlice& slice);

}  // namespace mheat
