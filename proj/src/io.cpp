#include "mheat/io.hpp"

#include <cstdio>
#include <stdexcept>

#include "mheat/errors.hpp"

namespace mheat {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& provenance)
    : out_(path), ncols_(columns.size()) {
  if (!out_) throw argument_error("cannot open output file: " + path);
  out_ << "# " << provenance << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_)
    throw argument_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
  out_ << "\n";
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::num(int v) { return std::to_string(v); }

unsigned long long fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned long long h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

void write_vtk_slice(const std::string& path, const LevelSetField& field,
                     const DomainSlice& slice) {
  std::ofstream out(path);
  if (!out) throw argument_error("cannot open output file: " + path);
  const auto& g = slice.grid;
  const int nz = g.dim == 2 ? 1 : g.n;
  out << "# vtk DataFile Version 3.0\n";
  out << "morphoheat slice t=" << CsvWriter::num(slice.time) << "\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.n << " " << g.n << " " << nz << "\n";
  out << "ORIGIN " << -g.a << " " << -g.a << " " << (g.dim == 2 ? 0.0 : -g.a) << "\n";
  out << "SPACING " << g.h() << " " << g.h() << " " << g.h() << "\n";
  out << "POINT_DATA " << g.num_nodes() << "\n";
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (i64 idx = 0; idx < g.num_nodes(); ++idx)
    out << CsvWriter::num(field.eval(g.node(idx), slice.time)) << "\n";
  out << "SCALARS mask int 1\nLOOKUP_TABLE default\n";
  for (i64 idx = 0; idx < g.num_nodes(); ++idx)
    out << int(slice.active[static_cast<std::size_t>(idx)]) << "\n";
}

}  // namespace mheat
