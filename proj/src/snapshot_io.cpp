#include "couette/snapshot_io.hpp"

#include <cstdio>
#include <fstream>

namespace couette {

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path.string());
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SpectralField& field,
                    const nlohmann::json& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open snapshot for writing");
  const double header[4] = {double(field.grid.modes_x), double(field.grid.modes_y),
                            field.grid.box_length_x, field.grid.box_length_y};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(field.coeffs.data()),
            std::streamsize(sizeof(Complex)) * field.coeffs.size());
  if (!out) io_fail(path, "short write on snapshot");

  std::ofstream side(path.string() + ".json");
  if (!side) io_fail(path, "cannot open snapshot sidecar");
  nlohmann::json meta = metadata;
  meta["modes_x"] = field.grid.modes_x;
  meta["modes_y"] = field.grid.modes_y;
  meta["box_length_x"] = field.grid.box_length_x;
  meta["box_length_y"] = field.grid.box_length_y;
  side << meta.dump(2) << "\n";
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open snapshot");
  double header[4];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) io_fail(path, "snapshot header truncated");
  FrequencyGrid grid(header[2], header[3], int(header[0]), int(header[1]));
  SpectralField field(grid);
  in.read(reinterpret_cast<char*>(field.coeffs.data()),
          std::streamsize(sizeof(Complex)) * field.coeffs.size());
  if (!in) io_fail(path, "snapshot payload truncated");
  return field;
}

nlohmann::json read_snapshot_metadata(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json");
  if (!side) io_fail(path, "cannot open snapshot sidecar");
  return nlohmann::json::parse(side);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open CSV for writing");
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) io_fail(path, "short write on CSV");
}

}  // namespace couette
