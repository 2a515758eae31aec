#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "couette/spectral_field.hpp"

namespace couette {

/// Flat binary snapshot: header of four doubles (Nx, Ny, Lx, Ly), then the
/// coefficients as row-major (re, im) pairs. Metadata travels in a JSON
/// sidecar at <path>.json.
void write_snapshot(const std::filesystem::path& path, const SpectralField& field,
                    const nlohmann::json& metadata = nlohmann::json::object());

SpectralField read_snapshot(const std::filesystem::path& path);
nlohmann::json read_snapshot_metadata(const std::filesystem::path& path);

/// Locale-independent shortest-roundtrip formatting used by every text export,
/// so identical data always serializes to identical bytes.
std::string format_double(double v);

/// CSV with a header row; every cell formatted via format_double.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace couette
