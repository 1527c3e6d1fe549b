/// @file snapshot.hpp
/// @brief Binary snapshot format.
///
/// Layout, all little-endian:
///   "CVEF1\n" | u32 Nx Ny Nz | f64 Lx Ly Lz | f64 t |
///   f64 rho[N] | f64 u[3N] | f64 E[9N]
/// with N = Nx*Ny*Nz, component-major payload and index (iz*Ny + iy)*Nx + ix.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cvf/state.hpp"

namespace cvf {

inline constexpr std::size_t kSnapshotHeaderBytes = 6 + 3 * 4 + 3 * 8 + 8;

std::vector<std::uint8_t> encode_snapshot(const FlowState& state);

/// Throws FormatError on a bad magic, an invalid grid or a length mismatch.
FlowState decode_snapshot(std::span<const std::uint8_t> bytes);

/// Throws IoError naming the path.
void write_snapshot(const std::filesystem::path& path, const FlowState& state);
FlowState read_snapshot(const std::filesystem::path& path);

}  // namespace cvf
