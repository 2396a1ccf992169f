#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pbcs/cube.hpp"
#include "pbcs/sensing.hpp"

namespace pbcs {

// Sample interleaving of headerless raw cubes, matching how the CCSDS raw
// test scenes are distributed.
enum class RawLayout { bil, bsq, bip };
enum class RawDtype { i16, u16 };
enum class Endianness { little, big };

// Half-open 0-based sample window.
struct CropWindow {
  Index row0 = 0, row1 = 0;
  Index col0 = 0, col1 = 0;
  Index band0 = 0, band1 = 0;
};

struct RawCubeSpec {
  RawLayout layout = RawLayout::bsq;
  RawDtype dtype = RawDtype::u16;
  Endianness endian = Endianness::little;
  Index n_rows = 0;
  Index n_cols = 0;
  Index n_bands = 0;
  std::optional<CropWindow> crop;
};

// Reads a headerless raw cube, widening samples to double. The file must be
// at least n_rows*n_cols*n_bands*2 bytes; anything shorter is rejected.
DataCube read_raw_cube(const std::string& path, const RawCubeSpec& spec);

// Writes integer-valued samples as raw 16-bit data. Samples must round-trip
// through the chosen dtype exactly; out-of-range values are an error.
void write_raw_cube(const DataCube& cube, const std::string& path,
                    RawLayout layout, RawDtype dtype, Endianness endian);

// Real-valued estimates: BSQ float64 little-endian, headerless.
void write_estimate_cube(const DataCube& cube, const std::string& path);

DataCube crop_cube(const DataCube& cube, const CropWindow& w);

// Measurement file, format version 1. Little-endian layout:
//   "PBCS" | version u16 | vectorization tag u8 | dtype tag u8
//   | n_rows u32 | n_cols u32 | n_bands u32 | m u32 | master_seed u64
//   | y row-major float64
// The header alone determines how to regenerate every sensing matrix.
inline constexpr std::uint16_t kMeasurementFormatVersion = 1;
inline constexpr std::uint8_t kVectorizationBandMajor = 1;
inline constexpr std::uint8_t kPayloadFloat64LE = 1;

void write_measurements(const MeasurementSet& ms, const std::string& path);
MeasurementSet read_measurements(const std::string& path);

// Synthetic stand-in for the raw scenes: rows are piecewise-constant x-lambda
// mosaics (contiguous spans along x, constant across bands) whose span values
// drift smoothly from row to row. The mean relative row-to-row change is
// bounded by `drift`.
struct SyntheticCubeSpec {
  Index n_rows = 16;
  Index n_cols = 16;
  Index n_bands = 8;
  std::uint64_t seed = 0;
  int regions_per_row = 3;
  double drift = 0.05;
  double amp_min = 100.0;
  double amp_max = 4000.0;

  void validate() const;
};

DataCube generate_synthetic_cube(const SyntheticCubeSpec& spec);

// 8-bit grayscale PGM of one band (N_R x N_C image), min-max scaled per band.
// A constant band maps to mid-gray.
void export_band_image(const DataCube& cube, Index band, const std::string& path);

}  // namespace pbcs
