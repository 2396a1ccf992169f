#include "pbcs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <vector>

#include "pbcs/errors.hpp"
#include "pbcs/rng.hpp"

namespace pbcs {

namespace {

void put_bytes(std::string& out, const void* p, std::size_t n) {
  out.append(static_cast<const char*>(p), n);
}

void put_u16le(std::string& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>(v >> 8)};
  put_bytes(out, b, 2);
}

void put_u32le(std::string& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  put_bytes(out, b, 4);
}

void put_u64le(std::string& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  put_bytes(out, b, 8);
}

void put_f64le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64le(out, bits);
}

std::uint16_t get_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32le(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64le(const unsigned char* p) {
  const std::uint64_t bits = get_u64le(p);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> data(static_cast<std::size_t>(size));
  if (size > 0) in.read(reinterpret_cast<char*>(data.data()), size);
  if (!in) throw IoError("failed reading " + path);
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

// Byte offset (in samples) of cube sample (i, k, j) for each interleaving.
Index raw_sample_index(RawLayout layout, Index i, Index k, Index j,
                       Index n_rows, Index n_cols, Index n_bands) {
  switch (layout) {
    case RawLayout::bsq:
      return (j * n_rows + i) * n_cols + k;
    case RawLayout::bil:
      return (i * n_bands + j) * n_cols + k;
    case RawLayout::bip:
    default:
      return (i * n_cols + k) * n_bands + j;
  }
}

double decode_sample(const unsigned char* p, RawDtype dtype, Endianness endian) {
  std::uint16_t raw = endian == Endianness::little
                          ? get_u16le(p)
                          : static_cast<std::uint16_t>((p[0] << 8) | p[1]);
  if (dtype == RawDtype::u16) return static_cast<double>(raw);
  return static_cast<double>(static_cast<std::int16_t>(raw));
}

void encode_sample(double v, RawDtype dtype, Endianness endian, std::string& out) {
  const double r = std::rint(v);
  if (r != v) throw DataError("write_raw_cube: non-integer sample " + std::to_string(v));
  std::uint16_t raw;
  if (dtype == RawDtype::u16) {
    if (r < 0 || r > 65535) throw DataError("write_raw_cube: sample out of u16 range");
    raw = static_cast<std::uint16_t>(r);
  } else {
    if (r < -32768 || r > 32767) throw DataError("write_raw_cube: sample out of i16 range");
    raw = static_cast<std::uint16_t>(static_cast<std::int16_t>(r));
  }
  if (endian == Endianness::little) {
    out.push_back(static_cast<char>(raw & 0xFF));
    out.push_back(static_cast<char>(raw >> 8));
  } else {
    out.push_back(static_cast<char>(raw >> 8));
    out.push_back(static_cast<char>(raw & 0xFF));
  }
}

void check_crop(const CropWindow& w, Index n_rows, Index n_cols, Index n_bands) {
  const bool ok = w.row0 >= 0 && w.row0 < w.row1 && w.row1 <= n_rows &&
                  w.col0 >= 0 && w.col0 < w.col1 && w.col1 <= n_cols &&
                  w.band0 >= 0 && w.band0 < w.band1 && w.band1 <= n_bands;
  if (!ok) throw ConfigError("crop window outside cube bounds");
}

std::uint32_t to_u32(Index v, const char* what) {
  if (v < 0 || v > static_cast<Index>(std::numeric_limits<std::uint32_t>::max()))
    throw ConfigError(std::string(what) + " does not fit the file format");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

DataCube read_raw_cube(const std::string& path, const RawCubeSpec& spec) {
  if (spec.n_rows <= 0 || spec.n_cols <= 0 || spec.n_bands <= 0)
    throw ConfigError("read_raw_cube: cube shape must be positive");
  const std::vector<unsigned char> data = read_file(path);
  const Index total = spec.n_rows * spec.n_cols * spec.n_bands;
  if (static_cast<Index>(data.size()) < total * 2)
    throw FormatError("read_raw_cube: " + path + " holds " +
                      std::to_string(data.size()) + " bytes, need " +
                      std::to_string(total * 2));

  CropWindow w{0, spec.n_rows, 0, spec.n_cols, 0, spec.n_bands};
  if (spec.crop) {
    w = *spec.crop;
    check_crop(w, spec.n_rows, spec.n_cols, spec.n_bands);
  }

  DataCube cube(w.row1 - w.row0, w.col1 - w.col0, w.band1 - w.band0);
  for (Index i = w.row0; i < w.row1; ++i)
    for (Index j = w.band0; j < w.band1; ++j)
      for (Index k = w.col0; k < w.col1; ++k) {
        const Index s = raw_sample_index(spec.layout, i, k, j, spec.n_rows,
                                         spec.n_cols, spec.n_bands);
        cube(i - w.row0, k - w.col0, j - w.band0) =
            decode_sample(data.data() + 2 * s, spec.dtype, spec.endian);
      }
  return cube;
}

void write_raw_cube(const DataCube& cube, const std::string& path,
                    RawLayout layout, RawDtype dtype, Endianness endian) {
  std::string out;
  out.reserve(static_cast<std::size_t>(cube.sample_count()) * 2);
  // Emit in file order so the sample loop is a straight append.
  for (Index s = 0; s < cube.sample_count(); ++s) {
    Index i, k, j;
    const Index nr = cube.n_rows(), nc = cube.n_cols(), nb = cube.n_bands();
    switch (layout) {
      case RawLayout::bsq:
        j = s / (nr * nc); i = (s / nc) % nr; k = s % nc;
        break;
      case RawLayout::bil:
        i = s / (nb * nc); j = (s / nc) % nb; k = s % nc;
        break;
      case RawLayout::bip:
      default:
        i = s / (nc * nb); k = (s / nb) % nc; j = s % nb;
        break;
    }
    encode_sample(cube(i, k, j), dtype, endian, out);
  }
  write_file(path, out);
}

void write_estimate_cube(const DataCube& cube, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(cube.sample_count()) * 8);
  for (Index j = 0; j < cube.n_bands(); ++j)
    for (Index i = 0; i < cube.n_rows(); ++i)
      for (Index k = 0; k < cube.n_cols(); ++k) put_f64le(out, cube(i, k, j));
  write_file(path, out);
}

DataCube crop_cube(const DataCube& cube, const CropWindow& w) {
  check_crop(w, cube.n_rows(), cube.n_cols(), cube.n_bands());
  DataCube out(w.row1 - w.row0, w.col1 - w.col0, w.band1 - w.band0);
  for (Index i = w.row0; i < w.row1; ++i)
    for (Index j = w.band0; j < w.band1; ++j)
      for (Index k = w.col0; k < w.col1; ++k)
        out(i - w.row0, k - w.col0, j - w.band0) = cube(i, k, j);
  return out;
}

void write_measurements(const MeasurementSet& ms, const std::string& path) {
  ms.validate();
  std::string out;
  out.reserve(32 + static_cast<std::size_t>(ms.n_rows * ms.config.m) * 8);
  out.append("PBCS");
  put_u16le(out, kMeasurementFormatVersion);
  out.push_back(static_cast<char>(kVectorizationBandMajor));
  out.push_back(static_cast<char>(kPayloadFloat64LE));
  put_u32le(out, to_u32(ms.n_rows, "n_rows"));
  put_u32le(out, to_u32(ms.config.n_cols, "n_cols"));
  put_u32le(out, to_u32(ms.config.n_bands, "n_bands"));
  put_u32le(out, to_u32(ms.config.m, "m"));
  put_u64le(out, ms.config.master_seed);
  for (Index i = 0; i < ms.n_rows; ++i)
    for (Index c = 0; c < ms.config.m; ++c) put_f64le(out, ms.y(i, c));
  write_file(path, out);
}

MeasurementSet read_measurements(const std::string& path) {
  const std::vector<unsigned char> data = read_file(path);
  if (data.size() < 32) throw FormatError("measurement file truncated: " + path);
  if (std::memcmp(data.data(), "PBCS", 4) != 0)
    throw FormatError("bad magic, not a measurement file: " + path);
  const std::uint16_t version = get_u16le(data.data() + 4);
  if (version != kMeasurementFormatVersion)
    throw FormatError("unsupported measurement format version " + std::to_string(version));
  if (data[6] != kVectorizationBandMajor)
    throw FormatError("unknown vectorization convention tag");
  if (data[7] != kPayloadFloat64LE) throw FormatError("unknown payload dtype tag");

  MeasurementSet ms;
  ms.n_rows = static_cast<Index>(get_u32le(data.data() + 8));
  ms.config.n_cols = static_cast<Index>(get_u32le(data.data() + 12));
  ms.config.n_bands = static_cast<Index>(get_u32le(data.data() + 16));
  ms.config.m = static_cast<Index>(get_u32le(data.data() + 20));
  ms.config.master_seed = get_u64le(data.data() + 24);
  ms.config.validate();  // rejects m >= n_cols*n_bands
  if (ms.n_rows <= 0) throw FormatError("measurement file has no rows");

  const std::size_t expected =
      32 + static_cast<std::size_t>(ms.n_rows) * static_cast<std::size_t>(ms.config.m) * 8;
  if (data.size() != expected)
    throw FormatError("measurement file truncated: " + path + " (" +
                      std::to_string(data.size()) + " of " +
                      std::to_string(expected) + " bytes)");

  ms.y.resize(ms.n_rows, ms.config.m);
  const unsigned char* p = data.data() + 32;
  for (Index i = 0; i < ms.n_rows; ++i)
    for (Index c = 0; c < ms.config.m; ++c, p += 8) ms.y(i, c) = get_f64le(p);
  ms.validate();
  return ms;
}

void SyntheticCubeSpec::validate() const {
  if (n_rows <= 0 || n_cols <= 0 || n_bands <= 0)
    throw ConfigError("SyntheticCubeSpec: shape must be positive");
  if (regions_per_row < 1 || regions_per_row > n_cols)
    throw ConfigError("SyntheticCubeSpec: regions_per_row must be in [1, n_cols]");
  if (drift < 0) throw ConfigError("SyntheticCubeSpec: drift must be nonnegative");
  if (!(amp_min > 0) || amp_max < amp_min)
    throw ConfigError("SyntheticCubeSpec: need 0 < amp_min <= amp_max");
}

DataCube generate_synthetic_cube(const SyntheticCubeSpec& spec) {
  spec.validate();
  const std::uint64_t key_cuts = rng::stream_key(spec.seed, 0);
  const std::uint64_t key_values = rng::stream_key(spec.seed, 1);
  const std::uint64_t key_phases = rng::stream_key(spec.seed, 2);

  // Region boundaries: regions_per_row contiguous spans along x, fixed for
  // the whole cube. Cut points are a seeded sample without replacement.
  std::vector<Index> candidates(spec.n_cols - 1);
  for (Index c = 0; c < spec.n_cols - 1; ++c) candidates[c] = c + 1;
  const int n_cuts = spec.regions_per_row - 1;
  for (int c = 0; c < n_cuts; ++c) {
    const std::size_t remaining = candidates.size() - static_cast<std::size_t>(c);
    const std::size_t pick =
        c + static_cast<std::size_t>(rng::uniform_at(key_cuts, c) * static_cast<double>(remaining));
    std::swap(candidates[c], candidates[std::min(pick, candidates.size() - 1)]);
  }
  std::vector<Index> cuts(candidates.begin(), candidates.begin() + n_cuts);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(spec.n_cols);

  std::vector<double> base(spec.regions_per_row), phase(spec.regions_per_row);
  for (int r = 0; r < spec.regions_per_row; ++r) {
    base[r] = spec.amp_min + rng::uniform_at(key_values, r) * (spec.amp_max - spec.amp_min);
    phase[r] = 2.0 * std::numbers::pi * rng::uniform_at(key_phases, r);
  }

  // Modulation amplitude a with a/(1-a) * 2 sin(pi/N_R) <= drift * 2pi/N_R
  // keeps every row-to-row relative change at or below `drift`.
  const double d = spec.drift * static_cast<double>(spec.n_rows) / (2.0 * std::numbers::pi);
  const double a = std::min(d / (1.0 + d), 0.45);

  DataCube cube(spec.n_rows, spec.n_cols, spec.n_bands);
  for (Index i = 0; i < spec.n_rows; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(spec.n_rows);
    Index k = 0;
    for (int r = 0; r < spec.regions_per_row; ++r) {
      const double v = base[r] * (1.0 + a * std::sin(theta + phase[r]));
      for (; k < cuts[r]; ++k)
        for (Index j = 0; j < spec.n_bands; ++j) cube(i, k, j) = v;
    }
  }
  return cube;
}

void export_band_image(const DataCube& cube, Index band, const std::string& path) {
  if (band < 0 || band >= cube.n_bands())
    throw RangeError("export_band_image: band " + std::to_string(band) +
                     " outside [0, " + std::to_string(cube.n_bands()) + ")");
  double lo = cube(0, 0, band), hi = lo;
  for (Index i = 0; i < cube.n_rows(); ++i)
    for (Index k = 0; k < cube.n_cols(); ++k) {
      lo = std::min(lo, cube(i, k, band));
      hi = std::max(hi, cube(i, k, band));
    }

  std::string out = "P5\n" + std::to_string(cube.n_cols()) + " " +
                    std::to_string(cube.n_rows()) + "\n255\n";
  for (Index i = 0; i < cube.n_rows(); ++i)
    for (Index k = 0; k < cube.n_cols(); ++k) {
      unsigned char g = 128;
      if (hi > lo)
        g = static_cast<unsigned char>(
            std::lround((cube(i, k, band) - lo) / (hi - lo) * 255.0));
      out.push_back(static_cast<char>(g));
    }
  write_file(path, out);
}

}  // namespace pbcs
