#pragma once

#include <string>

#include "tori/flows.hpp"

namespace tori {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr unsigned kIsotopyFormatVersion = 1;

// Binary container: magic, version, JSON header, raw little-endian doubles, crc32.
// Velocities shared between slices are stored once.
void save_isotopy(const Isotopy& phi, const std::string& path);

struct LoadResult {
  Isotopy path;
  int source_n = 0;
  bool resampled = false;
  double roundtrip_error = 0.0;  // max |D - R(R'(D))| on the source grid after resampling
};
// target_n = 0 keeps the stored resolution; otherwise every slice is resampled by cubic interpolation.
LoadResult load_isotopy(const std::string& path, int target_n = 0);

FieldSamples resample_field(const FieldSamples& f, const FlatTorus& target);

}  // namespace tori
