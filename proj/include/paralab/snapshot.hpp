#pragma once

#include <cstdint>
#include <string>

#include "paralab/spacetime.hpp"

namespace paralab {

// Binary layout, little endian:
//   char[8] magic "PLSNAP01" | u32 version | i32 d | i32 N | i32 components
//   | i32 time-grid length | f64 T | complex<f64> coefficients
// Coefficients are frame-major, then component, then wavevector in the
// lattice storage order. A single field is stored with length 1 and T = 0.
struct SnapshotHeader {
  std::uint32_t version = 1;
  int d = 0, n = 0, comps = 0, nt = 0;
  double T = 0.0;
};

void write_snapshot(const std::string& path, const SpaceTimeField& u);
void write_snapshot(const std::string& path, const FourierField& u);
SnapshotHeader read_snapshot_header(const std::string& path);
SpaceTimeField read_snapshot_series(const std::string& path);
FourierField read_snapshot_field(const std::string& path);

// Raw bytes of the encoding (used for content hashes in manifests).
std::string encode_snapshot(const SpaceTimeField& u);

}  // namespace paralab
