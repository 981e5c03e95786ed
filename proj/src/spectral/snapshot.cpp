#include "paralab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "paralab/errors.hpp"

namespace paralab {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'P', 'L', 'S', 'N', 'A', 'P', '0', '1'};

template <class T>
void put(std::string& s, const T& v) {
  s.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::string encode(const SnapshotHeader& h, const std::vector<const FourierField*>& frames) {
  std::string s(kMagic, 8);
  put(s, h.version);
  put(s, std::int32_t(h.d));
  put(s, std::int32_t(h.n));
  put(s, std::int32_t(h.comps));
  put(s, std::int32_t(h.nt));
  put(s, h.T);
  for (const auto* f : frames)
    s.append(reinterpret_cast<const char*>(f->data().data()), f->data().size() * sizeof(cplx));
  return s;
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write(bytes.data(), std::streamsize(bytes.size()));
  if (!os) throw IoError("write failed: " + path);
}

SnapshotHeader read_header(std::istream& is, const std::string& path) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError(path + ": not a field snapshot");
  SnapshotHeader h;
  std::int32_t v[4];
  is.read(reinterpret_cast<char*>(&h.version), sizeof(h.version));
  is.read(reinterpret_cast<char*>(v), sizeof(v));
  is.read(reinterpret_cast<char*>(&h.T), sizeof(h.T));
  if (!is) throw IoError(path + ": truncated header");
  if (h.version != 1) throw IoError(path + ": unsupported snapshot version");
  h.d = v[0];
  h.n = v[1];
  h.comps = v[2];
  h.nt = v[3];
  if (h.comps < 1 || h.nt < 1) throw IoError(path + ": bad header");
  return h;
}

}  // namespace

std::string encode_snapshot(const SpaceTimeField& u) {
  SnapshotHeader h{1, u.lattice().d, u.lattice().n, u.comps(), int(u.frames.size()), u.grid.T};
  std::vector<const FourierField*> frames;
  for (const auto& f : u.frames) frames.push_back(&f);
  return encode(h, frames);
}

void write_snapshot(const std::string& path, const SpaceTimeField& u) {
  write_bytes(path, encode_snapshot(u));
}

void write_snapshot(const std::string& path, const FourierField& u) {
  SnapshotHeader h{1, u.lattice().d, u.lattice().n, u.comps(), 1, 0.0};
  write_bytes(path, encode(h, {&u}));
}

SnapshotHeader read_snapshot_header(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_header(is, path);
}

static std::vector<FourierField> read_frames(const std::string& path, SnapshotHeader& h) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  h = read_header(is, path);
  Lattice lat{h.d, h.n};
  try {
    validate(lat);
  } catch (const InvalidArgument& e) {
    throw IoError(path + ": " + e.what());
  }
  std::vector<FourierField> frames;
  for (int m = 0; m < h.nt; ++m) {
    FourierField f(lat, h.comps);
    is.read(reinterpret_cast<char*>(f.data().data()), std::streamsize(f.data().size() * sizeof(cplx)));
    if (!is) throw IoError(path + ": truncated coefficient block");
    frames.push_back(std::move(f));
  }
  return frames;
}

SpaceTimeField read_snapshot_series(const std::string& path) {
  SnapshotHeader h;
  auto frames = read_frames(path, h);
  if (h.nt < 3) throw IoError(path + ": not a space-time series");
  SpaceTimeField u;
  u.grid = TimeGrid{h.T, h.nt - 1};
  u.frames = std::move(frames);
  return u;
}

FourierField read_snapshot_field(const std::string& path) {
  SnapshotHeader h;
  auto frames = read_frames(path, h);
  return frames.front();
}

}  // namespace paralab
