#include "paralab/bundle.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "paralab/errors.hpp"
#include "paralab/rng.hpp"
#include "paralab/snapshot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace paralab {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json write_tracked_snapshot(const std::string& dir, const std::string& name, const SpaceTimeField& u) {
  const std::string bytes = encode_snapshot(u);
  const std::string file = name + ".psnap";
  std::ofstream os(fs::path(dir) / file, std::ios::binary);
  if (!os) throw IoError("cannot write " + (fs::path(dir) / file).string());
  os.write(bytes.data(), std::streamsize(bytes.size()));
  return {{"file", file}, {"fnv1a", hex64(fnv1a_bytes(bytes.data(), bytes.size()))}};
}

json write_enhancement_bundle(const std::string& dir, const KpzEnhancement& e) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create bundle directory " + dir);
  json comps;
  comps["X"] = write_tracked_snapshot(dir, "X", e.X);
  comps["X12"] = write_tracked_snapshot(dir, "X12", e.X12);
  comps["X122"] = write_tracked_snapshot(dir, "X122", e.X122);
  comps["X1222"] = write_tracked_snapshot(dir, "X1222", e.X1222);
  comps["X124"] = write_tracked_snapshot(dir, "X124", e.X124);
  comps["QgradX"] = write_tracked_snapshot(dir, "QgradX", e.QgradX);
  json man = {
      {"schema_version", 1},
      {"kind", "kpz_enhancement"},
      {"seed", e.seed},
      {"mollifier", e.mollifier},
      {"epsilon", e.eps},
      {"coupling", e.lambda},
      {"c12", e.c12},
      {"c124", e.c124},
      {"a", e.a},
      {"b", e.b},
      {"regularity", {{"rho", e.rho}, {"r", e.r}}},
      {"grid", {{"d", e.lattice().d}, {"N", e.lattice().n}, {"T", e.grid().T}, {"M", e.grid().M}}},
      {"components", comps},
  };
  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw IoError("cannot write manifest in " + dir);
  os << man.dump(2) << "\n";
  return man;
}

KpzEnhancement read_enhancement_bundle(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  std::ifstream is(mpath);
  if (!is) throw IoError("missing enhancement bundle: " + mpath.string());
  json man;
  try {
    is >> man;
  } catch (const json::exception& ex) {
    throw IoError("unreadable manifest " + mpath.string() + ": " + ex.what());
  }
  if (man.value("kind", "") != "kpz_enhancement") throw IoError(mpath.string() + ": not an enhancement bundle");
  KpzEnhancement e;
  auto load = [&](const char* name) {
    return read_snapshot_series((fs::path(dir) / man.at("components").at(name).at("file").get<std::string>()).string());
  };
  try {
    e.X = load("X");
    e.X12 = load("X12");
    e.X122 = load("X122");
    e.X1222 = load("X1222");
    e.X124 = load("X124");
    e.QgradX = load("QgradX");
    e.seed = man.at("seed").get<std::uint64_t>();
    e.mollifier = man.at("mollifier").get<std::string>();
    e.eps = man.at("epsilon").get<double>();
    e.lambda = man.at("coupling").get<double>();
    e.c12 = man.at("c12").get<double>();
    e.c124 = man.at("c124").get<double>();
    e.a = man.at("a").get<double>();
    e.b = man.at("b").get<double>();
    e.rho = man.at("regularity").at("rho").get<double>();
    e.r = man.at("regularity").at("r").get<double>();
  } catch (const json::exception& ex) {
    throw IoError(mpath.string() + ": " + ex.what());
  }
  e.Q = build_Q(e.X);
  return e;
}

}  // namespace paralab
