#pragma once

#include <string>

#include <json.hpp>

#include "paralab/enhancement.hpp"

namespace paralab {

std::string hex64(std::uint64_t v);

// Directory with manifest.json and one snapshot per component
// (X, X12, X122, X1222, X124, QgradX). The manifest records provenance,
// constants, grid metadata and a content hash per snapshot.
nlohmann::json write_enhancement_bundle(const std::string& dir, const KpzEnhancement& e);
KpzEnhancement read_enhancement_bundle(const std::string& dir);

// Write a snapshot and return its manifest entry {file, fnv1a}.
nlohmann::json write_tracked_snapshot(const std::string& dir, const std::string& name,
                                      const SpaceTimeField& u);

}  // namespace paralab
