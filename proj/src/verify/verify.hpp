#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace paralab::verify {

using Json = nlohmann::ordered_json;

struct Check {
  std::string id;
  std::string title;
  bool pass = false;
  Json measured = Json::object();
  Json bounds = Json::object();
  std::string note;
};

inline constexpr int kCriteria = 10;

// Acceptance criterion k in 1..10 at full scale.
Check acceptance(int k);
const char* acceptance_title(int k);

// Regression suites: bony, schauder, chaos, constants, consistency, girsanov.
const std::vector<std::string>& suite_names();
std::vector<Check> run_suite(const std::string& name);  // InvalidArgument for unknown names

Json to_json(const Check& c);
Json to_json(const std::vector<Check>& cs);

}  // namespace paralab::verify
