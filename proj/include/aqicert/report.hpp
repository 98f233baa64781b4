#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "aqicert/graph.hpp"
#include "aqicert/rational.hpp"

namespace aqicert {

/// Insertion-ordered JSON so serialized reports are byte-stable.
using Json = nlohmann::ordered_json;

/// Outcome of one certification step: verdict, a human-readable reason and
/// structured details (witnesses, per-block values).
struct CertificationReport {
  std::string name;
  bool passed = false;
  std::string message;
  Json details = Json::object();

  Json to_json() const;
};

Json to_json(const Rational& q);
Json to_json(const PointSet& points);
/// Doubles are written with 12 significant digits; NaN and infinities as strings.
Json number(double v);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace aqicert
