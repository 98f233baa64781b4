#include "aqicert/report.hpp"

#include <cmath>
#include <cstdio>

namespace aqicert {

Json CertificationReport::to_json() const {
  Json j;
  j["name"] = name;
  j["passed"] = passed;
  j["message"] = message;
  j["details"] = details;
  return j;
}

Json to_json(const Rational& q) { return q.str(); }

Json to_json(const PointSet& points) {
  Json j = Json::array();
  for (auto p : points) j.push_back(p);
  return j;
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Round-trip through a fixed format so the text never depends on locale or
  // on the JSON library's shortest-representation choice.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return Json::parse(buf);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace aqicert
