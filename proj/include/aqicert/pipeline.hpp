#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqicert/embedding.hpp"
#include "aqicert/generate.hpp"
#include "aqicert/report.hpp"

namespace aqicert {

/// Batch configuration, read from one JSON document.
///
///   {"seed": 7,
///    "family": {"path": "fam.txt"} | {"metrics": ["a.txt", ...]} |
///              {"D": 3, "girths": [12, 16], "sizes": [390, 2400], "strategy": "automatic"},
///    "embedding": {"kind": "identity"} | {"kind": "net-quotient", "radii": [1]} |
///                 {"kind": "file", "path": "emb.txt", "codomain": "fam.txt"},
///    "S": [2, 3], "R": "1", "c": "1/12",
///    "tolerances": {"eig": 1e-9, "isometry": 1e-12, "kernel": 1e-10},
///    "exhaustive_cap": 15, "mu_mode": "automatic",
///    "lemma": {"trials": 1000, "radius": 2},
///    "pipeline": "mr1", "out": "reports"}
///
/// Rationals may be given as JSON numbers or strings such as "1/12".
struct RunConfig {
  std::optional<std::uint64_t> seed;
  Json family = Json::object();
  Json embedding = {{"kind", "identity"}};
  std::vector<Rational> S{Rational(2), Rational(3)};
  Rational R = 1;
  std::optional<Rational> c;
  double tol_eig = 1e-9;
  double tol_isometry = 1e-12;
  double tol_kernel = 1e-10;
  std::size_t exhaustive_cap = 15;
  std::string mu_mode = "automatic";
  std::size_t lemma_trials = 1000;
  std::optional<Rational> lemma_radius;
  std::string pipeline = "all";
  std::string out = ".";

  /// Throws ParseError for malformed JSON or a field of the wrong type.
  static RunConfig from_json(const Json& j);
  static RunConfig from_file(const std::string& path);
  /// The effective configuration, echoed into every report.
  Json to_json() const;
};

struct RunResult {
  /// 0 when every certificate passed, 1 on a certification failure, 2 on an
  /// input or configuration error.
  int exit_code = 0;
  Json bundle;
  /// Output files relative to the output directory, with their contents.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Family described by the config (file, metric list or generator).
SpaceFamily load_family(const RunConfig& cfg);
/// Embedding described by the config over `domain`.
AqiEmbedding load_embedding(const RunConfig& cfg, const SpaceFamily& domain);

RunResult run_generate(const RunConfig& cfg);
RunResult run_verify_aqi(const RunConfig& cfg);
RunResult run_mr1(const RunConfig& cfg);
RunResult run_mr2(const RunConfig& cfg);
RunResult run_lemma(const RunConfig& cfg);
RunResult run_profile(const RunConfig& cfg);
/// Dispatches on cfg.pipeline; "all" runs mr1, mr2 and lemma into one bundle.
RunResult run_pipeline(const RunConfig& cfg);

/// Same pipelines on a family and embedding already in memory.
RunResult run_mr1(const RunConfig& cfg, const SpaceFamily& f, const AqiEmbedding& e);
RunResult run_mr2(const RunConfig& cfg, const SpaceFamily& f, const AqiEmbedding& e);
RunResult run_lemma(const RunConfig& cfg, const SpaceFamily& f);

/// Writes every file of the result under `dir`. Throws IoError.
void write_outputs(const RunResult& r, const std::string& dir);

}  // namespace aqicert
