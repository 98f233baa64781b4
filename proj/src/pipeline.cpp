#include "aqicert/pipeline.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include "aqicert/errors.hpp"
#include "aqicert/io.hpp"
#include "aqicert/isoperimetry.hpp"
#include "aqicert/measures.hpp"
#include "aqicert/roe_ghost.hpp"
#include "aqicert/spectral.hpp"

namespace aqicert {

namespace {

Rational rational_field(const Json& v, const char* name) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParseError(std::string("field '") + name + "' must be a number or a rational string");
}

template <class T>
T field(const Json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + name + "' has the wrong type");
  }
}

GeneratorStrategy parse_strategy(const std::string& s) {
  if (s == "automatic") return GeneratorStrategy::automatic;
  if (s == "configuration") return GeneratorStrategy::configuration;
  if (s == "cyclic_lift" || s == "cyclic-lift") return GeneratorStrategy::cyclic_lift;
  throw ParseError("unknown generator strategy '" + s + "'");
}

std::vector<Rational> rational_list(const Json& v, const char* name) {
  std::vector<Rational> out;
  if (!v.is_array()) out.push_back(rational_field(v, name));
  else
    for (const auto& x : v) out.push_back(rational_field(x, name));
  return out;
}

Json family_json(const SpaceFamily& f) {
  Json bs = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Block& b = f.block(i);
    Json x = {{"index", i}, {"size", b.size()}};
    if (b.is_graph()) {
      x["girth"] = b.girth() ? Json(*b.girth()) : Json(nullptr);
      x["min_degree"] = b.graph().min_degree();
      x["max_degree"] = b.graph().max_degree();
    } else {
      x["diameter"] = to_json(b.space().diameter());
    }
    bs.push_back(x);
  }
  Json j;
  j["D"] = f.degree_bound() ? Json(*f.degree_bound()) : Json(nullptr);
  j["blocks"] = bs;
  return j;
}

class Bundle {
 public:
  Bundle(std::string pipeline, const RunConfig& cfg) {
    j_["pipeline"] = std::move(pipeline);
    j_["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
    j_["config"] = cfg.to_json();
  }
  void set(const char* key, Json v) { j_[key] = std::move(v); }
  void add(const CertificationReport& r) {
    passed_ = passed_ && r.passed;
    certs_.push_back(r.to_json());
  }
  bool passed() const { return passed_; }
  Json finish() {
    j_["certificates"] = certs_;
    j_["passed"] = passed_;
    return j_;
  }

 private:
  Json j_;
  Json certs_ = Json::array();
  bool passed_ = true;
};

RunResult finish(Bundle& b, const std::string& file) {
  RunResult r;
  r.bundle = b.finish();
  r.exit_code = b.passed() ? 0 : 1;
  r.files.emplace_back(file, dump(r.bundle));
  return r;
}

// Input and configuration errors exit 2; a violated hypothesis is a failed
// certificate and exits 1.
template <class F>
RunResult guarded(const std::string& pipeline, const RunConfig& cfg, F body) {
  auto failure = [&](int code, const char* kind, const std::string& what) {
    RunResult r;
    r.exit_code = code;
    Bundle b(pipeline, cfg);
    if (code == 1) {
      CertificationReport rep;
      rep.name = kind;
      rep.message = what;
      b.add(rep);
    } else {
      b.set("error", {{"kind", kind}, {"message", what}});
    }
    Json j = b.finish();
    if (code == 2) j["passed"] = false;
    r.bundle = j;
    r.files.emplace_back(pipeline + ".json", dump(j));
    return r;
  };
  try {
    return body();
  } catch (const ParseError& e) {
    return failure(2, "parse", e.what());
  } catch (const IoError& e) {
    return failure(2, "io", e.what());
  } catch (const InvalidArgument& e) {
    return failure(2, "config", e.what());
  } catch (const PreconditionError& e) {
    return failure(1, "precondition", e.what());
  } catch (const GenerationFailure& e) {
    return failure(1, "generation", e.what());
  } catch (const NoSuchIndex& e) {
    return failure(1, "no-such-index", e.what());
  } catch (const InternalError& e) {
    return failure(1, "internal", e.what());
  }
}

CertificationReport large_girth_report(const SpaceFamily& f) {
  CertificationReport r;
  r.name = "large_girth_family";
  const std::string v = f.large_girth_violation();
  r.passed = v.empty();
  r.message = r.passed ? "degrees in [3, D], girth increasing, sizes non-decreasing" : v;
  r.details = family_json(f);
  return r;
}

// The certificates need only the two inequalities; the smallness proxy for
// b_i is reported alongside.
CertificationReport aqi_report(const AqiEmbedding& e) {
  CertificationReport full = verify_aqi(e);
  CertificationReport r;
  r.name = "aqi_inequalities";
  r.passed = full.details.value("inequalities_hold", false);
  r.message = r.passed ? "a d - b_i <= d(phi x, phi y) <= k d on every pair" : full.message;
  r.details = full.details;
  return r;
}

double gap_constant(const RunConfig& cfg, const SpaceFamily& f) {
  if (cfg.c) return to_double(*cfg.c);
  return compressed_gap_constant(f.effective_degree_bound());
}

// Random nonempty subset of a ball with random nonzero rational values.
L1Function random_function(const Block& b, std::size_t radius, std::mt19937_64& rng) {
  const Point x = rng() % b.size();
  const PointSet B = ball(b.space(), x, Rational(static_cast<long>(radius)));
  std::vector<Rational> values(b.size(), Rational(0));
  bool any = false;
  for (Point y : B)
    if (rng() % 2) {
      long p = static_cast<long>(rng() % 9) + 1;
      if (rng() % 2) p = -p;
      values[y] = Rational(p, static_cast<long>(rng() % 6) + 1);
      any = true;
    }
  if (!any) values[B[rng() % B.size()]] = Rational(static_cast<long>(rng() % 9) + 1);
  return L1Function(b, std::move(values));
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  RunConfig c;
  if (j.contains("seed") && !j["seed"].is_null()) c.seed = field<std::uint64_t>(j, "seed", 0);
  if (j.contains("family")) c.family = j["family"];
  if (j.contains("embedding")) c.embedding = j["embedding"];
  if (j.contains("S")) c.S = rational_list(j["S"], "S");
  if (j.contains("R")) c.R = rational_field(j["R"], "R");
  if (j.contains("c") && !j["c"].is_null()) c.c = rational_field(j["c"], "c");
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    c.tol_eig = field(t, "eig", c.tol_eig);
    c.tol_isometry = field(t, "isometry", c.tol_isometry);
    c.tol_kernel = field(t, "kernel", c.tol_kernel);
  }
  c.exhaustive_cap = field<std::size_t>(j, "exhaustive_cap", c.exhaustive_cap);
  c.mu_mode = field<std::string>(j, "mu_mode", c.mu_mode);
  if (j.contains("lemma")) {
    const Json& l = j["lemma"];
    c.lemma_trials = field<std::size_t>(l, "trials", c.lemma_trials);
    if (l.contains("radius")) c.lemma_radius = rational_field(l["radius"], "radius");
  }
  c.pipeline = field<std::string>(j, "pipeline", c.pipeline);
  c.out = field<std::string>(j, "out", c.out);
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  const std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  RunConfig c = from_json(j);
  // Input paths inside a config file are relative to the file.
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](Json& v) {
    if (v.is_string() && std::filesystem::path(v.get<std::string>()).is_relative())
      v = (base / v.get<std::string>()).lexically_normal().string();
  };
  if (c.family.contains("path")) resolve(c.family["path"]);
  if (c.family.contains("metrics") && c.family["metrics"].is_array())
    for (auto& m : c.family["metrics"]) resolve(m);
  if (c.embedding.contains("path")) resolve(c.embedding["path"]);
  if (c.embedding.contains("codomain")) resolve(c.embedding["codomain"]);
  return c;
}

Json RunConfig::to_json() const {
  Json j;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["family"] = family;
  j["embedding"] = embedding;
  Json s = Json::array();
  for (const auto& x : S) s.push_back(aqicert::to_json(x));
  j["S"] = s;
  j["R"] = aqicert::to_json(R);
  j["c"] = c ? aqicert::to_json(*c) : Json(nullptr);
  j["tolerances"] = {{"eig", number(tol_eig)}, {"isometry", number(tol_isometry)}, {"kernel", number(tol_kernel)}};
  j["exhaustive_cap"] = exhaustive_cap;
  j["mu_mode"] = mu_mode;
  j["lemma"] = {{"trials", lemma_trials}, {"radius", lemma_radius ? aqicert::to_json(*lemma_radius) : Json(nullptr)}};
  j["pipeline"] = pipeline;
  return j;
}

SpaceFamily load_family(const RunConfig& cfg) {
  const Json& f = cfg.family;
  if (!f.is_object() || f.empty()) throw InvalidArgument("config has no family");
  if (f.contains("path")) return read_family(field<std::string>(f, "path", ""));
  if (f.contains("metrics")) {
    std::vector<Block> blocks;
    for (const auto& p : f["metrics"]) blocks.emplace_back(parse_metric(read_text(p.get<std::string>())));
    return SpaceFamily(std::move(blocks));
  }
  if (!f.contains("girths") || !f.contains("sizes")) throw InvalidArgument("family needs a path, metrics or girths and sizes");
  if (!cfg.seed) throw InvalidArgument("generated families need a seed");
  GeneratorOptions opts;
  opts.strategy = parse_strategy(field<std::string>(f, "strategy", "automatic"));
  opts.restarts = field<std::size_t>(f, "restarts", opts.restarts);
  opts.moves = field<std::size_t>(f, "moves", opts.moves);
  const auto girths = field<std::vector<std::size_t>>(f, "girths", {});
  const auto sizes = field<std::vector<std::size_t>>(f, "sizes", {});
  if (girths.size() != sizes.size() || girths.empty())
    throw InvalidArgument("girths and sizes must be nonempty and of equal length");
  return generate_large_girth_family(field<std::size_t>(f, "D", 3), girths, sizes, *cfg.seed, opts);
}

AqiEmbedding load_embedding(const RunConfig& cfg, const SpaceFamily& domain) {
  const Json& e = cfg.embedding;
  const std::string kind = field<std::string>(e, "kind", "identity");
  if (kind == "identity") return identity_embedding(domain);
  if (kind == "net-quotient") {
    std::vector<Rational> radii = e.contains("radii") ? rational_list(e["radii"], "radii") : std::vector<Rational>{1};
    if (radii.size() == 1) radii.assign(domain.size(), radii[0]);
    if (radii.size() != domain.size()) throw InvalidArgument("one radius per block, or a single radius");
    return net_quotient(domain, radii);
  }
  if (kind == "file") {
    const SpaceFamily codomain =
        e.contains("codomain") ? read_family(field<std::string>(e, "codomain", "")) : domain;
    return parse_embedding(read_text(field<std::string>(e, "path", "")), domain, codomain);
  }
  throw InvalidArgument("unknown embedding kind '" + kind + "'");
}

RunResult run_generate(const RunConfig& cfg) {
  return guarded("generate", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    Bundle b("generate", cfg);
    b.set("family", family_json(f));
    CertificationReport g;
    g.name = "generation";
    g.passed = true;
    const auto targets = field<std::vector<std::size_t>>(cfg.family, "girths", {});
    for (std::size_t i = 0; i < f.size() && g.passed; ++i) {
      const Block& blk = f.block(i);
      if (!blk.is_graph()) continue;
      const FiniteGraph& d = blk.graph();
      if (d.min_degree() < 3 || d.max_degree() > f.effective_degree_bound() ||
          (i < targets.size() && blk.girth() && *blk.girth() < targets[i])) {
        g.passed = false;
        g.message = "block " + std::to_string(i) + " misses its degree or girth target";
      }
    }
    if (g.passed) g.message = "every block connected with degrees in [3, D] and girth at or above target";
    b.add(g);
    RunResult r = finish(b, "generate.json");
    r.files.emplace_back("family.txt", format_family(f));
    return r;
  });
}

RunResult run_verify_aqi(const RunConfig& cfg) {
  return guarded("verify_aqi", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    const AqiEmbedding e = load_embedding(cfg, f);
    Bundle b("verify_aqi", cfg);
    b.add(verify_aqi(e));
    if (cfg.embedding.value("infer", false)) {
      const AqiEmbedding fit = infer_constants(e, e.a);
      Json bs = Json::array();
      for (const auto& x : fit.b) bs.push_back(to_json(x));
      b.set("inferred_constants", {{"a", to_json(fit.a)}, {"k", to_json(fit.k)}, {"b", bs}});
    }
    return finish(b, "verify_aqi.json");
  });
}

RunResult run_mr1(const RunConfig& cfg, const SpaceFamily& f, const AqiEmbedding& e0) {
  return guarded("mr1", cfg, [&] {
    Bundle b("mr1", cfg);
    b.set("family", family_json(f));
    auto lg = large_girth_report(f);
    b.add(lg);
    if (!lg.passed) return finish(b, "mr1.json");
    auto aqi = aqi_report(e0);
    b.add(aqi);
    if (!aqi.passed) return finish(b, "mr1.json");

    const AqiEmbedding e = surjectivize(e0);
    CertificationReport comp;
    comp.name = "compressed_laplacian";
    std::optional<CompressedLaplacian> cl;
    try {
      cl = compressed_laplacian(e, cfg.R, cfg.tol_kernel, cfg.tol_isometry);
      comp.passed = true;
      comp.message = "theta isometric, propagation within 2kR, w_i in the kernel";
      comp.details = cl->to_json();
    } catch (const InternalError& err) {
      comp.message = err.what();
    }
    b.add(comp);
    if (!cl) return finish(b, "mr1.json");

    const double c = gap_constant(cfg, f);
    std::ostringstream rayleigh;
    rayleigh << "S,block,min_rayleigh\n";
    for (const auto& S : cfg.S) {
      CertificationReport g;
      g.name = "localized_gap_compressed";
      try {
        const auto cert = localized_gap_compressed(e, *cl, S, c, cfg.tol_eig);
        g.passed = cert.passed();
        g.message = cert.message;
        g.details = cert.to_json();
        for (const auto& r : cert.per_block)
          rayleigh << S.str() << ',' << r.index << ',' << number(r.min_rayleigh).dump() << '\n';
      } catch (const NoSuchIndex& err) {
        g.message = err.what();
        g.details = {{"S", to_json(S)}, {"status", "no-such-index"}};
      }
      b.add(g);
    }

    const FunctionalCalculus fc = functional_calculus(cl->D, c, cfg.tol_eig);
    const GhostProfile gp = ghost_profile(fc);
    CertificationReport ghost;
    ghost.name = "ghost_profile";
    ghost.passed = gp.verdict == "PASS";
    ghost.message = gp.message;
    ghost.details = gp.to_json();
    ghost.details["c"] = number(c);
    b.add(ghost);

    RunResult r = finish(b, "mr1.json");
    r.files.emplace_back("ghost.csv", gp.to_csv());
    r.files.emplace_back("rayleigh.csv", rayleigh.str());
    return r;
  });
}

RunResult run_mr1(const RunConfig& cfg) {
  return guarded("mr1", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    return run_mr1(cfg, f, load_embedding(cfg, f));
  });
}

RunResult run_mr2(const RunConfig& cfg, const SpaceFamily& f, const AqiEmbedding& e0) {
  return guarded("mr2", cfg, [&] {
    Bundle b("mr2", cfg);
    b.set("family", family_json(f));
    auto lg = large_girth_report(f);
    b.add(lg);
    if (!lg.passed) return finish(b, "mr2.json");
    auto aqi = aqi_report(e0);
    b.add(aqi);
    if (!aqi.passed) return finish(b, "mr2.json");

    const AqiEmbedding e = surjectivize(e0);
    const MeasureFamily mu = pushforward_measure(e);
    mu.check();
    CertificationReport m;
    m.name = "pushforward_measure";
    m.passed = true;
    m.message = "probability measures mu_i(y) = |phi^{-1}(y)| / |X_i|";
    Json sizes = Json::array();
    for (const auto& w : mu.weights) sizes.push_back(w.size());
    m.details = {{"support_sizes", sizes}};
    b.add(m);

    if (cfg.mu_mode != "automatic" && cfg.mu_mode != "proof-path")
      throw InvalidArgument("mu_mode must be 'automatic' or 'proof-path'");
    const auto cert = certify_mu_weak_expander(
        e, cfg.S, cfg.exhaustive_cap, cfg.mu_mode == "automatic" ? MuMode::automatic : MuMode::proof_path);
    CertificationReport w;
    w.name = "mu_weak_expander";
    w.passed = cert.passed();
    w.message = w.passed ? "mu(boundary_k F) > mu(F)/(D-1) for every tested F" : "see per-S records";
    w.details = cert.to_json();
    b.add(w);
    return finish(b, "mr2.json");
  });
}

RunResult run_mr2(const RunConfig& cfg) {
  return guarded("mr2", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    return run_mr2(cfg, f, load_embedding(cfg, f));
  });
}

RunResult run_lemma(const RunConfig& cfg, const SpaceFamily& f) {
  return guarded("lemma", cfg, [&] {
    if (cfg.lemma_trials == 0) throw InvalidArgument("lemma needs at least one trial");
    if (!cfg.seed) throw InvalidArgument("lemma campaigns need a seed");
    if (f.empty()) throw InvalidArgument("empty family");
    const std::size_t D = f.effective_degree_bound();
    std::mt19937_64 rng(*cfg.seed);
    std::size_t passed = 0, failed = 0, rejected = 0;
    std::optional<Rational> min_ratio;
    Json first_failure = nullptr;
    for (std::size_t t = 0; t < cfg.lemma_trials; ++t) {
      const Block& blk = f.block(rng() % f.size());
      std::size_t radius = 0;
      if (cfg.lemma_radius) radius = static_cast<std::size_t>(to_int64(floor(*cfg.lemma_radius)));
      else if (blk.is_graph() && blk.girth()) radius = *blk.girth() / 4;
      const L1Function eta = random_function(blk, radius, rng);
      try {
        const auto rep = verify_l1_poincare(eta, D);
        if (rep.passed) ++passed;
        else if (++failed == 1) first_failure = rep.to_json();
        const Rational ratio = l1_gradient(eta) / eta.l1_norm();
        if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
      } catch (const PreconditionError&) {
        ++rejected;
      }
    }
    Bundle b("lemma", cfg);
    b.set("family", family_json(f));
    CertificationReport r;
    r.name = "l1_poincare_campaign";
    r.passed = failed == 0 && passed > 0;
    r.message = std::to_string(passed) + "/" + std::to_string(passed + failed) + " admissible trials pass";
    r.details = {{"trials", cfg.lemma_trials},
                 {"passed", passed},
                 {"failed", failed},
                 {"rejected", rejected},
                 {"constant", to_json(Rational(2, static_cast<long>(D - 1)))},
                 {"min_ratio", min_ratio ? to_json(*min_ratio) : Json(nullptr)},
                 {"min_ratio_value", min_ratio ? number(to_double(*min_ratio)) : Json(nullptr)},
                 {"first_failure", first_failure}};
    b.add(r);
    return finish(b, "lemma.json");
  });
}

RunResult run_lemma(const RunConfig& cfg) {
  return guarded("lemma", cfg, [&] { return run_lemma(cfg, load_family(cfg)); });
}

RunResult run_profile(const RunConfig& cfg) {
  return guarded("profile", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    const double c = gap_constant(cfg, f);
    Bundle b("profile", cfg);
    b.set("family", family_json(f));
    const auto prof = expansion_profile(f, cfg.R, c, cfg.tol_eig);
    Json p = Json::array();
    std::ostringstream pcsv, rcsv;
    pcsv << "block,S\n";
    for (std::size_t i = 0; i < prof.size(); ++i) {
      p.push_back(to_json(prof[i]));
      pcsv << i << ',' << prof[i].str() << '\n';
    }
    rcsv << "S,block,min_rayleigh\n";
    Json per_s = Json::array();
    for (const auto& S : cfg.S) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const auto m = localized_min_rayleigh(build_laplacian(f.block(i).space(), cfg.R), S);
        rows.push_back({{"index", i}, {"min_rayleigh", number(m.value)}, {"ball_center", m.center}});
        rcsv << S.str() << ',' << i << ',' << number(m.value).dump() << '\n';
      }
      per_s.push_back({{"S", to_json(S)}, {"blocks", rows}});
    }
    b.set("profile", {{"R", to_json(cfg.R)}, {"c", number(c)}, {"S_i", p}, {"localized", per_s}});
    RunResult r = finish(b, "profile.json");
    r.files.emplace_back("profile.csv", pcsv.str());
    r.files.emplace_back("rayleigh.csv", rcsv.str());
    return r;
  });
}

RunResult run_pipeline(const RunConfig& cfg) {
  if (cfg.pipeline == "mr1") return run_mr1(cfg);
  if (cfg.pipeline == "mr2") return run_mr2(cfg);
  if (cfg.pipeline == "lemma") return run_lemma(cfg);
  if (cfg.pipeline == "generate") return run_generate(cfg);
  if (cfg.pipeline == "verify-aqi") return run_verify_aqi(cfg);
  if (cfg.pipeline == "profile") return run_profile(cfg);
  if (cfg.pipeline != "all")
    return guarded("run", cfg, [&]() -> RunResult { throw InvalidArgument("unknown pipeline '" + cfg.pipeline + "'"); });
  return guarded("all", cfg, [&] {
    const SpaceFamily f = load_family(cfg);
    const AqiEmbedding e = load_embedding(cfg, f);
    RunResult out;
    out.bundle = {{"pipeline", "all"}, {"seed", cfg.seed ? Json(*cfg.seed) : Json(nullptr)}};
    Json parts = Json::array();
    for (RunResult part : {run_mr1(cfg, f, e), run_mr2(cfg, f, e), run_lemma(cfg, f)}) {
      out.exit_code = std::max(out.exit_code, part.exit_code);
      parts.push_back(part.bundle);
      for (auto& file : part.files) out.files.push_back(std::move(file));
    }
    out.bundle["runs"] = parts;
    out.bundle["passed"] = out.exit_code == 0;
    out.files.emplace_back("all.json", dump(out.bundle));
    return out;
  });
}

void write_outputs(const RunResult& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  for (const auto& [name, text] : r.files) write_text(std::filesystem::path(dir) / name, text);
}

}  // namespace aqicert
