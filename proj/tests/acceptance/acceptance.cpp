// Acceptance checks. Usage: aqicert_acceptance [criterion ...]; with no
// arguments every criterion runs. One line per criterion on stdout.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "../unit/oracles.hpp"
#include "aqicert/errors.hpp"
#include "aqicert/generate.hpp"
#include "aqicert/io.hpp"
#include "aqicert/isoperimetry.hpp"
#include "aqicert/measures.hpp"
#include "aqicert/pipeline.hpp"
#include "aqicert/roe_ghost.hpp"
#include "aqicert/spectral.hpp"

using namespace aqicert;

namespace {

constexpr double kTolEig = 1e-9;
constexpr double kTolKernel = 1e-10;
constexpr double kTolNorm = 1e-9;
constexpr double kGap = 1.0 / 12;
constexpr std::size_t kCap = 15;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1. l1 gradient bound, exact, on 1000 random admissible functions.
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Block> graphs;
  graphs.emplace_back(generate_large_girth_graph(3, 9, 200, kSeed));
  graphs.emplace_back(generate_large_girth_graph(3, 9, 180, kSeed + 1));
  std::mt19937_64 rng(kSeed);
  std::size_t trials = 0, held = 0, library = 0;
  Rational min_ratio = -1;
  for (; trials < 1000; ++trials) {
    const Block& b = graphs[trials % graphs.size()];
    const FiniteGraph& g = b.graph();
    if (g.max_degree() != 3 || g.min_degree() != 3 || *b.girth() < 9 || g.size() > 200) return {false, "bad graph"};
    const long radius = static_cast<long>(*b.girth() / 4);
    const PointSet B = ball(b.space(), rng() % g.size(), Rational(radius));
    std::vector<Rational> v(g.size(), Rational(0));
    for (Point y : B)
      if (rng() % 3) v[y] = Rational(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 7) + 1);
    v[B[rng() % B.size()]] = Rational(static_cast<long>(rng() % 5) + 1);
    // Oracle: ordered-pair gradient and l1 norm from the edge list.
    Rational grad = 0, norm = 0;
    for (const auto& [x, y] : g.edges()) grad += 2 * abs(Rational(v[x] - v[y]));
    for (const auto& q : v) norm += abs(q);
    held += grad >= Rational(2) / (3 - 1) * norm;
    const L1Function eta(b, v);
    library += verify_l1_poincare(eta, 3).passed && l1_gradient(eta) == grad;
    const Rational ratio = grad / norm;
    if (min_ratio < 0 || ratio < min_ratio) min_ratio = ratio;
  }
  RunConfig cfg;
  cfg.seed = kSeed;
  cfg.lemma_trials = 1000;
  cfg.family = {{"D", 3}, {"girths", {9}}, {"sizes", {200}}};
  const auto campaign = run_lemma(cfg);
  const double secs = seconds_since(t0);
  const bool pass = held == trials && library == trials && campaign.exit_code == 0 && secs < 60;
  return {pass, std::to_string(held) + "/" + std::to_string(trials) + " oracle, " + std::to_string(library) +
                    "/" + std::to_string(trials) + " library, campaign exit " + std::to_string(campaign.exit_code) +
                    ", min ratio " + to_string(min_ratio) + " vs 1, " + fmt(secs) + " s"};
}

// 2. Localized gap of Delta_1 at S = floor(g/4) on girth 9, 12 and 16 families with n <= 400.
Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::size_t, std::vector<std::size_t>>> plan = {
      {9, {200, 400}}, {12, {390}}, {16, {400}}};
  bool pass = true;
  std::ostringstream os;
  for (const auto& [g, sizes] : plan) {
    const Rational S(static_cast<long>(g / 4));
    os << "g=" << g << ":";
    for (std::size_t n : sizes) {
      try {
        const FiniteGraph graph = generate_large_girth_graph(3, g, n, kSeed + g);
        const auto space = FiniteMetricSpace::from_graph(graph);
        const double got = localized_min_rayleigh(build_laplacian(space, 1), S).value;
        // Oracle: dense Laplacian from Floyd distances, every ball.
        const auto d = oracle::floyd(graph);
        Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (const auto& [u, v] : graph.edges()) {
          L(u, v) = L(v, u) = -1;
          L(u, u) += 1;
          L(v, v) += 1;
        }
        double want = 1e300;
        for (Point x = 0; x < n; ++x) {
          PointSet B;
          for (Point y = 0; y < n; ++y)
            if (d[x][y] <= static_cast<long>(g / 4)) B.push_back(y);
          want = std::min(want, oracle::min_eigenvalue(L, B));
        }
        const bool ok = got >= kGap - kTolEig && want >= kGap - kTolEig && std::abs(got - want) <= kTolEig;
        pass = pass && ok;
        os << " n=" << n << " " << fmt(got) << (ok ? "" : " FAIL");
      } catch (const GenerationFailure& e) {
        pass = false;
        os << " n=" << n << " ungenerable (Moore bound " << moore_bound(3, g) << ")";
      }
    }
    os << "; ";
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 120;
  os << fmt(secs) << " s";
  return {pass, os.str()};
}

struct Mr {
  SpaceFamily family;
  AqiEmbedding embedding;
};

const Mr& mr_family() {
  static const Mr m = [] {
    SpaceFamily f = generate_large_girth_family(3, {12, 16, 20}, {390, 2400, 30000}, kSeed);
    AqiEmbedding e = surjectivize(net_quotient(f, {Rational(1), Rational(1), Rational(1)}));
    return Mr{std::move(f), std::move(e)};
  }();
  return m;
}

// 3. Compressed Laplacian, localized gap and ghost profile on the net quotient.
Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& [f, e] = mr_family();
  std::ostringstream os;
  bool pass = verify_aqi(e).details.value("inequalities_hold", false);
  const auto cl = compressed_laplacian(e, 1, kTolKernel);
  bool prop_ok = cl.D.propagation == 2 * e.k, kernel_ok = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& Y = e.codomain.block(i).space();
    Rational measured = 0;
    for (Eigen::Index k = 0; k < cl.D.blocks[i].outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(cl.D.blocks[i], k); it; ++it)
        if (it.value() != 0)
          measured = std::max(measured, Y.distance(static_cast<Point>(it.row()), static_cast<Point>(it.col())));
    prop_ok = prop_ok && measured <= 2 * e.k;
    const auto fib = e.fibres(i);
    Eigen::VectorXd w(static_cast<Eigen::Index>(fib.size()));
    for (std::size_t y = 0; y < fib.size(); ++y) w(static_cast<Eigen::Index>(y)) = std::sqrt(double(fib[y].size()));
    const double res = (cl.D.blocks[i] * w).norm() / w.norm();
    kernel_ok = kernel_ok && res <= kTolKernel;
    os << "block " << i << " |Y|=" << Y.size() << " prop " << to_string(measured) << " res " << fmt(res) << "; ";
  }
  const auto gap = localized_gap_compressed(e, cl, 3, kGap, kTolEig);
  double min_gap = 1e300;
  for (const auto& r : gap.per_block) min_gap = std::min(min_gap, r.min_rayleigh);
  const auto gp = ghost_profile(functional_calculus(cl.D, kGap, kTolEig));
  bool norms = true, decreasing = true;
  for (std::size_t i = 0; i < gp.blocks.size(); ++i) {
    norms = norms && gp.blocks[i].norm >= 1 - kTolNorm;
    if (i > 0) decreasing = decreasing && gp.blocks[i].max_entry < gp.blocks[i - 1].max_entry;
    os << "ghost " << i << " max " << fmt(gp.blocks[i].max_entry) << " rank " << gp.blocks[i].rank << "; ";
  }
  pass = pass && prop_ok && kernel_ok && gap.passed() && norms && decreasing;
  os << "(a) " << (prop_ok ? "ok" : "FAIL") << " (b) " << (kernel_ok ? "ok" : "FAIL") << " (c) " << gap.status
     << " min " << fmt(min_gap) << " i_S " << (gap.i_S ? std::to_string(*gap.i_S) : "-") << ", norms "
     << (norms ? "ok" : "FAIL") << ", strictly decreasing " << (decreasing ? "yes" : "no") << ", "
     << fmt(seconds_since(t0)) << " s";
  return {pass, os.str()};
}

// 4. mu-weak expansion with R = k = 3 and epsilon = 1/2 on the same embedding.
Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& e = mr_family().embedding;
  const auto cert = certify_mu_weak_expander(e, {Rational(2), Rational(3)}, kCap, MuMode::automatic);
  std::size_t sets = 0, exhaustive = 0, balls = 0;
  for (const auto& r : cert.records)
    for (const auto& b : r.blocks) {
      sets += b.sets_checked;
      exhaustive += b.balls_exhaustive;
      balls += b.balls_exhaustive + b.balls_proof_path;
    }
  // Every ball of at most kCap points must have been enumerated.
  std::size_t small_balls = 0;
  for (const auto& r : cert.records) {
    if (!r.i_S) continue;
    for (std::size_t i = *r.i_S + 1; i < e.size(); ++i) {
      const auto& Y = e.codomain.block(i).space();
      const auto below = Y.scaled_below(r.S);
      for (Point y = 0; y < Y.size(); ++y) {
        std::size_t c = 0;
        const auto row = Y.row(y);
        for (Point z = 0; z < Y.size(); ++z) c += row[z] <= below;
        small_balls += c <= kCap;
      }
    }
  }
  const bool pass = cert.passed() && cert.R == 3 && e.k == 3 && cert.epsilon == Rational(1, 2) &&
                    cert.link_failures == 0 && cert.links_checked == sets && exhaustive >= small_balls;
  std::ostringstream os;
  os << "passed " << cert.passed() << ", R " << to_string(cert.R) << ", eps " << to_string(cert.epsilon) << ", "
     << sets << " sets, " << exhaustive << "/" << balls << " balls exhaustive (" << small_balls
     << " with <= 15 points), links " << cert.links_checked << " checked " << cert.link_failures << " failed";
  for (const auto& r : cert.records)
    os << "; S=" << to_string(r.S) << " " << r.status << " min ratio " << (r.min_ratio ? to_string(*r.min_ratio) : "-");
  os << ", " << fmt(seconds_since(t0)) << " s";
  return {pass, os.str()};
}

std::vector<FiniteMetricSpace> small_spaces() {
  std::vector<FiniteMetricSpace> out;
  const auto fam = read_family(std::string(AQICERT_TEST_DATA) + "/small_family.txt");
  for (const auto& b : fam.blocks()) out.push_back(b.space());
  out.push_back(parse_metric(read_text(std::string(AQICERT_TEST_DATA) + "/line4.txt")));
  for (std::size_t n : {5u, 8u, 12u}) out.push_back(FiniteMetricSpace::from_graph(cycle_graph(n)));
  out.push_back(FiniteMetricSpace::from_graph(complete_graph(7)));
  std::mt19937_64 rng(kSeed);
  for (int t = 0; t < 8; ++t)
    out.push_back(FiniteMetricSpace::from_graph(oracle::random_connected_graph(5 + rng() % 10, rng() % 8, rng)));
  return out;
}

// 5. Oracle equivalence on every corpus space with at most 14 points.
Outcome criterion5() {
  std::size_t sandwiches = 0, sandwich_bad = 0;
  for (const auto& s : small_spaces()) {
    if (s.size() > 14) continue;
    for (const Rational R : {Rational(1, 2), Rational(1), Rational(2)}) {
      const auto L = build_laplacian(s, R);
      const Eigen::MatrixXd dense = oracle::laplacian(s, R);
      for (const Rational S : {Rational(0), Rational(1), Rational(3, 2), Rational(2), Rational(3)}) {
        const double exact = oracle::exhaustive_localized_min(s, dense, S);
        const double lower = localized_min_rayleigh(L, S).value;
        double upper = 1e300;
        if (auto w = refute_localized_gap(L, S, 1e6)) upper = w->value;
        ++sandwiches;
        if (!(lower <= exact + kTolEig && exact <= upper + kTolEig)) ++sandwich_bad;
      }
    }
  }
  const auto fam = read_family(std::string(AQICERT_TEST_DATA) + "/small_family.txt");
  const std::vector<AqiEmbedding> embeddings = {
      identity_embedding(fam), net_quotient(fam, {Rational(1), Rational(1), Rational(1)}),
      identity_embedding(SpaceFamily(std::vector<Block>(fam.blocks().begin() + 1, fam.blocks().end()), 3))};
  std::size_t compared = 0, disagree = 0;
  for (const auto& e : embeddings)
    for (const Rational S : {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3)}) {
      const auto full = certify_mu_weak_expander(e, {S}, 64, MuMode::automatic);
      const auto proof = certify_mu_weak_expander(e, {S}, 64, MuMode::proof_path);
      std::string want = "pass";
      std::optional<std::size_t> iS;
      for (std::size_t j = e.size(); j-- > 0;) {
        if (((S + e.b[j]) / e.a) * 2 > static_cast<long>(*e.domain.block(j).girth())) break;
        iS = j;
      }
      if (!iS) want = "no-such-index";
      else if (*iS + 1 >= e.size()) want = "fail";
      else
        for (std::size_t i = *iS + 1; i < e.size(); ++i)
          if (!oracle::exhaustive_mu_holds(e, i, S, 3)) want = "fail";
      ++compared;
      disagree += full.records[0].status != want || proof.records[0].status != want;
    }
  std::ostringstream os;
  os << sandwich_bad << "/" << sandwiches << " sandwich violations, " << disagree << "/" << compared
     << " mu disagreements";
  return {sandwich_bad == 0 && disagree == 0, os.str()};
}

// 6. Known-failure controls.
Outcome criterion6() {
  std::ostringstream os;
  bool pass = true;
  const auto cycles = read_family(std::string(AQICERT_TEST_DATA) + "/cycles.txt");
  bool rejected = false;
  try {
    certify_mu_weak_expander(identity_embedding(cycles), {Rational(1)});
  } catch (const PreconditionError&) {
    rejected = true;
  }
  try {
    verify_l1_poincare(L1Function(cycles.block(0), std::vector<Rational>(6, Rational(1))), 3);
    rejected = false;
  } catch (const PreconditionError&) {
  }
  RunConfig cfg;
  cfg.family = {{"path", std::string(AQICERT_TEST_DATA) + "/cycles.txt"}};
  rejected = rejected && run_mr1(cfg).exit_code == 1 && run_mr2(cfg).exit_code == 1;
  os << "cycles rejected " << (rejected ? "yes" : "no");
  pass = pass && rejected;

  const auto complete = SpaceFamily::from_graphs({complete_graph(3), complete_graph(4), complete_graph(6), complete_graph(9)});
  const auto wc = certify_weak_expansion(complete, 1, 2.0, 0, kTolEig);
  const bool complete_ok = wc.passed() && wc.i_S == 1u;
  os << ", complete graphs " << wc.status << " from block " << (wc.i_S ? std::to_string(*wc.i_S) : "-");
  pass = pass && complete_ok;

  const auto fam = read_family(std::string(AQICERT_TEST_DATA) + "/small_family.txt");
  AqiEmbedding bad = identity_embedding(fam);
  std::swap(bad.maps[1][0], bad.maps[1][6]);
  const auto r = verify_aqi(bad);
  bool witnessed = !r.passed && r.details.contains("witness");
  if (witnessed) {
    const auto& w = r.details["witness"];
    const std::size_t i = w["block"];
    const Point x = w["x"], y = w["y"];
    const Rational dx = fam.block(i).space().distance(x, y);
    const Rational dy = bad.codomain.block(i).space().distance(bad.maps[i][x], bad.maps[i][y]);
    witnessed = dy > bad.k * dx || dy < bad.a * dx - bad.b[i];
    os << ", non-Lipschitz witness block " << i << " (" << x << "," << y << ") d " << to_string(dx) << " -> " << to_string(dy);
  }
  pass = pass && witnessed;
  return {pass, os.str()};
}

// 7. Every pipeline twice with one seed: byte-identical outputs.
Outcome criterion7() {
  RunConfig cfg = RunConfig::from_file(std::string(AQICERT_TEST_DATA) + "/det.json");
  cfg.seed = kSeed;
  std::size_t files = 0, differ = 0;
  for (const std::string p : {"generate", "verify-aqi", "mr1", "mr2", "lemma", "profile"}) {
    cfg.pipeline = p;
    const auto a = run_pipeline(cfg), b = run_pipeline(cfg);
    if (a.files.size() != b.files.size()) ++differ;
    for (std::size_t i = 0; i < std::min(a.files.size(), b.files.size()); ++i) {
      ++files;
      differ += a.files[i] != b.files[i];
    }
  }
  return {differ == 0 && files >= 9, std::to_string(files) + " files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [k, unused] : criteria) which.push_back(k);
  int failures = 0;
  for (int k : which) {
    auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cout << "criterion " << k << ": FAIL - unknown criterion\n";
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
