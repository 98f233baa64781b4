#include "aqicert/measures.hpp"

#include <algorithm>

#include "aqicert/errors.hpp"

namespace aqicert {

void MeasureFamily::check() const {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    Rational total = 0;
    for (const auto& w : weights[i]) {
      if (w < 0) throw InvalidArgument("negative mass in block " + std::to_string(i));
      total += w;
    }
    if (total != 1) throw InvalidArgument("block " + std::to_string(i) + " has total mass " + total.str());
  }
}

Rational MeasureFamily::mass(std::size_t i, const PointSet& F) const {
  Rational t = 0;
  for (Point y : F) t += weights.at(i).at(y);
  return t;
}

MeasureFamily pushforward_measure(const AqiEmbedding& e) {
  e.check_shape();
  MeasureFamily m;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e.surjective(i))
      throw PreconditionError("block " + std::to_string(i) + " is not surjective; some point would carry no mass");
    std::vector<long> count(e.codomain.block(i).size(), 0);
    for (Point y : e.maps[i]) ++count[y];
    const auto n = static_cast<long>(e.maps[i].size());
    std::vector<Rational> w;
    w.reserve(count.size());
    for (long c : count) w.emplace_back(c, n);
    m.weights.push_back(std::move(w));
  }
  return m;
}

Rational mu_boundary_ratio(const FiniteMetricSpace& Y, const std::vector<Rational>& mu,
                           const PointSet& F, const Rational& R) {
  if (mu.size() != Y.size()) throw InvalidArgument("measure and space sizes differ");
  const PointSet boundary = r_boundary(Y, F, R);
  Rational mf = 0, mb = 0;
  for (Point y : F) mf += mu.at(y);
  for (Point y : boundary) mb += mu[y];
  if (mf == 0) throw PreconditionError("mu(F) = 0");
  return mb / mf;
}

namespace {

// Domain 1-boundary: graph neighbours for graph blocks, distance in (0, 1] otherwise.
PointSet domain_boundary(const Block& X, const PointSet& pre) {
  if (!X.is_graph()) return r_boundary(X.space(), pre, Rational(1));
  const FiniteGraph& g = X.graph();
  std::vector<char> in(g.size(), 0), out(g.size(), 0);
  for (Point x : pre) in[x] = 1;
  PointSet b;
  for (Point x : pre)
    for (Point u : g.neighbours(x))
      if (!in[u] && !out[u]) {
        out[u] = 1;
        b.push_back(u);
      }
  std::sort(b.begin(), b.end());
  return b;
}

}  // namespace

ContainmentResult boundary_containment_check(const AqiEmbedding& e, std::size_t i,
                                             const PointSet& F, const Rational& R) {
  e.check_shape();
  if (i >= e.size()) throw InvalidArgument("block index out of range");
  if (!e.surjective(i)) throw PreconditionError("block " + std::to_string(i) + " is not surjective");
  if (R < e.k) throw PreconditionError("containment needs R >= k");
  const auto& Y = e.codomain.block(i).space();
  const auto& phi = e.maps[i];
  std::vector<char> inF(Y.size(), 0), inB(Y.size(), 0);
  for (Point y : F) inF.at(y) = 1;
  for (Point y : r_boundary(Y, F, R)) inB[y] = 1;
  PointSet pre;
  for (Point x = 0; x < phi.size(); ++x)
    if (inF[phi[x]]) pre.push_back(x);
  ContainmentResult r;
  for (Point u : domain_boundary(e.domain.block(i), pre))
    if (!inB[phi[u]]) {
      r.contained = false;
      r.witness = u;
      break;
    }
  return r;
}

bool MuExpanderCertificate::passed() const {
  if (records.empty() || link_failures > 0) return false;
  return std::all_of(records.begin(), records.end(), [](const MuSRecord& r) { return r.status == "pass"; });
}

Json MuExpanderCertificate::to_json() const {
  Json j;
  j["R"] = aqicert::to_json(R);
  j["epsilon"] = aqicert::to_json(epsilon);
  j["exhaustive_cap"] = exhaustive_cap;
  j["links_checked"] = links_checked;
  j["link_failures"] = link_failures;
  j["passed"] = passed();
  Json rs = Json::array();
  for (const auto& r : records) {
    Json x;
    x["S"] = aqicert::to_json(r.S);
    x["i_S"] = r.i_S ? Json(*r.i_S) : Json(nullptr);
    x["status"] = r.status;
    x["message"] = r.message;
    x["min_ratio"] = r.min_ratio ? aqicert::to_json(*r.min_ratio) : Json(nullptr);
    Json bs = Json::array();
    for (const auto& b : r.blocks)
      bs.push_back({{"index", b.index},
                    {"mode", b.mode},
                    {"balls_exhaustive", b.balls_exhaustive},
                    {"balls_proof_path", b.balls_proof_path},
                    {"sets_checked", b.sets_checked},
                    {"min_ratio", b.min_ratio ? aqicert::to_json(*b.min_ratio) : Json(nullptr)}});
    x["blocks"] = bs;
    if (r.witness) {
      x["witness_block"] = *r.witness_block;
      x["witness"] = aqicert::to_json(*r.witness);
    }
    rs.push_back(x);
  }
  j["records"] = rs;
  return j;
}

namespace {

// Everything about one block that the per-set checks reuse.
class BlockChecker {
 public:
  BlockChecker(const AqiEmbedding& e, const MeasureFamily& mu, std::size_t i, std::size_t D,
               MuExpanderCertificate& cert)
      : mu_(mu), i_(i), D_(D), cert_(cert),
        X_(e.domain.block(i)), Y_(e.codomain.block(i).space()), phi_(e.maps[i]),
        fibres_(e.fibres(i)), inF_(Y_.size(), 0), inB_(Y_.size(), 0), inP_(X_.size(), 0) {
    const auto limit = Y_.scaled_at_most(e.k);
    near_.resize(Y_.size());
    for (Point y = 0; y < Y_.size(); ++y) {
      const auto row = Y_.row(y);
      for (Point z = 0; z < Y_.size(); ++z)
        if (z != y && row[z] <= limit) near_[y].push_back(z);
    }
    const Girth g = X_.girth();
    girth_ = g ? static_cast<std::int64_t>(*g) : -1;
  }

  struct Outcome {
    bool holds;
    bool links;
    Rational ratio;
  };

  // Main inequality and the three links for one F.
  Outcome check(const PointSet& F) {
    for (Point y : F) inF_[y] = 1;
    PointSet boundary;
    long cF = 0, cB = 0;
    for (Point y : F) cF += static_cast<long>(fibres_[y].size());
    for (Point y : F)
      for (Point z : near_[y])
        if (!inF_[z] && !inB_[z]) {
          inB_[z] = 1;
          boundary.push_back(z);
          cB += static_cast<long>(fibres_[z].size());
        }
    std::sort(boundary.begin(), boundary.end());
    const bool holds = cB * static_cast<long>(D_ - 1) > cF;

    // Link 1: measure ratio equals the preimage-count ratio.
    const Rational mu_ratio = mu_.mass(i_, boundary) / mu_.mass(i_, F);
    const Rational pre_ratio(cB, cF);
    bool links = mu_ratio == pre_ratio;

    // Link 2: ∂(phi^{-1}F) ⊆ phi^{-1}(∂_k F), hence the counts compare.
    PointSet pre;
    for (Point y : F) pre.insert(pre.end(), fibres_[y].begin(), fibres_[y].end());
    for (Point x : pre) inP_[x] = 1;
    long cD = 0;
    bool contained = true;
    if (X_.is_graph()) {
      std::vector<Point> touched;
      for (Point x : pre)
        for (Point u : X_.graph().neighbours(x))
          if (!inP_[u]) {
            inP_[u] = 2;
            touched.push_back(u);
            ++cD;
            if (!inB_[phi_[u]]) contained = false;
          }
      for (Point u : touched) inP_[u] = 0;
    } else {
      contained = false;
    }
    links = links && contained && cB >= cD;

    // Link 3: the preimage sits inside a tree neighbourhood and its boundary
    // ratio beats 1/(D-1).
    const std::int64_t dpre = scaled_diameter(X_.space(), pre);
    const bool small = girth_ < 0 || 2 * dpre < girth_ * X_.space().scale();
    links = links && small && cD * static_cast<long>(D_ - 1) > static_cast<long>(pre.size());

    for (Point x : pre) inP_[x] = 0;
    for (Point y : F) inF_[y] = 0;
    for (Point z : boundary) inB_[z] = 0;
    ++cert_.links_checked;
    if (!links) ++cert_.link_failures;
    return {holds, links, pre_ratio};
  }

  const FiniteMetricSpace& Y() const { return Y_; }

 private:
  const MeasureFamily& mu_;
  std::size_t i_, D_;
  MuExpanderCertificate& cert_;
  const Block& X_;
  const FiniteMetricSpace& Y_;
  const std::vector<Point>& phi_;
  std::vector<PointSet> fibres_;
  std::vector<PointSet> near_;
  std::vector<char> inF_, inB_, inP_;
  std::int64_t girth_;
};

// Sets containing `anchor` drawn from `cand` (all indices above it) with
// pairwise distance below the bound: cliques of the compatibility graph.
template <class Visit>
bool enumerate_sets(const FiniteMetricSpace& Y, Point anchor, const PointSet& cand,
                    std::int64_t below, Visit&& visit) {
  const std::size_t m = cand.size();
  std::vector<std::vector<char>> ok(m, std::vector<char>(m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) ok[a][b] = Y.scaled(cand[a], cand[b]) <= below;
  PointSet F{anchor};
  std::vector<std::size_t> chosen;
  // Depth-first over inclusion decisions in index order.
  auto rec = [&](auto&& self, std::size_t from) -> bool {
    if (!visit(F)) return false;
    for (std::size_t c = from; c < m; ++c) {
      bool fits = true;
      for (auto p : chosen)
        if (!ok[p][c]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      chosen.push_back(c);
      F.insert(std::upper_bound(F.begin(), F.end(), cand[c]), cand[c]);
      if (!self(self, c + 1)) return false;
      F.erase(std::find(F.begin(), F.end(), cand[c]));
      chosen.pop_back();
    }
    return true;
  };
  return rec(rec, 0);
}

}  // namespace

MuExpanderCertificate certify_mu_weak_expander(const AqiEmbedding& e,
                                               const std::vector<Rational>& S_list,
                                               std::size_t cap, MuMode mode) {
  e.check_shape();
  if (auto why = e.domain.large_girth_violation(); !why.empty())
    throw PreconditionError("domain is not a large-girth family: " + why);
  if (!e.surjective()) throw PreconditionError("embedding is not surjective");
  const auto aqi = verify_aqi(e);
  if (!aqi.details.value("inequalities_hold", false))
    throw PreconditionError("embedding fails verification: " + aqi.message);
  const std::size_t D = e.domain.effective_degree_bound();
  const MeasureFamily mu = pushforward_measure(e);
  mu.check();

  MuExpanderCertificate cert;
  cert.R = e.k;
  cert.epsilon = Rational(1, static_cast<long>(D - 1));
  cert.exhaustive_cap = cap;

  for (const auto& S : S_list) {
    MuSRecord rec;
    rec.S = S;
    try {
      rec.i_S = threshold_index(e, S);
    } catch (const NoSuchIndex& ex) {
      rec.status = "no-such-index";
      rec.message = ex.what();
      cert.records.push_back(std::move(rec));
      continue;
    }
    rec.status = "pass";
    if (*rec.i_S + 1 >= e.size()) {
      rec.status = "fail";
      rec.message = "no recorded block beyond i_S = " + std::to_string(*rec.i_S);
      cert.records.push_back(std::move(rec));
      continue;
    }
    for (std::size_t i = *rec.i_S + 1; i < e.size() && rec.status == "pass"; ++i) {
      BlockChecker checker(e, mu, i, D, cert);
      const auto& Y = checker.Y();
      const auto below = Y.scaled_below(S);
      MuBlockRecord br;
      br.index = i;
      auto visit = [&](const PointSet& F) {
        const auto out = checker.check(F);
        ++br.sets_checked;
        if (!br.min_ratio || out.ratio < *br.min_ratio) br.min_ratio = out.ratio;
        if (!out.holds || !out.links) {
          rec.status = "fail";
          rec.message = out.holds ? "proof-chain link fails in block " + std::to_string(i)
                                  : "mu(boundary) <= epsilon mu(F) in block " + std::to_string(i);
          rec.witness_block = i;
          rec.witness = F;
          return false;
        }
        return true;
      };
      for (Point y = 0; y < Y.size() && rec.status == "pass"; ++y) {
        const auto row = Y.row(y);
        std::size_t ball = 0;
        PointSet cand;
        for (Point z = 0; z < Y.size(); ++z)
          if (row[z] <= below) {
            ++ball;
            if (z > y) cand.push_back(z);
          }
        if (mode == MuMode::automatic && ball <= cap) {
          ++br.balls_exhaustive;
          enumerate_sets(Y, y, cand, below, visit);
        } else {
          // Premises already hold (threshold, Lipschitz, degrees); spot-check
          // the singleton and one greedy maximal set.
          ++br.balls_proof_path;
          if (!visit(PointSet{y})) break;
          PointSet F{y};
          for (Point z : cand) {
            bool fits = true;
            for (Point w : F)
              if (Y.scaled(w, z) > below) fits = false;
            if (fits) F.push_back(z);
          }
          if (F.size() > 1) visit(F);
        }
      }
      br.mode = br.balls_proof_path == 0 ? "exhaustive"
                : br.balls_exhaustive == 0 ? "proof-path only" : "mixed";
      if (br.min_ratio && (!rec.min_ratio || *br.min_ratio < *rec.min_ratio)) rec.min_ratio = br.min_ratio;
      rec.blocks.push_back(std::move(br));
    }
    if (rec.status == "pass")
      rec.message = "every tested set has mu(boundary) > epsilon mu(F) beyond i_S";
    cert.records.push_back(std::move(rec));
  }
  return cert;
}

}  // namespace aqicert
