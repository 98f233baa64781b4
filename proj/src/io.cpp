#include "aqicert/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "aqicert/errors.hpp"

namespace aqicert {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
  return trim(s);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line) + ": expected a nonnegative integer, got '" +
                     std::string(tok) + "'");
  return v;
}

struct PendingBlock {
  std::vector<Edge> edges;
  std::optional<std::size_t> girth, D;
  std::size_t n = 0;
  std::size_t first_line = 0;
};

FiniteGraph build(const PendingBlock& p) {
  try {
    return FiniteGraph(p.n, p.edges);
  } catch (const InvalidArgument& e) {
    throw ParseError("block starting at line " + std::to_string(p.first_line) + ": " + e.what());
  }
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

SpaceFamily parse_family(std::string_view text) {
  std::vector<PendingBlock> pending(1);
  std::size_t lineno = 0;
  for (auto raw : lines_of(text)) {
    ++lineno;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    PendingBlock& cur = pending.back();
    if (line == "---") {
      pending.emplace_back().first_line = lineno + 1;
      continue;
    }
    if (line.find('=') != std::string_view::npos) {
      if (!cur.edges.empty())
        throw ParseError("line " + std::to_string(lineno) + ": block header after edges");
      for (auto tok : tokens(line)) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": bad header");
        auto key = tok.substr(0, eq);
        auto value = parse_index(tok.substr(eq + 1), lineno);
        if (key == "girth") cur.girth = value;
        else if (key == "D") cur.D = value;
        else throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
      }
      continue;
    }
    auto t = tokens(line);
    if (t.size() != 2) throw ParseError("line " + std::to_string(lineno) + ": expected 'u v'");
    Point u = parse_index(t[0], lineno), v = parse_index(t[1], lineno);
    cur.edges.emplace_back(u, v);
    cur.n = std::max(cur.n, std::max(u, v) + 1);
  }
  if (pending.size() > 1 && pending.back().edges.empty() && !pending.back().girth && !pending.back().D)
    pending.pop_back();

  std::optional<std::size_t> D;
  std::vector<Block> blocks;
  for (const auto& p : pending) {
    if (p.edges.empty()) throw ParseError("block starting at line " + std::to_string(p.first_line) + " has no edges");
    FiniteGraph g = build(p);
    if (p.D) {
      if (D && *D != *p.D) throw ParseError("blocks declare different degree bounds");
      D = p.D;
    }
    Block b(std::move(g));
    if (p.girth && b.girth() != p.girth)
      throw ParseError("block starting at line " + std::to_string(p.first_line) + " declares girth " +
                       std::to_string(*p.girth) + " but has " +
                       (b.girth() ? std::to_string(*b.girth()) : std::string("none")));
    blocks.push_back(std::move(b));
  }
  return SpaceFamily(std::move(blocks), D);
}

std::string format_family(const SpaceFamily& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Block& b = f.block(i);
    if (!b.is_graph()) throw InvalidArgument("only graph families have an edge-list form");
    if (i > 0) os << "---\n";
    if (b.girth()) {
      os << "girth=" << *b.girth();
      if (f.degree_bound()) os << " D=" << *f.degree_bound();
      os << '\n';
    } else if (f.degree_bound()) {
      os << "D=" << *f.degree_bound() << '\n';
    }
    for (const auto& [u, v] : b.graph().edges()) os << u << ' ' << v << '\n';
  }
  return os.str();
}

SpaceFamily read_family(const std::filesystem::path& path) { return parse_family(read_text(path)); }

FiniteMetricSpace parse_metric(std::string_view text) {
  std::vector<std::string_view> t;
  for (auto raw : lines_of(text))
    for (auto tok : tokens(strip_comment(raw))) t.push_back(tok);
  if (t.empty()) throw ParseError("empty metric file");
  const std::size_t n = parse_index(t[0], 1);
  if (n == 0) throw ParseError("metric with no points");
  if (t.size() != 1 + n * n)
    throw ParseError("expected " + std::to_string(n * n) + " distances, found " + std::to_string(t.size() - 1));
  std::vector<Rational> table;
  table.reserve(n * n);
  for (std::size_t i = 1; i < t.size(); ++i) table.push_back(parse_rational(t[i]));
  try {
    return FiniteMetricSpace::from_table(n, table);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("not a metric: ") + e.what());
  }
}

std::string format_metric(const FiniteMetricSpace& s) {
  std::ostringstream os;
  os << s.size() << '\n';
  for (Point x = 0; x < s.size(); ++x) {
    for (Point y = 0; y < s.size(); ++y) os << (y ? " " : "") << to_string(s.distance(x, y));
    os << '\n';
  }
  return os.str();
}

AqiEmbedding parse_embedding(std::string_view text, const SpaceFamily& domain, const SpaceFamily& codomain) {
  AqiEmbedding e;
  e.domain = domain;
  e.codomain = codomain;
  e.maps.assign(domain.size(), {});
  e.b.assign(domain.size(), Rational(0));
  std::vector<char> seen(domain.size(), 0);
  std::optional<Rational> a, k;
  std::optional<std::size_t> block;
  std::vector<char> assigned;
  std::size_t lineno = 0;
  for (auto raw : lines_of(text)) {
    ++lineno;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    auto t = tokens(line);
    if (t.size() == 3 && t[1] == "->") {
      if (!block) throw ParseError(where + "map entry before a block header");
      Point x = parse_index(t[0], lineno), y = parse_index(t[2], lineno);
      auto& phi = e.maps[*block];
      if (x >= phi.size()) throw ParseError(where + "point " + std::to_string(x) + " outside the domain block");
      if (y >= codomain.block(*block).size())
        throw ParseError(where + "image " + std::to_string(y) + " outside the codomain block");
      if (assigned[x]) throw ParseError(where + "point " + std::to_string(x) + " mapped twice");
      assigned[x] = 1;
      phi[x] = y;
      continue;
    }
    if (t.size() != 4) throw ParseError(where + "expected 'i a k b_i' or 'x -> y'");
    if (block && std::find(assigned.begin(), assigned.end(), 0) != assigned.end())
      throw ParseError(where + "block " + std::to_string(*block) + " has unmapped points");
    const std::size_t i = parse_index(t[0], lineno);
    if (i >= domain.size() || i >= codomain.size()) throw ParseError(where + "block index out of range");
    if (seen[i]) throw ParseError(where + "block " + std::to_string(i) + " repeated");
    seen[i] = 1;
    const Rational ai = parse_rational(t[1]), ki = parse_rational(t[2]);
    if ((a && *a != ai) || (k && *k != ki)) throw ParseError(where + "a and k must agree across blocks");
    a = ai;
    k = ki;
    e.b[i] = parse_rational(t[3]);
    block = i;
    e.maps[i].assign(domain.block(i).size(), 0);
    assigned.assign(domain.block(i).size(), 0);
  }
  if (block && std::find(assigned.begin(), assigned.end(), 0) != assigned.end())
    throw ParseError("block " + std::to_string(*block) + " has unmapped points");
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (!seen[i]) throw ParseError("block " + std::to_string(i) + " missing from the embedding file");
  if (a) e.a = *a;
  if (k) e.k = *k;
  try {
    e.check_shape();
  } catch (const InvalidArgument& err) {
    throw ParseError(err.what());
  }
  return e;
}

std::string format_embedding(const AqiEmbedding& e) {
  std::ostringstream os;
  for (std::size_t i = 0; i < e.size(); ++i) {
    os << i << ' ' << to_string(e.a) << ' ' << to_string(e.k) << ' ' << to_string(e.b[i]) << '\n';
    for (Point x = 0; x < e.maps[i].size(); ++x) os << x << " -> " << e.maps[i][x] << '\n';
  }
  return os.str();
}

}  // namespace aqicert
