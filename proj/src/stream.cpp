#include "rivulet/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rivulet/errors.hpp"
#include "rivulet/rng.hpp"

namespace rivulet {

namespace {

void write_double(std::ostream& os, double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  os.write(buf, r.ptr - buf);
}

std::string loc(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

ParsedGraph parse_graph_tsv(const std::string& path, Model model) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);

  struct Row {
    std::string u, v;
    double w;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool numeric = true;
  std::uint64_t max_id = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Row r;
    r.line = line_no;
    if (!(ls >> r.u >> r.v >> r.w))
      throw Error(Errc::ParseError, loc(path, line_no) + "expected: u v weight");
    if (!std::isfinite(r.w) || r.w < 0.0)
      throw Error(Errc::ParseError, loc(path, line_no) + "weight must be finite and >= 0");
    for (const std::string* s : {&r.u, &r.v}) {
      if (all_digits(*s) && s->size() <= 9) {
        max_id = std::max(max_id, static_cast<std::uint64_t>(std::stoull(*s)));
      } else {
        numeric = false;
      }
    }
    rows.push_back(std::move(r));
  }

  std::unordered_map<std::string, NodeId> dense;
  std::vector<std::string> names;
  NodeId n;
  if (numeric) {
    // already dense-ish integer ids; keep them verbatim
    std::uint64_t distinct_bound = 2 * rows.size() + 1;
    if (max_id + 1 > std::max<std::uint64_t>(4 * distinct_bound, 1024)) numeric = false;
  }
  if (numeric) {
    n = static_cast<NodeId>(max_id + 1);
  } else {
    for (const Row& r : rows) {
      for (const std::string* s : {&r.u, &r.v}) {
        if (dense.emplace(*s, static_cast<NodeId>(names.size())).second) names.push_back(*s);
      }
    }
    n = static_cast<NodeId>(names.size());
  }
  if (rows.empty()) throw Error(Errc::ParseError, path + ": no rows");

  ParsedGraph out{DynamicGraph(n, model), std::move(names)};
  auto id_of = [&](const std::string& s) {
    return numeric ? static_cast<NodeId>(std::stoull(s)) : dense.at(s);
  };
  for (const Row& r : rows) {
    if (r.w == 0.0) continue;  // weight 0 == absent
    try {
      out.graph.apply_update({0, id_of(r.u), id_of(r.v), true, r.w});
    } catch (const Error& e) {
      throw Error(e.code(), loc(path, r.line) + e.what());
    }
  }
  return out;
}

void write_graph_tsv(const DynamicGraph& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  if (g.model() == Model::LT) {
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (g.self_weight(v) > 0.0) {
        os << v << '\t' << v << '\t';
        write_double(os, g.self_weight(v));
        os << '\n';
      }
    }
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (const InEdge& e : g.in_neighbors(v)) {
      os << e.src << '\t' << v << '\t';
      write_double(os, e.w);
      os << '\n';
    }
  }
}

void write_dictionary_tsv(const std::vector<std::string>& names, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  for (std::size_t i = 0; i < names.size(); ++i) os << i << '\t' << names[i] << '\n';
}

std::vector<std::string> parse_dictionary_tsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);
  std::vector<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::size_t id;
    std::string name;
    if (!(ls >> id >> name) || id != names.size())
      throw Error(Errc::ParseError, loc(path, line_no) + "bad dictionary row");
    names.push_back(std::move(name));
  }
  return names;
}

std::vector<WeightUpdate> parse_stream_tsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);
  std::vector<WeightUpdate> out;
  std::string line, sign;
  std::size_t line_no = 0;
  std::uint64_t prev_t = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    WeightUpdate up;
    if (!(ls >> up.t >> up.u >> up.v >> sign >> up.delta))
      throw Error(Errc::ParseError, loc(path, line_no) + "expected: t u v +|- delta");
    if (sign == "+") up.increase = true;
    else if (sign == "-") up.increase = false;
    else throw Error(Errc::ParseError, loc(path, line_no) + "sign must be + or -");
    if (!(up.delta > 0.0) || !std::isfinite(up.delta))
      throw Error(Errc::ParseError, loc(path, line_no) + "delta must be positive and finite");
    if (up.t < prev_t)
      throw Error(Errc::TimestampRegression,
                  loc(path, line_no) + "timestamp " + std::to_string(up.t) + " after " +
                      std::to_string(prev_t));
    prev_t = up.t;
    out.push_back(up);
  }
  return out;
}

void write_stream_tsv(const std::vector<WeightUpdate>& stream, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  for (const WeightUpdate& up : stream) {
    os << up.t << '\t' << up.u << '\t' << up.v << '\t' << (up.increase ? '+' : '-') << '\t';
    write_double(os, up.delta);
    os << '\n';
  }
}

Workload generate_workload(const DynamicGraph& full, const WorkloadSpec& spec) {
  double fsum = spec.base_frac + spec.churn_frac + spec.arrival_frac;
  if (std::abs(fsum - 1.0) > 1e-9)
    throw Error(Errc::FractionMismatch, "base+churn+arrival fractions must sum to 1");
  if (spec.base_frac < 0.0 || spec.churn_frac < 0.0 || spec.arrival_frac < 0.0)
    throw Error(Errc::FractionMismatch, "fractions must be non-negative");

  const NodeId n = full.num_nodes();
  Rng rng(spec.seed);

  struct E {
    NodeId u, v;
  };
  std::vector<E> edges;
  full.for_each_edge([&](NodeId u, NodeId v, double) { edges.push_back({u, v}); });
  const std::size_t m = edges.size();

  // canonical weight of an edge into v
  std::vector<double> weight_into(n, 1.0);
  if (spec.model == Model::IC)
    for (NodeId v = 0; v < n; ++v)
      if (full.in_degree(v) > 0) weight_into[v] = 1.0 / static_cast<double>(full.in_degree(v));

  // Fisher-Yates, then slice off churn and arrival sets
  for (std::size_t i = m; i > 1; --i)
    std::swap(edges[i - 1], edges[rng.below(i)]);
  std::size_t n_churn = static_cast<std::size_t>(std::llround(spec.churn_frac * static_cast<double>(m)));
  std::size_t n_arrival = static_cast<std::size_t>(std::llround(spec.arrival_frac * static_cast<double>(m)));
  if (n_churn + n_arrival > m) n_arrival = m - n_churn;

  Workload w{DynamicGraph(n, spec.model), DynamicGraph(n, spec.model), {}};
  if (spec.model == Model::LT) {
    for (NodeId v = 0; v < n; ++v) {
      if (full.self_weight(v) > 0.0) {
        w.base.apply_update({0, v, v, true, full.self_weight(v)});
        w.final_graph.apply_update({0, v, v, true, full.self_weight(v)});
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double wt = weight_into[edges[i].v];
    if (i >= n_churn + n_arrival || i < n_churn)  // churn and untouched edges sit in the base
      w.base.apply_update({0, edges[i].u, edges[i].v, true, wt});
    w.final_graph.apply_update({0, edges[i].u, edges[i].v, true, wt});
  }

  struct Pending {
    WeightUpdate up;
    std::size_t churn_edge;  // pair ordering key; SIZE_MAX for arrivals
  };
  std::vector<Pending> pend;
  for (std::size_t i = 0; i < n_churn; ++i) {
    double d = 0.0;
    while (d <= 0.0) d = rng.uniform01();
    d *= weight_into[edges[i].v];
    pend.push_back({{0, edges[i].u, edges[i].v, false, d}, i});
    pend.push_back({{0, edges[i].u, edges[i].v, true, d}, i});
  }
  for (std::size_t i = n_churn; i < n_churn + n_arrival; ++i)
    pend.push_back({{0, edges[i].u, edges[i].v, true, weight_into[edges[i].v]}, SIZE_MAX});

  for (std::size_t i = pend.size(); i > 1; --i)
    std::swap(pend[i - 1], pend[rng.below(i)]);
  // a churn pair must decrease before it increases; swap misordered pairs in place
  std::unordered_map<std::size_t, std::size_t> first_pos;
  for (std::size_t i = 0; i < pend.size(); ++i) {
    if (pend[i].churn_edge == SIZE_MAX) continue;
    auto [it, fresh] = first_pos.emplace(pend[i].churn_edge, i);
    if (!fresh && pend[it->second].up.increase) std::swap(pend[it->second], pend[i]);
  }

  w.stream.reserve(pend.size());
  for (std::size_t i = 0; i < pend.size(); ++i) {
    WeightUpdate up = pend[i].up;
    up.t = i + 1;
    w.stream.push_back(up);
  }
  return w;
}

}  // namespace rivulet
