// Command-line driver: workload generation, stream tracking with periodic
// reports, influence oracles, report verification, and benchmark timing.
// Exit codes: 0 ok, 2 config error, 3 data error, 4 verdict failure.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rivulet/errors.hpp"
#include "rivulet/oracle.hpp"
#include "rivulet/report.hpp"
#include "rivulet/stream.hpp"
#include "rivulet/threshold_tracker.hpp"
#include "rivulet/topk_tracker.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace rivulet;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::ParseError, "cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  do {
    is.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < is.gcount(); ++i)
      h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ull;
  } while (is);
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fmt_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Model parse_model(const std::string& s) {
  if (s == "lt") return Model::LT;
  if (s == "ic") return Model::IC;
  throw Error(Errc::InvalidConfig, "--model must be lt or ic");
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("RIVULET_SEED");
  if (!env || !*env) return flag_seed;
  char* end = nullptr;
  std::uint64_t s = std::strtoull(env, &end, 10);
  if (end == env || *end) throw Error(Errc::InvalidConfig, "RIVULET_SEED must be an integer");
  return s;
}

void write_manifest(const std::string& path, const ordered_json& j) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidConfig:
    case Errc::FractionMismatch:
      return 2;
    default:
      return 3;
  }
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string graph, model = "lt", out_dir;
  double base_frac = 0.85, churn_frac = 0.05, arrival_frac = 0.10;
  std::uint64_t seed = 1;
  int instances = 1;
};

int cmd_generate(const GenerateArgs& a) {
  if (std::abs(a.base_frac + a.churn_frac + a.arrival_frac - 1.0) > 1e-9) {
    std::cerr << "--base-frac, --churn-frac and --arrival-frac must sum to 1 (got "
              << a.base_frac + a.churn_frac + a.arrival_frac << ")\n";
    return 2;
  }
  if (a.instances < 1) {
    std::cerr << "--instances must be >= 1\n";
    return 2;
  }
  std::uint64_t seed = effective_seed(a.seed);
  Model model = parse_model(a.model);

  auto t0 = Clock::now();
  ParsedGraph pg = parse_graph_tsv(a.graph, model);
  double t_parse = secs_since(t0);

  fs::create_directories(a.out_dir);
  ordered_json outputs = ordered_json::object();
  double t_generate = 0.0, t_write = 0.0;
  for (int i = 0; i < a.instances; ++i) {
    WorkloadSpec spec;
    spec.model = model;
    spec.base_frac = a.base_frac;
    spec.churn_frac = a.churn_frac;
    spec.arrival_frac = a.arrival_frac;
    spec.seed = seed + static_cast<std::uint64_t>(i);
    spec.instances = a.instances;

    t0 = Clock::now();
    Workload wl = generate_workload(pg.graph, spec);
    t_generate += secs_since(t0);

    fs::path dir = a.instances == 1
                       ? fs::path(a.out_dir)
                       : fs::path(a.out_dir) / ("instance-" + std::to_string(i + 1));
    fs::create_directories(dir);
    t0 = Clock::now();
    write_graph_tsv(wl.base, (dir / "base.tsv").string());
    write_stream_tsv(wl.stream, (dir / "stream.tsv").string());
    write_graph_tsv(wl.final_graph, (dir / "final.tsv").string());
    if (!pg.names.empty()) write_dictionary_tsv(pg.names, (dir / "dictionary.tsv").string());
    t_write += secs_since(t0);

    for (const char* f : {"base.tsv", "stream.tsv", "final.tsv"})
      outputs[(dir / f).string()] = fnv1a64_file((dir / f).string());
  }

  ordered_json m;
  m["command"] = "generate";
  m["config"] = ordered_json{{"graph", a.graph},
                             {"model", a.model},
                             {"base_frac", a.base_frac},
                             {"churn_frac", a.churn_frac},
                             {"arrival_frac", a.arrival_frac},
                             {"instances", a.instances}};
  m["seed"] = seed;
  m["inputs"] = ordered_json{{a.graph, fnv1a64_file(a.graph)}};
  m["outputs"] = outputs;
  m["phases"] = ordered_json{{"parse", t_parse}, {"generate", t_generate}, {"write", t_write}};
  write_manifest((fs::path(a.out_dir) / "manifest.json").string(), m);
  return 0;
}

// ------------------------------------------------------------------ oracle

struct OracleArgs {
  std::string graph, model = "lt", method = "exact", out, manifest;
  std::uint64_t trials = 100000, samples = 100000, seed = 1;
  unsigned threads = 1;
};

int cmd_oracle(const OracleArgs& a) {
  std::uint64_t seed = effective_seed(a.seed);
  Model model = parse_model(a.model);
  auto t0 = Clock::now();
  ParsedGraph pg = parse_graph_tsv(a.graph, model);
  double t_parse = secs_since(t0);

  t0 = Clock::now();
  InfluenceTable table;
  if (a.method == "exact") table = exact_influence(pg.graph);
  else if (a.method == "mc") table = mc_influence(pg.graph, a.trials, seed, a.threads);
  else if (a.method == "poll") table = static_poll_estimate(pg.graph, a.samples, seed);
  else throw Error(Errc::InvalidConfig, "--method must be exact, mc or poll");
  double t_compute = secs_since(t0);

  table.write_tsv(a.out);

  ordered_json m;
  m["command"] = "oracle";
  m["config"] = ordered_json{{"graph", a.graph}, {"model", a.model},      {"method", a.method},
                             {"trials", a.trials}, {"samples", a.samples}, {"threads", a.threads}};
  m["seed"] = seed;
  m["inputs"] = ordered_json{{a.graph, fnv1a64_file(a.graph)}};
  m["outputs"] = ordered_json{{a.out, fnv1a64_file(a.out)}};
  m["phases"] = ordered_json{{"parse", t_parse}, {"compute", t_compute}};
  write_manifest(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest, m);
  return 0;
}

// ------------------------------------------------------------------- track

struct TrackArgs {
  std::string graph, stream, model = "lt", mode, out, manifest;
  double T_frac = -1.0, T_abs = -1.0, epsilon = 0.0, delta = 0.0;
  std::uint32_t k = 0;
  std::uint64_t seed = 1, report_every = 0, grow_every = 1;
};

// One tracker of either mode behind a single replay loop.
struct Tracking {
  std::unique_ptr<ThresholdTracker> th;
  std::unique_ptr<TopkTracker> tk;

  void build() { th ? th->build() : tk->build(); }
  void process(const WeightUpdate& up) { th ? th->process_update(up) : tk->process_update(up); }
  TrackerReport report(std::uint64_t t) const { return th ? th->report(t) : tk->report(t); }
  std::uint64_t sample_size() const {
    return th ? th->sample_size() : tk->primary().size();
  }
  std::uint64_t member_entries() const {
    return th ? th->collection().member_entries()
              : tk->primary().member_entries() + tk->filter().member_entries();
  }
  std::uint64_t retrieved() const {
    return th ? th->collection().stats().retrieved
              : tk->primary().stats().retrieved + tk->filter().stats().retrieved;
  }
  const DynamicGraph& graph() const { return th ? th->graph() : tk->graph(); }
};

Tracking make_tracking(const TrackArgs& a, DynamicGraph graph, std::uint64_t seed) {
  Tracking tr;
  if (a.mode == "threshold") {
    bool has_frac = a.T_frac >= 0.0, has_abs = a.T_abs >= 0.0;
    if (has_frac == has_abs)
      throw Error(Errc::InvalidConfig,
                  "threshold mode needs exactly one of --T-frac and --T-abs");
    double T = has_abs ? a.T_abs : a.T_frac * static_cast<double>(graph.num_nodes());
    tr.th = std::make_unique<ThresholdTracker>(std::move(graph),
                                               ThresholdConfig{T, a.epsilon, a.delta}, seed);
  } else if (a.mode == "topk") {
    if (a.k == 0) throw Error(Errc::InvalidConfig, "--k is required in topk mode");
    tr.tk = std::make_unique<TopkTracker>(std::move(graph), TopKConfig{a.k, a.epsilon, a.delta},
                                          seed, a.grow_every);
  } else {
    throw Error(Errc::InvalidConfig, "--mode must be threshold or topk");
  }
  return tr;
}

int cmd_track(const TrackArgs& a) {
  std::uint64_t seed = effective_seed(a.seed);
  auto t0 = Clock::now();
  ParsedGraph pg = parse_graph_tsv(a.graph, parse_model(a.model));
  std::vector<WeightUpdate> stream = parse_stream_tsv(a.stream);
  double t_parse = secs_since(t0);

  Tracking tr = make_tracking(a, std::move(pg.graph), seed);
  t0 = Clock::now();
  tr.build();
  double t_build = secs_since(t0);

  std::ofstream out(a.out);
  if (!out) throw Error(Errc::ParseError, "cannot open " + a.out + " for writing");

  std::vector<double> upd_secs;
  upd_secs.reserve(stream.size());
  std::uint64_t peak_mem = tr.member_entries() + tr.graph().num_nodes();
  std::uint64_t last_t = 0;
  bool final_emitted = false;
  auto t_stream0 = Clock::now();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    t0 = Clock::now();
    tr.process(stream[i]);
    upd_secs.push_back(secs_since(t0));
    peak_mem = std::max(peak_mem, tr.member_entries() + tr.graph().num_nodes());
    last_t = stream[i].t;
    if (a.report_every > 0 && (i + 1) % a.report_every == 0) {
      out << report_to_jsonl(tr.report(last_t)) << '\n';
      final_emitted = i + 1 == stream.size();
    }
  }
  if (!final_emitted) out << report_to_jsonl(tr.report(last_t)) << '\n';
  double t_stream = secs_since(t_stream0);
  out.close();

  ordered_json m;
  m["command"] = "track";
  m["config"] = ordered_json{{"mode", a.mode},       {"model", a.model},
                             {"T_frac", a.T_frac},   {"T_abs", a.T_abs},
                             {"epsilon", a.epsilon}, {"delta", a.delta},
                             {"k", a.k},             {"report_every", a.report_every},
                             {"grow_every", a.grow_every}};
  m["seed"] = seed;
  m["inputs"] =
      ordered_json{{a.graph, fnv1a64_file(a.graph)}, {a.stream, fnv1a64_file(a.stream)}};
  m["phases"] = ordered_json{{"parse", t_parse}, {"build", t_build}, {"stream", t_stream}};
  m["updates"] = stream.size();
  m["sample_size"] = tr.sample_size();
  m["peak_rr_member_entries"] = peak_mem;
  m["update_seconds"] = ordered_json{{"mean", mean_of(upd_secs)},
                                     {"p50", percentile(upd_secs, 0.50)},
                                     {"p90", percentile(upd_secs, 0.90)},
                                     {"p99", percentile(upd_secs, 0.99)},
                                     {"max", upd_secs.empty()
                                                 ? 0.0
                                                 : *std::max_element(upd_secs.begin(),
                                                                     upd_secs.end())}};
  write_manifest(a.manifest.empty() ? a.out + ".manifest.json" : a.manifest, m);
  return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string report, oracle, report2, out;
  double min_jaccard = -1.0;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<TrackerReport> reports = read_report_jsonl(a.report);
  if (reports.empty()) throw Error(Errc::ParseError, a.report + ": no reports");
  const TrackerReport& r = reports.back();
  InfluenceTable oracle = InfluenceTable::read_tsv(a.oracle);

  double recall = report_recall(r, oracle);
  double fp = report_max_fp_error(r, oracle);
  double eps_n = r.epsilon * static_cast<double>(oracle.entries.size());
  bool pass = recall == 1.0 && fp <= eps_n + 1e-9;

  ordered_json v;
  v["command"] = "verify";
  v["inputs"] = ordered_json{{a.report, fnv1a64_file(a.report)},
                             {a.oracle, fnv1a64_file(a.oracle)}};
  v["mode"] = r.mode;
  v["t"] = r.t;
  v["reported"] = r.nodes.size();
  v["recall"] = recall;
  v["max_fp_error"] = fp;
  v["eps_n"] = eps_n;
  if (!a.report2.empty()) {
    std::vector<TrackerReport> reports2 = read_report_jsonl(a.report2);
    if (reports2.empty()) throw Error(Errc::ParseError, a.report2 + ": no reports");
    double j = report_jaccard(r, reports2.back());
    v["inputs"][a.report2] = fnv1a64_file(a.report2);
    v["jaccard"] = j;
    if (a.min_jaccard >= 0.0) pass = pass && j >= a.min_jaccard;
  }
  v["pass"] = pass;

  std::cout << v.dump() << '\n';
  if (!a.out.empty()) write_manifest(a.out, v);
  return pass ? 0 : 4;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  TrackArgs track;  // graph/stream/model/mode/params reused
  std::string out, manifest;
};

int cmd_bench(const BenchArgs& b) {
  const TrackArgs& a = b.track;
  std::uint64_t seed = effective_seed(a.seed);
  ParsedGraph pg = parse_graph_tsv(a.graph, parse_model(a.model));
  std::vector<WeightUpdate> stream = parse_stream_tsv(a.stream);

  Tracking tr = make_tracking(a, pg.graph, seed);
  auto t0 = Clock::now();
  tr.build();
  double t_static_build = secs_since(t0);

  std::vector<double> upd_secs, touched;
  upd_secs.reserve(stream.size());
  touched.reserve(stream.size());
  std::uint64_t prev_retrieved = tr.retrieved();
  t0 = Clock::now();
  for (const WeightUpdate& up : stream) {
    auto u0 = Clock::now();
    tr.process(up);
    upd_secs.push_back(secs_since(u0));
    std::uint64_t now_retrieved = tr.retrieved();
    touched.push_back(static_cast<double>(now_retrieved - prev_retrieved));
    prev_retrieved = now_retrieved;
  }
  double t_incremental = secs_since(t0);

  // from-scratch rebuild at the final snapshot
  Tracking rebuilt = make_tracking(a, tr.graph(), seed);
  t0 = Clock::now();
  rebuilt.build();
  double t_rebuild = secs_since(t0);

  double mean_upd = mean_of(upd_secs);
  std::ofstream os(b.out);
  if (!os) throw Error(Errc::ParseError, "cannot open " + b.out + " for writing");
  os << "metric,value\n";
  os << "updates," << stream.size() << '\n';
  os << "sample_size," << tr.sample_size() << '\n';
  os << "static_build_seconds," << fmt_double(t_static_build) << '\n';
  os << "incremental_total_seconds," << fmt_double(t_incremental) << '\n';
  os << "incremental_mean_seconds," << fmt_double(mean_upd) << '\n';
  os << "incremental_p99_seconds," << fmt_double(percentile(upd_secs, 0.99)) << '\n';
  os << "rebuild_seconds," << fmt_double(t_rebuild) << '\n';
  os << "rebuild_over_mean_update,"
     << fmt_double(mean_upd > 0.0 ? t_rebuild / mean_upd : 0.0) << '\n';
  os << "touched_sets_mean," << fmt_double(mean_of(touched)) << '\n';
  os << "touched_sets_p50," << fmt_double(percentile(touched, 0.50)) << '\n';
  os << "touched_sets_p99," << fmt_double(percentile(touched, 0.99)) << '\n';
  os << "touched_sets_max,"
     << fmt_double(touched.empty() ? 0.0 : *std::max_element(touched.begin(), touched.end()))
     << '\n';
  os.close();

  ordered_json m;
  m["command"] = "bench";
  m["config"] = ordered_json{{"mode", a.mode},       {"model", a.model},
                             {"T_frac", a.T_frac},   {"T_abs", a.T_abs},
                             {"epsilon", a.epsilon}, {"delta", a.delta},
                             {"k", a.k},             {"grow_every", a.grow_every}};
  m["seed"] = seed;
  m["inputs"] =
      ordered_json{{a.graph, fnv1a64_file(a.graph)}, {a.stream, fnv1a64_file(a.stream)}};
  m["outputs"] = ordered_json{{b.out, fnv1a64_file(b.out)}};
  m["phases"] = ordered_json{{"static_build", t_static_build},
                             {"incremental", t_incremental},
                             {"rebuild", t_rebuild}};
  write_manifest(b.manifest.empty() ? b.out + ".manifest.json" : b.manifest, m);
  return 0;
}

void add_track_flags(CLI::App* c, TrackArgs& a, bool with_report_every) {
  c->add_option("--graph", a.graph, "base graph TSV")->required();
  c->add_option("--stream", a.stream, "update stream TSV")->required();
  c->add_option("--model", a.model, "diffusion model: lt|ic")->required();
  c->add_option("--mode", a.mode, "threshold|topk")->required();
  c->add_option("--T-frac", a.T_frac, "threshold T as a fraction of n");
  c->add_option("--T-abs", a.T_abs, "threshold T in absolute influence");
  c->add_option("--epsilon", a.epsilon, "estimation error bound")->required();
  c->add_option("--delta", a.delta, "failure probability")->required();
  c->add_option("--k", a.k, "top-k size (topk mode)");
  c->add_option("--seed", a.seed, "rng seed (RIVULET_SEED overrides)");
  c->add_option("--grow-every", a.grow_every, "adapt topk size every N updates");
  if (with_report_every)
    c->add_option("--report-every", a.report_every, "emit a report every N updates (0: final only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming influential-node tracker over reverse-reachable samples"};
  app.require_subcommand(1);

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "split a static graph into base + update stream");
  gen->add_option("--graph", ga.graph, "full graph TSV")->required();
  gen->add_option("--model", ga.model, "diffusion model: lt|ic")->required();
  gen->add_option("--base-frac", ga.base_frac, "fraction of edges in the base graph only");
  gen->add_option("--churn-frac", ga.churn_frac, "fraction emitting decrease+increase pairs");
  gen->add_option("--arrival-frac", ga.arrival_frac, "fraction arriving as inserts");
  gen->add_option("--seed", ga.seed, "rng seed (RIVULET_SEED overrides)");
  gen->add_option("--instances", ga.instances, "independent instances (seed+i each)");
  gen->add_option("--out-dir", ga.out_dir, "output directory")->required();

  OracleArgs oa;
  CLI::App* orc = app.add_subcommand("oracle", "per-node influence table for a static graph");
  orc->add_option("--graph", oa.graph, "graph TSV")->required();
  orc->add_option("--model", oa.model, "diffusion model: lt|ic")->required();
  orc->add_option("--method", oa.method, "exact|mc|poll");
  orc->add_option("--trials", oa.trials, "mc trials per node");
  orc->add_option("--samples", oa.samples, "poll sample count");
  orc->add_option("--threads", oa.threads, "mc worker threads");
  orc->add_option("--seed", oa.seed, "rng seed (RIVULET_SEED overrides)");
  orc->add_option("--out", oa.out, "output influence TSV")->required();
  orc->add_option("--manifest", oa.manifest, "manifest path (default <out>.manifest.json)");

  TrackArgs ta;
  CLI::App* trk = app.add_subcommand("track", "replay a stream, reporting influential nodes");
  add_track_flags(trk, ta, true);
  trk->add_option("--out", ta.out, "report JSONL path")->required();
  trk->add_option("--manifest", ta.manifest, "manifest path (default <out>.manifest.json)");

  VerifyArgs va;
  CLI::App* ver = app.add_subcommand("verify", "check a report against an influence table");
  ver->add_option("--report", va.report, "tracker report JSONL (last line is checked)")->required();
  ver->add_option("--oracle", va.oracle, "influence table TSV")->required();
  ver->add_option("--report2", va.report2, "second report for Jaccard similarity");
  ver->add_option("--min-jaccard", va.min_jaccard, "fail verdict when Jaccard falls below");
  ver->add_option("--out", va.out, "also write the verdict JSON here");

  BenchArgs ba;
  CLI::App* ben = app.add_subcommand("bench", "incremental vs from-scratch timing");
  add_track_flags(ben, ba.track, false);
  ben->add_option("--out", ba.out, "timing CSV path")->required();
  ben->add_option("--manifest", ba.manifest, "manifest path (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(ga);
    if (orc->parsed()) return cmd_oracle(oa);
    if (trk->parsed()) return cmd_track(ta);
    if (ver->parsed()) return cmd_verify(va);
    if (ben->parsed()) return cmd_bench(ba);
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
