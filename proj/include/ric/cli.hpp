#pragma once

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ric/ric.hpp"

namespace ric::cli {

inline constexpr const char* kArtifactVersion = "ric 1.0.0";

/// Exit code for an error: 2 for usage, IO and malformed input, 1 otherwise.
inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::IoError:
    case Errc::ParseError:
    case Errc::InvalidConfig:
    case Errc::DuplicateEdge:
    case Errc::SelfLoop:
    case Errc::EndpointOutOfRange:
      return 2;
    default:
      return 1;
  }
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::IoError, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << bytes;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

/// Shortest decimal that round-trips.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::vector<Graph> graphs_of(const std::vector<GraphRecord>& records) {
  std::vector<Graph> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.graph);
  return out;
}

/// Collects what a run read and wrote, then writes the manifest.
class Run {
 public:
  Run(std::string subcommand, const CLI::App& app) : subcommand_(std::move(subcommand)), start_(Clock::now()) {
    for (const CLI::Option* opt : app.get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto res = opt->reduced_results();
        std::string joined;
        for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
        flags_[name] = opt->get_expected_min() == 0 ? "true" : joined;
      } else {
        std::string d = opt->get_default_str();
        if (d.size() >= 2 && d.front() == '[' && d.back() == ']') d = d.substr(1, d.size() - 2);
        flags_[name] = opt->get_expected_min() == 0 ? "false" : d;
      }
    }
  }

  std::string input(const std::string& path) {
    std::string bytes = read_file(path);
    inputs_[path] = sha256_hex(bytes);
    return bytes;
  }

  void output(const std::string& path, const std::string& bytes) {
    write_file(path, bytes);
    outputs_[path] = sha256_hex(bytes);
  }

  void write_manifest(const std::string& path, std::optional<std::uint64_t> seed) const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand_;
    j["flags"] = flags_;
    if (seed) j["seed"] = *seed;
    else j["seed"] = nullptr;
    j["artifact_version"] = kArtifactVersion;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start_).count();
    write_file(path, j.dump(2) + "\n");
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::string subcommand_;
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> inputs_, outputs_;
  Clock::time_point start_;
};

inline std::vector<GraphRecord> parse_graphs(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_graphs(in);
}

/// Writes `text` to `out` if given (plus a manifest next to it), else stdout.
inline void emit(Run& run, const std::string& out, const std::string& text, std::optional<std::uint64_t> seed) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  run.output(out, text);
  run.write_manifest(out + ".manifest.json", seed);
}

struct GenDataArgs {
  DatagenConfig cfg;
  std::optional<std::size_t> n_cap;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t jobs = 1;
};

struct TrainArgs {
  std::string data, out, log;
  TrainConfig cfg;
};

struct SampleArgs {
  std::string model, data, out, trace;
  ChainConfig chain;
  std::size_t chains = 20;
  std::uint64_t seed = 0;
  std::size_t thin = 1, burn_in = 0, jobs = 1;
};

struct EvalArgs {
  std::string samples, reference, out_dir;
  EvalConfig cfg;
};

struct InspectArgs {
  std::string in, out;
  std::size_t max_n = kDodMaxNodes;
  CorruptionConfig corruption;
  std::uint64_t seed = 0;
};

inline void run_gen_data(const CLI::App& app, GenDataArgs& a) {
  Run run("gen-data", app);
  a.cfg.n_cap = a.n_cap;
  a.cfg.validate();
  const auto items = generate_dataset(a.cfg, a.seed, a.jobs);
  std::ostringstream text;
  write_dataset(text, items);
  run.output(a.out, text.str());
  run.write_manifest(a.out + ".manifest.json", a.seed);
  ric::log::info("gen-data: wrote ", items.size(), " graphs to ", a.out);
}

inline void run_train(const CLI::App& app, TrainArgs& a) {
  Run run("train", app);
  a.cfg.validate();
  const auto data = graphs_of(parse_graphs(run.input(a.data)));
  for (const Graph& g : data)
    if (g.node_count() < 2 || !is_laman(g)) throw Error(Errc::NotLaman, "training set contains a non-Laman graph");
  const TrainResult r = train(data, a.cfg, [](const EpochLog& e) {
    ric::log::info("epoch ", e.epoch, " loss ", e.loss, " step ", e.step_size);
  });
  run.output(a.out, params_to_json(r.params).dump() + "\n");
  if (!a.log.empty()) {
    std::ostringstream csv;
    write_train_log_csv(csv, r.log);
    run.output(a.log, csv.str());
  }
  run.write_manifest(a.out + ".manifest.json", a.cfg.seed);
}

inline void run_sample(const CLI::App& app, SampleArgs& a) {
  Run run("sample", app);
  a.chain.validate();
  if (a.chains == 0) throw Error(Errc::InvalidConfig, "chains must be positive");
  const std::string model_bytes = run.input(a.model);
  ModelParams params;
  try {
    params = params_from_json(nlohmann::json::parse(model_bytes));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad model file: ") + e.what());
  }
  const auto pool = graphs_of(parse_graphs(run.input(a.data)));
  const auto runs = run_chains(pool, params, a.chain, a.chains, a.seed, a.jobs);
  std::ostringstream graphs, traces;
  std::size_t kept = 0;
  for (const ChainRun& c : runs) {
    for (const ChainRecord* r : select_records(c, a.burn_in, a.thin)) {
      write_graph_line(graphs, r->reconstructed, "c" + std::to_string(c.chain) + "-t" + std::to_string(r->index));
      traces << record_to_json(c.chain, *r).dump() << '\n';
      ++kept;
    }
  }
  run.output(a.out, graphs.str());
  run.output(a.trace.empty() ? a.out + ".trace.jsonl" : a.trace, traces.str());
  run.write_manifest(a.out + ".manifest.json", a.seed);
  ric::log::info("sample: kept ", kept, " records");
}

inline void run_eval(const CLI::App& app, EvalArgs& a) {
  Run run("eval", app);
  const auto samples = graphs_of(parse_graphs(run.input(a.samples)));
  const auto reference = graphs_of(parse_graphs(run.input(a.reference)));
  const EvalReport rep = eval_report(samples, reference, a.cfg);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  run.output((dir / "report.json").string(), report_to_json(rep).dump(2) + "\n");
  run.output((dir / "report.csv").string(), report_to_csv(rep));
  run.output((dir / "dod_hist.svg").string(), dod_histogram_svg(rep));
  run.write_manifest((dir / "manifest.json").string(), a.cfg.seed);
}

inline void run_check(const CLI::App& app, InspectArgs& a) {
  Run run("check", app);
  std::string text;
  for (const auto& r : parse_graphs(run.input(a.in))) text += is_valid_laman(r.graph) ? "true\n" : "false\n";
  emit(run, a.out, text, std::nullopt);
}

inline void run_dod(const CLI::App& app, InspectArgs& a) {
  Run run("dod", app);
  std::string text;
  for (const auto& r : parse_graphs(run.input(a.in)))
    text += format_double(count_well_constrained_subgraphs(r.graph, kDodMinSubgraphSize, a.max_n).dod) + "\n";
  emit(run, a.out, text, std::nullopt);
}

inline void run_corrupt(const CLI::App& app, InspectArgs& a) {
  Run run("corrupt", app);
  a.corruption.validate();
  std::string text;
  const auto records = parse_graphs(run.input(a.in));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Graph& g = records[i].graph;
    if (g.node_count() < 2 || !is_laman(g)) throw Error(Errc::NotLaman, "graph " + std::to_string(i) + " is not Laman");
    Rng rng = derive_rng(a.seed, {0xC0, i});
    text += trace_to_json(corrupt(g, a.corruption, rng)).dump() + "\n";
  }
  emit(run, a.out, text, a.seed);
}

inline int dispatch(int argc, char** argv) {
  CLI::App app{"Generative model over Laman graphs by reversible inductive construction"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kArtifactVersion);

  GenDataArgs gd;
  auto* gen = app.add_subcommand("gen-data", "Generate a Henneberg dataset");
  gen->add_option("--count", gd.cfg.count, "Number of graphs");
  gen->add_option("--n-mean", gd.cfg.n_mean, "Mean node count");
  gen->add_option("--n-std", gd.cfg.n_std, "Node count standard deviation");
  gen->add_option("--n-cap", gd.n_cap, "Upper clamp on node count");
  gen->add_option("--p-low", gd.cfg.p_low, "Lower bound of the type-I probability");
  gen->add_option("--p-high", gd.cfg.p_high, "Upper bound of the type-I probability");
  gen->add_option("--seed", gd.seed, "Random seed");
  gen->add_option("--out", gd.out, "Output JSONL")->required();
  gen->add_option("--jobs", gd.jobs, "Worker threads");

  TrainArgs tr;
  auto* trn = app.add_subcommand("train", "Train a reconstruction model");
  trn->add_option("--data", tr.data, "Training graphs (JSONL)")->required()->check(CLI::ExistingFile);
  trn->add_option("--epochs", tr.cfg.epochs, "Epochs");
  trn->add_option("--batch-size", tr.cfg.batch_size, "Minibatch size");
  trn->add_option("--lr", tr.cfg.base_lr, "Base step size at batch 128, scaled linearly with batch size");
  trn->add_option("--warmup", tr.cfg.warmup_epochs, "Linear warm-up epochs");
  trn->add_option("--decay", tr.cfg.decay_epochs, "Epochs after which the step size drops by 10x")->delimiter(',');
  trn->add_option("--hidden", tr.cfg.hyper.hidden, "Hidden width");
  trn->add_option("--rounds", tr.cfg.hyper.rounds, "Message-passing rounds");
  trn->add_option("--mean-steps", tr.cfg.corruption.mean_steps, "Expected corruption length");
  trn->add_option("--size-min", tr.cfg.corruption.size_min, "Smallest graph a move may produce");
  trn->add_option("--size-max", tr.cfg.corruption.size_max, "Largest graph a move may produce");
  trn->add_option("--seed", tr.cfg.seed, "Random seed");
  trn->add_option("--out", tr.out, "Model checkpoint (JSON)")->required();
  trn->add_option("--log", tr.log, "Per-epoch CSV log");
  trn->add_option("--jobs", tr.cfg.jobs, "Worker threads");

  SampleArgs sm;
  auto* smp = app.add_subcommand("sample", "Run Markov chains with a trained model");
  smp->add_option("--model", sm.model, "Model checkpoint")->required()->check(CLI::ExistingFile);
  smp->add_option("--data", sm.data, "Seed pool (JSONL)")->required()->check(CLI::ExistingFile);
  smp->add_option("--transitions", sm.chain.transitions, "Transitions per chain");
  smp->add_option("--chains", sm.chains, "Independent chains");
  smp->add_option("--mean-steps", sm.chain.corruption.mean_steps, "Expected corruption length");
  smp->add_option("--size-min", sm.chain.corruption.size_min, "Smallest graph a move may produce");
  smp->add_option("--size-max", sm.chain.corruption.size_max, "Largest graph a move may produce");
  smp->add_option("--max-steps", sm.chain.max_reconstruction_steps, "Reconstruction step budget");
  smp->add_option("--retries", sm.chain.resample_transition_retries, "Transition resamples before giving up");
  smp->add_option("--seed", sm.seed, "Random seed");
  smp->add_option("--thin", sm.thin, "Keep every k-th record");
  smp->add_option("--burn-in", sm.burn_in, "Records dropped at the start of each chain");
  smp->add_option("--out", sm.out, "Sampled graphs (JSONL)")->required();
  smp->add_option("--trace", sm.trace, "Trace sidecar (default <out>.trace.jsonl)");
  smp->add_option("--jobs", sm.jobs, "Worker threads");

  EvalArgs ev;
  auto* evl = app.add_subcommand("eval", "Compare samples with a reference set");
  evl->add_option("--samples", ev.samples, "Sampled graphs")->required()->check(CLI::ExistingFile);
  evl->add_option("--reference", ev.reference, "Reference graphs")->required()->check(CLI::ExistingFile);
  evl->add_option("--reps", ev.cfg.reps, "Bootstrap replicates");
  evl->add_option("--seed", ev.cfg.seed, "Random seed");
  evl->add_option("--out-dir", ev.out_dir, "Report directory")->required();
  evl->add_flag("--skip-large", ev.cfg.skip_large, "Skip graphs too large for exact DoD");
  evl->add_option("--jobs", ev.cfg.jobs, "Worker threads");

  InspectArgs ck, dd, cr;
  auto* chk = app.add_subcommand("check", "Print true/false per graph: is it Laman");
  chk->add_option("--in", ck.in, "Graphs (JSONL)")->required()->check(CLI::ExistingFile);
  chk->add_option("--out", ck.out, "Output file (default stdout)");
  auto* dod = app.add_subcommand("dod", "Print the degree of decomposability per graph");
  dod->add_option("--in", dd.in, "Graphs (JSONL)")->required()->check(CLI::ExistingFile);
  dod->add_option("--max-n", dd.max_n, "Largest node count for the exact count");
  dod->add_option("--out", dd.out, "Output file (default stdout)");
  auto* cor = app.add_subcommand("corrupt", "Print one corruption trace per graph as JSON");
  cor->add_option("--in", cr.in, "Graphs (JSONL)")->required()->check(CLI::ExistingFile);
  cor->add_option("--mean-steps", cr.corruption.mean_steps, "Expected corruption length");
  cor->add_option("--size-min", cr.corruption.size_min, "Smallest graph a move may produce");
  cor->add_option("--size-max", cr.corruption.size_max, "Largest graph a move may produce");
  cor->add_option("--seed", cr.seed, "Random seed");
  cor->add_option("--out", cr.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*gen) run_gen_data(*gen, gd);
    else if (*trn) run_train(*trn, tr);
    else if (*smp) run_sample(*smp, sm);
    else if (*evl) run_eval(*evl, ev);
    else if (*chk) run_check(*chk, ck);
    else if (*dod) run_dod(*dod, dd);
    else if (*cor) run_corrupt(*cor, cr);
  } catch (const Error& e) {
    ric::log::error(to_string(e.code()), ": ", e.what());
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    ric::log::error("IoError: ", e.what());
    return 2;
  } catch (const std::exception& e) {
    ric::log::error("internal error: ", e.what());
    return 1;
  }
  return 0;
}

}  // namespace ric::cli
