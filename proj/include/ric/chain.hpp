#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ric/graph_io.hpp"
#include "ric/reconstructor.hpp"

namespace ric {

struct ChainConfig {
  std::size_t transitions = 1000;
  CorruptionConfig corruption;  // also supplies the size bounds for reconstruction
  std::size_t max_reconstruction_steps = kDefaultMaxReconstructionSteps;
  std::size_t resample_transition_retries = 5;

  void validate() const {
    if (transitions == 0) throw Error(Errc::InvalidConfig, "transitions must be positive");
    corruption.validate();
  }
};

struct ChainRecord {
  std::size_t index = 0;
  std::size_t corruption_steps = 0;
  Graph corrupted;
  std::vector<Move> corruption_moves;
  Graph reconstructed;  // compacted to 0..n-1; the next transition starts here
  std::vector<Move> reconstruction_moves;
  std::size_t attempts = 1;  // > 1 when the transition was resampled
  bool hit_max_steps = false;
};

/// One Gibbs transition: corrupt, then reconstruct. If the reconstructor
/// fails to stop within the step budget, the whole transition (corruption
/// included) is redrawn, up to `resample_transition_retries` more times.
/// Depends only on the current sample and the rng.
inline ChainRecord chain_transition(const Graph& current, const ModelParams& params, const ChainConfig& cfg, Rng& rng,
                                    std::size_t index) {
  ChainRecord rec;
  rec.index = index;
  for (std::size_t attempt = 0; attempt <= cfg.resample_transition_retries; ++attempt) {
    CorruptionTrace trace = corrupt(current, cfg.corruption, rng);
    try {
      ReconstructionResult r =
          sample_reconstruction(trace.final_state(), params, rng, cfg.corruption.bounds(), cfg.max_reconstruction_steps);
      rec.corruption_steps = trace.steps.size();
      rec.corrupted = trace.final_state();
      rec.corruption_moves.clear();
      for (auto& s : trace.steps) rec.corruption_moves.push_back(s.move);
      rec.reconstructed = compacted(r.graph);
      rec.reconstruction_moves = std::move(r.moves);
      rec.attempts = attempt + 1;
      return rec;
    } catch (const Error& e) {
      if (e.code() != Errc::MaxStepsExceeded) throw;
      rec.hit_max_steps = true;
    }
  }
  throw Error(Errc::RetryBudgetExhausted, "transition " + std::to_string(index) + " failed after " +
                                              std::to_string(cfg.resample_transition_retries + 1) + " attempts");
}

/// Runs one chain from `init`, one record per transition, no thinning.
inline std::vector<ChainRecord> run_chain(const Graph& init, const ModelParams& params, const ChainConfig& cfg,
                                          Rng& rng) {
  cfg.validate();
  if (init.node_count() < 2 || !is_laman(init)) throw Error(Errc::NotLaman, "chain must start from a Laman graph");
  std::vector<ChainRecord> out;
  out.reserve(cfg.transitions);
  Graph current = compacted(init);
  for (std::size_t t = 0; t < cfg.transitions; ++t) {
    out.push_back(chain_transition(current, params, cfg, rng, t));
    current = out.back().reconstructed;
  }
  return out;
}

struct ChainRun {
  std::size_t chain = 0;
  std::size_t seed_index = 0;  // which pool graph seeded the chain
  std::vector<ChainRecord> records;
};

/// `chains` independent chains, chain i on stream (seed, i) starting from a
/// uniformly chosen pool graph. Output order is by chain index.
inline std::vector<ChainRun> run_chains(const std::vector<Graph>& pool, const ModelParams& params,
                                        const ChainConfig& cfg, std::size_t chains, std::uint64_t seed,
                                        std::size_t jobs = 1) {
  if (pool.empty()) throw Error(Errc::InvalidConfig, "seed pool is empty");
  std::vector<ChainRun> runs(chains);
  parallel_for(chains, jobs, [&](std::size_t i) {
    Rng rng = derive_rng(seed, {0xC4A1, i});
    const std::size_t start = uniform_index(rng, pool.size());
    runs[i] = ChainRun{i, start, run_chain(pool[start], params, cfg, rng)};
  });
  return runs;
}

/// Post hoc subsampling: drop the first burn_in records, keep every thin-th.
inline std::vector<const ChainRecord*> select_records(const ChainRun& run, std::size_t burn_in, std::size_t thin) {
  std::vector<const ChainRecord*> out;
  if (thin == 0) thin = 1;
  for (std::size_t i = burn_in; i < run.records.size(); i += thin) out.push_back(&run.records[i]);
  return out;
}

inline nlohmann::ordered_json record_to_json(std::size_t chain, const ChainRecord& r) {
  nlohmann::ordered_json j;
  j["chain"] = chain;
  j["index"] = r.index;
  j["corruption_steps"] = r.corruption_steps;
  nlohmann::ordered_json cm = nlohmann::ordered_json::array();
  for (const Move& m : r.corruption_moves) cm.push_back(move_to_json(m));
  j["corruption_moves"] = std::move(cm);
  j["corrupted"] = graph_to_json(r.corrupted);
  nlohmann::ordered_json rm = nlohmann::ordered_json::array();
  for (const Move& m : r.reconstruction_moves) rm.push_back(move_to_json(m));
  j["reconstruction_moves"] = std::move(rm);
  j["attempts"] = r.attempts;
  j["resampled"] = r.attempts > 1;
  j["hit_max_steps"] = r.hit_max_steps;
  return j;
}

}  // namespace ric
