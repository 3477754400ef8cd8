#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ric/parallel.hpp"
#include "ric/stats.hpp"

namespace ric {

struct EvalConfig {
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  bool skip_large = false;  // drop graphs too large for exact DoD instead of failing
  std::size_t jobs = 1;
};

struct SourceSummary {
  std::string name;
  std::size_t count = 0;
  std::size_t skipped = 0;
  ValidityRate validity;
  std::vector<double> dod;
  double dod_mean = 0.0;
  std::optional<KsReport> dod_ks;  // against the reference
};

struct EvalReport {
  EvalConfig config;
  SourceSummary reference, samples, erdos_renyi;
};

/// DoD per graph. Graphs above the exact-count bound either fail
/// (DodIntractable) or are skipped and counted.
inline std::vector<double> dod_values(std::span<const Graph> graphs, bool skip_large, std::size_t jobs,
                                      std::size_t& skipped) {
  std::vector<std::optional<double>> slots(graphs.size());
  for (const Graph& g : graphs)
    if (g.node_count() > kDodMaxNodes && !skip_large)
      throw Error(Errc::DodIntractable,
                  "graph with " + std::to_string(g.node_count()) + " nodes exceeds the exact DoD bound");
  parallel_for(graphs.size(), jobs, [&](std::size_t i) {
    if (graphs[i].node_count() <= kDodMaxNodes) slots[i] = count_well_constrained_subgraphs(graphs[i]).dod;
  });
  std::vector<double> out;
  skipped = 0;
  for (const auto& s : slots) {
    if (s) out.push_back(*s);
    else ++skipped;
  }
  return out;
}

/// DoD KS and validity for samples and for a G(n, 2n-3) baseline whose node
/// counts are drawn from the reference set. Every random step has its own
/// stream derived from cfg.seed.
inline EvalReport eval_report(std::span<const Graph> samples, std::span<const Graph> reference, const EvalConfig& cfg) {
  if (samples.empty() || reference.empty()) throw Error(Errc::EmptySample, "eval needs samples and reference");
  EvalReport rep;
  rep.config = cfg;
  std::vector<std::size_t> ref_sizes;
  for (const Graph& g : reference) ref_sizes.push_back(g.node_count());
  Rng er_rng = derive_rng(cfg.seed, {0xE5});
  std::vector<std::size_t> er_sizes(samples.size());
  for (auto& n : er_sizes) n = ref_sizes[uniform_index(er_rng, ref_sizes.size())];
  const std::vector<Graph> er = er_baseline(er_sizes, er_rng);

  auto summarize = [&](SourceSummary& s, const char* name, std::span<const Graph> graphs, std::uint64_t stream) {
    s.name = name;
    s.count = graphs.size();
    Rng rng = derive_rng(cfg.seed, {0x7A11D, stream});
    s.validity = validity_rate(graphs, cfg.reps, rng);
    s.dod = dod_values(graphs, cfg.skip_large, cfg.jobs, s.skipped);
    s.dod_mean = mean_of(s.dod);
  };
  summarize(rep.reference, "reference", reference, 0);
  summarize(rep.samples, "samples", samples, 1);
  summarize(rep.erdos_renyi, "erdos_renyi", er, 2);
  if (rep.reference.dod.empty()) throw Error(Errc::EmptySample, "no reference graph has a computable DoD");
  for (auto [src, stream] : {std::pair{&rep.samples, 1U}, std::pair{&rep.erdos_renyi, 2U}}) {
    if (src->dod.empty()) continue;
    Rng rng = derive_rng(cfg.seed, {0x45, stream});
    src->dod_ks = bootstrap_ks(src->dod, rep.reference.dod, cfg.reps, rng);
  }
  return rep;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  auto source = [](const SourceSummary& s) {
    nlohmann::ordered_json j;
    j["count"] = s.count;
    j["dod_skipped"] = s.skipped;
    j["valid_percent"] = s.validity.percent;
    j["valid_bootstrap_sd"] = s.validity.bootstrap_sd;
    j["dod_mean"] = s.dod_mean;
    if (s.dod_ks) {
      j["dod_ks"] = {{"statistic", s.dod_ks->statistic},
                     {"bootstrap_mean", s.dod_ks->bootstrap_mean},
                     {"bootstrap_se", s.dod_ks->bootstrap_se},
                     {"reps", s.dod_ks->reps}};
    }
    return j;
  };
  nlohmann::ordered_json j;
  j["config"] = {{"reps", r.config.reps}, {"seed", r.config.seed}, {"skip_large", r.config.skip_large}};
  j["dod_convention"] = kDodConvention;
  j["erdos_renyi_model"] = "G(n, 2n-3), n drawn from reference node counts";
  j["reference"] = source(r.reference);
  j["samples"] = source(r.samples);
  j["erdos_renyi"] = source(r.erdos_renyi);
  return j;
}

inline std::string report_to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "source,count,valid_percent,valid_bootstrap_sd,dod_mean,dod_ks,dod_ks_bootstrap_mean,dod_ks_bootstrap_se\n";
  for (const SourceSummary* s : {&r.reference, &r.samples, &r.erdos_renyi}) {
    char buf[512];
    if (s->dod_ks) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s->name.c_str(), s->count,
                    s->validity.percent, s->validity.bootstrap_sd, s->dod_mean, s->dod_ks->statistic,
                    s->dod_ks->bootstrap_mean, s->dod_ks->bootstrap_se);
    } else {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g,%.17g,,,\n", s->name.c_str(), s->count, s->validity.percent,
                    s->validity.bootstrap_sd, s->dod_mean);
    }
    out << buf;
  }
  return out.str();
}

/// Overlaid normalized DoD histograms on a 640x400 canvas, 30 bins.
inline std::string dod_histogram_svg(const EvalReport& r) {
  constexpr int kWidth = 640, kHeight = 400, kBins = 30, kMargin = 40;
  const std::array<const SourceSummary*, 3> sources{&r.reference, &r.samples, &r.erdos_renyi};
  const std::array<const char*, 3> colors{"#1f77b4", "#d62728", "#7f7f7f"};
  double hi = 0.0;
  for (const auto* s : sources)
    for (double v : s->dod) hi = std::max(hi, v);
  if (hi <= 0.0) hi = 1.0;
  std::array<std::array<double, kBins>, 3> freq{};
  double top = 0.0;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto& d = sources[k]->dod;
    for (double v : d) {
      const int bin = std::min(kBins - 1, static_cast<int>(v / hi * kBins));
      freq[k][static_cast<std::size_t>(bin)] += 1.0 / static_cast<double>(d.size());
    }
    for (double f : freq[k]) top = std::max(top, f);
  }
  if (top <= 0.0) top = 1.0;
  const double bw = static_cast<double>(kWidth - 2 * kMargin) / kBins;
  const double ph = kHeight - 2 * kMargin;
  std::ostringstream svg;
  char buf[256];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", kMargin,
                kHeight - kMargin, kWidth - kMargin, kHeight - kMargin);
  svg << buf;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"2\" points=\"";
    for (int b = 0; b < kBins; ++b) {
      const double y = kHeight - kMargin - freq[k][static_cast<std::size_t>(b)] / top * ph;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f %.2f,%.2f ", kMargin + b * bw, y, kMargin + (b + 1) * bw, y);
      svg << buf;
    }
    svg << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%zu\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                  kWidth - kMargin - 100, 20 + 14 * k, colors[k], sources[k]->name.c_str());
    svg << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\">DoD (0 to %.3f)</text>\n", kMargin,
                kHeight - 10, hi);
  svg << buf << "</svg>\n";
  return svg.str();
}

}  // namespace ric
