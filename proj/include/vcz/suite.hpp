#pragma once

// Randomized forward-invariance campaign: simulate seeded random scenarios and
// check that the center never violates any barrier beyond the sampled-data tolerance.

#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "vcz/random_scenario.hpp"
#include "vcz/simulator.hpp"

namespace vcz {

struct SuiteEntry {
  std::uint64_t seed = 0;
  std::size_t obstacles = 0;
  AbortKind abort = AbortKind::None;
  bool all_certified = false;
  double min_barrier = 0.0;
  double terminal_distance = 0.0;
  double max_e_hat = 0.0;
  bool ptra_pass = false;
  std::string note;

  /// Counts toward the invariance property (infeasible-QP runs are excluded).
  bool included() const { return abort != AbortKind::QpInfeasible && all_certified; }
  bool invariant_holds() const { return min_barrier >= -kInvarianceTol; }
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;

  int excluded_infeasible() const {
    int k = 0;
    for (const auto& e : entries) k += e.abort == AbortKind::QpInfeasible;
    return k;
  }
  int violations() const {
    int k = 0;
    for (const auto& e : entries) k += e.included() && !e.invariant_holds();
    return k;
  }
};

inline SuiteEntry run_suite_entry(std::uint64_t seed, const RandomScenarioOptions& opt) {
  SuiteEntry e;
  e.seed = seed;
  try {
    const Scenario s = random_scenario(seed, opt);
    e.obstacles = s.obstacles.size();
    const RunResult r = run(s, false);
    e.abort = r.abort;
    e.all_certified = r.metrics.all_qp_certified;
    e.min_barrier = r.metrics.min_barrier;
    e.terminal_distance = r.metrics.terminal_distance;
    e.max_e_hat = r.metrics.max_e_hat;
    e.ptra_pass = r.metrics.ptra_pass;
    e.note = r.abort_message;
  } catch (const std::exception& ex) {
    e.abort = AbortKind::QpInfeasible;
    e.note = ex.what();
  }
  return e;
}

/// Scenarios seed_base, seed_base + 1, ... run concurrently; results keep seed order.
inline SuiteResult run_invariance_suite(std::uint64_t seed_base, int count, const RandomScenarioOptions& opt = {}) {
  SuiteResult res;
  res.entries.resize(static_cast<std::size_t>(count));
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < count; start += static_cast<int>(workers)) {
    std::vector<std::future<SuiteEntry>> batch;
    for (int i = start; i < std::min(count, start + static_cast<int>(workers)); ++i)
      batch.push_back(std::async(std::launch::async, run_suite_entry, seed_base + static_cast<std::uint64_t>(i), opt));
    for (std::size_t k = 0; k < batch.size(); ++k) res.entries[static_cast<std::size_t>(start) + k] = batch[k].get();
  }
  return res;
}

}  // namespace vcz
