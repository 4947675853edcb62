#pragma once

// End-to-end checks shared by the test suites and the acceptance gate. Each
// returns a verdict with a one-line detail.

#include <chrono>
#include <random>
#include <cstdint>
#include <string>
#include <vector>

#include "uim/model/model.hpp"
#include "uim/repo/tabular.hpp"
#include "uim/telnet/codec.hpp"

namespace uim::testing {

struct Verdict {
  bool pass = false;
  std::string detail;
  std::chrono::milliseconds elapsed{0};
};

/// Random well-formed event; Data and subnegotiation payloads include byte 255.
telnet::Event random_event(std::mt19937_64& rng);

/// Model built straight from tables, sorted like generated XML.
model::RepositoryDoc model_from_tables(const repo::TabularSource& tables);

Verdict check_codec_roundtrip(std::size_t lists = 10000, std::uint64_t seed = 1);
Verdict check_negotiation_convergence();
Verdict check_schema_corpus();
Verdict check_golden_frames();
Verdict check_shell_random_walk(std::size_t docs = 200, std::size_t lines = 100000, std::uint64_t seed = 1);
Verdict check_end_to_end();
Verdict check_tabular_equivalence(std::size_t sources = 100, std::uint64_t seed = 1);
Verdict check_chaos(std::size_t sessions = 50, std::size_t kills = 10, std::uint64_t seed = 1);

/// The operator script used for chaos runs against the warehouse sample,
/// and the number of journal records one full run produces.
const std::vector<std::string>& chaos_script();
inline constexpr std::size_t kChaosRecordsPerRun = 5;

}  // namespace uim::testing
