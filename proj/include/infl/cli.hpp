#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "infl/inflate.hpp"

namespace infl::cli {

// Exit codes, exhaustive and mutually exclusive.
inline constexpr int kExitFeasible = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitResourceError = 3;
inline constexpr int kExitIncompatible = 10;
inline constexpr int kExitInconclusive = 11;
inline constexpr int kExitWitnessFlagged = 12;  // verify-witness only

struct Options {
    int order = 2;
    std::uint64_t seed = 0;
    double tolerance = 1e-7;
    std::uint64_t budget = kDefaultEnumerationBudget;
    bool force_events = false;
    int samples = 100;
    std::string out_path;  // empty: write the document to stdout
};

/// Feasibility / incompatibility check. Emits a verdict document (JSON);
/// exit 0 feasible-at-order-n, 10 incompatible, 11 inconclusive.
int cmd_check(const std::string& graph_path, const std::string& input_path, const Options& options,
              std::ostream& out, std::ostream& diag);

/// Certified polynomial lower bound f_n with the optimal diagonal marginal.
int cmd_optimize(const std::string& graph_path, const std::string& poly_path, const Options& options,
                 std::ostream& out, std::ostream& diag);

/// Unpacked correlation scenario(s) and the full event map.
int cmd_unpack(const std::string& graph_path, const Options& options, std::ostream& out,
               std::ostream& diag);

/// Deterministic LP export of the feasibility program.
int cmd_compile_lp(const std::string& graph_path, const std::string& dist_path, const Options& options,
                   std::ostream& out, std::ostream& diag);

/// Re-verifies witnesses from a verdict document against seeded compatible
/// samples. Exit 0 when sound, 12 when flagged.
int cmd_verify_witness(const std::string& verdict_path, const Options& options, std::ostream& out,
                       std::ostream& diag);

}  // namespace infl::cli
