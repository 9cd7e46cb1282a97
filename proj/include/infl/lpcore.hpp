#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace infl {

struct SparseRow {
    std::vector<std::pair<std::uint32_t, double>> coeffs;  // ascending column index
    double rhs = 0.0;
};

/// Equality-constrained LP in standard form:
///   minimize c.x  subject to  A x = b,  x >= 0.
struct LinearProgram {
    std::uint32_t num_vars = 0;
    std::vector<double> objective;  // dense, size num_vars
    std::vector<SparseRow> rows;

    std::vector<std::string> check() const;  // dimensions, finiteness
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

/// Every returned certificate is re-verified against A, b, c before the
/// outcome is handed back; outcomes that fail verification are reported as
/// NumericalFailure, never as a wrong status.
struct SolveOutcome {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective_value = 0.0;
    std::vector<double> primal;  // when Optimal
    std::vector<double> dual;    // equality multipliers, when Optimal
    std::vector<double> farkas;  // when Infeasible: y.A <= 0 componentwise, y.b = 1
};

struct SolverOptions {
    double feasibility_tolerance = 1e-7;
    double nonnegativity_slack = 1e-9;
};

/// Dense two-phase simplex with Bland's rule. Deterministic: identical input
/// gives identical pivots, status, and certificates.
SolveOutcome solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Presolve pass: contracts variables identified by doubleton equality rows of
/// the form  a*x_i - a*x_j = 0  into a single column. Feasibility status is
/// unchanged. Used to make explicitly symmetrized systems tractable.
struct VariableMerge {
    LinearProgram reduced;
    std::vector<std::uint32_t> column_of;  // original column -> reduced column
};
VariableMerge merge_equal_variables(const LinearProgram& lp);

/// Deterministic sparse text export. Shortest round-trip decimals, LF endings,
/// byte-identical across runs for identical input.
std::string export_lp(const LinearProgram& lp);
LinearProgram parse_lp(const std::string& text);

/// Fixed-column interchange layout for external solvers (equality rows, default
/// nonnegative bounds). Not load-bearing for the test suite.
std::string export_mps(const LinearProgram& lp, const std::string& name = "INFLATION");

}  // namespace infl
