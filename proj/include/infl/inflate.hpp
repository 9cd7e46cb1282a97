#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infl/lpcore.hpp"
#include "infl/model.hpp"
#include "infl/outcome_space.hpp"

namespace infl {

/// Default cap on the number of raw inflation assignments that may be
/// enumerated. Exceeding it is a hard error, never a silent truncation.
constexpr std::uint64_t kDefaultEnumerationBudget = 1ull << 28;

struct ResourceError : std::runtime_error {
    std::uint64_t raw_count;
    explicit ResourceError(std::uint64_t count)
        : std::runtime_error("enumeration budget exceeded: " + std::to_string(count) +
                             " raw inflation assignments"),
          raw_count(count) {}
};

/// One copy of an observed variable in the inflation: the original variable
/// together with its tuple of copy indices, one per latent parent.
struct InflationVariable {
    int observed;                // index into scenario.observed_names
    std::vector<int> copy_tuple; // 0-based, one entry per element of L_x, in L_x order
};

/// The order-n inflation of a correlation scenario: the copy-indexed variable
/// universe and the product of symmetric groups acting on the copy indices.
/// Variables are ordered by observed index, then lexicographically by tuple.
struct InflationProblem {
    CorrelationScenario scenario;
    int order = 1;
    std::vector<InflationVariable> variables;

    OutcomeSpace assignment_space() const;  // joint outcomes of all inflation variables
    double group_order() const;             // (n!)^L

    /// Variable permutations induced by every group element (n!)^L of them,
    /// in lexicographic order over the per-latent permutation tuples.
    /// perm[v] = index of the variable whose value position v receives.
    std::vector<std::vector<std::uint32_t>> group_variable_permutations() const;

    /// Positions of the diagonal variables A_x^{i..i} for blocks i < g,
    /// ordered block-major then by observed index.
    std::vector<std::uint32_t> diagonal_positions(int g) const;
};

InflationProblem build_inflation(const CorrelationScenario& scenario, int order);

/// Orbits of full joint assignments under the symmetry group. Representatives
/// are the lexicographically least members, listed in ascending raw order.
struct OrbitIndex {
    std::vector<std::uint64_t> representatives;
    std::vector<std::uint64_t> sizes;

    std::size_t count() const { return representatives.size(); }
};

OrbitIndex orbits(const InflationProblem& problem, std::uint64_t budget = kDefaultEnumerationBudget);

/// Row labels carried through to witness extraction.
struct RowInfo {
    enum class Kind { Normalization, DiagonalProduct, EventProduct };
    Kind kind = Kind::Normalization;
    std::uint64_t diag_index = 0;        // DiagonalProduct: flat degree-g block tuple
    std::vector<int> event_tuple;        // EventProduct: indices into the event list
};

/// Sparse equalities over orbit-mass variables. Coefficients are
/// (members satisfying the row) / (orbit size); nonnegativity is implicit.
struct ConstraintSet {
    std::uint32_t variable_count = 0;    // = orbit count
    int degree = 0;                      // g of the product rows
    std::vector<SparseRow> rows;
    std::vector<RowInfo> info;

    LinearProgram to_linear_program() const;  // zero objective
};

/// Per-orbit counts of members whose first g diagonal blocks take each joint
/// value; column-major over orbits. Shared backbone of the constraint
/// builders and of witness normalization.
struct DiagonalCounts {
    int degree = 0;
    std::uint64_t row_count = 0;                     // (prod d_x)^g
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> by_orbit;  // (diag index, count)
};

DiagonalCounts diagonal_counts(const InflationProblem& problem, const OrbitIndex& index, int g,
                               std::uint64_t budget = kDefaultEnumerationBudget);

/// Equalities tying the degree-g diagonal marginal to the degree-g lifting of p:
/// one row per degree-g block assignment, plus the normalization row (first).
ConstraintSet diagonal_constraints(const InflationProblem& problem, const OrbitIndex& index,
                                   const Distribution& p, int g,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

/// Event-restricted variant: one row per n-tuple of measurable events, with
/// right-hand side prod_i P(e^i), plus the normalization row (first).
ConstraintSet event_constraints(const InflationProblem& problem, const OrbitIndex& index,
                                const EventTable& events,
                                std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace infl
