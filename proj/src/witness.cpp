#include "infl/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace infl {

Polynomial witness_coefficients(const std::vector<double>& farkas, const ConstraintSet& constraints,
                                const CorrelationScenario& scenario, int order,
                                const EventTable* events) {
    if (farkas.size() != constraints.rows.size())
        throw std::invalid_argument("farkas vector length does not match the constraint set");

    Polynomial poly;
    poly.degree = order;
    poly.cards = scenario.cardinalities;
    const OutcomeSpace joint = scenario.joint_space();
    std::uint64_t lifted = 1;
    for (int i = 0; i < order; ++i) lifted *= joint.size();
    poly.coeffs.assign(lifted, 0.0);

    for (std::size_t r = 0; r < constraints.rows.size(); ++r) {
        const RowInfo& info = constraints.info[r];
        if (info.kind == RowInfo::Kind::Normalization) continue;
        const double g = -farkas[r];
        if (g == 0.0) continue;
        if (info.kind == RowInfo::Kind::DiagonalProduct) {
            poly.coeffs[info.diag_index] += g;
        } else {
            if (events == nullptr)
                throw std::invalid_argument("event rows present but no event table supplied");
            // every lifted tuple in e^1 x ... x e^n receives the multiplier
            std::vector<std::size_t> pick(info.event_tuple.size(), 0);
            while (true) {
                std::uint64_t idx = 0;
                for (std::size_t i = 0; i < info.event_tuple.size(); ++i)
                    idx = idx * joint.size() + events->events[info.event_tuple[i]].members[pick[i]];
                poly.coeffs[idx] += g;
                std::size_t j = pick.size();
                bool done = false;
                while (j-- > 0) {
                    if (++pick[j] < events->events[info.event_tuple[j]].members.size()) break;
                    pick[j] = 0;
                    if (j == 0) done = true;
                }
                if (done) break;
            }
        }
    }
    return poly;
}

namespace {

/// min (or max, via negation) of F.Q_n^{g=n} over the symmetric polytope
/// {orbit masses q >= 0, sum q = 1}, as an explicit LP.
double polytope_extremum(const std::vector<double>& orbit_objective, bool maximize,
                         const SolverOptions& options) {
    LinearProgram lp;
    lp.num_vars = static_cast<std::uint32_t>(orbit_objective.size());
    lp.objective.resize(lp.num_vars);
    for (std::uint32_t w = 0; w < lp.num_vars; ++w)
        lp.objective[w] = maximize ? -orbit_objective[w] : orbit_objective[w];
    SparseRow normalization;
    normalization.rhs = 1.0;
    for (std::uint32_t w = 0; w < lp.num_vars; ++w) normalization.coeffs.emplace_back(w, 1.0);
    lp.rows.push_back(std::move(normalization));

    const SolveOutcome outcome = solve(lp, options);
    if (outcome.status == SolveStatus::Unbounded)
        throw std::runtime_error("witness normalization LP unbounded: malformed constraint set");
    if (outcome.status != SolveStatus::Optimal)
        throw std::runtime_error("witness normalization LP failed to solve");
    return maximize ? -outcome.objective_value : outcome.objective_value;
}

}  // namespace

Witness extract_witness(const std::vector<double>& farkas, const ConstraintSet& constraints,
                        const InflationProblem& problem, const OrbitIndex& index,
                        const Distribution* p, const EventTable* events,
                        const SolverOptions& options) {
    Polynomial raw = witness_coefficients(farkas, constraints, problem.scenario, problem.order, events);

    const DiagonalCounts counts = diagonal_counts(problem, index, problem.order);
    std::vector<double> orbit_objective(index.count(), 0.0);
    for (std::size_t w = 0; w < index.count(); ++w) {
        long double acc = 0.0L;
        for (const auto& [d, count] : counts.by_orbit[w])
            acc += static_cast<long double>(raw.coeffs[d]) * count / static_cast<long double>(index.sizes[w]);
        orbit_objective[w] = static_cast<double>(acc);
    }

    const double floor = polytope_extremum(orbit_objective, false, options);
    const double ceiling = polytope_extremum(orbit_objective, true, options);
    double span = ceiling - floor;
    if (!(span > 1e-12)) span = 1.0;  // constant functional: shift only

    // Affine rescale against the all-ones lifted vector: F'(t) = (F(t) - floor) / span.
    // Lifted inputs are normalized, so F'.P^{(x)n} = (F.P^{(x)n} - floor) / span.
    Witness witness;
    witness.coefficients = raw;
    for (std::size_t t = 0; t < witness.coefficients.coeffs.size(); ++t)
        witness.coefficients.coeffs[t] = (raw.coeffs[t] - floor) / span;
    witness.certified_floor = 0.0;

    if (p != nullptr) {
        witness.value_at_input = witness.coefficients.value_at(*p);
    } else if (events != nullptr) {
        long double value = 0.0L;
        for (std::size_t r = 0; r < constraints.rows.size(); ++r) {
            const RowInfo& info = constraints.info[r];
            if (info.kind != RowInfo::Kind::EventProduct) continue;
            long double prod = -farkas[r];
            for (int e : info.event_tuple) prod *= events->events[e].probability;
            value += prod;
        }
        witness.value_at_input = static_cast<double>((value - floor) / span);
    } else {
        throw std::invalid_argument("extract_witness needs the original input");
    }
    return witness;
}

}  // namespace infl
