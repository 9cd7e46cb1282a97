#include "infl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "infl/sampling.hpp"

namespace infl {

std::string to_string(CompatibilityStatus status) {
    switch (status) {
        case CompatibilityStatus::FeasibleAtOrder: return "feasible-at-order-n";
        case CompatibilityStatus::Incompatible: return "incompatible";
        case CompatibilityStatus::InconclusiveAtTolerance: return "inconclusive-at-tolerance";
    }
    return "unknown";
}

CompatibilityStatus classify_witness_value(double value_at_input, double tolerance) {
    return value_at_input < -tolerance ? CompatibilityStatus::Incompatible
                                       : CompatibilityStatus::InconclusiveAtTolerance;
}

namespace {

struct FeasibilityRun {
    InflationProblem problem;
    OrbitIndex index;
    ConstraintSet constraints;
    SolveOutcome outcome;
};

FeasibilityRun run_feasibility(const CorrelationScenario& scenario, const Distribution* p,
                               const EventTable* events, int order, const EngineOptions& options) {
    FeasibilityRun run;
    run.problem = build_inflation(scenario, order);
    run.index = orbits(run.problem, options.budget);
    run.constraints = p != nullptr
                          ? diagonal_constraints(run.problem, run.index, *p, order, options.budget)
                          : event_constraints(run.problem, run.index, *events, options.budget);
    SolverOptions solver;
    solver.feasibility_tolerance = options.tolerance;
    run.outcome = solve(run.constraints.to_linear_program(), solver);
    if (run.outcome.status == SolveStatus::Unbounded || run.outcome.status == SolveStatus::NumericalFailure)
        throw std::runtime_error("feasibility solve failed");
    return run;
}

CompatibilityVerdict classify(FeasibilityRun& run, const CorrelationScenario& scenario,
                              const Distribution* p, const EventTable* events, int order,
                              const EngineOptions& options) {
    CompatibilityVerdict verdict;
    verdict.order = order;
    if (run.outcome.status == SolveStatus::Optimal) {
        verdict.status = CompatibilityStatus::FeasibleAtOrder;
        return verdict;
    }

    SolverOptions solver;
    solver.feasibility_tolerance = options.tolerance;
    Witness witness =
        extract_witness(run.outcome.farkas, run.constraints, run.problem, run.index, p, events, solver);
    if (classify_witness_value(witness.value_at_input, options.tolerance) ==
        CompatibilityStatus::Incompatible) {
        verdict.status = CompatibilityStatus::Incompatible;
        verdict.witness = std::move(witness);
        if (options.with_distance_bound && order >= 2) {
            verdict.distance_bound = p != nullptr ? distance_lower_bound(scenario, *p, order, options)
                                                  : distance_lower_bound(scenario, *events, order, options);
        }
    } else {
        verdict.status = CompatibilityStatus::InconclusiveAtTolerance;
    }
    return verdict;
}

}  // namespace

CompatibilityVerdict check_compatibility(const CorrelationScenario& scenario, const Distribution& p,
                                         int order, const EngineOptions& options) {
    if (const auto issues = scenario.check(); !issues.empty())
        throw std::invalid_argument("invalid scenario: " + issues.front());
    if (p.conditional()) throw std::invalid_argument("check_compatibility needs an unconditional distribution");
    if (p.cards != scenario.cardinalities)
        throw std::invalid_argument("distribution does not match the scenario signature");
    if (const auto issues = p.check(); !issues.empty())
        throw std::invalid_argument("invalid distribution: " + issues.front());

    FeasibilityRun run = run_feasibility(scenario, &p, nullptr, order, options);
    return classify(run, scenario, &p, nullptr, order, options);
}

CompatibilityVerdict check_compatibility(const CorrelationScenario& scenario, const EventTable& events,
                                         int order, const EngineOptions& options) {
    if (const auto issues = scenario.check(); !issues.empty())
        throw std::invalid_argument("invalid scenario: " + issues.front());
    if (events.cards != scenario.cardinalities)
        throw std::invalid_argument("event table does not match the scenario signature");
    if (const auto issues = events.check(); !issues.empty())
        throw std::invalid_argument("invalid event table: " + issues.front());

    FeasibilityRun run = run_feasibility(scenario, nullptr, &events, order, options);
    return classify(run, scenario, nullptr, &events, order, options);
}

OptimizationResult optimize(const CorrelationScenario& scenario, const Polynomial& f, int order,
                            const EngineOptions& options) {
    if (f.degree > order) throw std::invalid_argument("polynomial degree exceeds the inflation order");
    if (f.cards != scenario.cardinalities)
        throw std::invalid_argument("polynomial does not match the scenario signature");
    if (const auto issues = f.check(); !issues.empty())
        throw std::invalid_argument("invalid polynomial: " + issues.front());

    const InflationProblem problem = build_inflation(scenario, order);
    const OrbitIndex index = orbits(problem, options.budget);
    const DiagonalCounts counts = diagonal_counts(problem, index, f.degree, options.budget);

    LinearProgram lp;
    lp.num_vars = static_cast<std::uint32_t>(index.count());
    lp.objective.assign(lp.num_vars, 0.0);
    for (std::uint32_t w = 0; w < lp.num_vars; ++w) {
        long double acc = 0.0L;
        for (const auto& [d, count] : counts.by_orbit[w])
            acc += static_cast<long double>(f.coeffs[d]) * count / static_cast<long double>(index.sizes[w]);
        lp.objective[w] = static_cast<double>(acc);
    }
    SparseRow normalization;
    normalization.rhs = 1.0;
    for (std::uint32_t w = 0; w < lp.num_vars; ++w) normalization.coeffs.emplace_back(w, 1.0);
    lp.rows.push_back(std::move(normalization));

    SolverOptions solver;
    solver.feasibility_tolerance = options.tolerance;
    const SolveOutcome outcome = solve(lp, solver);
    if (outcome.status != SolveStatus::Optimal) throw std::runtime_error("optimization solve failed");

    OptimizationResult result;
    result.order = order;
    result.degree = f.degree;
    result.lower_bound = outcome.objective_value;
    result.argmin_marginal.assign(counts.row_count, 0.0);
    for (std::uint32_t w = 0; w < lp.num_vars; ++w) {
        if (outcome.primal[w] == 0.0) continue;
        for (const auto& [d, count] : counts.by_orbit[w])
            result.argmin_marginal[d] +=
                outcome.primal[w] * static_cast<double>(count) / static_cast<double>(index.sizes[w]);
    }
    return result;
}

namespace {

/// Coefficients of sum_a (R(a) - P(a))^2 as a symmetric degree-2 functional.
Polynomial squared_distance_polynomial(const std::vector<int>& cards, const std::vector<double>& target) {
    Polynomial poly;
    poly.degree = 2;
    poly.cards = cards;
    const std::uint64_t joint = OutcomeSpace(cards).size();
    double sum_sq = 0.0;
    for (double v : target) sum_sq += v * v;
    poly.coeffs.assign(joint * joint, 0.0);
    for (std::uint64_t a = 0; a < joint; ++a)
        for (std::uint64_t b = 0; b < joint; ++b)
            poly.coeffs[a * joint + b] = (a == b ? 1.0 : 0.0) - target[a] - target[b] + sum_sq;
    return poly;
}

/// Event variant: sum_e (P(e) - R(e))^2 with R(e) the event mass under R.
Polynomial squared_event_distance_polynomial(const EventTable& events) {
    Polynomial poly;
    poly.degree = 2;
    poly.cards = events.cards;
    const std::uint64_t joint = events.outcome_space().size();
    poly.coeffs.assign(joint * joint, 0.0);
    std::vector<char> member(joint);
    for (const auto& event : events.events) {
        std::fill(member.begin(), member.end(), 0);
        for (std::uint64_t m : event.members) member[m] = 1;
        const double pe = event.probability;
        for (std::uint64_t a = 0; a < joint; ++a)
            for (std::uint64_t b = 0; b < joint; ++b)
                poly.coeffs[a * joint + b] +=
                    (member[a] && member[b] ? 1.0 : 0.0) - pe * (member[a] + member[b]) + pe * pe;
    }
    return poly;
}

}  // namespace

double distance_lower_bound(const CorrelationScenario& scenario, const Distribution& p, int order,
                            const EngineOptions& options) {
    if (order < 2) throw std::invalid_argument("distance bound needs order >= 2");
    const Polynomial n_poly = squared_distance_polynomial(scenario.cardinalities, p.table);
    const OptimizationResult result = optimize(scenario, n_poly, order, options);
    return std::sqrt(std::max(result.lower_bound, 0.0));
}

double distance_lower_bound(const CorrelationScenario& scenario, const EventTable& events, int order,
                            const EngineOptions& options) {
    if (order < 2) throw std::invalid_argument("distance bound needs order >= 2");
    const Polynomial n_poly = squared_event_distance_polynomial(events);
    const OptimizationResult result = optimize(scenario, n_poly, order, options);
    return std::sqrt(std::max(result.lower_bound, 0.0));
}

namespace {

/// District kernel P(a_D | x_D): marginalize the input conditional onto the
/// district's variables, averaging over out-of-district conditioning values.
/// Returns the maximum spread seen across those values.
double district_kernel(const Distribution& p, const std::vector<std::string>& endo,
                       const std::vector<std::string>& cond, Distribution& out) {
    std::vector<std::size_t> endo_pos, cond_pos;
    for (const auto& name : endo)
        endo_pos.push_back(std::find(p.names.begin(), p.names.end(), name) - p.names.begin());
    for (const auto& name : cond)
        cond_pos.push_back(std::find(p.given_names.begin(), p.given_names.end(), name) -
                           p.given_names.begin());

    out.names = endo;
    out.given_names = cond;
    for (std::size_t i : endo_pos) out.cards.push_back(p.cards[i]);
    for (std::size_t i : cond_pos) out.given_cards.push_back(p.given_cards[i]);

    const OutcomeSpace full_outcomes(p.cards);
    const OutcomeSpace full_given(p.given_cards);
    const OutcomeSpace sub_outcomes(out.cards);
    const OutcomeSpace sub_given(out.given_cards);

    std::vector<double> sums(sub_given.size() * sub_outcomes.size(), 0.0);
    std::vector<double> mins(sums.size(), 1.0), maxs(sums.size(), 0.0);
    std::vector<std::uint64_t> slices(sub_given.size(), 0);

    std::vector<int> given_digits(p.given_cards.size());
    std::vector<int> outcome_digits(p.cards.size());
    std::vector<int> sub_given_digits(out.given_cards.size());
    std::vector<int> sub_outcome_digits(out.cards.size());

    for (std::uint64_t gi = 0; gi < full_given.size(); ++gi) {
        full_given.decode(gi, given_digits);
        for (std::size_t k = 0; k < cond_pos.size(); ++k) sub_given_digits[k] = given_digits[cond_pos[k]];
        const std::uint64_t sub_gi = sub_given.encode(sub_given_digits);

        // marginal over out-of-district outcome variables, one slice of x-bar
        std::vector<double> marginal(sub_outcomes.size(), 0.0);
        for (std::uint64_t oi = 0; oi < full_outcomes.size(); ++oi) {
            full_outcomes.decode(oi, outcome_digits);
            for (std::size_t k = 0; k < endo_pos.size(); ++k)
                sub_outcome_digits[k] = outcome_digits[endo_pos[k]];
            marginal[sub_outcomes.encode(sub_outcome_digits)] += p.table[gi * full_outcomes.size() + oi];
        }
        for (std::uint64_t so = 0; so < sub_outcomes.size(); ++so) {
            const std::uint64_t cell = sub_gi * sub_outcomes.size() + so;
            sums[cell] += marginal[so];
            mins[cell] = std::min(mins[cell], marginal[so]);
            maxs[cell] = std::max(maxs[cell], marginal[so]);
        }
        ++slices[sub_gi];
    }

    double spread = 0.0;
    out.table.resize(sums.size());
    for (std::uint64_t cell = 0; cell < sums.size(); ++cell) {
        const std::uint64_t sub_gi = cell / sub_outcomes.size();
        out.table[cell] = sums[cell] / static_cast<double>(slices[sub_gi]);
        spread = std::max(spread, maxs[cell] - mins[cell]);
    }
    return spread;
}

}  // namespace

StructureVerdict check_structure(const CausalStructure& structure, const Distribution& p, int order,
                                 const EngineOptions& options) {
    if (const auto report = validate(structure); !report.ok())
        throw std::invalid_argument("invalid structure: " + report.violations.front());

    std::vector<std::string> endo_names, exo_names;
    std::vector<int> endo_cards, exo_cards;
    for (const auto& node : structure.nodes) {
        if (node.kind == NodeKind::Observed) {
            endo_names.push_back(node.name);
            endo_cards.push_back(node.cardinality);
        } else if (node.kind == NodeKind::ExogenousObserved) {
            exo_names.push_back(node.name);
            exo_cards.push_back(node.cardinality);
        }
    }
    if (p.names != endo_names || p.cards != endo_cards || p.given_names != exo_names ||
        p.given_cards != exo_cards)
        throw std::invalid_argument(
            "distribution signature must list the endogenous observed variables, conditioned on the "
            "exogenous ones, in declaration order");
    if (const auto issues = p.check(); !issues.empty())
        throw std::invalid_argument("invalid distribution: " + issues.front());

    const CausalStructure exogenized = exogenize(structure);
    const std::vector<District> parts = districts(exogenized);

    // cross-district edges from endogenous nodes need kernel identification,
    // which is upstream preprocessing, not this pipeline
    {
        std::vector<int> district_of(exogenized.nodes.size(), -1);
        for (std::size_t d = 0; d < parts.size(); ++d)
            for (const auto& name : parts[d].members)
                district_of[*exogenized.node_index(name)] = static_cast<int>(d);
        for (const auto& [from, to] : exogenized.edges) {
            const auto f = exogenized.node_index(from);
            const auto t = exogenized.node_index(to);
            if (exogenized.nodes[*f].kind != NodeKind::Observed) continue;
            if (district_of[*f] != district_of[*t])
                throw std::invalid_argument("edge " + from + " -> " + to +
                                            " crosses districts; identify kernels upstream first");
        }
    }

    StructureVerdict verdict;
    for (const District& part : parts) {
        DistrictVerdict dv;
        dv.district = part;
        auto [unpacked, event_map] = unpack(part.structure);
        dv.unpacked = unpacked;

        Distribution kernel;
        const double spread = district_kernel(p, event_map.endo_names, event_map.cond_names, kernel);
        if (spread > options.tolerance)
            verdict.warnings.push_back("district kernel varies with out-of-district conditioning (spread " +
                                       std::to_string(spread) + "); averaged");

        const EventTable events = map_distribution(kernel, event_map);
        dv.verdict = check_compatibility(unpacked.scenario, events, order, options);
        verdict.districts.push_back(std::move(dv));
    }

    verdict.overall = CompatibilityStatus::FeasibleAtOrder;
    for (const auto& dv : verdict.districts) {
        if (dv.verdict.status == CompatibilityStatus::Incompatible) {
            verdict.overall = CompatibilityStatus::Incompatible;
            break;
        }
        if (dv.verdict.status == CompatibilityStatus::InconclusiveAtTolerance)
            verdict.overall = CompatibilityStatus::InconclusiveAtTolerance;
    }
    return verdict;
}

WitnessReport verify_witness(const Witness& witness, const CorrelationScenario& scenario, int samples,
                             std::uint64_t seed, int latent_alphabet) {
    WitnessReport report;
    report.samples = samples;
    report.value_at_input = witness.value_at_input;
    report.min_sample_value = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    for (int k = 0; k < samples; ++k) {
        const Distribution sample = sample_compatible(scenario, rng, latent_alphabet);
        const double value = witness.coefficients.value_at(sample);
        report.min_sample_value = std::min(report.min_sample_value, value);
    }
    if (samples == 0) report.min_sample_value = 0.0;
    report.flagged = report.min_sample_value < -1e-6;
    return report;
}

}  // namespace infl
