#include "infl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "infl/engine.hpp"
#include "infl/formats.hpp"
#include "infl/lpcore.hpp"

namespace infl::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_document(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty()) {
        out << content;
        if (content.empty() || content.back() != '\n') out << '\n';
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write file: " + out_path);
    file << content;
}

json scenario_to_json(const CorrelationScenario& scenario) {
    json observed = json::array();
    for (std::size_t x = 0; x < scenario.observed_count(); ++x)
        observed.push_back({{"name", scenario.observed_names[x]},
                            {"cardinality", scenario.cardinalities[x]},
                            {"parents", scenario.parent_sets[x]}});
    return {{"latents", scenario.latent_names}, {"observed", observed}, {"connected", scenario.connected()}};
}

CorrelationScenario scenario_from_json(const json& j) {
    CorrelationScenario scenario;
    scenario.latent_names = j.at("latents").get<std::vector<std::string>>();
    for (const auto& entry : j.at("observed")) {
        scenario.observed_names.push_back(entry.at("name").get<std::string>());
        scenario.cardinalities.push_back(entry.at("cardinality").get<int>());
        scenario.parent_sets.push_back(entry.at("parents").get<std::vector<int>>());
    }
    return scenario;
}

json witness_to_json(const Witness& witness, const CorrelationScenario& scenario) {
    json coefficients = json::array();
    const OutcomeSpace joint = witness.coefficients.base_space();
    const OutcomeSpace lifted = witness.coefficients.lifted_space();
    std::vector<int> blocks(static_cast<std::size_t>(witness.coefficients.degree));
    std::vector<int> digits(witness.coefficients.cards.size());
    for (std::uint64_t t = 0; t < witness.coefficients.coeffs.size(); ++t) {
        if (witness.coefficients.coeffs[t] == 0.0) continue;
        lifted.decode(t, blocks);
        json tuple = json::array();
        for (int b : blocks) {
            joint.decode(static_cast<std::uint64_t>(b), digits);
            tuple.push_back(digits);
        }
        coefficients.push_back({{"index", t}, {"tuple", tuple}, {"value", witness.coefficients.coeffs[t]}});
    }
    return {{"order", witness.coefficients.degree},
            {"scenario", scenario_to_json(scenario)},
            {"certified_floor", witness.certified_floor},
            {"value_at_input", witness.value_at_input},
            {"coefficients", coefficients}};
}

std::pair<Witness, CorrelationScenario> witness_from_json(const json& j) {
    const CorrelationScenario scenario = scenario_from_json(j.at("scenario"));
    Witness witness;
    witness.coefficients.degree = j.at("order").get<int>();
    witness.coefficients.cards = scenario.cardinalities;
    std::uint64_t size = 1;
    for (int i = 0; i < witness.coefficients.degree; ++i) size *= OutcomeSpace(scenario.cardinalities).size();
    witness.coefficients.coeffs.assign(size, 0.0);
    for (const auto& entry : j.at("coefficients"))
        witness.coefficients.coeffs[entry.at("index").get<std::uint64_t>()] = entry.at("value").get<double>();
    witness.certified_floor = j.at("certified_floor").get<double>();
    witness.value_at_input = j.at("value_at_input").get<double>();
    return {std::move(witness), scenario};
}

json verdict_entry(const CompatibilityVerdict& verdict, const CorrelationScenario& scenario) {
    json entry;
    entry["status"] = to_string(verdict.status);
    entry["scenario"] = scenario_to_json(scenario);
    if (verdict.witness) entry["witness"] = witness_to_json(*verdict.witness, scenario);
    if (verdict.distance_bound) entry["distance_bound"] = *verdict.distance_bound;
    return entry;
}

int status_exit_code(CompatibilityStatus status) {
    switch (status) {
        case CompatibilityStatus::FeasibleAtOrder: return kExitFeasible;
        case CompatibilityStatus::Incompatible: return kExitIncompatible;
        case CompatibilityStatus::InconclusiveAtTolerance: return kExitInconclusive;
    }
    return kExitResourceError;
}

int run_guarded(std::ostream& diag, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        diag << e.what() << "\n";
        return kExitInputError;
    } catch (const ResourceError& e) {
        diag << e.what() << "\n";
        return kExitResourceError;
    } catch (const std::invalid_argument& e) {
        diag << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << "\n";
        return kExitResourceError;
    }
}

EngineOptions engine_options(const Options& options) {
    EngineOptions out;
    out.tolerance = options.tolerance;
    out.budget = options.budget;
    return out;
}

/// Splits a joint table over (endogenous, exogenous) variables into the
/// conditional P(a|x), provided the exogenous marginal factorizes.
Distribution condition_on_exogenous(const Distribution& joint, std::size_t endo_count,
                                    double tolerance, double& factorization_error) {
    Distribution conditional;
    conditional.names.assign(joint.names.begin(), joint.names.begin() + endo_count);
    conditional.cards.assign(joint.cards.begin(), joint.cards.begin() + endo_count);
    conditional.given_names.assign(joint.names.begin() + endo_count, joint.names.end());
    conditional.given_cards.assign(joint.cards.begin() + endo_count, joint.cards.end());

    const OutcomeSpace full(joint.cards);
    const OutcomeSpace endo_space(conditional.cards);
    const OutcomeSpace exo_space(conditional.given_cards);

    std::vector<double> exo_marginal(exo_space.size(), 0.0);
    std::vector<int> digits(joint.cards.size());
    std::vector<int> endo_digits(endo_count), exo_digits(joint.cards.size() - endo_count);
    for (std::uint64_t f = 0; f < full.size(); ++f) {
        full.decode(f, digits);
        std::copy(digits.begin() + endo_count, digits.end(), exo_digits.begin());
        exo_marginal[exo_space.encode(exo_digits)] += joint.table[f];
    }

    // factorization check: joint exogenous marginal vs product of singles
    factorization_error = 0.0;
    std::vector<std::vector<double>> singles(exo_digits.size());
    for (std::size_t k = 0; k < singles.size(); ++k)
        singles[k].assign(conditional.given_cards[k], 0.0);
    for (std::uint64_t e = 0; e < exo_space.size(); ++e) {
        exo_space.decode(e, exo_digits);
        for (std::size_t k = 0; k < singles.size(); ++k) singles[k][exo_digits[k]] += exo_marginal[e];
    }
    for (std::uint64_t e = 0; e < exo_space.size(); ++e) {
        exo_space.decode(e, exo_digits);
        double prod = 1.0;
        for (std::size_t k = 0; k < singles.size(); ++k) prod *= singles[k][exo_digits[k]];
        factorization_error = std::max(factorization_error, std::fabs(prod - exo_marginal[e]));
    }
    if (factorization_error > tolerance)
        throw std::invalid_argument("joint table over exogenous variables does not factorize (error " +
                                    std::to_string(factorization_error) + ")");

    conditional.table.assign(exo_space.size() * endo_space.size(), 0.0);
    for (std::uint64_t f = 0; f < full.size(); ++f) {
        full.decode(f, digits);
        std::copy(digits.begin(), digits.begin() + endo_count, endo_digits.begin());
        std::copy(digits.begin() + endo_count, digits.end(), exo_digits.begin());
        const std::uint64_t e = exo_space.encode(exo_digits);
        if (exo_marginal[e] <= 0.0)
            throw std::invalid_argument("exogenous assignment with zero probability cannot be conditioned on");
        conditional.table[e * endo_space.size() + endo_space.encode(endo_digits)] =
            joint.table[f] / exo_marginal[e];
    }
    return conditional;
}

}  // namespace

int cmd_check(const std::string& graph_path, const std::string& input_path, const Options& options,
              std::ostream& out, std::ostream& diag) {
    return run_guarded(diag, [&]() -> int {
        const auto start = std::chrono::steady_clock::now();
        const CausalStructure structure = parse_graph(read_file(graph_path), graph_path);
        const std::string input_text = read_file(input_path);
        const std::string kind = document_kind(input_text);

        json doc;
        doc["command"] = "check";
        doc["order"] = options.order;
        doc["seed"] = options.seed;
        doc["tolerance"] = options.tolerance;
        json districts = json::array();
        std::vector<std::string> warnings;
        CompatibilityStatus overall;

        if (options.force_events || kind == "events") {
            if (kind != "events") throw std::invalid_argument("--events given but input is not an events file");
            const EventTable events = parse_events(input_text, input_path);
            const CorrelationScenario scenario = as_correlation_scenario(structure);
            const CompatibilityVerdict verdict =
                check_compatibility(scenario, events, options.order, engine_options(options));
            overall = verdict.status;
            districts.push_back(verdict_entry(verdict, scenario));
        } else if (kind == "distribution") {
            Distribution p = parse_distribution(input_text, input_path);

            if (is_correlation_scenario(structure)) {
                const CorrelationScenario scenario = as_correlation_scenario(structure);
                const CompatibilityVerdict verdict =
                    check_compatibility(scenario, p, options.order, engine_options(options));
                overall = verdict.status;
                districts.push_back(verdict_entry(verdict, scenario));
            } else {
                std::vector<std::string> endo_names, exo_names;
                std::vector<int> endo_cards;
                for (const auto& node : structure.nodes) {
                    if (node.kind == NodeKind::Observed) {
                        endo_names.push_back(node.name);
                        endo_cards.push_back(node.cardinality);
                    } else if (node.kind == NodeKind::ExogenousObserved) {
                        exo_names.push_back(node.name);
                    }
                }
                std::vector<std::string> joint_names = endo_names;
                joint_names.insert(joint_names.end(), exo_names.begin(), exo_names.end());
                if (!exo_names.empty() && p.given_names.empty() && p.names == joint_names) {
                    double factorization_error = 0.0;
                    p = condition_on_exogenous(p, endo_names.size(), options.tolerance,
                                               factorization_error);
                    warnings.push_back("joint table over exogenous variables accepted; factorization error " +
                                       std::to_string(factorization_error));
                }
                const StructureVerdict verdict =
                    check_structure(structure, p, options.order, engine_options(options));
                overall = verdict.overall;
                warnings.insert(warnings.end(), verdict.warnings.begin(), verdict.warnings.end());
                for (const auto& dv : verdict.districts) {
                    json entry = verdict_entry(dv.verdict, dv.unpacked.scenario);
                    entry["members"] = dv.district.members;
                    entry["conditioning"] = dv.district.conditioning;
                    districts.push_back(std::move(entry));
                }
            }
        } else {
            throw std::invalid_argument("unrecognized input document '" + kind +
                                        "' (expected distribution or events)");
        }

        doc["status"] = to_string(overall);
        doc["districts"] = districts;
        doc["warnings"] = warnings;
        const auto elapsed = std::chrono::steady_clock::now() - start;
        doc["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();

        write_document(options.out_path, doc.dump(2), out);
        diag << to_string(overall) << " (order " << options.order << ")\n";
        return status_exit_code(overall);
    });
}

int cmd_optimize(const std::string& graph_path, const std::string& poly_path, const Options& options,
                 std::ostream& out, std::ostream& diag) {
    return run_guarded(diag, [&]() -> int {
        const auto start = std::chrono::steady_clock::now();
        const CausalStructure structure = parse_graph(read_file(graph_path), graph_path);
        if (!is_correlation_scenario(structure))
            throw std::invalid_argument("optimize needs a correlation scenario graph; run unpack first");
        const CorrelationScenario scenario = as_correlation_scenario(structure);
        Polynomial poly = parse_polynomial(read_file(poly_path), poly_path);
        if (poly.cards != scenario.cardinalities)
            throw std::invalid_argument("polynomial variables do not match the scenario");

        const OptimizationResult result = optimize(scenario, poly, options.order, engine_options(options));

        json doc;
        doc["command"] = "optimize";
        doc["order"] = result.order;
        doc["degree"] = result.degree;
        doc["lower_bound"] = result.lower_bound;
        json marginal = json::array();
        const OutcomeSpace joint = scenario.joint_space();
        std::vector<int> digits(scenario.observed_count());
        std::uint64_t rest;
        for (std::uint64_t d = 0; d < result.argmin_marginal.size(); ++d) {
            if (result.argmin_marginal[d] == 0.0) continue;
            json tuple = json::array();
            rest = d;
            std::vector<std::uint64_t> blocks(static_cast<std::size_t>(result.degree));
            for (int i = result.degree - 1; i >= 0; --i) {
                blocks[i] = rest % joint.size();
                rest /= joint.size();
            }
            for (std::uint64_t b : blocks) {
                joint.decode(b, digits);
                tuple.push_back(digits);
            }
            marginal.push_back({{"index", d}, {"tuple", tuple}, {"value", result.argmin_marginal[d]}});
        }
        doc["argmin_marginal"] = marginal;
        const auto elapsed = std::chrono::steady_clock::now() - start;
        doc["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();

        write_document(options.out_path, doc.dump(2), out);
        diag << "f_" << result.order << " = " << result.lower_bound << "\n";
        return kExitFeasible;
    });
}

int cmd_unpack(const std::string& graph_path, const Options& options, std::ostream& out,
               std::ostream& diag) {
    return run_guarded(diag, [&]() -> int {
        const CausalStructure structure = parse_graph(read_file(graph_path), graph_path);
        const CausalStructure exogenized = exogenize(structure);
        const std::vector<District> parts = districts(exogenized);

        json doc;
        doc["command"] = "unpack";
        json district_docs = json::array();
        for (const District& part : parts) {
            const auto [unpacked, event_map] = unpack(part.structure);
            json entry;
            entry["members"] = part.members;
            entry["conditioning"] = part.conditioning;
            entry["scenario"] = scenario_to_json(unpacked.scenario);
            json origins = json::array();
            for (const auto& origin : unpacked.origins) {
                json parent_values = json::array();
                for (const auto& [name, value] : origin.parent_values)
                    parent_values.push_back({{"parent", name}, {"value", value}});
                origins.push_back({{"original", origin.original}, {"parent_values", parent_values}});
            }
            entry["origins"] = origins;

            json events = json::array();
            const OutcomeSpace endo_space = event_map.endo_space();
            const OutcomeSpace cond_space = event_map.cond_space();
            std::vector<int> a_bar(event_map.endo_cards.size());
            std::vector<int> x_bar(event_map.cond_cards.size());
            for (std::uint64_t xi = 0; xi < cond_space.size(); ++xi) {
                cond_space.decode(xi, x_bar);
                for (std::uint64_t ai = 0; ai < endo_space.size(); ++ai) {
                    endo_space.decode(ai, a_bar);
                    json pinned = json::array();
                    for (const auto& [var, value] : event_map.pinned[xi * endo_space.size() + ai])
                        pinned.push_back({{"variable", var},
                                          {"name", event_map.unpacked_names[var]},
                                          {"value", value}});
                    events.push_back({{"assignment", a_bar}, {"conditioning", x_bar}, {"pinned", pinned}});
                }
            }
            entry["event_map"] = events;
            district_docs.push_back(std::move(entry));
        }
        doc["districts"] = district_docs;

        write_document(options.out_path, doc.dump(2), out);
        diag << parts.size() << " district(s)\n";
        return kExitFeasible;
    });
}

int cmd_compile_lp(const std::string& graph_path, const std::string& dist_path, const Options& options,
                   std::ostream& out, std::ostream& diag) {
    return run_guarded(diag, [&]() -> int {
        const CausalStructure structure = parse_graph(read_file(graph_path), graph_path);
        const Distribution p = parse_distribution(read_file(dist_path), dist_path);

        LinearProgram lp;
        if (is_correlation_scenario(structure)) {
            const CorrelationScenario scenario = as_correlation_scenario(structure);
            if (p.cards != scenario.cardinalities)
                throw std::invalid_argument("distribution does not match the scenario signature");
            const InflationProblem problem = build_inflation(scenario, options.order);
            const OrbitIndex index = orbits(problem, options.budget);
            lp = diagonal_constraints(problem, index, p, options.order, options.budget).to_linear_program();
        } else {
            const CausalStructure exogenized = exogenize(structure);
            const std::vector<District> parts = districts(exogenized);
            if (parts.size() != 1)
                throw std::invalid_argument("compile-lp on general graphs needs a single district");
            const auto [unpacked, event_map] = unpack(parts.front().structure);
            if (p.names != event_map.endo_names || p.given_names != event_map.cond_names)
                throw std::invalid_argument("distribution signature does not match the structure");
            const EventTable events = map_distribution(p, event_map);
            const InflationProblem problem = build_inflation(unpacked.scenario, options.order);
            const OrbitIndex index = orbits(problem, options.budget);
            lp = event_constraints(problem, index, events, options.budget).to_linear_program();
        }

        write_document(options.out_path, export_lp(lp), out);
        diag << "lp: " << lp.num_vars << " variables, " << lp.rows.size() << " rows\n";
        return kExitFeasible;
    });
}

int cmd_verify_witness(const std::string& verdict_path, const Options& options, std::ostream& out,
                       std::ostream& diag) {
    return run_guarded(diag, [&]() -> int {
        json doc = json::parse(read_file(verdict_path));

        json reports = json::array();
        bool any_flagged = false;
        int witness_count = 0;
        for (std::size_t d = 0; d < doc.at("districts").size(); ++d) {
            const json& entry = doc.at("districts")[d];
            if (!entry.contains("witness")) continue;
            ++witness_count;
            auto [witness, scenario] = witness_from_json(entry.at("witness"));
            const WitnessReport report =
                verify_witness(witness, scenario, options.samples, options.seed);
            any_flagged = any_flagged || report.flagged;
            reports.push_back({{"district", d},
                               {"samples", report.samples},
                               {"min_sample_value", report.min_sample_value},
                               {"value_at_input", report.value_at_input},
                               {"flagged", report.flagged}});
        }

        json result;
        result["command"] = "verify-witness";
        result["seed"] = options.seed;
        result["reports"] = reports;
        write_document(options.out_path, result.dump(2), out);
        diag << witness_count << " witness(es), " << (any_flagged ? "FLAGGED" : "sound") << "\n";
        return any_flagged ? kExitWitnessFlagged : kExitFeasible;
    });
}

}  // namespace infl::cli
