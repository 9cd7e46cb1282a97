#include "infl/lpcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace infl {

std::vector<std::string> LinearProgram::check() const {
    std::vector<std::string> issues;
    if (objective.size() != num_vars)
        issues.push_back("objective has " + std::to_string(objective.size()) + " entries for " +
                         std::to_string(num_vars) + " variables");
    for (double c : objective)
        if (!std::isfinite(c)) {
            issues.push_back("non-finite objective coefficient");
            break;
        }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (!std::isfinite(row.rhs)) issues.push_back("row " + std::to_string(r) + " has non-finite rhs");
        for (const auto& [j, c] : row.coeffs) {
            if (j >= num_vars) issues.push_back("row " + std::to_string(r) + " references column out of range");
            if (!std::isfinite(c)) issues.push_back("row " + std::to_string(r) + " has non-finite coefficient");
        }
    }
    return issues;
}

namespace {

constexpr double kPivotTolerance = 1e-9;

// Dense two-phase tableau. Artificial columns stay in the tableau throughout;
// their final reduced costs yield the dual (phase 2) and Farkas (phase 1)
// multipliers directly.
class SimplexTableau {
public:
    SimplexTableau(const LinearProgram& lp, const SolverOptions& options)
        : m_(lp.rows.size()), n_(lp.num_vars), options_(options) {
        width_ = n_ + m_ + 1;
        data_.assign((m_ + 2) * width_, 0.0);
        basis_.resize(m_);
        row_sign_.resize(m_, 1.0);

        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = lp.rows[i].rhs < 0.0 ? -1.0 : 1.0;
            row_sign_[i] = sign;
            for (const auto& [j, c] : lp.rows[i].coeffs) at(i, j) += sign * c;
            at(i, rhs_col()) = sign * lp.rows[i].rhs;
            at(i, n_ + i) = 1.0;
            basis_[i] = n_ + i;
        }
        // Phase-2 reduced costs: artificial basis has zero phase-2 cost.
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = lp.objective[j];
        // Phase-1 reduced costs: price out the unit-cost artificial basis.
        for (std::size_t j = 0; j < width_; ++j) {
            double column_sum = 0.0;
            for (std::size_t i = 0; i < m_; ++i) column_sum += at(i, j);
            const double cost = (j >= n_ && j < n_ + m_) ? 1.0 : 0.0;
            at(m_ + 1, j) = (j == rhs_col() ? -column_sum : cost - column_sum);
        }
    }

    enum class PhaseResult { Converged, Unbounded, IterationLimit };

    PhaseResult run_phase(std::size_t objective_row, bool allow_artificials) {
        // Generous cap; Bland's rule precludes cycling, this guards runaways.
        const std::uint64_t max_iterations = 20000ull + 50ull * (m_ + n_) * (m_ + n_);
        for (std::uint64_t iter = 0; iter < max_iterations; ++iter) {
            const std::size_t limit = allow_artificials ? n_ + m_ : n_;
            std::size_t entering = width_;
            for (std::size_t j = 0; j < limit; ++j) {
                if (at(objective_row, j) < -kPivotTolerance) {
                    entering = j;
                    break;  // Bland: lowest eligible index
                }
            }
            if (entering == width_) return PhaseResult::Converged;

            std::size_t leaving = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, entering);
                if (a > kPivotTolerance) {
                    const double ratio = at(i, rhs_col()) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leaving == m_ || basis_[i] < basis_[leaving]))) {
                        best_ratio = ratio;
                        leaving = i;
                    }
                }
            }
            if (leaving == m_) return PhaseResult::Unbounded;
            pivot(leaving, entering);
        }
        return PhaseResult::IterationLimit;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == row) continue;
            const double factor = at(i, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= factor * at(row, j);
            at(i, col) = 0.0;
        }
        basis_[row] = col;
    }

    // After phase 1: replace basic artificials by structural columns with a
    // nonzero entry in their row, where one exists. Rows without one are
    // linearly dependent; their artificial stays basic at (numerically) zero.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::fabs(at(i, j)) > 1e-8) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    double phase1_objective() const { return -at(m_ + 1, rhs_col()); }
    double phase2_objective() const { return -at(m_, rhs_col()); }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = at(i, rhs_col());
        return x;
    }

    // Multipliers on the original (unscaled) rows, from the reduced costs of
    // the artificial columns: for artificial i with cost q, rc = q - y_i.
    std::vector<double> row_multipliers(std::size_t objective_row, double artificial_cost) const {
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i)
            y[i] = row_sign_[i] * (artificial_cost - at(objective_row, n_ + i));
        return y;
    }

private:
    double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }
    std::size_t rhs_col() const { return n_ + m_; }

    std::size_t m_, n_, width_;
    SolverOptions options_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
    std::vector<double> row_sign_;
};

// Residual checks with independent accumulation over the original sparse data.
bool verify_primal(const LinearProgram& lp, const std::vector<double>& x, const SolverOptions& options) {
    for (double v : x)
        if (v < -options.nonnegativity_slack || !std::isfinite(v)) return false;
    for (const auto& row : lp.rows) {
        long double lhs = 0.0L;
        for (const auto& [j, c] : row.coeffs) lhs += static_cast<long double>(c) * x[j];
        if (std::fabs(static_cast<double>(lhs) - row.rhs) > options.feasibility_tolerance) return false;
    }
    return true;
}

bool verify_dual(const LinearProgram& lp, const std::vector<double>& x, const std::vector<double>& y,
                 const SolverOptions& options) {
    // Dual feasibility c - A^T y >= -tol and matching objective values.
    std::vector<long double> reduced(lp.num_vars);
    for (std::size_t j = 0; j < lp.num_vars; ++j) reduced[j] = lp.objective[j];
    long double dual_value = 0.0L;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        if (!std::isfinite(y[i])) return false;
        for (const auto& [j, c] : lp.rows[i].coeffs) reduced[j] -= static_cast<long double>(c) * y[i];
        dual_value += static_cast<long double>(y[i]) * lp.rows[i].rhs;
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (reduced[j] < -options.feasibility_tolerance) return false;
    long double primal_value = 0.0L;
    for (std::size_t j = 0; j < lp.num_vars; ++j) primal_value += static_cast<long double>(lp.objective[j]) * x[j];
    const double scale = 1.0 + std::fabs(static_cast<double>(primal_value));
    return std::fabs(static_cast<double>(primal_value - dual_value)) <= options.feasibility_tolerance * scale * 10.0;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<double>& y, const SolverOptions& options) {
    std::vector<long double> yta(lp.num_vars, 0.0L);
    long double ytb = 0.0L;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        if (!std::isfinite(y[i])) return false;
        for (const auto& [j, c] : lp.rows[i].coeffs) yta[j] += static_cast<long double>(c) * y[i];
        ytb += static_cast<long double>(y[i]) * lp.rows[i].rhs;
    }
    for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (static_cast<double>(yta[j]) > options.feasibility_tolerance) return false;
    return static_cast<double>(ytb) > options.feasibility_tolerance;
}

}  // namespace

SolveOutcome solve(const LinearProgram& lp, const SolverOptions& options) {
    SolveOutcome outcome;
    if (!lp.check().empty()) {
        outcome.status = SolveStatus::NumericalFailure;
        return outcome;
    }

    SimplexTableau tableau(lp, options);
    const auto phase1 = tableau.run_phase(lp.rows.size() + 1, true);
    if (phase1 != SimplexTableau::PhaseResult::Converged) {
        outcome.status = SolveStatus::NumericalFailure;
        return outcome;
    }

    if (tableau.phase1_objective() > options.feasibility_tolerance) {
        std::vector<double> farkas = tableau.row_multipliers(lp.rows.size() + 1, 1.0);
        // Normalize to y.b = 1; the phase-1 optimum equals y.b before scaling.
        long double ytb = 0.0L;
        for (std::size_t i = 0; i < lp.rows.size(); ++i)
            ytb += static_cast<long double>(farkas[i]) * lp.rows[i].rhs;
        if (ytb > 0.0L)
            for (double& v : farkas) v = static_cast<double>(v / ytb);
        if (!verify_farkas(lp, farkas, options)) {
            outcome.status = SolveStatus::NumericalFailure;
            return outcome;
        }
        outcome.status = SolveStatus::Infeasible;
        outcome.farkas = std::move(farkas);
        return outcome;
    }

    tableau.drive_out_artificials();
    const auto phase2 = tableau.run_phase(lp.rows.size(), false);
    if (phase2 == SimplexTableau::PhaseResult::Unbounded) {
        outcome.status = SolveStatus::Unbounded;
        return outcome;
    }
    if (phase2 != SimplexTableau::PhaseResult::Converged) {
        outcome.status = SolveStatus::NumericalFailure;
        return outcome;
    }

    std::vector<double> x = tableau.primal();
    std::vector<double> y = tableau.row_multipliers(lp.rows.size(), 0.0);
    if (!verify_primal(lp, x, options) || !verify_dual(lp, x, y, options)) {
        outcome.status = SolveStatus::NumericalFailure;
        return outcome;
    }
    long double value = 0.0L;
    for (std::size_t j = 0; j < lp.num_vars; ++j) value += static_cast<long double>(lp.objective[j]) * x[j];
    outcome.status = SolveStatus::Optimal;
    outcome.objective_value = static_cast<double>(value);
    outcome.primal = std::move(x);
    outcome.dual = std::move(y);
    return outcome;
}

VariableMerge merge_equal_variables(const LinearProgram& lp) {
    std::vector<std::uint32_t> root(lp.num_vars);
    std::iota(root.begin(), root.end(), 0u);
    const auto find = [&](std::uint32_t v) {
        while (root[v] != v) {
            root[v] = root[root[v]];
            v = root[v];
        }
        return v;
    };

    std::vector<bool> is_merge_row(lp.rows.size(), false);
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        const auto& row = lp.rows[r];
        if (row.rhs != 0.0 || row.coeffs.size() != 2) continue;
        const auto& [j0, c0] = row.coeffs[0];
        const auto& [j1, c1] = row.coeffs[1];
        if (c0 != -c1 || c0 == 0.0) continue;
        is_merge_row[r] = true;
        const std::uint32_t a = find(j0), b = find(j1);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
    }

    VariableMerge result;
    result.column_of.resize(lp.num_vars);
    std::uint32_t next = 0;
    std::vector<std::uint32_t> compact(lp.num_vars, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t j = 0; j < lp.num_vars; ++j) {
        const std::uint32_t r = find(j);
        if (compact[r] == std::numeric_limits<std::uint32_t>::max()) compact[r] = next++;
        result.column_of[j] = compact[r];
    }

    result.reduced.num_vars = next;
    result.reduced.objective.assign(next, 0.0);
    for (std::uint32_t j = 0; j < lp.num_vars; ++j)
        result.reduced.objective[result.column_of[j]] += lp.objective[j];

    std::vector<double> dense(next, 0.0);
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
        if (is_merge_row[r]) continue;
        std::fill(dense.begin(), dense.end(), 0.0);
        for (const auto& [j, c] : lp.rows[r].coeffs) dense[result.column_of[j]] += c;
        SparseRow reduced_row;
        reduced_row.rhs = lp.rows[r].rhs;
        for (std::uint32_t j = 0; j < next; ++j)
            if (dense[j] != 0.0) reduced_row.coeffs.emplace_back(j, dense[j]);
        if (reduced_row.coeffs.empty() && reduced_row.rhs == 0.0) continue;
        result.reduced.rows.push_back(std::move(reduced_row));
    }
    return result;
}

namespace {

void append_number(std::string& out, double value) {
    char buffer[64];
    const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, res.ptr);
}

}  // namespace

std::string export_lp(const LinearProgram& lp) {
    std::string out;
    out += "lp ";
    out += std::to_string(lp.num_vars);
    out += ' ';
    out += std::to_string(lp.rows.size());
    out += '\n';
    if (lp.num_vars == 0 && lp.rows.empty()) return out;

    std::vector<std::pair<std::uint32_t, double>> obj;
    for (std::uint32_t j = 0; j < lp.num_vars; ++j)
        if (lp.objective[j] != 0.0) obj.emplace_back(j, lp.objective[j]);
    out += "obj ";
    out += std::to_string(obj.size());
    for (const auto& [j, c] : obj) {
        out += ' ';
        out += std::to_string(j);
        out += ':';
        append_number(out, c);
    }
    out += '\n';

    for (const auto& row : lp.rows) {
        auto coeffs = row.coeffs;
        std::sort(coeffs.begin(), coeffs.end());
        out += "row ";
        out += std::to_string(coeffs.size());
        for (const auto& [j, c] : coeffs) {
            out += ' ';
            out += std::to_string(j);
            out += ':';
            append_number(out, c);
        }
        out += " = ";
        append_number(out, row.rhs);
        out += '\n';
    }
    return out;
}

LinearProgram parse_lp(const std::string& text) {
    LinearProgram lp;
    std::istringstream in(text);
    std::string keyword;
    if (!(in >> keyword) || keyword != "lp") throw std::runtime_error("lp text: missing header");
    std::size_t num_rows = 0;
    if (!(in >> lp.num_vars >> num_rows)) throw std::runtime_error("lp text: malformed header");
    lp.objective.assign(lp.num_vars, 0.0);
    if (lp.num_vars == 0 && num_rows == 0) return lp;

    const auto read_entries = [&](std::vector<std::pair<std::uint32_t, double>>& dest) {
        std::size_t count = 0;
        if (!(in >> count)) throw std::runtime_error("lp text: missing entry count");
        for (std::size_t k = 0; k < count; ++k) {
            std::string token;
            if (!(in >> token)) throw std::runtime_error("lp text: missing entry");
            const auto colon = token.find(':');
            if (colon == std::string::npos) throw std::runtime_error("lp text: malformed entry " + token);
            dest.emplace_back(static_cast<std::uint32_t>(std::stoul(token.substr(0, colon))),
                              std::stod(token.substr(colon + 1)));
        }
    };

    if (!(in >> keyword) || keyword != "obj") throw std::runtime_error("lp text: missing objective");
    std::vector<std::pair<std::uint32_t, double>> obj;
    read_entries(obj);
    for (const auto& [j, c] : obj) {
        if (j >= lp.num_vars) throw std::runtime_error("lp text: objective index out of range");
        lp.objective[j] = c;
    }
    for (std::size_t r = 0; r < num_rows; ++r) {
        if (!(in >> keyword) || keyword != "row") throw std::runtime_error("lp text: missing row");
        SparseRow row;
        read_entries(row.coeffs);
        if (!(in >> keyword) || keyword != "=") throw std::runtime_error("lp text: missing rhs separator");
        if (!(in >> row.rhs)) throw std::runtime_error("lp text: missing rhs");
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

std::string export_mps(const LinearProgram& lp, const std::string& name) {
    std::ostringstream out;
    out << "NAME          " << name << "\n";
    out << "ROWS\n N  COST\n";
    for (std::size_t r = 0; r < lp.rows.size(); ++r) out << " E  R" << r << "\n";
    out << "COLUMNS\n";
    for (std::uint32_t j = 0; j < lp.num_vars; ++j) {
        if (lp.objective[j] != 0.0) out << "    X" << j << "  COST  " << lp.objective[j] << "\n";
        for (std::size_t r = 0; r < lp.rows.size(); ++r)
            for (const auto& [col, c] : lp.rows[r].coeffs)
                if (col == j) out << "    X" << j << "  R" << r << "  " << c << "\n";
    }
    out << "RHS\n";
    for (std::size_t r = 0; r < lp.rows.size(); ++r)
        if (lp.rows[r].rhs != 0.0) out << "    RHS  R" << r << "  " << lp.rows[r].rhs << "\n";
    out << "ENDATA\n";
    return out.str();
}

}  // namespace infl
