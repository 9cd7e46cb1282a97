#pragma once

#include <stdexcept>
#include <string>

#include "infl/model.hpp"

namespace infl {

struct ParseError : std::runtime_error {
    std::string file;
    int line = 0;
    int column = 0;
    ParseError(std::string file_, int line_, int column_, const std::string& message)
        : std::runtime_error(file_ + ":" + std::to_string(line_) + ":" + std::to_string(column_) + ": " +
                             message),
          file(std::move(file_)),
          line(line_),
          column(column_) {}
};

/// Structured-text documents. Lines are keyword-led; `#` starts a comment.
/// Probabilities and coefficients accept decimals, scientific notation, and
/// exact fractions (`1/3`). Dense tables are flat row-major arrays in declared
/// variable order.
CausalStructure parse_graph(const std::string& text, const std::string& filename = "<graph>");
Distribution parse_distribution(const std::string& text, const std::string& filename = "<distribution>");
EventTable parse_events(const std::string& text, const std::string& filename = "<events>");
Polynomial parse_polynomial(const std::string& text, const std::string& filename = "<polynomial>");

std::string emit_graph(const CausalStructure& structure);
std::string emit_distribution(const Distribution& p);
std::string emit_events(const EventTable& events);
std::string emit_polynomial(const Polynomial& poly);

/// First keyword of a document, for input-kind detection.
std::string document_kind(const std::string& text);

}  // namespace infl
