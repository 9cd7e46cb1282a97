#include "infl/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <span>

namespace infl {

namespace {

struct Token {
    std::string text;
    int line;
    int column;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    int line_no = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::vector<Token> tokens;
        std::size_t i = pos;
        while (i < end) {
            if (text[i] == '#') break;
            if (std::isspace(static_cast<unsigned char>(text[i]))) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            while (i < end && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') ++i;
            tokens.push_back({text.substr(start, i - start), line_no, static_cast<int>(start - pos + 1)});
        }
        if (!tokens.empty()) lines.push_back(std::move(tokens));
        if (end == text.size()) break;
        pos = end + 1;
        ++line_no;
    }
    return lines;
}

class Reader {
public:
    Reader(const std::string& text, std::string filename)
        : lines_(tokenize(text)), file_(std::move(filename)) {}

    bool done() const { return line_ >= lines_.size(); }
    const std::vector<Token>& line() const { return lines_[line_]; }
    void advance() { ++line_; }

    [[noreturn]] void fail(const Token& token, const std::string& message) const {
        throw ParseError(file_, token.line, token.column, message);
    }
    [[noreturn]] void fail_eof(const std::string& message) const {
        const int line_no = lines_.empty() ? 1 : lines_.back().front().line + 1;
        throw ParseError(file_, line_no, 1, message);
    }

    const Token& expect(std::size_t index, const std::string& what) const {
        if (index >= line().size()) fail(line().back(), "expected " + what);
        return line()[index];
    }

    void expect_size(std::size_t size) const {
        if (line().size() > size) fail(line()[size], "unexpected trailing token");
    }

    int parse_int(const Token& token, int min_value) const {
        int value = 0;
        const auto res = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
        if (res.ec != std::errc() || res.ptr != token.text.data() + token.text.size() || value < min_value)
            fail(token, "expected an integer >= " + std::to_string(min_value) + ", got '" + token.text + "'");
        return value;
    }

    double parse_number(const Token& token) const {
        const std::string& s = token.text;
        const auto slash = s.find('/');
        if (slash != std::string::npos) {
            const double num = parse_plain(token, s.substr(0, slash));
            const double den = parse_plain(token, s.substr(slash + 1));
            if (den == 0.0) fail(token, "division by zero in fraction");
            return num / den;
        }
        return parse_plain(token, s);
    }

private:
    double parse_plain(const Token& token, const std::string& s) const {
        try {
            std::size_t used = 0;
            const double value = std::stod(s, &used);
            if (used != s.size()) fail(token, "malformed number '" + s + "'");
            return value;
        } catch (const std::logic_error&) {
            fail(token, "malformed number '" + s + "'");
        }
    }

    std::vector<std::vector<Token>> lines_;
    std::string file_;
    std::size_t line_ = 0;
};

void expect_header(Reader& reader, const std::string& keyword) {
    if (reader.done()) reader.fail_eof("empty document, expected '" + keyword + "'");
    const Token& head = reader.line()[0];
    if (head.text != keyword) reader.fail(head, "expected '" + keyword + "' document");
    reader.expect_size(1);
    reader.advance();
}

void append_number(std::string& out, double value) {
    char buffer[64];
    const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, res.ptr);
}

}  // namespace

std::string document_kind(const std::string& text) {
    const auto lines = tokenize(text);
    return lines.empty() ? "" : lines.front().front().text;
}

CausalStructure parse_graph(const std::string& text, const std::string& filename) {
    Reader reader(text, filename);
    expect_header(reader, "graph");
    CausalStructure structure;
    while (!reader.done()) {
        const Token& head = reader.line()[0];
        if (head.text == "node") {
            Node node;
            node.name = reader.expect(1, "node name").text;
            const Token& kind = reader.expect(2, "node kind (latent|observed|exogenous)");
            if (kind.text == "latent") {
                node.kind = NodeKind::Latent;
                reader.expect_size(3);
            } else if (kind.text == "observed" || kind.text == "exogenous") {
                node.kind = kind.text == "observed" ? NodeKind::Observed : NodeKind::ExogenousObserved;
                node.cardinality = reader.parse_int(reader.expect(3, "cardinality"), 1);
                reader.expect_size(4);
            } else {
                reader.fail(kind, "unknown node kind '" + kind.text + "'");
            }
            structure.nodes.push_back(std::move(node));
        } else if (head.text == "edge") {
            const std::string from = reader.expect(1, "edge origin").text;
            const std::string to = reader.expect(2, "edge target").text;
            reader.expect_size(3);
            structure.edges.emplace_back(from, to);
        } else {
            reader.fail(head, "expected 'node' or 'edge'");
        }
        reader.advance();
    }
    const ValidationReport report = validate(structure);
    if (!report.ok()) throw ParseError(filename, 1, 1, "invalid graph: " + report.violations.front());
    return structure;
}

Distribution parse_distribution(const std::string& text, const std::string& filename) {
    Reader reader(text, filename);
    expect_header(reader, "distribution");
    Distribution p;
    bool in_table = false;
    std::vector<double> values;
    while (!reader.done()) {
        const Token& head = reader.line()[0];
        if (!in_table && head.text == "var") {
            p.names.push_back(reader.expect(1, "variable name").text);
            p.cards.push_back(reader.parse_int(reader.expect(2, "cardinality"), 1));
            reader.expect_size(3);
        } else if (!in_table && head.text == "given") {
            p.given_names.push_back(reader.expect(1, "conditioning variable name").text);
            p.given_cards.push_back(reader.parse_int(reader.expect(2, "cardinality"), 1));
            reader.expect_size(3);
        } else if (!in_table && head.text == "table") {
            reader.expect_size(1);
            in_table = true;
        } else if (in_table) {
            for (const Token& token : reader.line()) values.push_back(reader.parse_number(token));
        } else {
            reader.fail(head, "expected 'var', 'given', or 'table'");
        }
        reader.advance();
    }
    if (p.names.empty()) throw ParseError(filename, 1, 1, "distribution declares no variables");
    if (!in_table) throw ParseError(filename, 1, 1, "distribution has no table");
    p.table = std::move(values);
    const auto issues = p.check();
    if (!issues.empty()) throw ParseError(filename, 1, 1, "invalid distribution: " + issues.front());
    return p;
}

EventTable parse_events(const std::string& text, const std::string& filename) {
    Reader reader(text, filename);
    expect_header(reader, "events");
    EventTable table;
    while (!reader.done()) {
        const Token& head = reader.line()[0];
        if (head.text == "var") {
            table.names.push_back(reader.expect(1, "variable name").text);
            table.cards.push_back(reader.parse_int(reader.expect(2, "cardinality"), 1));
            reader.expect_size(3);
        } else if (head.text == "event") {
            Event event;
            event.name = reader.expect(1, "event name").text;
            event.probability = reader.parse_number(reader.expect(2, "event probability"));
            reader.expect_size(3);
            table.events.push_back(std::move(event));
        } else if (head.text == "member") {
            if (table.events.empty()) reader.fail(head, "'member' before any 'event'");
            std::vector<int> digits;
            for (std::size_t i = 1; i < reader.line().size(); ++i)
                digits.push_back(reader.parse_int(reader.line()[i], 0));
            if (digits.size() != table.cards.size())
                reader.fail(head, "member lists " + std::to_string(digits.size()) + " values for " +
                                      std::to_string(table.cards.size()) + " variables");
            for (std::size_t i = 0; i < digits.size(); ++i)
                if (digits[i] >= table.cards[i]) reader.fail(reader.line()[i + 1], "value exceeds cardinality");
            table.events.back().members.push_back(OutcomeSpace(table.cards).encode(digits));
        } else {
            reader.fail(head, "expected 'var', 'event', or 'member'");
        }
        reader.advance();
    }
    for (auto& event : table.events) std::sort(event.members.begin(), event.members.end());
    const auto issues = table.check();
    if (!issues.empty()) throw ParseError(filename, 1, 1, "invalid event table: " + issues.front());
    return table;
}

Polynomial parse_polynomial(const std::string& text, const std::string& filename) {
    Reader reader(text, filename);
    expect_header(reader, "polynomial");
    Polynomial poly;
    poly.degree = 0;
    struct Term {
        double coeff;
        std::vector<int> digits;
        Token at;
    };
    std::vector<Term> terms;
    while (!reader.done()) {
        const Token& head = reader.line()[0];
        if (head.text == "degree") {
            poly.degree = reader.parse_int(reader.expect(1, "degree"), 1);
            reader.expect_size(2);
        } else if (head.text == "var") {
            poly.cards.push_back(reader.parse_int(reader.expect(2, "cardinality"), 1));
            reader.expect_size(3);
        } else if (head.text == "term") {
            Term term;
            term.at = head;
            term.coeff = reader.parse_number(reader.expect(1, "coefficient"));
            for (std::size_t i = 2; i < reader.line().size(); ++i)
                term.digits.push_back(reader.parse_int(reader.line()[i], 0));
            terms.push_back(std::move(term));
        } else {
            reader.fail(head, "expected 'degree', 'var', or 'term'");
        }
        reader.advance();
    }
    if (poly.degree < 1) throw ParseError(filename, 1, 1, "polynomial must declare a degree");
    if (poly.cards.empty()) throw ParseError(filename, 1, 1, "polynomial declares no variables");

    const OutcomeSpace joint = poly.base_space();
    std::uint64_t size = 1;
    for (int i = 0; i < poly.degree; ++i) size *= joint.size();
    poly.coeffs.assign(size, 0.0);
    const std::size_t tuple_len = poly.cards.size() * static_cast<std::size_t>(poly.degree);
    for (const Term& term : terms) {
        if (term.digits.size() != tuple_len)
            throw ParseError(filename, term.at.line, term.at.column,
                             "term lists " + std::to_string(term.digits.size()) + " values, expected " +
                                 std::to_string(tuple_len));
        std::uint64_t index = 0;
        for (int block = 0; block < poly.degree; ++block) {
            std::span<const int> digits(term.digits.data() + block * poly.cards.size(), poly.cards.size());
            for (std::size_t k = 0; k < poly.cards.size(); ++k)
                if (digits[k] >= poly.cards[k])
                    throw ParseError(filename, term.at.line, term.at.column, "outcome exceeds cardinality");
            index = index * joint.size() + joint.encode(digits);
        }
        poly.coeffs[index] += term.coeff;
    }
    return poly;
}

std::string emit_graph(const CausalStructure& structure) {
    std::string out = "graph\n";
    for (const auto& node : structure.nodes) {
        out += "node " + node.name;
        switch (node.kind) {
            case NodeKind::Latent: out += " latent"; break;
            case NodeKind::Observed: out += " observed " + std::to_string(node.cardinality); break;
            case NodeKind::ExogenousObserved:
                out += " exogenous " + std::to_string(node.cardinality);
                break;
        }
        out += '\n';
    }
    for (const auto& [from, to] : structure.edges) out += "edge " + from + " " + to + "\n";
    return out;
}

std::string emit_distribution(const Distribution& p) {
    std::string out = "distribution\n";
    for (std::size_t i = 0; i < p.names.size(); ++i)
        out += "var " + p.names[i] + " " + std::to_string(p.cards[i]) + "\n";
    for (std::size_t i = 0; i < p.given_names.size(); ++i)
        out += "given " + p.given_names[i] + " " + std::to_string(p.given_cards[i]) + "\n";
    out += "table\n";
    const std::uint64_t outcomes = p.outcome_space().size();
    for (std::size_t i = 0; i < p.table.size(); ++i) {
        append_number(out, p.table[i]);
        out += (i + 1) % outcomes == 0 ? '\n' : ' ';
    }
    return out;
}

std::string emit_events(const EventTable& table) {
    std::string out = "events\n";
    for (std::size_t i = 0; i < table.names.size(); ++i)
        out += "var " + table.names[i] + " " + std::to_string(table.cards[i]) + "\n";
    const OutcomeSpace space(table.cards);
    std::vector<int> digits(table.cards.size());
    for (const auto& event : table.events) {
        out += "event " + event.name + " ";
        append_number(out, event.probability);
        out += '\n';
        for (std::uint64_t member : event.members) {
            space.decode(member, digits);
            out += "member";
            for (int d : digits) out += " " + std::to_string(d);
            out += '\n';
        }
    }
    return out;
}

std::string emit_polynomial(const Polynomial& poly) {
    std::string out = "polynomial\ndegree " + std::to_string(poly.degree) + "\n";
    for (std::size_t i = 0; i < poly.cards.size(); ++i)
        out += "var v" + std::to_string(i) + " " + std::to_string(poly.cards[i]) + "\n";
    const OutcomeSpace joint = poly.base_space();
    const OutcomeSpace lifted = poly.lifted_space();
    std::vector<int> blocks(static_cast<std::size_t>(poly.degree));
    std::vector<int> digits(poly.cards.size());
    for (std::uint64_t t = 0; t < poly.coeffs.size(); ++t) {
        if (poly.coeffs[t] == 0.0) continue;
        out += "term ";
        append_number(out, poly.coeffs[t]);
        lifted.decode(t, blocks);
        for (int b : blocks) {
            joint.decode(static_cast<std::uint64_t>(b), digits);
            for (int d : digits) out += " " + std::to_string(d);
        }
        out += '\n';
    }
    return out;
}

}  // namespace infl
