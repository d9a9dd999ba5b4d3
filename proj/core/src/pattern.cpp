#include "suppkg/pattern.hpp"

#include <cctype>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

enum class Tok { Ident, LBrace, RBrace, LBracket, RBracket, Comma, Colon, Arrow, BackArrow, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

std::string_view describe(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::Arrow: return "'->'";
        case Tok::BackArrow: return "'<-'";
        case Tok::End: return "end of input";
    }
    return "?";
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= text_.size()) {
                out.push_back(t);
                return out;
            }
            const char c = text_[pos_];
            if (ident_char(c)) {
                t.kind = Tok::Ident;
                while (pos_ < text_.size() && ident_char(text_[pos_])) t.text.push_back(advance());
            } else if (c == '-' && peek(1) == '>') {
                t.kind = Tok::Arrow;
                t.text = "->";
                advance();
                advance();
            } else if (c == '<' && peek(1) == '-') {
                t.kind = Tok::BackArrow;
                t.text = "<-";
                advance();
                advance();
            } else {
                switch (c) {
                    case '{': t.kind = Tok::LBrace; break;
                    case '}': t.kind = Tok::RBrace; break;
                    case '[': t.kind = Tok::LBracket; break;
                    case ']': t.kind = Tok::RBracket; break;
                    case ',': t.kind = Tok::Comma; break;
                    case ':': t.kind = Tok::Colon; break;
                    default:
                        throw ParseError(fmt::format("unexpected character '{}'", c), line_, column_);
                }
                t.text = std::string(1, advance());
            }
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    PatternSpec pattern() {
        PatternSpec spec;
        keyword("pattern");
        spec.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);
        spec.nodes.push_back(node(spec));
        while (at_keyword("edge")) {
            const Token& edge_tok = cur();
            EdgeConstraint e = edge(spec);
            if (!at_keyword("node")) error_at(cur(), "expected 'node' after an edge");
            const Token& node_tok = toks_[pos_ + 1];
            NodeConstraint n = node(spec);
            if (n.label != e.to_label) {
                error_at(node_tok.kind == Tok::Ident ? node_tok : edge_tok,
                         fmt::format("non-linear pattern: edge {} {} {} must lead to the next "
                                     "node, but the next node is {}",
                                     e.from_label,
                                     e.direction == Direction::Forward ? "->" : "<-", e.to_label,
                                     n.label));
            }
            spec.edges.push_back(std::move(e));
            spec.nodes.push_back(std::move(n));
        }
        const Token& close = cur();
        expect(Tok::RBrace);
        if (spec.nodes.size() < 2) error_at(close, "a pattern needs at least two nodes");
        expect(Tok::End);
        return spec;
    }

private:
    const Token& cur() const { return toks_[pos_]; }

    [[noreturn]] void error_at(const Token& t, const std::string& message) const {
        throw ParseError(message, t.line, t.column);
    }

    const Token& expect(Tok kind) {
        const Token& t = cur();
        if (t.kind != kind) {
            error_at(t, fmt::format("expected {}, found {}", describe(kind),
                                    t.kind == Tok::Ident ? "'" + t.text + "'" : std::string(describe(t.kind))));
        }
        ++pos_;
        return t;
    }

    bool at_keyword(std::string_view word) const {
        return cur().kind == Tok::Ident && cur().text == word;
    }

    void keyword(std::string_view word) {
        if (!at_keyword(word)) {
            error_at(cur(), fmt::format("expected '{}'", word));
        }
        ++pos_;
    }

    bool declared(const PatternSpec& spec, std::string_view label) const {
        for (const auto& n : spec.nodes) {
            if (n.label == label) return true;
        }
        return false;
    }

    std::set<std::string> ident_list() {
        std::set<std::string> items;
        expect(Tok::LBracket);
        items.insert(expect(Tok::Ident).text);
        while (cur().kind == Tok::Comma) {
            ++pos_;
            items.insert(expect(Tok::Ident).text);
        }
        expect(Tok::RBracket);
        return items;
    }

    NodeConstraint node(const PatternSpec& spec) {
        keyword("node");
        const Token& label = expect(Tok::Ident);
        if (declared(spec, label.text)) {
            error_at(label, fmt::format("node label '{}' declared twice", label.text));
        }
        NodeConstraint n;
        n.label = label.text;
        expect(Tok::LBrace);
        while (cur().kind != Tok::RBrace) {
            const Token& key = expect(Tok::Ident);
            expect(Tok::Colon);
            auto once = [&](bool present) {
                if (present) error_at(key, fmt::format("'{}' given twice for node {}", key.text, n.label));
            };
            if (key.text == "semtype") {
                once(n.semtypes.has_value());
                n.semtypes = ident_list();
            } else if (key.text == "supplement") {
                once(n.require_supplement.has_value());
                const Token& v = expect(Tok::Ident);
                if (v.text != "true" && v.text != "false") {
                    error_at(v, "supplement: expects true or false");
                }
                n.require_supplement = v.text == "true";
            } else if (key.text == "allow") {
                once(n.cui_allow.has_value());
                n.cui_allow = ident_list();
            } else if (key.text == "deny") {
                once(n.cui_deny.has_value());
                n.cui_deny = ident_list();
            } else {
                error_at(key, fmt::format("unknown node constraint '{}'", key.text));
            }
        }
        expect(Tok::RBrace);
        return n;
    }

    EdgeConstraint edge(const PatternSpec& spec) {
        keyword("edge");
        EdgeConstraint e;
        const Token& from = expect(Tok::Ident);
        if (!declared(spec, from.text)) {
            error_at(from, fmt::format("node label '{}' used before its declaration", from.text));
        }
        if (spec.nodes.back().label != from.text) {
            error_at(from, fmt::format("non-linear pattern: edge must start at the most recent "
                                       "node '{}', not '{}'",
                                       spec.nodes.back().label, from.text));
        }
        e.from_label = from.text;
        if (cur().kind == Tok::Arrow) {
            e.direction = Direction::Forward;
        } else if (cur().kind == Tok::BackArrow) {
            e.direction = Direction::Reverse;
        } else {
            error_at(cur(), "expected '->' or '<-'");
        }
        ++pos_;
        const Token& to = expect(Tok::Ident);
        if (declared(spec, to.text)) {
            error_at(to, fmt::format("non-linear pattern: '{}' is already on the path", to.text));
        }
        e.to_label = to.text;
        expect(Tok::LBrace);
        const Token& key = expect(Tok::Ident);
        if (key.text != "pred") error_at(key, "expected 'pred'");
        expect(Tok::Colon);
        expect(Tok::LBracket);
        auto predicate = [&] {
            const Token& t = expect(Tok::Ident);
            auto p = parse_predicate(t.text);
            if (!p) error_at(t, fmt::format("unknown predicate '{}'", t.text));
            e.predicates.insert(*p);
        };
        predicate();
        while (cur().kind == Tok::Comma) {
            ++pos_;
            predicate();
        }
        expect(Tok::RBracket);
        expect(Tok::RBrace);
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string bracketed(const std::set<std::string>& items) {
    return "[" + join(std::vector<std::string>(items.begin(), items.end()), ", ") + "]";
}

}  // namespace

PatternSpec parse_pattern(std::string_view text) {
    return Parser(Lexer(text).run()).pattern();
}

std::string to_text(const PatternSpec& pattern) {
    std::string out = fmt::format("pattern {} {{\n", pattern.name);
    auto node = [&](const NodeConstraint& n) {
        std::vector<std::string> parts;
        if (n.semtypes) parts.push_back("semtype: " + bracketed(*n.semtypes));
        if (n.require_supplement) parts.push_back(*n.require_supplement ? "supplement: true" : "supplement: false");
        if (n.cui_allow) parts.push_back("allow: " + bracketed(*n.cui_allow));
        if (n.cui_deny) parts.push_back("deny: " + bracketed(*n.cui_deny));
        out += fmt::format("  node {} {{ {} }}\n", n.label, join(parts, " "));
    };
    for (std::size_t i = 0; i < pattern.nodes.size(); ++i) {
        node(pattern.nodes[i]);
        if (i < pattern.edges.size()) {
            const auto& e = pattern.edges[i];
            std::vector<std::string> preds;
            for (Predicate p : e.predicates) preds.emplace_back(to_string(p));
            out += fmt::format("  edge {} {} {} {{ pred: [{}] }}\n", e.from_label,
                               e.direction == Direction::Forward ? "->" : "<-", e.to_label,
                               join(preds, ", "));
        }
    }
    out += "}\n";
    return out;
}

std::optional<PatternSpec> shipped_pattern(std::string_view name) {
    const std::string lower = to_lower(name);
    if (lower == "dsgd") return parse_pattern(dsgd_pattern_text());
    if (lower == "dsgfgd") return parse_pattern(dsgfgd_pattern_text());
    return std::nullopt;
}

}  // namespace suppkg
