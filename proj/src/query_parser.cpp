#include "siq/error.hpp"
#include "siq/query.hpp"

#include <algorithm>
#include <cctype>

namespace siq {

namespace {

struct RelInfo {
    RelKind rel;
    std::string_view keyword;
    std::string_view predicate;
};

constexpr std::array<RelInfo, 9> kRelations{{
    {RelKind::RightOf, "RIGHT_OF", "RightTo"},
    {RelKind::LeftOf, "LEFT_OF", "LeftTo"},
    {RelKind::Above, "ABOVE", "Above"},
    {RelKind::Below, "BELOW", "Below"},
    {RelKind::Inside, "INSIDE", "Inside"},
    {RelKind::Contains, "CONTAINS", "Contains"},
    {RelKind::Intersects, "INTERSECTS", "Intersects"},
    {RelKind::On, "ON", "On"},
    {RelKind::With, "WITH", "With"},
}};

enum class Tok { Ident, Quoted, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t col = i + 1;
        if (c == ':') {
            tokens.push_back({Tok::Colon, ":", col});
            ++i;
        } else if (c == '"') {
            std::string value;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    value.push_back(text[i + 1]);
                    i += 2;
                } else if (text[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                } else {
                    value.push_back(text[i++]);
                }
            }
            if (!closed) throw Error(ErrorCode::SyntaxError, "unterminated quoted class name", std::nullopt, col);
            if (value.empty()) throw Error(ErrorCode::SyntaxError, "empty class name", std::nullopt, col);
            tokens.push_back({Tok::Quoted, std::move(value), col});
        } else if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            tokens.push_back({Tok::Ident, std::string(text.substr(start, i - start)), col});
        } else {
            throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", std::nullopt, col);
        }
    }
    tokens.push_back({Tok::End, "", text.size() + 1});
    return tokens;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    QueryAST parse() {
        expect_keyword("FIND");
        expect_keyword("FRAMES");
        expect_keyword("WHERE");
        QueryAST ast;
        ast.clauses.push_back(clause());
        while (peek().kind == Tok::Ident && upper(peek().text) == "AND") {
            ++pos_;
            ast.clauses.push_back(clause());
        }
        if (peek().kind != Tok::End) fail("expected AND or end of query");
        return ast;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::End ? "end of query" : "'" + t.text + "'";
        throw Error(ErrorCode::SyntaxError, message + ", got " + got, std::nullopt, t.column);
    }

    void expect_keyword(std::string_view word) {
        if (peek().kind != Tok::Ident || upper(peek().text) != word) fail("expected " + std::string(word));
        ++pos_;
    }

    QueryClause clause() {
        ClassRef left = class_ref();
        const Token& rel_tok = peek();
        if (rel_tok.kind != Tok::Ident) fail("expected a relation");
        auto rel = relation_from_keyword(rel_tok.text);
        if (!rel)
            throw Error(ErrorCode::UnknownRelation, "unknown relation '" + rel_tok.text + "'", std::nullopt,
                        rel_tok.column);
        ++pos_;
        ClassRef right = class_ref();
        return QueryClause{std::move(left), *rel, std::move(right)};
    }

    ClassRef class_ref() {
        const Token& t = peek();
        if (t.kind != Tok::Ident && t.kind != Tok::Quoted) fail("expected a class name");
        ClassRef ref{t.text, std::nullopt};
        ++pos_;
        if (peek().kind == Tok::Colon) {
            std::size_t colon = peek().column;
            ++pos_;
            if (peek().kind != Tok::Ident || peek().column != colon + 1) fail("expected an alias after ':'");
            ref.alias = peek().text;
            ++pos_;
        }
        return ref;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

bool needs_quotes(const std::string& label) {
    if (label.empty() || !ident_start(label[0])) return true;
    if (!std::all_of(label.begin(), label.end(), ident_char)) return true;
    std::string u = upper(label);
    return u == "AND" || relation_from_keyword(u).has_value();
}

std::string class_text(const ClassRef& ref) {
    std::string out;
    if (needs_quotes(ref.label)) {
        out += '"';
        for (char c : ref.label) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
    } else {
        out += ref.label;
    }
    if (ref.alias) out += ":" + *ref.alias;
    return out;
}

} // namespace

std::string_view keyword(RelKind rel) {
    for (const auto& info : kRelations)
        if (info.rel == rel) return info.keyword;
    return {};
}

std::string_view predicate_name(RelKind rel) {
    for (const auto& info : kRelations)
        if (info.rel == rel) return info.predicate;
    return {};
}

std::optional<RelKind> relation_from_keyword(std::string_view word) {
    std::string u = upper(word);
    for (const auto& info : kRelations)
        if (info.keyword == u) return info.rel;
    return std::nullopt;
}

std::optional<RelKind> relation_from_predicate(std::string_view name) {
    for (const auto& info : kRelations)
        if (info.predicate == name) return info.rel;
    return std::nullopt;
}

QueryAST parse_query(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string to_text(const QueryAST& ast) {
    std::string out = "FIND FRAMES WHERE ";
    for (std::size_t i = 0; i < ast.clauses.size(); ++i) {
        if (i) out += " AND ";
        const QueryClause& c = ast.clauses[i];
        out += class_text(c.left);
        out += ' ';
        out += keyword(c.rel);
        out += ' ';
        out += class_text(c.right);
    }
    return out;
}

} // namespace siq
