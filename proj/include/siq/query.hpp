#ifndef SIQ_QUERY_HPP
#define SIQ_QUERY_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace siq {

/// Spatial relation between a subject box and an object box.
enum class RelKind { RightOf, LeftOf, Above, Below, Inside, Contains, Intersects, On, With };

inline constexpr std::array<RelKind, 9> kAllRelations{RelKind::RightOf, RelKind::LeftOf,   RelKind::Above,
                                                      RelKind::Below,   RelKind::Inside,   RelKind::Contains,
                                                      RelKind::Intersects, RelKind::On,    RelKind::With};

/// Query keyword, e.g. "LEFT_OF".
std::string_view keyword(RelKind rel);
/// Name of the derived predicate, e.g. "RightTo".
std::string_view predicate_name(RelKind rel);
std::optional<RelKind> relation_from_keyword(std::string_view word);
std::optional<RelKind> relation_from_predicate(std::string_view name);

struct ClassRef {
    std::string label;
    std::optional<std::string> alias;
    bool operator==(const ClassRef&) const = default;
};

struct QueryClause {
    ClassRef left;
    RelKind rel;
    ClassRef right;
    bool operator==(const QueryClause&) const = default;
};

struct QueryAST {
    std::vector<QueryClause> clauses;
    bool operator==(const QueryAST&) const = default;
};

/// Parses
///   FIND FRAMES WHERE <class> <REL> <class> { AND <class> <REL> <class> }
/// where <class> is an identifier or a double-quoted label, optionally
/// followed by `:alias`. Keywords are case-insensitive, labels are not.
///
/// Throws SyntaxError or UnknownRelation with the 1-based column.
QueryAST parse_query(std::string_view text);

/// Canonical surface text for `ast`; parse_query(to_text(ast)) == ast.
std::string to_text(const QueryAST& ast);

} // namespace siq

#endif // SIQ_QUERY_HPP
