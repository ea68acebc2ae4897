#ifndef SIQ_RULES_HPP
#define SIQ_RULES_HPP

#include "siq/atom_store.hpp"
#include "siq/matcher.hpp"
#include "siq/query.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace siq {

/// Thresholds for the relations that have no literal inequality form.
/// None of these come from measured data; they are tunable defaults.
struct RelParams {
    /// ON: allowed gap between the subject's bottom and the object's top,
    /// as a fraction of the object's height.
    double on_tau = 0.15;
    /// ON: minimum horizontal overlap as a fraction of the subject's width.
    double on_overlap_min = 0.5;
    /// INSIDE/CONTAINS: tolerance in pixels on every side.
    double inside_slack = 0.0;

    /// Throws InvalidArgument unless on_tau >= 0, on_overlap_min in (0,1]
    /// and inside_slack >= 0.
    void validate() const;
    bool operator==(const RelParams&) const = default;
};

/// Evaluatable clause types registered by the rule library.
namespace rule_types {
/// BoxInsideLink(l1 t1 r1 b1 l2 t2 r2 b2 slack): box 1 lies within box 2
/// grown by `slack` on every side.
inline constexpr std::string_view BoxInsideLink = "BoxInsideLink";
/// BoxOnLink(l1 t1 r1 b1 l2 t2 r2 b2 tau overlap_min): box 1 rests on box 2.
inline constexpr std::string_view BoxOnLink = "BoxOnLink";
/// DistinctLink(a b): a and b are different atoms.
inline constexpr std::string_view DistinctLink = "DistinctLink";
} // namespace rule_types

/// GreaterThanLink plus the rule library's evaluatable types.
Evaluators spatial_evaluators();

/// Inserts the BindLinks of the built-in spatial relations into `store` and
/// returns them as rules. Every rule binds $BB1 (subject) and $BB2 (object)
/// as members of one $Frame, reads their coordinates through the ingest
/// schema and yields EvaluationLink(PredicateNode <rel>, ListLink($BB1, $BB2)).
/// WITH contributes three rules (intersects, inside, contains) sharing
/// one predicate.
std::vector<BindRule> builtin_rules(AtomStore& store, const RelParams& params = {});

/// The rules among `rules` that derive `rel`.
std::vector<BindRule> rules_for(const std::vector<BindRule>& rules, RelKind rel, const AtomStore& store);

struct CompiledQuery {
    Pattern goal;
    std::set<RelKind> needed_predicates;
    /// One variable per distinct box occurrence, in order of first
    /// appearance (left before right, clause by clause). Aliased occurrences
    /// share a slot.
    std::vector<std::string> slot_variables;
    /// Class label of each slot.
    std::vector<std::string> slot_labels;
    std::string frame_variable;
};

/// Builds the goal pattern of a surface query: per clause, class
/// constraints on both boxes, membership in the shared $Frame, the derived
/// relation and a DistinctLink between different variables.
/// Throws EmptyQuery or AliasClassMismatch.
CompiledQuery compile_query(const QueryAST& ast, AtomStore& store);

} // namespace siq

#endif // SIQ_RULES_HPP
