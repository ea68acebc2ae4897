#ifndef SIQ_MATCHER_HPP
#define SIQ_MATCHER_HPP

#include "siq/atom_store.hpp"

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace siq {

/// One total assignment of pattern variables (by VariableNode name) to atoms.
struct Grounding {
    std::map<std::string, AtomId> bindings;

    AtomId at(const std::string& variable) const { return bindings.at(variable); }
    auto operator<=>(const Grounding&) const = default;
};

/// Computes the truth of an evaluatable clause from its resolved arguments.
using Evaluator = std::function<bool(std::span<const AtomId> args, const AtomStore& store)>;

/// Registry of clause types that are computed instead of looked up.
/// GreaterThanLink is always present.
class Evaluators {
public:
    Evaluators();

    void add(std::string type, Evaluator evaluator);
    const Evaluator* find(std::string_view type) const;
    bool contains(std::string_view type) const { return find(type) != nullptr; }

private:
    std::map<std::string, Evaluator, std::less<>> table_;
};

/// A conjunction of clause templates living in the store. Variables are the
/// VariableNodes occurring in the clauses; `variables` may additionally list
/// them explicitly (a VariableList), which is optional.
struct Pattern {
    std::vector<AtomId> clauses;
    std::vector<AtomId> variables;
};

/// The children of an AndLink, or `body` itself as a single clause.
Pattern pattern_from_body(const AtomStore& store, AtomId body);

/// All groundings under which every structural clause, after substitution,
/// is an atom of the store and every evaluatable clause is true. The result
/// is sorted and free of duplicates.
///
/// Variables never bind to atoms that themselves contain variables, so the
/// templates stored alongside the data cannot match themselves.
///
/// Throws IllFormed for patterns with no clauses, bare-variable clauses,
/// variables that occur in no structural clause, or evaluatable arguments
/// that are variable-bearing links.
std::vector<Grounding> match(const Pattern& pattern, const AtomStore& store,
                             const Evaluators& evaluators = Evaluators());

/// Evaluates one evaluatable clause under `grounding`. For GreaterThanLink:
/// true iff value(first) > value(second); NotNumeric if either argument does
/// not resolve to a NumberNode.
bool eval_clause(AtomId clause, const Grounding& grounding, const AtomStore& store,
                 const Evaluators& evaluators = Evaluators());

/// Instantiates `tmpl` under `grounding`, inserting any missing atoms.
AtomId substitute(AtomId tmpl, const Grounding& grounding, AtomStore& store);

/// Read-only variant: the instantiated atom if it already exists.
std::optional<AtomId> find_substituted(AtomId tmpl, const Grounding& grounding, const AtomStore& store);

/// Names of the VariableNodes occurring in `tmpl`, sorted.
std::vector<std::string> variables_of(const AtomStore& store, AtomId tmpl);

struct BindRule {
    std::string name;
    Pattern pattern;
    AtomId resultant;
};

/// Checks that every resultant variable occurs in the pattern.
BindRule make_rule(std::string name, Pattern pattern, AtomId resultant, const AtomStore& store);

/// Reads BindLink([VariableList | VariableNode,] body, resultant).
BindRule rule_from_bind_link(std::string name, AtomId bind_link, const AtomStore& store);

struct BindResult {
    /// Instantiated resultants, one per distinct instantiation, in grounding order.
    std::vector<AtomId> roots;
    std::size_t groundings = 0;
    std::size_t atoms_added = 0;
};

/// Matches the rule pattern and inserts one instantiated resultant per
/// grounding. Running it again on an unchanged store adds nothing.
BindResult execute_bind(const BindRule& rule, AtomStore& store, const Evaluators& evaluators = Evaluators());

} // namespace siq

#endif // SIQ_MATCHER_HPP
