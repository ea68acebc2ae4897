#ifndef SIQ_CHAINER_HPP
#define SIQ_CHAINER_HPP

#include "siq/atom_store.hpp"
#include "siq/matcher.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace siq {

struct ExecutionEntry {
    std::string rule;
    std::size_t groundings = 0;
    std::size_t atoms_added = 0;
    /// Skipped because the rule already ran against the current input.
    bool cached = false;

    bool operator==(const ExecutionEntry&) const = default;
};

using ExecutionLog = std::vector<ExecutionEntry>;

/// Records which rules, or goal-restricted runs of rules, have already been
/// applied to the current contents of a store, so repeated backward chaining in one session does not redo them.
/// Callers must clear it whenever raw data is added to the store.
class ChainCache {
public:
    /// Keys are rule names for full runs and name plus guard atoms for
    /// restricted runs.
    bool contains(const std::string& key) const { return done_.contains(key); }
    void insert(const std::string& key) { done_.insert(key); }
    void clear() { done_.clear(); }

private:
    std::set<std::string> done_;
};

/// Name of the PredicateNode heading the rule's resultant, if the resultant
/// is an EvaluationLink(PredicateNode, ...).
std::optional<std::string> resultant_predicate(const BindRule& rule, const AtomStore& store);

/// Applies every rule repeatedly until one full pass adds no atoms.
/// Returns the number of atoms added. Throws FixpointLimit after
/// `max_passes` passes that all added atoms.
std::size_t forward_chain(const std::vector<BindRule>& rules, AtomStore& store, const Evaluators& evaluators,
                          ExecutionLog* log = nullptr, std::size_t max_passes = 100);

/// Runs only the rules the goal depends on (transitively, through derived
/// predicates in rule patterns), dependencies first, then matches the goal.
/// A rule that concludes a goal clause directly is run with the goal's
/// non-derived clauses on those arguments added to its pattern (e.g. the
/// class of each box), so it derives only facts the goal can use.
/// Throws CyclicRules if the needed predicates depend on themselves.
std::vector<Grounding> backward_chain(const Pattern& goal, const std::vector<BindRule>& rules, AtomStore& store,
                                      const Evaluators& evaluators, ExecutionLog* log = nullptr,
                                      ChainCache* cache = nullptr);

} // namespace siq

#endif // SIQ_CHAINER_HPP
