#include "siq/chainer.hpp"

#include "siq/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace siq {

namespace {

std::optional<std::string> evaluation_predicate(AtomId atom, const AtomStore& store) {
    if (!store.is_link(atom) || !store.is_type(atom, types::EvaluationLink)) return std::nullopt;
    AtomId head = store.outgoing(atom)[0];
    if (!store.is_node(head) || !store.is_type(head, types::PredicateNode)) return std::nullopt;
    return store.name(head);
}

class Planner {
public:
    Planner(const std::vector<BindRule>& rules, const AtomStore& store) : rules_(rules), store_(store) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (auto p = resultant_predicate(rules[i], store)) producers_[*p].push_back(i);
        }
    }

    // Predicates produced by rules that `clauses` mention at top level.
    std::vector<std::string> derived_in(const std::vector<AtomId>& clauses) const {
        std::vector<std::string> out;
        for (AtomId clause : clauses) {
            auto p = evaluation_predicate(clause, store_);
            if (p && producers_.contains(*p) && std::find(out.begin(), out.end(), *p) == out.end())
                out.push_back(*p);
        }
        return out;
    }

    // Post-order over the predicate dependency graph.
    void visit(const std::string& predicate) {
        auto& state = state_[predicate];
        if (state == State::Done) return;
        if (state == State::Active) throw Error(ErrorCode::CyclicRules, "rules for " + predicate + " depend on themselves");
        state = State::Active;
        for (std::size_t r : producers_.at(predicate)) {
            for (const std::string& dep : derived_in(rules_[r].pattern.clauses)) visit(dep);
        }
        state_[predicate] = State::Done;
        order_.push_back(predicate);
    }

    const std::vector<std::string>& order() const { return order_; }
    const std::vector<std::size_t>& producers(const std::string& predicate) const { return producers_.at(predicate); }

private:
    enum class State { Unseen, Active, Done };

    const std::vector<BindRule>& rules_;
    const AtomStore& store_;
    std::map<std::string, std::vector<std::size_t>> producers_;
    std::map<std::string, State> state_;
    std::vector<std::string> order_;
};

} // namespace

std::optional<std::string> resultant_predicate(const BindRule& rule, const AtomStore& store) {
    return evaluation_predicate(rule.resultant, store);
}

std::size_t forward_chain(const std::vector<BindRule>& rules, AtomStore& store, const Evaluators& evaluators,
                          ExecutionLog* log, std::size_t max_passes) {
    std::size_t total = 0;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        std::size_t added = 0;
        for (const BindRule& rule : rules) {
            BindResult r = execute_bind(rule, store, evaluators);
            added += r.atoms_added;
            if (log) log->push_back({rule.name, r.groundings, r.atoms_added, false});
        }
        total += added;
        if (added == 0) return total;
    }
    throw Error(ErrorCode::FixpointLimit, "no fixpoint after " + std::to_string(max_passes) + " passes");
}

namespace {

// Goal clauses that restrict the arguments of one derived fact, rewritten
// over the variables of a rule that concludes it. Adding them to the rule's
// pattern derives only the facts this goal can use.
struct Specialization {
    std::vector<AtomId> guards;
    std::string key;
};

std::optional<Specialization> specialize(const BindRule& rule, AtomId goal_clause, const Pattern& goal,
                                         const Planner& planner, const Evaluators& evaluators, AtomStore& store) {
    auto rule_args = store.outgoing(rule.resultant);
    auto goal_args = store.outgoing(goal_clause);
    if (rule_args.size() != 2 || goal_args.size() != 2) return std::nullopt;
    if (!store.is_type(rule_args[1], types::ListLink) || !store.is_type(goal_args[1], types::ListLink))
        return std::nullopt;
    auto rvars = store.outgoing(rule_args[1]);
    auto gvars = store.outgoing(goal_args[1]);
    if (rvars.size() != gvars.size()) return std::nullopt;

    Grounding rename;
    for (std::size_t i = 0; i < gvars.size(); ++i) {
        if (!store.is_type(gvars[i], types::VariableNode) || !store.is_type(rvars[i], types::VariableNode))
            return std::nullopt;
        if (!rename.bindings.emplace(store.name(gvars[i]), rvars[i]).second) return std::nullopt;
    }
    std::set<AtomId> rule_vars(rvars.begin(), rvars.end());
    if (rule_vars.size() != rvars.size()) return std::nullopt;

    Specialization spec;
    for (AtomId clause : goal.clauses) {
        if (!store.has_variable(clause) || evaluators.find(store.type_name(clause))) continue;
        if (!planner.derived_in({clause}).empty()) continue;
        auto vars = variables_of(store, clause);
        bool covered = std::all_of(vars.begin(), vars.end(),
                                   [&](const std::string& v) { return rename.bindings.contains(v); });
        if (covered) spec.guards.push_back(substitute(clause, rename, store));
    }
    if (spec.guards.empty()) return std::nullopt;
    std::sort(spec.guards.begin(), spec.guards.end());
    spec.guards.erase(std::unique(spec.guards.begin(), spec.guards.end()), spec.guards.end());
    spec.key = rule.name + "[";
    for (AtomId g : spec.guards) spec.key += std::to_string(g.value) + ",";
    spec.key += "]";
    return spec;
}

void run_rule(const BindRule& rule, const std::string& key, AtomStore& store, const Evaluators& evaluators,
              ExecutionLog* log, ChainCache* cache) {
    if (cache && (cache->contains(rule.name) || cache->contains(key))) {
        if (log) log->push_back({rule.name, 0, 0, true});
        return;
    }
    BindResult r = execute_bind(rule, store, evaluators);
    if (log) log->push_back({rule.name, r.groundings, r.atoms_added, false});
    if (cache) cache->insert(key);
}

} // namespace

std::vector<Grounding> backward_chain(const Pattern& goal, const std::vector<BindRule>& rules, AtomStore& store,
                                      const Evaluators& evaluators, ExecutionLog* log, ChainCache* cache) {
    Planner planner(rules, store);
    const std::vector<std::string> direct = planner.derived_in(goal.clauses);
    for (const std::string& p : direct) planner.visit(p);

    // Predicates other rules consume must be derived in full.
    std::set<std::string> full;
    for (const std::string& p : planner.order())
        for (std::size_t i : planner.producers(p))
            for (const std::string& dep : planner.derived_in(rules[i].pattern.clauses)) full.insert(dep);

    for (const std::string& predicate : planner.order()) {
        const bool only_goal = !full.contains(predicate) &&
                               std::find(direct.begin(), direct.end(), predicate) != direct.end();
        for (std::size_t i : planner.producers(predicate)) {
            const BindRule& rule = rules[i];
            std::vector<Specialization> specs;
            bool whole = !only_goal;
            for (AtomId clause : goal.clauses) {
                if (whole) break;
                if (planner.derived_in({clause}) != std::vector<std::string>{predicate}) continue;
                auto spec = specialize(rule, clause, goal, planner, evaluators, store);
                if (!spec) {
                    whole = true;
                } else if (std::none_of(specs.begin(), specs.end(),
                                        [&](const Specialization& s) { return s.key == spec->key; })) {
                    specs.push_back(std::move(*spec));
                }
            }
            if (whole) {
                run_rule(rule, rule.name, store, evaluators, log, cache);
                continue;
            }
            for (const Specialization& spec : specs) {
                Pattern pattern = rule.pattern;
                pattern.clauses.insert(pattern.clauses.end(), spec.guards.begin(), spec.guards.end());
                run_rule(BindRule{rule.name, std::move(pattern), rule.resultant}, spec.key, store, evaluators, log,
                         cache);
            }
        }
    }
    return match(goal, store, evaluators);
}

} // namespace siq
