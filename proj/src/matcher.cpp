#include "siq/matcher.hpp"

#include "siq/error.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace siq {

namespace {

constexpr AtomId kUnbound{std::numeric_limits<std::uint32_t>::max()};

bool is_variable(const AtomStore& store, AtomId id) {
    const Atom& a = store.atom(id);
    return !a.is_link && store.type_name(a.type) == types::VariableNode;
}

void collect_variables(const AtomStore& store, AtomId tmpl, std::vector<AtomId>& out) {
    const Atom& a = store.atom(tmpl);
    if (!a.has_variable) return;
    if (!a.is_link) {
        if (std::find(out.begin(), out.end(), tmpl) == out.end()) out.push_back(tmpl);
        return;
    }
    for (AtomId child : a.outgoing) collect_variables(store, child, out);
}

struct EvalClause {
    AtomId clause;
    const Evaluator* evaluator;
    std::vector<std::size_t> vars;
};

struct CompiledPattern {
    std::vector<AtomId> vars;
    std::unordered_map<std::uint32_t, std::size_t> var_index;

    // Patterns have a handful of variables; a scan beats hashing.
    std::size_t index_of(AtomId var) const {
        return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), var) - vars.begin());
    }
    std::vector<AtomId> structural;
    std::vector<EvalClause> evals;
    std::vector<std::vector<std::size_t>> evals_of_var;
};

CompiledPattern compile(const Pattern& pattern, const AtomStore& store, const Evaluators& evaluators) {
    if (pattern.clauses.empty()) throw Error(ErrorCode::IllFormed, "pattern has no clauses");
    CompiledPattern c;
    std::vector<AtomId> structural_vars;
    std::vector<AtomId> eval_clauses;

    for (AtomId clause : pattern.clauses) {
        const Atom& a = store.atom(clause);
        if (is_variable(store, clause)) throw Error(ErrorCode::IllFormed, "a clause cannot be a bare variable");
        const Evaluator* fn = a.is_link ? evaluators.find(store.type_name(a.type)) : nullptr;
        if (fn) {
            for (AtomId arg : a.outgoing) {
                if (store.has_variable(arg) && !is_variable(store, arg))
                    throw Error(ErrorCode::IllFormed, "evaluatable arguments must be variables or ground atoms");
            }
            eval_clauses.push_back(clause);
            continue;
        }
        // Ground structural clauses are atoms of the store and hold trivially.
        if (!a.has_variable) continue;
        if (std::find(c.structural.begin(), c.structural.end(), clause) == c.structural.end())
            c.structural.push_back(clause);
        collect_variables(store, clause, structural_vars);
    }

    std::vector<AtomId> all = structural_vars;
    for (AtomId clause : eval_clauses) collect_variables(store, clause, all);
    for (AtomId declared : pattern.variables) {
        if (!is_variable(store, declared)) throw Error(ErrorCode::IllFormed, "declared variable is not a VariableNode");
        if (std::find(all.begin(), all.end(), declared) == all.end()) all.push_back(declared);
    }
    for (AtomId var : all) {
        if (std::find(structural_vars.begin(), structural_vars.end(), var) == structural_vars.end())
            throw Error(ErrorCode::IllFormed,
                        "variable " + store.name(var) + " does not occur in any structural clause");
    }

    c.vars = std::move(all);
    for (std::size_t i = 0; i < c.vars.size(); ++i) c.var_index.emplace(c.vars[i].value, i);
    c.evals_of_var.resize(c.vars.size());
    for (AtomId clause : eval_clauses) {
        EvalClause e{clause, evaluators.find(store.type_name(clause)), {}};
        std::vector<AtomId> vs;
        collect_variables(store, clause, vs);
        for (AtomId v : vs) {
            std::size_t idx = c.var_index.at(v.value);
            e.vars.push_back(idx);
            c.evals_of_var[idx].push_back(c.evals.size());
        }
        c.evals.push_back(std::move(e));
    }
    return c;
}

class Search {
public:
    Search(const AtomStore& store, const CompiledPattern& pattern, std::vector<Grounding>& out)
        : store_(store), p_(pattern), binding_(pattern.vars.size(), kUnbound),
          done_(pattern.structural.size(), false), out_(out) {}

    void run() {
        for (const EvalClause& e : p_.evals) {
            if (e.vars.empty() && !evaluate(e)) return;
        }
        step(p_.structural.size());
    }

private:
    enum class State { Ground, Unbound, Absent };
    struct Resolved {
        State state;
        AtomId id;
    };

    Resolved resolve(AtomId tmpl) const {
        const Atom& a = store_.atom(tmpl);
        if (!a.has_variable) return {State::Ground, tmpl};
        if (!a.is_link) {
            AtomId b = binding_[p_.index_of(tmpl)];
            return b == kUnbound ? Resolved{State::Unbound, b} : Resolved{State::Ground, b};
        }
        constexpr std::size_t kInline = 12;
        std::array<AtomId, kInline> small;
        std::vector<AtomId> large;
        const std::size_t n = a.outgoing.size();
        if (n > kInline) large.resize(n);
        AtomId* kids = n > kInline ? large.data() : small.data();
        bool unbound = false;
        for (std::size_t i = 0; i < n; ++i) {
            Resolved r = resolve(a.outgoing[i]);
            if (r.state == State::Absent) return r;
            if (r.state == State::Unbound) unbound = true;
            kids[i] = r.id;
        }
        if (unbound) return {State::Unbound, kUnbound};
        auto found = store_.find_link(a.type, std::span<const AtomId>(kids, n));
        return found ? Resolved{State::Ground, *found} : Resolved{State::Absent, kUnbound};
    }

    std::span<const AtomId> candidates(AtomId clause) const {
        const Atom& t = store_.atom(clause);
        std::span<const AtomId> best;
        bool have = false;
        for (std::size_t pos = 0; pos < t.outgoing.size(); ++pos) {
            Resolved r = resolve(t.outgoing[pos]);
            if (r.state == State::Absent) return {};
            if (r.state != State::Ground) continue;
            auto links = store_.find_links(t.type, pos, r.id);
            if (!have || links.size() < best.size()) {
                best = links;
                have = true;
            }
        }
        return have ? best : store_.atoms_of_type(t.type);
    }

    bool unify(AtomId tmpl, AtomId cand) {
        const Atom& t = store_.atom(tmpl);
        if (!t.has_variable) return tmpl == cand;
        const Atom& c = store_.atom(cand);
        if (!t.is_link) {
            std::size_t idx = p_.index_of(tmpl);
            if (binding_[idx] != kUnbound) return binding_[idx] == cand;
            if (c.has_variable) return false;
            binding_[idx] = cand;
            trail_.push_back(idx);
            return true;
        }
        if (!c.is_link || c.type != t.type || c.outgoing.size() != t.outgoing.size()) return false;
        for (std::size_t i = 0; i < t.outgoing.size(); ++i) {
            if (!unify(t.outgoing[i], c.outgoing[i])) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            binding_[trail_.back()] = kUnbound;
            trail_.pop_back();
        }
    }

    bool evaluate(const EvalClause& e) const {
        const Atom& a = store_.atom(e.clause);
        std::vector<AtomId> args;
        args.reserve(a.outgoing.size());
        for (AtomId child : a.outgoing)
            args.push_back(store_.has_variable(child) ? binding_[p_.index_of(child)] : child);
        // A variable bound to a non-number fails the constraint instead of
        // aborting the search, so the result does not depend on clause order.
        try {
            return (*e.evaluator)(args, store_);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NotNumeric) return false;
            throw;
        }
    }

    // Evaluates the constraints that became fully bound since `mark`.
    bool constraints_hold(std::size_t mark) const {
        for (std::size_t t = mark; t < trail_.size(); ++t) {
            for (std::size_t ei : p_.evals_of_var[trail_[t]]) {
                const EvalClause& e = p_.evals[ei];
                bool ready = std::all_of(e.vars.begin(), e.vars.end(),
                                         [this](std::size_t v) { return binding_[v] != kUnbound; });
                if (ready && !evaluate(e)) return false;
            }
        }
        return true;
    }

    void step(std::size_t remaining) {
        if (remaining == 0) {
            Grounding g;
            for (std::size_t i = 0; i < p_.vars.size(); ++i) g.bindings.emplace(store_.name(p_.vars[i]), binding_[i]);
            out_.push_back(std::move(g));
            return;
        }
        // Most constrained clause first.
        std::size_t chosen = 0;
        std::span<const AtomId> best;
        bool have = false;
        for (std::size_t i = 0; i < p_.structural.size(); ++i) {
            if (done_[i]) continue;
            auto cands = candidates(p_.structural[i]);
            if (!have || cands.size() < best.size()) {
                chosen = i;
                best = cands;
                have = true;
                if (cands.empty()) return;
                if (cands.size() == 1) break;
            }
        }
        done_[chosen] = true;
        const AtomId clause = p_.structural[chosen];
        for (AtomId cand : best) {
            if (store_.atom(cand).has_variable) continue;
            std::size_t mark = trail_.size();
            if (unify(clause, cand) && constraints_hold(mark)) step(remaining - 1);
            undo(mark);
        }
        done_[chosen] = false;
    }

    const AtomStore& store_;
    const CompiledPattern& p_;
    std::vector<AtomId> binding_;
    std::vector<std::size_t> trail_;
    std::vector<bool> done_;
    std::vector<Grounding>& out_;
};

bool greater_than(std::span<const AtomId> args, const AtomStore& store) {
    if (args.size() != 2) throw Error(ErrorCode::IllFormed, "GreaterThanLink takes exactly two arguments");
    return store.number_value(args[0]) > store.number_value(args[1]);
}

AtomId resolve_argument(AtomId child, const Grounding& grounding, const AtomStore& store) {
    if (!store.has_variable(child)) return child;
    if (is_variable(store, child)) {
        auto it = grounding.bindings.find(store.name(child));
        if (it == grounding.bindings.end())
            throw Error(ErrorCode::IllFormed, "unbound variable " + store.name(child));
        return it->second;
    }
    auto found = find_substituted(child, grounding, store);
    if (!found) throw Error(ErrorCode::IllFormed, "argument does not resolve to a stored atom");
    return *found;
}

} // namespace

Evaluators::Evaluators() { add(std::string(types::GreaterThanLink), greater_than); }

void Evaluators::add(std::string type, Evaluator evaluator) { table_[std::move(type)] = std::move(evaluator); }

const Evaluator* Evaluators::find(std::string_view type) const {
    auto it = table_.find(type);
    return it == table_.end() ? nullptr : &it->second;
}

Pattern pattern_from_body(const AtomStore& store, AtomId body) {
    Pattern p;
    if (store.is_link(body) && store.is_type(body, types::AndLink)) {
        auto out = store.outgoing(body);
        p.clauses.assign(out.begin(), out.end());
    } else {
        p.clauses.push_back(body);
    }
    return p;
}

std::vector<Grounding> match(const Pattern& pattern, const AtomStore& store, const Evaluators& evaluators) {
    CompiledPattern compiled = compile(pattern, store, evaluators);
    std::vector<Grounding> out;
    Search(store, compiled, out).run();
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool eval_clause(AtomId clause, const Grounding& grounding, const AtomStore& store, const Evaluators& evaluators) {
    const Atom& a = store.atom(clause);
    const Evaluator* fn = a.is_link ? evaluators.find(store.type_name(a.type)) : nullptr;
    if (!fn) throw Error(ErrorCode::IllFormed, "clause type " + std::string(store.type_name(a.type)) + " is not evaluatable");
    std::vector<AtomId> args;
    args.reserve(a.outgoing.size());
    for (AtomId child : a.outgoing) args.push_back(resolve_argument(child, grounding, store));
    return (*fn)(args, store);
}

AtomId substitute(AtomId tmpl, const Grounding& grounding, AtomStore& store) {
    const Atom& a = store.atom(tmpl);
    if (!a.has_variable) return tmpl;
    if (!a.is_link) {
        auto it = grounding.bindings.find(a.name);
        if (it == grounding.bindings.end()) throw Error(ErrorCode::IllFormed, "unbound variable " + a.name);
        return it->second;
    }
    const std::string type(store.type_name(a.type));
    const std::vector<AtomId> children = a.outgoing;
    std::vector<AtomId> kids;
    kids.reserve(children.size());
    for (AtomId child : children) kids.push_back(substitute(child, grounding, store));
    return store.add_link(type, kids);
}

std::optional<AtomId> find_substituted(AtomId tmpl, const Grounding& grounding, const AtomStore& store) {
    const Atom& a = store.atom(tmpl);
    if (!a.has_variable) return tmpl;
    if (!a.is_link) {
        auto it = grounding.bindings.find(a.name);
        if (it == grounding.bindings.end()) return std::nullopt;
        return it->second;
    }
    std::vector<AtomId> kids;
    kids.reserve(a.outgoing.size());
    for (AtomId child : a.outgoing) {
        auto k = find_substituted(child, grounding, store);
        if (!k) return std::nullopt;
        kids.push_back(*k);
    }
    return store.find_link(a.type, kids);
}

std::vector<std::string> variables_of(const AtomStore& store, AtomId tmpl) {
    std::vector<AtomId> vars;
    collect_variables(store, tmpl, vars);
    std::vector<std::string> names;
    names.reserve(vars.size());
    for (AtomId v : vars) names.push_back(store.name(v));
    std::sort(names.begin(), names.end());
    return names;
}

BindRule make_rule(std::string name, Pattern pattern, AtomId resultant, const AtomStore& store) {
    std::vector<AtomId> pattern_vars = pattern.variables;
    for (AtomId clause : pattern.clauses) collect_variables(store, clause, pattern_vars);
    std::vector<AtomId> result_vars;
    collect_variables(store, resultant, result_vars);
    for (AtomId v : result_vars) {
        if (std::find(pattern_vars.begin(), pattern_vars.end(), v) == pattern_vars.end())
            throw Error(ErrorCode::IllFormed, "resultant variable " + store.name(v) + " is not bound by the pattern");
    }
    return BindRule{std::move(name), std::move(pattern), resultant};
}

BindRule rule_from_bind_link(std::string name, AtomId bind_link, const AtomStore& store) {
    if (!store.is_link(bind_link) || !store.is_type(bind_link, types::BindLink))
        throw Error(ErrorCode::IllFormed, "expected a BindLink");
    auto out = store.outgoing(bind_link);
    if (out.size() != 2 && out.size() != 3)
        throw Error(ErrorCode::IllFormed, "BindLink takes [variables,] body, resultant");
    Pattern pattern = pattern_from_body(store, out[out.size() - 2]);
    if (out.size() == 3) {
        AtomId decl = out[0];
        if (store.is_link(decl) && store.is_type(decl, types::VariableList)) {
            auto vs = store.outgoing(decl);
            pattern.variables.assign(vs.begin(), vs.end());
        } else if (is_variable(store, decl)) {
            pattern.variables.push_back(decl);
        } else {
            throw Error(ErrorCode::IllFormed, "BindLink variable declaration must be a VariableList or VariableNode");
        }
    }
    return make_rule(std::move(name), std::move(pattern), out.back(), store);
}

BindResult execute_bind(const BindRule& rule, AtomStore& store, const Evaluators& evaluators) {
    const std::size_t before = store.size();
    std::vector<Grounding> groundings = match(rule.pattern, store, evaluators);
    BindResult result;
    result.groundings = groundings.size();
    std::unordered_set<AtomId, AtomIdHash> seen;
    for (const Grounding& g : groundings) {
        AtomId root = substitute(rule.resultant, g, store);
        if (seen.insert(root).second) result.roots.push_back(root);
    }
    result.atoms_added = store.size() - before;
    return result;
}

} // namespace siq
