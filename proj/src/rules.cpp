#include "siq/rules.hpp"

#include "siq/error.hpp"
#include "siq/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace siq {

namespace {

// Coordinates of the subject (1) and object (2) boxes as rule variables.
enum Coord { L1, T1, R1, B1, L2, T2, R2, B2 };

constexpr std::array<std::string_view, 8> kCoordVars{"$Left1", "$Top1", "$Right1", "$Bottom1",
                                                     "$Left2", "$Top2", "$Right2", "$Bottom2"};
constexpr std::array<std::string_view, 4> kRoles{kRoleLeft, kRoleTop, kRoleRight, kRoleBottom};

class RuleBuilder {
public:
    RuleBuilder(AtomStore& store, std::string name, RelKind rel) : store_(store), name_(std::move(name)), rel_(rel) {
        bb1_ = var("$BB1");
        bb2_ = var("$BB2");
        frame_ = var("$Frame");
        clauses_.push_back(store_.add_link(types::MemberLink, {bb1_, frame_}));
        clauses_.push_back(store_.add_link(types::MemberLink, {bb2_, frame_}));
    }

    // Binds a coordinate variable through the ingest schema on first use.
    AtomId coord(Coord c) {
        AtomId v = var(kCoordVars[c]);
        if (std::find(bound_.begin(), bound_.end(), c) == bound_.end()) {
            bound_.push_back(c);
            AtomId role = store_.add_node(types::Node, kRoles[c % 4]);
            AtomId inh = store_.add_link(types::InheritanceLink, {v, role});
            clauses_.push_back(store_.add_link(types::MemberLink, {inh, c < L2 ? bb1_ : bb2_}));
        }
        return v;
    }

    void greater(Coord a, Coord b) {
        AtomId va = coord(a);
        AtomId vb = coord(b);
        clauses_.push_back(store_.add_link(types::GreaterThanLink, {va, vb}));
    }

    // All eight coordinates, subject box first unless `swap`.
    std::vector<AtomId> boxes(bool swap) {
        std::vector<AtomId> args;
        const std::array<Coord, 8> order = swap ? std::array<Coord, 8>{L2, T2, R2, B2, L1, T1, R1, B1}
                                                : std::array<Coord, 8>{L1, T1, R1, B1, L2, T2, R2, B2};
        for (Coord c : order) args.push_back(coord(c));
        return args;
    }

    void inside(bool swap, double slack) {
        std::vector<AtomId> args = boxes(swap);
        args.push_back(number(slack));
        clauses_.push_back(store_.add_link(rule_types::BoxInsideLink, args));
    }

    void on(const RelParams& params) {
        std::vector<AtomId> args = boxes(false);
        args.push_back(number(params.on_tau));
        args.push_back(number(params.on_overlap_min));
        clauses_.push_back(store_.add_link(rule_types::BoxOnLink, args));
    }

    BindRule build() {
        std::vector<AtomId> vars{bb1_, bb2_, frame_};
        for (Coord c : bound_) vars.push_back(var(kCoordVars[c]));
        AtomId declared = store_.add_link(types::VariableList, vars);
        AtomId body = store_.add_link(types::AndLink, clauses_);
        AtomId pred = store_.add_node(types::PredicateNode, predicate_name(rel_));
        AtomId list = store_.add_link(types::ListLink, {bb1_, bb2_});
        AtomId resultant = store_.add_link(types::EvaluationLink, {pred, list});
        AtomId bind = store_.add_link(types::BindLink, {declared, body, resultant});
        return rule_from_bind_link(name_, bind, store_);
    }

private:
    AtomId var(std::string_view name) { return store_.add_node(types::VariableNode, name); }
    AtomId number(double v) { return store_.add_node(types::NumberNode, AtomStore::canonical_number(v)); }

    AtomStore& store_;
    std::string name_;
    RelKind rel_;
    AtomId bb1_, bb2_, frame_;
    std::vector<AtomId> clauses_;
    std::vector<Coord> bound_;
};

void intersects(RuleBuilder& b) {
    b.greater(R2, L1);
    b.greater(R1, L2);
    b.greater(B2, T1);
    b.greater(B1, T2);
}

std::vector<double> numbers(std::span<const AtomId> args, const AtomStore& store, std::size_t arity,
                            std::string_view type) {
    if (args.size() != arity)
        throw Error(ErrorCode::IllFormed, std::string(type) + " takes " + std::to_string(arity) + " arguments");
    std::vector<double> v;
    v.reserve(arity);
    for (AtomId a : args) v.push_back(store.number_value(a));
    return v;
}

bool box_inside(std::span<const AtomId> args, const AtomStore& store) {
    auto v = numbers(args, store, 9, rule_types::BoxInsideLink);
    const double s = v[8];
    return v[0] >= v[4] - s && v[2] <= v[6] + s && v[1] >= v[5] - s && v[3] <= v[7] + s;
}

bool box_on(std::span<const AtomId> args, const AtomStore& store) {
    auto v = numbers(args, store, 10, rule_types::BoxOnLink);
    const double overlap = std::min(v[2], v[6]) - std::max(v[0], v[4]);
    const double width = v[2] - v[0];
    const double height = v[7] - v[5];
    return overlap >= v[9] * width && std::abs(v[3] - v[5]) <= v[8] * height;
}

bool distinct(std::span<const AtomId> args, const AtomStore&) {
    if (args.size() != 2) throw Error(ErrorCode::IllFormed, "DistinctLink takes two arguments");
    return args[0] != args[1];
}

std::string fresh_name(std::size_t n) {
    std::string name = "$";
    name += static_cast<char>('a' + n % 26);
    if (n >= 26) name += std::to_string(n / 26);
    return name;
}

} // namespace

void RelParams::validate() const {
    if (!(on_tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "on_tau must be >= 0");
    if (!(on_overlap_min > 0.0 && on_overlap_min <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "on_overlap_min must be in (0, 1]");
    if (!(inside_slack >= 0.0)) throw Error(ErrorCode::InvalidArgument, "inside_slack must be >= 0");
}

Evaluators spatial_evaluators() {
    Evaluators e;
    e.add(std::string(rule_types::BoxInsideLink), box_inside);
    e.add(std::string(rule_types::BoxOnLink), box_on);
    e.add(std::string(rule_types::DistinctLink), distinct);
    return e;
}

std::vector<BindRule> builtin_rules(AtomStore& store, const RelParams& params) {
    params.validate();
    std::vector<BindRule> rules;
    auto add = [&](std::string name, RelKind rel, auto&& body) {
        RuleBuilder b(store, std::move(name), rel);
        body(b);
        rules.push_back(b.build());
    };
    add("right-of", RelKind::RightOf, [](RuleBuilder& b) { b.greater(L1, R2); });
    add("left-of", RelKind::LeftOf, [](RuleBuilder& b) { b.greater(L2, R1); });
    add("above", RelKind::Above, [](RuleBuilder& b) { b.greater(T2, B1); });
    add("below", RelKind::Below, [](RuleBuilder& b) { b.greater(T1, B2); });
    add("inside", RelKind::Inside, [&](RuleBuilder& b) { b.inside(false, params.inside_slack); });
    add("contains", RelKind::Contains, [&](RuleBuilder& b) { b.inside(true, params.inside_slack); });
    add("intersects", RelKind::Intersects, intersects);
    add("on", RelKind::On, [&](RuleBuilder& b) { b.on(params); });
    add("with-intersects", RelKind::With, intersects);
    add("with-inside", RelKind::With, [&](RuleBuilder& b) { b.inside(false, params.inside_slack); });
    add("with-contains", RelKind::With, [&](RuleBuilder& b) { b.inside(true, params.inside_slack); });
    return rules;
}

std::vector<BindRule> rules_for(const std::vector<BindRule>& rules, RelKind rel, const AtomStore& store) {
    std::vector<BindRule> out;
    for (const BindRule& r : rules) {
        if (store.is_type(r.resultant, types::EvaluationLink)) {
            AtomId head = store.outgoing(r.resultant)[0];
            if (store.is_type(head, types::PredicateNode) && store.name(head) == predicate_name(rel)) out.push_back(r);
        }
    }
    return out;
}

CompiledQuery compile_query(const QueryAST& ast, AtomStore& store) {
    if (ast.clauses.empty()) throw Error(ErrorCode::EmptyQuery, "query has no clauses");

    std::set<std::string> aliases;
    for (const QueryClause& c : ast.clauses) {
        for (const ClassRef* ref : {&c.left, &c.right}) {
            if (!ref->alias) continue;
            if (*ref->alias == "Frame") throw Error(ErrorCode::SyntaxError, "alias 'Frame' is reserved");
            aliases.insert(*ref->alias);
        }
    }

    CompiledQuery q;
    q.frame_variable = "$Frame";
    AtomId frame = store.add_node(types::VariableNode, q.frame_variable);
    std::map<std::string, std::size_t> slot_of_alias;
    std::size_t fresh = 0;

    auto slot_for = [&](const ClassRef& ref) -> std::size_t {
        if (ref.alias) {
            auto it = slot_of_alias.find(*ref.alias);
            if (it != slot_of_alias.end()) {
                if (q.slot_labels[it->second] != ref.label)
                    throw Error(ErrorCode::AliasClassMismatch,
                                "alias '" + *ref.alias + "' used for both '" + q.slot_labels[it->second] +
                                    "' and '" + ref.label + "'");
                return it->second;
            }
            slot_of_alias.emplace(*ref.alias, q.slot_variables.size());
            q.slot_variables.push_back("$" + *ref.alias);
        } else {
            std::string name;
            do {
                name = fresh_name(fresh++);
            } while (aliases.contains(name.substr(1)));
            q.slot_variables.push_back(name);
        }
        q.slot_labels.push_back(ref.label);
        return q.slot_variables.size() - 1;
    };

    auto add_clause = [&](AtomId clause) {
        if (std::find(q.goal.clauses.begin(), q.goal.clauses.end(), clause) == q.goal.clauses.end())
            q.goal.clauses.push_back(clause);
    };

    std::vector<bool> constrained;
    for (const QueryClause& c : ast.clauses) {
        std::size_t left = slot_for(c.left);
        std::size_t right = slot_for(c.right);
        constrained.resize(q.slot_variables.size(), false);
        for (std::size_t slot : {left, right}) {
            if (constrained[slot]) continue;
            constrained[slot] = true;
            AtomId v = store.add_node(types::VariableNode, q.slot_variables[slot]);
            AtomId label = store.add_node(types::ConceptNode, q.slot_labels[slot]);
            add_clause(store.add_link(types::InheritanceLink, {v, label}));
            add_clause(store.add_link(types::MemberLink, {v, frame}));
        }
        AtomId lv = store.add_node(types::VariableNode, q.slot_variables[left]);
        AtomId rv = store.add_node(types::VariableNode, q.slot_variables[right]);
        AtomId pred = store.add_node(types::PredicateNode, predicate_name(c.rel));
        AtomId list = store.add_link(types::ListLink, {lv, rv});
        add_clause(store.add_link(types::EvaluationLink, {pred, list}));
        if (lv != rv) add_clause(store.add_link(rule_types::DistinctLink, {lv, rv}));
        q.needed_predicates.insert(c.rel);
    }
    return q;
}

} // namespace siq
