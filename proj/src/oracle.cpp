#include "siq/oracle.hpp"

#include "siq/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace siq::oracle {

namespace {

bool within(const BBox& inner, const BBox& outer, double slack) {
    if (inner.left < outer.left - slack) return false;
    if (inner.top < outer.top - slack) return false;
    if (inner.right > outer.right + slack) return false;
    if (inner.bottom > outer.bottom + slack) return false;
    return true;
}

bool overlapping(const BBox& a, const BBox& b) {
    bool x = a.left < b.right && b.left < a.right;
    bool y = a.top < b.bottom && b.top < a.bottom;
    return x && y;
}

struct Slots {
    std::vector<std::string> labels;
    // Per query clause: slot index of the left and right occurrence.
    std::vector<std::pair<std::size_t, std::size_t>> clause_slots;
};

Slots assign_slots(const QueryAST& ast) {
    Slots s;
    std::map<std::string, std::size_t> by_alias;
    auto slot = [&](const ClassRef& ref) {
        if (ref.alias) {
            if (auto it = by_alias.find(*ref.alias); it != by_alias.end()) {
                if (s.labels[it->second] != ref.label)
                    throw Error(ErrorCode::AliasClassMismatch, "alias '" + *ref.alias + "' names two classes");
                return it->second;
            }
            by_alias[*ref.alias] = s.labels.size();
        }
        s.labels.push_back(ref.label);
        return s.labels.size() - 1;
    };
    for (const QueryClause& c : ast.clauses) {
        std::size_t l = slot(c.left);
        std::size_t r = slot(c.right);
        s.clause_slots.emplace_back(l, r);
    }
    return s;
}

} // namespace

bool relation(RelKind rel, const BBox& a, const BBox& b, const RelParams& params) {
    switch (rel) {
    case RelKind::RightOf: return a.left > b.right;
    case RelKind::LeftOf: return a.right < b.left;
    case RelKind::Above: return a.bottom < b.top;
    case RelKind::Below: return a.top > b.bottom;
    case RelKind::Inside: return within(a, b, params.inside_slack);
    case RelKind::Contains: return within(b, a, params.inside_slack);
    case RelKind::Intersects: return overlapping(a, b);
    case RelKind::On: {
        double shared = std::min(a.right, b.right) - std::max(a.left, b.left);
        bool wide_enough = shared >= params.on_overlap_min * (a.right - a.left);
        bool touching = std::fabs(a.bottom - b.top) <= params.on_tau * (b.bottom - b.top);
        return wide_enough && touching;
    }
    case RelKind::With:
        return overlapping(a, b) || within(a, b, params.inside_slack) || within(b, a, params.inside_slack);
    }
    return false;
}

std::vector<Assignment> retrieve(const QueryAST& ast, std::span<const Detection> detections,
                                 const RelParams& params) {
    if (ast.clauses.empty()) throw Error(ErrorCode::EmptyQuery, "query has no clauses");
    const Slots slots = assign_slots(ast);

    std::map<std::string, std::vector<const Detection*>> frames;
    for (const Detection& d : detections) frames[d.frame_id].push_back(&d);

    std::vector<Assignment> out;
    std::vector<const Detection*> chosen(slots.labels.size(), nullptr);
    for (const auto& [frame_id, dets] : frames) {
        // Plain nested enumeration over slots, one level per slot.
        auto recurse = [&](auto&& self, std::size_t slot) -> void {
            if (slot == slots.labels.size()) {
                for (std::size_t i = 0; i < ast.clauses.size(); ++i) {
                    auto [l, r] = slots.clause_slots[i];
                    if (l != r && chosen[l] == chosen[r]) return;
                    if (!relation(ast.clauses[i].rel, chosen[l]->box, chosen[r]->box, params)) return;
                }
                Assignment a{frame_id, {}};
                for (const Detection* d : chosen) a.boxes.push_back(bb_node_name(d->frame_id, d->ordinal));
                out.push_back(std::move(a));
                return;
            }
            for (const Detection* d : dets) {
                if (d->label != slots.labels[slot]) continue;
                chosen[slot] = d;
                self(self, slot + 1);
            }
        };
        recurse(recurse, 0);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace siq::oracle
