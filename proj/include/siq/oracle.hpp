#ifndef SIQ_ORACLE_HPP
#define SIQ_ORACLE_HPP

#include "siq/ingest.hpp"
#include "siq/query.hpp"
#include "siq/rules.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

// Brute-force reference evaluator. It works on raw detections and shares no
// arithmetic with the rule library, so the two can certify each other.
namespace siq::oracle {

bool relation(RelKind rel, const BBox& a, const BBox& b, const RelParams& params = {});

/// One satisfying assignment: the frame and the BB node name chosen for
/// each slot (distinct box occurrence of the query, in order of first
/// appearance, aliases merged).
struct Assignment {
    std::string frame_id;
    std::vector<std::string> boxes;

    auto operator<=>(const Assignment&) const = default;
};

/// Every satisfying assignment, sorted. Within a clause, two different
/// slots must take different detections.
std::vector<Assignment> retrieve(const QueryAST& ast, std::span<const Detection> detections,
                                 const RelParams& params = {});

} // namespace siq::oracle

#endif // SIQ_ORACLE_HPP
