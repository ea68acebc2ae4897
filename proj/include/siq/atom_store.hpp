#ifndef SIQ_ATOM_STORE_HPP
#define SIQ_ATOM_STORE_HPP

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace siq {

/// Dense handle into an AtomStore, assigned in insertion order and never reused.
struct AtomId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(AtomId, AtomId) = default;
};

struct AtomIdHash {
    std::size_t operator()(AtomId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

using TypeId = std::uint16_t;

/// Atom type names used by the ingest schema, the rule library and the matcher.
namespace types {
inline constexpr std::string_view Node = "Node";
inline constexpr std::string_view ConceptNode = "ConceptNode";
inline constexpr std::string_view NumberNode = "NumberNode";
inline constexpr std::string_view VariableNode = "VariableNode";
inline constexpr std::string_view PredicateNode = "PredicateNode";
inline constexpr std::string_view MemberLink = "MemberLink";
inline constexpr std::string_view InheritanceLink = "InheritanceLink";
inline constexpr std::string_view ListLink = "ListLink";
inline constexpr std::string_view EvaluationLink = "EvaluationLink";
inline constexpr std::string_view AndLink = "AndLink";
inline constexpr std::string_view GreaterThanLink = "GreaterThanLink";
inline constexpr std::string_view BindLink = "BindLink";
inline constexpr std::string_view VariableList = "VariableList";
} // namespace types

/// A node (typed, named) or a link (typed, ordered non-empty outgoing set).
struct Atom {
    TypeId type = 0;
    bool is_link = false;
    /// True when this atom is a VariableNode or has one somewhere below it.
    bool has_variable = false;
    std::string name;
    std::vector<AtomId> outgoing;
    /// Parsed value, meaningful for NumberNodes only.
    double number = 0;
};

/// Deduplicating, append-only hypergraph store.
///
/// Besides the atom table it maintains an incoming-set per atom, a per-type
/// membership list and a (link type, position, child) index used by the
/// matcher to enumerate candidates. All index sets are returned as ascending
/// id sequences.
///
/// Thread-safety: any number of concurrent readers or one writer. Spans
/// returned by accessors are invalidated by the next insertion.
class AtomStore {
public:
    /// Inserts a node or returns the existing one. NumberNode names are
    /// canonicalized to the shortest round-trip decimal of their value, so
    /// "60" and "60.0" denote the same atom.
    AtomId add_node(std::string_view type, std::string_view name);

    /// Inserts a link or returns the existing one with the same type and the
    /// same outgoing sequence (order matters). Throws UnknownAtom for a child
    /// id not in the store.
    AtomId add_link(std::string_view type, std::span<const AtomId> outgoing);
    AtomId add_link(std::string_view type, std::initializer_list<AtomId> outgoing) {
        return add_link(type, std::span<const AtomId>(outgoing.begin(), outgoing.size()));
    }

    std::optional<AtomId> find_node(std::string_view type, std::string_view name) const;
    std::optional<AtomId> find_link(std::string_view type, std::span<const AtomId> outgoing) const;
    std::optional<AtomId> find_link(TypeId type, std::span<const AtomId> outgoing) const;

    std::size_t size() const noexcept { return atoms_.size(); }
    bool contains(AtomId id) const noexcept { return id.value < atoms_.size(); }

    const Atom& atom(AtomId id) const {
        if (id.value >= atoms_.size()) unknown_atom(id);
        return atoms_[id.value];
    }
    bool is_node(AtomId id) const { return !atom(id).is_link; }
    bool is_link(AtomId id) const { return atom(id).is_link; }
    const std::string& name(AtomId id) const { return atom(id).name; }
    std::span<const AtomId> outgoing(AtomId id) const { return atom(id).outgoing; }
    bool has_variable(AtomId id) const { return atom(id).has_variable; }
    std::string_view type_name(AtomId id) const { return type_name(atom(id).type); }
    std::string_view type_name(TypeId type) const;
    bool is_type(AtomId id, std::string_view type) const { return type_name(id) == type; }

    std::optional<TypeId> find_type(std::string_view type) const;

    /// Links that have `id` in their outgoing set.
    std::span<const AtomId> incoming(AtomId id) const;

    /// Links of `type` whose child at `position` is `child`.
    std::span<const AtomId> find_links(std::string_view type, std::size_t position, AtomId child) const;
    std::span<const AtomId> find_links(TypeId type, std::size_t position, AtomId child) const;

    std::span<const AtomId> atoms_of_type(std::string_view type) const;
    std::span<const AtomId> atoms_of_type(TypeId type) const;

    /// Value of a NumberNode; throws NotNumeric for any other atom.
    double number_value(AtomId id) const;

    /// Shortest decimal string that parses back to exactly `value`.
    static std::string canonical_number(double value);
    /// Parses a NumberNode name; throws InvalidArgument on malformed text.
    static double parse_number(std::string_view text);

private:
    struct NodeKey {
        TypeId type;
        std::string name;
        bool operator==(const NodeKey&) const = default;
    };
    struct NodeKeyHash {
        std::size_t operator()(const NodeKey& key) const noexcept;
    };
    struct LinkKey {
        TypeId type;
        std::vector<AtomId> outgoing;
        bool operator==(const LinkKey&) const = default;
    };
    struct LinkKeyHash {
        std::size_t operator()(const LinkKey& key) const noexcept;
    };

    [[noreturn]] static void unknown_atom(AtomId id);
    TypeId intern_type(std::string_view type);
    static std::uint64_t position_key(TypeId type, std::size_t position, AtomId child);
    static void add_sorted_unique(std::vector<AtomId>& set, AtomId id);

    std::vector<Atom> atoms_;
    std::vector<std::string> type_names_;
    std::map<std::string, TypeId, std::less<>> type_ids_;
    std::unordered_map<NodeKey, AtomId, NodeKeyHash> node_index_;
    std::unordered_map<LinkKey, AtomId, LinkKeyHash> link_index_;
    std::vector<std::vector<AtomId>> incoming_;
    std::vector<std::vector<AtomId>> type_index_;
    std::unordered_map<std::uint64_t, std::vector<AtomId>> position_index_;
};

} // namespace siq

#endif // SIQ_ATOM_STORE_HPP
