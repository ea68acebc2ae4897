#include "siq/atom_store.hpp"

#include "siq/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>

namespace siq {

namespace {

inline void hash_combine(std::size_t& seed, std::size_t value) {
    seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

const std::vector<AtomId> kEmpty;

} // namespace

std::size_t AtomStore::NodeKeyHash::operator()(const NodeKey& key) const noexcept {
    std::size_t seed = std::hash<std::string>{}(key.name);
    hash_combine(seed, key.type);
    return seed;
}

std::size_t AtomStore::LinkKeyHash::operator()(const LinkKey& key) const noexcept {
    std::size_t seed = key.type;
    for (AtomId id : key.outgoing) hash_combine(seed, id.value);
    return seed;
}

std::string AtomStore::canonical_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

double AtomStore::parse_number(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last)
        throw Error(ErrorCode::InvalidArgument, "malformed NumberNode name \"" + std::string(text) + "\"");
    return value;
}

TypeId AtomStore::intern_type(std::string_view type) {
    if (type.empty()) throw Error(ErrorCode::InvalidArgument, "atom type must be non-empty");
    if (auto it = type_ids_.find(type); it != type_ids_.end()) return it->second;
    if (type_names_.size() > std::numeric_limits<TypeId>::max())
        throw Error(ErrorCode::InvalidArgument, "too many atom types");
    auto id = static_cast<TypeId>(type_names_.size());
    type_names_.emplace_back(type);
    type_ids_.emplace(std::string(type), id);
    type_index_.emplace_back();
    return id;
}

std::optional<TypeId> AtomStore::find_type(std::string_view type) const {
    if (auto it = type_ids_.find(type); it != type_ids_.end()) return it->second;
    return std::nullopt;
}

std::string_view AtomStore::type_name(TypeId type) const {
    if (type >= type_names_.size()) throw Error(ErrorCode::InvalidArgument, "unknown type id");
    return type_names_[type];
}

std::uint64_t AtomStore::position_key(TypeId type, std::size_t position, AtomId child) {
    return (std::uint64_t{type} << 48) | (std::uint64_t{position & 0xffff} << 32) | child.value;
}

void AtomStore::add_sorted_unique(std::vector<AtomId>& set, AtomId id) {
    // Ids are handed out in increasing order, so appends keep the set sorted.
    if (set.empty() || set.back() < id) set.push_back(id);
}

AtomId AtomStore::add_node(std::string_view type, std::string_view name) {
    TypeId type_id = intern_type(type);
    const bool numeric = type == types::NumberNode;
    const double value = numeric ? parse_number(name) : 0.0;
    std::string canonical = numeric ? canonical_number(value) : std::string(name);
    NodeKey key{type_id, canonical};
    if (auto it = node_index_.find(key); it != node_index_.end()) return it->second;

    AtomId id{static_cast<std::uint32_t>(atoms_.size())};
    Atom atom;
    atom.type = type_id;
    atom.is_link = false;
    atom.has_variable = type == types::VariableNode;
    atom.name = std::move(canonical);
    atom.number = value;
    atoms_.push_back(std::move(atom));
    incoming_.emplace_back();
    type_index_[type_id].push_back(id);
    node_index_.emplace(std::move(key), id);
    return id;
}

AtomId AtomStore::add_link(std::string_view type, std::span<const AtomId> outgoing) {
    if (outgoing.empty()) throw Error(ErrorCode::InvalidArgument, "link outgoing set must be non-empty");
    if (outgoing.size() > 0xffff) throw Error(ErrorCode::InvalidArgument, "link arity too large");
    for (AtomId child : outgoing) {
        if (!contains(child))
            throw Error(ErrorCode::UnknownAtom, "unknown atom id " + std::to_string(child.value));
    }
    TypeId type_id = intern_type(type);
    LinkKey key{type_id, std::vector<AtomId>(outgoing.begin(), outgoing.end())};
    if (auto it = link_index_.find(key); it != link_index_.end()) return it->second;

    AtomId id{static_cast<std::uint32_t>(atoms_.size())};
    Atom atom;
    atom.type = type_id;
    atom.is_link = true;
    atom.outgoing = key.outgoing;
    atom.has_variable = std::any_of(outgoing.begin(), outgoing.end(),
                                    [this](AtomId c) { return atoms_[c.value].has_variable; });
    atoms_.push_back(std::move(atom));
    incoming_.emplace_back();
    type_index_[type_id].push_back(id);
    for (std::size_t pos = 0; pos < outgoing.size(); ++pos) {
        add_sorted_unique(incoming_[outgoing[pos].value], id);
        add_sorted_unique(position_index_[position_key(type_id, pos, outgoing[pos])], id);
    }
    link_index_.emplace(std::move(key), id);
    return id;
}

std::optional<AtomId> AtomStore::find_node(std::string_view type, std::string_view name) const {
    auto type_id = find_type(type);
    if (!type_id) return std::nullopt;
    std::string canonical;
    if (type == types::NumberNode) {
        try {
            canonical = canonical_number(parse_number(name));
        } catch (const Error&) {
            return std::nullopt;
        }
    } else {
        canonical = std::string(name);
    }
    if (auto it = node_index_.find(NodeKey{*type_id, std::move(canonical)}); it != node_index_.end())
        return it->second;
    return std::nullopt;
}

std::optional<AtomId> AtomStore::find_link(std::string_view type, std::span<const AtomId> outgoing) const {
    auto type_id = find_type(type);
    if (!type_id) return std::nullopt;
    return find_link(*type_id, outgoing);
}

std::optional<AtomId> AtomStore::find_link(TypeId type, std::span<const AtomId> outgoing) const {
    // Probe through the shortest position list rather than building a key.
    if (outgoing.empty()) return std::nullopt;
    std::span<const AtomId> best;
    bool first = true;
    for (std::size_t pos = 0; pos < outgoing.size(); ++pos) {
        auto candidates = find_links(type, pos, outgoing[pos]);
        if (candidates.empty()) return std::nullopt;
        if (first || candidates.size() < best.size()) {
            best = candidates;
            first = false;
        }
    }
    for (AtomId candidate : best) {
        const auto& out = atoms_[candidate.value].outgoing;
        if (std::equal(out.begin(), out.end(), outgoing.begin(), outgoing.end())) return candidate;
    }
    return std::nullopt;
}

void AtomStore::unknown_atom(AtomId id) {
    throw Error(ErrorCode::UnknownAtom, "unknown atom id " + std::to_string(id.value));
}

std::span<const AtomId> AtomStore::incoming(AtomId id) const {
    if (!contains(id)) throw Error(ErrorCode::UnknownAtom, "unknown atom id " + std::to_string(id.value));
    return incoming_[id.value];
}

std::span<const AtomId> AtomStore::find_links(std::string_view type, std::size_t position, AtomId child) const {
    if (!contains(child))
        throw Error(ErrorCode::UnknownAtom, "unknown atom id " + std::to_string(child.value));
    auto type_id = find_type(type);
    if (!type_id) return kEmpty;
    return find_links(*type_id, position, child);
}

std::span<const AtomId> AtomStore::find_links(TypeId type, std::size_t position, AtomId child) const {
    if (!contains(child))
        throw Error(ErrorCode::UnknownAtom, "unknown atom id " + std::to_string(child.value));
    if (position > 0xffff) return kEmpty;
    auto it = position_index_.find(position_key(type, position, child));
    if (it == position_index_.end()) return kEmpty;
    return it->second;
}

std::span<const AtomId> AtomStore::atoms_of_type(std::string_view type) const {
    auto type_id = find_type(type);
    if (!type_id) return kEmpty;
    return type_index_[*type_id];
}

std::span<const AtomId> AtomStore::atoms_of_type(TypeId type) const {
    if (type >= type_index_.size()) return kEmpty;
    return type_index_[type];
}

double AtomStore::number_value(AtomId id) const {
    const Atom& a = atom(id);
    if (a.is_link || type_names_[a.type] != types::NumberNode)
        throw Error(ErrorCode::NotNumeric, "atom " + std::to_string(id.value) + " is not a NumberNode");
    return a.number;
}

} // namespace siq
