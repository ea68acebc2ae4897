#ifndef SIQ_ATOMESE_HPP
#define SIQ_ATOMESE_HPP

#include "siq/atom_store.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace siq::atomese {

/// One parsed atom: a node carries a name and no children, a link carries
/// children and no name.
struct Tree {
    std::string type;
    std::optional<std::string> name;
    std::vector<Tree> children;

    bool is_node() const { return name.has_value(); }
    bool operator==(const Tree&) const = default;
};

struct Doc {
    std::vector<Tree> roots;
    bool operator==(const Doc&) const = default;
};

/// True for type names that must carry a name ("Node" or "...Node").
bool is_node_type(std::string_view type);

/// Parses the indentation form: one atom per line, two spaces per nesting
/// level, `;` comments and blank lines ignored.
///
/// Throws IndentError, NameError, EmptyLink or SyntaxError, each carrying the
/// offending line number.
Doc parse(std::string_view text);

std::string print(const Doc& doc);
std::string print(const Tree& tree);
/// Prints the tree rooted at `root` as stored.
std::string print(const AtomStore& store, AtomId root);
/// Prints every atom that has no incoming links, in id order. Every other
/// atom appears inside one of those trees, so this is a complete dump.
std::string print(const AtomStore& store);

/// Rebuilds `root` from the store as a Tree.
Tree to_tree(const AtomStore& store, AtomId root);

/// Inserts each tree bottom-up and returns the root ids in document order.
std::vector<AtomId> load(const Doc& doc, AtomStore& store);
AtomId load(const Tree& tree, AtomStore& store);

/// Quotes a node name using the printer's escaping rules.
std::string quote(std::string_view name);

} // namespace siq::atomese

#endif // SIQ_ATOMESE_HPP
