#include "siq/atomese.hpp"

#include "siq/error.hpp"

#include <cctype>

namespace siq::atomese {

namespace {

struct Open {
    Tree tree;
    std::size_t line;
};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

void validate(const Open& open) {
    const Tree& t = open.tree;
    if (t.name) {
        if (!is_node_type(t.type))
            throw Error(ErrorCode::NameError, "link type " + t.type + " cannot carry a name", open.line);
        if (!t.children.empty())
            throw Error(ErrorCode::SyntaxError, "node " + t.type + " cannot have children", open.line);
    } else {
        if (is_node_type(t.type))
            throw Error(ErrorCode::NameError, "node type " + t.type + " requires a name", open.line);
        if (t.children.empty())
            throw Error(ErrorCode::EmptyLink, "link " + t.type + " has no children", open.line);
    }
}

// Closes the innermost open atom and attaches it to its parent (or the doc).
void close_top(std::vector<Open>& stack, Doc& doc) {
    Open done = std::move(stack.back());
    stack.pop_back();
    validate(done);
    if (stack.empty())
        doc.roots.push_back(std::move(done.tree));
    else
        stack.back().tree.children.push_back(std::move(done.tree));
}

std::string parse_string(std::string_view line, std::size_t& pos, std::size_t line_no) {
    // line[pos] == '"'
    std::string out;
    ++pos;
    while (pos < line.size()) {
        char c = line[pos];
        if (c == '"') {
            ++pos;
            return out;
        }
        if (c == '\\') {
            if (pos + 1 >= line.size()) break;
            char e = line[pos + 1];
            out.push_back(e == 'n' ? '\n' : e == 'r' ? '\r' : e);
            pos += 2;
            continue;
        }
        out.push_back(c);
        ++pos;
    }
    throw Error(ErrorCode::SyntaxError, "unterminated string", line_no, pos + 1);
}

void print_tree(const Tree& tree, std::size_t level, std::string& out) {
    out.append(2 * level, ' ');
    out += tree.type;
    if (tree.name) {
        out += ' ';
        out += quote(*tree.name);
    }
    out += '\n';
    for (const Tree& child : tree.children) print_tree(child, level + 1, out);
}

void print_atom(const AtomStore& store, AtomId id, std::size_t level, std::string& out) {
    const Atom& a = store.atom(id);
    out.append(2 * level, ' ');
    out += store.type_name(a.type);
    if (!a.is_link) {
        out += ' ';
        out += quote(a.name);
    }
    out += '\n';
    for (AtomId child : a.outgoing) print_atom(store, child, level + 1, out);
}

} // namespace

bool is_node_type(std::string_view type) {
    constexpr std::string_view suffix = "Node";
    return type.size() >= suffix.size() && type.substr(type.size() - suffix.size()) == suffix;
}

std::string quote(std::string_view name) {
    std::string out;
    out.reserve(name.size() + 2);
    out.push_back('"');
    for (char c : name) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

Doc parse(std::string_view text) {
    Doc doc;
    std::vector<Open> stack;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        if (indent < line.size() && line[indent] == '\t')
            throw Error(ErrorCode::IndentError, "tab in indentation", line_no, indent + 1);
        if (indent == line.size() || line[indent] == ';') continue;
        if (indent % 2 != 0)
            throw Error(ErrorCode::IndentError, "indentation must be a multiple of two spaces", line_no);
        std::size_t level = indent / 2;
        if (level > stack.size())
            throw Error(ErrorCode::IndentError, "indentation skips a level", line_no);

        std::size_t pos = indent;
        if (!is_alpha(line[pos]))
            throw Error(ErrorCode::SyntaxError, "expected atom type", line_no, pos + 1);
        std::size_t type_begin = pos;
        while (pos < line.size() && is_alnum(line[pos])) ++pos;
        Open open{Tree{std::string(line.substr(type_begin, pos - type_begin)), std::nullopt, {}}, line_no};

        if (pos < line.size() && line[pos] == ' ' && pos + 1 < line.size() && line[pos + 1] == '"') {
            ++pos;
            open.tree.name = parse_string(line, pos, line_no);
        }
        while (pos < line.size() && line[pos] == ' ') ++pos;
        if (pos < line.size()) {
            if (line[pos] == '\t') throw Error(ErrorCode::IndentError, "tab character", line_no, pos + 1);
            if (line[pos] != ';')
                throw Error(ErrorCode::SyntaxError, "unexpected character after atom", line_no, pos + 1);
        }

        while (stack.size() > level) close_top(stack, doc);
        stack.push_back(std::move(open));
    }
    while (!stack.empty()) close_top(stack, doc);
    return doc;
}

std::string print(const Tree& tree) {
    std::string out;
    print_tree(tree, 0, out);
    return out;
}

std::string print(const Doc& doc) {
    std::string out;
    for (const Tree& root : doc.roots) print_tree(root, 0, out);
    return out;
}

std::string print(const AtomStore& store, AtomId root) {
    std::string out;
    print_atom(store, root, 0, out);
    return out;
}

std::string print(const AtomStore& store) {
    std::string out;
    for (std::uint32_t i = 0; i < store.size(); ++i) {
        AtomId id{i};
        if (store.incoming(id).empty()) print_atom(store, id, 0, out);
    }
    return out;
}

Tree to_tree(const AtomStore& store, AtomId root) {
    const Atom& a = store.atom(root);
    Tree tree{std::string(store.type_name(a.type)), std::nullopt, {}};
    if (!a.is_link) {
        tree.name = a.name;
    } else {
        tree.children.reserve(a.outgoing.size());
        for (AtomId child : a.outgoing) tree.children.push_back(to_tree(store, child));
    }
    return tree;
}

AtomId load(const Tree& tree, AtomStore& store) {
    if (tree.name) return store.add_node(tree.type, *tree.name);
    std::vector<AtomId> children;
    children.reserve(tree.children.size());
    for (const Tree& child : tree.children) children.push_back(load(child, store));
    return store.add_link(tree.type, children);
}

std::vector<AtomId> load(const Doc& doc, AtomStore& store) {
    std::vector<AtomId> roots;
    roots.reserve(doc.roots.size());
    for (const Tree& tree : doc.roots) roots.push_back(load(tree, store));
    return roots;
}

} // namespace siq::atomese
