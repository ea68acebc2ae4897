#include "siq/ingest.hpp"

#include "siq/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace siq {

namespace {

using nlohmann::json;

constexpr std::string_view kBBPrefix = "BB#";
constexpr std::string_view kFramePrefix = "Frame#";

std::string frame_id_of(const json& value, std::size_t line) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return value.dump();
    throw Error(ErrorCode::FormatError, "\"frame\" must be a string or an integer", line);
}

double number_of(const json& value, const char* what, std::size_t line) {
    if (!value.is_number()) throw Error(ErrorCode::FormatError, std::string(what) + " must be a number", line);
    return value.get<double>();
}

Detection parse_one(const json& entry, std::size_t line) {
    if (!entry.is_object()) throw Error(ErrorCode::FormatError, "detection must be an object", line);
    Detection det;
    auto label = entry.find("label");
    if (label == entry.end() || !label->is_string() || label->get<std::string>().empty())
        throw Error(ErrorCode::FormatError, "detection needs a non-empty string \"label\"", line);
    det.label = label->get<std::string>();

    auto conf = entry.find("conf");
    if (conf == entry.end()) throw Error(ErrorCode::FormatError, "detection needs \"conf\"", line);
    det.confidence = number_of(*conf, "\"conf\"", line);
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0))
        throw Error(ErrorCode::RangeError, "confidence outside [0,1]", line);

    auto box = entry.find("box");
    if (box == entry.end() || !box->is_array() || box->size() != 4)
        throw Error(ErrorCode::FormatError, "\"box\" must be [left, top, right, bottom]", line);
    det.box = BBox{number_of((*box)[0], "box", line), number_of((*box)[1], "box", line),
                   number_of((*box)[2], "box", line), number_of((*box)[3], "box", line)};
    if (!(det.box.left < det.box.right) || !(det.box.top < det.box.bottom))
        throw Error(ErrorCode::GeometryError, "box must have positive width and height", line);
    return det;
}

std::optional<std::size_t> parse_ordinal(std::string_view text) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

std::string bb_node_name(std::string_view frame_id, std::size_t ordinal) {
    std::string name(kBBPrefix);
    name += frame_id;
    name += '-';
    name += std::to_string(ordinal);
    return name;
}

std::string frame_node_name(std::string_view frame_id) {
    return std::string(kFramePrefix) + std::string(frame_id);
}

DetectionSet parse_detections(std::string_view jsonl) {
    DetectionSet set;
    std::unordered_map<std::string, std::size_t> next_ordinal;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < jsonl.size()) {
        std::size_t end = jsonl.find('\n', start);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorCode::FormatError, "invalid JSON", line_no);
        if (!doc.is_object()) throw Error(ErrorCode::FormatError, "each line must be a JSON object", line_no);
        auto frame = doc.find("frame");
        if (frame == doc.end()) throw Error(ErrorCode::FormatError, "missing \"frame\"", line_no);
        std::string frame_id = frame_id_of(*frame, line_no);
        auto dets = doc.find("detections");
        if (dets == doc.end() || !dets->is_array())
            throw Error(ErrorCode::FormatError, "\"detections\" must be an array", line_no);

        auto [it, inserted] = next_ordinal.try_emplace(frame_id, 1);
        if (inserted) set.frames.push_back(frame_id);
        for (const json& entry : *dets) {
            Detection det = parse_one(entry, line_no);
            det.frame_id = frame_id;
            det.ordinal = it->second++;
            set.detections.push_back(std::move(det));
        }
    }
    return set;
}

DetectionSet read_detections(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_detections(buf.str());
}

DetectionSet filter_min_confidence(DetectionSet set, double min_confidence) {
    std::erase_if(set.detections, [&](const Detection& d) { return d.confidence < min_confidence; });
    return set;
}

std::size_t build_graph(std::span<const Detection> detections, AtomStore& store) {
    const std::size_t before = store.size();
    const std::array<std::string_view, 5> roles{kRoleLeft, kRoleTop, kRoleRight, kRoleBottom, kRoleConfidence};
    std::array<AtomId, 5> role_nodes{};
    for (std::size_t i = 0; i < roles.size(); ++i) role_nodes[i] = store.add_node(types::Node, roles[i]);

    for (const Detection& det : detections) {
        AtomId frame = store.add_node(types::ConceptNode, frame_node_name(det.frame_id));
        AtomId bb = store.add_node(types::ConceptNode, bb_node_name(det.frame_id, det.ordinal));
        AtomId label = store.add_node(types::ConceptNode, det.label);
        store.add_link(types::MemberLink, {bb, frame});
        store.add_link(types::InheritanceLink, {bb, label});
        const std::array<double, 5> values{det.box.left, det.box.top, det.box.right, det.box.bottom,
                                           det.confidence};
        for (std::size_t i = 0; i < roles.size(); ++i) {
            AtomId number = store.add_node(types::NumberNode, AtomStore::canonical_number(values[i]));
            AtomId coord = store.add_link(types::InheritanceLink, {number, role_nodes[i]});
            store.add_link(types::MemberLink, {coord, bb});
        }
    }
    return store.size() - before;
}

std::size_t build_graph(const DetectionSet& set, AtomStore& store) {
    const std::size_t before = store.size();
    for (const std::string& frame : set.frames) store.add_node(types::ConceptNode, frame_node_name(frame));
    build_graph(std::span<const Detection>(set.detections), store);
    return store.size() - before;
}

std::optional<Detection> decode_bb(const AtomStore& store, AtomId bb) {
    if (!store.contains(bb) || !store.is_node(bb) || !store.is_type(bb, types::ConceptNode)) return std::nullopt;
    const std::string& bb_name = store.name(bb);
    if (!bb_name.starts_with(kBBPrefix)) return std::nullopt;

    Detection det;
    bool have_frame = false;
    for (AtomId link : store.find_links(types::MemberLink, 0, bb)) {
        auto out = store.outgoing(link);
        if (out.size() != 2 || !store.is_node(out[1]) || !store.is_type(out[1], types::ConceptNode)) continue;
        const std::string& frame_name = store.name(out[1]);
        if (!frame_name.starts_with(kFramePrefix)) continue;
        det.frame_id = frame_name.substr(kFramePrefix.size());
        have_frame = true;
        break;
    }
    if (!have_frame) return std::nullopt;
    std::string expected_prefix = std::string(kBBPrefix) + det.frame_id + "-";
    if (!bb_name.starts_with(expected_prefix)) return std::nullopt;
    auto ordinal = parse_ordinal(std::string_view(bb_name).substr(expected_prefix.size()));
    if (!ordinal) return std::nullopt;
    det.ordinal = *ordinal;

    bool have_label = false;
    for (AtomId link : store.find_links(types::InheritanceLink, 0, bb)) {
        auto out = store.outgoing(link);
        if (out.size() == 2 && store.is_node(out[1]) && store.is_type(out[1], types::ConceptNode)) {
            det.label = store.name(out[1]);
            have_label = true;
            break;
        }
    }
    if (!have_label) return std::nullopt;

    unsigned seen = 0;
    for (AtomId link : store.find_links(types::MemberLink, 1, bb)) {
        auto out = store.outgoing(link);
        if (out.size() != 2 || !store.is_type(out[0], types::InheritanceLink)) continue;
        auto coord = store.outgoing(out[0]);
        if (coord.size() != 2 || !store.is_type(coord[0], types::NumberNode) || !store.is_type(coord[1], types::Node))
            continue;
        double value = store.number_value(coord[0]);
        std::string_view role = store.name(coord[1]);
        if (role == kRoleLeft) det.box.left = value, seen |= 1u;
        else if (role == kRoleTop) det.box.top = value, seen |= 2u;
        else if (role == kRoleRight) det.box.right = value, seen |= 4u;
        else if (role == kRoleBottom) det.box.bottom = value, seen |= 8u;
        else if (role == kRoleConfidence) det.confidence = value, seen |= 16u;
    }
    if (seen != 31u) return std::nullopt;
    return det;
}

DetectionSet decode_graph(const AtomStore& store) {
    DetectionSet set;
    for (AtomId node : store.atoms_of_type(types::ConceptNode)) {
        const std::string& name = store.name(node);
        if (!name.starts_with(kFramePrefix)) continue;
        set.frames.push_back(name.substr(kFramePrefix.size()));
        for (AtomId link : store.find_links(types::MemberLink, 1, node)) {
            if (auto det = decode_bb(store, store.outgoing(link)[0])) set.detections.push_back(std::move(*det));
        }
    }
    std::sort(set.frames.begin(), set.frames.end(),
              [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    std::sort(set.detections.begin(), set.detections.end(), [](const Detection& a, const Detection& b) {
        if (a.frame_id != b.frame_id) return natural_less(a.frame_id, b.frame_id);
        return a.ordinal < b.ordinal;
    });
    return set;
}

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            std::size_t iz = i;
            std::size_t jz = j;
            while (iz + 1 < ie && a[iz] == '0') ++iz;
            while (jz + 1 < je && b[jz] == '0') ++jz;
            std::string_view na = a.substr(iz, ie - iz);
            std::string_view nb = b.substr(jz, je - jz);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            // Equal value: fewer leading zeros first keeps the order total.
            if (ie - i != je - j) return ie - i < je - j;
            i = ie;
            j = je;
            continue;
        }
        if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
        ++i;
        ++j;
    }
    return a.size() - i < b.size() - j;
}

} // namespace siq
