#include "siq/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <limits>

namespace siq {

namespace {

std::string num(double v) { return AtomStore::canonical_number(v); }

std::string box_text(const BBox& b) {
    return "[" + num(b.left) + "," + num(b.top) + "," + num(b.right) + "," + num(b.bottom) + "]";
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr std::array<std::string_view, 6> kPalette{"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4"};

} // namespace

std::string format_text(const QueryResult& result) {
    std::string out;
    for (const FrameResult& f : result.frames) {
        out += "frame " + f.frame_id + "\n";
        for (const ResultGrounding& g : f.groundings) {
            out += " ";
            for (const GroundedBox& b : g.boxes) {
                out += " " + b.variable + "=" + b.bb + " " + b.detection.label + " conf=" +
                       num(b.detection.confidence) + " box=" + box_text(b.detection.box);
            }
            out += "\n";
        }
    }
    return out;
}

std::string format_json(const QueryResult& result) {
    using nlohmann::ordered_json;
    std::string out;
    for (const FrameResult& f : result.frames) {
        ordered_json frame;
        frame["frame"] = f.frame_id;
        frame["groundings"] = ordered_json::array();
        for (const ResultGrounding& g : f.groundings) {
            ordered_json vars = ordered_json::object();
            for (const GroundedBox& b : g.boxes) {
                const BBox& box = b.detection.box;
                vars[b.variable] = {{"bb", b.bb},
                                    {"label", b.detection.label},
                                    {"conf", b.detection.confidence},
                                    {"box", {box.left, box.top, box.right, box.bottom}}};
            }
            frame["groundings"].push_back({{"vars", std::move(vars)}});
        }
        out += frame.dump() + "\n";
    }
    return out;
}

std::string format_explain(const ExecutionLog& log) {
    std::string out;
    for (const ExecutionEntry& e : log) {
        out += "rule " + e.rule + ": ";
        if (e.cached)
            out += "cached\n";
        else
            out += std::to_string(e.groundings) + " groundings, " + std::to_string(e.atoms_added) + " atoms added\n";
    }
    if (log.empty()) out += "no rules executed\n";
    return out;
}

std::string render_svg(const FrameResult& frame) {
    std::vector<const GroundedBox*> boxes;
    for (const ResultGrounding& g : frame.groundings) {
        for (const GroundedBox& b : g.boxes) {
            bool seen = std::any_of(boxes.begin(), boxes.end(), [&](const GroundedBox* x) { return x->bb == b.bb; });
            if (!seen) boxes.push_back(&b);
        }
    }
    std::sort(boxes.begin(), boxes.end(), [](const GroundedBox* a, const GroundedBox* b) { return natural_less(a->bb, b->bb); });

    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    if (!boxes.empty()) {
        min_x = min_y = std::numeric_limits<double>::infinity();
        max_x = max_y = -std::numeric_limits<double>::infinity();
        for (const GroundedBox* b : boxes) {
            const BBox& r = b->detection.box;
            min_x = std::min(min_x, r.left);
            min_y = std::min(min_y, r.top);
            max_x = std::max(max_x, r.right);
            max_y = std::max(max_y, r.bottom);
        }
    }
    constexpr double margin = 10;
    const double x0 = min_x - margin;
    const double y0 = min_y - margin;
    const double w = max_x - min_x + 2 * margin;
    const double h = max_y - min_y + 2 * margin;

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(x0) + " " + num(y0) + " " + num(w) +
                      " " + num(h) + "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\">\n";
    out += "  <title>frame " + xml_escape(frame.frame_id) + "</title>\n";
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const GroundedBox& b = *boxes[i];
        const BBox& r = b.detection.box;
        std::string color(kPalette[i % kPalette.size()]);
        out += "  <rect x=\"" + num(r.left) + "\" y=\"" + num(r.top) + "\" width=\"" + num(r.width()) +
               "\" height=\"" + num(r.height()) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "  <text x=\"" + num(r.left + 2) + "\" y=\"" + num(r.top + 12) + "\" font-size=\"12\" fill=\"" + color +
               "\">" + xml_escape(b.detection.label + " " + b.bb + " " + num(b.detection.confidence)) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace siq
