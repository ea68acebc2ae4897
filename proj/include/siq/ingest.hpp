#ifndef SIQ_INGEST_HPP
#define SIQ_INGEST_HPP

#include "siq/atom_store.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace siq {

/// Axis-aligned pixel rectangle; x grows rightward and y downward.
struct BBox {
    double left = 0;
    double top = 0;
    double right = 0;
    double bottom = 0;

    double width() const { return right - left; }
    double height() const { return bottom - top; }
    bool operator==(const BBox&) const = default;
};

struct Detection {
    std::string frame_id;
    /// 1-based position of this detection among those of its frame.
    std::size_t ordinal = 0;
    std::string label;
    double confidence = 0;
    BBox box;

    bool operator==(const Detection&) const = default;
};

/// Contents of a detection file. `frames` lists every frame id in order of
/// first appearance, including frames without detections.
struct DetectionSet {
    std::vector<std::string> frames;
    std::vector<Detection> detections;
};

/// Graph node names used by the scene schema.
std::string bb_node_name(std::string_view frame_id, std::size_t ordinal);
std::string frame_node_name(std::string_view frame_id);

/// Coordinate/confidence roles attached to every bounding-box node.
inline constexpr std::string_view kRoleLeft = "Left";
inline constexpr std::string_view kRoleTop = "Top";
inline constexpr std::string_view kRoleRight = "Right";
inline constexpr std::string_view kRoleBottom = "Bottom";
inline constexpr std::string_view kRoleConfidence = "Confidence";

/// Parses JSON Lines detector output, one frame per line:
///   {"frame": <string|int>, "detections": [{"label", "conf", "box": [l,t,r,b]}, ...]}
/// Ordinals restart at 1 for each frame and continue if a frame id repeats.
/// Throws FormatError, GeometryError or RangeError with the 1-based line.
DetectionSet parse_detections(std::string_view jsonl);
DetectionSet read_detections(const std::filesystem::path& path);

/// Drops detections with confidence below `min_confidence`. Surviving
/// detections keep their original ordinals; frames are kept.
DetectionSet filter_min_confidence(DetectionSet set, double min_confidence);

/// Encodes detections into the store:
///   MemberLink(BB, Frame)
///   InheritanceLink(BB, ConceptNode <label>)
///   MemberLink(InheritanceLink(NumberNode <v>, Node <role>), BB)   per role
/// Returns the number of atoms added; re-running with the same input adds 0.
std::size_t build_graph(const DetectionSet& set, AtomStore& store);
std::size_t build_graph(std::span<const Detection> detections, AtomStore& store);

/// Reads one bounding box back from the graph. Returns nullopt when `bb` is
/// not a complete scene-schema box.
std::optional<Detection> decode_bb(const AtomStore& store, AtomId bb);

/// Reconstructs every frame and detection in the store, frames in
/// natural order and detections by (frame, ordinal).
DetectionSet decode_graph(const AtomStore& store);

/// Numeric-aware string ordering: digit runs compare by value ("2" < "10").
bool natural_less(std::string_view a, std::string_view b);

} // namespace siq

#endif // SIQ_INGEST_HPP
