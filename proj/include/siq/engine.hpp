#ifndef SIQ_ENGINE_HPP
#define SIQ_ENGINE_HPP

#include "siq/atom_store.hpp"
#include "siq/chainer.hpp"
#include "siq/ingest.hpp"
#include "siq/matcher.hpp"
#include "siq/oracle.hpp"
#include "siq/query.hpp"
#include "siq/rules.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace siq {

/// A grounded variable that refers to a bounding box.
struct GroundedBox {
    std::string variable;
    std::string bb;
    Detection detection;
};

struct ResultGrounding {
    std::vector<GroundedBox> boxes;
};

struct FrameResult {
    std::string frame_id;
    std::vector<ResultGrounding> groundings;
};

struct QueryResult {
    /// Frames in natural order; groundings ordered by their BB names.
    std::vector<FrameResult> frames;
    ExecutionLog log;

    std::size_t grounding_count() const;
};

struct CheckReport {
    bool agree = false;
    std::vector<oracle::Assignment> engine;
    std::vector<oracle::Assignment> oracle;
    /// Human-readable summary, including every disagreeing assignment.
    std::string text;
};

/// One retrieval session: a store, the built-in rules for the current
/// parameters and a cache of rules already applied to it.
///
/// Not thread-safe; callers serialize access (the C API does).
class Engine {
public:
    Engine();

    const RelParams& params() const { return params_; }
    /// Changing parameters rebuilds the store from the recorded inputs, so
    /// facts derived under the old thresholds disappear.
    void set_params(const RelParams& params);

    /// Adds detections to the store; returns the number of atoms added.
    std::size_t ingest(const DetectionSet& set);
    std::size_t ingest_file(const std::filesystem::path& path, std::optional<double> min_confidence = std::nullopt);
    std::size_t ingest_jsonl(std::string_view text, std::optional<double> min_confidence = std::nullopt);

    /// Loads an Atomese document (e.g. a dump); returns the root ids.
    std::vector<AtomId> load_atomese(std::string_view text);
    std::string dump() const;

    QueryResult query(std::string_view surface_query);
    QueryResult query(const QueryAST& ast);
    /// Runs an Atomese query. The last root is the goal: an AndLink, a
    /// single clause, or a BindLink whose pattern is the goal. Other BindLink
    /// roots become additional rules for this query.
    QueryResult query_atomese(std::string_view text);

    /// Runs the engine and the brute-force oracle on the same query and
    /// compares the resulting assignments exactly.
    CheckReport check(const QueryAST& ast);
    CheckReport check(std::string_view surface_query) { return check(parse_query(surface_query)); }

    const AtomStore& store() const { return store_; }
    AtomStore& store() { return store_; }
    const std::vector<BindRule>& rules();
    const Evaluators& evaluators() const { return evaluators_; }

    /// Frames and detections currently encoded in the store.
    DetectionSet detections() const { return decode_graph(store_); }

private:
    using Input = std::variant<DetectionSet, std::string>;

    void replay();
    QueryResult collect(const std::vector<Grounding>& groundings, const std::vector<std::string>& box_order,
                        ExecutionLog log) const;

    RelParams params_;
    AtomStore store_;
    Evaluators evaluators_;
    std::optional<std::vector<BindRule>> rules_;
    ChainCache cache_;
    std::vector<Input> inputs_;
};

/// Plain-text listing of a result, deterministic for identical input.
std::string format_text(const QueryResult& result);
/// One JSON object per frame and line:
///   {"frame": ..., "groundings": [{"vars": {name: {"bb", "label", "conf", "box"}}}]}
std::string format_json(const QueryResult& result);
std::string format_explain(const ExecutionLog& log);
/// SVG overlay of the boxes grounded in one frame; the viewport is their
/// bounding extent plus a 10 px margin.
std::string render_svg(const FrameResult& frame);

} // namespace siq

#endif // SIQ_ENGINE_HPP
