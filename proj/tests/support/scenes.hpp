#ifndef SIQ_TESTS_SCENES_HPP
#define SIQ_TESTS_SCENES_HPP

#include "siq/ingest.hpp"
#include "siq/query.hpp"

#include <random>
#include <string>
#include <vector>

namespace siq::fixtures {

inline const std::vector<std::string>& class_names() {
    static const std::vector<std::string> names{"person", "car",   "tie",      "backpack", "dog",
                                                "vase",   "chair", "dining table", "cup",  "traffic light"};
    return names;
}

// Coordinates on a coarse grid so touching edges and identical boxes occur often.
inline BBox random_box(std::mt19937_64& rng, int grid = 20, int step = 10) {
    std::uniform_int_distribution<int> cell(0, grid);
    int l = cell(rng);
    int r = cell(rng);
    while (r == l) r = cell(rng);
    int t = cell(rng);
    int b = cell(rng);
    while (b == t) b = cell(rng);
    if (l > r) std::swap(l, r);
    if (t > b) std::swap(t, b);
    return BBox{double(l * step), double(t * step), double(r * step), double(b * step)};
}

inline DetectionSet random_scene(std::uint64_t seed, int frames, int max_per_frame, int classes) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(0, max_per_frame);
    std::uniform_int_distribution<int> cls(0, classes - 1);
    std::uniform_int_distribution<int> conf(1, 100);
    DetectionSet set;
    for (int f = 1; f <= frames; ++f) {
        std::string id = std::to_string(f);
        set.frames.push_back(id);
        int n = count(rng);
        for (int k = 1; k <= n; ++k) {
            set.detections.push_back(
                Detection{id, std::size_t(k), class_names()[cls(rng)], conf(rng) / 100.0, random_box(rng)});
        }
    }
    return set;
}

inline RelKind random_relation(std::mt19937_64& rng) {
    return kAllRelations[std::uniform_int_distribution<std::size_t>(0, kAllRelations.size() - 1)(rng)];
}

inline std::string random_class(std::mt19937_64& rng, int classes) {
    return class_names()[std::uniform_int_distribution<int>(0, classes - 1)(rng)];
}

// `x REL1 y AND x REL2 z`, with the shared alias on a random side of each clause.
inline QueryAST random_conjunction(std::mt19937_64& rng, int classes) {
    ClassRef shared{random_class(rng, classes), "x"};
    ClassRef other1{random_class(rng, classes), std::nullopt};
    ClassRef other2{random_class(rng, classes), std::nullopt};
    std::bernoulli_distribution flip(0.5);
    QueryAST ast;
    QueryClause c1{shared, random_relation(rng), other1};
    QueryClause c2{shared, random_relation(rng), other2};
    if (flip(rng)) std::swap(c1.left, c1.right);
    if (flip(rng)) std::swap(c2.left, c2.right);
    ast.clauses = {c1, c2};
    return ast;
}

inline QueryAST single_clause(const std::string& a, RelKind rel, const std::string& b) {
    return QueryAST{{QueryClause{{a, std::nullopt}, rel, {b, std::nullopt}}}};
}

inline std::string to_jsonl(const DetectionSet& set) {
    std::string out;
    std::size_t i = 0;
    for (const std::string& frame : set.frames) {
        out += "{\"frame\":\"" + frame + "\",\"detections\":[";
        bool first = true;
        for (; i < set.detections.size() && set.detections[i].frame_id == frame; ++i) {
            const Detection& d = set.detections[i];
            if (!first) out += ",";
            first = false;
            out += "{\"label\":\"" + d.label + "\",\"conf\":" + std::to_string(d.confidence) + ",\"box\":[" +
                   std::to_string(d.box.left) + "," + std::to_string(d.box.top) + "," + std::to_string(d.box.right) +
                   "," + std::to_string(d.box.bottom) + "]}";
        }
        out += "]}\n";
    }
    return out;
}

} // namespace siq::fixtures

#endif // SIQ_TESTS_SCENES_HPP
