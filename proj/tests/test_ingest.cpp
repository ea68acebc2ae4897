#include "siq/error.hpp"
#include "siq/ingest.hpp"

#include "support/scenes.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace siq;

namespace {

const char* kTwoBoxes =
    R"({"frame":"1","detections":[{"label":"person","conf":0.9,"box":[10,20,50,100]},{"label":"car","conf":0.8,"box":[60,20,200,120]}]})";

ErrorCode ingest_error(std::string_view text, std::optional<std::size_t>* line = nullptr) {
    try {
        parse_detections(text);
    } catch (const Error& e) {
        if (line) *line = e.line();
        return e.code();
    }
    ADD_FAILURE() << "no error for " << text;
    return ErrorCode::InvalidArgument;
}

// Independent schema check: walks the graph by find_node/find_link only.
bool schema_holds(const AtomStore& s, const Detection& d) {
    auto bb = s.find_node("ConceptNode", bb_node_name(d.frame_id, d.ordinal));
    auto frame = s.find_node("ConceptNode", "Frame#" + d.frame_id);
    auto label = s.find_node("ConceptNode", d.label);
    if (!bb || !frame || !label) return false;
    if (!s.find_link("MemberLink", std::vector<AtomId>{*bb, *frame})) return false;
    if (!s.find_link("InheritanceLink", std::vector<AtomId>{*bb, *label})) return false;
    std::pair<const char*, double> roles[] = {{"Left", d.box.left},
                                              {"Top", d.box.top},
                                              {"Right", d.box.right},
                                              {"Bottom", d.box.bottom},
                                              {"Confidence", d.confidence}};
    for (auto [role, value] : roles) {
        auto num = s.find_node("NumberNode", AtomStore::canonical_number(value));
        auto r = s.find_node("Node", role);
        if (!num || !r) return false;
        auto inh = s.find_link("InheritanceLink", std::vector<AtomId>{*num, *r});
        if (!inh || !s.find_link("MemberLink", std::vector<AtomId>{*inh, *bb})) return false;
    }
    return true;
}

} // namespace

TEST(Ingest, ParsesTwoDetections) {
    DetectionSet set = parse_detections(kTwoBoxes);
    ASSERT_EQ(set.detections.size(), 2u);
    EXPECT_EQ(set.frames, std::vector<std::string>{"1"});
    EXPECT_EQ(set.detections[0].label, "person");
    EXPECT_EQ(set.detections[0].ordinal, 1u);
    EXPECT_EQ(set.detections[1].ordinal, 2u);
    EXPECT_EQ(set.detections[1].box, (BBox{60, 20, 200, 120}));
    EXPECT_DOUBLE_EQ(set.detections[1].confidence, 0.8);
}

TEST(Ingest, IntegerFrameIdsAndUnknownKeys) {
    DetectionSet set = parse_detections(
        "{\"frame\": 7, \"source\": \"cam\", \"detections\": [{\"label\":\"dog\",\"conf\":1,\"box\":[0,0,1,1],\"id\":3}]}\n");
    ASSERT_EQ(set.detections.size(), 1u);
    EXPECT_EQ(set.detections[0].frame_id, "7");
}

TEST(Ingest, EmptyFrameStillCreatesFrameNode) {
    DetectionSet set = parse_detections("{\"frame\":\"9\",\"detections\":[]}\n");
    EXPECT_TRUE(set.detections.empty());
    AtomStore s;
    build_graph(set, s);
    EXPECT_TRUE(s.find_node("ConceptNode", "Frame#9"));
    EXPECT_EQ(decode_graph(s).frames, std::vector<std::string>{"9"});
}

TEST(Ingest, Errors) {
    std::optional<std::size_t> line;
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"a\",\"conf\":0.5,\"box\":[50,20,50,100]}]}"),
              ErrorCode::GeometryError);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"a\",\"conf\":0.5,\"box\":[0,20,50,10]}]}"),
              ErrorCode::GeometryError);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[]}\n{\"frame\":\"2\",\"detections\":[{\"label\":\"a\","
                           "\"conf\":1.5,\"box\":[0,0,1,1]}]}",
                           &line),
              ErrorCode::RangeError);
    EXPECT_EQ(line, 2u);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"a\",\"conf\":-0.1,\"box\":[0,0,1,1]}]}"),
              ErrorCode::RangeError);
    EXPECT_EQ(ingest_error("not json", &line), ErrorCode::FormatError);
    EXPECT_EQ(line, 1u);
    EXPECT_EQ(ingest_error("{\"detections\":[]}"), ErrorCode::FormatError);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"\",\"conf\":0.5,\"box\":[0,0,1,1]}]}"),
              ErrorCode::FormatError);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"a\",\"conf\":0.5,\"box\":[0,0,1]}]}"),
              ErrorCode::FormatError);
    EXPECT_EQ(ingest_error("{\"frame\":\"1\",\"detections\":[{\"label\":\"a\",\"conf\":\"high\",\"box\":[0,0,1,1]}]}"),
              ErrorCode::FormatError);
    try {
        read_detections("/nonexistent/detections.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(Ingest, BuildGraphNamesAndCounts) {
    AtomStore s;
    DetectionSet set = parse_detections(kTwoBoxes);
    std::size_t added = build_graph(set, s);
    EXPECT_TRUE(s.find_node("ConceptNode", "BB#1-1"));
    EXPECT_TRUE(s.find_node("ConceptNode", "BB#1-2"));
    EXPECT_TRUE(s.find_node("ConceptNode", "Frame#1"));

    std::size_t bb_nodes = 0;
    for (AtomId a : s.atoms_of_type("ConceptNode")) bb_nodes += s.name(a).starts_with("BB#");
    EXPECT_EQ(bb_nodes, 2u);
    EXPECT_EQ(added, s.size());

    // Per BB: 1 class link + 1 member link + 5 role MemberLinks + 5 InheritanceLinks.
    for (const Detection& d : set.detections) {
        AtomId bb = *s.find_node("ConceptNode", bb_node_name(d.frame_id, d.ordinal));
        std::size_t member = 0;
        std::size_t inherit = 0;
        std::size_t role_members = 0;
        std::set<AtomId> role_inherits;
        for (AtomId l : s.incoming(bb)) {
            if (s.is_type(l, "MemberLink")) ++member;
            if (s.is_type(l, "InheritanceLink")) ++inherit;
        }
        for (AtomId m : s.atoms_of_type("MemberLink")) {
            if (s.outgoing(m)[1] == bb && s.is_type(s.outgoing(m)[0], "InheritanceLink")) {
                ++role_members;
                role_inherits.insert(s.outgoing(m)[0]);
            }
        }
        EXPECT_EQ(member, 6u);
        EXPECT_EQ(inherit, 1u);
        EXPECT_EQ(role_members, 5u);
        EXPECT_EQ(role_inherits.size(), 5u);
    }
    EXPECT_EQ(build_graph(set, s), 0u);
}

TEST(Ingest, RandomScenesSchemaAndRoundTrip) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        DetectionSet set = fixtures::random_scene(seed, 30, 8, 10);
        AtomStore s;
        build_graph(set, s);
        for (const Detection& d : set.detections) ASSERT_TRUE(schema_holds(s, d));

        DetectionSet back = decode_graph(s);
        EXPECT_EQ(back.frames, set.frames);
        ASSERT_EQ(back.detections, set.detections);
        EXPECT_EQ(build_graph(set, s), 0u);
    }
}

TEST(Ingest, JsonlRoundTrip) {
    DetectionSet set = fixtures::random_scene(99, 12, 6, 10);
    DetectionSet back = parse_detections(fixtures::to_jsonl(set));
    EXPECT_EQ(back.frames, set.frames);
    EXPECT_EQ(back.detections, set.detections);
}

TEST(Ingest, MinConfidenceKeepsOrdinals) {
    DetectionSet set = parse_detections(kTwoBoxes);
    DetectionSet kept = filter_min_confidence(set, 0.85);
    ASSERT_EQ(kept.detections.size(), 1u);
    EXPECT_EQ(kept.detections[0].label, "person");
    kept = filter_min_confidence(set, 0.85 - 0.85 + 0.8);
    EXPECT_EQ(kept.detections.size(), 2u);
    kept = filter_min_confidence(set, 0.95);
    EXPECT_TRUE(kept.detections.empty());
    EXPECT_EQ(kept.frames, set.frames);

    DetectionSet only_car = filter_min_confidence(parse_detections(
        R"({"frame":"1","detections":[{"label":"person","conf":0.1,"box":[10,20,50,100]},{"label":"car","conf":0.8,"box":[60,20,200,120]}]})"), 0.5);
    ASSERT_EQ(only_car.detections.size(), 1u);
    EXPECT_EQ(only_car.detections[0].ordinal, 2u);
}

TEST(Ingest, NaturalOrder) {
    std::vector<std::string> ids{"10", "2", "1", "a10", "a9", "b", "002"};
    std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    EXPECT_EQ(ids, (std::vector<std::string>{"1", "2", "002", "10", "a9", "a10", "b"}));
}
