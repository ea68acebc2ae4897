#include "siq/engine.hpp"
#include "siq/error.hpp"

#include "support/scenes.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace siq;

namespace {

std::string data(const std::string& name) { return std::string(SIQ_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> frame_ids(const QueryResult& r) {
    std::vector<std::string> out;
    for (const FrameResult& f : r.frames) out.push_back(f.frame_id);
    return out;
}

} // namespace

TEST(Engine, PlantedScenes) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE person INSIDE car")), std::vector<std::string>{"1"});
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE person LEFT_OF car")), (std::vector<std::string>{"2", "10"}));
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE person WITH tie")), std::vector<std::string>{"3"});
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE person WITH backpack")), std::vector<std::string>{"4"});
    EXPECT_TRUE(e.query("FIND FRAMES WHERE dog INSIDE car").frames.empty());
}

TEST(Engine, GroundingsCarryDetections) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query("FIND FRAMES WHERE person:p INSIDE car");
    ASSERT_EQ(r.frames.size(), 1u);
    ASSERT_EQ(r.frames[0].groundings.size(), 1u);
    const auto& boxes = r.frames[0].groundings[0].boxes;
    ASSERT_EQ(boxes.size(), 2u);
    EXPECT_EQ(boxes[0].variable, "$p");
    EXPECT_EQ(boxes[0].bb, "BB#1-1");
    EXPECT_EQ(boxes[0].detection.label, "person");
    EXPECT_EQ(boxes[1].detection.box, (BBox{60, 20, 200, 120}));
    EXPECT_EQ(format_text(r),
              "frame 1\n  $p=BB#1-1 person conf=0.91 box=[80,40,150,110] $a=BB#1-2 car conf=0.88 box=[60,20,200,120]\n");
}

TEST(Engine, JsonAndTextAgree) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query("FIND FRAMES WHERE person WITH tie AND person LEFT_OF car");
    QueryResult all = e.query("FIND FRAMES WHERE person LEFT_OF car");
    for (const QueryResult* q : {&r, &all}) {
        std::istringstream lines(format_json(*q));
        std::string line;
        std::vector<std::string> frames;
        std::size_t groundings = 0;
        while (std::getline(lines, line)) {
            auto j = nlohmann::json::parse(line);
            frames.push_back(j.at("frame").get<std::string>());
            groundings += j.at("groundings").size();
            for (const auto& g : j.at("groundings"))
                for (const auto& [name, v] : g.at("vars").items()) {
                    EXPECT_TRUE(v.contains("bb") && v.contains("label") && v.contains("conf"));
                    EXPECT_EQ(v.at("box").size(), 4u);
                }
        }
        EXPECT_EQ(frames, frame_ids(*q));
        EXPECT_EQ(groundings, q->grounding_count());
    }
}

TEST(Engine, OutputIsDeterministic) {
    auto run = [] {
        Engine e;
        e.ingest_jsonl(fixtures::to_jsonl(fixtures::random_scene(21, 60, 8, 5)));
        QueryResult r = e.query("FIND FRAMES WHERE person:p WITH car AND person:p ABOVE tie");
        return format_text(r) + format_json(r) + format_explain(r.log);
    };
    EXPECT_EQ(run(), run());
}

TEST(Engine, FramesInNaturalOrder) {
    Engine e;
    std::string jsonl;
    for (int f : {10, 2, 1, 33, 4})
        jsonl += "{\"frame\":" + std::to_string(f) +
                 ",\"detections\":[{\"label\":\"a\",\"conf\":1,\"box\":[0,0,10,10]},{\"label\":\"b\",\"conf\":1,\"box\":[20,0,30,10]}]}\n";
    e.ingest_jsonl(jsonl);
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE a LEFT_OF b")), (std::vector<std::string>{"1", "2", "4", "10", "33"}));
}

TEST(Engine, ExplainAndCache) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult first = e.query("FIND FRAMES WHERE person INSIDE car");
    ASSERT_EQ(first.log.size(), 1u);
    EXPECT_FALSE(first.log[0].cached);
    QueryResult again = e.query("FIND FRAMES WHERE car CONTAINS person AND person INSIDE car");
    std::set<std::string> cached;
    for (const auto& entry : again.log)
        if (entry.cached) cached.insert(entry.rule);
    EXPECT_EQ(cached, std::set<std::string>{"inside"});
    EXPECT_EQ(format_explain(first.log), "rule inside: 1 groundings, 2 atoms added\n");

    // New data invalidates the cache.
    e.ingest_jsonl(R"({"frame":"11","detections":[{"label":"person","conf":1,"box":[1,1,2,2]},{"label":"car","conf":1,"box":[0,0,5,5]}]})");
    QueryResult fresh = e.query("FIND FRAMES WHERE person INSIDE car");
    EXPECT_FALSE(fresh.log.at(0).cached);
    EXPECT_EQ(frame_ids(fresh), (std::vector<std::string>{"1", "11"}));
}

TEST(Engine, ParamsRebuildDerivedFacts) {
    Engine e;
    e.ingest_file(data("tabletop.jsonl"));
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE vase ON \"dining table\"")), std::vector<std::string>{"tabletop"});
    e.set_params(RelParams{0.05, 0.5, 0});
    EXPECT_TRUE(e.query("FIND FRAMES WHERE vase ON \"dining table\"").frames.empty());
    e.set_params(RelParams{0.5, 0.5, 0});
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE vase ON \"dining table\"")), (std::vector<std::string>{"shelf", "tabletop"}));
    EXPECT_THROW(e.set_params(RelParams{0.1, 2.0, 0}), Error);
}

TEST(Engine, MinConfidenceFilter) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"), 0.75);
    // The tie in frame 3 has confidence 0.7.
    EXPECT_TRUE(e.query("FIND FRAMES WHERE person WITH tie").frames.empty());
    EXPECT_EQ(frame_ids(e.query("FIND FRAMES WHERE person INSIDE car")), std::vector<std::string>{"1"});
}

TEST(Engine, DumpLoadDumpIsIdentical) {
    Engine a;
    a.ingest_file(data("planted_scenes.jsonl"));
    a.query("FIND FRAMES WHERE person WITH tie");
    std::string first = a.dump();
    Engine b;
    b.load_atomese(first);
    EXPECT_EQ(b.dump(), first);
    EXPECT_EQ(b.detections().detections, a.detections().detections);
    EXPECT_EQ(frame_ids(b.query("FIND FRAMES WHERE person INSIDE car")), std::vector<std::string>{"1"});
}

TEST(Engine, AtomeseQueryMirrorsRightToListing) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query_atomese(slurp(data("right_to.ats")));
    QueryResult rule = e.query("FIND FRAMES WHERE car RIGHT_OF person");
    // car 2 is right of person 2 (60 > 50)
    bool found = false;
    for (const auto& f : r.frames)
        for (const auto& g : f.groundings) {
            ASSERT_EQ(g.boxes.size(), 2u);
            EXPECT_GT(g.boxes[0].detection.box.left, g.boxes[1].detection.box.right);
            found |= g.boxes[0].bb == "BB#2-2" && g.boxes[1].bb == "BB#2-1";
        }
    EXPECT_TRUE(found);
    EXPECT_FALSE(rule.frames.empty());
}

TEST(Engine, AtomeseBindLinkQuery) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query_atomese(slurp(data("right_to_rule.ats")));
    ASSERT_FALSE(r.log.empty());
    EXPECT_EQ(r.log.back().rule, "query");
    EXPECT_GT(r.log.back().atoms_added, 0u);
    auto pred = e.store().find_node("PredicateNode", "RightTo");
    ASSERT_TRUE(pred);
}

TEST(Engine, AtomeseQueryUsesBuiltinRules) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query_atomese("EvaluationLink\n  PredicateNode \"Inside\"\n  ListLink\n    VariableNode \"$X\"\n"
                                    "    VariableNode \"$Y\"\n");
    ASSERT_EQ(r.log.size(), 1u);
    EXPECT_EQ(r.log[0].rule, "inside");
    // Every box lies inside itself, plus the person in the car and the tie on the person.
    EXPECT_EQ(r.grounding_count(), e.detections().detections.size() + 2);
}

TEST(Engine, CheckAgreesOnFixture) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    for (const char* q : {"FIND FRAMES WHERE person INSIDE car", "FIND FRAMES WHERE person:p WITH tie AND person:p ABOVE car",
                          "FIND FRAMES WHERE person INSIDE person", "FIND FRAMES WHERE car CONTAINS person"}) {
        CheckReport c = e.check(q);
        EXPECT_TRUE(c.agree) << c.text;
        EXPECT_TRUE(c.text.ends_with("agree\n"));
    }
}

TEST(Engine, Errors) {
    Engine e;
    EXPECT_THROW(e.query("FIND FRAMES WHERE"), Error);
    EXPECT_THROW(e.ingest_file(data("missing.jsonl")), Error);
    try {
        e.query_atomese("");
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::EmptyQuery);
    }
    EXPECT_TRUE(e.query("FIND FRAMES WHERE person INSIDE car").frames.empty());
}

TEST(Engine, SvgViewportIsExtentPlusMargin) {
    Engine e;
    e.ingest_file(data("planted_scenes.jsonl"));
    QueryResult r = e.query("FIND FRAMES WHERE person INSIDE car");
    std::string svg = render_svg(r.frames.at(0));
    EXPECT_NE(svg.find("viewBox=\"50 10 160 120\""), std::string::npos) << svg;
    EXPECT_NE(svg.find("<rect x=\"80\" y=\"40\" width=\"70\" height=\"70\""), std::string::npos) << svg;
    EXPECT_NE(svg.find(">person BB#1-1"), std::string::npos);
}
