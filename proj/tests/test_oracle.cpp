#include "siq/error.hpp"
#include "siq/oracle.hpp"

#include <gtest/gtest.h>

using namespace siq;

namespace {

const char* kScene = R"({"frame":"1","detections":[{"label":"person","conf":0.9,"box":[80,40,150,110]},{"label":"car","conf":0.8,"box":[60,20,200,120]}]}
{"frame":"2","detections":[{"label":"person","conf":0.9,"box":[10,20,50,100]},{"label":"person","conf":0.9,"box":[20,30,40,60]},{"label":"car","conf":0.8,"box":[60,20,200,120]}]}
{"frame":"3","detections":[{"label":"car","conf":0.8,"box":[60,20,200,120]}]}
)";

std::vector<oracle::Assignment> run(std::string_view q) {
    DetectionSet set = parse_detections(kScene);
    return oracle::retrieve(parse_query(q), set.detections);
}

} // namespace

TEST(Oracle, SingleClause) {
    auto got = run("FIND FRAMES WHERE person INSIDE car");
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], (oracle::Assignment{"1", {"BB#1-1", "BB#1-2"}}));
}

TEST(Oracle, SlotsAreDistinctWithinAClause) {
    auto got = run("FIND FRAMES WHERE person INSIDE person");
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], (oracle::Assignment{"2", {"BB#2-2", "BB#2-1"}}));
}

TEST(Oracle, AliasesShareADetection) {
    auto got = run("FIND FRAMES WHERE person:p LEFT_OF car AND person:p CONTAINS person");
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0], (oracle::Assignment{"2", {"BB#2-1", "BB#2-3", "BB#2-2"}}));

    // Unaliased occurrences are independent slots.
    EXPECT_EQ(run("FIND FRAMES WHERE person LEFT_OF car AND person LEFT_OF car").size(), 4u);
}

TEST(Oracle, Errors) {
    DetectionSet set = parse_detections(kScene);
    try {
        oracle::retrieve(QueryAST{}, set.detections);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyQuery);
    }
    try {
        oracle::retrieve(parse_query("FIND FRAMES WHERE a:x ON b AND c:x ON b"), set.detections);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AliasClassMismatch);
    }
}
