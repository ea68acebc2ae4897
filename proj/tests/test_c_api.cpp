#include "siq/siq.h"

#include <gtest/gtest.h>

#include <cstring>
#include <string>

namespace {

std::string data(const std::string& name) { return std::string(SIQ_TEST_DATA_DIR) + "/" + name; }

std::string take(char* s) {
    std::string out(s);
    siq_string_free(s);
    return out;
}

class CApi : public ::testing::Test {
protected:
    void SetUp() override { ASSERT_EQ(siq_engine_new(&engine), SIQ_OK); }
    void TearDown() override { siq_engine_free(engine); }
    siq_engine* engine = nullptr;
};

} // namespace

TEST_F(CApi, QueryLifecycle) {
    size_t added = 0;
    ASSERT_EQ(siq_engine_ingest_file(engine, data("planted_scenes.jsonl").c_str(), -1, &added), SIQ_OK);
    EXPECT_EQ(added, siq_engine_atom_count(engine));
    EXPECT_EQ(siq_engine_frame_count(engine), 8u);
    EXPECT_EQ(siq_engine_detection_count(engine), 18u);

    siq_result* r = nullptr;
    ASSERT_EQ(siq_engine_query(engine, "FIND FRAMES WHERE person LEFT_OF car", &r), SIQ_OK);
    ASSERT_EQ(siq_result_frame_count(r), 2u);
    EXPECT_STREQ(siq_result_frame_id(r, 0), "2");
    EXPECT_STREQ(siq_result_frame_id(r, 1), "10");
    EXPECT_EQ(siq_result_frame_id(r, 2), nullptr);
    EXPECT_EQ(siq_result_grounding_count(r, 0), 1u);

    char* s = nullptr;
    ASSERT_EQ(siq_result_text(r, &s), SIQ_OK);
    EXPECT_EQ(take(s).rfind("frame 2\n", 0), 0u);
    ASSERT_EQ(siq_result_json(r, &s), SIQ_OK);
    EXPECT_EQ(take(s).rfind("{\"frame\":\"2\"", 0), 0u);
    ASSERT_EQ(siq_result_explain(r, &s), SIQ_OK);
    EXPECT_EQ(take(s), "rule left-of: 2 groundings, 4 atoms added\n");
    ASSERT_EQ(siq_result_svg(r, 1, &s), SIQ_OK);
    EXPECT_EQ(take(s).rfind("<svg", 0), 0u);
    EXPECT_EQ(siq_result_svg(r, 5, &s), SIQ_ERR_INVALID_ARGUMENT);
    siq_result_free(r);
}

TEST_F(CApi, ErrorsCarryMessages) {
    siq_result* r = nullptr;
    EXPECT_EQ(siq_engine_query(engine, "FIND FRAMES WHERE person NEAR car", &r), SIQ_ERR_UNKNOWN_RELATION);
    EXPECT_EQ(r, nullptr);
    EXPECT_NE(std::strstr(siq_last_error(engine), "NEAR"), nullptr);
    EXPECT_STREQ(siq_status_name(SIQ_ERR_UNKNOWN_RELATION), "UnknownRelation");

    EXPECT_EQ(siq_engine_ingest_file(engine, "/no/such/file.jsonl", -1, nullptr), SIQ_ERR_IO);
    EXPECT_EQ(siq_engine_ingest_jsonl(engine, "{\"frame\":1,\"detections\":[{\"label\":\"a\",\"conf\":2,\"box\":[0,0,1,1]}]}",
                                      -1, nullptr),
              SIQ_ERR_RANGE);
    EXPECT_EQ(siq_engine_load_atomese(engine, "ListLink\n\tConceptNode \"a\"\n", nullptr), SIQ_ERR_INDENT);
    EXPECT_EQ(siq_engine_query(engine, nullptr, &r), SIQ_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(siq_engine_query_atomese(engine, "AndLink\n", &r), SIQ_ERR_EMPTY_LINK);

    siq_params bad = siq_default_params();
    bad.on_overlap_min = 0;
    EXPECT_EQ(siq_engine_set_params(engine, &bad), SIQ_ERR_INVALID_ARGUMENT);

    ASSERT_EQ(siq_engine_ingest_jsonl(engine, "{\"frame\":1,\"detections\":[]}", -1, nullptr), SIQ_OK);
    EXPECT_STREQ(siq_last_error(engine), "");
}

TEST_F(CApi, ParamsRoundTrip) {
    siq_params p = siq_default_params();
    EXPECT_DOUBLE_EQ(p.on_tau, 0.15);
    EXPECT_DOUBLE_EQ(p.on_overlap_min, 0.5);
    EXPECT_DOUBLE_EQ(p.inside_slack, 0.0);
    p.inside_slack = 3;
    ASSERT_EQ(siq_engine_set_params(engine, &p), SIQ_OK);
    siq_params back{};
    ASSERT_EQ(siq_engine_get_params(engine, &back), SIQ_OK);
    EXPECT_DOUBLE_EQ(back.inside_slack, 3);
}

TEST_F(CApi, DumpLoadAndCheck) {
    ASSERT_EQ(siq_engine_ingest_file(engine, data("tabletop.jsonl").c_str(), 0.5, nullptr), SIQ_OK);
    char* dump = nullptr;
    ASSERT_EQ(siq_engine_dump_atomese(engine, &dump), SIQ_OK);
    std::string first = take(dump);

    siq_engine* other = nullptr;
    ASSERT_EQ(siq_engine_new(&other), SIQ_OK);
    size_t roots = 0;
    ASSERT_EQ(siq_engine_load_atomese(other, first.c_str(), &roots), SIQ_OK);
    EXPECT_GT(roots, 0u);
    ASSERT_EQ(siq_engine_dump_atomese(other, &dump), SIQ_OK);
    EXPECT_EQ(take(dump), first);

    int agree = 0;
    char* report = nullptr;
    ASSERT_EQ(siq_engine_check(other, "FIND FRAMES WHERE vase INSIDE flowers", &agree, &report), SIQ_OK);
    EXPECT_EQ(agree, 1);
    EXPECT_NE(take(report).find("agree"), std::string::npos);
    siq_engine_free(other);
}

TEST(CApiNull, NullHandlesAreRejected) {
    EXPECT_EQ(siq_engine_new(nullptr), SIQ_ERR_INVALID_ARGUMENT);
    EXPECT_STREQ(siq_last_error(nullptr), "");
    EXPECT_EQ(siq_engine_atom_count(nullptr), 0u);
    EXPECT_EQ(siq_result_frame_count(nullptr), 0u);
    siq_engine_free(nullptr);
    siq_result_free(nullptr);
    siq_string_free(nullptr);
}
