#include "support.hpp"

#include <gtest/gtest.h>

using namespace mixfair;

namespace {

Scalar q(long a, long b = 1) { return make_scalar(a, static_cast<unsigned long>(b)); }

std::string where_of(const std::string& text)
{
    try {
        load_instance(text);
    } catch (const InstanceError& e) {
        return e.where();
    }
    return "<loaded>";
}

const char* kTwoCakes = R"({"agents": ["a", "b"],
  "goods": [{"id": "g", "utilities": {"a": "1/2", "b": 1}}],
  "cakes": [
    {"per_agent": {"a": [{"start": 0, "end": 1, "left": 1, "right": 1}],
                   "b": [{"start": 0, "end": "1/2", "left": 2, "right": 2}, {"start": "1/2", "end": 1, "left": 0, "right": 0}]}},
    {"per_agent": {"a": [{"start": 0, "end": 1, "left": 0, "right": 2}],
                   "b": [{"start": 0, "end": 1, "left": 3, "right": 3}]}}],
  "normalize": false})";

} // namespace

TEST(JsonIo, SeveralCakesLaidEndToEndKeepTheirValues)
{
    const auto inst = load_instance(kTwoCakes);
    EXPECT_EQ(inst.cake_offsets(), (std::vector<Scalar>{q(0), q(1, 2), q(1)}));
    RwOracle rw(inst);
    EXPECT_EQ(rw.eval(0, q(0), q(1, 2)), q(1));
    EXPECT_EQ(rw.eval(0, q(1, 2), q(1)), q(1));
    EXPECT_EQ(rw.eval(1, q(0), q(1, 4)), q(1));
    EXPECT_EQ(rw.eval(1, q(1, 2), q(1)), q(3));
    EXPECT_EQ(inst.utility(0, 0), q(1, 2));
}

TEST(JsonIo, NormalizeDefaultsOnAndCanBeOverridden)
{
    std::string text = kTwoCakes;
    text.replace(text.find("\"normalize\": false"), 18, "\"unused\": 0");
    const auto on = load_instance(text);
    EXPECT_EQ(on.utility(0, 0), q(1, 5));
    EXPECT_EQ(load_instance(text, {.normalize = false}).utility(0, 0), q(1, 2));
    EXPECT_EQ(load_instance(kTwoCakes, {.normalize = true}).utility(0, 0), q(1, 5));
}

TEST(JsonIo, ErrorsNameTheOffendingField)
{
    EXPECT_EQ(where_of(R"({"agents": []})"), "/agents");
    EXPECT_EQ(where_of(R"({"agents": ["a", "a"]})"), "/agents/1");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "goods": [{"id": "g", "utilities": {"a": -1}}]})"),
              "/goods/0/utilities/a");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "goods": [{"id": "g", "utilities": {"a": 0.5}}]})"),
              "/goods/0/utilities/a");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "goods": [{"id": "g", "utilities": {"a": 1, "z": 1}}]})"),
              "/goods/0/utilities/z");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "goods": [{"id": "g", "utilities": {}}]})"), "/goods/0/utilities");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "cakes": [{"per_agent": {"a": [
        {"start": 0, "end": "1/2", "left": 1, "right": 1}, {"start": "2/3", "end": 1, "left": 1, "right": 1}]}}]})"),
              "/cakes/0/per_agent/a/1/start");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "cakes": [{"per_agent": {"a": [
        {"start": 0, "end": "1/2", "left": 1, "right": 1}]}}]})"),
              "/cakes/0/per_agent/a");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "cakes": [{"per_agent": {"a": [
        {"start": 0, "end": 1, "left": 1, "right": "x"}]}}]})"),
              "/cakes/0/per_agent/a/0/right");
    EXPECT_EQ(where_of(R"({"agents": ["a"], "goods": [{"id": "g", "utilities": {"a": 0}}], "normalize": true})"),
              "/agents/0");
}

TEST(JsonIo, SyntaxErrorsReportLineAndColumn)
{
    EXPECT_EQ(where_of("{\n  \"agents\": [\"a\",]\n}"), "line 2, column 18");
    // The position is the last character of the offending token.
    EXPECT_EQ(where_of("{\"agents\": [\"a\"] \"goods\": []}"), "line 1, column 24");
}

TEST(JsonIo, InstanceRoundTrip)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = ref::generated(3, 4, DensityKind::Mixed, seed);
        const auto back = load_instance(instance_to_json(inst).dump());
        EXPECT_EQ(back.agent_names(), inst.agent_names());
        EXPECT_EQ(back.good_names(), inst.good_names());
        for (AgentIndex i = 0; i < 3; ++i) {
            EXPECT_EQ(back.valuation(i).good_utilities(), inst.valuation(i).good_utilities());
            for (long t = 0; t <= 10; ++t)
                EXPECT_EQ(back.valuation(i).cumulative(q(t, 10)), inst.valuation(i).cumulative(q(t, 10)));
        }
    }
}

TEST(JsonIo, AllocationRoundTrip)
{
    const auto inst = ref::generated(3, 5, DensityKind::Constant, 8);
    const auto a = solve_efm(inst).allocation;
    const auto doc = allocation_to_json(inst, a);
    EXPECT_EQ(load_allocation(inst, doc.dump()), a);
    for (AgentIndex i = 0; i < 3; ++i)
        EXPECT_EQ(doc["allocation"][i]["utility"].get<std::string>(), to_string(ref::bundle_value(inst, i, a[i])));
}

TEST(JsonIo, AllocationErrors)
{
    const auto inst = ref::generated(2, 2, DensityKind::Constant, 8);
    auto where = [&](const std::string& text) {
        try {
            load_allocation(inst, text);
        } catch (const InstanceError& e) {
            return e.where();
        }
        return std::string("<loaded>");
    };
    EXPECT_EQ(where(R"({"allocation": [{"agent": "zz"}]})"), "/allocation/0/agent");
    EXPECT_EQ(where(R"({"allocation": [{"agent": "a1", "goods": ["g9"]}]})"), "/allocation/0/goods/0");
    EXPECT_EQ(where(R"({"allocation": [{"agent": "a1", "cake": [["1/2", "1/4"]]}]})"), "/allocation/0/cake/0");
    EXPECT_EQ(where(R"({"allocation": [{"agent": "a1", "goods": ["g1"]}, {"agent": "a2", "goods": ["g1"]}]})"),
              "/allocation");
    // Partial allocations load; completeness is the caller's business.
    EXPECT_EQ(where(R"({"allocation": [{"agent": "a1", "goods": ["g1"], "extra": 1}]})"), "<loaded>");
}

TEST(JsonIo, DecimalFieldsAreDisplayOnly)
{
    const auto inst = ref::generated(2, 1, DensityKind::Constant, 2);
    const auto a = solve_efm(inst).allocation;
    const auto doc = allocation_to_json(inst, a, {.decimal = true});
    EXPECT_TRUE(doc["allocation"][0].contains("utility_decimal"));
    EXPECT_EQ(load_allocation(inst, doc.dump()), a);
}
