#include <gtest/gtest.h>

#include <cstdlib>

#include "pgc/harness/analyze.hpp"
#include "pgc/harness/generators.hpp"

using namespace pgc;
using namespace pgc::harness;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "algebra_N": {"blocks": [2]},
  "algebra_M": {"blocks": [2]},
  "embedding": {"form": "equal"},
  "trace": {"mode": "markov"},
  "channel": {"kind": "generator", "name": "identity"}
})";

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::EmptyAlgebra;
}

}  // namespace

TEST(Instance, MinimalEqualInclusion) {
    auto s = parse_instance_text(kMinimal);
    auto b = build(s);
    EXPECT_NEAR(b.tower->mu(), 1.0, 1e-12);
    ASSERT_TRUE(b.channel.has_value());
}

TEST(Instance, RoundTrip) {
    for (const auto& s : {ad_unitary(3), shift_mixture(3, 0.25), random_cpb(2, 5), parse_instance_text(kMinimal)}) {
        auto again = parse_instance_text(serialize(s));
        EXPECT_EQ(serialize(again), serialize(s));
        EXPECT_EQ(digest(again), digest(s));
    }
}

TEST(Instance, MissingTraceIsReportedAtTrace) {
    json j = json::parse(kMinimal);
    j.erase("trace");
    try {
        parse_instance(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
        EXPECT_NE(std::string(e.what()).find("trace"), std::string::npos);
    }
}

TEST(Instance, SchemaErrorsCarryPaths) {
    json j = json::parse(kMinimal);
    j["algebra_M"]["blocks"] = {2, -1};
    j["channel"] = {{"kind", "kraus"}, {"operators", {{{1, 0}, {0}}}}};
    try {
        parse_instance(j);
        FAIL();
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("algebra_M.blocks[1]"), std::string::npos) << msg;
        EXPECT_NE(msg.find("channel.operators[0]"), std::string::npos) << msg;
    }
}

TEST(Instance, UnknownGenerator) {
    json j = json::parse(kMinimal);
    j["channel"]["name"] = "teleport";
    EXPECT_EQ(kind_of([&] { parse_instance(j); }), ErrorKind::UnknownGenerator);
}

TEST(Instance, ComplexNumbers) {
    EXPECT_EQ(decode_complex(json::parse("[1.5, -2]"), "x"), cplx(1.5, -2));
    EXPECT_EQ(decode_complex(json::parse("3"), "x"), cplx(3, 0));
    EXPECT_EQ(kind_of([] { decode_complex(json::parse("[1, 2, 3]"), "x"); }), ErrorKind::SchemaError);
    Mat m = decode_matrix(json::parse("[[[0,1],2],[3,[4,-1]]]"), "m");
    EXPECT_EQ(m(0, 0), cplx(0, 1));
    EXPECT_EQ(m(1, 1), cplx(4, -1));
}

TEST(Instance, ImagesEmbedding) {
    // C^2 into M_2 as the diagonal, given by images of the two units
    json j = json::parse(kMinimal);
    j["algebra_N"]["blocks"] = {1, 1};
    j["algebra_M"]["blocks"] = {2};
    j["embedding"] = {{"form", "images"},
                      {"images", {{{{1, 0}, {0, 0}}}, {{{0, 0}, {0, 1}}}}}};
    auto b = build(parse_instance(j));
    EXPECT_NEAR(b.tower->mu(), 2.0, 1e-12);
}

TEST(Instance, DeskScaleGuard) {
    // C in M_9: dim L2(M1) = 81^2 > 4096
    json j = json::parse(kMinimal);
    j["algebra_N"]["blocks"] = {1};
    j["algebra_M"]["blocks"] = {9};
    j["embedding"] = {{"form", "scalars_in_full"}};
    auto s = parse_instance(j);
    EXPECT_EQ(l2_m1_dimension(s), 6561);
    EXPECT_EQ(kind_of([&] { build(s); }), ErrorKind::TooLarge);
}

TEST(Instance, NonBimodularRejected) {
    json j = json::parse(kMinimal);
    j["algebra_N"]["blocks"] = {1, 1};
    j["algebra_M"]["blocks"] = {2};
    j["embedding"] = {{"form", "diagonal_in_full"}};
    j["channel"] = {{"kind", "kraus"}, {"operators", {{{0, 1}, {1, 0}}}}};
    auto r = run_analyze(parse_instance(j));
    EXPECT_EQ(r.exit_code, kRejected);
    EXPECT_TRUE(r.certificate.is_null());
}

TEST(Generators, AnalyticGroundTruth) {
    struct Case {
        InstanceSpec s;
        int m;
    };
    for (const auto& c : {Case{ad_unitary(4), 4}, Case{expectation_mix(0.5), 1}, Case{shift_conjugation(3), 3},
                          Case{scalars_in_full_expectation(3), 1}, Case{shift_mixture(3, 0.3), 3}}) {
        auto r = run_analyze(c.s);
        ASSERT_FALSE(r.certificate.is_null()) << r.error;
        EXPECT_EQ(r.certificate["phase_group"]["order"], c.m);
        EXPECT_EQ(r.exit_code, kPass) << dump(r.certificate["verdicts"]);
    }
}

TEST(Generators, ShiftConjugationSkipReason) {
    auto r = run_analyze(shift_conjugation(3));
    EXPECT_EQ(r.certificate["unitaries_skipped"], "fixed algebra not a factor");
    EXPECT_FALSE(r.certificate.contains("unitaries"));
}

TEST(Generators, RandomCpbIsUnitalCp) {
    auto r = run_analyze(random_cpb(3, 7));
    ASSERT_FALSE(r.certificate.is_null()) << r.error;
    EXPECT_TRUE(r.certificate["flags"]["cp"].get<bool>());
    EXPECT_TRUE(r.certificate["flags"]["unital"].get<bool>());
}

TEST(Generators, BadParams) {
    EXPECT_THROW(ad_unitary(1), Error);
    EXPECT_THROW(expectation_mix(1.5), Error);
    EXPECT_EQ(kind_of([] { generate("nope", {}); }), ErrorKind::UnknownGenerator);
}

TEST(Analyze, CertificateIsDeterministic) {
    auto spec = ad_unitary(3);
    auto a = run_analyze(spec), b = run_analyze(parse_instance_text(serialize(spec)));
    EXPECT_EQ(dump(a.certificate), dump(b.certificate));
}

TEST(Analyze, ResidualsBelowEchoedTolerances) {
    auto c = run_analyze(ad_unitary(3)).certificate;
    for (auto it = c["residuals"].begin(); it != c["residuals"].end(); ++it)
        EXPECT_LE((*it)["value"].get<double>(), (*it)["tol"].get<double>()) << it.key();
    EXPECT_EQ(c["tolerances"]["cp"], 1e-9);
}

TEST(Analyze, SeedOverrideIsEchoed) {
    AnalyzeOptions o;
    o.seed = 99;
    EXPECT_EQ(run_analyze(ad_unitary(2), o).certificate["seed"], 99);
}

TEST(Analyze, QfaCheck) {
    auto r = run_qfa_check(ad_unitary(3));
    EXPECT_EQ(r.exit_code, kPass);
    EXPECT_EQ(r.certificate["engine"]["peripheral"]["m"], 3);
}

TEST(Analyze, TextFormat) {
    auto t = to_text(run_analyze(ad_unitary(2)).certificate);
    EXPECT_NE(t.find("phase_group.order: 2"), std::string::npos);
}
