#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rectify/cli.hpp"

using namespace rectify;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return (std::filesystem::path(RECTIFY_TEST_TMPDIR) / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

}  // namespace

TEST(Cli, EmbedJsonThenVerify) {
    const std::string path = tmp_path("craighero3.json");
    CliRun r = run({"embed", "t^3,t^4,t^5+t", "--json", "--out", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(path));
    CertificateDocument doc = parse_document(r.out);
    EXPECT_TRUE(doc.verified);
    EXPECT_EQ(doc.certificate.embedding, Embedding::family(3, 4, 5));

    CliRun v = run({"verify", path});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NE(v.out.find("ok: "), std::string::npos);
}

TEST(Cli, JsonIsByteDeterministic) {
    CliRun a = run({"embed", "t^2,t^3,t^4+t", "--json"});
    CliRun b = run({"embed", "t^2,t^3,t^4+t", "--json"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("{\n  \"version\": \"rectify-certificate/1\",\n  \"embedding\"", 0), 0u);
}

TEST(Cli, HumanReadableEmbed) {
    CliRun r = run({"embed", "t^2, t^3, t^4 + t"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("recipe: trivial"), std::string::npos);
    EXPECT_NE(r.out.find("coordinate: -x^2 + z"), std::string::npos);
}

TEST(Cli, OpenCaseExitsTwoWithAttempts) {
    CliRun r = run({"embed", "t^5,t^6,t^7+t"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("br-general"), std::string::npos);
}

TEST(Cli, NamedRecipes) {
    EXPECT_EQ(run({"embed", "t^5,t^7,t^9+t", "--recipe", "br-general:2"}).code, 0);
    EXPECT_EQ(run({"embed", "t^3,t^10,t^14+t", "--recipe", "kuroda:3,1,2,2"}).code, 0);
    EXPECT_EQ(run({"embed", "t^4,t^5,t^6+t", "--recipe", "br-n4"}).code, 0);
    EXPECT_EQ(run({"embed", "t^3,t^4,t^5+t", "--recipe", "craighero4"}).code, 2);
    EXPECT_EQ(run({"embed", "t^3,t^4,t^5+t", "--recipe", "bogus"}).code, 1);
}

TEST(Cli, Coeffs) {
    CliRun r = run({"coeffs", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "alpha = [1]\n");
    CliRun r4 = run({"coeffs", "4"});
    EXPECT_EQ(r4.out, "alpha = [1, -4, 0]\nbeta = -2\n");
    EXPECT_EQ(run({"coeffs", "0"}).code, 1);
}

TEST(Cli, DemoNagata) {
    CliRun r = run({"demo", "nagata"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(x, x^2*z - x*y^2 + y, "), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("gamma = (x, y, z + 2*x^-1*y^3)"), std::string::npos) << r.out;
    EXPECT_EQ(run({"demo", "other"}).code, 1);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"embed", "t^3,t^4"}).code, 1);
    EXPECT_EQ(run({"embed", "t^3,t^4,t^5+q"}).code, 1);
    EXPECT_EQ(run({"verify", tmp_path("does-not-exist.json")}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MalformedDocumentIsUsageError) {
    const std::string path = tmp_path("malformed.json");
    spit(path, "{\"version\": \"rectify-certificate/1\", \"factors\": 3");
    EXPECT_EQ(run({"verify", path}).code, 1);
    spit(path, "{\"version\": \"rectify-certificate/1\"}");
    EXPECT_EQ(run({"verify", path}).code, 1);
}

TEST(Cli, TamperedDocumentFailsVerification) {
    CliRun r = run({"embed", "t^3,t^4,t^5+t", "--json"});
    ASSERT_EQ(r.code, 0);
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.out);
    j["coordinate"] = "z";
    const std::string path = tmp_path("tampered.json");
    spit(path, j.dump(2));
    CliRun v = run({"verify", path});
    EXPECT_EQ(v.code, 3);
    EXPECT_NE(v.err.find("coordinate pullback"), std::string::npos) << v.err;

    j = nlohmann::ordered_json::parse(r.out);
    j["factors"].erase(j["factors"].size() - 1);
    spit(path, j.dump(2));
    EXPECT_EQ(run({"verify", path}).code, 3);
}
