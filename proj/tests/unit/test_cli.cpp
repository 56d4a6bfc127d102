#include "ava/core/session.hpp"
#include "ava/image.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome ava_cli(const std::string& args, const testing::TempDir& dir) {
    const std::string stdout_path = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + AVA_BIN + "\" " + args + " > \"" + stdout_path + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(stdout_path);
    std::stringstream ss;
    ss << in.rdbuf();
    o.out = ss.str();
    return o;
}

}  // namespace

TEST_CASE("usage errors exit with 2, help with 0") {
    testing::TempDir dir;
    CHECK(ava_cli("bogus", dir).code == 2);
    CHECK(ava_cli("run --tool builtin:mock-dr", dir).code == 2);  // --goal is required
    const auto help = ava_cli("--help", dir);
    CHECK(help.code == 0);
    CHECK(help.out.find("make-phantom") != std::string::npos);
}

TEST_CASE("phantom plus transfer-function run succeeds end to end") {
    testing::TempDir dir;
    const std::string stem = dir / "phantom";
    REQUIRE(ava_cli("make-phantom --out \"" + stem + "\" --band-bin 6 --dims 32,32,32", dir).code == 0);
    CHECK(std::filesystem::exists(stem + ".raw"));
    CHECK(std::filesystem::exists(stem + ".json"));

    const std::string out = dir / "session.json";
    const auto r = ava_cli("run --planner heuristic_tf --perception oracle --target target --max-iterations 12"
                           " --tool builtin:volume --data \"" + stem + ".raw\" --tool-option width=64"
                           " --tool-option height=64 --goal \"find the hidden structure\" --store \"" +
                               std::string(dir / "runs") + "\" --out \"" + out + "\"",
                           dir);
    CAPTURE(r.out);
    REQUIRE(r.code == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["status"] == "done_success");
    std::ifstream in(out);
    const auto session = ava::session_from_json(nlohmann::json::parse(in));
    CHECK(session.status == ava::SessionStatus::done_success);
    REQUIRE(session.final_params);
    const double start = ava::number_of(*session.final_params, "start");
    const double end = ava::number_of(*session.final_params, "end");
    // Band 6 of 10 over [0, 255] is [153, 178.5]; the window must overlap it.
    CHECK(start < 178.5);
    CHECK(end > 153.0);

    const auto bad = ava_cli("run --max-iterations 0 --tool builtin:mock-dr --goal g --store \"" +
                                 std::string(dir / "runs") + "\"",
                             dir);
    CHECK(bad.code == 1);
}

TEST_CASE("bench and render subcommands") {
    testing::TempDir dir;
    const auto b = ava_cli("bench --task scatter-cluster-count --trials 3 --perception stub:exact", dir);
    CAPTURE(b.out);
    CHECK(b.code == 0);
    CHECK(b.out.find("cluster count  100%") != std::string::npos);

    const std::string png = dir / "dr.png";
    const auto r = ava_cli("render --tool builtin:mock-dr --param perplexity=30 --out \"" + png + "\"", dir);
    CAPTURE(r.out);
    CHECK(r.code == 0);
    std::ifstream in(png, std::ios::binary);
    const ava::Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(ava::decode_png(bytes).width() == 480);
}
