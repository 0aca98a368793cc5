#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "agv/cli.hpp"
#include "agv/generators.hpp"
#include "agv/model_io.hpp"

using namespace agv;

namespace
{

const char* kToggle = R"(domain 2
# one agent flipping its bit, one watching it
agent flip
  statevars x
  state a x=0
  state b x=1
  init a
  trans a -> b
  trans b -> a
end
agent watch
  statevars y
  inputvars x
  state u y=0
  state v y=1
  init u
  trans u -> v when x=1
  trans v -> u when x=0
  choice u: v when x=1
end
assumption F
  statevars x
  state a x=0
  state b x=1
  init a
  trans a -> b
  trans b -> a
  accepting a b
end
)";

struct Run
{
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int c = run_cli(args, out, err);
    return {c, out.str(), err.str()};
}

std::string temp_model(const std::string& text)
{
    static int n = 0;
    auto p = std::filesystem::temp_directory_path() / ("agv_model_" + std::to_string(n++) + ".txt");
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_CASE("parse a small model")
{
    auto b = parse_model_file(kToggle);
    REQUIRE(b.system.agents.size() == 2);
    CHECK(b.system.domain == 2);
    CHECK(b.system.agents[0].name == "flip");
    CHECK(b.system.agents[1].module.state_count() == 2);
    // omitted inputs complete to self-loops
    CHECK(b.system.agents[1].module.outgoing(0).size() == 2);
    CHECK(b.assumptions.count("F") == 1);
    CHECK(validate_system(b.system).empty());
}

TEST_CASE("serialization round-trips")
{
    for (const auto& b : {parse_model_file(kToggle), gen_tgc(2), gen_robots(2, 2, 2)}) {
        const auto text = serialize(b);
        auto c = parse_model_file(text);
        REQUIRE(c.system.agents.size() == b.system.agents.size());
        for (std::size_t i = 0; i < b.system.agents.size(); ++i) {
            CHECK(isomorphic(c.system.agents[i].module, b.system.agents[i].module));
            CHECK(c.system.agents[i].repertoire.choices.size() == b.system.agents[i].repertoire.choices.size());
        }
        CHECK(c.assumptions.size() == b.assumptions.size());
        CHECK(serialize(c) == text);
    }
}

TEST_CASE("parse errors carry line numbers")
{
    auto line_of = [](const std::string& text) {
        try {
            parse_model_file(text);
        } catch (const ModelParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("domain 2\nagent a\n  statevars x\n  state p x=5\nend\n") == 4);
    CHECK(line_of("domain 2\nagent a\n  statevars x\n  state p x=0\n  init p\n  trans p -> q\nend\n") == 6);
    CHECK(line_of("domain 2\nagent a\n  statevars x\n  state p x=0\nend\n") == 5);
    CHECK(line_of("domain 2\nbogus\n") == 2);
    CHECK(line_of("domain 2\nagent a\n  statevars x\n  state p x=0\n") > 0);
}

TEST_CASE("builtin model names")
{
    CHECK(load_model("tgc3").system.agents.size() == 4);
    auto r = load_model("robots2_2_2");
    CHECK(r.system.agents.size() == 4);
    CHECK(r.system.agents[0].name == "r1");
    CHECK(r.system.agents[2].name == "d1");
    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), ModelError);
    auto b = gen_tgc(2);
    CHECK(find_assumption(b, "A_012") != nullptr);
    CHECK(find_assumption(b, "A9") == nullptr);
}

TEST_CASE("smallest robot system")
{
    auto b = gen_robots(1, 1, 1);
    CHECK(b.system.agents.size() == 2);
    CHECK(validate_system(b.system).empty());
}

TEST_CASE("verify exit codes")
{
    CHECK(cli({"verify", "--model", "tgc2", "--formula", "<<train1,train2>>(G F s=1 & G F s=2)"}).code == kExitTrue);
    CHECK(cli({"verify", "--model", "tgc2", "--formula", "<<train1>>G F x1=1"}).code == kExitFalse);
    CHECK(cli({"verify", "--model", "tgc2", "--formula", "G F ("}).code == kExitError);
    CHECK(cli({"verify", "--model", "nope.txt", "--formula", "true"}).code == kExitError);
    CHECK(cli({"frobnicate"}).code == kExitError);
}

TEST_CASE("verify json report")
{
    auto r = cli({"verify", "--model", "tgc2", "--formula", "<<train1,train2>>(G F x1=1 & G F x2=1)", "--json"});
    REQUIRE(r.code == kExitTrue);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"] == "true");
    CHECK(j["states"] == 16);
    CHECK(j.contains("witness"));
    CHECK(j.contains("time_ms"));
}

TEST_CASE("json counterexample on a false verdict")
{
    auto r = cli({"verify", "--model", "tgc2", "--formula", "<<train1>>G F x1=1", "--json"});
    REQUIRE(r.code == kExitFalse);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"] == "false");
    REQUIRE(j["counterexample"].is_object());
    CHECK_FALSE(j["counterexample"]["loop"].empty());
    CHECK(j["counterexample"]["loop"][0].contains("x1"));
}

TEST_CASE("agverify exit codes")
{
    CHECK(cli({"agverify", "--model", "tgc2", "--rule", "rk", "--obj", "train1:G F s=2", "--obj", "train2:G F s=1",
               "--assume", "train1:A_012", "--assume", "train2:A_012"})
              .code == kExitTrue);
    CHECK(cli({"agverify", "--model", "tgc2", "--rule", "rk", "--obj", "train1:G F x1=1", "--obj", "train2:G F x2=1",
               "--assume", "train1:A1", "--assume", "train2:A1"})
              .code == kExitInconclusive);
    CHECK(cli({"agverify", "--model", "tgc2", "--rule", "rk", "--obj", "train1:G F x2=1", "--assume", "train1:A012"})
              .code == kExitError);
    CHECK(cli({"agverify", "--model", "tgc2", "--rule", "rk", "--k", "auto", "--obj", "train1:G F s=2", "--obj",
               "train2:G F s=1", "--assume", "train1:A012", "--assume", "train2:A012", "--json"})
              .code == kExitTrue);
}

TEST_CASE("guarantee, compose and file models")
{
    CHECK(cli({"guarantee", "--model", "tgc2", "--agents", "ctrl,train2", "--assume", "A012"}).code == kExitTrue);
    CHECK(cli({"guarantee", "--model", "tgc2", "--agents", "ctrl,train2", "--assume", "A1"}).code == kExitFalse);
    auto c = cli({"compose", "--model", "tgc2", "--agents", "train1,train2,ctrl"});
    CHECK(c.code == kExitTrue);
    CHECK(c.out.find("16") != std::string::npos);

    const auto path = temp_model(kToggle);
    CHECK(cli({"verify", "--model", path, "--formula", "G F x=1"}).code == kExitTrue);
    // flip may run forever without watch ever moving
    CHECK(cli({"verify", "--model", path, "--formula", "<<watch>>G F y=1"}).code == kExitFalse);
    CHECK(cli({"verify", "--model", path, "--formula", "<<flip,watch>>G F y=1"}).code == kExitFalse);
    CHECK(cli({"guarantee", "--model", path, "--agents", "flip", "--assume", "F"}).code == kExitTrue);
    std::filesystem::remove(path);
}
