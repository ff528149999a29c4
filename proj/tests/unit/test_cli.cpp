#include <catch2/catch.hpp>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qcap/cli.hpp"
#include "qcap/errors.hpp"

using namespace qcap;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(QCAP_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& name) { return std::string(QCAP_GOLDEN_DIR) + "/../data/" + name; }

}  // namespace

TEST_CASE("number formatting", "[cli]") {
  CHECK(format_sig9(0.36067376022224085) == "0.36067376");
  CHECK(format_sig9(1.0 / 3) == "0.333333333");
  CHECK(format_sig9(-0.0) == "0");
  CHECK(format_sig9(123456789012.0) == "1.23456789e+11");
  CHECK(round_sig9(0.1 + 0.2) == 0.3);
}

TEST_CASE("bounds commands", "[cli]") {
  const Run t = run({"bounds", "theorem", "--n", "2", "--format", "csv"});
  CHECK(t.code == exit_code::ok);
  CHECK(t.out.find("2,1,4,4,16,52,48,48,36,true") != std::string::npos);

  CHECK(run({"bounds", "theorem", "--n", "3", "--format", "csv"}).out == golden("bounds_theorem_n3.csv"));
  CHECK(run({"bounds", "theorem", "--n", "2"}).out == golden("bounds_theorem_n2.json"));
  CHECK(run({"--format", "csv", "bounds", "theorem", "--n", "3"}).out == golden("bounds_theorem_n3.csv"));

  const Run c = run({"bounds", "conjecture", "--p", "11/24", "--n", "13"});
  CHECK(c.code == exit_code::ok);
  CHECK(nlohmann::json::parse(c.out).at("epsilon_threshold") == "13/132");
  CHECK(c.out == golden("bounds_conjecture.json"));
  CHECK(run({"bounds", "locking", "--p", "1/2", "--d", "2"}).out == golden("bounds_locking.json"));

  const Run p1 = run({"bounds", "p1-upper", "--n", "2", "--k", "2"});
  CHECK(nlohmann::json::parse(p1.out).at("p1_upper") == "54");
  CHECK(nlohmann::json::parse(run({"bounds", "q-lower", "--n", "2", "--j", "2"}).out).at("q_lower") == "52");

  SECTION("usage errors") {
    const Run bad = run({"bounds", "theorem", "--n", "1"});
    CHECK(bad.code == exit_code::usage);
    CHECK(bad.out.empty());
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"bounds", "theorem"}).code == exit_code::usage);
    CHECK(run({"bounds", "locking", "--p", "3/4", "--d", "2"}).code == exit_code::usage);
    CHECK(run({"bounds", "locking", "--p", "half", "--d", "2"}).code == exit_code::usage);
    CHECK(run({"bounds", "conjecture", "--p", "0", "--n", "3"}).code == exit_code::usage);
    CHECK(run({"frobnicate"}).code == exit_code::usage);
    CHECK(run({}).code == exit_code::usage);
    CHECK(run({"--format", "xml", "bounds", "theorem", "--n", "2"}).code == exit_code::usage);
  }
  SECTION("help") {
    const Run h = run({"--help"});
    CHECK(h.code == exit_code::ok);
    CHECK(h.out.find("bounds") != std::string::npos);
  }
}

TEST_CASE("sweep commands", "[cli]") {
  const Run l = run({"sweep", "locking", "--p", "1/2", "--d", "2:4"});
  CHECK(l.code == exit_code::ok);
  CHECK(l.out == golden("sweep_locking.csv"));
  const Run empty = run({"sweep", "locking", "--p", "1/2", "--d", "5:4"});
  CHECK(empty.code == exit_code::ok);
  CHECK(empty.out == "p,d,locking_upper\n");
  CHECK(run({"sweep", "bounds", "--n", "3", "--k", "1:2"}).out == golden("sweep_bounds.csv"));
  CHECK(run({"sweep", "bounds", "--n", "3", "--k", "1:2"}).out == golden("bounds_theorem_n3.csv"));
  CHECK(run({"sweep", "bounds", "--n", "3", "--k", "3:1"}).out == "n,k,U1,U2,U3,L,D1,D2,D3,pass\n");
  CHECK(run({"sweep", "bounds", "--n", "3", "--k", "a:b"}).code == exit_code::usage);
  const auto j = nlohmann::json::parse(run({"sweep", "locking", "--p", "1/2", "--d", "2:3", "--format", "json"}).out);
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows").at(0).at("unit") == "bits");
}

TEST_CASE("info commands", "[cli]") {
  const Run c = run({"info", "coherent", "--channel", data("erasure_quarter.json"), "--state",
                     data("maximally_mixed_qubit.json")});
  CHECK(c.code == exit_code::ok);
  CHECK(nlohmann::json::parse(c.out).at("value") == 0.5);
  CHECK(c.out == golden("info_coherent.json"));

  const Run p = run({"info", "private", "--channel", data("erasure_half.json"), "--ensemble",
                     data("computational_ensemble.json")});
  CHECK(p.code == exit_code::ok);
  CHECK(nlohmann::json::parse(p.out).at("value") == 0.0);
  CHECK(p.out == golden("info_private.json"));

  const Run h = run({"info", "holevo", "--channel", data("erasure_quarter.json"), "--ensemble",
                     data("computational_ensemble.json")});
  CHECK(h.out == golden("info_holevo.json"));

  SECTION("data errors") {
    CHECK(run({"info", "coherent", "--channel", data("malformed.json"), "--state", data("maximally_mixed_qubit.json")})
              .code == exit_code::data);
    const Run nt = run({"info", "coherent", "--channel", data("not_cptp.json"), "--state",
                        data("maximally_mixed_qubit.json")});
    CHECK(nt.code == exit_code::data);
    CHECK(nt.err.find("not trace preserving") != std::string::npos);
    CHECK(run({"info", "coherent", "--channel", data("missing.json"), "--state", data("maximally_mixed_qubit.json")})
              .code == exit_code::data);
    CHECK(run({"info", "coherent", "--channel", data("full_erasure_16.json"), "--state",
               data("maximally_mixed_qubit.json")})
              .code == exit_code::data);  // dimension mismatch
    CHECK(run({"info", "coherent", "--channel", data("erasure_quarter.json")}).code == exit_code::usage);
  }
  SECTION("dimension cap") {
    const std::size_t before = dimension_cap();
    const Run d = run({"--dim-cap", "8", "info", "coherent", "--channel", data("full_erasure_16.json"), "--state",
                       data("maximally_mixed_qubit.json")});
    CHECK(d.code == exit_code::dimension);
    CHECK(dimension_cap() == before);
  }
}

TEST_CASE("verify commands", "[cli]") {
  const Run lb = run({"verify", "lower-bound", "--n", "1", "--d", "2", "--p", "1/4", "--uses", "2"});
  CHECK(lb.code == exit_code::ok);
  CHECK(lb.out == golden("verify_lower_bound.txt"));
  CHECK(lb.err.find("lower-bound") != std::string::npos);  // progress goes to stderr

  const Run l3 = run({"verify", "lemma3", "--seed", "7", "--samples", "200"});
  CHECK(l3.code == exit_code::ok);
  CHECK(l3.out.find("[PASS] lemma3.holevo_additive_bound") != std::string::npos);
  CHECK(l3.out == run({"verify", "lemma3", "--seed", "7", "--samples", "200", "--threads", "2"}).out);

  SECTION("one rocket cannot reach the j = 3 closed form") {
    const Run r = run({"verify", "lower-bound", "--n", "1", "--uses", "3"});
    CHECK(r.code == exit_code::check_failed);
    CHECK(r.out.find("[FAIL] lower-bound.rate_n1_d2_uses3 value=0.25 reference=0.5") != std::string::npos);
  }
  SECTION("csv") {
    const Run csv = run({"--format", "csv", "verify", "lower-bound"});
    CHECK(csv.code == exit_code::ok);
    CHECK(csv.out.rfind("suite,check,pass,value,reference,tolerance\n", 0) == 0);
    CHECK(csv.out.find("lower-bound,rate_n2_d2_uses3,true,0.5,0.5,1e-06") != std::string::npos);
  }
  CHECK(run({"verify", "lemma9"}).code == exit_code::usage);
  CHECK(run({"verify", "lemma3", "--samples", "0"}).code == exit_code::usage);
}
