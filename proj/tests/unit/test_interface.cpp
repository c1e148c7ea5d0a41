#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "ubisim/config_io.hpp"
#include "ubisim/scenario.hpp"
#include "ubisim/service.hpp"
// after Eigen: <resolv.h> defines _res
#include "httplib.h"

using namespace ubisim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const Engine& fixture_engine() {
  static const Engine e(
      synth_generate(synth_spec_from_json(read_json_file(std::string(UBISIM_SOURCE_DIR) + "/config/fixtures/calibrated_synth.json"))),
      example_2017_policy());
  return e;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ubisim_test_interface_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  std::string err;
};

Run cli(const std::string& args, const fs::path& dir) {
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(UBISIM_CLI) + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST_CASE("health reports version and fingerprint") {
  const Service svc(fixture_engine());
  const auto r = svc.handle("GET", "/health", "");
  CHECK(r.status == 200);
  const auto j = json::parse(r.body);
  CHECK(j["version"] == UBISIM_VERSION);
  CHECK(j["population_fingerprint"] == fixture_engine().population().fingerprint_hex());
}

TEST_CASE("presets endpoint lists the three schemes") {
  const Service svc(fixture_engine());
  const auto j = json::parse(svc.handle("GET", "/presets", "").body);
  REQUIRE(j.size() == 3);
  CHECK(j[1]["ubi"]["child"] == 203);
  CHECK(j[1]["ubi"]["adult"] == 406);
  CHECK(j[1]["ubi"]["elderly"] == 812);
}

TEST_CASE("simulating scheme 1 lowers the baseline gini") {
  const Service svc(fixture_engine());
  const auto baseline = json::parse(svc.handle("GET", "/baseline", "").body);
  const auto r = svc.handle("POST", "/simulate", to_json(preset("scheme1")).dump());
  REQUIRE(r.status == 200);
  const auto j = json::parse(r.body);
  CHECK(j["gini"]["reform"].get<double>() < baseline["gini"].get<double>());
  CHECK(j["gini"]["baseline"].get<double>() == baseline["gini"].get<double>());
  CHECK(j["poverty"]["reform"]["total"] == 0.0);
  CHECK(j["deciles"].size() == 10);
  CHECK(j["figure_series"].size() == 10);
  CHECK(j["diagnostics"]["within_tolerance"] == true);
}

TEST_CASE("simulate accepts a wrapped request with a poverty line") {
  const Service svc(fixture_engine());
  const auto r = svc.handle("POST", "/simulate", R"({"scheme": "scheme2", "poverty_line": 300})");
  REQUIRE(r.status == 200);
  CHECK(json::parse(r.body)["poverty"]["line"] == 300.0);
}

TEST_CASE("bad requests are 400") {
  const Service svc(fixture_engine());
  auto spec = to_json(preset("scheme1"));
  spec["tax"]["rate"] = 1.5;
  auto r = svc.handle("POST", "/simulate", spec.dump());
  CHECK(r.status == 400);
  CHECK(json::parse(r.body)["error"] == "ValidationError");
  CHECK(svc.handle("POST", "/simulate", "{not json").status == 400);
  CHECK(svc.handle("POST", "/simulate", "[]").status == 400);
  CHECK(svc.handle("POST", "/simulate", R"({"scheme": "scheme9"})").status == 400);
  CHECK(svc.handle("GET", "/nowhere", "").status == 404);
  CHECK(svc.handle("GET", "/simulate", "").status == 405);
}

TEST_CASE("infeasible schemes are 422 with the shortfall") {
  const Service svc(fixture_engine());
  auto spec = preset("scheme1");
  spec.ubi = {Money::reais(50000), Money::reais(50000), Money::reais(50000)};
  const auto r = svc.handle("POST", "/simulate", to_json(spec).dump());
  CHECK(r.status == 422);
  const auto j = json::parse(r.body);
  CHECK(j["error"] == "InfeasibleNeutrality");
  CHECK(j["shortfall_reais"].get<double>() > 0.0);
}

TEST_CASE("concurrent identical requests return identical bodies") {
  const Service svc(fixture_engine());
  const std::string body = to_json(preset("scheme3")).dump();
  std::vector<std::future<std::string>> futures;
  for (int i = 0; i < 4; ++i)
    futures.push_back(std::async(std::launch::async, [&] { return svc.handle("POST", "/simulate", body).body; }));
  const std::string first = futures[0].get();
  for (std::size_t i = 1; i < futures.size(); ++i) CHECK(futures[i].get() == first);
}

TEST_CASE("service answers over http") {
  const Service svc(fixture_engine());
  std::promise<std::pair<int, std::function<void()>>> ready;
  std::thread server([&] {
    svc.listen("127.0.0.1", 0, [&](int port, std::function<void()> stop) { ready.set_value({port, std::move(stop)}); });
  });
  auto [port, stop] = ready.get_future().get();
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
  auto sim = client.Post("/simulate", to_json(preset("scheme2")).dump(), "application/json");
  REQUIRE(sim);
  CHECK(sim->status == 200);
  CHECK(sim->body == svc.handle("POST", "/simulate", to_json(preset("scheme2")).dump()).body);
  stop();
  server.join();
}

TEST_CASE("cli and service produce the same simulate response") {
  const auto dir = scratch("same");
  const auto spec_path = dir / "scheme2.json";
  std::ofstream(spec_path) << to_json(preset("scheme2")).dump();
  const Engine e(synth_generate(fixtures::synth(500, 7)), example_2017_policy());
  const Service svc(e);
  const auto via_service = json::parse(svc.handle("POST", "/simulate", to_json(preset("scheme2")).dump()).body);
  const auto via_engine = e.simulate(load_scheme(spec_path.string()));
  CHECK(via_service == via_engine);
}

TEST_CASE("cli simulate writes a report where scheme 1 leaves nobody poor") {
  const auto dir = scratch("run1");
  const auto run = cli("simulate --synth-households 5000 --seed 7 --scheme scheme1 --out " + (dir / "run1").string(), dir);
  REQUIRE(run.code == 0);
  for (const char* f : {"budget_table.csv", "poverty_inequality.csv", "deciles_scheme1.csv", "figure_series_scheme1.csv",
                        "manifest.json"})
    CHECK(fs::exists(dir / "run1" / f));
  std::ifstream in(dir / "run1" / "poverty_inequality.csv");
  std::string header, total;
  std::getline(in, header);
  std::getline(in, total);
  CHECK(total.substr(total.rfind(',') + 1) == "0.0");
}

TEST_CASE("cli without --scheme is a usage error") {
  const auto dir = scratch("usage");
  const auto run = cli("simulate --synth-households 10", dir);
  CHECK(run.code == 1);
  CHECK(run.err.find("--scheme is required") != std::string::npos);
  CHECK(run.err.find("Usage: simulate") != std::string::npos);
}

TEST_CASE("cli reports infeasible schemes with exit 3") {
  const auto dir = scratch("infeasible");
  const auto data = dir / "pop.csv";
  std::ofstream(data) << "household_id,person_id,age,weight,market_income,pension_income,other_benefit_income\n"
                         "H1,P1,30,1,100.00,0,0\nH1,P2,40,1,2500.00,0,0\nH2,P3,25,2,800.00,0,0\n";
  auto spec = preset("scheme3");
  spec.ubi.adult_amount = Money::reais(20000);
  std::ofstream(dir / "huge.json") << to_json(spec).dump();
  const auto run = cli("simulate --data " + data.string() + " --scheme " + (dir / "huge.json").string() + " --out " +
                           (dir / "out").string(),
                       dir);
  CHECK(run.code == 3);
  CHECK(run.err.find("InfeasibleNeutrality") != std::string::npos);
}

TEST_CASE("cli reports bad data with exit 2") {
  const auto dir = scratch("baddata");
  const auto data = dir / "pop.csv";
  std::ofstream(data) << "household_id,person_id,age,weight,market_income,pension_income,other_benefit_income\n"
                         "H1,P1,30,1,-1,0,0\n";
  const auto run = cli("simulate --data " + data.string() + " --scheme scheme1 --out " + (dir / "out").string(), dir);
  CHECK(run.code == 2);
  CHECK(run.err.find("NegativeIncome at row 2") != std::string::npos);
  CHECK(cli("simulate --data " + (dir / "missing.csv").string() + " --scheme scheme1", dir).code == 2);
}

TEST_CASE("cli synth output loads back") {
  const auto dir = scratch("synth");
  const auto out = dir / "pop.csv";
  REQUIRE(cli("synth --households 30 --seed 4 --out " + out.string(), dir).code == 0);
  const auto pop = load_population_file(out.string());
  CHECK(pop.households().size() == 30);
  CHECK(pop.same_records(synth_generate(fixtures::synth(30, 4))));
}

TEST_CASE("run_scenario validates its config") {
  std::ostringstream out, err;
  ScenarioConfig c;
  c.schemes = {"scheme1"};
  CHECK(run_scenario(c, out, err) == kExitConfig);
  c.synth = fixtures::synth(10, 1);
  c.data_path = "x.csv";
  CHECK(run_scenario(c, out, err) == kExitConfig);
  c.data_path.reset();
  c.schemes = {"nope"};
  CHECK(run_scenario(c, out, err) == kExitConfig);
  CHECK(err.str().find("ConfigError") != std::string::npos);
}
