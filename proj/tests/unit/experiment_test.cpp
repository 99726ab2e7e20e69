#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rdwb/error.hpp"
#include "rdwb/experiment.hpp"

using namespace rdwb;
namespace fs = std::filesystem;

namespace {

ExperimentConfig cfg(const char* text) { return ExperimentConfig::from_json(Json::parse(text)); }

std::string field_of(const char* text) {
  try {
    cfg(text).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, FieldLevelErrors) {
  const std::vector<std::pair<const char*, const char*>> cases{
      {R"j({"kind":"ball","group":"free(2)","radios":3})j", "radios"},
      {R"j({"kind":"ball","group":"free(2)"})j", "radius"},
      {R"j({"kind":"ball","group":"free(2)","radius":"3"})j", "radius"},
      {R"j({"kind":"balls","group":"free(2)","radius":3})j", "kind"},
      {R"j({"kind":"ball","group":"fre(2)","radius":3})j", "group"},
      {R"j({"kind":"opnorm","group":"free(2)","R_values":[2],"function":"disk:1"})j", "function"},
      {R"j({"kind":"ball","group":"free(2)","radius":2,"output":{"pdf":"x"}})j", "output.pdf"},
      {R"j({"kind":"ball","group":"free(2)","radius":2})j", ""},
  };
  for (const auto& [text, field] : cases) {
    const std::string got = field_of(text);
    EXPECT_EQ(got, field) << text;
  }
}

TEST(Config, EchoRoundTrips) {
  const char* text = R"j({"kind":"star-verify","group":"free(2)","peripherals":"trivial","sigma":0,"delta":1,"radius":3})j";
  const auto c = cfg(text);
  EXPECT_EQ(ExperimentConfig::from_json(c.echo()).echo(), c.echo());
}

TEST(RunExperiment, ExitCodes) {
  const auto pass = run_experiment(cfg(
      R"j({"kind":"star-verify","group":"free-product(free-abelian(1), free-abelian(1))","sigma":0,"delta":1,"radius":3})j"));
  EXPECT_EQ(pass.exit_code, kExitPass);
  EXPECT_TRUE(pass.document["pass"].get<bool>());
  const auto fail = run_experiment(
      cfg(R"j({"kind":"star-verify","group":"free-abelian(2)","peripherals":"trivial","sigma":1,"delta":1,"radius":3})j"));
  EXPECT_EQ(fail.exit_code, kExitProperty);
  EXPECT_FALSE(fail.document["pass"].get<bool>());
  try {
    const char* big = R"j({"kind":"ball","group":"free(3)","radius":9,"budget":1000})j";
    run_experiment(cfg(big));
    FAIL() << "expected a resource error";
  } catch (const std::exception& e) {
    EXPECT_EQ(exit_code_for(e), kExitResource);
  }
  EXPECT_EQ(exit_code_for(ConfigError("radius", "bad")), kExitConfig);
  EXPECT_EQ(exit_code_for(StructuralError("x")), kExitProperty);
}

TEST(RunExperiment, CsvHeaders) {
  const auto rd = run_experiment(cfg(R"j({"kind":"rd-profile","group":"free-abelian(1)","r_max":1,"restarts":4})j"));
  ASSERT_TRUE(rd.csv);
  EXPECT_EQ(rd.csv->str().substr(0, rd.csv->str().find('\n')), "r1,r2,p,lower,upper,restarts");
  const CsvTable empty{{"r1", "r2", "p", "lower", "upper", "restarts"}, {}};
  EXPECT_EQ(empty.str(), "r1,r2,p,lower,upper,restarts\n");
}

TEST(RunExperiment, ReportsAreByteIdentical) {
  const char* text = R"j({"kind":"trace","group":"free-product(free-abelian(1), free-abelian(1))","sigma":0,"delta":1,"r_max":2,"samples":5,"seed":3})j";
  const auto a = run_experiment(cfg(text));
  const auto b = run_experiment(cfg(text));
  EXPECT_EQ(dump(a.document), dump(b.document));
  EXPECT_EQ(a.exit_code, kExitPass);
}

TEST(PersistReport, WritesFilesAndReportsIoErrors) {
  const fs::path dir = fs::temp_directory_path() / "rdwb-experiment-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto rep = run_experiment(cfg(R"j({"kind":"ball","group":"free(2)","radius":2})j"));
  persist_report(rep, dir / "r.json", dir / "r.csv");
  std::ifstream in(dir / "r.json");
  const Json j = Json::parse(in);
  EXPECT_EQ(j["kind"], "ball");
  EXPECT_EQ(j["version"], kArtifactVersion);
  std::ofstream(dir / "plain").put('x');
  EXPECT_THROW(persist_report(rep, dir / "plain" / "r.json", {}), IoError);
  fs::remove_all(dir);
}
