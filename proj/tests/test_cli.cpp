#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>

#include "fixtures.hpp"
#include "gestauth/trace.hpp"
#include "support.hpp"

using namespace gestauth;
using testing_support::TempDir;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(GESTAUTH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Cli, EnrollVerifyLockout) {
  TempDir dir("cli");
  const auto e = fixtures::enrolled(1, 51);
  const auto samples = dir.path() / "samples";
  std::filesystem::create_directories(samples);
  for (std::size_t i = 0; i < e.owner.size(); ++i) save_sample((samples / ("s" + std::to_string(i) + ".json")).string(), e.owner[i]);
  save_sample((dir.path() / "good.json").string(), e.owner_test.front());
  save_sample((dir.path() / "bad.json").string(), e.impostor.front());
  write(dir.path() / "cfg.json", R"({"max_iterations": 3000})");
  const auto tmpl = dir.path() / "t.json";
  const auto store = dir.path() / "store";

  ASSERT_EQ(run("enroll --user u --samples " + q(samples) + " --synthetic 20 --config " + q(dir.path() / "cfg.json") +
                " -o " + q(tmpl)),
            0);
  const std::string common = "verify --user u --template " + q(tmpl) + " --store " + q(store) + " --sample ";
  EXPECT_EQ(run(common + q(dir.path() / "good.json")), 0);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(run(common + q(dir.path() / "bad.json")), 1);
  EXPECT_EQ(run(common + q(dir.path() / "good.json")), 2);
  EXPECT_EQ(run("inspect --sample " + q(dir.path() / "good.json")), 0);
}

TEST(Cli, ErrorsExitThree) {
  TempDir dir("cli");
  write(dir.path() / "broken.json", "{\"version\": 1");
  save_sample((dir.path() / "s.json").string(), testing_support::arc_sample("s"));
  EXPECT_EQ(run("verify --user u --template " + q(dir.path() / "broken.json") + " --store " + q(dir.path() / "st") +
                " --sample " + q(dir.path() / "s.json")),
            3);
  EXPECT_EQ(run("inspect --sample " + q(dir.path() / "missing.json")), 3);
  EXPECT_NE(run("attack --victim x --level 9 -o y"), 0);
}

TEST(Cli, SynthAttackEval) {
  TempDir dir("cli");
  write(dir.path() / "spec.json", R"({"personas": 2, "curves_per_persona": 1, "samples_per_curve": 7, "multi_curves_per_persona": 0})");
  const auto corpus = dir.path() / "corpus.jsonl";
  ASSERT_EQ(run("synth --spec " + q(dir.path() / "spec.json") + " -o " + q(corpus)), 0);
  const SampleCorpus c = load_corpus(corpus.string());
  EXPECT_EQ(c.samples.size(), 14u);

  const auto victim = dir.path() / "victim";
  std::filesystem::create_directories(victim);
  for (int i = 0; i < 4; ++i) save_sample((victim / (c.samples[static_cast<std::size_t>(i)].sample_id + ".json")).string(), c.samples[static_cast<std::size_t>(i)]);
  const auto forged = dir.path() / "forged";
  EXPECT_EQ(run("attack --victim " + q(victim) + " --level 4 --count 3 -o " + q(forged)), 0);
  EXPECT_EQ(load_sample_dir(forged.string()).size(), 3u);
  EXPECT_EQ(run("attack --victim " + q(victim) + " --level 3 --observations 1 -o " + q(forged)), 3);

  write(dir.path() / "exp.json", R"({"enroll": {"max_iterations": 500}, "ks": {"enabled": false}})");
  const auto out = dir.path() / "report";
  EXPECT_EQ(run("eval --corpus " + q(corpus) + " --config " + q(dir.path() / "exp.json") + " -o " + q(out)), 0);
  EXPECT_TRUE(std::filesystem::exists(out / "report.json"));
}
