#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "tridir/serialize.hpp"
#include "tridir/validator.hpp"

using namespace tridir;

namespace {

struct Output {
  int code;
  std::string out;
};

Output run(const std::string& args) {
  const std::string cmd = std::string(TRIDIR_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const char* name) { return std::string(TRIDIR_SAMPLES) + "/" + name; }

TEST(Cli, CheckMapFilter) {
  const Output tri = run("check " + sample("mapfilter.tri") + " --against 'some \\/ none' --system tri");
  EXPECT_EQ(tri.code, 0) << tri.out;
  EXPECT_EQ(tri.out.rfind("accept", 0), 0u) << tri.out;
  EXPECT_EQ(run("check " + sample("mapfilter.tri") + " --against 'some \\/ none'").code, 0);
  EXPECT_EQ(run("check " + sample("mapfilter.tri") + " --against some").code, 1);
}

TEST(Cli, TranslateApp) {
  const Output r = run("translate " + sample("app.tri"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "x0^ = f, x1^ = x, x2^ = y, x3^ = x1^ x2^, x4^ = x0^ x3^ + x4^\n"
            "let x0^ = f in let x1^ = x in let x2^ = y in let x3^ = x1^ x2^ in let x4^ = x0^ x3^ in x4^\n");
}

TEST(Cli, MeasureCanonical) {
  const Output r = run("measure " + sample("app.tri"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 0 0 0\n");
}

TEST(Cli, TranslatedJsonFeedsMeasureAndUnwind) {
  const std::string path = ::testing::TempDir() + "tridir_slack.json";
  {
    const Output r = run("translate " + sample("slack.tri") + " --json");
    ASSERT_EQ(r.code, 0);
    std::ofstream(path) << r.out;
  }
  EXPECT_EQ(run("measure " + path).out, "0 0 0 0\n");
  const Output u = run("unwind " + path);
  EXPECT_EQ(u.code, 0);
  EXPECT_EQ(u.out, "(fn x => x : P -> P, Q -> Q) y\n");
}

TEST(Cli, Eval) {
  const Output a = run("eval " + sample("church.tri"));
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "fn z => z");
  EXPECT_EQ(run("eval " + sample("loop.tri") + " --max-steps 50").code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("check " + sample("antivalue.tri") + " --against int --system tri").code, 1);
  EXPECT_EQ(run("check " + sample("antivalue.tri") + " --against int").code, 1);
  EXPECT_EQ(run("check " + sample("mapfilter.tri") + " --against 'some \\/ none' --fuel 3").code, 2);
  EXPECT_EQ(run("check " + sample("app.tri") + " --against Z").code, 3);
  EXPECT_EQ(run("check " + sample("missing.tri") + " --against P").code, 3);
  EXPECT_EQ(run("check " + sample("app.tri")).code, 3);
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("check " + sample("app.tri") + " --against R --system nope").code, 3);
}

TEST(Cli, DerivationJsonRevalidates) {
  for (const char* sys : {"tri", "let"}) {
    const Output r = run("check " + sample("principal.tri") + " --against B --json --derivation --system " + sys);
    ASSERT_EQ(r.code, 0) << r.out;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("verdict"), "accept");
    const Derivation d = derivation_from_json(j.at("derivation"));
    const auto v = validate(d, std::string(sys) == "tri" ? System::Tri : System::LetNormal);
    EXPECT_TRUE(v.ok) << v.error;
  }
}

TEST(Cli, DifferJsonIsStable) {
  const Output a = run("differ --size 4 --random 20 --seed 7 --json");
  const Output b = run("differ --size 4 --random 20 --seed 7 --json");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_TRUE(j.at("disagreements").empty());
  EXPECT_GT(j.at("cases").get<std::size_t>(), 0u);
}

TEST(Cli, SampleFilesAgree) {
  for (const char* f : {"app.tri", "principal.tri", "slack.tri", "ctxanno.tri", "mapfilter.tri"}) {
    for (const char* sys : {"tri", "let"}) {
      const Output r = run("check " + sample(f) + " --system " + sys + " --against " +
                        (std::string(f) == "app.tri"         ? "R"
                         : std::string(f) == "principal.tri" ? "B"
                         : std::string(f) == "slack.tri"     ? "P"
                         : std::string(f) == "ctxanno.tri"   ? "'(P -> P) /\\ (Q -> Q)'"
                                                             : "'some \\/ none'"));
      EXPECT_EQ(r.code, 0) << f << " " << sys << ": " << r.out;
    }
  }
}

}  // namespace
