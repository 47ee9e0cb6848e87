#include <albert/scenario.hpp>

#include <gtest/gtest.h>

#include <json.hpp>

using namespace albert;

namespace {

const char* kFirst = R"(# comment line
F = Q
D = matrix3(F)
J = first_tits(D, lambda=2)
g = diag(1,2,3)
run axioms(J, samples=3, seed=1)
run fundamental(J, pairs=2, seed=2)
run certify(aut_ext_D(J, g=g, h=diag(6,1,1)), expect=automorphism)
run certify(homothety(J, 2), nu=8)
)";

Error error_of(std::string_view text) {
  try {
    Scenario::parse(text, "t.alb");
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(Errc::Unsupported, "none");
}

}  // namespace

TEST(Scenario, RunsOnlyTheDirectivesOfACommand) {
  const Scenario s = Scenario::parse(kFirst, "t.alb");
  EXPECT_EQ(s.directive_count(), 4u);
  const Report axioms = s.run(Command::CheckAxioms);
  EXPECT_TRUE(axioms.pass()) << axioms.to_text();
  EXPECT_EQ(axioms.entries.front().line, 6u);
  const Report maps = s.run(Command::VerifyMap);
  EXPECT_TRUE(maps.pass()) << maps.to_text();
  ASSERT_EQ(maps.entries.size(), 2u);
  EXPECT_EQ(maps.entries[0].check.id, "aut_ext_D");
  EXPECT_THROW(s.run(Command::BuildCert), Error);
}

TEST(Scenario, ParseErrorsCarryLineAndColumn) {
  const Error e = error_of("D = matrix3(Q)\nJ = first_tits(D, lambda=2\nrun degree(J)\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
  EXPECT_NE(std::string(e.what()).find("line 2, column 1"), std::string::npos) << e.what();
  EXPECT_EQ(error_of("D = matrix3(Q)\nrun nonsense(D)\n").code(), Errc::ParseError);
  EXPECT_EQ(error_of("D = matrix3(Q)\nrun degree(D, bogus=1)\n").code(), Errc::ParseError);
  EXPECT_EQ(error_of("D = matrix3(Q)\nD = matrix3(Q)\n").code(), Errc::ParseError);
}

TEST(Scenario, UnresolvedReferences) {
  EXPECT_EQ(error_of("run degree(first_tits(E, lambda=2))\n").code(), Errc::UnresolvedReference);
  EXPECT_EQ(error_of("D = matrix3(Q)\nJ = first_tits(D, lambda=2)\nrun certify(homothety(K, 2))\n").code(),
            Errc::UnresolvedReference);
}

TEST(Scenario, ConstructionSideConditionsCheckedAtParseTime) {
  EXPECT_EQ(error_of("D = matrix3(Q)\nJ = first_tits(D, lambda=0)\n").code(), Errc::ZeroLambda);
  EXPECT_EQ(error_of("K = Q[s]/(s^2+1)\nB = matrix3(K)\nJ = second_tits(B, conjtrans, u=one, mu=2)\n").code(),
            Errc::InadmissiblePair);
}

TEST(Scenario, SampledDirectivesNeedASeed) {
  const Scenario s = Scenario::parse("D = matrix3(Q)\nJ = first_tits(D, lambda=2)\nrun axioms(J, samples=2)\n");
  try {
    s.run(Command::CheckAxioms);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidArgument);
    EXPECT_EQ(exit_status(e.code()), 4);
  }
  RunOptions o;
  o.seed = 5;
  EXPECT_TRUE(s.run(Command::CheckAxioms, o).pass());
}

TEST(Scenario, ReportsAreDeterministicAndAgree) {
  const Scenario s = Scenario::parse(kFirst, "t.alb");
  RunOptions par;
  par.parallel = true;
  const Report a = s.run(Command::CheckAxioms), b = s.run(Command::CheckAxioms, par);
  EXPECT_EQ(a.to_machine(), b.to_machine());
  EXPECT_EQ(a.to_text(), b.to_text());

  const auto j = nlohmann::json::parse(a.to_machine());
  EXPECT_EQ(j["command"], "check-axioms");
  EXPECT_EQ(j["checks"].size(), a.entries.size());
  EXPECT_EQ(j["summary"]["verdict"], "pass");
  EXPECT_NE(a.to_text().find("summary: " + std::to_string(a.entries.size())), std::string::npos);

  RunOptions other;
  other.seed = 99;
  EXPECT_NE(s.run(Command::CheckAxioms, other).to_machine(), a.to_machine());
}

TEST(Scenario, FailedExpectationFailsTheReport) {
  const Scenario s = Scenario::parse("D = matrix3(Q)\nJ = first_tits(D, lambda=2)\nrun certify(homothety(J, 2), nu=9)\n");
  const Report r = s.run(Command::VerifyMap);
  EXPECT_FALSE(r.pass());
  EXPECT_NE(r.to_text().find("FAIL"), std::string::npos);
}

TEST(Scenario, ConstructionDescriptorsRoundTrip) {
  for (const char* d : {"first_tits(matrix3(Q), lambda=2)", "first_tits(matrix3(F3), lambda=2)"}) {
    const JordanPtr j = parse_construction(d);
    EXPECT_EQ(j->describe(), d);
    EXPECT_EQ(parse_construction(j->describe())->describe(), j->describe());
  }
  EXPECT_THROW(parse_construction("first_tits(matrix3(Q), lambda=0)"), Error);
}

TEST(Scenario, ExitStatusTable) {
  EXPECT_EQ(exit_status(Errc::ParseError), 2);
  EXPECT_EQ(exit_status(Errc::UnresolvedReference), 3);
  EXPECT_EQ(exit_status(Errc::IoError), 5);
  EXPECT_EQ(exit_status(Errc::ZeroLambda), 4);
  EXPECT_EQ(exit_status(Errc::InvalidArgument), 4);
}

TEST(Scenario, SampleBoundsAreDeclaredPerDirective) {
  const char* base = "D = matrix3(Q)\nJ = first_tits(D, lambda=2)\n";
  const Scenario narrow = Scenario::parse(std::string(base) + "run fundamental(J, pairs=2, seed=4, num_bound=1, den_bound=1)\n");
  const Scenario wide = Scenario::parse(std::string(base) + "run fundamental(J, pairs=2, seed=4, num_bound=9, den_bound=7)\n");
  const Report a = narrow.run(Command::CheckAxioms), b = wide.run(Command::CheckAxioms);
  EXPECT_TRUE(a.pass());
  EXPECT_TRUE(b.pass());
  EXPECT_EQ(error_of(std::string(base) + "run fundamental(J, seed=1, num_bound=0)\n").code(), Errc::InvalidArgument);
}
