#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cop/records.hpp"
#include "test_support.hpp"

using namespace cop;
using namespace coptest;

namespace {

Registry make_registry() {
  Registry reg;
  reg.datasets.emplace("ds", make_dataset("ds"));
  reg.problems.emplace(std::make_pair("ds", "p1"), make_problem("ds", "p1"));
  reg.problems.emplace(std::make_pair("ds", "p2"), make_problem("ds", "p2"));
  reg.price_sheets.emplace("sheet", make_sheet("sheet", "0.15", "0.60"));
  reg.strategies.emplace("m1", make_model("m1", "sheet"));
  return reg;
}

const char* kLine1 =
    R"({"strategy_id":"m1","dataset_id":"ds","problem_id":"p1","attempt_index":0,"correct":true,"input_tokens":100,"output_tokens":50})";
const char* kLine2 =
    R"({"strategy_id":"m1","dataset_id":"ds","problem_id":"p1","attempt_index":1,"correct":false,"input_tokens":120,"output_tokens":40})";
const char* kLine3 =
    R"({"strategy_id":"m1","dataset_id":"ds","problem_id":"p2","attempt_index":0,"correct":true,"input_tokens":90,"output_tokens":60})";

}  // namespace

TEST_CASE("ingest accepts well-formed lines") {
  Registry reg = make_registry();
  std::stringstream in;
  in << kLine1 << "\n" << kLine2 << "\n" << kLine3 << "\n";
  const IngestReport report = ingest_attempts(in, reg);
  CHECK(report.accepted == 3);
  CHECK(report.errors.empty());
  CHECK(reg.attempts.size() == 3);
}

TEST_CASE("negative token count is a per-line schema error") {
  Registry reg = make_registry();
  std::stringstream in;
  in << kLine1 << "\n"
     << R"({"strategy_id":"m1","dataset_id":"ds","problem_id":"p1","attempt_index":1,"correct":true,"input_tokens":-1,"output_tokens":0})"
     << "\n"
     << kLine3 << "\n";
  const IngestReport report = ingest_attempts(in, reg);
  CHECK(report.accepted == 2);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].line == 2);
}

TEST_CASE("duplicate triple rejected, replay idempotent") {
  Registry reg = make_registry();
  std::stringstream in;
  in << kLine1 << "\n" << kLine1 << "\n";
  const IngestReport report = ingest_attempts(in, reg);
  CHECK(report.accepted == 1);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].message.find("duplicate") != std::string::npos);
  CHECK(reg.attempts.size() == 1);

  // replaying the already-accepted line leaves state unchanged
  std::stringstream again(kLine1);
  const IngestReport replay = ingest_attempts(again, reg);
  CHECK(replay.accepted == 0);
  CHECK(reg.attempts.size() == 1);
}

TEST_CASE("unresolved foreign keys are per-line errors") {
  Registry reg = make_registry();
  std::stringstream in;
  in << R"({"strategy_id":"ghost","dataset_id":"ds","problem_id":"p1","attempt_index":0,"correct":true,"input_tokens":1,"output_tokens":1})"
     << "\n";
  const IngestReport report = ingest_attempts(in, reg);
  CHECK(report.accepted == 0);
  REQUIRE(report.errors.size() == 1);
  CHECK(report.errors[0].message.find("ghost") != std::string::npos);
}

TEST_CASE("unknown fields rejected") {
  Registry reg = make_registry();
  std::stringstream in;
  in << R"({"strategy_id":"m1","dataset_id":"ds","problem_id":"p1","attempt_index":0,"correct":true,"input_tokens":1,"output_tokens":1,"surprise":1})"
     << "\n";
  CHECK(ingest_attempts(in, reg).accepted == 0);
}

TEST_CASE("serialize/parse round-trips field-identically") {
  AttemptRecord r = make_attempt("m1", "ds", "p1", 4, true, 123, 456);
  r.extra_resources.emplace("tool_calls", Rational(3));
  r.cost_override = Money::parse("0.0125");
  r.wall_time_ms = 777;
  const AttemptRecord back = parse_attempt_line(serialize_attempt(r));
  CHECK(back.strategy_id == r.strategy_id);
  CHECK(back.dataset_id == r.dataset_id);
  CHECK(back.problem_id == r.problem_id);
  CHECK(back.attempt_index == r.attempt_index);
  CHECK(back.correct == r.correct);
  CHECK(back.input_tokens == r.input_tokens);
  CHECK(back.output_tokens == r.output_tokens);
  CHECK(back.extra_resources == r.extra_resources);
  CHECK(back.cost_override == r.cost_override);
  CHECK(back.wall_time_ms == r.wall_time_ms);
}

TEST_CASE("validate: empty registry is clean") {
  Registry reg;
  CHECK(validate_registry(reg).empty());
}

TEST_CASE("validate: dangling price sheet named") {
  Registry reg = make_registry();
  reg.strategies.at("m1").price_sheet_id = "nope";
  const auto violations = validate_registry(reg);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].entity == "strategy m1");
}

TEST_CASE("validate: multiple-choice dataset needs option_count") {
  Registry reg;
  reg.datasets.emplace("mc", make_dataset("mc", GraderKind::multiple_choice));
  const auto violations = validate_registry(reg);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("option_count") != std::string::npos);
}

TEST_CASE("validate: expert family/kind coupling and sentinel date") {
  Registry reg;
  Strategy bad = make_expert("ex");
  bad.release_date = Date{2024, 5, 1};
  reg.strategies.emplace("ex", bad);
  const auto violations = validate_registry(reg);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("epoch") != std::string::npos);
}

TEST_CASE("validate: unparseable numeric reference is a load-time violation") {
  Registry reg = make_registry();
  reg.problems.at({"ds", "p1"}).reference_answer = "banana";
  const auto violations = validate_registry(reg);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message.find("not numeric") != std::string::npos);
}
