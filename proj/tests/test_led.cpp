#include <doctest.h>

#include <fstream>
#include <sstream>

#include "medresp/error.hpp"
#include "medresp/led.hpp"

using namespace medresp;

TEST_CASE("daily LED examples") {
  const auto& table = default_led_table();
  const std::vector<RegimenItem> levodopa{{"levodopa", 100, 3}};
  CHECK(daily_led(levodopa, table) == doctest::Approx(300.0));
  const std::vector<RegimenItem> prami{{"pramipexole", 0.5, 3}};
  CHECK(daily_led(prami, table) == doctest::Approx(150.0));
  const std::vector<RegimenItem> mixed{{"levodopa", 100, 3}, {"levodopa_cr", 200, 2}, {"entacapone", 200, 5}};
  CHECK(daily_led(mixed, table) == doctest::Approx(300.0 + 300.0 + 0.33 * 700.0));
  const std::vector<RegimenItem> comt_only{{"entacapone", 200, 5}};
  CHECK(daily_led(comt_only, table) == 0.0);
  CHECK(daily_led(std::vector<RegimenItem>{}, table) == 0.0);
  const std::vector<RegimenItem> unknown{{"aspirin", 100, 1}};
  CHECK_THROWS_AS(daily_led(unknown, table), ContractError);
}

TEST_CASE("shipped table equals the built-in defaults") {
  const auto file = read_led_table_file(std::string(MEDRESP_DATA_DIR) + "/led_table.csv");
  const auto& builtin = default_led_table();
  REQUIRE(file.size() == builtin.size());
  for (const auto& [drug, e] : builtin) {
    REQUIRE(file.count(drug) == 1);
    CHECK(file.at(drug).factor == e.factor);
    CHECK(file.at(drug).rule == e.rule);
  }
}

TEST_CASE("LED table parsing") {
  std::istringstream ok("drug,factor,rule\nfoo,2.5,plain\nbar,0.2,multiplies_levodopa\n");
  const auto t = read_led_table(ok);
  CHECK(t.at("foo").factor == 2.5);
  CHECK(t.at("bar").rule == LedRule::multiplies_levodopa);
  std::istringstream bad_header("name,factor,rule\nfoo,1,plain\n");
  CHECK_THROWS_AS(read_led_table(bad_header), InputError);
  std::istringstream bad_rule("drug,factor,rule\nfoo,1,sometimes\n");
  CHECK_THROWS_AS(read_led_table(bad_rule), InputError);
  std::istringstream dup("drug,factor,rule\nfoo,1,plain\nfoo,2,plain\n");
  CHECK_THROWS_AS(read_led_table(dup), InputError);
  std::istringstream negative("drug,factor,rule\nfoo,-1,plain\n");
  CHECK_THROWS_AS(read_led_table(negative), InputError);
}

TEST_CASE("regimen files round trip") {
  std::istringstream in(
      "participant_id,drug,dose_mg,times_per_day\n"
      "b,levodopa,100,4\n"
      "a,,,\n"
      "b,rasagiline,1,1\n");
  const auto r = read_regimens(in);
  CHECK(r.order == std::vector<std::string>{"b", "a"});
  CHECK(r.items.at("a").empty());
  REQUIRE(r.items.at("b").size() == 2);
  CHECK(daily_led(r.items.at("b"), default_led_table()) == doctest::Approx(500.0));
  std::ostringstream out;
  write_regimens(out, r);
  std::istringstream again(out.str());
  const auto r2 = read_regimens(again);
  CHECK(r2.order == r.order);
  CHECK(r2.items.at("b")[1].drug == "rasagiline");
  CHECK(r2.items.at("b")[0].dose_mg == 100.0);
}
