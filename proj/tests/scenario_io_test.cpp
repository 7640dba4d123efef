#include "support.hpp"

#include "agm/json_io.hpp"
#include "agm/objects.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace agm;
using namespace testing_support;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
  try {
    scenario_from_string(text);
  } catch (const validation_error& e) {
    return e.what();
  }
  return "";
}

json general_json() { return to_json(gen_general_scenario(2, 1, 11)); }

}  // namespace

TEST(PolyJson, Format) {
  const PolyField p = frac(-3, 2) * x(2, 0) * x(2, 0) * x(2, 1) + constant(2, 5);
  const json j = to_json(p);
  ASSERT_EQ(j["terms"].size(), 2u);
  bool saw_cubic = false;
  for (const auto& t : j["terms"]) {
    if (t["exps"] == json::array({2, 1})) {
      saw_cubic = true;
      EXPECT_EQ(t["coef"], "-3/2");
    } else {
      EXPECT_EQ(t["exps"], json::array({0, 0}));
      EXPECT_EQ(t["coef"], "5");
    }
  }
  EXPECT_TRUE(saw_cubic);
  EXPECT_EQ(poly_from_json(j, 2, "$"), p);
  EXPECT_EQ(to_json(PolyField::constant(3, 0))["terms"], json::array());
}

TEST(ScenarioJson, RoundTrip) {
  for (const Scenario& s : {gen_general_scenario(3, 2, 1), gen_pi3_scenario(3, 2, 1, 2), gen_pi3_scenario(2, 2, 2, 3)}) {
    const Scenario back = scenario_from_string(scenario_to_string(s));
    EXPECT_TRUE(same_scenario(s, back));
    EXPECT_EQ(scenario_to_string(back), scenario_to_string(s));
  }
}

TEST(ScenarioJson, ByteIdenticalForSameSeed) {
  EXPECT_EQ(scenario_to_string(gen_pi3_scenario(4, 2, 1, 9)), scenario_to_string(gen_pi3_scenario(4, 2, 1, 9)));
  EXPECT_NE(scenario_to_string(gen_general_scenario(2, 2, 9)), scenario_to_string(gen_general_scenario(2, 2, 10)));
}

TEST(ScenarioJson, ExplicitImageConnectionSurvives) {
  Scenario s = gen_general_scenario(2, 1, 5);
  s.L_bar = Connection(Gen(6).grid(2, 1, 2, 1));
  const Scenario back = scenario_from_string(scenario_to_string(s));
  ASSERT_TRUE(back.L_bar);
  EXPECT_EQ(back.L_bar->coefficients(), s.L_bar->coefficients());
}

TEST(ScenarioJson, ErrorsNameTheField) {
  json j = general_json();
  j["dimension"] = 9;
  EXPECT_NE(error_of(j.dump()).find("$.dimension"), std::string::npos);

  j = general_json();
  j.erase("connection");
  EXPECT_NE(error_of(j.dump()).find("$.connection"), std::string::npos);

  j = general_json();
  j["connection"]["components"][3]["terms"] = json::array({{{"exps", {0, 0}}, {"coef", "1/0"}}});
  EXPECT_NE(error_of(j.dump()).find("$.connection.components[3].terms[0].coef"), std::string::npos);

  j = general_json();
  j["connection"]["components"][0]["terms"] = json::array({{{"exps", {0}}, {"coef", "1"}}});
  EXPECT_NE(error_of(j.dump()).find("$.connection.components[0].terms[0].exps"), std::string::npos);

  j = general_json();
  j["mapping"]["tau"]["valence"] = {0, 2};
  EXPECT_NE(error_of(j.dump()).find("$.mapping.tau.valence"), std::string::npos);

  j = general_json();
  j["mapping"]["type"] = "pi4";
  EXPECT_NE(error_of(j.dump()).find("$.mapping.type"), std::string::npos);

  j = general_json();
  j["theta_selectors"][0] = {1, 3, 1};
  EXPECT_NE(error_of(j.dump()).find("$.theta_selectors[0][1]"), std::string::npos);

  j = general_json();
  j["family_coefficients"]["w"] = 2;
  EXPECT_NE(error_of(j.dump()).find("$.family_coefficients.w"), std::string::npos);

  j = general_json();
  j["mapping"]["omega"]["components"][1]["terms"] = json::array({{{"exps", {0, 0}}, {"coef", "1"}}});
  EXPECT_NE(error_of(j.dump()).find("$.mapping"), std::string::npos);

  json p = to_json(gen_pi3_scenario(2, 1, 1, 1));
  p["mapping"]["kind"] = 3;
  EXPECT_NE(error_of(p.dump()).find("$.mapping.kind"), std::string::npos);

  EXPECT_EQ(error_of("{").rfind("$", 0), 0u);
}

TEST(ScenarioJson, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "agm_scenario_io_test.json";
  const Scenario s = gen_pi3_scenario(3, 1, 2, 21);
  save_text(path.string(), scenario_to_string(s));
  EXPECT_TRUE(same_scenario(load_scenario(path.string()), s));
  std::filesystem::remove(path);
  EXPECT_THROW(load_scenario(path.string()), std::runtime_error);
}

TEST(ReportJson, Shape) {
  SuiteOptions opt;
  opt.sabotage = Sabotage{};
  const SuiteReport r = run_suite("general", 2, 1, 4, opt);
  const json j = to_json(r);
  EXPECT_EQ(j["suite"], "general");
  EXPECT_EQ(j["dimension"], 2);
  EXPECT_EQ(j["trials"], 1);
  EXPECT_EQ(j["summary"]["pass"], r.passed());
  EXPECT_EQ(j["summary"]["fail"], r.failed());
  ASSERT_EQ(j["results"].size(), r.results.size());
  std::size_t fails = 0;
  for (const auto& e : j["results"]) {
    ASSERT_TRUE(e["check_id"].is_string());
    ASSERT_TRUE(e["seed"].is_number_unsigned());
    ASSERT_TRUE(e["invariance"].is_string());
    if (e["status"] == "fail") {
      ++fails;
      const json& w = e.at("witness");
      EXPECT_TRUE(w["index"].is_array());
      EXPECT_NE(w["unbarred"], w["barred"]);
      EXPECT_EQ(w["point"].size(), 2u);
    } else {
      EXPECT_EQ(e["status"], "pass");
      EXPECT_FALSE(e.contains("witness"));
    }
  }
  EXPECT_GT(fails, 0u);
  EXPECT_EQ(fails, r.failed());
}

TEST(Objects, CurvatureOfFlatConnectionVanishes) {
  Scenario s = gen_general_scenario(3, 2, 2);
  s.L = Connection(TensorGrid::of_valence(3, 1, 2));
  EXPECT_TRUE(evaluate_object(s, "R", false).is_zero());
  EXPECT_TRUE(evaluate_object(s, "Ricci", false).is_zero());
}

TEST(Objects, FamilyWithZeroCoefficientsIsCurvature) {
  Scenario s = gen_general_scenario(2, 2, 3);
  s.fc = FamilyCoefficients{};
  EXPECT_EQ(evaluate_object(s, "K", false), evaluate_object(s, "R", false));
  EXPECT_EQ(evaluate_object(s, "Kij", true), evaluate_object(s, "Ricci", true));
}

TEST(Objects, SidesAgreeOnInvariants) {
  const Scenario g = gen_general_scenario(2, 2, 8);
  for (const std::string id : {"T_assoc", "W_assoc", "T_tor", "theta[121]", "Theta_mnj", "W_fam[112,221]"})
    EXPECT_FALSE(check_equality(evaluate_object(g, id, false), evaluate_object(g, id, true), CheckMode::polynomial))
        << id;
  const Scenario p = gen_pi3_scenario(3, 2, 1, 8);
  for (const std::string id : {"pi3_T", "pi3_Wc", "pi3_calW[211,122]"})
    EXPECT_FALSE(check_equality(evaluate_object(p, id, false), evaluate_object(p, id, true), CheckMode::origin))
        << id;
  EXPECT_EQ(evaluate_object(p, "L_anti", false), evaluate_object(p, "L_anti", true));
}

TEST(Objects, ShapesMatchValence) {
  const Scenario p = gen_pi3_scenario(2, 1, 1, 4);
  EXPECT_EQ(evaluate_object(p, "pi3_s", false).lower_count(), 2u);
  EXPECT_EQ(evaluate_object(p, "pi3_X", false).rank(), 2u);
  EXPECT_EQ(evaluate_object(p, "pi3_Wddd", true).rank(), 4u);
  EXPECT_EQ(evaluate_object(p, "Ricci", false).rank(), 2u);
}

TEST(Objects, Rejections) {
  const Scenario g = gen_general_scenario(2, 1, 1);
  try {
    evaluate_object(g, "Q", false);
    FAIL();
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    for (const auto& id : object_ids()) EXPECT_NE(msg.find(id), std::string::npos) << id;
  }
  EXPECT_THROW(evaluate_object(g, "theta[12]", false), validation_error);
  EXPECT_THROW(evaluate_object(g, "theta[121,121]", false), validation_error);
  EXPECT_THROW(evaluate_object(g, "W_fam[121]", false), validation_error);
  EXPECT_THROW(evaluate_object(g, "pi3_T", false), validation_error);
  EXPECT_THROW(evaluate_object(gen_pi3_scenario(2, 1, 2, 1), "pi3_X", false), validation_error);
  EXPECT_NO_THROW(evaluate_object(gen_pi3_scenario(2, 1, 2, 1), "pi3_Wd", false));
}
