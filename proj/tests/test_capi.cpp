#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lipspace.h"

TEST_CASE("model lifecycle through the C surface") {
  lipspace_model* m = nullptr;
  REQUIRE(lipspace_model_create("fan:8", &m) == LIPSPACE_OK);
  REQUIRE(m != nullptr);
  CHECK(lipspace_model_size(m) == 9);
  CHECK(lipspace_model_delta(m) == doctest::Approx(0.04));
  CHECK(lipspace_model_fine_dist(m, 0, 1) == doctest::Approx(0.5));
  CHECK(lipspace_model_coarse_dist(m, 1, 2) == doctest::Approx(0.08));
  CHECK(lipspace_model_fine_dist(m, 0, 99) == -1.0);

  char* json_text = nullptr;
  REQUIRE(lipspace_model_to_json(m, &json_text) == LIPSPACE_OK);
  lipspace_model* back = nullptr;
  REQUIRE(lipspace_model_from_json(json_text, &back) == LIPSPACE_OK);
  CHECK(lipspace_model_size(back) == 9);
  CHECK(lipspace_model_fine_dist(back, 1, 2) ==
        lipspace_model_fine_dist(m, 1, 2));
  lipspace_string_free(json_text);
  lipspace_model_free(back);
  lipspace_model_free(m);
}

TEST_CASE("errors carry codes and a readable message") {
  lipspace_model* m = nullptr;
  CHECK(lipspace_model_create("banach:3", &m) == LIPSPACE_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(lipspace_last_error()) > 0);
  CHECK(lipspace_model_create(nullptr, &m) == LIPSPACE_ERR_INVALID_ARGUMENT);
  CHECK(lipspace_model_from_json("{not json", &m) != LIPSPACE_OK);
}

TEST_CASE("field operations match the line oracle") {
  lipspace_model* m = nullptr;
  REQUIRE(lipspace_model_create("interval_grid:5", &m) == LIPSPACE_OK);
  std::vector<double> values{0.0, 0.25, 0.5, 0.75, 1.0};
  double L = 0;
  REQUIRE(lipspace_lip_constant(m, values.data(), values.size(), 0, &L) ==
          LIPSPACE_OK);
  CHECK(L == doctest::Approx(1.0));

  std::vector<size_t> subset{0, 4};
  std::vector<double> data{0.0, 1.0};
  std::vector<double> out(5, -1.0);
  REQUIRE(lipspace_mcshane_extend(m, subset.data(), data.data(), 2, 1.0, 0.0,
                                  1.0, out.data()) == LIPSPACE_OK);
  for (int i = 0; i < 5; ++i) CHECK(out[i] == doctest::Approx(0.25 * i));
  // Non-Lipschitz data is refused with the precondition code.
  std::vector<size_t> close_pair{0, 1};
  CHECK(lipspace_mcshane_extend(m, close_pair.data(), data.data(), 2, 1.0, 0.0,
                                1.0, out.data()) == LIPSPACE_ERR_PRECONDITION);

  size_t count = 0;
  size_t center = 2;
  REQUIRE(lipspace_closed_ball(m, &center, 1, 0.25, nullptr, 0, &count) ==
          LIPSPACE_OK);
  CHECK(count == 3);
  std::vector<size_t> members(count);
  REQUIRE(lipspace_closed_ball(m, &center, 1, 0.25, members.data(),
                               members.size(), &count) == LIPSPACE_OK);
  CHECK(members == std::vector<size_t>{1, 2, 3});
  lipspace_model_free(m);
}

TEST_CASE("derivation verdicts through the C surface") {
  lipspace_model* fan = nullptr;
  REQUIRE(lipspace_model_create("fan:8", &fan) == LIPSPACE_OK);
  int finite = -1, index = -1;
  REQUIRE(lipspace_szlenk_index(fan, 1.0, 0.05, &finite, &index) == LIPSPACE_OK);
  CHECK(finite == 1);
  CHECK(index == 2);
  CHECK(lipspace_szlenk_index(fan, 1.0, 0.5, &finite, &index) ==
        LIPSPACE_ERR_RESOLUTION_TOO_COARSE);
  lipspace_model_free(fan);

  lipspace_model* tree = nullptr;
  REQUIRE(lipspace_model_create("cantor:3", &tree) == LIPSPACE_OK);
  REQUIRE(lipspace_szlenk_index(tree, 1.0, 0.25, &finite, &index) == LIPSPACE_OK);
  CHECK(finite == 0);
  CHECK(index == 8);  // fixpoint size
  lipspace_model_free(tree);
}

TEST_CASE("norm handles") {
  lipspace_norm* n = nullptr;
  REQUIRE(lipspace_norm_preset("hexagon", &n) == LIPSPACE_OK);
  double value = 0;
  double x[2] = {0.0, 1.0};
  REQUIRE(lipspace_norm_eval(n, x, 2, &value) == LIPSPACE_OK);
  CHECK(value == doctest::Approx(2 / std::sqrt(3.0)));
  int faces = 0;
  REQUIRE(lipspace_norm_face_count(n, &faces) == LIPSPACE_OK);
  CHECK(faces == 6);
  lipspace_norm_free(n);
  CHECK(lipspace_norm_preset("nope", &n) == LIPSPACE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("mazur map through the C surface") {
  double x[3] = {0.5, -0.25, 0.0};
  double y[3];
  REQUIRE(lipspace_mazur_map(x, 3, 2.0, 1.0, y) == LIPSPACE_OK);
  CHECK(y[0] == doctest::Approx(0.25));
  CHECK(y[1] == doctest::Approx(-0.0625));
  CHECK(y[2] == 0.0);
  CHECK(lipspace_mazur_map(x, 3, 0.5, 1.0, y) == LIPSPACE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run entry point and exit statuses") {
  char* report = nullptr;
  int status = -1;
  const char* cfg =
      R"({"command":"szlenk","params":{"model":"fan:8","eps":1.0,"delta":0.05}})";
  REQUIRE(lipspace_run_json(cfg, &report, &status) == LIPSPACE_OK);
  CHECK(status == 0);
  auto j = nlohmann::json::parse(report);
  CHECK(j["verdict"] == "Finite");
  CHECK(j["index"] == 2);
  lipspace_string_free(report);

  const char* bad = R"({"command":"frobnicate","params":{}})";
  REQUIRE(lipspace_run_json(bad, &report, &status) == LIPSPACE_OK);
  CHECK(status == 2);
  lipspace_string_free(report);

  CHECK(lipspace_run_json("{oops", &report, &status) ==
        LIPSPACE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("command table covers every public operation once") {
  char* table = nullptr;
  REQUIRE(lipspace_list_commands(&table) == LIPSPACE_OK);
  auto rows = nlohmann::json::parse(table);
  lipspace_string_free(table);
  CHECK(rows.size() == 27);
  std::vector<std::string> ops;
  for (const auto& row : rows) ops.push_back(row["operation"]);
  std::sort(ops.begin(), ops.end());
  CHECK(std::adjacent_find(ops.begin(), ops.end()) == ops.end());
  bool has_c0 = false, has_quotient = false;
  for (const auto& row : rows) {
    if (row["command"] == "c0-construct") has_c0 = true;
    if (row["command"] == "quotient-check") has_quotient = true;
  }
  CHECK(has_c0);
  CHECK(has_quotient);
}
