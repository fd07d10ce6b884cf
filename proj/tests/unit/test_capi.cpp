#include <cmath>
#include <cstring>
#include <string>

#include "cbl/cbl.h"
#include "doctest.h"

namespace {
std::string take(char* s) {
  std::string out = s ? s : "";
  cbl_string_free(s);
  return out;
}
}  // namespace

TEST_CASE("params lifecycle and validation") {
  cbl_params* p = nullptr;
  REQUIRE(cbl_params_create(10, 0.2, 0.25, 0, 0.4, &p) == CBL_OK);
  REQUIRE(p != nullptr);
  cbl_params_destroy(p);

  p = reinterpret_cast<cbl_params*>(0x1);
  CHECK(cbl_params_create(10, 0.2, 1.5, 0, 0.4, &p) == CBL_ERR_DOMAIN);
  CHECK(p == nullptr);
  CHECK(std::string(cbl_last_error()).find("eta") != std::string::npos);
  CHECK(cbl_params_create(10, 0.2, 0.0, 0, 0.4, nullptr) == CBL_ERR_NULL_ARG);
  cbl_params_destroy(nullptr);
}

TEST_CASE("evaluate") {
  cbl_params* p = nullptr;
  REQUIRE(cbl_params_create(10, 0.2, 0.25, 0, 0.4, &p) == CBL_OK);
  cbl_observables o{};
  REQUIRE(cbl_evaluate(p, &o) == CBL_OK);
  CHECK(o.below_threshold == 1);
  CHECK(o.var_minus_out == doctest::Approx(0.270685120938971533).epsilon(1e-13));
  CHECK(o.lambda_minus == doctest::Approx(2.7));
  CHECK(std::fabs(o.squeeze_pct_out - 71.0) <= 3.0);
  const auto json = [&] {
    char* s = nullptr;
    REQUIRE(cbl_eval_json(p, &s) == CBL_OK);
    return take(s);
  }();
  CHECK(json.find("\"squeeze_pct_out\"") != std::string::npos);
  cbl_params_destroy(p);

  REQUIRE(cbl_params_create(10, 0.2, -0.1, 0, 0, &p) == CBL_OK);
  REQUIRE(cbl_evaluate(p, &o) == CBL_OK);
  CHECK(o.below_threshold == 0);
  CHECK(o.lambda_minus == doctest::Approx(-0.8));
  cbl_params_destroy(p);

  CHECK(cbl_evaluate(nullptr, &o) == CBL_ERR_NULL_ARG);
}

TEST_CASE("sweeps through handles") {
  cbl_sweep* s = nullptr;
  REQUIRE(cbl_sweep_create(&s) == CBL_OK);
  CHECK(cbl_sweep_set_fixed(s, "A", 10) == CBL_OK);
  CHECK(cbl_sweep_set_fixed(s, "kappa", 0.2) == CBL_OK);
  CHECK(cbl_sweep_set_fixed(s, "omega", 0) == CBL_OK);
  CHECK(cbl_sweep_set_fixed(s, "N", 0.4) == CBL_OK);
  CHECK(cbl_sweep_set_fixed(s, "gamma", 1) == CBL_ERR_SPEC);
  double v = 0.0;
  CHECK(cbl_sweep_get_fixed(s, "A", &v) == CBL_OK);
  CHECK(v == 10.0);
  CHECK(cbl_sweep_get_fixed(s, "eta", &v) == CBL_ERR_SPEC);

  char* csv = nullptr;
  CHECK(cbl_sweep_run_csv(s, &csv) == CBL_ERR_SPEC);  // no axis yet
  CHECK(cbl_sweep_set_axis(s, "eta", 0.25, 0.25, 0.1) == CBL_OK);
  CHECK(cbl_sweep_set_outputs(s, "var_minus_out,below_threshold") == CBL_OK);
  CHECK(cbl_sweep_set_outputs(s, "var_minus_out,bogus") == CBL_ERR_SPEC);
  REQUIRE(cbl_sweep_run_csv(s, &csv) == CBL_OK);
  CHECK(take(csv) == "A,kappa,eta,omega,N,var_minus_out,below_threshold\n"
                     "10,0.2,0.25,0,0.4,0.270685120939,true\n");

  // Fixing the axis parameter removes the axis.
  CHECK(cbl_sweep_set_fixed(s, "eta", 0.25) == CBL_OK);
  CHECK(cbl_sweep_run_csv(s, &csv) == CBL_ERR_SPEC);
  cbl_sweep_destroy(s);

  REQUIRE(cbl_sweep_from_json(R"({"fixed": {"A": 0, "kappa": 0.5, "eta": 0, "N": 0},
      "axis": "omega", "grid": [0, 1, 0.5], "outputs": ["n_out"]})",
                              &s) == CBL_OK);
  REQUIRE(cbl_sweep_run_csv(s, &csv) == CBL_OK);
  CHECK(take(csv) == "A,kappa,eta,omega,N,n_out\n0,0.5,0,0,0,0\n0,0.5,0,0.5,0,0\n0,0.5,0,1,0,0\n");
  cbl_sweep_destroy(s);

  s = reinterpret_cast<cbl_sweep*>(0x1);
  CHECK(cbl_sweep_from_json("{", &s) == CBL_ERR_SPEC);
  CHECK(s == nullptr);
}

TEST_CASE("figures and reports") {
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(cbl_figure_csv("fig2", &a) == CBL_OK);
  REQUIRE(cbl_figure_csv("fig2", &b) == CBL_OK);
  CHECK(std::strcmp(a, b) == 0);
  cbl_string_free(a);
  cbl_string_free(b);
  CHECK(cbl_figure_csv("fig1", &a) == CBL_ERR_SPEC);
  REQUIRE(cbl_figure_names(&a) == CBL_OK);
  CHECK(take(a) == "fig2,fig3,fig4,fig5,fig6,fig7");
  REQUIRE(cbl_consistency_report(&a) == CBL_OK);
  CHECK(take(a).find("(c)") != std::string::npos);
}

TEST_CASE("status messages") {
  for (int s = CBL_OK; s <= CBL_ERR_INTERNAL; ++s) {
    CHECK(std::strlen(cbl_status_message(static_cast<cbl_status>(s))) > 0);
  }
  int passed = 0;
  char* r = nullptr;
  CHECK(cbl_verify(static_cast<cbl_scope>(9), CBL_PROFILE_DEFAULT, &r, &passed) == CBL_ERR_SPEC);
  CHECK(cbl_verify(CBL_SCOPE_ALL, CBL_PROFILE_DEFAULT, nullptr, &passed) == CBL_ERR_NULL_ARG);
}
