#include <doctest.h>

#include <json.hpp>

#include "morse2d/report.hpp"

using namespace morse2d;

TEST_SUITE("report") {
  TEST_CASE("replication reports are byte-identical across runs") {
    RunManifest m;
    m.command = "replicate";
    m.input_paths = {};
    m.parameters = {{"id", "harmonic-3"}};
    m.artifact_version = kVersion;
    m.wall_clock_seconds = std::nullopt;  // determinism contract

    const ReplicationCase rc1 = run_replication("harmonic-3");
    const ReplicationCase rc2 = run_replication("harmonic-3");
    const std::string s1 = render_replication_report(m, rc1);
    const std::string s2 = render_replication_report(m, rc2);
    CHECK(s1 == s2);
    CHECK(s1.find("\"wall_clock_seconds\": null") != std::string::npos);
  }

  TEST_CASE("report JSON parses and numbers round-trip at full precision") {
    RunManifest m;
    m.command = "analyze";
    m.parameters = {{"field", "x"}};
    m.tolerances = {{"tol_newton", 1e-10}};
    m.artifact_version = kVersion;
    m.wall_clock_seconds = 0.125;

    CriticalPointReport r;
    r.point = {{0.1234567890123456789, -2.0 / 3.0}, 1e-12, Isolation::isolated};
    r.hessian_eigenvalues = {-1.0 / 3.0, 7.0};
    r.cls = PointClass::degenerate_max;
    r.u_yy = -0.40275939570255297;
    r.n = 3;
    r.n_odd = true;
    r.alpha = 0.0;
    r.beta = -0.10511229171395447;
    r.chain_residuals = {0.0, 1e-17};

    const std::string text = render_analysis_report(m, "poly", std::nullopt, {{r}});
    const nlohmann::json parsed = nlohmann::json::parse(text);
    CHECK(parsed["critical_points"].size() == 1);
    const auto& p0 = parsed["critical_points"][0];
    CHECK(p0["u_yy"].get<double>() == r.u_yy);
    CHECK(p0["beta"].get<double>() == *r.beta);
    CHECK(p0["location"][1].get<double>() == -2.0 / 3.0);
    CHECK(p0["class"].get<std::string>() == "degenerate max");
    CHECK(p0["parity"].get<std::string>() == "odd");
    CHECK(p0["l"].is_null());
    CHECK(parsed["manifest"]["artifact_version"].get<std::string>() == kVersion);
    // spec-pinned lower_snake_case field names
    for (const char* key :
         {"hessian_eigenvalues", "rotation_angle", "pure_x_coeff_at_l", "inequality_1_8_slack",
          "equality_1_8_gap", "chain_residuals", "expansion_residual_slope", "theorem_violations"})
      CHECK(p0.contains(key));
  }
}
