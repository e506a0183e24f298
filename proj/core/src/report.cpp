#include "morse2d/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "morse2d/errors.hpp"
#include "morse2d/field_io.hpp"

namespace morse2d {

namespace {

using Json = nlohmann::ordered_json;

/// nlohmann prints shortest round-trip doubles; the report contract pins 17
/// significant digits, so numbers are re-rendered by this walker.
void dump17(const Json& j, std::ostream& os, int indent) {
  const std::string pad(size_t(indent) * 2, ' ');
  const std::string pad1(size_t(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        os << pad1 << Json(it.key()).dump() << ": ";
        dump17(it.value(), os, indent + 1);
        if (k + 1 < j.size()) os << ',';
        os << '\n';
      }
      os << pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (size_t k = 0; k < j.size(); ++k) {
        os << pad1;
        dump17(j[k], os, indent + 1);
        if (k + 1 < j.size()) os << ',';
        os << '\n';
      }
      os << pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      os << format17(v);
      return;
    }
    default: os << j.dump(); return;
  }
}

std::string dump_document(const Json& j) {
  std::ostringstream os;
  dump17(j, os, 0);
  os << '\n';
  return os.str();
}

Json manifest_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["input_paths"] = m.input_paths;
  Json params = Json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  j["parameters"] = params;
  Json tols = Json::object();
  for (const auto& [k, v] : m.tolerances) tols[k] = v;
  j["tolerances"] = tols;
  j["artifact_version"] = m.artifact_version;
  if (m.wall_clock_seconds)
    j["wall_clock_seconds"] = *m.wall_clock_seconds;
  else
    j["wall_clock_seconds"] = nullptr;
  j["output_paths"] = m.output_paths;
  return j;
}

Json index_json(const IndexResult& r) {
  Json j;
  j["value"] = r.value;
  j["radius"] = r.radius;
  j["samples"] = r.samples;
  j["min_gradient_norm"] = r.min_gradient_norm;
  j["certified"] = r.certified;
  return j;
}

Json point_report_json(const CriticalPointReport& r) {
  Json j;
  j["location"] = {r.point.location.x, r.point.location.y};
  j["gradient_norm"] = r.point.gradient_norm;
  j["isolated"] = to_string(r.point.isolation);
  j["hessian_eigenvalues"] = {r.hessian_eigenvalues[0], r.hessian_eigenvalues[1]};
  j["class"] = to_string(r.cls);
  j["rotation_angle"] = r.rotation_angle;
  j["u_yy"] = r.u_yy;
  j["n"] = r.n ? Json(*r.n) : Json(nullptr);
  j["parity"] = r.n_odd ? Json(*r.n_odd ? "odd" : "even") : Json(nullptr);
  j["alpha"] = r.alpha ? Json(*r.alpha) : Json(nullptr);
  j["beta"] = r.beta ? Json(*r.beta) : Json(nullptr);
  j["l"] = r.l ? Json(*r.l) : Json(nullptr);
  j["pure_x_coeff_at_l"] = r.pure_x_coeff_at_l ? Json(*r.pure_x_coeff_at_l) : Json(nullptr);
  j["index"] = r.index ? index_json(*r.index) : Json(nullptr);
  j["inequality_1_8_slack"] = r.inequality_1_8_slack ? Json(*r.inequality_1_8_slack) : Json(nullptr);
  j["equality_1_8_gap"] = r.equality_1_8_gap ? Json(*r.equality_1_8_gap) : Json(nullptr);
  j["chain_residuals"] = r.chain_residuals;
  j["expansion_residual_slope"] =
      r.expansion_residual_slope ? Json(*r.expansion_residual_slope) : Json(nullptr);
  j["expansion_exact"] = r.expansion_exact;
  j["theorem_violations"] = r.theorem_violations;
  j["solution_verified"] = r.solution_verified;
  j["value_at_point"] = r.value_at_point;
  if (r.jet) {
    Json jets = Json::array();
    for (int m = 0; m <= r.jet->order(); ++m)
      for (int b = 0; b <= m; ++b) {
        Json e;
        e["a"] = m - b;
        e["b"] = b;
        e["coeff"] = r.jet->coeff(m - b, b);
        e["err"] = r.jet->err(m - b, b);
        jets.push_back(e);
      }
    j["jet"] = jets;
  } else {
    j["jet"] = nullptr;
  }
  return j;
}

}  // namespace

std::string render_analysis_report(const RunManifest& manifest, const std::string& field,
                                   const std::optional<std::string>& f,
                                   std::span<const CriticalPointReport> reports) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["field"] = field;
  j["f"] = f ? Json(*f) : Json(nullptr);
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(point_report_json(r));
  j["critical_points"] = arr;
  return dump_document(j);
}

std::string render_replication_report(const RunManifest& manifest, const ReplicationCase& rc) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["id"] = rc.id;
  j["description"] = rc.description;
  j["notes"] = rc.notes;
  j["passed"] = rc.passed();
  Json facts = Json::array();
  for (const auto& fact : rc.facts) {
    Json e;
    e["quantity"] = fact.quantity;
    e["mode"] = fact.mode == ExpectedFact::Mode::near
                    ? "near"
                    : (fact.mode == ExpectedFact::Mode::at_least ? "at_least" : "at_most");
    e["expected"] = fact.expected;
    e["tolerance"] = fact.tolerance;
    e["oracle"] = fact.oracle;
    e["actual"] = fact.actual;
    e["passed"] = fact.passed;
    facts.push_back(e);
  }
  j["facts"] = facts;
  return dump_document(j);
}

std::string render_index_report(const RunManifest& manifest, const std::string& field,
                                const IndexResult& result) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["field"] = field;
  j["index"] = index_json(result);
  return dump_document(j);
}

std::string render_levelset_summary(const RunManifest& manifest, const std::string& field,
                                    std::span<const std::pair<double, double>> level_kmin,
                                    std::span<const std::string> curve_files) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["field"] = field;
  Json arr = Json::array();
  for (const auto& [lvl, kmin] : level_kmin) {
    Json e;
    e["level"] = lvl;
    e["k_min"] = kmin;
    arr.push_back(e);
  }
  j["levels"] = arr;
  j["curve_files"] = std::vector<std::string>(curve_files.begin(), curve_files.end());
  return dump_document(j);
}

std::string render_solve_manifest(const RunManifest& manifest, double residual, int iterations,
                                  int interior_nodes) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["residual_maxnorm"] = residual;
  j["newton_iterations"] = iterations;
  j["interior_nodes"] = interior_nodes;
  return dump_document(j);
}

std::string render_verify_report(const RunManifest& manifest, const std::string& field,
                                 const std::string& f, bool verified, double max_residual,
                                 std::span<const CriticalPointReport> reports) {
  Json j;
  j["manifest"] = manifest_json(manifest);
  j["field"] = field;
  j["f"] = f;
  j["solution_verified"] = verified;
  j["max_pde_residual"] = max_residual;
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(point_report_json(r));
  j["critical_points"] = arr;
  return dump_document(j);
}

}  // namespace morse2d
