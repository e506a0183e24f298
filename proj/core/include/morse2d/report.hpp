#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "morse2d/classify.hpp"
#include "morse2d/replicate.hpp"
#include "morse2d/winding.hpp"

namespace morse2d {

/// Every output JSON embeds its manifest. wall_clock_seconds is absent
/// (null) in replication reports so that repeated runs are byte-identical.
struct RunManifest {
  std::string command;
  std::vector<std::string> input_paths;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> tolerances;
  std::string artifact_version;
  std::optional<double> wall_clock_seconds;
  std::vector<std::string> output_paths;
};

/// All numbers are serialized with 17 significant digits.
std::string render_analysis_report(const RunManifest& manifest, const std::string& field,
                                   const std::optional<std::string>& f,
                                   std::span<const CriticalPointReport> reports);
std::string render_replication_report(const RunManifest& manifest, const ReplicationCase& rc);
std::string render_index_report(const RunManifest& manifest, const std::string& field,
                                const IndexResult& result);
std::string render_levelset_summary(const RunManifest& manifest, const std::string& field,
                                    std::span<const std::pair<double, double>> level_kmin,
                                    std::span<const std::string> curve_files);
std::string render_solve_manifest(const RunManifest& manifest, double residual, int iterations,
                                  int interior_nodes);
std::string render_verify_report(const RunManifest& manifest, const std::string& field,
                                 const std::string& f, bool verified, double max_residual,
                                 std::span<const CriticalPointReport> reports);

}  // namespace morse2d
