#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tpvp/inflation.hpp"
#include "tpvp/registration.hpp"
#include "tpvp/set_cover.hpp"
#include "tpvp/synthetic_plant.hpp"
#include "tpvp/view_space.hpp"
#include "tpvp/virtual_scanner.hpp"

namespace tpvp {

enum class InitialViewPolicy { kNearHorizontal, kOblique, kNearTop, kRandom };

struct ExperimentConfig {
  ViewSpaceKind view_space = ViewSpaceKind::kSphere;
  InitialViewPolicy initial_view = InitialViewPolicy::kOblique;
  Scalar global_rotation_deg = 0;
  std::uint64_t seed = 0;
  SpeciesProfile species = SpeciesProfile::kMaizeLike;

  Scalar view_radius = 0.4;
  Scalar plant_diagonal = 0.12;
  Scalar map_resolution = 0.004;
  InflationParams inflation;
  RegistrationOptions registration;
  CameraIntrinsics camera;
  CoverMode cover_mode = CoverMode::kExact;
  std::uint64_t cover_node_budget = 2'000'000;

  bool enable_inflation = true;
  bool enable_nbv = true;
};

struct MetricsReport {
  int number_of_views = 0;          // initial + NBV + planned
  Scalar surface_coverage = 0;      // percent
  Scalar movement_cost = 0;         // meters, includes the initial->NBV hop
  Scalar movement_cost_planned = 0; // meters, planned path only
  Scalar chamfer_after_registration = 0;  // meters, aligned prior vs ground truth
  int planned_view_count = 0;
  bool cover_exact = false;
  int uncoverable_points = 0;
  int initial_view_id = -1;
  int nbv_id = -1;
  std::vector<int> path_order;
  std::vector<std::pair<std::string, double>> timings_ms;  // excluded from tables
};

/// Stage outputs kept for inspection / file emission.
struct CycleArtifacts {
  PointCloud initial_scan;
  PointCloud nbv_scan;
  PointCloud fused_observation;  // Q
  PointCloud aligned_prior;      // P~
  PointCloud inflation_set;      // I
  PointCloud approximation;      // P~+
  PointCloud reconstruction;
  CoverSolution cover;
  std::vector<LossBreakdown> loss_trace;
};

/// Percentage of ground-truth voxels visible from the whole view space
/// that the reconstruction observed.
Scalar surface_coverage(const PointCloud& reconstructed,
                        const PointCloud& ground_truth, const ViewSpace& views,
                        Scalar map_resolution = 0.004);

/// One full planning cycle: initial scan, NBV, registration, inflation,
/// set cover, global path, simulated execution, metrics.
MetricsReport run_cycle(const ExperimentConfig& config, const PointCloud& prior,
                        const PointCloud& ground_truth_now,
                        CycleArtifacts* artifacts = nullptr);

/// Convenience wrapper generating the synthetic two-cycle pair for the
/// config and running the cycle on it.
MetricsReport run_synthetic_case(const ExperimentConfig& config,
                                 CycleArtifacts* artifacts = nullptr);

/// The full 2 species x 3 seeds x 2 rotations x 3 initial-view matrix.
std::vector<std::pair<ExperimentConfig, MetricsReport>> run_matrix(
    const ExperimentConfig& base);

std::string metrics_csv_header();
std::string metrics_csv_row(const ExperimentConfig& config, const MetricsReport& report);

/// key=value config text round-trip for replayable runs.
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace tpvp
