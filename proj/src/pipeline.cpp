#include "tpvp/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tpvp/nbv.hpp"
#include "tpvp/path_planning.hpp"
#include "tpvp/visibility.hpp"

namespace tpvp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int pick_initial_view(const ViewSpace& space, InitialViewPolicy policy,
                      std::uint64_t seed) {
  if (policy == InitialViewPolicy::kRandom) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
    return space.views[pick(rng)].id;
  }
  // elevation angle of each view relative to the sphere center
  auto elevation = [&](const View& v) {
    const Vec3 d = (v.position - space.center) / space.radius;
    return std::asin(std::clamp(d.z(), Scalar(-1), Scalar(1)));
  };
  const Scalar target = policy == InitialViewPolicy::kNearHorizontal ? 0.0
                        : policy == InitialViewPolicy::kOblique      ? M_PI / 4
                                                                     : M_PI / 2;
  int best = space.views.front().id;
  Scalar best_err = std::numeric_limits<Scalar>::infinity();
  for (const View& v : space.views) {
    const Scalar err = std::abs(elevation(v) - target);
    if (err < best_err) {
      best_err = err;
      best = v.id;
    }
  }
  return best;
}

const View& view_by_id(const ViewSpace& space, int id) {
  for (const View& v : space.views)
    if (v.id == id) return v;
  throw std::invalid_argument("unknown view id " + std::to_string(id));
}

void fuse_scan(OccupancyGrid& map, const View& view, const PointCloud& scan) {
  map.insert_cloud(scan);
  for (const Vec3& p : scan.points) map.mark_free_along(view.position, p);
}

}  // namespace

Scalar surface_coverage(const PointCloud& reconstructed,
                        const PointCloud& ground_truth, const ViewSpace& views,
                        Scalar map_resolution) {
  if (reconstructed.empty() && ground_truth.empty())
    throw std::invalid_argument("surface_coverage: empty inputs");
  OccupancyGrid gt_grid(map_resolution);
  gt_grid.insert_cloud(ground_truth);
  const PointCloud gt_surface = gt_grid.extract_surface();

  std::set<VoxelKey> visible;
  for (std::size_t p = 0; p < gt_surface.size(); ++p) {
    for (const View& v : views.views) {
      if (gt_grid.point_visible(v.position, gt_surface.points[p])) {
        visible.insert(gt_grid.key_of(gt_surface.points[p]));
        break;
      }
    }
  }
  if (visible.empty()) throw std::runtime_error("surface_coverage: degenerate scene");

  std::set<VoxelKey> observed;
  for (const Vec3& p : reconstructed.points) {
    const VoxelKey key = gt_grid.key_of(p);
    if (visible.contains(key)) observed.insert(key);
  }
  return 100.0 * static_cast<Scalar>(observed.size()) / static_cast<Scalar>(visible.size());
}

MetricsReport run_cycle(const ExperimentConfig& config, const PointCloud& prior,
                        const PointCloud& ground_truth_now, CycleArtifacts* artifacts) {
  if (prior.empty() || ground_truth_now.empty())
    throw std::invalid_argument("run_cycle: empty input cloud");

  MetricsReport report;
  auto timed = [&](const char* stage, auto&& fn) {
    const auto t0 = Clock::now();
    fn();
    report.timings_ms.emplace_back(stage, ms_since(t0));
  };

  const ViewSpace space =
      build_view_space(config.view_space, Vec3::Zero(), config.view_radius, 1);

  OccupancyGrid gt_grid(config.map_resolution);
  gt_grid.insert_cloud(ground_truth_now);

  // initial scan
  report.initial_view_id = pick_initial_view(space, config.initial_view, config.seed);
  const View& initial = view_by_id(space, report.initial_view_id);
  PointCloud scan1, scan2;
  OccupancyGrid current_map(config.map_resolution);
  timed("initial_scan", [&] {
    scan1 = virtual_scan(ground_truth_now, gt_grid, initial, config.camera);
    if (scan1.empty())
      throw std::runtime_error("run_cycle[initial_scan]: empty initial scan");
    fuse_scan(current_map, initial, scan1);
  });

  // NBV
  std::vector<int> visited{report.initial_view_id};
  const View* start_view = &initial;
  if (config.enable_nbv) {
    timed("nbv", [&] {
      const View& nbv = next_best_view(current_map, space, visited);
      report.nbv_id = nbv.id;
      visited.push_back(nbv.id);
      scan2 = virtual_scan(ground_truth_now, gt_grid, nbv, config.camera);
      fuse_scan(current_map, nbv, scan2);
      start_view = &nbv;
    });
  }

  // fuse observation Q
  PointCloud fused = scan1;
  fused.append(scan2);
  const PointCloud observation = voxel_downsample(fused, config.map_resolution);

  // registration
  PointCloud aligned;
  std::vector<LossBreakdown> trace;
  timed("registration", [&] {
    try {
      RegistrationResult reg = register_clouds(prior, observation, config.registration);
      aligned = std::move(reg.aligned);
      trace = std::move(reg.trace);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("run_cycle[registration]: ") + e.what());
    }
  });
  report.chamfer_after_registration = chamfer_distance(aligned, ground_truth_now);

  // inflation and planning surface
  PointCloud inflation_set;
  PointCloud approximation;
  timed("inflation", [&] {
    if (config.enable_inflation)
      inflation_set = inflate(aligned, observation, config.inflation);
    approximation = assemble_approximation(aligned, observation, inflation_set);
  });

  OccupancyGrid plan_grid(config.map_resolution);
  plan_grid.insert_cloud(approximation);
  const PointCloud surface = plan_grid.extract_surface();

  // visibility + set cover
  VisibilityMatrix matrix;
  CoverSolution cover;
  timed("visibility", [&] { matrix = build_visibility(surface, space, plan_grid); });
  timed("set_cover", [&] {
    try {
      cover = solve_cover(matrix, visited, config.cover_mode, config.cover_node_budget);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("run_cycle[set_cover]: ") + e.what());
    }
  });
  report.planned_view_count = cover.objective;
  report.cover_exact = cover.exact;
  report.uncoverable_points = static_cast<int>(matrix.uncoverable.size());

  // global path from the last visited pose through the planned views
  ViewPath path;
  timed("path", [&] {
    std::vector<View> selected;
    for (int id : cover.selected) selected.push_back(view_by_id(space, id));
    path = shortest_hamiltonian_path(*start_view, selected);
  });
  report.path_order = path.order;
  report.movement_cost_planned = path.total_cost;
  report.movement_cost = path.total_cost;
  if (config.enable_nbv)
    report.movement_cost += (view_by_id(space, report.nbv_id).position - initial.position).norm();

  // simulated execution of the planned sequence
  PointCloud reconstruction = fused;
  timed("execution", [&] {
    for (std::size_t i = 1; i < path.order.size(); ++i) {
      const View& v = view_by_id(space, path.order[i]);
      const PointCloud scan = virtual_scan(ground_truth_now, gt_grid, v, config.camera);
      reconstruction.append(scan);
    }
  });

  report.number_of_views = static_cast<int>(visited.size()) + cover.objective;
  timed("metrics", [&] {
    report.surface_coverage =
        surface_coverage(reconstruction, ground_truth_now, space, config.map_resolution);
  });

  if (artifacts) {
    artifacts->initial_scan = std::move(scan1);
    artifacts->nbv_scan = std::move(scan2);
    artifacts->fused_observation = observation;
    artifacts->aligned_prior = std::move(aligned);
    artifacts->inflation_set = std::move(inflation_set);
    artifacts->approximation = std::move(approximation);
    artifacts->reconstruction = std::move(reconstruction);
    artifacts->cover = std::move(cover);
    artifacts->loss_trace = std::move(trace);
  }
  return report;
}

MetricsReport run_synthetic_case(const ExperimentConfig& config,
                                 CycleArtifacts* artifacts) {
  const SyntheticPlant plant = generate_synthetic_plant(config.seed, config.species,
                                                        {config.plant_diagonal});
  const Scalar angle = config.global_rotation_deg * M_PI / 180.0;
  const Mat3 rot = Eigen::AngleAxis<Scalar>(angle, Vec3::UnitZ()).toRotationMatrix();
  const PointCloud prior = transformed(plant.cycle_previous, rot, Vec3::Zero());
  const PointCloud gt = transformed(plant.cycle_current, rot, Vec3::Zero());
  return run_cycle(config, prior, gt, artifacts);
}

std::vector<std::pair<ExperimentConfig, MetricsReport>> run_matrix(
    const ExperimentConfig& base) {
  std::vector<std::pair<ExperimentConfig, MetricsReport>> results;
  const SpeciesProfile species[] = {SpeciesProfile::kMaizeLike,
                                    SpeciesProfile::kTomatoLike};
  const std::uint64_t seeds[] = {base.seed, base.seed + 1, base.seed + 2};
  const Scalar rotations[] = {0.0, 45.0};
  const InitialViewPolicy policies[] = {InitialViewPolicy::kNearHorizontal,
                                        InitialViewPolicy::kOblique,
                                        InitialViewPolicy::kNearTop};
  for (SpeciesProfile sp : species)
    for (std::uint64_t seed : seeds)
      for (Scalar rot : rotations)
        for (InitialViewPolicy policy : policies) {
          ExperimentConfig config = base;
          config.species = sp;
          config.seed = seed;
          config.global_rotation_deg = rot;
          config.initial_view = policy;
          results.emplace_back(config, run_synthetic_case(config));
        }
  return results;
}

namespace {

const char* species_name(SpeciesProfile s) {
  return s == SpeciesProfile::kMaizeLike ? "maize_like" : "tomato_like";
}

const char* policy_name(InitialViewPolicy p) {
  switch (p) {
    case InitialViewPolicy::kNearHorizontal: return "near_horizontal";
    case InitialViewPolicy::kOblique: return "oblique";
    case InitialViewPolicy::kNearTop: return "near_top";
    default: return "random";
  }
}

const char* kind_name(ViewSpaceKind k) {
  return k == ViewSpaceKind::kHemisphere ? "hemisphere" : "sphere";
}

}  // namespace

std::string metrics_csv_header() {
  return "species,seed,rotation_deg,initial_view,view_space,number_of_views,"
         "surface_coverage,movement_cost,movement_cost_planned,"
         "chamfer_after_registration,planned_views,cover_exact,uncoverable";
}

std::string metrics_csv_row(const ExperimentConfig& config, const MetricsReport& r) {
  std::ostringstream out;
  out.precision(9);
  out << species_name(config.species) << ',' << config.seed << ','
      << config.global_rotation_deg << ',' << policy_name(config.initial_view) << ','
      << kind_name(config.view_space) << ',' << r.number_of_views << ','
      << r.surface_coverage << ',' << r.movement_cost << ','
      << r.movement_cost_planned << ',' << r.chamfer_after_registration << ','
      << r.planned_view_count << ',' << (r.cover_exact ? 1 : 0) << ','
      << r.uncoverable_points;
  return out.str();
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(12);
  out << "view_space=" << kind_name(c.view_space) << '\n'
      << "initial_view=" << policy_name(c.initial_view) << '\n'
      << "global_rotation_deg=" << c.global_rotation_deg << '\n'
      << "seed=" << c.seed << '\n'
      << "species=" << species_name(c.species) << '\n'
      << "view_radius=" << c.view_radius << '\n'
      << "plant_diagonal=" << c.plant_diagonal << '\n'
      << "map_resolution=" << c.map_resolution << '\n'
      << "gamma_near=" << c.inflation.gamma_near << '\n'
      << "gamma_far=" << c.inflation.gamma_far << '\n'
      << "candidate_voxel=" << c.inflation.candidate_voxel << '\n'
      << "lambda_arap=" << c.registration.weights.arap << '\n'
      << "lambda_cd=" << c.registration.weights.cd << '\n'
      << "lambda_lap=" << c.registration.weights.lap << '\n'
      << "learning_rate=" << c.registration.learning_rate << '\n'
      << "iterations=" << c.registration.iterations << '\n'
      << "anchors_per_point=" << c.registration.graph.anchors_per_point << '\n'
      << "enable_inflation=" << (c.enable_inflation ? 1 : 0) << '\n'
      << "enable_nbv=" << (c.enable_nbv ? 1 : 0) << '\n'
      << "cover_mode=" << (c.cover_mode == CoverMode::kExact ? "exact" : "greedy")
      << '\n';
  return out.str();
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "view_space")
      c.view_space = value == "hemisphere" ? ViewSpaceKind::kHemisphere
                                           : ViewSpaceKind::kSphere;
    else if (key == "initial_view") {
      if (value == "near_horizontal") c.initial_view = InitialViewPolicy::kNearHorizontal;
      else if (value == "oblique") c.initial_view = InitialViewPolicy::kOblique;
      else if (value == "near_top") c.initial_view = InitialViewPolicy::kNearTop;
      else c.initial_view = InitialViewPolicy::kRandom;
    } else if (key == "global_rotation_deg") c.global_rotation_deg = std::stod(value);
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "species")
      c.species = value == "tomato_like" ? SpeciesProfile::kTomatoLike
                                         : SpeciesProfile::kMaizeLike;
    else if (key == "view_radius") c.view_radius = std::stod(value);
    else if (key == "plant_diagonal") c.plant_diagonal = std::stod(value);
    else if (key == "map_resolution") c.map_resolution = std::stod(value);
    else if (key == "gamma_near") c.inflation.gamma_near = std::stod(value);
    else if (key == "gamma_far") c.inflation.gamma_far = std::stod(value);
    else if (key == "candidate_voxel") c.inflation.candidate_voxel = std::stod(value);
    else if (key == "lambda_arap") c.registration.weights.arap = std::stod(value);
    else if (key == "lambda_cd") c.registration.weights.cd = std::stod(value);
    else if (key == "lambda_lap") c.registration.weights.lap = std::stod(value);
    else if (key == "learning_rate") c.registration.learning_rate = std::stod(value);
    else if (key == "iterations") c.registration.iterations = std::stoi(value);
    else if (key == "anchors_per_point")
      c.registration.graph.anchors_per_point = std::stoi(value);
    else if (key == "enable_inflation") c.enable_inflation = value != "0";
    else if (key == "enable_nbv") c.enable_nbv = value != "0";
    else if (key == "cover_mode")
      c.cover_mode = value == "greedy" ? CoverMode::kGreedy : CoverMode::kExact;
    else
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key " + key);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace tpvp
