#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "tpvp/cloud_io.hpp"
#include "tpvp/inflation.hpp"
#include "tpvp/path_planning.hpp"
#include "tpvp/pipeline.hpp"
#include "tpvp/registration.hpp"
#include "tpvp/set_cover.hpp"
#include "tpvp/visibility.hpp"

namespace fs = std::filesystem;
using namespace tpvp;

namespace {

ViewSpaceKind parse_kind(const std::string& name) {
  if (name == "hemisphere") return ViewSpaceKind::kHemisphere;
  if (name == "sphere") return ViewSpaceKind::kSphere;
  throw CLI::ValidationError("view space must be hemisphere or sphere");
}

std::vector<int> parse_id_list(const std::string& csv) {
  std::vector<int> ids;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ','))
    if (!token.empty()) ids.push_back(std::stoi(token));
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-prior-guided view planning simulator"};
  app.require_subcommand(1);

  // viewspace
  auto* viewspace_cmd = app.add_subcommand("viewspace", "Emit candidate view poses");
  std::string vs_kind = "sphere", vs_out;
  double vs_radius = 0.4;
  viewspace_cmd->add_option("--kind", vs_kind, "hemisphere|sphere");
  viewspace_cmd->add_option("--radius", vs_radius, "view sphere radius [m]");
  viewspace_cmd->add_option("--out", vs_out, "output file (default stdout)");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Virtual scan of a cloud from one view");
  std::string scan_cloud, scan_out, scan_kind = "sphere";
  int scan_view = 0;
  scan_cmd->add_option("--cloud", scan_cloud, "ground-truth cloud")->required();
  scan_cmd->add_option("--view", scan_view, "view id");
  scan_cmd->add_option("--kind", scan_kind, "hemisphere|sphere");
  scan_cmd->add_option("--out", scan_out, "output XYZ cloud")->required();

  // register
  auto* register_cmd = app.add_subcommand("register", "Non-rigid alignment");
  std::string reg_source, reg_target, reg_out, reg_trace;
  register_cmd->add_option("--source", reg_source)->required();
  register_cmd->add_option("--target", reg_target)->required();
  register_cmd->add_option("--out", reg_out)->required();
  register_cmd->add_option("--trace", reg_trace, "per-iteration loss CSV");

  // inflate
  auto* inflate_cmd = app.add_subcommand("inflate", "Growth inflation");
  std::string inf_prior, inf_scan, inf_out;
  bool inf_only = false;
  inflate_cmd->add_option("--prior", inf_prior)->required();
  inflate_cmd->add_option("--scan", inf_scan)->required();
  inflate_cmd->add_option("--out", inf_out)->required();
  inflate_cmd->add_flag("--inflation-only", inf_only, "emit only the inflation set");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Set-covering view selection");
  std::string plan_cloud, plan_kind = "sphere", plan_visited, plan_mode = "exact",
              plan_out;
  plan_cmd->add_option("--inflated", plan_cloud, "inflated approximation cloud")->required();
  plan_cmd->add_option("--viewspace", plan_kind, "hemisphere|sphere");
  plan_cmd->add_option("--visited", plan_visited, "comma-separated visited view ids");
  plan_cmd->add_option("--mode", plan_mode, "exact|greedy");
  plan_cmd->add_option("--out", plan_out, "plan file")->required();

  // path
  auto* path_cmd = app.add_subcommand("path", "Shortest Hamiltonian view path");
  std::string path_plan, path_out, path_kind = "sphere";
  int path_start = 0;
  path_cmd->add_option("--start", path_start, "start view id")->required();
  path_cmd->add_option("--views", path_plan, "plan file from `plan`")->required();
  path_cmd->add_option("--viewspace", path_kind, "hemisphere|sphere");
  path_cmd->add_option("--out", path_out, "path file")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run the experiment matrix");
  std::string sim_config, sim_out;
  bool sim_single = false;
  sim_cmd->add_option("--config", sim_config, "experiment config file");
  sim_cmd->add_option("--out", sim_out, "results directory")->required();
  sim_cmd->add_flag("--single", sim_single, "run one case instead of the 36-case matrix");

  // report
  auto* report_cmd = app.add_subcommand("report", "Aggregate a results directory");
  std::string rep_dir;
  report_cmd->add_option("--results", rep_dir, "results directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*viewspace_cmd) {
      const ViewSpace space =
          build_view_space(parse_kind(vs_kind), Vec3::Zero(), vs_radius, 1);
      std::ostringstream out;
      out.precision(9);
      out << "# id px py pz axis_x axis_y axis_z\n";
      for (const View& v : space.views) {
        const Vec3 a = v.optical_axis();
        out << v.id << ' ' << v.position.x() << ' ' << v.position.y() << ' '
            << v.position.z() << ' ' << a.x() << ' ' << a.y() << ' ' << a.z() << '\n';
      }
      if (vs_out.empty()) {
        std::cout << out.str();
      } else {
        std::ofstream f(vs_out);
        f << out.str();
      }
    } else if (*scan_cmd) {
      const PointCloud gt = load_cloud(scan_cloud);
      const ViewSpace space = build_view_space(parse_kind(scan_kind), Vec3::Zero());
      const auto it = std::find_if(space.views.begin(), space.views.end(),
                                   [&](const View& v) { return v.id == scan_view; });
      if (it == space.views.end()) throw std::runtime_error("unknown view id");
      save_cloud(virtual_scan(gt, *it), scan_out);
    } else if (*register_cmd) {
      const PointCloud source = load_cloud(reg_source);
      const PointCloud target = load_cloud(reg_target);
      const RegistrationResult result = register_clouds(source, target);
      save_cloud(result.aligned, reg_out);
      if (!reg_trace.empty()) {
        std::ofstream f(reg_trace);
        f << "iteration,loss_total,loss_arap,loss_cd,loss_lap\n";
        f.precision(12);
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
          const LossBreakdown& b = result.trace[i];
          f << i << ',' << b.total << ',' << b.arap << ',' << b.cd << ',' << b.lap
            << '\n';
        }
      }
    } else if (*inflate_cmd) {
      const PointCloud prior = load_cloud(inf_prior);
      const PointCloud scan = load_cloud(inf_scan);
      const PointCloud inflation = inflate(prior, scan);
      save_cloud(inf_only ? inflation : assemble_approximation(prior, scan, inflation),
                 inf_out);
    } else if (*plan_cmd) {
      const PointCloud cloud = load_cloud(plan_cloud);
      const ViewSpace space = build_view_space(parse_kind(plan_kind), Vec3::Zero());
      OccupancyGrid grid(0.004);
      grid.insert_cloud(cloud);
      const VisibilityMatrix matrix =
          build_visibility(grid.extract_surface(), space, grid);
      const CoverSolution cover = solve_cover(
          matrix, parse_id_list(plan_visited),
          plan_mode == "greedy" ? CoverMode::kGreedy : CoverMode::kExact);
      std::ofstream f(plan_out);
      f << "objective " << cover.objective << '\n'
        << "optimality " << (cover.exact ? "exact" : "greedy") << '\n'
        << "uncoverable " << matrix.uncoverable.size() << '\n';
      for (const auto& [id, count] : cover.covered_counts)
        f << "view " << id << " covers " << count << '\n';
    } else if (*path_cmd) {
      const ViewSpace space = build_view_space(parse_kind(path_kind), Vec3::Zero());
      std::ifstream f(path_plan);
      if (!f) throw std::runtime_error("cannot open " + path_plan);
      std::vector<View> selected;
      std::string word;
      while (f >> word) {
        if (word != "view") continue;
        int id, count;
        std::string covers;
        f >> id >> covers >> count;
        for (const View& v : space.views)
          if (v.id == id && id != path_start) selected.push_back(v);
      }
      const auto start_it = std::find_if(space.views.begin(), space.views.end(),
                                         [&](const View& v) { return v.id == path_start; });
      if (start_it == space.views.end()) throw std::runtime_error("unknown start id");
      const ViewPath path = shortest_hamiltonian_path(*start_it, selected);
      std::ofstream out(path_out);
      out.precision(9);
      out << "total_cost " << path.total_cost << '\n'
          << "optimality " << (path.exact ? "exact" : "heuristic") << '\n';
      Scalar cumulative = 0;
      out << "hop " << path.order[0] << " cumulative 0\n";
      for (std::size_t i = 1; i < path.order.size(); ++i) {
        const Vec3 a = std::find_if(space.views.begin(), space.views.end(),
                                    [&](const View& v) { return v.id == path.order[i - 1]; })
                           ->position;
        const Vec3 b = std::find_if(space.views.begin(), space.views.end(),
                                    [&](const View& v) { return v.id == path.order[i]; })
                           ->position;
        cumulative += (b - a).norm();
        out << "hop " << path.order[i] << " cumulative " << cumulative << '\n';
      }
    } else if (*sim_cmd) {
      ExperimentConfig base;
      if (!sim_config.empty()) base = load_config(sim_config);
      fs::create_directories(sim_out);
      std::ofstream metrics(fs::path(sim_out) / "metrics.csv");
      metrics << metrics_csv_header() << '\n';
      if (sim_single) {
        CycleArtifacts artifacts;
        const MetricsReport report = run_synthetic_case(base, &artifacts);
        metrics << metrics_csv_row(base, report) << '\n';
        save_cloud(artifacts.aligned_prior, fs::path(sim_out) / "aligned.ply");
        save_cloud(artifacts.approximation, fs::path(sim_out) / "inflated.ply");
        save_cloud(artifacts.reconstruction, fs::path(sim_out) / "reconstruction.ply");
        std::ofstream cfg(fs::path(sim_out) / "config.txt");
        cfg << serialize_config(base);
        for (const auto& [stage, ms] : report.timings_ms)
          std::cerr << stage << ": " << ms << " ms\n";
      } else {
        for (const auto& [config, report] : run_matrix(base))
          metrics << metrics_csv_row(config, report) << '\n';
        std::ofstream cfg(fs::path(sim_out) / "config.txt");
        cfg << serialize_config(base);
      }
    } else if (*report_cmd) {
      std::ifstream metrics(fs::path(rep_dir) / "metrics.csv");
      if (!metrics) throw std::runtime_error("no metrics.csv in " + rep_dir);
      std::string line;
      std::getline(metrics, line);  // header
      struct Stats {
        std::vector<double> views, coverage, cost;
      };
      std::map<std::string, Stats> groups;
      while (std::getline(metrics, line)) {
        std::stringstream ss(line);
        std::vector<std::string> cols;
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() < 9) continue;
        Stats& s = groups[cols[0] + "/" + cols[4]];
        s.views.push_back(std::stod(cols[5]));
        s.coverage.push_back(std::stod(cols[6]));
        s.cost.push_back(std::stod(cols[7]));
      }
      auto mean_std = [](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / (v.size() - 1) : 0;
        return std::pair{mean, std::sqrt(var)};
      };
      std::cout << "group,views_mean,views_std,coverage_mean,coverage_std,"
                   "cost_mean,cost_std\n";
      std::cout.precision(4);
      std::cout << std::fixed;
      for (const auto& [name, s] : groups) {
        const auto [vm, vs] = mean_std(s.views);
        const auto [cm, cs] = mean_std(s.coverage);
        const auto [mm, ms] = mean_std(s.cost);
        std::cout << name << ',' << vm << ',' << vs << ',' << cm << ',' << cs << ','
                  << mm << ',' << ms << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
