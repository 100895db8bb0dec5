#include "tpvp/cloud_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpvp {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& path, int line,
                              const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

PointCloud load_xyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  PointCloud cloud;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Vec3 p;
    if (!(ss >> p.x() >> p.y() >> p.z()))
      parse_error(path, lineno, "expected three coordinates");
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  int lineno = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) parse_error(path, lineno, "unexpected end of file");
    ++lineno;
  };
  next_line();
  if (line != "ply") parse_error(path, lineno, "missing ply magic");

  std::size_t vertex_count = 0;
  bool in_vertex_element = false;
  int x_prop = -1, y_prop = -1, z_prop = -1;
  int prop_index = 0;
  while (true) {
    next_line();
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "ascii")
        parse_error(path, lineno, "only ascii PLY is supported");
    } else if (token == "element") {
      std::string name;
      std::size_t count;
      ss >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) {
        vertex_count = count;
        prop_index = 0;
      }
    } else if (token == "property" && in_vertex_element) {
      std::string type, name;
      ss >> type >> name;
      if (name == "x") x_prop = prop_index;
      if (name == "y") y_prop = prop_index;
      if (name == "z") z_prop = prop_index;
      ++prop_index;
    } else if (token == "end_header") {
      break;
    }
  }
  if (x_prop < 0 || y_prop < 0 || z_prop < 0)
    parse_error(path, lineno, "vertex element lacks x y z properties");

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    next_line();
    std::istringstream ss(line);
    std::vector<Scalar> values;
    Scalar v;
    while (ss >> v) values.push_back(v);
    const int needed = std::max({x_prop, y_prop, z_prop});
    if (static_cast<int>(values.size()) <= needed)
      parse_error(path, lineno, "vertex line has too few values");
    cloud.points.emplace_back(values[x_prop], values[y_prop], values[z_prop]);
  }
  return cloud;
}

}  // namespace

PointCloud load_cloud(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".xyz" || ext == ".txt") return load_xyz(path);
  if (ext == ".ply") return load_ply(path);
  throw std::runtime_error("unsupported cloud format: " + ext);
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(9);
  if (ext == ".xyz" || ext == ".txt") {
    for (const Vec3& p : cloud.points)
      out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  } else if (ext == ".ply") {
    out << "ply\nformat ascii 1.0\n"
        << "element vertex " << cloud.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "end_header\n";
    for (const Vec3& p : cloud.points)
      out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  } else {
    throw std::runtime_error("unsupported cloud format: " + ext);
  }
}

}  // namespace tpvp
