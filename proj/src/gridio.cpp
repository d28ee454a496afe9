#include "arcpinn/gridio.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "arcpinn/common.hpp"

namespace arcpinn {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

}  // namespace

void write_grid_csv(const std::string& path, const TemperatureGrid& g) {
  std::ofstream out = open_out(path);
  char buf[200];
  out << "# arcpinn grid v1\n";
  std::snprintf(buf, sizeof(buf), "# dims %d %d %d %zu\n", g.nx, g.ny, g.nz,
                g.times.size());
  out << buf;
  std::snprintf(buf, sizeof(buf), "# spacing %.12g\n", g.dx);
  out << buf;
  out << "x,y,z,t,T\n";
  for (std::size_t s = 0; s < g.times.size(); ++s) {
    const double t = g.times[s];
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g\n",
                        i * g.dx, j * g.dx, k * g.dx, t, g.at(s, i, j, k));
          out << buf;
        }
  }
  if (!out) throw IoError("short write: " + path);
}

TemperatureGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file: " + path);
  TemperatureGrid g;
  std::string line;
  std::size_t nt = 0;
  bool have_dims = false;

  while (std::getline(in, line)) {
    if (line.rfind("# dims ", 0) == 0) {
      if (std::sscanf(line.c_str(), "# dims %d %d %d %zu", &g.nx, &g.ny, &g.nz,
                      &nt) != 4)
        throw IoError("bad dims header in " + path);
      have_dims = true;
    } else if (line.rfind("# spacing ", 0) == 0) {
      g.dx = std::strtod(line.c_str() + 10, nullptr);
    } else if (line.rfind("x,y,z,t,T", 0) == 0) {
      break;
    } else if (!line.empty() && line[0] != '#') {
      throw IoError("unexpected line before header in " + path);
    }
  }
  if (!have_dims || g.dx <= 0)
    throw IoError("missing grid metadata in " + path);

  const std::size_t n = g.nodes();
  g.data.reserve(nt * n);
  g.times.reserve(nt);
  std::size_t row = 0;
  double x, y, z, t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &y, &z, &t, &v) !=
        5)
      throw IoError("bad data row in " + path + ": " + line);
    const std::size_t in_slice = row % n;
    if (in_slice == 0) g.times.push_back(t);
    // Spot-check lattice consistency on the first node of each slice.
    if (in_slice == 0 &&
        (std::abs(x) > 1e-9 || std::abs(y) > 1e-9 || std::abs(z) > 1e-9))
      throw IoError("grid rows out of order in " + path);
    g.data.push_back(v);
    ++row;
  }
  if (row != nt * n)
    throw IoError("grid row count mismatch in " + path + ": expected " +
                  std::to_string(nt * n) + ", got " + std::to_string(row));
  return g;
}

void write_grid_vtk(const std::string& prefix, const TemperatureGrid& g) {
  for (std::size_t s = 0; s < g.times.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "_%03zu.vtk", s);
    std::ofstream out = open_out(prefix + name);
    char buf[200];
    out << "# vtk DataFile Version 3.0\n";
    std::snprintf(buf, sizeof(buf), "arcpinn temperature t=%.12g\n",
                  g.times[s]);
    out << buf << "ASCII\nDATASET STRUCTURED_POINTS\n";
    std::snprintf(buf, sizeof(buf), "DIMENSIONS %d %d %d\n", g.nx, g.ny, g.nz);
    out << buf << "ORIGIN 0 0 0\n";
    std::snprintf(buf, sizeof(buf), "SPACING %.12g %.12g %.12g\n", g.dx, g.dx,
                  g.dx);
    out << buf;
    std::snprintf(buf, sizeof(buf), "POINT_DATA %zu\n", g.nodes());
    out << buf << "SCALARS temperature double 1\nLOOKUP_TABLE default\n";
    const double* slice = g.slice(s);
    for (std::size_t i = 0; i < g.nodes(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g\n", slice[i]);
      out << buf;
    }
    if (!out) throw IoError("short write: " + prefix + name);
  }
}

void write_probe_csv(const std::string& path, const ProbeTable& table) {
  std::ofstream out = open_out(path);
  char buf[200];
  out << "t";
  for (const auto& p : table.probes) {
    std::snprintf(buf, sizeof(buf), ",T(%.6g;%.6g;%.6g)", p[0], p[1], p[2]);
    out << buf;
  }
  out << "\n";
  for (std::size_t r = 0; r < table.times.size(); ++r) {
    std::snprintf(buf, sizeof(buf), "%.12g", table.times[r]);
    out << buf;
    for (double v : table.values[r]) {
      std::snprintf(buf, sizeof(buf), ",%.12g", v);
      out << buf;
    }
    out << "\n";
  }
}

void write_path_csv(const std::string& path, const PathProfile& profile) {
  std::ofstream out = open_out(path);
  char buf[100];
  out << "x,T\n";
  for (std::size_t i = 0; i < profile.x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", profile.x[i],
                  profile.temperature[i]);
    out << buf;
  }
}

}  // namespace arcpinn
