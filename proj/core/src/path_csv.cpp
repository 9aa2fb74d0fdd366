#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "chest/propagation.hpp"

namespace chest {

namespace {
constexpr const char* kHeader = "theta_rad,phi_rad,tau_s,alpha";
}

PathSet read_paths_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_paths_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw std::runtime_error(path + ": expected header '" + std::string(kHeader) + "'");
  }
  PathSet p;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[4];
    for (int i = 0; i < 4; ++i) {
      std::string cell;
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 4 columns");
      }
      try {
        std::size_t used = 0;
        v[i] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                 "'");
      }
    }
    p.push_back(v[0], v[1], v[2], v[3]);
  }
  p.check();
  if (p.empty()) throw std::runtime_error(path + ": no paths");
  return p;
}

void write_paths_csv(const PathSet& paths, const std::string& path) {
  paths.check();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_paths_csv: cannot open " + path);
  out << kHeader << '\n' << std::setprecision(17);
  for (std::size_t l = 0; l < paths.size(); ++l) {
    out << paths.elevation[l] << ',' << paths.azimuth[l] << ',' << paths.delay[l] << ','
        << paths.amplitude[l] << '\n';
  }
  if (!out) throw std::runtime_error("write_paths_csv: write failed for " + path);
}

}  // namespace chest
