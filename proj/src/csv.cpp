#include "aggmass/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aggmass/errors.hpp"

namespace aggmass {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

double parse_cell(const std::string& cell, const std::string& where) {
  char* end = nullptr;
  const double x = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) {
    throw IoError(where + ": malformed number '" + cell + "'");
  }
  return x;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep '\n' as-is everywhere
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_snapshot(const MassProfile& profile, double t, const Grid& grid,
                    const ModelParams& params, const std::string& path) {
  const std::vector<double> u = density_from_mass(profile, grid);
  std::ofstream out = open_for_write(path);
  out << "# alpha = " << format_double(params.alpha) << '\n';
  out << "# h_rho = " << format_double(grid.h_rho) << '\n';
  out << "# h_t = " << format_double(grid.h_t) << '\n';
  out << "# t = " << format_double(t) << '\n';
  out << "rho,m,u\n";
  for (std::size_t j = 0; j < profile.values.size(); ++j) {
    out << format_double(grid.rho(static_cast<int>(j))) << ','
        << format_double(profile.values[j]) << ',' << format_double(u[j])
        << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

Snapshot parse_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");

  Snapshot snap;
  std::string line;
  bool saw_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line.front() == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      std::string value = line.substr(eq + 1);
      value.erase(0, value.find_first_not_of(" \t"));
      if (key == "alpha") snap.alpha = parse_cell(value, where);
      else if (key == "h_rho") snap.h_rho = parse_cell(value, where);
      else if (key == "h_t") snap.h_t = parse_cell(value, where);
      else if (key == "t") snap.t = parse_cell(value, where);
      continue;
    }
    if (!saw_header) {
      if (line != "rho,m,u") {
        throw IoError(where + ": expected header 'rho,m,u', got '" + line +
                      "'");
      }
      saw_header = true;
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    double fields[3];
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(row, cell, ',')) {
        throw IoError(where + ": expected 3 columns");
      }
      fields[k] = parse_cell(cell, where);
    }
    if (std::getline(row, cell, ',')) {
      throw IoError(where + ": expected 3 columns");
    }
    snap.rho.push_back(fields[0]);
    snap.m.push_back(fields[1]);
    snap.u.push_back(fields[2]);
  }
  if (!saw_header) throw IoError(path + ": missing 'rho,m,u' header");
  return snap;
}

void write_table(const std::string& path,
                 const std::vector<std::string>& metadata,
                 const std::string& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_for_write(path);
  for (const std::string& meta : metadata) out << "# " << meta << '\n';
  out << header << '\n';
  for (const std::vector<std::string>& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << row[k];
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace aggmass
