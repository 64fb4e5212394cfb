#include "spheresr/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace spheresr {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

void expect_header(std::ifstream& in, const std::string& want,
                   const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != want)
    throw Error("bad header in " + path + ": got '" + line + "', want '" +
                want + "'");
}

double parse_double(const std::string& field, const std::string& path) {
  std::size_t pos = 0;
  const double v = std::stod(field, &pos);
  if (pos != field.size()) throw Error("bad numeric field '" + field + "' in " + path);
  return v;
}

long parse_long(const std::string& field, const std::string& path) {
  std::size_t pos = 0;
  const long v = std::stol(field, &pos);
  if (pos != field.size()) throw Error("bad integer field '" + field + "' in " + path);
  return v;
}

}  // namespace

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_grid_csv(const SphereGrid& grid, const std::string& path) {
  auto out = open_out(path);
  out << "index,q,p,phi,theta\n";
  for (int i = 0; i < grid.size(); ++i) {
    const auto [q, p] = grid.lattice_of(i);
    const SpherePoint& x = grid.point(i);
    out << i << ',' << q << ',' << p << ',' << format_g17(x.phi) << ','
        << format_g17(x.theta) << '\n';
  }
}

void write_coeffs_csv(const HarmonicCoeffs& coeffs, const std::string& path) {
  auto out = open_out(path);
  out << "n,k,re,im\n";
  for (int i = 0; i < coeff_count(coeffs.N); ++i) {
    const HarmonicIndex idx = coeff_unindex(i);
    out << idx.n << ',' << idx.k << ',' << format_g17(coeffs.values[i].real())
        << ',' << format_g17(coeffs.values[i].imag()) << '\n';
  }
}

HarmonicCoeffs read_coeffs_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "n,k,re,im", path);
  std::vector<std::complex<double>> values;
  std::string line;
  int max_n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    const auto fields = split_row(line);
    if (fields.size() != 4) throw Error("bad row in " + path + ": " + line);
    const int n = static_cast<int>(parse_long(fields[0], path));
    const int k = static_cast<int>(parse_long(fields[1], path));
    const int i = coeff_index(n, k);
    if (i != static_cast<int>(values.size()))
      throw Error("rows out of coeff_index order in " + path);
    values.emplace_back(parse_double(fields[2], path), parse_double(fields[3], path));
    max_n = std::max(max_n, n);
  }
  if (static_cast<int>(values.size()) != coeff_count(max_n))
    throw Error("coefficient file is not a complete degree block: " + path);
  HarmonicCoeffs coeffs;
  coeffs.N = max_n;
  coeffs.values = Eigen::Map<const Eigen::VectorXcd>(values.data(), values.size());
  coeffs.real_symmetric = coeffs.check_real_symmetric();
  return coeffs;
}

void write_gridded_csv(const GriddedFunction& g, const std::string& path) {
  auto out = open_out(path);
  out << "index,value\n";
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    out << i << ',' << format_g17(g.values[i]) << '\n';
}

GriddedFunction read_gridded_csv(const std::string& path,
                                 std::shared_ptr<const SphereGrid> grid) {
  auto in = open_in(path);
  expect_header(in, "index,value", path);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(grid->size());
  std::string line;
  Eigen::Index count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    const auto fields = split_row(line);
    if (fields.size() != 2) throw Error("bad row in " + path + ": " + line);
    const long i = parse_long(fields[0], path);
    if (i < 0 || i >= grid->size())
      throw DomainMismatchError("gridded index out of range in " + path);
    values[i] = parse_double(fields[1], path);
    ++count;
  }
  if (count != grid->size())
    throw DomainMismatchError("gridded file has " + std::to_string(count) +
                              " rows, grid has " + std::to_string(grid->size()));
  return {std::move(grid), std::move(values)};
}

void write_signal_csv(const DiracSignal& signal, const std::string& path) {
  auto out = open_out(path);
  out << "index,phi,theta,amplitude,cell\n";
  std::vector<int> cell_of(signal.grid ? signal.grid->size() : 0, -1);
  for (std::size_t c = 0; c < signal.witness.size(); ++c)
    for (int idx : signal.witness[c]) cell_of[idx] = static_cast<int>(c);
  for (int m = 0; m < signal.size(); ++m) {
    const int idx = signal.support[m];
    const SpherePoint& x = signal.grid->point(idx);
    out << idx << ',' << format_g17(x.phi) << ',' << format_g17(x.theta) << ','
        << format_g17(signal.amplitudes[m]) << ','
        << (cell_of.empty() ? -1 : cell_of[idx]) << '\n';
  }
}

DiracSignal read_signal_csv(const std::string& path,
                            std::shared_ptr<const SphereGrid> grid) {
  auto in = open_in(path);
  expect_header(in, "index,phi,theta,amplitude,cell", path);
  DiracSignal signal;
  signal.grid = grid;
  std::vector<double> amps;
  std::vector<std::pair<int, int>> cells;  // (cell, support position)
  std::string line;
  int max_cell = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    const auto fields = split_row(line);
    if (fields.size() != 5) throw Error("bad row in " + path + ": " + line);
    const int idx = static_cast<int>(parse_long(fields[0], path));
    if (idx < 0 || idx >= grid->size())
      throw DomainMismatchError("signal index out of range in " + path);
    const SpherePoint& x = grid->point(idx);
    if (std::abs(x.phi - parse_double(fields[1], path)) > 1e-12 ||
        std::abs(x.theta - parse_double(fields[2], path)) > 1e-12)
      throw DomainMismatchError("signal row coordinates do not match grid " +
                                std::to_string(grid->L()) + " in " + path);
    const int cell = static_cast<int>(parse_long(fields[4], path));
    signal.support.push_back(idx);
    amps.push_back(parse_double(fields[3], path));
    if (cell >= 0) cells.emplace_back(cell, signal.size() - 1);
    max_cell = std::max(max_cell, cell);
  }
  signal.amplitudes = Eigen::Map<const Eigen::VectorXd>(amps.data(), amps.size());
  if (max_cell >= 0 && cells.size() == signal.support.size()) {
    signal.witness.assign(max_cell + 1, {});
    for (const auto& [cell, pos] : cells)
      signal.witness[cell].push_back(signal.support[pos]);
  }
  signal.validate();
  return signal;
}

}  // namespace spheresr
