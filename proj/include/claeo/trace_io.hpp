#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "claeo/history_stack.hpp"
#include "claeo/simulator.hpp"

namespace claeo {

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> trace_columns(int n, int m, int r) {
  std::vector<std::string> cols;
  cols.push_back("t");
  for (int i = 1; i <= n; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) cols.push_back("xhat" + std::to_string(i));
  cols.push_back("xhat_ext");
  for (int i = 1; i <= m; ++i) cols.push_back("What" + std::to_string(i));
  for (int i = 1; i <= r; ++i) cols.push_back("theta_c" + std::to_string(i));
  for (int i = 1; i <= r; ++i) cols.push_back("theta_a" + std::to_string(i));
  cols.push_back("u");
  cols.push_back("delta_t");
  cols.push_back("a1_metric");
  cols.push_back("stack_min_sv");
  for (int i = 1; i <= n + 1; ++i) cols.push_back("eta" + std::to_string(i));
  cols.push_back("J");
  cols.push_back("gain_lmin");
  cols.push_back("gain_lmax");
  cols.push_back("mu_rho_norm");
  return cols;
}

inline std::vector<double> flatten_row(const TraceRow& row) {
  std::vector<double> v;
  v.push_back(row.t);
  for (int i = 0; i < row.x.size(); ++i) v.push_back(row.x(i));
  for (int i = 0; i < row.xhat.size(); ++i) v.push_back(row.xhat(i));
  v.push_back(row.xhat_ext);
  for (int i = 0; i < row.What.size(); ++i) v.push_back(row.What(i));
  for (int i = 0; i < row.theta_c.size(); ++i) v.push_back(row.theta_c(i));
  for (int i = 0; i < row.theta_a.size(); ++i) v.push_back(row.theta_a(i));
  v.push_back(row.u);
  v.push_back(row.delta_t);
  v.push_back(row.a1_metric);
  v.push_back(row.stack_min_sv);
  for (int i = 0; i < row.eta.size(); ++i) v.push_back(row.eta(i));
  v.push_back(row.accumulated_J);
  v.push_back(row.gain_lmin);
  v.push_back(row.gain_lmax);
  v.push_back(row.mu_rho_norm);
  return v;
}

inline void write_trace_csv(const std::string& path, const SimTrace& trace,
                            int n, int m, int r) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open trace file for writing: " + path);
  const auto cols = trace_columns(n, m, r);
  out << "#";
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : " ") << cols[i];
  out << "\n";
  for (const auto& row : trace.rows) {
    const auto vals = flatten_row(row);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i) out << ",";
      out << format_g17(vals[i]);
    }
    out << "\n";
  }
}

inline SimTrace read_trace_csv(const std::string& path, int n, int m, int r) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open trace file: " + path);
  std::string line;
  SimTrace trace;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    std::size_t k = 0;
    TraceRow row;
    auto take_vec = [&](int len) {
      Vec v(len);
      for (int i = 0; i < len; ++i) v(i) = vals.at(k++);
      return v;
    };
    row.t = vals.at(k++);
    row.x = take_vec(n);
    row.xhat = take_vec(n);
    row.xhat_ext = vals.at(k++);
    row.What = take_vec(m);
    row.theta_c = take_vec(r);
    row.theta_a = take_vec(r);
    row.u = vals.at(k++);
    row.delta_t = vals.at(k++);
    row.a1_metric = vals.at(k++);
    row.stack_min_sv = vals.at(k++);
    row.eta = take_vec(n + 1);
    row.accumulated_J = vals.at(k++);
    row.gain_lmin = vals.at(k++);
    row.gain_lmax = vals.at(k++);
    row.mu_rho_norm = vals.at(k++);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

/// One row per record: index, regressor components, target.
inline void write_stack_csv(const std::string& path, const HistoryStack& stack) {
  std::ofstream out(path);
  if (!out) throw ContractError("cannot open stack file for writing: " + path);
  out << "# j";
  for (int i = 1; i <= stack.regressor_dim(); ++i) out << ",phi" << i;
  out << ",target\n";
  for (int j = 0; j < stack.fill_count(); ++j) {
    out << (j + 1);
    for (int i = 0; i < stack.regressor_dim(); ++i)
      out << "," << format_g17(stack.regressors()(i, j));
    out << "," << format_g17(stack.targets()(j)) << "\n";
  }
}

inline std::vector<std::pair<Vec, double>> read_stack_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open stack file: " + path);
  std::vector<std::pair<Vec, double>> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() < 3) throw ContractError("malformed stack row: " + line);
    Vec phi(vals.size() - 2);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i) phi(i - 1) = vals[i];
    records.emplace_back(phi, vals.back());
  }
  return records;
}

}  // namespace claeo
