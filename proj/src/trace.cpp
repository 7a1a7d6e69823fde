#include "tendon/trace.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tendon {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string trace_header(const ScenarioTrace& trace) {
  std::ostringstream h;
  h << "time_s";
  for (const std::string& j : trace.joint_names) h << ",theta_true_deg_" << j;
  for (const std::string& j : trace.joint_names) h << ",theta_hat_deg_" << j;
  for (const std::string& j : trace.joint_names) h << ",theta_target_deg_" << j;
  for (const std::string& m : trace.muscle_names) h << ",cmd_kgf_" << m;
  for (const std::string& m : trace.muscle_names) h << ",tension_kgf_" << m;
  for (const std::string& m : trace.muscle_names) h << ",len_m_" << m;
  for (const std::string& m : trace.muscle_names) h << ",target_len_m_" << m;
  for (const std::string& m : trace.muscle_names) h << ",stiffness_kgfmm_" << m;
  for (const std::string& m : trace.muscle_names) h << ",agonist_" << m;
  for (const std::string& m : trace.muscle_names) h << ",s_" << m;
  for (const std::string& m : trace.muscle_names) h << ",temp_c_" << m;
  for (const auto& [a, b] : trace.pair_names) h << ",pair_state_" << a << "_" << b;
  return h.str();
}

void export_trace(const ScenarioTrace& trace, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write trace to " + path.string());

  file << trace_header(trace) << "\n";
  for (const TraceRow& row : trace.rows) {
    std::ostringstream line;
    line << format_double(row.time);
    auto deg_block = [&](const VecX& v) {
      for (int i = 0; i < v.size(); ++i) line << "," << format_double(rad_to_deg(v[i]));
    };
    auto raw_block = [&](const VecX& v) {
      for (int i = 0; i < v.size(); ++i) line << "," << format_double(v[i]);
    };
    deg_block(row.theta_true);
    deg_block(row.theta_hat);
    deg_block(row.theta_target);
    raw_block(row.commanded);
    raw_block(row.realized);
    raw_block(row.measured_len);
    raw_block(row.target_len);
    raw_block(row.stiffness);
    for (bool a : row.agonist) line << "," << (a ? 1 : 0);
    raw_block(row.s);
    raw_block(row.temperature);
    for (int p : row.pair_state) line << "," << p;
    file << line.str() << "\n";
  }
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tendon
