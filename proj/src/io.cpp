// SPDX-License-Identifier: Apache-2.0
#include "cbal/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cbal {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
    if (pos != s.size()) fail(ErrorCode::ConfigParse, "trailing characters in " + context);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigParse, "cannot parse '" + s + "' in " + context);
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ProbabilityMatrix load_probability_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigParse, "cannot open probability CSV '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(parse_double(f, path + ":" + std::to_string(line_no)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::ConfigParse, "probability CSV '" + path + "' is empty");
  return validate_probability_matrix(Matrix::from_rows(rows));
}

FeatureTable load_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigParse, "cannot open feature CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ConfigParse, "feature CSV '" + path + "' is empty");
  const auto header = split_csv_line(strip_cr(line));
  if (header.size() < 2 || header.back() != "label")
    fail(ErrorCode::ConfigParse, "feature CSV header must end with 'label'");
  const int d = static_cast<int>(header.size()) - 1;

  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d + 1)
      fail(ErrorCode::ConfigParse,
           path + ":" + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
               " fields, expected " + std::to_string(d + 1));
    std::vector<double> row(d);
    for (int j = 0; j < d; ++j)
      row[j] = parse_double(fields[j], path + ":" + std::to_string(line_no));
    const double y = parse_double(fields[d], path + ":" + std::to_string(line_no));
    if (y < 0 || y != std::floor(y))
      fail(ErrorCode::ConfigParse,
           path + ":" + std::to_string(line_no) + " label must be a non-negative integer");
    feats.push_back(std::move(row));
    labels.push_back(static_cast<int>(y));
  }
  if (feats.empty()) fail(ErrorCode::ConfigParse, "feature CSV '" + path + "' has no data rows");
  return FeatureTable{Matrix::from_rows(feats), std::move(labels)};
}

void write_metrics_csv(const std::string& path, const ExperimentRecord& record, int n_classes) {
  std::ostringstream out;
  out << "cycle,labeled_size,test_accuracy,l1_score,solver_time_s";
  for (int k = 0; k < n_classes; ++k) out << ",h" << k;
  out << "\n";
  for (const CycleMetrics& m : record.cycles) {
    out << m.cycle << ',' << m.labeled_size << ',' << format_double(m.test_accuracy) << ','
        << format_double(m.l1) << ',' << format_double(m.solver_seconds);
    for (int v : m.histogram) out << ',' << v;
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "lambda,entropy_loss,l1_loss,l1_score\n";
  for (const SweepRow& r : rows)
    out << format_double(r.lambda) << ',' << format_double(r.entropy_loss) << ','
        << format_double(r.l1_loss) << ',' << format_double(r.l1_score) << "\n";
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigParse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::OutputUnwritable, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::OutputUnwritable, "short write to '" + path + "'");
}

}  // namespace cbal
