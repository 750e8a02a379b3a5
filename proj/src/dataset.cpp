// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
#include "dpfair/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dpfair {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& tok, const char* what, std::size_t line_no) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty() || !std::isfinite(v)) {
    throw std::runtime_error(std::string(what) + " not numeric at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

void validate(const Dataset& data) {
  if (data.records.empty()) throw std::invalid_argument("dataset is empty");
  if (data.num_groups < 2) throw std::invalid_argument("dataset needs at least 2 groups");
  if (data.dim < 1) throw std::invalid_argument("dataset needs at least 1 feature");
  for (const Record& r : data.records) {
    if (r.group < 0 || r.group >= data.num_groups) {
      throw std::invalid_argument("record group id out of range");
    }
    if (r.label != 0 && r.label != 1) throw std::invalid_argument("record label not binary");
    if (static_cast<int>(r.x.size()) != data.dim) {
      throw std::invalid_argument("record feature width mismatch");
    }
  }
}

std::vector<std::string> degenerate_cells(const Dataset& data) {
  std::vector<int> counts(static_cast<std::size_t>(data.num_groups) * 2, 0);
  for (const Record& r : data.records) ++counts[static_cast<std::size_t>(r.group) * 2 + r.label];
  std::vector<std::string> out;
  for (int a = 0; a < data.num_groups; ++a) {
    for (int y = 0; y < 2; ++y) {
      if (counts[static_cast<std::size_t>(a) * 2 + y] == 0) {
        out.push_back("degenerate cell (" + std::to_string(a) + "," + std::to_string(y) + ")");
      }
    }
  }
  return out;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema, bool strict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header row in " + path);
  const std::vector<std::string> header = split_csv_line(line);

  int group_col = -1, label_col = -1;
  std::vector<int> feature_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == schema.group_column) {
      group_col = static_cast<int>(j);
    } else if (header[j] == schema.label_column) {
      label_col = static_cast<int>(j);
    } else {
      feature_cols.push_back(static_cast<int>(j));
    }
  }
  if (group_col < 0) throw std::runtime_error("missing group column '" + schema.group_column + "'");
  if (label_col < 0) throw std::runtime_error("missing label column '" + schema.label_column + "'");
  if (feature_cols.empty()) throw std::runtime_error("no feature columns in " + path);

  struct RawRecord {
    std::vector<double> x;
    std::string group;
    int label;
  };
  std::vector<RawRecord> raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()) + " at line " +
                               std::to_string(line_no));
    }
    RawRecord r;
    for (int j : feature_cols) r.x.push_back(parse_double(fields[j], "feature", line_no));
    const double y = parse_double(fields[label_col], "label", line_no);
    if (y != 0.0 && y != 1.0) {
      throw std::runtime_error("label not binary at line " + std::to_string(line_no));
    }
    r.label = static_cast<int>(y);
    r.group = fields[group_col];
    raw.push_back(std::move(r));
  }
  if (raw.empty()) throw std::runtime_error("no data rows in " + path);

  // Dense ids ordered by (count desc, original value asc); index 0 = anchor.
  std::map<std::string, int> counts;
  for (const RawRecord& r : raw) ++counts[r.group];
  if (counts.size() < 2) throw std::runtime_error("need at least 2 distinct groups in " + path);
  std::vector<std::pair<std::string, int>> order(counts.begin(), counts.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < order.size(); ++i) ids[order[i].first] = static_cast<int>(i);

  Dataset data;
  data.num_groups = static_cast<int>(order.size());
  data.dim = static_cast<int>(feature_cols.size());
  for (RawRecord& r : raw) {
    data.records.push_back({std::move(r.x), ids[r.group], r.label});
  }
  validate(data);
  if (strict) {
    const std::vector<std::string> degenerate = degenerate_cells(data);
    if (!degenerate.empty()) throw std::runtime_error(degenerate.front() + " in " + path);
  }
  return data;
}

void write_csv(const Dataset& data, const std::string& path) {
  validate(data);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int j = 0; j < data.dim; ++j) out << 'f' << j << ',';
  out << "group,label\n";
  char buf[64];
  for (const Record& r : data.records) {
    for (double v : r.x) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << r.group << ',' << r.label << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Dataset synth_generate(const SynthParams& params) {
  if (params.num_groups < 2) throw std::invalid_argument("num_groups must be >= 2");
  if (params.dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (params.m < 2 * static_cast<std::size_t>(params.num_groups)) {
    throw std::invalid_argument("m must be at least 2 * num_groups");
  }
  if (!(params.bias >= 0.0) || !std::isfinite(params.bias)) {
    throw std::invalid_argument("bias must be nonnegative and finite");
  }

  Rng rng(params.seed);
  Dataset data;
  data.num_groups = params.num_groups;
  data.dim = params.dim;
  data.records.reserve(params.m);
  for (std::size_t i = 0; i < params.m; ++i) {
    const int a = static_cast<int>(i % params.num_groups);
    const double spread =
        2.0 * static_cast<double>(a) / static_cast<double>(params.num_groups - 1) - 1.0;
    Record r;
    r.group = a;
    r.x.resize(params.dim);
    double score = 0.0;
    for (int j = 0; j < params.dim; ++j) {
      r.x[j] = rng.normal() + (j == 0 ? params.bias * spread : 0.0);
      score += r.x[j];
    }
    score /= std::sqrt(static_cast<double>(params.dim));
    r.label = score + params.bias * spread + 0.5 * rng.normal() > 0.0 ? 1 : 0;
    data.records.push_back(std::move(r));
  }
  return data;
}

GroupMarginals group_marginals(const Dataset& data) {
  validate(data);
  GroupMarginals marg;
  marg.num_groups = data.num_groups;
  marg.q2.assign(static_cast<std::size_t>(data.num_groups) * 2, 0.0);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (const Record& r : data.records) marg.q2[static_cast<std::size_t>(r.group) * 2 + r.label] += inv;
  marg.min_q = *std::min_element(marg.q2.begin(), marg.q2.end());
  return marg;
}

JointStats joint_stats(const Dataset& data, const std::vector<int>& predictions) {
  validate(data);
  if (predictions.size() != data.size()) {
    throw std::invalid_argument("prediction vector must match the dataset size");
  }
  JointStats stats;
  stats.num_groups = data.num_groups;
  stats.q3.assign(static_cast<std::size_t>(2) * data.num_groups * 2, 0.0);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int yhat = predictions[i];
    if (yhat != 0 && yhat != 1) throw std::invalid_argument("predictions must be binary");
    const Record& r = data.records[i];
    stats.q3[(static_cast<std::size_t>(yhat) * data.num_groups + r.group) * 2 + r.label] += inv;
  }
  stats.marginals = group_marginals(data);
  return stats;
}

}  // namespace dpfair
