// Copyright (c) 2026 the dpfair authors. MIT license; see LICENSE.
//
// Records, CSV I/O, the synthetic generator, and empirical joint statistics.
// Group values are re-indexed to dense ids 0..|A|-1 at load time; id 0 (the
// anchor every fairness comparison is made against) is the most frequent
// group, ties going to the lowest original column value (byte-wise).
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dpfair/random.hpp"

namespace dpfair {

struct Record {
  std::vector<double> x;
  int group = 0;
  int label = 0;
};

struct Dataset {
  std::vector<Record> records;
  int num_groups = 0;
  int dim = 0;

  std::size_t size() const { return records.size(); }
};

// Throws std::invalid_argument if sizes, group ids, labels, or feature widths
// are out of contract (non-empty, >= 2 groups, labels binary, 0 <= a < |A|).
void validate(const Dataset& data);

// Names every (group, label) cell with zero records, e.g. "degenerate cell (1,0)".
// Empty result means all 2|A| cells are populated.
std::vector<std::string> degenerate_cells(const Dataset& data);

struct CsvSchema {
  std::string group_column = "group";
  std::string label_column = "label";
};

// Dialect: comma separator, mandatory header row, '.' decimal, no quoting.
// All columns other than the group and label columns are features, in header
// order. Errors carry 1-based line numbers ("label not binary at line 7").
// strict additionally rejects datasets with degenerate (group, label) cells.
Dataset load_csv(const std::string& path, const CsvSchema& schema = {}, bool strict = false);

// Header f0..f{d-1},group,label; features printed with 17 significant digits
// so load_csv(write_csv(data)) round-trips bit-exactly for any dataset whose
// group ids follow the canonical frequency order (all datasets produced by
// this library do).
void write_csv(const Dataset& data, const std::string& path);

struct SynthParams {
  std::uint64_t seed = 1;
  std::size_t m = 2000;
  int num_groups = 2;
  int dim = 4;
  double bias = 0.3;  // 0 makes the groups exchangeable
};

// Planted-bias Gaussian mixture. Record i belongs to group i mod num_groups;
// features are standard normals with the first coordinate shifted by
// bias * s_a, and the label is 1{mean(x) + bias * s_a + 0.5 * noise > 0},
// where s_a in [-1, 1] spreads the groups (s_0 = -1, s_{|A|-1} = +1). Both
// shifts push the same way, so a feature-only classifier picks up a false
// positive gap that grows with bias. Draw order per record: dim feature
// normals, then one label-noise normal.
Dataset synth_generate(const SynthParams& params);

// Empirical marginals q_{ay} = P_hat[A=a, Y=y]; min_q is the smallest cell.
struct GroupMarginals {
  int num_groups = 0;
  std::vector<double> q2;  // index a*2 + y
  double min_q = 0.0;

  double at(int a, int y) const { return q2[static_cast<std::size_t>(a) * 2 + y]; }
};
GroupMarginals group_marginals(const Dataset& data);

// Empirical joint q_{yhat,a,y} = P_hat[Yhat=yhat, A=a, Y=y] of a prediction
// vector, plus the prediction-free marginals. Entries sum to 1 within 1e-12.
struct JointStats {
  int num_groups = 0;
  std::vector<double> q3;  // index (yhat*|A| + a)*2 + y
  GroupMarginals marginals;

  double at(int yhat, int a, int y) const {
    return q3[(static_cast<std::size_t>(yhat) * num_groups + a) * 2 + y];
  }
};
JointStats joint_stats(const Dataset& data, const std::vector<int>& predictions);

}  // namespace dpfair
