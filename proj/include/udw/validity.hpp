#pragma once

#include <string>
#include <utility>
#include <vector>

#include "udw/core_types.hpp"
#include "udw/correlators.hpp"
#include "udw/markovian.hpp"

namespace udw::validity {

using correlators::CorrelatorConstants;
using markovian::Block;

inline constexpr double default_threshold = 0.1;

struct BoundEntry {
  std::string label;  // printed expression, e.g. "pi*omega/a"
  double value = 0.0;
  double threshold = default_threshold;
  bool pass = false;
};

struct MatrixBound {
  Block block = Block::X;
  double max_y = 0.0;      // max |Y_nm|
  double max_z_ainv = 0.0;  // max |(Z A^-1)_nm|
  double threshold = default_threshold;
  bool pass = false;
};

struct ValidityReport {
  std::vector<BoundEntry> scalar_bounds;
  std::vector<MatrixBound> matrix_bounds;
  bool overall = false;
  std::vector<std::string> regime_notes;
  double threshold = default_threshold;

  // Labels of every failing bound (matrix bounds as "max|Y| (X)" etc.).
  std::vector<std::string> failed() const;
  const BoundEntry* find(const std::string& label) const;
};

struct CorrectionMatrices {
  Eigen::MatrixXcd y;  // g^2 M2 with C -> D', K -> S'
  Eigen::MatrixXcd z;  // NLO generator correction proportional to g^2 omega {D', S'}
  Eigen::MatrixXcd a;  // leading-order generator of the block
};

// Requires L > 0 (for the cross constants) and omega > 0.
CorrectionMatrices build_correction_matrices(const Params& p, const CorrelatorConstants& c, Block block);

ValidityReport evaluate(const Params& p, double threshold = default_threshold);
ValidityReport evaluate(const Params& p, const CorrelatorConstants& c, double threshold = default_threshold);

}  // namespace udw::validity
