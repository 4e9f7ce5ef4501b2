#pragma once

// k-hot encoding of ordinal columns.
//
// Value 0 is the all-zeros code. Value v >= 1 sets k consecutive ones starting at block
// position v - 1. Block width for a column of cardinality c:
//
//   k = 1:  c             (the last position is never set)
//   k >= 2: (c - 1) + (k - 1)
//
// For k = 2 both expressions equal c.

#include <vector>

#include "gpnas/dataset.hpp"
#include "gpnas/types.hpp"

namespace gpnas {

struct EncoderSpec {
  int k = 1;
  std::vector<int> cardinalities;

  Index block_width(std::size_t column) const;
  Index total_width() const;
  /// Start column of each original feature's block.
  std::vector<Index> column_offsets() const;

  /// Spec over a dataset's columns; cardinalities below 2 are raised to 2.
  static EncoderSpec for_dataset(const TaskDataset& ds, int k);

  bool operator==(const EncoderSpec&) const = default;
};

void validate(const EncoderSpec& spec);

struct EncodedMatrix {
  MatrixXd data;
  std::vector<Index> column_offsets;
  EncoderSpec spec;
};

EncodedMatrix encode(const TaskDataset& ds, const EncoderSpec& spec);
EncodedMatrix encode(const std::vector<std::vector<int>>& features, const EncoderSpec& spec);

/// One encoded row for a single feature vector.
VectorXd encode_row(const std::vector<int>& features, const EncoderSpec& spec);

/// Exact inverse of encode; throws Error(Data) on rows that break the block structure.
std::vector<std::vector<int>> decode(const EncodedMatrix& m);

/// Expands one weight per original column to one weight per encoded dimension.
VectorXd expand_column_weights(const EncoderSpec& spec, const VectorXd& column_weights);

}  // namespace gpnas
