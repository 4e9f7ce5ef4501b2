#include "gpnas/encoding.hpp"

#include <algorithm>
#include <string>

#include "gpnas/error.hpp"

namespace gpnas {

Index EncoderSpec::block_width(std::size_t column) const {
  const int c = cardinalities.at(column);
  return k == 1 ? c : (c - 1) + (k - 1);
}

Index EncoderSpec::total_width() const {
  Index w = 0;
  for (std::size_t j = 0; j < cardinalities.size(); ++j) w += block_width(j);
  return w;
}

std::vector<Index> EncoderSpec::column_offsets() const {
  std::vector<Index> offsets(cardinalities.size());
  Index at = 0;
  for (std::size_t j = 0; j < cardinalities.size(); ++j) {
    offsets[j] = at;
    at += block_width(j);
  }
  return offsets;
}

EncoderSpec EncoderSpec::for_dataset(const TaskDataset& ds, int k) {
  EncoderSpec spec;
  spec.k = k;
  spec.cardinalities = ds.cardinalities;
  for (int& c : spec.cardinalities) c = std::max(c, 2);
  validate(spec);
  return spec;
}

void validate(const EncoderSpec& spec) {
  if (spec.k < 1) fail(ErrorKind::Usage, "encoder k must be >= 1");
  for (std::size_t j = 0; j < spec.cardinalities.size(); ++j)
    if (spec.cardinalities[j] < 2)
      fail(ErrorKind::Usage, "encoder cardinality of column " + std::to_string(j) + " must be >= 2");
}

namespace {

void encode_into(const std::vector<int>& features, const EncoderSpec& spec, const std::vector<Index>& offsets,
                 Eigen::Ref<VectorXd> row) {
  if (features.size() != spec.cardinalities.size())
    fail(ErrorKind::Data, "feature vector has " + std::to_string(features.size()) + " columns, encoder expects " +
                              std::to_string(spec.cardinalities.size()));
  row.setZero();
  for (std::size_t j = 0; j < features.size(); ++j) {
    const int v = features[j];
    if (v < 0 || v >= spec.cardinalities[j])
      fail(ErrorKind::Data, "column " + std::to_string(j) + ": value " + std::to_string(v) + " outside [0, " +
                                std::to_string(spec.cardinalities[j]) + ")");
    if (v == 0) continue;
    row.segment(offsets[j] + (v - 1), spec.k).setOnes();
  }
}

}  // namespace

VectorXd encode_row(const std::vector<int>& features, const EncoderSpec& spec) {
  validate(spec);
  VectorXd row(spec.total_width());
  encode_into(features, spec, spec.column_offsets(), row);
  return row;
}

EncodedMatrix encode(const std::vector<std::vector<int>>& features, const EncoderSpec& spec) {
  validate(spec);
  EncodedMatrix m;
  m.spec = spec;
  m.column_offsets = spec.column_offsets();
  m.data.resize(static_cast<Index>(features.size()), spec.total_width());
  VectorXd row(spec.total_width());
  for (std::size_t i = 0; i < features.size(); ++i) {
    encode_into(features[i], spec, m.column_offsets, row);
    m.data.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

EncodedMatrix encode(const TaskDataset& ds, const EncoderSpec& spec) {
  std::vector<std::vector<int>> features;
  features.reserve(ds.records.size());
  for (const auto& r : ds.records) features.push_back(r.features);
  return encode(features, spec);
}

std::vector<std::vector<int>> decode(const EncodedMatrix& m) {
  const auto& spec = m.spec;
  validate(spec);
  if (m.data.cols() != spec.total_width()) fail(ErrorKind::Data, "encoded matrix width does not match its spec");
  std::vector<std::vector<int>> out(static_cast<std::size_t>(m.data.rows()),
                                    std::vector<int>(spec.cardinalities.size(), 0));
  for (Index i = 0; i < m.data.rows(); ++i) {
    for (std::size_t j = 0; j < spec.cardinalities.size(); ++j) {
      const Index offset = m.column_offsets[j];
      const Index width = spec.block_width(j);
      const auto block = m.data.row(i).segment(offset, width);
      Index first = -1;
      Index ones = 0;
      for (Index p = 0; p < width; ++p) {
        const double b = block[p];
        if (b == 1.0) {
          if (first < 0) first = p;
          ++ones;
        } else if (b != 0.0) {
          fail(ErrorKind::Data, "row " + std::to_string(i) + ": non-binary entry in block " + std::to_string(j));
        }
      }
      if (ones == 0) continue;
      const bool consecutive = ones == spec.k && (block.segment(first, ones).array() == 1.0).all();
      const int value = static_cast<int>(first) + 1;
      if (!consecutive || value >= spec.cardinalities[j])
        fail(ErrorKind::Data, "row " + std::to_string(i) + ": block " + std::to_string(j) +
                                  " is not a valid " + std::to_string(spec.k) + "-hot code");
      out[static_cast<std::size_t>(i)][j] = value;
    }
  }
  return out;
}

VectorXd expand_column_weights(const EncoderSpec& spec, const VectorXd& column_weights) {
  if (column_weights.size() != static_cast<Index>(spec.cardinalities.size()))
    fail(ErrorKind::Usage, "column weight count does not match the number of columns");
  VectorXd w(spec.total_width());
  const auto offsets = spec.column_offsets();
  for (std::size_t j = 0; j < offsets.size(); ++j) w.segment(offsets[j], spec.block_width(j)).setConstant(column_weights[j]);
  return w;
}

}  // namespace gpnas
