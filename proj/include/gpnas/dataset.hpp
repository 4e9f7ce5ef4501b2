#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpnas/types.hpp"

namespace gpnas {

/// Rank labels follow the ascending convention: rank 1 is the best architecture.
enum class LabelKind { Rank, Score };

const char* to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& s);

/// One architecture: ordinal category codes plus an optional label.
struct ArchRecord {
  std::vector<int> features;
  std::optional<double> label;

  bool operator==(const ArchRecord&) const = default;
};

struct TaskDataset {
  int task_id = 0;
  std::vector<ArchRecord> records;
  std::vector<int> cardinalities;
  LabelKind label_kind = LabelKind::Rank;

  Index size() const { return static_cast<Index>(records.size()); }
  Index dim() const { return static_cast<Index>(cardinalities.size()); }
  bool has_labels() const;

  /// Ordinal codes as a dense n x d matrix.
  MatrixXd feature_matrix() const;
  /// Labels as a vector; throws if any record is unlabeled.
  VectorXd labels() const;
  /// Orientation-normalized target: -rank for rank labels, the score otherwise.
  /// Larger is always better.
  VectorXd goodness() const;

  /// Records at the given indices, in that order, sharing this dataset's schema.
  TaskDataset subset(const std::vector<Index>& indices) const;

  bool operator==(const TaskDataset&) const = default;
};

/// Checks all dataset invariants; throws Error(Data) on the first violation.
void validate(const TaskDataset& ds);

/// Column declaration for ingestion. Declared cardinalities win over observed ones.
struct DatasetSchema {
  std::optional<std::vector<int>> cardinalities;
  LabelKind label_kind = LabelKind::Rank;
  int task_id = 0;
};

/// Loads CSV (header `f0,...,f{d-1},label`) or JSON (by `.json` extension).
TaskDataset load_dataset(const std::filesystem::path& path, const DatasetSchema& schema = {});
TaskDataset parse_csv_dataset(const std::string& text, const DatasetSchema& schema = {});
TaskDataset parse_json_dataset(const std::string& text, const DatasetSchema& schema = {});

void save_dataset(const TaskDataset& ds, const std::filesystem::path& path);
std::string to_csv(const TaskDataset& ds);
std::string to_json(const TaskDataset& ds);

struct SplitPlan {
  std::vector<Index> train_indices;
  std::vector<Index> validation_indices;
  std::uint64_t seed = 0;
};

/// Seeded shuffle; |train| = round(fraction * n), the remainder validates. Both sides
/// are returned sorted.
SplitPlan split(const TaskDataset& ds, double fraction, std::uint64_t seed);
SplitPlan split(Index n, double fraction, std::uint64_t seed);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gpnas
