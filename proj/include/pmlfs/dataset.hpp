#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pmlfs/matrix.hpp"

namespace pmlfs {

/// Feature matrix plus binary candidate-label matrix.
///
/// Invariants (checked by `validate`): x and y have the same number of rows,
/// every y entry is 0 or 1, every row of y has at least one candidate label,
/// every x entry is finite.
struct PmlDataset {
  Matrix x;
  Matrix y;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  std::size_t n_instances() const { return x.rows(); }
  std::size_t n_features() const { return x.cols(); }
  std::size_t n_labels() const { return y.cols(); }
};

/// Throws DataError describing the first violated invariant.
void validate(const PmlDataset& ds);

/// Fills in default names ("f0", "l0", ...) when absent and validates.
PmlDataset make_dataset(Matrix x, Matrix y, std::vector<std::string> feature_names = {},
                        std::vector<std::string> label_names = {});

/// Instances `rows` of `ds`, in that order.
PmlDataset subset(const PmlDataset& ds, std::span<const std::size_t> rows);

struct CsvTable {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;
};

/// Comma-separated numbers with an optional header row, detected by a
/// non-numeric first cell. Throws DataError with 1-based line/column.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const Matrix& values,
               std::span<const std::string> header = {});

/// Shortest round-trip decimal representation.
std::string format_number(double v);

PmlDataset load_csv_pair(const std::filesystem::path& x_path, const std::filesystem::path& y_path);

/// Reads a label matrix (binary, optional header) such as a ground-truth sidecar.
Matrix load_label_csv(const std::filesystem::path& path);

/// Maps every feature column affinely onto [0, 1]; constant columns become 0.
PmlDataset normalize_minmax(const PmlDataset& ds);

struct PartialLabelData {
  PmlDataset partial;
  Matrix truth;
};

/// Flips each zero of `ds.y` to one independently with probability `rate`.
/// Existing ones are never cleared. The clean matrix is kept as `truth`.
PartialLabelData inject_candidate_noise(const PmlDataset& ds, double rate, std::uint64_t seed);

struct FoldPlan {
  std::size_t n_folds = 0;
  std::vector<std::size_t> assignments;  // fold index per instance
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

FoldPlan make_folds(std::size_t n, std::size_t n_folds, std::uint64_t seed);

/// Parameters of a synthetic dataset whose labels are driven by a few
/// informative features while most features carry label-independent structure.
struct PlantedConfig {
  std::size_t n = 300;
  std::size_t d = 50;
  std::size_t l = 8;
  std::size_t n_informative = 5;
  /// Number of label-independent feature groups sharing the remaining columns.
  std::size_t n_distractor_groups = 3;
  /// Per-entry noise added to each feature before normalization.
  double feature_noise = 0.05;
  std::uint64_t seed = 7;
};

struct PlantedDataset {
  PmlDataset data;  // normalized features, clean labels
  /// Columns that drive the labels, ascending, at seed-drawn positions.
  std::vector<std::size_t> informative;
};

PlantedDataset make_planted_dataset(const PlantedConfig& cfg);

}  // namespace pmlfs
