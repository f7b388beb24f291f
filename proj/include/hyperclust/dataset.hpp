#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperclust/common.hpp"

namespace hyperclust {

struct Provenance {
  std::string source;
  bool normalized = false;
  bool centered = false;
};

// n x d point matrix with optional ground truth.
struct Dataset {
  Matrix points;
  std::optional<std::vector<int>> truth_labels;
  std::vector<std::string> feature_names;
  Provenance provenance;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(points.cols()); }
};

struct CsvOptions {
  bool has_header = false;
  std::optional<std::size_t> label_column;
};

// Throws DataError on a missing file, ragged rows, or a non-numeric cell.
// Label cells are mapped to dense ids in order of first appearance.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes points (and a trailing `label` column when truth exists) with 17
// significant digits so that a reload reproduces every value exactly.
void save_csv(const Dataset& ds, const std::filesystem::path& path);
void write_csv(const Dataset& ds, std::ostream& out);

struct PreprocessSteps {
  bool minmax = false;
  bool center = false;
};

// Min-max first, then centering. Constant columns normalize to 0.
Dataset preprocess(Dataset ds, const PreprocessSteps& steps);

enum class SynthShape { circles, moons, spiral, spiral_single };

std::optional<SynthShape> parse_shape(std::string_view name);

// 2-D benchmark clouds with n/2 points per branch. `noise` is the standard
// deviation of an isotropic Gaussian perturbation.
Dataset gen_synthetic(SynthShape shape, std::size_t n, double noise, std::uint64_t seed);

// FNV-1a over the raw point values and labels; identifies a dataset in reports.
std::uint64_t dataset_hash(const Dataset& ds);

}  // namespace hyperclust
