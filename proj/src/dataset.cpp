#include "hyperclust/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace hyperclust {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));

  Dataset ds;
  ds.provenance.source = path.string();
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::map<std::string, int, std::less<>> label_ids;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (width == 0) {
      width = cells.size();
      if (options.label_column && *options.label_column >= width)
        throw DataError(fmt::format("label column {} out of range for {} columns", *options.label_column, width));
      if (width - (options.label_column ? 1 : 0) == 0) throw DataError("no feature columns");
    } else if (cells.size() != width) {
      throw DataError(fmt::format("line {}: expected {} columns, found {}", line_no, width, cells.size()));
    }
    if (header_pending) {
      header_pending = false;
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (!options.label_column || c != *options.label_column) ds.feature_names.emplace_back(cells[c]);
      continue;
    }
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (options.label_column && c == *options.label_column) {
        auto it = label_ids.find(cells[c]);
        if (it == label_ids.end()) it = label_ids.emplace(std::string(cells[c]), static_cast<int>(label_ids.size())).first;
        labels.push_back(it->second);
        continue;
      }
      const auto value = parse_real(cells[c]);
      if (!value || !std::isfinite(*value))
        throw DataError(fmt::format("line {}, column {}: non-numeric cell '{}'", line_no, c, cells[c]));
      row.push_back(*value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows");

  const std::size_t d = rows.front().size();
  ds.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) ds.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  if (options.label_column) ds.truth_labels = std::move(labels);
  return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  write_csv(ds, out);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  std::string header;
  for (std::size_t c = 0; c < ds.dims(); ++c) {
    if (c) header += ',';
    header += c < ds.feature_names.size() ? ds.feature_names[c] : fmt::format("x{}", c);
  }
  if (ds.truth_labels) header += ",label";
  out << header << '\n';
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < ds.dims(); ++c) {
      if (c) line += ',';
      line += fmt::format("{:.17g}", ds.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    if (ds.truth_labels) line += fmt::format(",{}", (*ds.truth_labels)[r]);
    out << line << '\n';
  }
}

Dataset preprocess(Dataset ds, const PreprocessSteps& steps) {
  if (steps.minmax) {
    for (Eigen::Index c = 0; c < ds.points.cols(); ++c) {
      auto col = ds.points.col(c);
      const double lo = col.minCoeff();
      const double range = col.maxCoeff() - lo;
      if (range > 0.0)
        col = (col.array() - lo) / range;
      else
        col.setZero();
    }
    ds.provenance.normalized = true;
  }
  if (steps.center) {
    const Eigen::RowVectorXd mean = ds.points.colwise().mean();
    ds.points.rowwise() -= mean;
    ds.provenance.centered = true;
  }
  return ds;
}

std::optional<SynthShape> parse_shape(std::string_view name) {
  if (name == "circles") return SynthShape::circles;
  if (name == "moons") return SynthShape::moons;
  if (name == "spiral") return SynthShape::spiral;
  if (name == "spiral-single" || name == "spiral_single") return SynthShape::spiral_single;
  return std::nullopt;
}

Dataset gen_synthetic(SynthShape shape, std::size_t n, double noise, std::uint64_t seed) {
  if (n < 2) throw DataError(fmt::format("synthetic datasets need n >= 2, got {}", n));
  if (n % 2 != 0) throw DataError(fmt::format("synthetic datasets need an even n, got {}", n));
  if (!(noise >= 0.0)) throw DataError("noise must be >= 0");
  using std::numbers::pi;

  const std::size_t half = n / 2;
  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(n), 2);
  std::vector<int> labels(n);
  // Evenly spaced parameter in [0,1]; `closed` includes the right endpoint.
  auto param = [half](std::size_t i, bool closed) {
    const double denom = closed ? static_cast<double>(half > 1 ? half - 1 : 1) : static_cast<double>(half);
    return static_cast<double>(i) / denom;
  };

  for (std::size_t i = 0; i < half; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(half + i);
    labels[i] = 0;
    labels[half + i] = 1;
    switch (shape) {
      case SynthShape::circles: {
        // Outer ring radius 1, inner ring radius 0.5.
        const double t = 2.0 * pi * param(i, false);
        ds.points.row(a) << std::cos(t), std::sin(t);
        ds.points.row(b) << 0.5 * std::cos(t), 0.5 * std::sin(t);
        break;
      }
      case SynthShape::moons: {
        const double t = pi * param(i, true);
        ds.points.row(a) << std::cos(t), std::sin(t);
        ds.points.row(b) << 1.0 - std::cos(t), 0.5 - std::sin(t);
        break;
      }
      case SynthShape::spiral: {
        // Archimedean arm; sqrt spacing keeps the arc-length density roughly uniform.
        const double t = 0.5 * pi + 3.0 * pi * std::sqrt(param(i, true));
        const double r = t / (3.5 * pi);
        ds.points.row(a) << r * std::cos(t), r * std::sin(t);
        ds.points.row(b) << -r * std::cos(t), -r * std::sin(t);
        break;
      }
      case SynthShape::spiral_single: {
        // One arm over twice the angle; labels split the arm into inner and outer halves.
        auto arm = [&](double u) {
          const double t = 0.5 * pi + 4.0 * pi * std::sqrt(u);
          const double r = t / (4.5 * pi);
          return Eigen::RowVector2d(r * std::cos(t), r * std::sin(t));
        };
        const double step = 1.0 / static_cast<double>(n - 1);
        ds.points.row(a) = arm(static_cast<double>(i) * step);
        ds.points.row(b) = arm(static_cast<double>(half + i) * step);
        break;
      }
    }
  }

  if (noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise);
    for (Eigen::Index r = 0; r < ds.points.rows(); ++r)
      for (Eigen::Index c = 0; c < 2; ++c) ds.points(r, c) += gauss(rng);
  }
  ds.truth_labels = std::move(labels);
  ds.feature_names = {"x", "y"};
  ds.provenance.source = fmt::format("synthetic:{}:n={}:noise={}:seed={}",
                                     shape == SynthShape::circles  ? "circles"
                                     : shape == SynthShape::moons  ? "moons"
                                     : shape == SynthShape::spiral ? "spiral"
                                                                   : "spiral-single",
                                     n, noise, seed);
  return ds;
}

std::uint64_t dataset_hash(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t shape[2] = {ds.size(), ds.dims()};
  feed(shape, sizeof shape);
  for (std::size_t r = 0; r < ds.size(); ++r)
    for (std::size_t c = 0; c < ds.dims(); ++c) {
      const double v = ds.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      feed(&v, sizeof v);
    }
  if (ds.truth_labels) feed(ds.truth_labels->data(), ds.truth_labels->size() * sizeof(int));
  return h;
}

}  // namespace hyperclust
