#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qosbroker/model.hpp"

namespace qosbroker {

/// Min/max of the present cells of one matrix column.
struct ColumnStats {
  std::string property;
  double min = 0.0;
  double max = 0.0;
  /// True when min == max or the column has no present value.
  bool degenerate = true;
};

/// (max - value) / (max - min). Requires non-degenerate stats and a value
/// already clamped to [min, max].
double normalize_minimize(double value, const ColumnStats& stats);

/// (value - min) / (max - min). Same preconditions as normalize_minimize.
double normalize_maximize(double value, const ColumnStats& stats);

/// Clamps into [min, max] and applies the direction's equation. Degenerate
/// columns yield 1.0.
double normalize_value(double value, const ColumnStats& stats, Direction direction);

std::vector<ColumnStats> column_stats(const QualityMatrix& matrix);

class NormalizedMatrix {
 public:
  NormalizedMatrix(QosSchema schema, std::vector<std::string> service_ids,
                   std::vector<double> values, std::vector<ColumnStats> stats);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t cols() const noexcept { return schema_.size(); }
  const QosSchema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& service_ids() const noexcept { return ids_; }
  const std::vector<ColumnStats>& stats() const noexcept { return stats_; }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }

 private:
  QosSchema schema_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::vector<ColumnStats> stats_;
};

/// Per column: stats over present cells, then min/max normalization by the
/// schema direction. Degenerate columns map present cells to 1.0; missing
/// cells map to 0.0.
NormalizedMatrix normalize_matrix(const QualityMatrix& matrix);

/// Normalizes the requested values against candidate column stats. `stats`
/// is aligned with `schema`; the result covers only properties present in
/// `requirements`, in schema order.
std::vector<double> normalize_request(const QosProfile& requirements,
                                      const std::vector<ColumnStats>& stats,
                                      const QosSchema& schema);

}  // namespace qosbroker
