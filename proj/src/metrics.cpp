#include "typedcrf/metrics.hpp"

#include "typedcrf/errors.hpp"

namespace typedcrf {

namespace {

void check_aligned(const std::vector<LabelGrid>& pred, const std::vector<LabelGrid>& gold) {
  if (pred.size() != gold.size())
    throw DimensionError("metrics: prediction and gold collections differ in length");
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i].size() != gold[i].size())
      throw DimensionError("metrics: prediction and gold grids differ in size");
}

}  // namespace

double metric_pixel_accuracy(const std::vector<LabelGrid>& pred,
                             const std::vector<LabelGrid>& gold) {
  check_aligned(pred, gold);
  long long total = 0, correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t c = 0; c < pred[i].size(); ++c) {
      ++total;
      if (pred[i][c] == gold[i][c]) ++correct;
    }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

double metric_snake_cell_accuracy(const std::vector<LabelGrid>& pred,
                                  const std::vector<LabelGrid>& gold, bool* defined) {
  check_aligned(pred, gold);
  long long total = 0, correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t c = 0; c < pred[i].size(); ++c) {
      if (gold[i][c] < 1 || gold[i][c] > 10) continue;
      ++total;
      if (pred[i][c] == gold[i][c]) ++correct;
    }
  if (defined) *defined = total > 0;
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

double metric_image_accuracy(const std::vector<int>& pred, const std::vector<int>& gold) {
  if (pred.size() != gold.size())
    throw DimensionError("metrics: image label vectors differ in length");
  if (pred.empty()) return 0.0;
  long long correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == gold[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

long long count_cells(const std::vector<LabelGrid>& grids) {
  long long total = 0;
  for (const LabelGrid& grid : grids) total += static_cast<long long>(grid.size());
  return total;
}

long long count_snake_cells(const std::vector<LabelGrid>& grids) {
  long long total = 0;
  for (const LabelGrid& grid : grids)
    for (int label : grid)
      if (label >= 1 && label <= 10) ++total;
  return total;
}

}  // namespace typedcrf
