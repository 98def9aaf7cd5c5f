#pragma once

#include <vector>

namespace typedcrf {

// Label grids pooled over a collection of images.
using LabelGrid = std::vector<int>;

// Fraction of all cells predicted correctly.
double metric_pixel_accuracy(const std::vector<LabelGrid>& pred,
                             const std::vector<LabelGrid>& gold);

// Fraction correct among cells whose gold label is 1..10. When no such cell
// exists the result is 0 and *defined is set to false.
double metric_snake_cell_accuracy(const std::vector<LabelGrid>& pred,
                                  const std::vector<LabelGrid>& gold,
                                  bool* defined = nullptr);

// Fraction of image-level labels predicted correctly.
double metric_image_accuracy(const std::vector<int>& pred, const std::vector<int>& gold);

long long count_cells(const std::vector<LabelGrid>& grids);
long long count_snake_cells(const std::vector<LabelGrid>& grids);

}  // namespace typedcrf
