#pragma once

// Flood-fill labelling of 8-connected components and the tight box of the
// largest one; compared against the union-find path in the library.

#include <array>
#include <queue>
#include <vector>

#include "bedpose/segmentation.hpp"

namespace oracle {

/// Box of the largest component; `unique` reports whether no other component
/// ties its area.
inline bedpose::BoundingBox largest_component_box(const bedpose::BinaryMask& m,
                                                  bool* unique = nullptr) {
  std::vector<int> label(m.bits.size(), 0);
  int next = 0;
  std::size_t best_area = 0;
  int best_count = 0;
  bedpose::BoundingBox best{};
  for (int r = 0; r < m.height; ++r) {
    for (int c = 0; c < m.width; ++c) {
      if (!m.at(r, c) || label[r * m.width + c]) continue;
      ++next;
      std::queue<std::array<int, 2>> todo;
      todo.push({r, c});
      label[r * m.width + c] = next;
      std::size_t area = 0;
      int x0 = c, x1 = c, y0 = r, y1 = r;
      while (!todo.empty()) {
        const auto [pr, pc] = todo.front();
        todo.pop();
        ++area;
        x0 = std::min(x0, pc);
        x1 = std::max(x1, pc);
        y0 = std::min(y0, pr);
        y1 = std::max(y1, pr);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = pr + dr;
            const int nc = pc + dc;
            if (nr < 0 || nc < 0 || nr >= m.height || nc >= m.width) continue;
            if (!m.at(nr, nc) || label[nr * m.width + nc]) continue;
            label[nr * m.width + nc] = next;
            todo.push({nr, nc});
          }
        }
      }
      if (area > best_area) {
        best_area = area;
        best_count = 1;
        best = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      } else if (area == best_area) {
        ++best_count;
      }
    }
  }
  if (unique) *unique = best_count == 1;
  return best;
}

}  // namespace oracle
