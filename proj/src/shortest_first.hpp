#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace sievekit::detail {

// Feeds candidates to `take` in increasing order until it has accepted `cap`
// of them (0: no cap). Only a prefix of the candidates is ever fully sorted.
template <typename T, typename Less, typename Take>
void take_shortest(std::vector<T>& found, std::size_t cap, Less less, Take take) {
  std::size_t accepted = 0;
  std::size_t begin = 0;
  std::size_t chunk = cap ? 2 * cap : found.size();
  while (begin < found.size()) {
    const std::size_t end = std::min(found.size(), begin + chunk);
    const auto first = found.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = found.begin() + static_cast<std::ptrdiff_t>(end);
    if (end < found.size()) std::nth_element(first, last, found.end(), less);
    std::sort(first, last, less);
    for (auto it = first; it != last; ++it) {
      if (take(*it) && cap && ++accepted >= cap) return;
    }
    begin = end;
    chunk *= 2;
  }
}

}  // namespace sievekit::detail
