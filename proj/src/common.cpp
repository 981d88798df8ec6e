#include "fsor/common.hpp"

#include <algorithm>
#include <numeric>

namespace fsor {

std::vector<int> descending_ranking(const Vector& scores) {
  std::vector<int> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), 0);
  // stable sort keeps ascending index order among equal scores
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return scores(a) > scores(b); });
  return idx;
}

bool is_permutation(const std::vector<int>& ranking, Eigen::Index d) {
  if (static_cast<Eigen::Index>(ranking.size()) != d) return false;
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (int r : ranking) {
    if (r < 0 || r >= d || seen[static_cast<std::size_t>(r)]) return false;
    seen[static_cast<std::size_t>(r)] = true;
  }
  return true;
}

}  // namespace fsor
