#ifndef POINTLAB_HISTOGRAM_HPP
#define POINTLAB_HISTOGRAM_HPP

#include <cstdint>
#include <map>
#include <stdexcept>

namespace pointlab {

// Replica-count frequencies: how many replicas produced each count value.
struct CountHistogram {
  std::map<std::int64_t, std::uint64_t> frequencies;
  std::uint64_t total = 0;

  void add(std::int64_t count, std::uint64_t occurrences = 1) {
    frequencies[count] += occurrences;
    total += occurrences;
  }

  std::uint64_t at(std::int64_t count) const {
    auto it = frequencies.find(count);
    return it == frequencies.end() ? 0 : it->second;
  }

  bool empty() const { return total == 0; }

  std::int64_t min_count() const {
    if (empty()) throw std::invalid_argument("CountHistogram: empty histogram");
    return frequencies.begin()->first;
  }

  std::int64_t max_count() const {
    if (empty()) throw std::invalid_argument("CountHistogram: empty histogram");
    return frequencies.rbegin()->first;
  }
};

}  // namespace pointlab

#endif
