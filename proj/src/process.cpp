#include "pointlab/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pointlab {

ProcessConfig::ProcessConfig(double rate_, double horizon_, std::uint64_t seed_,
                             GenerationMethod method_)
    : rate(rate_), horizon(horizon_), seed(seed_), method(method_) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("ProcessConfig: rate must be positive and finite");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("ProcessConfig: horizon must be positive and finite");
}

void EventSequence::validate() const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(times[i] <= horizon))
      throw std::invalid_argument("EventSequence: times must lie in (0, horizon]");
    if (i > 0 && !(times[i - 1] < times[i]))
      throw std::invalid_argument("EventSequence: times must be strictly increasing");
  }
}

void Subdivision::validate(double horizon) const {
  for (const Interval& iv : intervals) {
    if (!(iv.lo >= 0.0) || !(iv.lo < iv.hi) || !(iv.hi <= horizon))
      throw std::invalid_argument("Subdivision: each interval needs 0 <= lo < hi <= horizon");
  }
  std::vector<Interval> sorted(intervals);
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi)  // touching endpoints are fine: (a,b], (b,c]
      throw std::invalid_argument("Subdivision: intervals must be pairwise disjoint");
}

EventSequence generate(const ProcessConfig& config, RngStream& stream) {
  EventSequence seq;
  seq.horizon = config.horizon;

  if (config.method == GenerationMethod::interarrival) {
    double t = 0.0;
    for (;;) {
      const double next = t + stream.exponential(config.rate);
      if (next == t) continue;  // gap below resolution, redraw to keep strict increase
      if (next > config.horizon) break;
      seq.times.push_back(next);
      t = next;
    }
    return seq;
  }

  const std::int64_t n = stream.poisson(config.rate * config.horizon);
  seq.times.resize(static_cast<std::size_t>(n));
  for (double& t : seq.times) t = stream.uniform_half_open(config.horizon);
  std::sort(seq.times.begin(), seq.times.end());
  for (;;) {  // ties are measure-zero; redraw the offending point
    auto it = std::adjacent_find(seq.times.begin(), seq.times.end());
    if (it == seq.times.end()) break;
    *it = stream.uniform_half_open(config.horizon);
    std::sort(seq.times.begin(), seq.times.end());
  }
  return seq;
}

EventSequence generate(const ProcessConfig& config) {
  RngStream stream(config.seed);
  return generate(config, stream);
}

std::int64_t generate_count(const ProcessConfig& config, RngStream& stream) {
  if (config.method == GenerationMethod::conditional_uniform)
    return stream.poisson(config.rate * config.horizon);
  std::int64_t count = 0;
  double t = stream.exponential(config.rate);
  while (t <= config.horizon) {
    ++count;
    t += stream.exponential(config.rate);
  }
  return count;
}

CountHistogram replicate_counts(const ProcessConfig& config, std::uint64_t replicas) {
  CountHistogram hist;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    hist.add(generate_count(config, stream));
  }
  return hist;
}

std::vector<std::int64_t> count_in(const EventSequence& events, const Subdivision& subdivision) {
  subdivision.validate(events.horizon);
  std::vector<std::int64_t> counts;
  counts.reserve(subdivision.intervals.size());
  for (const Interval& iv : subdivision.intervals) {
    const auto above = std::upper_bound(events.times.begin(), events.times.end(), iv.lo);
    const auto beyond = std::upper_bound(events.times.begin(), events.times.end(), iv.hi);
    counts.push_back(beyond - above);
  }
  return counts;
}

Pmf empirical_pmf(const CountHistogram& hist) {
  if (hist.empty()) throw std::invalid_argument("empirical_pmf: empty histogram");
  Pmf pmf;
  pmf.offset = hist.min_count();
  pmf.probs.assign(static_cast<std::size_t>(hist.max_count() - hist.min_count()) + 1, 0.0);
  const double n = static_cast<double>(hist.total);
  for (const auto& [count, freq] : hist.frequencies)
    pmf.probs[static_cast<std::size_t>(count - pmf.offset)] = static_cast<double>(freq) / n;
  pmf.tail_bound = 0.0;
  return pmf;
}

double rarity_reference_ratio(double rate, double width) {
  const double u = rate * width;
  // (1 - e^-u - u e^-u) / (u e^-u) rewritten as (expm1(u) - u)/u to avoid
  // cancellation for small u, where it behaves like u/2
  return (std::expm1(u) - u) / u;
}

std::vector<RarityPoint> axiom_rarity_check(const ProcessConfig& config,
                                            std::span<const double> bin_widths,
                                            std::uint64_t replicas) {
  if (bin_widths.empty()) throw std::invalid_argument("axiom_rarity_check: no widths");
  for (std::size_t i = 0; i < bin_widths.size(); ++i) {
    if (!(bin_widths[i] > 0.0) || !(bin_widths[i] <= config.horizon))
      throw std::invalid_argument("axiom_rarity_check: widths must lie in (0, horizon]");
    if (i > 0 && !(bin_widths[i] < bin_widths[i - 1]))
      throw std::invalid_argument("axiom_rarity_check: widths must be decreasing");
  }

  std::vector<RarityPoint> points(bin_widths.size());
  std::vector<std::int64_t> bins_per_width(bin_widths.size());
  for (std::size_t w = 0; w < bin_widths.size(); ++w) {
    points[w].width = bin_widths[w];
    bins_per_width[w] =
        static_cast<std::int64_t>(std::floor(config.horizon / bin_widths[w] + 1e-9));
  }

  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    const EventSequence seq = generate(config, stream);
    for (std::size_t w = 0; w < bin_widths.size(); ++w) {
      const double width = bin_widths[w];
      const std::int64_t bins = bins_per_width[w];
      points[w].bins_total += static_cast<std::uint64_t>(bins);
      // times are sorted, so occupied bins appear as runs of equal indices;
      // bin of time u is ceil(u/width) - 1, the (a, b] convention
      std::int64_t run_bin = -1;
      std::int64_t run_len = 0;
      auto flush = [&] {
        if (run_len == 1) ++points[w].bins_eq1;
        if (run_len >= 2) ++points[w].bins_ge2;
      };
      for (double t : seq.times) {
        const auto bin = static_cast<std::int64_t>(std::ceil(t / width)) - 1;
        if (bin >= bins) continue;  // horizon not divisible by width: tail remnant ignored
        if (bin == run_bin) {
          ++run_len;
        } else {
          flush();
          run_bin = bin;
          run_len = 1;
        }
      }
      flush();
    }
  }

  for (RarityPoint& p : points) {
    if (p.bins_eq1 > 0) {
      p.ratio = static_cast<double>(p.bins_ge2) / static_cast<double>(p.bins_eq1);
      p.defined = true;
    }
  }
  return points;
}

CorrelationEstimate axiom_independence_check(const ProcessConfig& config, const Interval& a,
                                             const Interval& b, std::uint64_t replicas) {
  Subdivision pair{{a, b}};
  pair.validate(config.horizon);  // rejects overlap

  // integer moment accumulators are exact at these scales
  std::int64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    const EventSequence seq = generate(config, stream);
    const auto counts = count_in(seq, pair);
    const std::int64_t ca = counts[0];
    const std::int64_t cb = counts[1];
    sa += ca;
    sb += cb;
    saa += ca * ca;
    sbb += cb * cb;
    sab += ca * cb;
  }

  CorrelationEstimate est;
  est.replicas = replicas;
  est.std_error = 1.0 / std::sqrt(static_cast<double>(replicas));
  const double n = static_cast<double>(replicas);
  const double cov = static_cast<double>(sab) - static_cast<double>(sa) * static_cast<double>(sb) / n;
  const double va = static_cast<double>(saa) - static_cast<double>(sa) * static_cast<double>(sa) / n;
  const double vb = static_cast<double>(sbb) - static_cast<double>(sb) * static_cast<double>(sb) / n;
  if (va > 0.0 && vb > 0.0) {
    est.correlation = cov / std::sqrt(va * vb);
    est.defined = true;
  }
  return est;
}

RateEstimate rate_estimate(std::span<const RateWindow> windows) {
  if (windows.empty()) throw std::invalid_argument("rate_estimate: no windows");
  RateEstimate est;
  est.ratios.reserve(windows.size());
  double total_events = 0.0;
  double total_extent = 0.0;
  for (const RateWindow& w : windows) {
    if (!(w.extent > 0.0) || !std::isfinite(w.extent))
      throw std::invalid_argument("rate_estimate: extents must be positive");
    if (w.events < 0) throw std::invalid_argument("rate_estimate: counts must be >= 0");
    est.ratios.push_back(static_cast<double>(w.events) / w.extent);
    total_events += static_cast<double>(w.events);
    total_extent += w.extent;
  }
  est.pooled = total_events / total_extent;
  return est;
}

UniformityResult conditional_uniformity_check(const ProcessConfig& config,
                                              std::int64_t given_count,
                                              std::uint64_t replicas, std::int64_t bins) {
  if (given_count < 1)
    throw std::invalid_argument("conditional_uniformity_check: given_count must be >= 1");
  if (bins < 2) throw std::invalid_argument("conditional_uniformity_check: needs >= 2 bins");

  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  UniformityResult result;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    const EventSequence seq = generate(config, stream);
    if (static_cast<std::int64_t>(seq.times.size()) != given_count) continue;
    ++result.matching_replicas;
    for (double t : seq.times) {
      auto bin = static_cast<std::int64_t>(std::ceil(t * static_cast<double>(bins) / config.horizon)) - 1;
      bin = std::clamp<std::int64_t>(bin, 0, bins - 1);
      observed[static_cast<std::size_t>(bin)] += 1.0;
      ++result.pooled_events;
    }
  }

  const double per_bin =
      static_cast<double>(result.pooled_events) / static_cast<double>(bins);
  std::vector<double> expected(static_cast<std::size_t>(bins), per_bin);
  result.gof = chi_square_pooled_cells(std::move(observed), std::move(expected));
  return result;
}

}  // namespace pointlab
