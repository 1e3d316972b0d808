#ifndef BHC_RANDOM_HPP
#define BHC_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "bhc/hypergraph.hpp"

namespace bhc {

/// Name recorded in generated files and CSV metadata.
inline constexpr std::string_view kRngName = "xoshiro256** seeded by splitmix64";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for an independent stream, e.g. hash(seed, trial_index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
  return splitmix64(s);
}

/// xoshiro256** (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in [0, bound), bound > 0 (Lemire's multiply-and-reject).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

/// k distinct elements of `pool` chosen uniformly, returned sorted.
inline std::vector<Vertex> choose_subset(std::vector<Vertex> pool, std::size_t k, Rng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace detail {

inline double stirling_tail(double k) {
  static constexpr double kTable[10] = {0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
                                        0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
                                        0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
                                        0.00833056343336287};
  if (k <= 9) return kTable[static_cast<int>(k)];
  const double kp1sq = (k + 1) * (k + 1);
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1);
}

// Sequential inversion; used when trials * p is small.
inline std::uint64_t binomial_inversion(Rng& rng, std::uint64_t trials, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = (static_cast<double>(trials) + 1) * s;
  double prob = std::exp(static_cast<double>(trials) * std::log1p(-p));
  double u = uniform01(rng);
  std::uint64_t x = 0;
  while (u > prob && x < trials) {
    u -= prob;
    ++x;
    prob *= a / static_cast<double>(x) - s;
  }
  return x;
}

// Hormann's BTRS: transformed rejection with squeeze, exact for p <= 1/2.
inline std::uint64_t binomial_btrs(Rng& rng, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double spq = std::sqrt(n * p * (1 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1 - p);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1) * p);
  for (;;) {
    const double u = uniform01(rng) - 0.5;
    double v = uniform01(rng);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2 * a / us + b) * u + c);
    if (k < 0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound = (m + 0.5) * std::log((m + 1) / (r * (n - m + 1))) +
                         (n + 1) * std::log((n - m + 1) / (n - k + 1)) +
                         (k + 0.5) * std::log(r * (n - k + 1) / (k + 1)) + stirling_tail(m) +
                         stirling_tail(n - m) - stirling_tail(k) - stirling_tail(n - k);
    if (v <= bound) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace detail

/// Binomial(trials, p). Inversion when trials*min(p,1-p) < 10, BTRS otherwise.
inline std::uint64_t binomial(Rng& rng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  if (p > 0.5) return trials - binomial(rng, trials, 1.0 - p);
  if (static_cast<double>(trials) * p < 10.0) return detail::binomial_inversion(rng, trials, p);
  return detail::binomial_btrs(rng, trials, p);
}

/// Tuple codes (see detail::encode_tuple) of a p-random subset of [0, space),
/// each code kept independently with probability p. Sorted ascending.
inline std::vector<std::uint64_t> bernoulli_codes_dense(std::uint64_t space, double p, Rng& rng) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 0; c < space; ++c) {
    if (bernoulli(rng, p)) out.push_back(c);
  }
  return out;
}

/// `count` distinct codes from [0, space), uniform over count-subsets. Sorted.
inline std::vector<std::uint64_t> distinct_codes(std::uint64_t space, std::uint64_t count, Rng& rng) {
  const bool invert = count > space / 2;
  const std::uint64_t draw = invert ? space - count : count;
  std::vector<std::uint64_t> picked;
  picked.reserve(static_cast<std::size_t>(draw));
  // Draw batches of exactly the missing number; duplicates are rejected, so
  // the result is the first `draw` distinct values of an iid stream.
  while (picked.size() < draw) {
    const std::size_t have = picked.size();
    for (std::uint64_t k = have; k < draw; ++k) picked.push_back(uniform_below(rng, space));
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  }
  if (!invert) return picked;
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t next = 0;
  for (std::uint64_t c = 0; c < space; ++c) {
    if (next < picked.size() && picked[next] == c) {
      ++next;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

/// Count-then-place: M ~ Binomial(space, p), then a uniform M-subset.
inline std::vector<std::uint64_t> bernoulli_codes_sparse(std::uint64_t space, double p, Rng& rng) {
  return distinct_codes(space, binomial(rng, space, p), rng);
}

/// Parameters of H(r, n, p).
struct ModelParams {
  int r = 2;
  Vertex n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  /// Set when p was derived as d / n^(r-1).
  std::optional<double> d;

  static ModelParams from_degree(int r, Vertex n, double d, std::uint64_t seed) {
    ModelParams m{r, n, 0.0, seed, d};
    m.p = d / std::pow(static_cast<double>(n), r - 1);
    m.validate();
    return m;
  }

  void validate() const {
    if (r < 2) throw input_error("r must be at least 2");
    if (!(p >= 0.0 && p <= 1.0)) throw input_error("p must lie in [0, 1]");
    if (d && (*d < 0.0 || *d > std::pow(static_cast<double>(n), r - 1))) throw input_error("d must lie in [0, n^(r-1)]");
  }

  std::vector<Vertex> part_sizes() const { return std::vector<Vertex>(static_cast<std::size_t>(r), n); }

  std::uint64_t tuple_space() const {
    auto sizes = part_sizes();
    auto space = detail::checked_product(sizes);
    if (!space) throw capacity_error("n^r overflows 64 bits");
    return *space;
  }
};

/// Dense sampler is used up to this many potential tuples.
inline constexpr std::uint64_t kDenseSamplerLimit = 1'000'000;

inline PartiteHypergraph hypergraph_from_codes(const std::vector<Vertex>& sizes, const std::vector<std::uint64_t>& codes) {
  std::vector<Vertex> flat(codes.size() * sizes.size());
  for (std::size_t e = 0; e < codes.size(); ++e) {
    detail::decode_tuple(codes[e], sizes, std::span<Vertex>(flat).subspan(e * sizes.size(), sizes.size()));
  }
  return PartiteHypergraph(sizes, std::move(flat));
}

/// One Bernoulli(p) trial per tuple, in lexicographic tuple order.
inline PartiteHypergraph sample_dense(const ModelParams& params) {
  params.validate();
  Rng rng(params.seed);
  return hypergraph_from_codes(params.part_sizes(), bernoulli_codes_dense(params.tuple_space(), params.p, rng));
}

inline PartiteHypergraph sample_count_then_place(const ModelParams& params) {
  params.validate();
  Rng rng(params.seed);
  return hypergraph_from_codes(params.part_sizes(), bernoulli_codes_sparse(params.tuple_space(), params.p, rng));
}

/// H(r, n, p): dense sampler when n^r <= kDenseSamplerLimit, count-then-place otherwise.
inline PartiteHypergraph sample(const ModelParams& params) {
  return params.tuple_space() <= kDenseSamplerLimit ? sample_dense(params) : sample_count_then_place(params);
}

}  // namespace bhc

#endif
