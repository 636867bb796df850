#include "genbound/random.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace genbound {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view task, std::uint64_t index) {
  return mix64(seed ^ mix64(fnv1a64(task) ^ mix64(index)));
}

std::vector<double> sample_flat_dirichlet(Rng& rng, std::size_t size) {
  // Normalized Exp(1) draws are Dirichlet(1, ..., 1).
  boost::random::exponential_distribution<double> exp1(1.0);
  std::vector<double> out(size);
  double total = 0.0;
  for (double& v : out) {
    v = exp1(rng);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return boost::random::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace genbound
