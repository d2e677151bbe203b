#include "mmd/entropies.hpp"
#include "mmd/kernels.hpp"

#include <doctest.h>

using namespace mmd;

namespace {

MeasureModel bern(double p) { return MeasureModel::bernoulli(std::vector<double>{p, 1.0 - p}); }

}  // namespace

TEST_CASE("filtered prefix counts agree between serial and OpenMP kernels") {
  const auto full = ShiftSystem::full(2);
  const auto gold = ShiftSystem::golden_mean();
  for (const auto* sys : {&full, &gold})
    for (int ell : {1, 2})
      for (double eta : {0.2, 0.1}) {
        const MeasureModel mu = sys == &gold ? MeasureModel::markov_stationary({0.6, 0.4, 1.0, 0.0}) : bern(0.7);
        const kernels::MarginalFilter f(mu, ell, eta);
        for (int n : {6, 10, 13})
          for (int threads : {1, 2, 4})
            CHECK(kernels::filtered_prefix_count_omp(*sys, f, n, 2, threads) ==
                  kernels::filtered_prefix_count_serial(*sys, f, n, 2));
      }
}

TEST_CASE("sampling kernels are identical for every thread count") {
  const auto mu = MeasureModel::markov_stationary({0.9, 0.1, 0.1, 0.9});
  const auto serial = kernels::return_times_serial(mu, 8, 1, 1 << 16, 64, 3);
  const auto exps = kernels::local_exponents_serial(mu, {8, 16, 32}, 2, 64, 3);
  for (int threads : {1, 2, 4}) {
    CHECK(kernels::return_times_omp(mu, 8, 1, 1 << 16, 64, 3, threads) == serial);
    CHECK(kernels::local_exponents_omp(mu, {8, 16, 32}, 2, 64, 3, threads) == exps);
  }
}

TEST_CASE("estimators are deterministic across thread counts") {
  const auto sys = ShiftSystem::full(2);
  const auto a = ps_entropy(bern(0.8), sys, 0.3, {}, {100, 200}, 1);
  const auto b = ps_entropy(bern(0.8), sys, 0.3, {}, {100, 200}, 4);
  CHECK(a.value == b.value);
  CHECK(a.trace == b.trace);
  const auto s1 = bk_entropy(bern(0.8), sys, 0.3, Bound::Upper, {8, 12, 16}, SamplingSpec{300, 9, 1});
  const auto s4 = bk_entropy(bern(0.8), sys, 0.3, Bound::Upper, {8, 12, 16}, SamplingSpec{300, 9, 4});
  CHECK(s1.value == s4.value);
}

TEST_CASE("marginal filter accepts by direct evaluation") {
  const kernels::MarginalFilter f(bern(0.5), 1, 0.1);
  CHECK(f.accepts(parse_word("0101010101"), 10));
  CHECK_FALSE(f.accepts(parse_word("0000000001"), 10));
}
