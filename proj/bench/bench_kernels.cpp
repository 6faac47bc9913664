// Copyright 2026 The tmodule-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tmlab/dynamics.hpp"
#include "tmlab/harness.hpp"
#include "tmlab/kernels.hpp"
#include "tmlab/ore.hpp"
#include "tmlab/parse.hpp"

namespace {

using namespace tmlab;

TwistedOperator bench_operator(int n) {
  return iterate(harness::make_preset("random(3,3,2,11)"), static_cast<std::size_t>(n));
}

PointK bench_point(const FqCtxPtr& ctx, std::size_t d) {
  std::vector<RatFunc> c;
  for (std::size_t i = 0; i < d; ++i) c.push_back(parse_ratfunc(ctx, "T^2 + " + std::to_string(i + 1) + "*T + 1"));
  return PointK{c};
}

template <auto Compose>
void compose_kernel(benchmark::State& state) {
  const TwistedOperator f = harness::make_preset("random(3,3,2,11)");
  const TwistedOperator g = bench_operator(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Compose(f, g));
}

template <auto Evaluate>
void evaluate_kernel(benchmark::State& state) {
  const TwistedOperator f = bench_operator(static_cast<int>(state.range(0)));
  const PointK x = bench_point(f.ctx(), f.in_dim());
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(f, x));
}

template <auto Heights>
void heights_kernel(benchmark::State& state) {
  const TwistedOperator f = harness::make_preset("carlitz-tensor(2,3)");
  const std::vector<PointK> pts = orbit(f, bench_point(f.ctx(), 3), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Heights(pts));
}

template <auto Rref>
void rref_kernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  kernels::FpMatrix m(3, n, n + n / 2);
  for (auto& v : m.data) v = static_cast<std::uint32_t>(rng() % 3);
  for (auto _ : state) {
    kernels::FpMatrix work = m;
    benchmark::DoNotOptimize(Rref(work));
  }
}

template <auto Products>
void subset_products_kernel(benchmark::State& state) {
  const TwistedOperator f = harness::make_preset("carlitz-tensor(2,2)");
  std::vector<MPoly> factors;
  for (std::size_t n = 0; n < 3; ++n)
    for (const MPoly& c : pullback_coordinates(iterate(f, n))) factors.push_back(c);
  std::vector<std::vector<std::size_t>> subsets;
  const auto limit = static_cast<std::size_t>(state.range(0));
  for (std::size_t mask = 0; mask < (std::size_t{1} << factors.size()) && subsets.size() < limit; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < factors.size(); ++k)
      if (mask >> k & 1) s.push_back(k);
    subsets.push_back(std::move(s));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Products(factors, subsets));
}

}  // namespace

BENCHMARK(compose_kernel<tmlab::kernels::reference::compose>)->Name("compose/reference")->Arg(4)->Arg(6);
BENCHMARK(compose_kernel<tmlab::kernels::parallel::compose>)->Name("compose/parallel")->Arg(4)->Arg(6);
BENCHMARK(evaluate_kernel<tmlab::kernels::reference::evaluate>)->Name("evaluate/reference")->Arg(4)->Arg(6);
BENCHMARK(evaluate_kernel<tmlab::kernels::parallel::evaluate>)->Name("evaluate/parallel")->Arg(4)->Arg(6);
BENCHMARK(heights_kernel<tmlab::kernels::reference::point_heights>)->Name("heights/reference")->Arg(12);
BENCHMARK(heights_kernel<tmlab::kernels::parallel::point_heights>)->Name("heights/parallel")->Arg(12);
BENCHMARK(rref_kernel<tmlab::kernels::reference::rref>)->Name("rref/reference")->Arg(64)->Arg(256);
BENCHMARK(rref_kernel<tmlab::kernels::parallel::rref>)->Name("rref/parallel")->Arg(64)->Arg(256);
BENCHMARK(subset_products_kernel<tmlab::kernels::reference::subset_products>)
    ->Name("subset_products/reference")
    ->Arg(64);
BENCHMARK(subset_products_kernel<tmlab::kernels::parallel::subset_products>)
    ->Name("subset_products/parallel")
    ->Arg(64);

BENCHMARK_MAIN();
