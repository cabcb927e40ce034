// Serial reference against the OpenMP path for each parallel kernel. The
// second benchmark argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "ordercert/circular.hpp"
#include "ordercert/closure.hpp"
#include "ordercert/cone.hpp"
#include "ordercert/order_search.hpp"
#include "ordercert/products.hpp"
#include "ordercert/text.hpp"

using namespace ordercert;

namespace {

Exec exec_of(benchmark::State const& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

std::vector<Element> words(Group g, std::vector<std::string> const& texts) {
  std::vector<Element> out;
  for (auto const& t : texts) out.push_back(parse_element(t, g));
  return out;
}

void closure_free(benchmark::State& state) {
  auto X = words(Group::free(2), {"a", "b", "a^-1 b"});
  auto depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = close(X, ClosureKind{}, depth, default_closure_budget, exec_of(state));
    benchmark::DoNotOptimize(r.generated.size());
  }
}

void sign_search_free(benchmark::State& state) {
  auto X = words(Group::free(2), {"a", "b", "a b", "b a^-1"});
  auto depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto v = sign_search(X, Criterion::lo, depth, 0, default_closure_budget, exec_of(state));
    benchmark::DoNotOptimize(v.status);
  }
}

void unique_products_klein(benchmark::State& state) {
  auto K = Group::klein_bottle();
  auto members = ball(K, static_cast<int>(state.range(0))).members;
  FiniteSubset A(K, members);
  for (auto _ : state) {
    auto r = unique_products(A, A, exec_of(state));
    benchmark::DoNotOptimize(r.products.size());
  }
}

void cone_axioms_heisenberg(benchmark::State& state) {
  auto P = ConeHandle::standard(Group::heisenberg());
  auto radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = cone_axioms_check(P, radius, exec_of(state));
    benchmark::DoNotOptimize(r.ok);
  }
}

void circular_validation(benchmark::State& state) {
  auto c = circle_order(Group::finite_cyclic(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto v = validate_circular_assignment(c, std::nullopt, exec_of(state));
    benchmark::DoNotOptimize(v.ok);
  }
}

}  // namespace

BENCHMARK(closure_free)->ArgsProduct({{4, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(sign_search_free)->ArgsProduct({{4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(unique_products_klein)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(cone_axioms_heisenberg)->ArgsProduct({{2}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(circular_validation)->ArgsProduct({{8, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
