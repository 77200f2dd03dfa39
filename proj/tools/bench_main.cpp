#include <chrono>
#include <cstdio>

#include <omp.h>

#include "perfiso/search.hpp"
#include "perfiso/sweep.hpp"

using namespace perfiso;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void bench_sweep(int n, int m) {
  double t0 = now();
  SweepOutcome ref = lemma_sweep_reference(n, m);
  double t_ref = now() - t0;
  t0 = now();
  SweepOutcome ser = lemma_sweep_kernel(n, m, 1);
  double t_ser = now() - t0;
  t0 = now();
  SweepOutcome par = lemma_sweep_kernel(n, m, 0);
  double t_par = now() - t0;
  bool same = ref == ser && ser == par;
  std::printf(
      "sweep n=%d m=%d  %10llu multisets | reference %8.3fs | kernel/1t "
      "%8.3fs | kernel/%dt %8.3fs | speedup vs ref %6.1fx | agree %s\n",
      n, m, ref.multisets, t_ref, t_ser, omp_get_max_threads(), t_par,
      t_ref / (t_par > 0 ? t_par : 1e-9), same ? "yes" : "NO");
}

void bench_search(int n) {
  auto b = cyclic_block(n);
  auto ctx = std::make_shared<const PrimeContext>(1UL << n, 0);
  SearchConfig serial = SearchConfig::exhaustive();
  serial.parallel_width = 1;
  double t0 = now();
  auto r1 = enumerate_self_perfect(b, ctx, serial);
  double t_ser = now() - t0;
  SearchConfig parallel = SearchConfig::exhaustive();
  t0 = now();
  auto r2 = enumerate_self_perfect(b, ctx, parallel);
  double t_par = now() - t0;
  bool same = r1.count == r2.count;
  std::printf(
      "search C%lu      %10llu nodes     | serial    %8.3fs | parallel/%dt "
      "%8.3fs | speedup %6.1fx | count %ld | agree %s\n",
      1UL << n, r1.nodes_visited, t_ser, omp_get_max_threads(), t_par,
      t_ser / (t_par > 0 ? t_par : 1e-9), r1.count, same ? "yes" : "NO");
}

} // namespace

int main(int argc, char **argv) {
  int big = argc > 1 && std::string(argv[1]) == "--full";
  std::printf("threads available: %d\n", omp_get_max_threads());
  bench_sweep(2, 2);
  bench_sweep(3, 2);
  bench_sweep(3, 3);
  bench_search(2);
  if (big) {
    bench_search(3);
    bench_sweep(4, 3);
  }
  return 0;
}
