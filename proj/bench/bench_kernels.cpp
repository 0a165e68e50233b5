// Parallel kernels against their serial references.
//   bench_kernels [--repeat N] [--grids 16x32,24x48,...]

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "jdisc/cauchy.hpp"
#include "jdisc/operator.hpp"

using namespace jdisc;

namespace {

template <class Fn>
double best_of(int repeat, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeat; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

DiscMap random_map(const DiscGrid& g, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  DiscMap out(g, dim);
  for (auto& x : out.values()) x = {n(rng), n(rng)};
  return out;
}

void row(const char* kernel, const DiscGrid& g, double par, double ser, double diff) {
  std::printf("%-16s %4dx%-4d %12.6f %12.6f %8.2f %10.1e\n", kernel, g.n_radial(), g.n_angular(), par,
              ser, ser / par, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark"};
  int repeat = 3;
  std::string grids = "8x16,16x32,24x48";
  int assemble_limit = 1024;
  app.add_option("--repeat", repeat)->capture_default_str();
  app.add_option("--grids", grids, "comma-separated n_radial x n_angular")->capture_default_str();
  app.add_option("--assemble-limit", assemble_limit, "largest node count for matrix assembly")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-16s %9s %12s %12s %8s %10s\n", "kernel", "grid", "parallel_s", "serial_s", "speedup",
              "max_diff");
  std::stringstream list(grids);
  std::string item;
  while (std::getline(list, item, ',')) {
    int nr = 0, na = 0;
    if (std::sscanf(item.c_str(), "%dx%d", &nr, &na) != 2) {
      std::fprintf(stderr, "bad grid '%s'\n", item.c_str());
      return 1;
    }
    const DiscGrid g = make_grid(nr, na);
    const DiscMap u = random_map(g, 2, 1);
    DiscMap a(g, 2), b(g, 2);
    const double tp = best_of(repeat, [&] { a = cauchy_green(u); });
    const double ts = best_of(repeat, [&] { b = reference::cauchy_green_serial(u); });
    row("cauchy_green", g, tp, ts, (a - b).sup_norm());

    if (g.size() > assemble_limit) continue;
    const BeltramiField A = beltrami_zoo("pullback_poly", {0.05, 2});
    const DiscMap f = holomorphic_polynomial(g, {{0.0, 0.5}, {0.2, 0.0, 0.3}});
    const Linearization lin(A, f, false);
    Eigen::MatrixXd mp, ms;
    const double ap = best_of(repeat, [&] { mp = lin.assemble(); });
    const double as = best_of(repeat, [&] { ms = reference::assemble_serial(lin); });
    row("assemble", g, ap, as, (mp - ms).cwiseAbs().maxCoeff());
  }
  return 0;
}
