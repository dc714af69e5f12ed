#include <random>

#include <benchmark/benchmark.h>

#include "cuntz/frames.hpp"
#include "cuntz/invariants.hpp"
#include "cuntz/io.hpp"
#include "cuntz/verify.hpp"
#include "cuntz/walkgraph.hpp"

namespace {

using namespace cuntz;

FilterSystem fixture(const char* name)
{
    return *load_system(std::filesystem::path(CUNTZ_FIXTURE_DIR) / name).filter;
}

void BM_mu_hat(benchmark::State& state)
{
    const FilterSystem fs = fixture("mu4.json");
    const RationalPoint xi({Rational(37, 3)});
    const auto depth = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mu_hat(fs, xi, depth));
}
BENCHMARK(BM_mu_hat)->Arg(10)->Arg(40)->Arg(80);

void BM_mu_hat_planar(benchmark::State& state)
{
    const FilterSystem fs = fixture("invariant_line.json");
    const RationalPoint xi({Rational(5, 7), Rational(-11, 3)});
    for (auto _ : state)
        benchmark::DoNotOptimize(mu_hat(fs, xi, 40));
}
BENCHMARK(BM_mu_hat_planar);

void BM_gram(benchmark::State& state)
{
    const FilterSystem fs = fixture("mu4.json");
    const RationalPoint c({Rational(0)});
    const WalkGraph g = walk_from_minimal_set(fs, MinimalSet{orbit_closure(fs, c)});
    auto atoms = frame_atoms(fs, g, *g.find(c), 6);
    atoms.resize(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(gram(fs, atoms, 40).max_deviation());
}
BENCHMARK(BM_gram)->Arg(16)->Arg(64);

void BM_walsh_parseval(benchmark::State& state)
{
    const FilterSystem fs = fixture("walsh2.json");
    const auto level = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> values(std::size_t{1} << level);
    for (auto& v : values)
        v = {u(rng), u(rng)};
    const StepFunction f(2, level, values);
    for (auto _ : state)
        benchmark::DoNotOptimize(walsh_parseval_exact(fs.coefficients(), level, f));
}
BENCHMARK(BM_walsh_parseval)->Arg(6)->Arg(10);

void BM_sigma_fixed_dim(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<WalkVertex> vertices;
    for (std::size_t v = 0; v < n; ++v)
        vertices.push_back({std::to_string(v), std::nullopt});
    std::vector<std::vector<std::size_t>> edges(2, std::vector<std::size_t>(n));
    std::vector<std::vector<Complex>> weights(2, std::vector<Complex>(n));
    const double s = std::sqrt(0.5);
    for (std::size_t v = 0; v < n; ++v) {
        edges[0][v] = (2 * v) % n;
        edges[1][v] = (2 * v + 1) % n;
        weights[0][v] = s;
        weights[1][v] = Complex(0.0, s);
    }
    const WalkGraph g(vertices, edges, weights);
    for (auto _ : state)
        benchmark::DoNotOptimize(sigma_fixed_dimension(g));
}
BENCHMARK(BM_sigma_fixed_dim)->Arg(4)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
