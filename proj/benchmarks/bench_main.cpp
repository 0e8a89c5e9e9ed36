#include "liebox/ballbox.hpp"
#include "liebox/free_lie.hpp"
#include "liebox/models.hpp"
#include "liebox/nc_poly.hpp"
#include "liebox/perm_words.hpp"

#include <benchmark/benchmark.h>

using namespace liebox;

static void BM_PiRecursive(benchmark::State& state)
{
    const int order = static_cast<int>(state.range(0));
    auto perms = all_perms(order);
    for (auto _ : state) {
        long sum = 0;
        for (const auto& p : perms)
            sum += pi_recursive(p);
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(perms.size()));
}
BENCHMARK(BM_PiRecursive)->DenseRange(4, 7);

static void BM_ExpandNested(benchmark::State& state)
{
    Word w;
    for (int i = 0; i < state.range(0); ++i)
        w.push_back(1 + i % 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(expand_nested(w));
}
BENCHMARK(BM_ExpandNested)->DenseRange(3, 8);

static void BM_Flow(benchmark::State& state)
{
    auto sys = make_system(builtin_model("engel"));
    Eigen::VectorXd x(4);
    x << 0.3, -0.2, 0.1, 0.4;
    const std::vector<FlowStep> steps{{1, 0.2}, {2, 0.2}, {-1, 0.2}, {-2, 0.2}};
    for (auto _ : state)
        benchmark::DoNotOptimize(sys.compose(steps, x));
}
BENCHMARK(BM_Flow);

static void BM_Doubling(benchmark::State& state)
{
    CommutatorFrame F(make_system(builtin_model("heisenberg")));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    DoublingOptions opt;
    opt.samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(doubling_ratio(F, x, 0.5, opt).ratio);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Doubling)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_IsTrivial(benchmark::State& state)
{
    // zero residual plus one Lie element, so the witness search runs to a certificate
    const Word v{1, 2, 3};
    const Word w{1, 2};
    auto p = NCPoly::from_word_sum(check_generalized_jacobi(v, w) + expand_nested(Word{1, 2, 3, 1, 2}), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(is_trivial(p).trivial);
}
BENCHMARK(BM_IsTrivial)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
