// Serial reference kernels against their OpenMP versions.
//   ./bench_kernels --benchmark_filter=Catalog
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "shimura/catalog_io.hpp"
#include "shimura/classgroup.hpp"
#include "shimura/excepsets.hpp"
#include "shimura/geometry.hpp"
#include "shimura/siegel.hpp"

using namespace shimura;

namespace {

struct Setup {
    ImagQuadField f;
    GeneratorSet gens;
};

Setup setup(std::int64_t m)
{
    auto f = make_field(m);
    auto g = select_generator_primes(f, class_number(f));
    return {f, g};
}

// m = 5 (h = 2, S = {7}), 26 (h = 6), 89 (h = 12)
const std::vector<std::int64_t> kFields = {5, 26, 89};

template <NormCatalog (*Build)(const ImagQuadField&, const GeneratorSet&, Variant)>
void BM_Catalog(benchmark::State& st)
{
    const auto s = setup(kFields[static_cast<std::size_t>(st.range(0))]);
    for (auto _ : st) benchmark::DoNotOptimize(Build(s.f, s.gens, Variant::Unprimed));
    st.SetLabel("m=" + std::to_string(s.f.m) + " S=" + s.gens.fingerprint());
}

template <ExceptionalSet (*Enumerate)(const NormCatalog&, const ImagQuadField&, const GeneratorSet&, std::int64_t,
                                      const std::optional<FactorEffort>&)>
void BM_Enumerate(benchmark::State& st)
{
    const auto s = setup(kFields[static_cast<std::size_t>(st.range(0))]);
    const auto c = build_catalog(s.f, s.gens, Variant::Unprimed);
    for (auto _ : st) benchmark::DoNotOptimize(Enumerate(c, s.f, s.gens, 20000, std::nullopt));
    st.SetLabel("m=" + std::to_string(s.f.m) + " bound=20000");
}

template <std::vector<N2Verdict> (*Scan)(const ImagQuadField&, std::int64_t)>
void BM_N2(benchmark::State& st)
{
    const auto f = make_field(5);
    for (auto _ : st) benchmark::DoNotOptimize(Scan(f, st.range(0)));
}

template <std::optional<ConicPoint> (*Find)(const ConicModel&, const ImagQuadField&, std::int64_t)>
void BM_Conic(benchmark::State& st)
{
    // no point exists over Q(sqrt(-14)) for d = 22 (11 splits), so the box is exhausted
    const auto f = make_field(14);
    const auto model = conic_model(22);
    for (auto _ : st) benchmark::DoNotOptimize(Find(model, f, st.range(0)));
}

}  // namespace

BENCHMARK(BM_Catalog<build_catalog_serial>)->Name("Catalog/serial")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Catalog<build_catalog>)->Name("Catalog/parallel")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate<enumerate_exceptional_serial>)->Name("Enumerate/serial")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate<enumerate_exceptional>)->Name("Enumerate/parallel")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_N2<scan_N2_serial>)->Name("N2/serial")->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_N2<scan_N2>)->Name("N2/parallel")->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conic<find_conic_point_serial>)->Name("Conic/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conic<find_conic_point>)->Name("Conic/parallel")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
