// The distro's static benchmark_main archive is LTO bytecode from another
// compiler release, so the entry point lives here instead.
#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
