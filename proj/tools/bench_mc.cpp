// Times the OpenMP Monte Carlo kernel against the serial reference and
// checks they agree exactly.

#include <chrono>
#include <cstdint>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "masmc/threat.hpp"

using masmc::AdversaryConfig;
using masmc::ExperimentKind;
using masmc::McEstimate;

namespace {

double time_ms(McEstimate (*fn)(const AdversaryConfig&), const AdversaryConfig& config,
               McEstimate& result) {
    const auto t0 = std::chrono::steady_clock::now();
    result = fn(config);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-18s %12s %12s %12s %8s %6s\n", "experiment", "trials", "serial_ms",
                "parallel_ms", "speedup", "equal");

    const struct {
        const char* name;
        AdversaryConfig config;
    } cases[] = {
        {"fragment_capture", {ExperimentKind::fragment_capture, 4, 1, 1, 5000000, 7}},
        {"corrupt_dm", {ExperimentKind::corrupt_dm, 1, 5, 1, 5000000, 7}},
        {"wrong_agent", {ExperimentKind::wrong_agent, 1, 2, 4, 5000000, 7}},
    };

    bool all_equal = true;
    for (const auto& c : cases) {
        McEstimate serial;
        McEstimate parallel;
        const double serial_ms = time_ms(masmc::mc_estimate_serial, c.config, serial);
        const double parallel_ms = time_ms(masmc::mc_estimate, c.config, parallel);
        const bool equal = serial.p_hat == parallel.p_hat;
        all_equal = all_equal && equal;
        std::printf("%-18s %12llu %12.2f %12.2f %8.2f %6s\n", c.name,
                    static_cast<unsigned long long>(c.config.trials), serial_ms,
                    parallel_ms, serial_ms / parallel_ms, equal ? "yes" : "NO");
    }
    return all_equal ? 0 : 1;
}
