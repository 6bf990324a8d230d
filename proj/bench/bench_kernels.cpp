// Serial reference vs OpenMP sample collection: wall time and bitwise
// agreement of the per-trajectory records.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "billiards/estimators.hpp"
#include "billiards/scene_io.hpp"

using namespace billiards;

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int main(int argc, char** argv) {
    const std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
    const int workers = argc > 2 ? std::atoi(argv[2]) : 0;
    bool all_equal = true;
    std::printf("%-16s %10s %10s %10s %8s %s\n", "scene", "N", "serial_s", "omp_s", "speedup", "identical");
    for (const char* name : {"single_ball", "five_balls", "single_ball_3d", "livshits_cavity"}) {
        const Scene scene = bundled_scene(name);
        RunParams p;
        p.samples = n;
        p.seed = 7;
        p.workers = workers;
        SampleSet serial, parallel;
        const double ts = seconds([&] { serial = collect_samples_serial(scene, p); });
        const double tp = seconds([&] { parallel = collect_samples(scene, p); });
        const bool same = serial.records == parallel.records;
        all_equal = all_equal && same;
        std::printf("%-16s %10llu %10.3f %10.3f %8.2f %s\n", name, static_cast<unsigned long long>(n), ts, tp,
                    ts / tp, same ? "yes" : "NO");
    }
    return all_equal ? 0 : 1;
}
