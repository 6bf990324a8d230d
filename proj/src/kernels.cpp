// Trajectory sampling kernels: the OpenMP map over sample indices and the
// serial reference it is tested against.

#include <cstdint>

#include "billiards/estimators.hpp"
#include "billiards/parallel.hpp"

namespace billiards {

namespace {

SampleRecord trace_one(const Scene& scene, const LiouvilleSampler& sampler, std::uint64_t index, const Caps& caps,
                       const RaycastOptions& ray) {
    try {
        return to_record(trace(scene, sampler.sample_entry(index), caps, ray));
    } catch (const std::exception&) {
        SampleRecord r;
        r.status = SampleStatus::Degenerate;
        r.detail = static_cast<std::uint8_t>(DegenerateReason::GradientFailure);
        return r;
    }
}

}  // namespace

SampleSet collect_samples_serial(const Scene& scene, const RunParams& params) {
    SampleSet set;
    set.caps = params.caps_for(scene);
    set.seed = params.seed;
    set.records.resize(params.samples);
    const LiouvilleSampler sampler(scene, params.seed);
    for (std::uint64_t i = 0; i < params.samples; ++i) {
        set.records[i] = trace_one(scene, sampler, i, set.caps, params.ray);
    }
    return set;
}

SampleSet collect_samples(const Scene& scene, const RunParams& params) {
    SampleSet set;
    set.caps = params.caps_for(scene);
    set.seed = params.seed;
    set.records.resize(params.samples);
    const LiouvilleSampler sampler(scene, params.seed);
    const auto n = static_cast<std::int64_t>(params.samples);
    const Caps caps = set.caps;
    SampleRecord* out = set.records.data();
    // trajectory lengths vary wildly (cavity trapping), hence dynamic chunks
#pragma omp parallel for schedule(dynamic, 256) num_threads(resolve_workers(params.workers))
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = trace_one(scene, sampler, static_cast<std::uint64_t>(i), caps, params.ray);
    }
    return set;
}

}  // namespace billiards
