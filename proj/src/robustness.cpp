#include "chiralsim/robustness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "chiralsim/error.hpp"

namespace chiralsim {

double ErrorModel::max_rate() const
{
    double r = 0.0;
    for (const auto& c : decay) {
        r = std::max(r, c.rate);
    }
    return r;
}

ProtocolSpec apply_error(const ProtocolSpec& spec, const ErrorModel& model)
{
    ProtocolSpec out = spec;
    for (std::size_t k = 0; k < 3; ++k) {
        out.areas[k] *= (1.0 + model.area_error) * (1.0 + model.step_area_errors[k]);
    }
    out.phase12 += model.phase_error;
    out.detuning.delta12 += model.detuning.delta12;
    out.detuning.delta23 += model.detuning.delta23;
    out.detuning.delta13 += model.detuning.delta13;
    out.decay.insert(out.decay.end(), model.decay.begin(), model.decay.end());
    return out;
}

std::vector<ErrorModel> SweepGrid::expand() const
{
    std::vector<ErrorModel> out;
    for (double e : area_error)
        for (double e1 : step1_area_error)
            for (double e2 : step2_area_error)
                for (double e3 : step3_area_error)
                    for (double dphi : phase_error)
                        for (double d12 : delta12)
                            for (double d23 : delta23)
                                for (double d13 : delta13)
                                    for (double g : gamma) {
                                        ErrorModel m;
                                        m.area_error = e;
                                        m.step_area_errors = {e1, e2, e3};
                                        m.phase_error = dphi;
                                        m.detuning = {d12, d23, d13};
                                        if (g != 0.0) {
                                            for (auto [src, dst] : decay_paths) {
                                                m.decay.push_back({src, dst, g});
                                            }
                                        }
                                        out.push_back(std::move(m));
                                    }
    return out;
}

namespace {

SweepRecord evaluate(const ProtocolSpec& spec, const ErrorModel& model)
{
    SweepRecord rec;
    rec.model = model;
    try {
        const ProtocolSpec perturbed = apply_error(spec, model);
        rec.engine = select_engine(perturbed);
        const DiscriminationReport rep = discriminate(perturbed);
        rec.p_left = rep.left.populations;
        rec.p_right = rep.right.populations;
        rec.contrast = rep.contrast;
        rec.drift = std::max(rep.left.drift, rep.right.drift);
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.p_left = {nan, nan, nan};
        rec.p_right = {nan, nan, nan};
        rec.contrast = nan;
        rec.drift = nan;
        rec.error = e.what();
    }
    return rec;
}

} // namespace

std::vector<SweepRecord> run_sweep(const ProtocolSpec& spec, const std::vector<ErrorModel>& grid,
                                   unsigned threads)
{
    if (grid.empty()) {
        throw Error("sweep grid is empty");
    }
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));

    std::vector<SweepRecord> records(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            records[i] = evaluate(spec, grid[i]);
        }
    };

    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        worker();
    }
    return records;
}

} // namespace chiralsim
