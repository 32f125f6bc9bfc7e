#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>

#include <fftw3.h>

namespace packetlab::detail {

// Cached FFTW plans keyed by (length, direction). Planning is not thread safe
// in FFTW, execution through fftw_execute_dft is, so only the cache is locked.
class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache cache;
        return cache;
    }

    FftPlanCache(const FftPlanCache&) = delete;
    FftPlanCache& operator=(const FftPlanCache&) = delete;

    fftw_plan plan(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

private:
    FftPlanCache() = default;
    ~FftPlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

/// Unnormalized DFT: out[m] = sum_n in[n] exp(sign * 2 pi i m n / N), sign = -1 forward.
inline void dft(std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out, int sign) {
    fftw_plan p = FftPlanCache::instance().plan(in.size(), sign);
    // fftw_execute_dft never writes to its input for out-of-place complex plans.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(p, src, dst);
}

}  // namespace packetlab::detail
