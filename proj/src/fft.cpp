#include "lplab/fft.hpp"

#include "lplab/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace lplab {

namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays
// is. Plans are created once per (size, direction) and kept for the process.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t m, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(m, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> in(m), out(m);
        fftw_plan plan = fftw_plan_dft_1d(int(m), reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<Complex> transform(std::span<const Complex> in, int sign) {
    if (in.empty()) throw ValidationError("empty transform", "samples");
    fftw_plan plan = cache().get(in.size(), sign);
    std::vector<Complex> src(in.begin(), in.end());
    std::vector<Complex> out(in.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace

std::vector<Complex> forward_dft(std::span<const Complex> samples) {
    return transform(samples, FFTW_FORWARD);
}

std::vector<Complex> inverse_dft(std::span<const Complex> coefficients) {
    return transform(coefficients, FFTW_BACKWARD);
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

std::size_t next_power_of_two(std::size_t m) {
    std::size_t p = 1;
    while (p < m) p <<= 1;
    return p;
}

} // namespace lplab
