#include "pulselab/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace pulselab::dft {

namespace {

struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

Plans get_plans(std::size_t n) {
    static std::map<std::size_t, Plans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // FFTW_UNALIGNED lets the plan run on any caller buffers later.
    std::vector<std::complex<double>> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    Plans p;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

} // namespace

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    Plans p = get_plans(n);
    fftw_execute_dft(p.fwd,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    Plans p = get_plans(n);
    fftw_execute_dft(p.bwd,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace pulselab::dft
