#include "cspd/fft.hpp"

#include <fftw3.h>

#include <malloc.h>

#include <map>
#include <mutex>
#include <utility>

#include "cspd/field.hpp"

namespace cspd {
namespace {

// Plans are created once per shape and placement and reused through the
// new-array execute interface, which FFTW documents as thread-safe. Planning
// itself is not, so it is serialized. FFTW_ESTIMATE keeps plan selection (and
// therefore the floating-point result) identical from run to run.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex plan_mutex;

PlanPair& plans_for(const std::vector<int>& dims, bool in_place) {
  static std::map<std::pair<std::vector<int>, bool>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find({dims, in_place});
  if (it != cache.end()) return it->second;

  if (cache.empty()) {
    // Spectral work allocates many same-sized multi-megabyte temporaries.
    // Keeping them on the heap instead of fresh mmap regions avoids a page
    // fault storm on every allocation.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
  }

  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  auto* b = in_place ? a : static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int rank = static_cast<int>(dims.size());
  PlanPair p;
  p.forward = fftw_plan_dft(rank, dims.data(), a, b, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft(rank, dims.data(), a, b, FFTW_BACKWARD, flags);
  if (!in_place) fftw_free(b);
  fftw_free(a);
  return cache.emplace(std::make_pair(dims, in_place), p).first->second;
}

void execute(fftw_plan plan, const cplx* in, cplx* out) {
  // Out-of-place complex transforms leave the input intact, so the
  // const_cast only satisfies the C signature.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void fft_nd(std::span<cplx> data, const std::vector<int>& dims, bool inverse) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size()) throw ParameterError("fft_nd: data size does not match dims");
  auto& p = plans_for(dims, true);
  execute(inverse ? p.backward : p.forward, data.data(), data.data());
}

CArray fft_forward(const CArray& a) {
  const int n = static_cast<int>(a.rows());
  CArray out(n, n);
  auto& p = plans_for({n, n}, false);
  execute(p.forward, a.data(), out.data());
  out *= 1.0 / (static_cast<double>(n) * n);
  return out;
}

CArray fft_inverse(const CArray& a) {
  const int n = static_cast<int>(a.rows());
  CArray out(n, n);
  auto& p = plans_for({n, n}, false);
  execute(p.backward, a.data(), out.data());
  return out;
}

}  // namespace cspd
