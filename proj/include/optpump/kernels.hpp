#pragma once

// Data-parallel inner loops over the frequency grid.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant processing four frequencies per instruction. Both variants perform
// the same floating-point operations in the same order (no FMA contraction),
// so they produce bit-identical results. The variant is chosen once at run
// time; OPTPUMP_ISA=scalar|avx2 forces a choice.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "optpump/core.hpp"

namespace optpump::kernels {

// Source term of the one-photon equations evaluated at the four RK4 stages of
// one step: s1 at (t, y), s2 and s3 at the two midpoint stages, s4 at t + dt.
struct StageSources {
    Complex s1, s2, s3, s4;
};

// Advances df/dt = s(t) - i*omega*f for every frequency by one RK4 step per
// entry of src. f is stored as split real/imaginary arrays.
using OnePhotonFn = void (*)(const double* omegas, std::size_t n_freq, const StageSources* src,
                             std::size_t n_steps, double dt, double* f_re, double* f_im);

// out[j] = sum_k samples[k] * exp(-i * omegas[j] * k * dtau)
using HalfLineFn = void (*)(const Complex* samples, std::size_t n_samples, double dtau,
                            const double* omegas, std::size_t n_freq, Complex* out);

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    OnePhotonFn one_photon;
    HalfLineFn half_line;
};

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
// Throws DomainError when the ISA is not usable on this machine.
const KernelTable& kernels_for(Isa isa);
const KernelTable& active_kernels();

// Number of steps between exact re-evaluations of the rotating phase in the
// half-line transform.
inline constexpr std::size_t kPhaseAnchorInterval = 256;

void advance_one_photon(std::span<const double> omegas, std::span<const StageSources> src, double dt,
                        std::span<double> f_re, std::span<double> f_im,
                        const KernelTable& k = active_kernels());

std::vector<Complex> half_line_transform(std::span<const Complex> samples, double dtau,
                                         std::span<const double> omegas,
                                         const KernelTable& k = active_kernels());

namespace scalar {
void one_photon(const double* omegas, std::size_t n_freq, const StageSources* src, std::size_t n_steps,
                double dt, double* f_re, double* f_im);
void half_line(const Complex* samples, std::size_t n_samples, double dtau, const double* omegas,
               std::size_t n_freq, Complex* out);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OPTPUMP_HAVE_AVX2_KERNELS 1
namespace avx2 {
void one_photon(const double* omegas, std::size_t n_freq, const StageSources* src, std::size_t n_steps,
                double dt, double* f_re, double* f_im);
void half_line(const Complex* samples, std::size_t n_samples, double dtau, const double* omegas,
               std::size_t n_freq, Complex* out);
} // namespace avx2
#endif

} // namespace optpump::kernels
