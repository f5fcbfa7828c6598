#include "optpump/kernels.hpp"

#if defined(OPTPUMP_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>

#define OPTPUMP_AVX2 __attribute__((target("avx2")))

namespace optpump::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

OPTPUMP_AVX2 void one_photon(const double* omegas, std::size_t n_freq, const StageSources* src,
                             std::size_t n_steps, double dt, double* f_re, double* f_im) {
    const __m256d h2 = _mm256_set1_pd(0.5 * dt);
    const __m256d h = _mm256_set1_pd(dt);
    const __m256d h6 = _mm256_set1_pd(dt / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);

    const std::size_t n_vec = n_freq - n_freq % kLanes;
    for (std::size_t j = 0; j < n_vec; j += kLanes) {
        const __m256d w = _mm256_loadu_pd(omegas + j);
        __m256d fr = _mm256_loadu_pd(f_re + j);
        __m256d fi = _mm256_loadu_pd(f_im + j);
        for (std::size_t n = 0; n < n_steps; ++n) {
            const StageSources& s = src[n];
            const __m256d k1r = _mm256_add_pd(_mm256_set1_pd(s.s1.real()), _mm256_mul_pd(w, fi));
            const __m256d k1i = _mm256_sub_pd(_mm256_set1_pd(s.s1.imag()), _mm256_mul_pd(w, fr));
            const __m256d y2r = _mm256_add_pd(fr, _mm256_mul_pd(h2, k1r));
            const __m256d y2i = _mm256_add_pd(fi, _mm256_mul_pd(h2, k1i));
            const __m256d k2r = _mm256_add_pd(_mm256_set1_pd(s.s2.real()), _mm256_mul_pd(w, y2i));
            const __m256d k2i = _mm256_sub_pd(_mm256_set1_pd(s.s2.imag()), _mm256_mul_pd(w, y2r));
            const __m256d y3r = _mm256_add_pd(fr, _mm256_mul_pd(h2, k2r));
            const __m256d y3i = _mm256_add_pd(fi, _mm256_mul_pd(h2, k2i));
            const __m256d k3r = _mm256_add_pd(_mm256_set1_pd(s.s3.real()), _mm256_mul_pd(w, y3i));
            const __m256d k3i = _mm256_sub_pd(_mm256_set1_pd(s.s3.imag()), _mm256_mul_pd(w, y3r));
            const __m256d y4r = _mm256_add_pd(fr, _mm256_mul_pd(h, k3r));
            const __m256d y4i = _mm256_add_pd(fi, _mm256_mul_pd(h, k3i));
            const __m256d k4r = _mm256_add_pd(_mm256_set1_pd(s.s4.real()), _mm256_mul_pd(w, y4i));
            const __m256d k4i = _mm256_sub_pd(_mm256_set1_pd(s.s4.imag()), _mm256_mul_pd(w, y4r));

            __m256d sr = _mm256_add_pd(k1r, _mm256_mul_pd(two, k2r));
            sr = _mm256_add_pd(sr, _mm256_mul_pd(two, k3r));
            sr = _mm256_add_pd(sr, k4r);
            __m256d si = _mm256_add_pd(k1i, _mm256_mul_pd(two, k2i));
            si = _mm256_add_pd(si, _mm256_mul_pd(two, k3i));
            si = _mm256_add_pd(si, k4i);
            fr = _mm256_add_pd(fr, _mm256_mul_pd(h6, sr));
            fi = _mm256_add_pd(fi, _mm256_mul_pd(h6, si));
        }
        _mm256_storeu_pd(f_re + j, fr);
        _mm256_storeu_pd(f_im + j, fi);
    }
    if (n_vec < n_freq)
        scalar::one_photon(omegas + n_vec, n_freq - n_vec, src, n_steps, dt, f_re + n_vec, f_im + n_vec);
}

OPTPUMP_AVX2 void half_line(const Complex* samples, std::size_t n_samples, double dtau,
                            const double* omegas, std::size_t n_freq, Complex* out) {
    const std::size_t n_vec = n_freq - n_freq % kLanes;
    alignas(32) double tmp_r[kLanes];
    alignas(32) double tmp_i[kLanes];

    for (std::size_t j = 0; j < n_vec; j += kLanes) {
        for (std::size_t l = 0; l < kLanes; ++l) {
            tmp_r[l] = std::cos(omegas[j + l] * dtau);
            tmp_i[l] = -std::sin(omegas[j + l] * dtau);
        }
        const __m256d zr = _mm256_load_pd(tmp_r);
        const __m256d zi = _mm256_load_pd(tmp_i);
        __m256d ar = _mm256_setzero_pd();
        __m256d ai = _mm256_setzero_pd();
        __m256d pr = _mm256_set1_pd(1.0);
        __m256d pi = _mm256_setzero_pd();

        for (std::size_t k = 0; k < n_samples; ++k) {
            if (k % kPhaseAnchorInterval == 0) {
                const double t = static_cast<double>(k) * dtau;
                for (std::size_t l = 0; l < kLanes; ++l) {
                    const double arg = omegas[j + l] * t;
                    tmp_r[l] = std::cos(arg);
                    tmp_i[l] = -std::sin(arg);
                }
                pr = _mm256_load_pd(tmp_r);
                pi = _mm256_load_pd(tmp_i);
            }
            const __m256d cr = _mm256_set1_pd(samples[k].real());
            const __m256d ci = _mm256_set1_pd(samples[k].imag());
            ar = _mm256_add_pd(ar, _mm256_sub_pd(_mm256_mul_pd(cr, pr), _mm256_mul_pd(ci, pi)));
            ai = _mm256_add_pd(ai, _mm256_add_pd(_mm256_mul_pd(cr, pi), _mm256_mul_pd(ci, pr)));
            const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(pr, zr), _mm256_mul_pd(pi, zi));
            const __m256d ni = _mm256_add_pd(_mm256_mul_pd(pr, zi), _mm256_mul_pd(pi, zr));
            pr = nr;
            pi = ni;
        }
        _mm256_store_pd(tmp_r, ar);
        _mm256_store_pd(tmp_i, ai);
        for (std::size_t l = 0; l < kLanes; ++l) out[j + l] = Complex(tmp_r[l], tmp_i[l]);
    }
    if (n_vec < n_freq)
        scalar::half_line(samples, n_samples, dtau, omegas + n_vec, n_freq - n_vec, out + n_vec);
}

} // namespace optpump::kernels::avx2

#endif
