#include <cmath>

#include "optpump/kernels.hpp"

namespace optpump::kernels::scalar {

void one_photon(const double* omegas, std::size_t n_freq, const StageSources* src, std::size_t n_steps,
                double dt, double* f_re, double* f_im) {
    const double h2 = 0.5 * dt;
    const double h6 = dt / 6.0;
    for (std::size_t j = 0; j < n_freq; ++j) {
        const double w = omegas[j];
        double fr = f_re[j];
        double fi = f_im[j];
        for (std::size_t n = 0; n < n_steps; ++n) {
            const StageSources& s = src[n];
            // k = s - i*w*y  =>  re: s_re + w*y_im, im: s_im - w*y_re
            const double k1r = s.s1.real() + w * fi;
            const double k1i = s.s1.imag() - w * fr;
            const double y2r = fr + h2 * k1r;
            const double y2i = fi + h2 * k1i;
            const double k2r = s.s2.real() + w * y2i;
            const double k2i = s.s2.imag() - w * y2r;
            const double y3r = fr + h2 * k2r;
            const double y3i = fi + h2 * k2i;
            const double k3r = s.s3.real() + w * y3i;
            const double k3i = s.s3.imag() - w * y3r;
            const double y4r = fr + dt * k3r;
            const double y4i = fi + dt * k3i;
            const double k4r = s.s4.real() + w * y4i;
            const double k4i = s.s4.imag() - w * y4r;
            fr = fr + h6 * (((k1r + 2.0 * k2r) + 2.0 * k3r) + k4r);
            fi = fi + h6 * (((k1i + 2.0 * k2i) + 2.0 * k3i) + k4i);
        }
        f_re[j] = fr;
        f_im[j] = fi;
    }
}

void half_line(const Complex* samples, std::size_t n_samples, double dtau, const double* omegas,
               std::size_t n_freq, Complex* out) {
    for (std::size_t j = 0; j < n_freq; ++j) {
        const double w = omegas[j];
        const double zr = std::cos(w * dtau);
        const double zi = -std::sin(w * dtau);
        double ar = 0.0;
        double ai = 0.0;
        double pr = 1.0;
        double pi = 0.0;
        for (std::size_t k = 0; k < n_samples; ++k) {
            if (k % kPhaseAnchorInterval == 0) {
                const double arg = w * (static_cast<double>(k) * dtau);
                pr = std::cos(arg);
                pi = -std::sin(arg);
            }
            const double cr = samples[k].real();
            const double ci = samples[k].imag();
            ar = ar + (cr * pr - ci * pi);
            ai = ai + (cr * pi + ci * pr);
            const double nr = pr * zr - pi * zi;
            const double ni = pr * zi + pi * zr;
            pr = nr;
            pi = ni;
        }
        out[j] = Complex(ar, ai);
    }
}

} // namespace optpump::kernels::scalar
