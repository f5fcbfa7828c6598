#include <cstdlib>
#include <string>

#include "optpump/errors.hpp"
#include "optpump/kernels.hpp"

namespace optpump::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::Scalar, &scalar::one_photon, &scalar::half_line};
#if defined(OPTPUMP_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Isa::Avx2, &avx2::one_photon, &avx2::half_line};
#endif

const KernelTable& select_kernels() {
    if (const char* env = std::getenv("OPTPUMP_ISA")) {
        const std::string want(env);
        if (want == "scalar") return kScalarTable;
        if (want == "avx2") return kernels_for(Isa::Avx2);
        throw DomainError("OPTPUMP_ISA: expected 'scalar' or 'avx2', got '" + want + "'");
    }
    if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
    return kScalarTable;
}

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(OPTPUMP_HAVE_AVX2_KERNELS)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa))
        throw DomainError(std::string("kernel ISA not available on this machine: ") +
                          std::string(isa_name(isa)));
#if defined(OPTPUMP_HAVE_AVX2_KERNELS)
    if (isa == Isa::Avx2) return kAvx2Table;
#endif
    return kScalarTable;
}

const KernelTable& active_kernels() {
    static const KernelTable& table = select_kernels();
    return table;
}

void advance_one_photon(std::span<const double> omegas, std::span<const StageSources> src, double dt,
                        std::span<double> f_re, std::span<double> f_im, const KernelTable& k) {
    if (f_re.size() != omegas.size() || f_im.size() != omegas.size())
        throw DomainError("advance_one_photon: amplitude arrays do not match the frequency count");
    k.one_photon(omegas.data(), omegas.size(), src.data(), src.size(), dt, f_re.data(), f_im.data());
}

std::vector<Complex> half_line_transform(std::span<const Complex> samples, double dtau,
                                         std::span<const double> omegas, const KernelTable& k) {
    std::vector<Complex> out(omegas.size());
    k.half_line(samples.data(), samples.size(), dtau, omegas.data(), omegas.size(), out.data());
    return out;
}

} // namespace optpump::kernels
