#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optpump/lindblad.hpp"
#include "optpump/spectrum.hpp"

namespace optpump::harness {

// Values are printed with 12 significant digits; every row ends in '\n'.
std::string format_value(double v);

// t, rho_gg, rho_ee, rho_tt, re_ge, im_ge, re_et, im_et, re_gt, im_gt
std::string population_csv(const PopulationTrace& trace);
// omega, s_re, s_im, s_abs2
std::string spectrum_csv(const SpectrumResult& spec);
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

// Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& contents);

inline void write_csv(const PopulationTrace& trace, const std::filesystem::path& path) {
    write_text(path, population_csv(trace));
}
inline void write_csv(const SpectrumResult& spec, const std::filesystem::path& path) {
    write_text(path, spectrum_csv(spec));
}

} // namespace optpump::harness
