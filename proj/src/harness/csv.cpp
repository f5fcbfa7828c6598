#include "optpump/harness/csv.hpp"

#include <cstdio>
#include <fstream>

#include "optpump/errors.hpp"

namespace optpump::harness {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (const double v : values) {
        if (!first) out += ',';
        out += format_value(v);
        first = false;
    }
    out += '\n';
}

} // namespace

std::string population_csv(const PopulationTrace& trace) {
    std::string out = "t,rho_gg,rho_ee,rho_tt,re_ge,im_ge,re_et,im_et,re_gt,im_gt\n";
    out.reserve(out.size() + trace.size() * 160);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        append_row(out, {trace.times[k], trace.rho_gg[k], trace.rho_ee[k], trace.rho_tt[k], trace.rho_ge[k].real(),
                         trace.rho_ge[k].imag(), trace.rho_et[k].real(), trace.rho_et[k].imag(),
                         trace.rho_gt[k].real(), trace.rho_gt[k].imag()});
    }
    return out;
}

std::string spectrum_csv(const SpectrumResult& spec) {
    std::string out = "omega,s_re,s_im,s_abs2\n";
    for (std::size_t j = 0; j < spec.s_values.size(); ++j)
        append_row(out, {spec.grid.omega(j), spec.s_values[j].real(), spec.s_values[j].imag(), spec.abs2[j]});
    return out;
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += format_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
}

} // namespace optpump::harness
