#include "contractlab/csv.hpp"

#include <cstdio>
#include <fstream>

namespace contractlab {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void export_surface_csv(const std::vector<double>& ts, const std::vector<double>& ys,
                        const std::vector<double>& data, const std::string& path) {
    if (data.size() != ts.size() * ys.size())
        throw IoError("export_surface_csv: shape mismatch for '" + path + "'");
    std::ofstream out = open_out(path);
    out << "t,y,value\n";
    for (std::size_t m = 0; m < ts.size(); ++m)
        for (std::size_t i = 0; i < ys.size(); ++i)
            out << fmt12(ts[m]) << ',' << fmt12(ys[i]) << ',' << fmt12(data[m * ys.size() + i])
                << '\n';
    finish(out, path);
}

void export_surface_csv(const ValueSurface& surface, const std::string& path) {
    export_surface_csv(surface.grid.ts, surface.grid.ys, surface.data, path);
}

void export_mask_csv(const std::vector<double>& ts, const std::vector<double>& ys,
                     const std::vector<unsigned char>& mask, const std::string& path) {
    std::vector<double> data(mask.size());
    for (std::size_t j = 0; j < mask.size(); ++j) data[j] = mask[j] ? 1.0 : 0.0;
    export_surface_csv(ts, ys, data, path);
}

void export_table_csv(const std::string& header, const std::vector<std::string>& rows,
                      const std::string& path) {
    std::ofstream out = open_out(path);
    out << header << '\n';
    for (const auto& row : rows) out << row << '\n';
    finish(out, path);
}

}  // namespace contractlab
