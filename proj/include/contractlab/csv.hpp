#pragma once

#include <string>
#include <vector>

#include "contractlab/config.hpp"
#include "contractlab/hjb.hpp"

namespace contractlab {

/// %.12g rendering used by every CSV field.
std::string fmt12(double v);

/// Writes "t,y,value" rows, m outer / i inner, LF endings, byte-deterministic.
/// data is (ts.size() x ys.size()) time-major. Throws IoError on failure.
void export_surface_csv(const std::vector<double>& ts, const std::vector<double>& ys,
                        const std::vector<double>& data, const std::string& path);

void export_surface_csv(const ValueSurface& surface, const std::string& path);

/// Same layout for byte masks and other per-node fields.
void export_mask_csv(const std::vector<double>& ts, const std::vector<double>& ys,
                     const std::vector<unsigned char>& mask, const std::string& path);

/// Arbitrary small table: header line then pre-rendered rows.
void export_table_csv(const std::string& header, const std::vector<std::string>& rows,
                      const std::string& path);

}  // namespace contractlab
