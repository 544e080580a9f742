#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace soliton {

// 17 significant digits; infinities print as INF / -INF, NaN as NAN.
std::string fmt_real(double x);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace soliton
