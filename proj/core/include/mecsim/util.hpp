#ifndef MECSIM_UTIL_HPP
#define MECSIM_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double sq_dist(const Point& a, const Point& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(sq_dist(a, b)); }

// R(.): round-half-up, the single rounding convention used everywhere.
inline long long round_half_up(double v) {
  return static_cast<long long>(std::floor(v + 0.5));
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Prints a double so that parsing it back recovers the exact same bits.
std::string format_double(double v);

std::vector<std::string> split_ws(const std::string& line);

}  // namespace mecsim

#endif
