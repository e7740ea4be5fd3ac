#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlq/geometry.hpp"

namespace dlq {

/// Named integrands over ambient coordinates: const1, x, y, z, x2, y2, z2,
/// xy, xz, yz, r2 (= |p|^2). x, y, z are coordinates 0, 1, 2.
std::vector<std::string> integrand_names();

bool is_integrand(std::string_view name);

double evaluate_integrand(std::string_view name, std::span<const double> p);

std::vector<double> evaluate_integrand(std::string_view name, const PointCloud& points);

}  // namespace dlq
