// Plain-text medium configs and CSV tables.
#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "te_lab/media.hpp"

namespace te {

// key = value lines, '#' comments. Keys: kind, gamma, kappa, params.<name>,
// and for custom-sampled media `samples` (CSV path, relative to the config).
Medium parse_medium_config(std::istream& in, const std::filesystem::path& base_dir = {});
Medium load_medium_config(const std::filesystem::path& path);

// Header `phi,a11_re,a12_re,a12_im,a22_re`; rows at phi = 2 pi k / N.
std::vector<Matrix2cd> read_custom_samples(std::istream& in);

// Initial data on an n x n grid: header `u1x,u1y,u2x,u2y,theta`, n*n rows in
// row-major order (row index = y index).
std::array<Eigen::MatrixXd, 5> read_field_csv(std::istream& in, int n);

}  // namespace te
