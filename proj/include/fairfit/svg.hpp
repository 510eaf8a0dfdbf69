#pragma once

#include <string>
#include <vector>

#include "fairfit/data.hpp"
#include "fairfit/model.hpp"

namespace fairfit {

// n evenly spaced values covering [lo, hi] inclusive at both ends.
std::vector<double> linspace(double lo, double hi, int n);

// Standalone SVG 1.1 document: wanted/unwanted scatter plus the model curve
// sampled at >= 200 x-points across [min x, max x]. Output is byte-identical
// for identical inputs; the legend omits the unwanted entry when the dataset
// has none.
std::string render_plot(const Dataset& dataset, const PolynomialModel& model,
                        const std::string& title);

void write_plot(const Dataset& dataset, const PolynomialModel& model,
                const std::string& title, const std::string& path);

}  // namespace fairfit
