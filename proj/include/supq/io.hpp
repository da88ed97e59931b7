// io.hpp - JSON wire formats for operators, states, decompositions, channels

#pragma once

#include <string>

#include "supq/channels.hpp"
#include "supq/core.hpp"

namespace supq {

// {"dim": n, "entries": [[re, im], ...]} row-major, length n^2
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

std::string density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const std::string& text);

// {"dims": [n1, ..., nK]}
std::string decomposition_to_json(const Decomposition& L);
Decomposition decomposition_from_json(const std::string& text);

// {"dim": n, "kraus": [entries-array, ...]}
std::string channel_to_json(const KrausChannel& phi);
KrausChannel channel_from_json(const std::string& text);

}  // namespace supq
