#pragma once

#include <vector>

#include "lbm/combinatorics.hpp"
#include "lbm/params.hpp"

namespace lbm {

/// Edge weight (q_{b(i)} - q_{max(j-1, b(i-1))}) / q_{b(i-1)}.
/// Throws std::invalid_argument when e is not an edge of g or the sizes differ.
template <Scalar S>
S gamma(const DCGraph& g, const Params<S>& params, const Edge& e);

/// Path weights Gamma_{i,j}, 1 <= i <= j <= N, as a 1-based table
/// (rows and columns 0 unused, entries below the diagonal zero).
template <Scalar S>
std::vector<std::vector<S>> big_gamma_table(const DCGraph& g, const Params<S>& params);

/// Gamma_{i,j} for 1 <= i <= j <= N; throws std::out_of_range otherwise.
template <Scalar S>
S big_gamma(const DCGraph& g, const Params<S>& params, int i, int j);

/// Closed-form solution z_1..z_N (0-based vector) of the system attached to g.
/// Defined for every parameter point, not only inside the region of g.
template <Scalar S>
std::vector<S> solve_system(const DCGraph& g, const Params<S>& params);

/// 1 / z_1 of solve_system.
template <Scalar S>
S speed(const DCGraph& g, const Params<S>& params);

/// Row residuals a_i - sum_{j <= b(i)} p_j (Z_i - Z_j + z_1), where Z_i = z_1 + ... + z_i.
template <Scalar S>
std::vector<S> system_residual(const DCGraph& g, const Params<S>& params, const std::vector<S>& z);

/// z_{i+1} + ... + z_j for a 0-based z vector (0 when i >= j).
template <Scalar S>
S span_sum(const std::vector<S>& z, int i, int j);

/// 1 + sum_{k=i+1}^{j} sum_{l>=k} Gamma_{k,l} (q_{b(l)} - q_{b(l-1)}) / q_{b(l-1)}.
template <Scalar S>
S gap_denominator(const DCGraph& g, const Params<S>& params, int i, int j);

/// The weighted average of z_1 and Z_{i,j} with the gap denominator above,
/// evaluated from its closed form in the d_l (independent of solve_system).
template <Scalar S>
S rescaled_span(const DCGraph& g, const Params<S>& params, int i, int j);

}  // namespace lbm
