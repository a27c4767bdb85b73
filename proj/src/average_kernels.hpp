#pragma once

// Summation kernels shared by the streamed and symbolic averaging paths.
// Each takes per-observable value tables v[j][s] = f_j(T^s x).

#include <complex>
#include <cstdint>
#include <vector>

namespace ergo::detail {

using ValueTable = std::vector<std::complex<double>>;

/// (1/N^2) sum_{n,m<N} prod_j v[j][n + j m] (j zero-based).
std::complex<double> square_from_tables(const std::vector<ValueTable>& v, std::int64_t count);

/// (1/N^k) sum_{n in [0,N)^k} prod_mask v[mask-1][sum_{i in mask} n_i].
std::complex<double> cube_from_tables(const std::vector<ValueTable>& v, int order, std::int64_t count);

/// Number of cube vertices k with 2^k - 1 == count; ValidationError otherwise,
/// ResourceError above the order cap.
int checked_cube_order(std::size_t count);

}  // namespace ergo::detail
