#pragma once

#include "splab/kernels.hpp"
#include "splab/loopset.hpp"
#include "splab/randomwave.hpp"
#include "splab/remainder.hpp"
#include "splab/scaling.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace splab {

//! Shortest round-trip decimal form (17 significant digits at most).
[[nodiscard]] std::string format_number(double x);

//! Quoted and escaped JSON string literal.
[[nodiscard]] std::string json_string(std::string_view s);

//! Writes to a sibling temporary file, then renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

//! u_1..u_n, v_1..v_n, alpha, beta, value
[[nodiscard]] std::string kernel_field_csv(const KernelField& field);

//! lambda, sup_remainder
[[nodiscard]] std::string remainder_csv(const RemainderReport& report);

//! One JSON object: model, x0, alpha, beta, alpha_hat, C_hat, residual, dropped_zeros.
[[nodiscard]] std::string remainder_summary_json(const RemainderReport& report);

//! lambda, alpha, beta, sup_error
[[nodiscard]] std::string convergence_csv(const ConvergenceReport& report);

//! point_index, mean, variance, covariance_to_x0, stderr. Grid point 0 plays x0.
[[nodiscard]] std::string ensemble_summary_csv(const WaveEnsemble& ens);

//! Raw sample matrix as little-endian float64, row-major (samples x grid).
void write_ensemble_raw(const WaveEnsemble& ens, const std::filesystem::path& data,
                        const std::filesystem::path& header);

//! direction_angle, first_return_time_or_-1, min_distance
[[nodiscard]] std::string loopset_csv(const LoopsetEstimate& est);

} // namespace splab
