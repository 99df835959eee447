#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "folkseg/features.hpp"

namespace folkseg {

/// One response vector and its group label.
struct Observation {
  std::vector<double> values;
  std::string group;
};

struct ScatterMatrices {
  Eigen::MatrixXd within;   // W
  Eigen::MatrixXd between;  // B
};

/// Within- and between-group sums of squares and cross products. Groups
/// are identified by label. Throws DataError unless N > g >= 2 and all
/// observations share one dimension p >= 1.
ScatterMatrices scatter_matrices(std::span<const Observation> observations);

/// Determinant; 2x2 in closed form, larger via partial-pivot LU.
double determinant(const Eigen::MatrixXd& m);

/// Wilks' lambda det(W) / det(W + B), clamped to [0, 1]. Throws
/// NumericalError when W + B is singular.
double wilks_lambda(const Eigen::MatrixXd& within, const Eigen::MatrixXd& between);

struct FTest {
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

/// Rao's F approximation for Wilks' lambda (exact for p <= 2 or g <= 3).
FTest rao_f(double lambda, std::size_t p, std::size_t g, std::size_t n);

struct HotellingResult {
  double t2 = 0.0;
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

/// Two-sample Hotelling T² with pooled covariance. Throws DataError when
/// n_a + n_b <= p + 1 and NumericalError when the pooled covariance is
/// singular.
HotellingResult hotelling_t2(std::span<const Observation> group_a,
                             std::span<const Observation> group_b);

/// Holm step-down adjustment, returned in input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

struct PosthocRow {
  std::string group_a;
  std::string group_b;
  HotellingResult test;
  double p_holm = 1.0;
  /// Pooled covariance was singular; test fields are NaN and the pair is
  /// left out of the Holm family.
  bool singular = false;
};

struct ManovaReport {
  std::size_t p = 0;
  std::size_t g = 0;
  std::size_t n = 0;
  Eigen::MatrixXd within;
  Eigen::MatrixXd between;
  double lambda = 1.0;
  double f_stat = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
  std::vector<std::string> variables;
  std::vector<std::string> groups;  // sorted
  std::vector<std::size_t> group_sizes;
  std::vector<Eigen::VectorXd> group_means;
  std::vector<PosthocRow> posthoc;
  std::vector<std::string> notes;
};

struct ManovaOptions {
  bool posthoc = true;
  /// Reference group count; a note is attached when the data differ.
  std::size_t expected_groups = 8;
};

/// One-way MANOVA. Requires >= 2 groups, >= 2 observations per group and
/// N > g + p (DataError otherwise).
ManovaReport manova(std::span<const Observation> observations, const ManovaOptions& options = {});

/// (motif_count, duration_entropy_bits) per window, or averaged per song.
std::vector<Observation> observations_from_features(const FeatureTable& table,
                                                    bool per_song = false);

ManovaReport manova(const FeatureTable& table, bool per_song = false,
                    const ManovaOptions& options = {});

/// Human-readable summary.
std::string format_manova_text(const ManovaReport& report);
/// Header p,g,n,lambda,f,df1,df2,p_value and one row.
std::string manova_omnibus_csv(const ManovaReport& report);
/// Header group_a,group_b,t2,f,df1,df2,p_raw,p_holm and one row per pair.
std::string manova_posthoc_csv(const ManovaReport& report);
/// Header group,n,<variables...>.
std::string manova_means_csv(const ManovaReport& report);

}  // namespace folkseg
