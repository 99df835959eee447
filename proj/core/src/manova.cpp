#include "folkseg/manova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "folkseg/errors.hpp"
#include "folkseg/format.hpp"
#include "folkseg/special_functions.hpp"

namespace folkseg {
namespace {

// det(M) / prod(diag(M)) lies in [0, 1] for a PSD matrix (Hadamard); below
// this ratio the matrix is treated as singular.
constexpr double kSingularRatio = 1e-12;

bool near_singular_psd(const Eigen::MatrixXd& m) {
  double diag = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 0.0)) return true;
    diag *= m(i, i);
  }
  return !(determinant(m) / diag > kSingularRatio);
}

std::size_t dimension_of(std::span<const Observation> obs) {
  if (obs.empty()) throw DataError("no observations");
  const std::size_t p = obs.front().values.size();
  if (p == 0) throw DataError("observations have no variables");
  for (const auto& o : obs) {
    if (o.values.size() != p) throw DataError("observations differ in dimension");
    for (double v : o.values) {
      if (!std::isfinite(v)) throw DataError("non-finite observation in group '" + o.group + "'");
    }
  }
  return p;
}

Eigen::VectorXd as_vector(const Observation& o) {
  return Eigen::Map<const Eigen::VectorXd>(o.values.data(), static_cast<Eigen::Index>(o.values.size()));
}

struct GroupStats {
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  std::vector<Eigen::VectorXd> means;
};

GroupStats group_stats(std::span<const Observation> obs, std::size_t p) {
  std::map<std::string, std::pair<std::size_t, Eigen::VectorXd>> acc;
  for (const auto& o : obs) {
    auto [it, inserted] = acc.try_emplace(o.group, 0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)));
    ++it->second.first;
    it->second.second += as_vector(o);
  }
  GroupStats s;
  for (auto& [name, a] : acc) {
    s.names.push_back(name);
    s.sizes.push_back(a.first);
    s.means.push_back(a.second / static_cast<double>(a.first));
  }
  return s;
}

Eigen::MatrixXd within_scatter(std::span<const Observation> obs, const Eigen::VectorXd& mean) {
  const auto p = mean.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (const auto& o : obs) {
    const Eigen::VectorXd d = as_vector(o) - mean;
    w.noalias() += d * d.transpose();
  }
  return w;
}

Eigen::VectorXd mean_of(std::span<const Observation> obs, std::size_t p) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (const auto& o : obs) m += as_vector(o);
  return m / static_cast<double>(obs.size());
}

}  // namespace

double determinant(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DataError("determinant of a non-square matrix");
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.partialPivLu().determinant();
}

ScatterMatrices scatter_matrices(std::span<const Observation> observations) {
  const std::size_t p = dimension_of(observations);
  const GroupStats gs = group_stats(observations, p);
  const std::size_t g = gs.names.size();
  const std::size_t n = observations.size();
  if (g < 2) throw DataError("at least two groups are required, got " + std::to_string(g));
  if (n <= g) {
    throw DataError("no within-group degrees of freedom (N = " + std::to_string(n) +
                    ", g = " + std::to_string(g) + ")");
  }

  const Eigen::VectorXd grand = mean_of(observations, p);
  const auto ip = static_cast<Eigen::Index>(p);
  ScatterMatrices s{Eigen::MatrixXd::Zero(ip, ip), Eigen::MatrixXd::Zero(ip, ip)};

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < g; ++i) index.emplace(gs.names[i], i);
  for (const auto& o : observations) {
    const Eigen::VectorXd d = as_vector(o) - gs.means[index.at(o.group)];
    s.within.noalias() += d * d.transpose();
  }
  for (std::size_t i = 0; i < g; ++i) {
    const Eigen::VectorXd d = gs.means[i] - grand;
    s.between.noalias() += static_cast<double>(gs.sizes[i]) * (d * d.transpose());
  }
  return s;
}

double wilks_lambda(const Eigen::MatrixXd& within, const Eigen::MatrixXd& between) {
  const Eigen::MatrixXd total = within + between;
  if (near_singular_psd(total)) {
    throw NumericalError("total scatter matrix W + B is singular (collinear or constant features)");
  }
  const double lambda = determinant(within) / determinant(total);
  return std::clamp(lambda, 0.0, 1.0);
}

FTest rao_f(double lambda, std::size_t p, std::size_t g, std::size_t n) {
  const double pp = static_cast<double>(p);
  const double vh = static_cast<double>(g) - 1.0;
  const double ve = static_cast<double>(n) - static_cast<double>(g);
  const double denom = pp * pp + vh * vh - 5.0;
  const double s = denom > 0.0 ? std::sqrt((pp * pp * vh * vh - 4.0) / denom) : 1.0;
  const double m = ve + vh - (pp + vh + 1.0) / 2.0;

  FTest out;
  out.df1 = pp * vh;
  out.df2 = m * s - out.df1 / 2.0 + 1.0;
  if (lambda >= 1.0) return out;
  if (lambda <= 0.0) {
    out.f = std::numeric_limits<double>::infinity();
    return out;
  }
  const double root = std::pow(lambda, 1.0 / s);
  out.f = (1.0 - root) / root * (out.df2 / out.df1);
  return out;
}

HotellingResult hotelling_t2(std::span<const Observation> group_a,
                             std::span<const Observation> group_b) {
  const std::size_t p = dimension_of(group_a);
  if (dimension_of(group_b) != p) throw DataError("groups differ in dimension");
  const std::size_t na = group_a.size();
  const std::size_t nb = group_b.size();
  const std::size_t n = na + nb;
  if (n <= p + 1) {
    throw DataError("Hotelling T² needs n_a + n_b > p + 1 (got " + std::to_string(n) + ")");
  }

  const Eigen::VectorXd ma = mean_of(group_a, p);
  const Eigen::VectorXd mb = mean_of(group_b, p);
  const Eigen::MatrixXd pooled =
      (within_scatter(group_a, ma) + within_scatter(group_b, mb)) / static_cast<double>(n - 2);
  if (near_singular_psd(pooled)) throw NumericalError("pooled covariance matrix is singular");

  const Eigen::VectorXd d = ma - mb;
  const Eigen::VectorXd solved = pooled.partialPivLu().solve(d);

  HotellingResult r;
  const double dn = static_cast<double>(n);
  const double dp = static_cast<double>(p);
  r.t2 = std::max(0.0, static_cast<double>(na) * static_cast<double>(nb) / dn * d.dot(solved));
  r.df1 = dp;
  r.df2 = dn - dp - 1.0;
  r.f = r.t2 * r.df2 / (dp * (dn - 2.0));
  r.p_value = f_survival(r.f, r.df1, r.df2);
  return r;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double scaled = static_cast<double>(m - rank) * p_values[order[rank]];
    running = std::max(running, std::min(scaled, 1.0));
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

ManovaReport manova(std::span<const Observation> observations, const ManovaOptions& options) {
  const std::size_t p = dimension_of(observations);
  const GroupStats gs = group_stats(observations, p);
  const std::size_t g = gs.names.size();
  const std::size_t n = observations.size();
  if (g < 2) throw DataError("MANOVA needs at least two groups, got " + std::to_string(g));
  for (std::size_t i = 0; i < g; ++i) {
    if (gs.sizes[i] < 2) {
      throw DataError("group '" + gs.names[i] + "' has " + std::to_string(gs.sizes[i]) +
                      " observation(s); at least 2 are required");
    }
  }
  if (n <= g + p) {
    throw DataError("MANOVA needs N > g + p (N = " + std::to_string(n) +
                    ", g = " + std::to_string(g) + ", p = " + std::to_string(p) + ")");
  }

  ManovaReport r;
  r.p = p;
  r.g = g;
  r.n = n;
  ScatterMatrices s = scatter_matrices(observations);
  r.within = std::move(s.within);
  r.between = std::move(s.between);
  r.lambda = wilks_lambda(r.within, r.between);
  const FTest ft = rao_f(r.lambda, p, g, n);
  r.f_stat = ft.f;
  r.df1 = ft.df1;
  r.df2 = ft.df2;
  r.p_value = f_survival(ft.f, ft.df1, ft.df2);
  r.groups = gs.names;
  r.group_sizes = gs.sizes;
  r.group_means = gs.means;
  for (std::size_t j = 0; j < p; ++j) r.variables.push_back("v" + std::to_string(j + 1));

  if (options.expected_groups != 0 && g != options.expected_groups) {
    r.notes.push_back("data has g = " + std::to_string(g) + " groups (df1 = " +
                      format_number(ft.df1) + "); the reference analysis reported df1 = " +
                      std::to_string(p * (options.expected_groups - 1)) + ", i.e. " +
                      std::to_string(options.expected_groups) + " groups");
  }

  if (options.posthoc) {
    std::map<std::string, std::vector<Observation>> by_group;
    for (const auto& o : observations) by_group[o.group].push_back(o);
    std::vector<double> raw;
    std::vector<std::size_t> tested;
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = i + 1; j < g; ++j) {
        PosthocRow row;
        row.group_a = gs.names[i];
        row.group_b = gs.names[j];
        try {
          row.test = hotelling_t2(by_group[row.group_a], by_group[row.group_b]);
          raw.push_back(row.test.p_value);
          tested.push_back(r.posthoc.size());
        } catch (const NumericalError&) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          row.singular = true;
          row.test = {nan, nan, nan, nan, nan};
          row.p_holm = nan;
        }
        r.posthoc.push_back(std::move(row));
      }
    }
    const auto adjusted = holm_adjust(raw);
    for (std::size_t k = 0; k < tested.size(); ++k) r.posthoc[tested[k]].p_holm = adjusted[k];
  }
  return r;
}

std::vector<Observation> observations_from_features(const FeatureTable& table, bool per_song) {
  std::vector<Observation> out;
  if (!per_song) {
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      out.push_back({{row.motif_count, row.duration_entropy_bits}, row.category});
    }
    return out;
  }
  struct Acc {
    std::string category;
    std::size_t n = 0;
    double count = 0.0, entropy = 0.0;
  };
  std::map<std::string, Acc> songs;
  for (const auto& row : table.rows) {
    Acc& a = songs[row.song_id];
    if (a.n > 0 && a.category != row.category) {
      throw ValidationError(row.song_id, "category", "song has rows in several categories");
    }
    a.category = row.category;
    ++a.n;
    a.count += row.motif_count;
    a.entropy += row.duration_entropy_bits;
  }
  for (const auto& [id, a] : songs) {
    const double n = static_cast<double>(a.n);
    out.push_back({{a.count / n, a.entropy / n}, a.category});
  }
  return out;
}

ManovaReport manova(const FeatureTable& table, bool per_song, const ManovaOptions& options) {
  const auto obs = observations_from_features(table, per_song);
  ManovaReport r = manova(obs, options);
  r.variables = {"motif_count", "duration_entropy_bits"};
  return r;
}

std::string format_manova_text(const ManovaReport& r) {
  std::ostringstream out;
  out << "One-way MANOVA\n";
  out << "  observations N = " << r.n << ", groups g = " << r.g << ", variables p = " << r.p
      << "\n";
  out << "  Wilks' lambda  = " << format_number(r.lambda) << "\n";
  out << "  Rao F(" << format_number(r.df1) << ", " << format_number(r.df2)
      << ") = " << format_number(r.f_stat) << "\n";
  out << "  p-value        = " << format_number(r.p_value) << "\n";
  for (const auto& note : r.notes) out << "  note: " << note << "\n";

  out << "\nGroup means\n";
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    out << "  " << r.groups[i] << " (n = " << r.group_sizes[i] << "):";
    for (Eigen::Index j = 0; j < r.group_means[i].size(); ++j) {
      out << " " << r.variables[static_cast<std::size_t>(j)] << " = "
          << format_number(r.group_means[i](j));
    }
    out << "\n";
  }

  if (!r.posthoc.empty()) {
    out << "\nPairwise Hotelling T² (Holm-adjusted)\n";
    for (const auto& row : r.posthoc) {
      out << "  " << row.group_a << " vs " << row.group_b << ": ";
      if (row.singular) {
        out << "singular pooled covariance, not tested\n";
        continue;
      }
      out << "T² = " << format_number(row.test.t2) << ", F(" << format_number(row.test.df1)
          << ", " << format_number(row.test.df2) << ") = " << format_number(row.test.f)
          << ", p = " << format_number(row.test.p_value)
          << ", p_holm = " << format_number(row.p_holm) << "\n";
    }
  }
  return out.str();
}

std::string manova_omnibus_csv(const ManovaReport& r) {
  std::string out = "p,g,n,lambda,f,df1,df2,p_value\n";
  out += csv_join({std::to_string(r.p), std::to_string(r.g), std::to_string(r.n),
                   format_number(r.lambda), format_number(r.f_stat), format_number(r.df1),
                   format_number(r.df2), format_number(r.p_value)});
  out += '\n';
  return out;
}

std::string manova_posthoc_csv(const ManovaReport& r) {
  std::string out = "group_a,group_b,t2,f,df1,df2,p_raw,p_holm\n";
  for (const auto& row : r.posthoc) {
    out += csv_join({row.group_a, row.group_b, format_number(row.test.t2),
                     format_number(row.test.f), format_number(row.test.df1),
                     format_number(row.test.df2), format_number(row.test.p_value),
                     format_number(row.p_holm)});
    out += '\n';
  }
  return out;
}

std::string manova_means_csv(const ManovaReport& r) {
  std::vector<std::string> header = {"group", "n"};
  header.insert(header.end(), r.variables.begin(), r.variables.end());
  std::string out = csv_join(header) + '\n';
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    std::vector<std::string> row = {r.groups[i], std::to_string(r.group_sizes[i])};
    for (Eigen::Index j = 0; j < r.group_means[i].size(); ++j) {
      row.push_back(format_number(r.group_means[i](j)));
    }
    out += csv_join(row) + '\n';
  }
  return out;
}

}  // namespace folkseg
