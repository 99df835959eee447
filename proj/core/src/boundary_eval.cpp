#include "folkseg/boundary_eval.hpp"

#include <algorithm>
#include <numeric>

#include "folkseg/errors.hpp"
#include "folkseg/rng.hpp"

namespace folkseg {

std::vector<MatchedPair> match_boundaries(const std::vector<double>& ref,
                                          const std::vector<double>& pred, double tolerance_s) {
  // Exchange argument: if the earliest unmatched ref and pred are within
  // tolerance, some maximum matching pairs them; otherwise the earlier of the
  // two is out of reach of every remaining point on the other side.
  std::vector<MatchedPair> pairs;
  std::size_t i = 0, j = 0;
  while (i < ref.size() && j < pred.size()) {
    if (within_tolerance(ref[i], pred[j], tolerance_s)) {
      pairs.push_back({i, j});
      ++i;
      ++j;
    } else if (ref[i] < pred[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return pairs;
}

EvalMetrics metrics_from_counts(std::size_t hits, std::size_t n_ref, std::size_t n_pred) {
  EvalMetrics m;
  m.hits = hits;
  m.n_ref = n_ref;
  m.n_pred = n_pred;
  if (n_pred == 0) {
    m.precision = n_ref == 0 ? 1.0 : 0.0;
  } else {
    m.precision = static_cast<double>(hits) / static_cast<double>(n_pred);
  }
  if (n_ref == 0) {
    m.recall = n_pred == 0 ? 1.0 : 0.0;
  } else {
    m.recall = static_cast<double>(hits) / static_cast<double>(n_ref);
  }
  const double sum = m.precision + m.recall;
  m.f1 = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
  return m;
}

EvalMetrics evaluate_song(const BoundaryRecord& ref, const BoundaryRecord& pred,
                          double tolerance_s) {
  if (ref.song_id != pred.song_id) {
    throw DataError("song id mismatch: reference '" + ref.song_id + "' vs predicted '" +
                    pred.song_id + "'");
  }
  const auto pairs = match_boundaries(ref.boundaries_s, pred.boundaries_s, tolerance_s);
  return metrics_from_counts(pairs.size(), ref.boundaries_s.size(), pred.boundaries_s.size());
}

FoldAssignment stratified_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("fold count must be at least 2, got " + std::to_string(k));
  if (k > corpus.records.size()) {
    throw DataError("fold count " + std::to_string(k) + " exceeds corpus size " +
                    std::to_string(corpus.records.size()));
  }

  // Categories in order of first appearance keep the result a function of
  // corpus order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const auto& cat = corpus.records[i].category;
    auto [it, inserted] = members.try_emplace(cat);
    if (inserted) order.push_back(cat);
    it->second.push_back(i);
  }

  FoldAssignment out;
  out.k = k;
  Rng rng(seed);
  std::size_t next_fold = 0;
  for (const auto& cat : order) {
    auto& idx = members[cat];
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    // Continue the round robin where the previous category stopped so that
    // total fold sizes stay balanced as well.
    for (std::size_t song : idx) {
      out.fold_of[corpus.records[song].song_id] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return out;
}

std::vector<std::pair<const BoundaryRecord*, EvalMetrics>> evaluate_songs(
    const Corpus& ref, const Corpus& pred, double tolerance_s) {
  std::map<std::string_view, const BoundaryRecord*> by_id;
  for (const auto& r : ref.records) by_id.emplace(r.song_id, &r);

  std::vector<std::pair<const BoundaryRecord*, EvalMetrics>> out;
  out.reserve(pred.records.size());
  for (const auto& p : pred.records) {
    auto it = by_id.find(p.song_id);
    if (it == by_id.end()) {
      throw DataError("predicted song '" + p.song_id + "' has no reference annotation");
    }
    out.emplace_back(it->second, evaluate_song(*it->second, p, tolerance_s));
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    std::string ids;
    for (const auto& [id, rec] : by_id) {
      if (!ids.empty()) ids += ", ";
      ids += std::string(id);
    }
    throw DataError("reference songs without a prediction: " + ids);
  }
  return out;
}

std::vector<GroupSummary> evaluate_corpus(const Corpus& ref, const Corpus& pred,
                                          const EvalOptions& options) {
  if (options.group_by == GroupBy::fold && options.folds == nullptr) {
    throw DataError("fold grouping requested without a fold assignment");
  }
  const auto songs = evaluate_songs(ref, pred, options.tolerance_s);

  struct Acc {
    std::size_t n = 0, hits = 0, n_ref = 0, n_pred = 0;
    double p = 0.0, r = 0.0, f = 0.0;
  };
  // Key orders folds numerically and names lexicographically.
  std::map<std::pair<std::size_t, std::string>, Acc> groups;
  for (const auto& [rec, m] : songs) {
    std::pair<std::size_t, std::string> key{0, "all"};
    if (options.group_by == GroupBy::category) {
      key = {0, rec->category};
    } else if (options.group_by == GroupBy::fold) {
      auto it = options.folds->fold_of.find(rec->song_id);
      if (it == options.folds->fold_of.end()) {
        throw DataError("song '" + rec->song_id + "' has no fold assignment");
      }
      key = {it->second, std::to_string(it->second)};
    }
    Acc& a = groups[key];
    ++a.n;
    a.hits += m.hits;
    a.n_ref += m.n_ref;
    a.n_pred += m.n_pred;
    a.p += m.precision;
    a.r += m.recall;
    a.f += m.f1;
  }

  std::vector<GroupSummary> out;
  out.reserve(groups.size());
  for (const auto& [key, a] : groups) {
    GroupSummary s;
    s.group = key.second;
    s.n_songs = a.n;
    if (options.aggregation == Aggregation::macro) {
      const double n = static_cast<double>(a.n);
      s.mean_precision = a.p / n;
      s.mean_recall = a.r / n;
      s.mean_f1 = a.f / n;
    } else {
      const EvalMetrics pooled = metrics_from_counts(a.hits, a.n_ref, a.n_pred);
      s.mean_precision = pooled.precision;
      s.mean_recall = pooled.recall;
      s.mean_f1 = pooled.f1;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_string(GroupBy g) {
  switch (g) {
    case GroupBy::none: return "none";
    case GroupBy::category: return "category";
    case GroupBy::fold: return "fold";
  }
  return "none";
}

std::string to_string(Aggregation a) { return a == Aggregation::macro ? "macro" : "micro"; }

}  // namespace folkseg
