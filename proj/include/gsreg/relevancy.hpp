#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gsreg/errors.hpp"

namespace gsreg {

/// Open-vocabulary query embeddings: the positives name what to localize,
/// the negatives are generic/null queries the score is contrasted against.
struct QuerySet {
  std::vector<Eigen::VectorXd> positive;
  std::vector<Eigen::VectorXd> negatives;
};

inline void validate(const QuerySet& queries, std::size_t dim) {
  if (queries.positive.empty()) {
    throw ConfigError("query set needs at least one positive query");
  }
  if (queries.negatives.empty()) {
    throw ConfigError("query set needs at least one negative query");
  }
  for (const auto* list : {&queries.positive, &queries.negatives}) {
    for (const auto& q : *list) {
      if (static_cast<std::size_t>(q.size()) != dim) {
        throw ConfigError("query embedding length " + std::to_string(q.size()) +
                          " does not match map dimension " + std::to_string(dim));
      }
      if (q.norm() == 0.0) throw ConfigError("query embedding has zero norm");
    }
  }
}

inline double cosine_similarity(const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw ConfigError("cosine similarity of a zero-norm embedding");
  }
  return a.dot(b) / (na * nb);
}

/// Pairwise-softmax relevancy of an embedding against a query set:
/// for each positive query q, the score is the minimum over negatives n of
///   exp(cos(e,q)) / (exp(cos(e,q)) + exp(cos(e,n))),
/// and the result is the maximum of those scores over the positives.
/// Always in (0, 1); 0.5 means the embedding is as close to the query as to
/// the worst-case negative.
inline double relevancy(const Eigen::VectorXd& embedding, const QuerySet& queries) {
  if (queries.positive.empty() || queries.negatives.empty()) {
    throw ConfigError("relevancy needs at least one positive and one negative query");
  }
  if (embedding.norm() == 0.0) {
    throw ConfigError("relevancy of a zero-norm embedding");
  }
  double best = 0.0;
  for (const auto& q : queries.positive) {
    const double ep = std::exp(cosine_similarity(embedding, q));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& n : queries.negatives) {
      const double en = std::exp(cosine_similarity(embedding, n));
      worst = std::min(worst, ep / (ep + en));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace gsreg
