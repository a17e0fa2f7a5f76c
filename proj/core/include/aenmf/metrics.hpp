#pragma once

#include <vector>

#include "aenmf/dense.hpp"
#include "aenmf/modality.hpp"

namespace aenmf {

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // False when the corresponding pair count was zero and the value was set to 0.
  bool precision_defined = true;
  bool recall_defined = true;
};

struct PairwisePrf {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
};

// Counts n_ij of samples with truth cluster i and predicted cluster j. Label
// values are compacted to 0..k-1 in ascending order.
Matrix contingency(const Labels& truth, const Labels& pred);

// Minimum-cost assignment of rows to columns on a rectangular cost matrix.
// Returns, for every row, its column (or -1 when rows outnumber columns).
std::vector<int> min_cost_assignment(const Matrix& cost);

// Fraction of samples matched under the best one-to-one relabeling.
double accuracy(const Labels& truth, const Labels& pred);

// I(U;V) / sqrt(H(U) H(V)), natural logarithms.
double nmi(const Labels& truth, const Labels& pred);

double adjusted_rand(const Labels& truth, const Labels& pred);

// Pair-counting precision/recall/F over all unordered sample pairs.
PairwisePrf pairwise_prf(const Labels& truth, const Labels& pred);

MetricReport evaluate(const Labels& truth, const Labels& pred);

}  // namespace aenmf
