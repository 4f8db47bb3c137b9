#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dynamo/graph.hpp"
#include "dynamo/partition.hpp"

namespace dynamo {

/// Joint counts n_xy = |x ∩ y| of two clusterings of the same vertex set.
struct ConfusionTable {
  std::map<std::pair<CommunityId, CommunityId>, std::uint64_t> counts;
  std::map<CommunityId, std::uint64_t> row_sums;
  std::map<CommunityId, std::uint64_t> column_sums;
  std::uint64_t n = 0;
};

/// Throws VertexSetMismatch when the vertex lists differ.
ConfusionTable confusion_table(std::span<const VertexId> vertices_a, std::span<const CommunityId> labels_a,
                               std::span<const VertexId> vertices_b, std::span<const CommunityId> labels_b);
ConfusionTable confusion_table(const Partition& truth, const Partition& result);
ConfusionTable confusion_table(const Assignment& truth, const Assignment& result);

/// Normalised mutual information 2 I(T;R) / (H(T) + H(R)) with natural logs.
/// When both entropies vanish (both single-community) the result is 1.
double nmi(const ConfusionTable& table);
double nmi(const Partition& truth, const Partition& result);
double nmi(const Assignment& truth, const Assignment& result);

/// Pair-counting index 2(ad - bc) / (b^2 + c^2 + 2ad + (a+d)(b+c)), where a..d
/// count vertex pairs together in both / truth only / result only / neither.
/// A zero denominator only happens for identical clusterings and yields 1.
/// Throws VertexSetMismatch when fewer than two vertices are given.
double ari(const ConfusionTable& table);
double ari(const Partition& truth, const Partition& result);
double ari(const Assignment& truth, const Assignment& result);

struct PairCounts {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};
PairCounts pair_counts(const ConfusionTable& table);

inline constexpr std::size_t kExhaustiveLimit = 12;

struct ExhaustiveResult {
  Partition partition;
  double modularity = 0.0;
};

/// Enumerates every set partition of g's vertices (restricted growth strings
/// in lexicographic order) and returns the first one with maximal modularity.
/// Throws TooLarge above kExhaustiveLimit vertices and EmptyGraph when m == 0.
ExhaustiveResult exhaustive_best_partition(const WeightedGraph& g);

}  // namespace dynamo
