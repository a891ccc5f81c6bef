#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "f2f/trees.hpp"
#include "f2f/word.hpp"

namespace f2f {

using Coordinate = std::vector<Word128>;

enum class Metric { kTd, kCpl };

const char* metric_name(Metric m);
Metric parse_metric(const std::string& text);

struct EmbeddingConfig {
  int bits = 128;          // b, width of one coordinate element
  int max_length = 128;    // L, padded address length
  int cpl_constant = 128;  // constant in the prefix distance

  void validate() const;
};

struct Embedding {
  /// coords[tree][node]; empty for the root and for nodes absent from the tree.
  std::vector<std::vector<Coordinate>> coords;
  std::size_t collision_redraws = 0;

  const Coordinate& at(std::size_t tree, NodeId v) const { return coords[tree][v]; }
};

/// Random-label prefix embedding: each child extends its parent's coordinate
/// by a fresh b-bit element distinct from its siblings' elements.
Embedding assign_coordinates(const TreeSet& ts, const EmbeddingConfig& cfg, std::uint64_t seed);

/// Relabels the subtree below `node` in one tree (after stabilization moved it).
void reassign_subtree(Embedding& emb, const TreeSet& ts, std::size_t tree, NodeId node, const EmbeddingConfig& cfg,
                      std::mt19937_64& rng);

std::size_t cpl(const Coordinate& a, const Coordinate& b);
std::size_t delta_td(const Coordinate& a, const Coordinate& b);

/// Exact non-negative fraction num/den.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
  }
};

/// L - cpl - 1/(|a|+|b|+1) for a != b, 0 otherwise.
Rational delta_cpl(const Coordinate& a, const Coordinate& b, const EmbeddingConfig& cfg);

/// Integer pair ordered the same way as the distance. TD: (td, 0). CPL:
/// (L - cpl, |a|+|b|), or (0, 0) for equal coordinates.
struct DistanceKey {
  std::int64_t major = 0;
  std::int64_t minor = 0;
  friend auto operator<=>(const DistanceKey&, const DistanceKey&) = default;
};

DistanceKey make_key(Metric m, std::size_t common, std::size_t len_a, std::size_t len_b, bool equal, int cpl_constant);
DistanceKey distance_key(Metric m, const Coordinate& a, const Coordinate& b, int cpl_constant);

/// Rational value of a key (exact for both metrics).
Rational key_value(Metric m, const DistanceKey& k, int cpl_constant);

std::string coordinate_hex(const Coordinate& c);

}  // namespace f2f
