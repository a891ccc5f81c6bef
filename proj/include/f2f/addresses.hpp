#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "f2f/crypto.hpp"
#include "f2f/embedding.hpp"

namespace f2f {

struct ReturnAddress {
  std::vector<Word128> digests;  // y = (d_1..d_L)
  Word128 routing_seed;          // k~
  Word128 mac;
  int tree = 0;
};

/// Return address with the subtree encryption layer applied.
struct PppAddress {
  std::vector<Word128> digests;  // y'
  Word128 routing_seed;
  Word128 mac;
  int tree = 0;
};

struct AddressKeys {
  Word128 mac_key;
  std::vector<Word128> subtree_keys;  // subtree_keys[j-1] = k_j
};

/// Per-node subtree keys for one tree.
using KeyRing = std::vector<std::vector<Word128>>;

struct PaddedCoordinate {
  Coordinate elements;   // length L
  Word128 padding_seed;  // seed actually used
  int redraws = 0;
};

/// Pads x to length L with PRNG(s_pad, j). The seed is redrawn while the
/// first padding element equals one of `children_next`.
PaddedCoordinate pad_coordinate(const Coordinate& x, std::span<const Word128> children_next, Word128 s_pad,
                                const EmbeddingConfig& cfg);

/// d_1 = h(k ^ a_1), d_j = h(d_{j-1} ^ a_j). Output length equals input length.
std::vector<Word128> hash_cascade(const Coordinate& x, Word128 k, int bits);

/// Common prefix of `digests` and the cascade of `c`, computed only up to the first mismatch.
std::size_t cascade_cpl(std::span<const Word128> digests, Word128 k, const Coordinate& c, int bits);

Word128 compute_mac(Word128 mac_key, std::span<const Word128> digests, int bits);

ReturnAddress generate_rp(const Coordinate& x, const AddressKeys& keys, std::span<const Word128> children_next,
                          Word128 s, Word128 s_pad, const EmbeddingConfig& cfg, int tree = 0,
                          PaddedCoordinate* padded_out = nullptr);

DistanceKey diversity_rp(const ReturnAddress& addr, const Coordinate& c, Metric m, const EmbeddingConfig& cfg);
Rational diversity_rp_value(const ReturnAddress& addr, const Coordinate& c, Metric m, const EmbeddingConfig& cfg);

bool verify_mac(const ReturnAddress& addr, const AddressKeys& keys, int bits);
bool verify_mac(const PppAddress& addr, const AddressKeys& keys, int bits);

/// Every internal node at level >= 1 generates one key; a node holds its
/// ancestors' keys from level 1 down, plus its own if it has children.
KeyRing distribute_subtree_keys(const TreeSet& ts, std::size_t tree, std::uint64_t seed, int bits);

/// Encrypts d_2..d_l with k_1..k_{l-1}. Throws kState when keys are missing.
PppAddress add_ppp_layer(const ReturnAddress& addr, const AddressKeys& issuer_keys, std::size_t issuer_level,
                         const BlockCipher& cipher, const EmbeddingConfig& cfg);

/// Element 1 copied, then as many elements as the evaluator has keys for decrypted.
std::vector<Word128> ppp_partial_decrypt(const PppAddress& addr, std::span<const Word128> evaluator_keys,
                                         const BlockCipher& cipher, const EmbeddingConfig& cfg);

/// Prefix length the evaluator can certify between the address and c.
std::size_t ppp_cpl(const PppAddress& addr, const Coordinate& c, std::span<const Word128> evaluator_keys,
                    const BlockCipher& cipher, const EmbeddingConfig& cfg);

/// Throws kUnsupported for the tree-distance metric.
DistanceKey diversity_ppp(const PppAddress& addr, const Coordinate& c, std::span<const Word128> evaluator_keys,
                          Metric m, const BlockCipher& cipher, const EmbeddingConfig& cfg);

struct CandidateSet {
  enum class Verdict { kNonNeighbor, kNeighborOrDescendant };
  Verdict verdict = Verdict::kNonNeighbor;
  NodeId neighbor = kNoNode;
  bool descendant_possible = false;

  std::size_t size() const { return verdict == Verdict::kNonNeighbor ? 1 : 2; }
};

/// What a node learns about the receiver of `addrs` from its own neighborhood.
CandidateSet candidate_receiver_set(const std::vector<ReturnAddress>& addrs, std::span<const NodeId> neighbors,
                                    const Embedding& emb, Metric m, const EmbeddingConfig& cfg);

/// Fixed-width record: L digests, routing seed, MAC; ceil(b/8) little-endian bytes each.
std::vector<std::uint8_t> address_to_bytes(const ReturnAddress& addr, int bits);
ReturnAddress address_from_bytes(std::span<const std::uint8_t> bytes, int bits, int length);

}  // namespace f2f
