#include "f2f/addresses.hpp"

#include <algorithm>

#include "f2f/error.hpp"

namespace f2f {

namespace {

constexpr int kMaxPaddingRedraws = 64;
constexpr std::uint64_t kRedrawCounter = 0x8000000000000000ULL;

}  // namespace

PaddedCoordinate pad_coordinate(const Coordinate& x, std::span<const Word128> children_next, Word128 s_pad,
                                const EmbeddingConfig& cfg) {
  const std::size_t L = static_cast<std::size_t>(cfg.max_length);
  if (x.size() >= L)
    throw Error(ErrorCode::kValidation, "coordinate of length " + std::to_string(x.size()) + " does not fit L=" +
                                            std::to_string(L));
  PaddedCoordinate p;
  p.padding_seed = s_pad;
  const std::size_t l = x.size();
  for (;;) {
    Word128 first = prng(p.padding_seed, l + 1, cfg.bits);
    if (std::find(children_next.begin(), children_next.end(), first) == children_next.end()) break;
    if (++p.redraws > kMaxPaddingRedraws) throw Error(ErrorCode::kState, "padding seed redraw limit reached");
    p.padding_seed = prng(p.padding_seed, kRedrawCounter, 128);
  }
  p.elements = x;
  p.elements.reserve(L);
  for (std::size_t j = l + 1; j <= L; ++j) p.elements.push_back(prng(p.padding_seed, j, cfg.bits));
  return p;
}

std::vector<Word128> hash_cascade(const Coordinate& x, Word128 k, int bits) {
  std::vector<Word128> d;
  d.reserve(x.size());
  Word128 prev = k;
  for (const auto& a : x) {
    prev = hash_word(prev ^ a, bits);
    d.push_back(prev);
  }
  return d;
}

std::size_t cascade_cpl(std::span<const Word128> digests, Word128 k, const Coordinate& c, int bits) {
  const std::size_t m = std::min(digests.size(), c.size());
  Word128 prev = k;
  for (std::size_t j = 0; j < m; ++j) {
    prev = hash_word(prev ^ c[j], bits);
    if (prev != digests[j]) return j;
  }
  return m;
}

Word128 compute_mac(Word128 mac_key, std::span<const Word128> digests, int bits) {
  std::vector<Word128> buf;
  buf.reserve(digests.size() + 1);
  buf.push_back(mac_key);
  buf.insert(buf.end(), digests.begin(), digests.end());
  return hash_words(buf, bits);
}

ReturnAddress generate_rp(const Coordinate& x, const AddressKeys& keys, std::span<const Word128> children_next,
                          Word128 s, Word128 s_pad, const EmbeddingConfig& cfg, int tree,
                          PaddedCoordinate* padded_out) {
  PaddedCoordinate padded = pad_coordinate(x, children_next, s_pad, cfg);
  ReturnAddress a;
  a.tree = tree;
  a.routing_seed = prng(s.masked(cfg.bits), 0, cfg.bits);
  a.digests = hash_cascade(padded.elements, a.routing_seed, cfg.bits);
  a.mac = compute_mac(keys.mac_key, a.digests, cfg.bits);
  if (padded_out) *padded_out = std::move(padded);
  return a;
}

DistanceKey diversity_rp(const ReturnAddress& addr, const Coordinate& c, Metric m, const EmbeddingConfig& cfg) {
  const std::size_t common = cascade_cpl(addr.digests, addr.routing_seed, c, cfg.bits);
  return make_key(m, common, addr.digests.size(), c.size(), false, cfg.cpl_constant);
}

Rational diversity_rp_value(const ReturnAddress& addr, const Coordinate& c, Metric m, const EmbeddingConfig& cfg) {
  return key_value(m, diversity_rp(addr, c, m, cfg), cfg.cpl_constant);
}

bool verify_mac(const ReturnAddress& addr, const AddressKeys& keys, int bits) {
  return compute_mac(keys.mac_key, addr.digests, bits) == addr.mac;
}

bool verify_mac(const PppAddress& addr, const AddressKeys& keys, int bits) {
  return compute_mac(keys.mac_key, addr.digests, bits) == addr.mac;
}

KeyRing distribute_subtree_keys(const TreeSet& ts, std::size_t tree, std::uint64_t seed, int bits) {
  if (tree >= ts.gamma()) throw Error(ErrorCode::kDomain, "tree index out of range");
  const Tree& t = ts.trees[tree];
  KeyRing ring(t.level.size());
  const Word128 base = Word128::from_u64(mix_seed(seed, 0x6b657973ULL + tree));
  std::vector<NodeId> stack{t.root};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    std::vector<Word128> inherited = ring[u];
    if (t.level[u] >= 1 && !t.children[u].empty()) {
      // u's own key follows the inherited ones; children inherit the full list
      inherited.push_back(prng(base, u, bits));
      ring[u] = inherited;
    }
    for (NodeId c : t.children[u]) {
      ring[c] = inherited;
      stack.push_back(c);
    }
  }
  return ring;
}

PppAddress add_ppp_layer(const ReturnAddress& addr, const AddressKeys& issuer_keys, std::size_t issuer_level,
                         const BlockCipher& cipher, const EmbeddingConfig& cfg) {
  if (issuer_level >= addr.digests.size()) throw Error(ErrorCode::kDomain, "issuer level exceeds address length");
  if (issuer_level >= 2 && issuer_keys.subtree_keys.size() < issuer_level - 1)
    throw Error(ErrorCode::kState, "issuer at level " + std::to_string(issuer_level) + " holds only " +
                                       std::to_string(issuer_keys.subtree_keys.size()) + " subtree keys");
  PppAddress p;
  p.tree = addr.tree;
  p.routing_seed = addr.routing_seed;
  p.digests = addr.digests;
  for (std::size_t j = 2; j <= issuer_level; ++j)
    p.digests[j - 1] = cipher.encrypt(issuer_keys.subtree_keys[j - 2], addr.digests[j - 1]);
  p.mac = compute_mac(issuer_keys.mac_key, p.digests, cfg.bits);
  return p;
}

std::vector<Word128> ppp_partial_decrypt(const PppAddress& addr, std::span<const Word128> evaluator_keys,
                                         const BlockCipher& cipher, const EmbeddingConfig&) {
  const std::size_t len = std::min(1 + evaluator_keys.size(), addr.digests.size());
  std::vector<Word128> f;
  f.reserve(len);
  if (len == 0) return f;
  f.push_back(addr.digests[0]);
  for (std::size_t j = 2; j <= len; ++j) f.push_back(cipher.decrypt(evaluator_keys[j - 2], addr.digests[j - 1]));
  return f;
}

std::size_t ppp_cpl(const PppAddress& addr, const Coordinate& c, std::span<const Word128> evaluator_keys,
                    const BlockCipher& cipher, const EmbeddingConfig& cfg) {
  // decrypt lazily alongside the cascade
  const std::size_t len = std::min({1 + evaluator_keys.size(), addr.digests.size(), c.size()});
  Word128 prev = addr.routing_seed;
  for (std::size_t j = 1; j <= len; ++j) {
    prev = hash_word(prev ^ c[j - 1], cfg.bits);
    Word128 z = j == 1 ? addr.digests[0] : cipher.decrypt(evaluator_keys[j - 2], addr.digests[j - 1]);
    if (z != prev) return j - 1;
  }
  return len;
}

DistanceKey diversity_ppp(const PppAddress& addr, const Coordinate& c, std::span<const Word128> evaluator_keys,
                          Metric m, const BlockCipher& cipher, const EmbeddingConfig& cfg) {
  if (m != Metric::kCpl)
    throw Error(ErrorCode::kUnsupported, "the encryption layer only supports the common-prefix metric");
  const std::size_t common = ppp_cpl(addr, c, evaluator_keys, cipher, cfg);
  return make_key(Metric::kCpl, common, addr.digests.size(), c.size(), false, cfg.cpl_constant);
}

CandidateSet candidate_receiver_set(const std::vector<ReturnAddress>& addrs, std::span<const NodeId> neighbors,
                                    const Embedding& emb, Metric m, const EmbeddingConfig& cfg) {
  CandidateSet out;
  if (addrs.empty() || neighbors.empty()) return out;
  NodeId common = kNoNode;
  for (const auto& a : addrs) {
    const auto& coords = emb.coords.at(static_cast<std::size_t>(a.tree));
    DistanceKey best{};
    NodeId arg = kNoNode;
    bool tie = false;
    for (NodeId v : neighbors) {
      DistanceKey k = diversity_rp(a, coords[v], m, cfg);
      if (arg == kNoNode || k < best) {
        best = k;
        arg = v;
        tie = false;
      } else if (k == best) {
        tie = true;
      }
    }
    if (tie) return out;
    if (common == kNoNode) common = arg;
    else if (common != arg) return out;
  }
  for (const auto& a : addrs) {
    const Coordinate& x = emb.coords[static_cast<std::size_t>(a.tree)][common];
    if (cascade_cpl(a.digests, a.routing_seed, x, cfg.bits) < x.size()) return out;
  }
  out.verdict = CandidateSet::Verdict::kNeighborOrDescendant;
  out.neighbor = common;
  out.descendant_possible = true;
  return out;
}

namespace {

void put_word(std::vector<std::uint8_t>& out, Word128 w, std::size_t width) {
  auto b = w.to_le_bytes();
  out.insert(out.end(), b.begin(), b.begin() + width);
}

}  // namespace

std::vector<std::uint8_t> address_to_bytes(const ReturnAddress& addr, int bits) {
  const std::size_t width = static_cast<std::size_t>((bits + 7) / 8);
  std::vector<std::uint8_t> out;
  out.reserve((addr.digests.size() + 2) * width);
  for (const auto& d : addr.digests) put_word(out, d, width);
  put_word(out, addr.routing_seed, width);
  put_word(out, addr.mac, width);
  return out;
}

ReturnAddress address_from_bytes(std::span<const std::uint8_t> bytes, int bits, int length) {
  const std::size_t width = static_cast<std::size_t>((bits + 7) / 8);
  if (bytes.size() != (static_cast<std::size_t>(length) + 2) * width)
    throw Error(ErrorCode::kParse, "address record has the wrong size");
  ReturnAddress a;
  for (int j = 0; j < length; ++j) a.digests.push_back(Word128::from_le_bytes(bytes.subspan(j * width, width)));
  a.routing_seed = Word128::from_le_bytes(bytes.subspan(length * width, width));
  a.mac = Word128::from_le_bytes(bytes.subspan((length + 1) * width, width));
  return a;
}

}  // namespace f2f
