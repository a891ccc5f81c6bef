#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "f2f/addresses.hpp"
#include "f2f/crypto.hpp"
#include "f2f/error.hpp"
#include "helpers.hpp"

using namespace f2f;

namespace {

Word128 W(const char* hex) { return Word128::from_hex(hex); }
Coordinate C(std::initializer_list<std::uint64_t> xs) {
  Coordinate c;
  for (auto x : xs) c.push_back(Word128::from_u64(x));
  return c;
}

struct Fixture {
  Graph g;
  TreeSet ts;
  Embedding emb;
  EmbeddingConfig cfg;
};

Fixture build(std::size_t n, std::uint64_t seed, int gamma = 1) {
  Fixture f;
  f.g = testutil::random_connected(n, n / 2, seed);
  TreeConfig tc;
  tc.gamma = gamma;
  tc.rng_seed = seed;
  f.ts = construct_trees(f.g, tc, std::vector<NodeId>(static_cast<std::size_t>(gamma), 0));
  f.cfg.bits = 64;
  f.cfg.max_length = 32;
  f.cfg.cpl_constant = 32;
  f.emb = assign_coordinates(f.ts, f.cfg, seed);
  return f;
}

std::vector<Word128> children_next(const Fixture& f, std::size_t tree, NodeId v) {
  std::vector<Word128> out;
  const auto& x = f.emb.at(tree, v);
  for (auto c : f.ts.trees[tree].children[v]) out.push_back(f.emb.at(tree, c)[x.size()]);
  return out;
}

ReturnAddress make_rp(const Fixture& f, std::size_t tree, NodeId v, std::mt19937_64& rng, AddressKeys* keys_out = nullptr,
                      PaddedCoordinate* padded = nullptr) {
  AddressKeys keys{Word128::random(rng, f.cfg.bits), {}};
  auto s = Word128::random(rng, f.cfg.bits), sp = Word128::random(rng, f.cfg.bits);
  if (keys_out) *keys_out = keys;
  auto next = children_next(f, tree, v);
  return generate_rp(f.emb.at(tree, v), keys, next, s, sp, f.cfg, static_cast<int>(tree), padded);
}

}  // namespace

TEST(Crypto, FrozenHashVectors) {
  EXPECT_EQ(hash_word(Word128{}, 128).hex(), "58437c368498a58e61e9728ad5e13b46");
  EXPECT_EQ(hash_word(W("0123456789abcdeffedcba9876543210"), 128).hex(), "2138dd3a7c045ea002353d085c917ba7");
  EXPECT_EQ(hash_word(Word128::from_u64(1), 64).hex(), "0000000000000000bf4ef078370aa83b");
  EXPECT_EQ(prng(Word128::from_u64(7), 0, 128).hex(), "08b1d4f559fffe2cab19ae9fe807bf55");
  EXPECT_EQ(prng(Word128::from_u64(7), 5, 32).hex(), "00000000000000000000000017ef1ac2");
}

TEST(Crypto, FrozenCascadeAndMac) {
  auto d = hash_cascade(C({1, 2, 3}), Word128::from_u64(9), 128);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].hex(), "4236f9bff3f1113a17fe4083afbb7f5b");
  EXPECT_EQ(d[1].hex(), "9f43778e0b69a46c275a52cb371352b6");
  EXPECT_EQ(d[2].hex(), "b5ce4992cc7287a2bef0eff0ae509fe0");
  EXPECT_EQ(compute_mac(Word128::from_u64(9), d, 128).hex(), "7e109e0a9a22dbb3009b399be22ad6d3");
}

TEST(Crypto, FeistelRoundTrip) {
  std::mt19937_64 rng(3);
  for (int bits : {2, 16, 64, 128}) {
    FeistelCipher c(bits);
    for (int i = 0; i < 200; ++i) {
      auto k = Word128::random(rng, 128), p = Word128::random(rng, bits);
      auto e = c.encrypt(k, p);
      EXPECT_EQ(e, e.masked(bits));
      EXPECT_EQ(c.decrypt(k, e), p);
    }
  }
  EXPECT_THROW(FeistelCipher(7), Error);
}

TEST(Cascade, PrefixAgreement) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = 1 + rng() % 12, m = rng() % (len + 1);
    Coordinate a, b;
    for (std::size_t j = 0; j < len; ++j) a.push_back(Word128::random(rng, 16));
    b = a;
    if (m < len) b[m] = b[m] ^ Word128::from_u64(1 + rng() % 0xffff);
    auto k = Word128::random(rng, 16);
    auto da = hash_cascade(a, k, 16), db = hash_cascade(b, k, 16);
    for (std::size_t j = 0; j < m; ++j) ASSERT_EQ(da[j], db[j]);
    EXPECT_EQ(cascade_cpl(da, k, b, 16), m == len ? len : std::min(m, len));
  }
}

TEST(Cascade, SeedChangesFirstDigest) {
  std::mt19937_64 rng(2);
  auto x = C({4, 5, 6});
  std::set<Word128> firsts;
  for (int i = 0; i < 1000; ++i) firsts.insert(hash_cascade(x, Word128::random(rng, 128), 128)[0]);
  EXPECT_EQ(firsts.size(), 1000u);
}

TEST(Padding, NarrowLabelsForceRedraw) {
  EmbeddingConfig cfg;
  cfg.bits = 2;
  cfg.max_length = 8;
  cfg.cpl_constant = 8;
  std::vector<Word128> kids = {Word128::from_u64(0), Word128::from_u64(1), Word128::from_u64(2)};
  int total = 0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    auto p = pad_coordinate(C({1}), kids, Word128::from_u64(s), cfg);
    ASSERT_EQ(p.elements.size(), 8u);
    EXPECT_EQ(p.elements[1], Word128::from_u64(3));
    total += p.redraws;
  }
  EXPECT_GT(total, 0);
  EXPECT_THROW(pad_coordinate(C({1, 1, 1, 1, 1, 1, 1, 1}), {}, Word128{}, cfg), Error);
}

TEST(ReturnAddress, Basics) {
  auto f = build(80, 4);
  std::mt19937_64 rng(1);
  for (NodeId v = 0; v < 80; ++v) {
    AddressKeys keys;
    PaddedCoordinate pad;
    auto a = make_rp(f, 0, v, rng, &keys, &pad);
    EXPECT_EQ(a.digests.size(), 32u);
    EXPECT_TRUE(verify_mac(a, keys, f.cfg.bits));
    EXPECT_EQ(cascade_cpl(a.digests, a.routing_seed, pad.elements, f.cfg.bits), 32u);
    // own coordinate: distance 0 plus the L - |x| offset
    EXPECT_EQ(diversity_rp_value(a, f.emb.at(0, v), Metric::kTd, f.cfg),
              (Rational{32 - static_cast<std::int64_t>(f.emb.at(0, v).size()), 1}));
  }
  EmbeddingConfig dflt;
  EXPECT_EQ(dflt.max_length, 128);
}

TEST(ReturnAddress, MacRejectsTampering) {
  auto f = build(40, 5);
  std::mt19937_64 rng(5);
  AddressKeys keys;
  auto a = make_rp(f, 0, 17, rng, &keys);
  for (std::size_t j = 0; j < a.digests.size(); ++j)
    for (int b = 0; b < f.cfg.bits; ++b) {
      auto t = a;
      t.digests[j] = t.digests[j].flipped(b);
      ASSERT_FALSE(verify_mac(t, keys, f.cfg.bits));
    }
  for (int i = 0; i < 1000; ++i) {
    AddressKeys wrong{Word128::random(rng, f.cfg.bits), {}};
    ASSERT_FALSE(verify_mac(a, wrong, f.cfg.bits));
  }
}

TEST(ReturnAddress, PrefixFaithful) {
  auto f = build(100, 6);
  std::mt19937_64 rng(6);
  for (NodeId v = 0; v < 100; v += 7) {
    PaddedCoordinate pad;
    auto a = make_rp(f, 0, v, rng, nullptr, &pad);
    for (NodeId c = 0; c < 100; ++c) {
      const auto& cc = f.emb.at(0, c);
      const auto true_cpl = cpl(pad.elements, cc);
      ASSERT_LE(true_cpl, f.emb.at(0, v).size());
      ASSERT_EQ(cascade_cpl(a.digests, a.routing_seed, cc, f.cfg.bits), true_cpl);
    }
  }
}

TEST(ReturnAddress, RoutePreservationSmall) {
  auto f = build(60, 7);
  std::mt19937_64 rng(7);
  for (NodeId v = 0; v < 60; ++v) {
    auto a = make_rp(f, 0, v, rng);
    for (auto m : {Metric::kTd, Metric::kCpl}) {
      std::vector<NodeId> cand(60);
      for (NodeId i = 0; i < 60; ++i) cand[i] = i;
      std::shuffle(cand.begin(), cand.end(), rng);
      cand.resize(1 + rng() % 10);
      auto argmin = [&](auto key) {
        auto best = key(cand[0]);
        std::set<NodeId> s;
        for (auto c : cand) best = std::min(best, key(c));
        for (auto c : cand)
          if (key(c) == best) s.insert(c);
        return s;
      };
      auto by_rp = argmin([&](NodeId c) { return diversity_rp(a, f.emb.at(0, c), m, f.cfg); });
      auto by_true = argmin([&](NodeId c) { return distance_key(m, f.emb.at(0, v), f.emb.at(0, c), f.cfg.cpl_constant); });
      ASSERT_EQ(by_rp, by_true);
    }
  }
}

TEST(ReturnAddress, EqualCplDifferentLengthsOrderAlike) {
  EmbeddingConfig cfg;
  cfg.bits = 16;
  cfg.max_length = 8;
  cfg.cpl_constant = 8;
  auto x = C({1, 2, 3});
  auto a = generate_rp(x, AddressKeys{Word128::from_u64(1), {}}, {}, Word128::from_u64(2), Word128::from_u64(3), cfg);
  // both share exactly one element with x
  auto c1 = C({1, 9}), c2 = C({1, 9, 9, 9});
  auto t1 = distance_key(Metric::kCpl, x, c1, 8), t2 = distance_key(Metric::kCpl, x, c2, 8);
  auto r1 = diversity_rp(a, c1, Metric::kCpl, cfg), r2 = diversity_rp(a, c2, Metric::kCpl, cfg);
  EXPECT_EQ(t1 <=> t2, r1 <=> r2);
  EXPECT_LT(r1, r2);
}

TEST(ReturnAddress, BinaryRoundTrip) {
  auto f = build(30, 8);
  std::mt19937_64 rng(8);
  auto a = make_rp(f, 0, 9, rng);
  auto bytes = address_to_bytes(a, f.cfg.bits);
  EXPECT_EQ(bytes.size(), (32u + 2u) * 8u);
  auto b = address_from_bytes(bytes, f.cfg.bits, 32);
  EXPECT_EQ(b.digests, a.digests);
  EXPECT_EQ(b.routing_seed, a.routing_seed);
  EXPECT_EQ(b.mac, a.mac);
}

TEST(SubtreeKeys, Distribution) {
  // path 0-1-2-3 rooted at 0: keys are generated by the internal nodes 1 and 2
  auto g = testutil::path_graph(4);
  TreeConfig tc;
  tc.accept_prob = 1.0;
  auto ts = construct_trees(g, tc, {0});
  auto ring = distribute_subtree_keys(ts, 0, 1, 64);
  EXPECT_TRUE(ring[0].empty());
  EXPECT_EQ(ring[1].size(), 1u);
  EXPECT_EQ(ring[2].size(), 2u);
  EXPECT_EQ(ring[3].size(), 2u);  // leaf at level 3
  EXPECT_EQ(ring[2], ring[3]);
  EXPECT_EQ(ring[1][0], ring[3][0]);
}

TEST(SubtreeKeys, SharedPrefixMatchesCpl) {
  auto f = build(120, 9);
  auto ring = distribute_subtree_keys(f.ts, 0, 3, f.cfg.bits);
  for (NodeId u = 0; u < 120; ++u)
    for (NodeId v = 0; v < 120; ++v) {
      const auto lam = cpl(f.emb.at(0, u), f.emb.at(0, v));
      std::size_t shared = 0;
      while (shared < ring[u].size() && shared < ring[v].size() && ring[u][shared] == ring[v][shared]) ++shared;
      if (u == v) continue;
      const auto& t = f.ts.trees[0];
      // the common ancestor at level lam contributes a key when lam >= 1
      ASSERT_EQ(shared, lam) << u << " " << v << " levels " << t.level[u] << " " << t.level[v];
    }
}

TEST(Ppp, LayerShape) {
  auto f = build(150, 10);
  auto ring = distribute_subtree_keys(f.ts, 0, 4, f.cfg.bits);
  auto cipher = make_default_cipher(f.cfg.bits);
  std::mt19937_64 rng(10);
  bool saw1 = false, saw3 = false;
  for (NodeId v = 1; v < 150; ++v) {
    AddressKeys keys;
    auto a = make_rp(f, 0, v, rng, &keys);
    keys.subtree_keys = ring[v];
    const auto l = f.emb.at(0, v).size();
    auto p = add_ppp_layer(a, keys, l, *cipher, f.cfg);
    EXPECT_TRUE(verify_mac(p, keys, f.cfg.bits));
    for (std::size_t j = 0; j < 32; ++j) {
      const bool differs = p.digests[j] != a.digests[j];
      EXPECT_EQ(differs, j >= 1 && j < l) << v << " " << j;
    }
    saw1 |= l == 1;
    saw3 |= l == 3;
    auto dec = ppp_partial_decrypt(p, ring[v], *cipher, f.cfg);
    for (std::size_t j = 0; j < l; ++j) EXPECT_EQ(dec[j], a.digests[j]);
  }
  EXPECT_TRUE(saw1 && saw3);
  AddressKeys none{Word128::from_u64(1), {}};
  ReturnAddress a;
  a.digests.assign(32, Word128{});
  EXPECT_THROW(add_ppp_layer(a, none, 3, *cipher, f.cfg), Error);
}

TEST(Ppp, LowerBoundProperty) {
  auto f = build(200, 11);
  auto ring = distribute_subtree_keys(f.ts, 0, 5, f.cfg.bits);
  auto cipher = make_default_cipher(f.cfg.bits);
  std::mt19937_64 rng(11);
  int checked = 0, equal_cases = 0;
  while (checked < 1000) {
    NodeId issuer = static_cast<NodeId>(rng() % 200), eval = static_cast<NodeId>(rng() % 200),
           cand = static_cast<NodeId>(rng() % 200);
    AddressKeys keys;
    PaddedCoordinate pad;
    auto a = make_rp(f, 0, issuer, rng, &keys, &pad);
    keys.subtree_keys = ring[issuer];
    auto p = add_ppp_layer(a, keys, f.emb.at(0, issuer).size(), *cipher, f.cfg);
    const auto& c = f.emb.at(0, cand);
    const auto truth = cpl(pad.elements, c);
    const auto got = ppp_cpl(p, c, ring[eval], *cipher, f.cfg);
    ASSERT_LE(got, truth);
    if (truth <= cpl(f.emb.at(0, eval), f.emb.at(0, issuer)) + 1) {
      ASSERT_EQ(got, truth);
      ++equal_cases;
    }
    ++checked;
  }
  EXPECT_GT(equal_cases, 100);
  EXPECT_THROW(diversity_ppp(PppAddress{}, C({}), {}, Metric::kTd, *cipher, f.cfg), Error);
}

TEST(Ppp, RootSeesOnlyFirstElement) {
  auto f = build(100, 12);
  auto ring = distribute_subtree_keys(f.ts, 0, 6, f.cfg.bits);
  auto cipher = make_default_cipher(f.cfg.bits);
  std::mt19937_64 rng(12);
  EXPECT_EQ(ppp_partial_decrypt(PppAddress{std::vector<Word128>(32), {}, {}, 0}, ring[0], *cipher, f.cfg).size(), 1u);
  // a deeper candidate in the issuer's subtree beats the evaluator itself
  for (NodeId issuer = 0; issuer < 100; ++issuer) {
    const auto& t = f.ts.trees[0];
    if (t.level[issuer] < 2) continue;
    NodeId parent = t.parent[issuer], grand = t.parent[parent];
    AddressKeys keys;
    auto a = make_rp(f, 0, issuer, rng, &keys);
    keys.subtree_keys = ring[issuer];
    auto p = add_ppp_layer(a, keys, f.emb.at(0, issuer).size(), *cipher, f.cfg);
    auto own = diversity_ppp(p, f.emb.at(0, grand), ring[grand], Metric::kCpl, *cipher, f.cfg);
    auto deeper = diversity_ppp(p, f.emb.at(0, parent), ring[grand], Metric::kCpl, *cipher, f.cfg);
    EXPECT_LT(deeper, own);
  }
}

TEST(Deniability, NeighborOrDescendant) {
  // 0 - 1 - 2 - 3 (path), evaluator 0 with neighbor 1; address of 2 (child of 1)
  auto g = testutil::path_graph(4);
  TreeConfig tc;
  tc.gamma = 2;
  tc.accept_prob = 1.0;
  auto ts = construct_trees(g, tc, {0, 0});
  EmbeddingConfig cfg;
  cfg.bits = 64;
  cfg.max_length = 16;
  cfg.cpl_constant = 16;
  auto emb = assign_coordinates(ts, cfg, 1);
  std::vector<ReturnAddress> addrs;
  for (int t = 0; t < 2; ++t) {
    std::vector<Word128> next = {emb.at(t, 3)[2]};
    addrs.push_back(generate_rp(emb.at(t, 2), AddressKeys{Word128::from_u64(5), {}}, next, Word128::from_u64(t + 1),
                                Word128::from_u64(9), cfg, t));
  }
  std::vector<NodeId> nb = {1};
  auto cs = candidate_receiver_set(addrs, nb, emb, Metric::kCpl, cfg);
  EXPECT_EQ(cs.verdict, CandidateSet::Verdict::kNeighborOrDescendant);
  EXPECT_EQ(cs.neighbor, 1u);
  EXPECT_GE(cs.size(), 2u);
}

TEST(Deniability, NonNeighborCases) {
  EmbeddingConfig cfg;
  cfg.bits = 64;
  cfg.max_length = 16;
  cfg.cpl_constant = 16;
  // star 0 with leaves 1..3; receiver 3 is not the evaluator's neighbor
  auto g = testutil::star_graph(3);
  TreeConfig tc;
  tc.gamma = 2;
  tc.accept_prob = 1.0;
  auto ts = construct_trees(g, tc, {0, 0});
  auto emb = assign_coordinates(ts, cfg, 2);
  std::vector<ReturnAddress> addrs;
  for (int t = 0; t < 2; ++t)
    addrs.push_back(generate_rp(emb.at(t, 3), AddressKeys{Word128::from_u64(5), {}}, {}, Word128::from_u64(t + 7),
                                Word128::from_u64(9), cfg, t));
  // neighbors 1 and 2 both share nothing with the receiver's coordinate
  std::vector<NodeId> nb = {1, 2};
  EXPECT_EQ(candidate_receiver_set(addrs, nb, emb, Metric::kCpl, cfg).verdict, CandidateSet::Verdict::kNonNeighbor);
  std::vector<NodeId> one = {1};
  EXPECT_EQ(candidate_receiver_set(addrs, one, emb, Metric::kCpl, cfg).verdict, CandidateSet::Verdict::kNonNeighbor);

  // different closest neighbors per tree: swap tree 1's coordinates of 1 and 3
  auto emb2 = emb;
  std::swap(emb2.coords[1][1], emb2.coords[1][3]);
  std::vector<ReturnAddress> mixed = {
      generate_rp(emb2.at(0, 1), AddressKeys{Word128::from_u64(5), {}}, {}, Word128::from_u64(1), Word128::from_u64(2), cfg, 0),
      generate_rp(emb2.at(1, 3), AddressKeys{Word128::from_u64(5), {}}, {}, Word128::from_u64(3), Word128::from_u64(4), cfg, 1)};
  std::vector<NodeId> both = {1, 3};
  EXPECT_EQ(candidate_receiver_set(mixed, both, emb2, Metric::kCpl, cfg).verdict, CandidateSet::Verdict::kNonNeighbor);
}
