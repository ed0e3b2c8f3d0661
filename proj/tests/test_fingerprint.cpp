// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rxngraph/fingerprint.hpp"
#include "rxngraph/smiles.hpp"
#include "rxngraph/synth.hpp"

using namespace rxngraph;

TEST_CASE("morgan identifier counts match the environment oracle") {
  SECTION("ethane at radius 1 has exactly two identifiers") {
    auto m = parse_molecule("CC");
    CHECK(oracles::morgan_environment_count(m, 1) == 2);
    CHECK(morgan_identifiers(m, 1).size() == 2);
    CHECK(morgan_fingerprint(m, 1, 2048).total() == 2);
  }
  SECTION("a single atom has exactly one identifier") {
    auto m = parse_molecule("O");
    CHECK(oracles::morgan_environment_count(m, 2) == 1);
    CHECK(morgan_identifiers(m, 2).size() == 1);
    CHECK(morgan_fingerprint(m, 2, 2048).total() == 1);
  }
  SECTION("50 random molecules up to 10 atoms") {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
      auto m = random_molecule(rng, 1, 10);
      INFO("molecule " << i << ": " << write_molecule(m));
      REQUIRE(static_cast<int>(morgan_identifiers(m, 2).size()) ==
              oracles::morgan_environment_count(m, 2));
    }
  }
  SECTION("hand-checked butane") {
    // radius 0: CH3(end), CH2(mid) -> 2; radius 1: C-C rooted at end,
    // C-C-C rooted at mid -> 2; radius 2: chain of 3 rooted at end,
    // whole chain rooted at mid -> 2. Total 6.
    auto m = parse_molecule("CCCC");
    CHECK(oracles::morgan_environment_count(m, 2) == 6);
    CHECK(morgan_identifiers(m, 2).size() == 6);
  }
}

TEST_CASE("morgan fingerprint is atom-order invariant") {
  Rng rng(18);
  for (int i = 0; i < 30; ++i) {
    auto m = random_molecule(rng, 2, 12);
    auto perm = random_permutation(m.atoms.size(), rng);
    auto permuted = detail::permute_molecule(m, perm);
    auto a = morgan_fingerprint(m, 2, 512);
    auto b = morgan_fingerprint(permuted, 2, 512);
    REQUIRE(a.counts == b.counts);
  }
}

TEST_CASE("reaction_fp") {
  SECTION("identical sides with w2 = 0 cancel to zero") {
    auto rxn = parse_reaction("CCO.CC>>CC.CCO");
    auto v = reaction_fp(rxn, 1.0, 0.0);
    for (double x : v) REQUIRE(x == 0.0);
  }
  SECTION("w1 = 0 depends only on agents") {
    auto rxn = parse_reaction("CCO>CN>CC=O");
    auto v = reaction_fp(rxn, 0.0, 1.0);
    auto agent_only = morgan_fingerprint(parse_molecule("CN"), 2, 2048);
    for (int i = 0; i < 2048; ++i) REQUIRE(v[i] == agent_only.counts[i]);
  }
  SECTION("molecule order never matters") {
    auto a = reaction_fp(parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O"), 1.0, 1.0);
    auto b = reaction_fp(parse_reaction("CC(=O)O.CCO>>O.CC(=O)OCC"), 1.0, 1.0);
    REQUIRE(a == b);
  }
  SECTION("atom order never matters") {
    auto a = reaction_fp(parse_reaction("CCO>>CC=O"), 1.0, 1.0);
    auto b = reaction_fp(parse_reaction("OCC>>O=CC"), 1.0, 1.0);
    REQUIRE(a == b);
  }
  SECTION("explicit agent mask overrides parse-time tags") {
    auto rxn = parse_reaction("CCO.CN>>CC=O");
    std::vector<bool> mask = {false, true};
    auto v = reaction_fp(rxn, 0.0, 1.0, &mask);
    auto agent_only = morgan_fingerprint(parse_molecule("CN"), 2, 2048);
    for (int i = 0; i < 2048; ++i) REQUIRE(v[i] == agent_only.counts[i]);
  }
}

TEST_CASE("fingerprint baseline model") {
  Rng rng(19);
  auto model = init_fp_baseline(3, {16}, rng, {256, 2});
  auto rxn = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O");
  auto parts = reaction_fp_parts(rxn, model.fp_cfg);

  SECTION("forward emits class logits") {
    auto out = fp_baseline_forward(model, parts);
    CHECK(out.rows() == 1);
    CHECK(out.cols() == 3);
  }
  SECTION("gradients flow to w1, w2 and the head") {
    auto f = [&] {
      return task_loss(fp_baseline_forward(model, parts), 1, TaskKind::Classify);
    };
    CHECK(grad_check(f, model.params, 1e-5, 60, 27) < 1e-6);
  }
}
