#pragma once

// Random ground counterexample checker. Used to veto unsafe generalizations:
// instantiate every free variable with a random constructor term, evaluate,
// and reject the clause on any F result. Undecided evaluations also reject
// (the safe option).
//
// Randomness is a hand-rolled splitmix64 stream so verdicts are reproducible
// across platforms; each clause derives its stream from the configured seed
// and the clause's renaming-invariant fingerprint.

#include <cstdint>
#include <optional>

#include "bmtp/rewrite.hpp"
#include "bmtp/theory.hpp"

namespace bmtp {

struct SplitMix64 {
  std::uint64_t state = 0;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return n ? next() % n : 0; }
};

struct Disprover {
  const Theory* theory = nullptr;
  std::size_t checks_per_call = 5;
  std::size_t max_example_depth = 8;
  std::uint64_t seed = 0;
  double bottom_p0 = 0.25;   // bottom probability at depth 0
  double bottom_step = 0.25; // growth per depth level
  std::uint64_t fuel = kDefaultFuel;
};

struct Verdict {
  enum class Kind { Disproved, Survived, Undecided };
  Kind kind = Kind::Survived;
  Bindings witness;  // falsifying assignment for Disproved
};

// ---------------------------------------------------------------------------
// Random ground constructor terms. The chance of stopping at a bottom object
// grows with depth and reaches 1 at max_depth, so terms always terminate.

inline Term random_ground(const Theory& th, const Sort& sort,
                          std::size_t max_depth, SplitMix64& rng,
                          double p0 = 0.25, double step = 0.25,
                          std::size_t depth = 0) {
  const Shell* sh = th.shell(sort);
  if (!sh) throw Error("cannot generate values for sort without a shell: " + sort);
  if (sh->bottoms.empty())
    throw Error("sort " + sort + " has no bottom object");
  double p = p0 + static_cast<double>(depth) * step;
  if (depth >= max_depth || sh->constructors.empty() || p >= 1.0) p = 1.0;
  if (rng.next_double() < p) {
    const std::string& b = sh->bottoms[rng.below(sh->bottoms.size())];
    return Term::app(b, sort);
  }
  const Constructor& con = sh->constructors[rng.below(sh->constructors.size())];
  TermList args;
  args.reserve(con.params.size());
  for (const Sort& ps : con.params)
    args.push_back(random_ground(th, ps, max_depth, rng, p0, step, depth + 1));
  return Term::app(con.name, sort, std::move(args));
}

// ---------------------------------------------------------------------------
// Ground evaluation: alternate fast arithmetic reduction with full rewriting
// until a fixpoint. Empty result when the term does not settle on T or F.

inline std::optional<bool> eval_ground_literal(const Term& ground,
                                               const Theory& th,
                                               std::uint64_t fuel) {
  try {
    Term cur = ground;
    while (true) {
      if (auto r = num_reduce(cur)) cur = *r;
      Rewriter rw(th, Engine::full, fuel);
      Term nf = rw.normal_form(cur);
      if (nf == cur) break;
      cur = nf;
    }
    if (is_truth(cur)) return true;
    if (is_falsity(cur)) return false;
    return std::nullopt;
  } catch (const FuelExhausted&) {
    return std::nullopt;
  }
}

inline std::optional<bool> eval_ground_clause(const Clause& ground,
                                              const Theory& th,
                                              std::uint64_t fuel) {
  bool any_unknown = false;
  for (const Term& lit : ground.literals) {
    std::optional<bool> v = eval_ground_literal(lit, th, fuel);
    if (!v) {
      any_unknown = true;
      continue;
    }
    if (*v) return true;
  }
  if (any_unknown) return std::nullopt;
  return false;
}

// ---------------------------------------------------------------------------

inline Verdict check(const Clause& c, const Disprover& dp) {
  const Theory& th = *dp.theory;
  SplitMix64 rng(dp.seed ^ fingerprint_hash(alpha_key(c)));
  std::vector<VarInfo> vars = free_vars(c);
  bool any_undecided = false;
  for (std::size_t round = 0; round < dp.checks_per_call; ++round) {
    Bindings b;
    for (const VarInfo& v : vars)
      b[v.name] = random_ground(th, v.sort, dp.max_example_depth, rng,
                                dp.bottom_p0, dp.bottom_step);
    Clause ground = apply_bindings(c, b);
    std::optional<bool> value = eval_ground_clause(ground, th, dp.fuel);
    if (!value) {
      any_undecided = true;
      continue;
    }
    if (!*value) return {Verdict::Kind::Disproved, std::move(b)};
  }
  if (any_undecided) return {Verdict::Kind::Undecided, {}};
  return {Verdict::Kind::Survived, {}};
}

}  // namespace bmtp
