#pragma once

// Finitely presented congruences on the fraction semifield: a presentation
// is a finite list of generator pairs. Twisted products combine two
// presentations so that the resulting locus is the union of the input loci;
// the degeneracy detectors certify an empty locus from a single generator.
// closure_step derives one round of congruence-axiom consequences and is
// only used to exercise the invariance of the locus under derivation.

#include <optional>
#include <utility>
#include <vector>

#include "tropica/ratfn.hpp"

namespace tropica {

using GenPair = std::pair<RatFn, RatFn>;

struct CongruencePresentation {
  int n_vars = 1;
  std::vector<GenPair> gens;  // empty presents the trivial congruence
};

inline CongruencePresentation presentation(int n_vars,
                                           std::vector<GenPair> gens) {
  for (const auto& [l, r] : gens)
    if (l.n_vars != n_vars || r.n_vars != n_vars)
      throw Error("mixed variable counts");
  return CongruencePresentation{n_vars, std::move(gens)};
}

// ((f1,f2), (g1,g2)) -> (f1 g1 + f2 g2, f1 g2 + f2 g1) in max-plus terms.
inline GenPair twisted_pair(const GenPair& a, const GenPair& b) {
  const auto& [f1, f2] = a;
  const auto& [g1, g2] = b;
  return {r_add(r_mul(f1, g1), r_mul(f2, g2)),
          r_add(r_mul(f1, g2), r_mul(f2, g1))};
}

inline CongruencePresentation twisted_product(const CongruencePresentation& E,
                                              const CongruencePresentation& F) {
  if (E.n_vars != F.n_vars) throw Error("mixed variable counts");
  CongruencePresentation out{E.n_vars, {}};
  for (const auto& e : E.gens)
    for (const auto& f : F.gens) out.gens.push_back(twisted_pair(e, f));
  return out;
}

// First generator of the shape (f, f*t) with a nonzero constant t: its locus
// is empty, since f is finite-valued on Q^n while equality would force t=0.
// The constant is read off the quotient f2/f1 at the origin and certified by
// an exact equality check against that constant.
inline std::optional<std::pair<std::size_t, ExtRational>> detect_scaling_pair(
    const CongruencePresentation& E) {
  std::vector<Rat> origin(E.n_vars, Rat(0));
  for (std::size_t i = 0; i < E.gens.size(); ++i) {
    const auto& [f1, f2] = E.gens[i];
    if (f1.is_bottom() || f2.is_bottom()) continue;
    RatFn q = r_mul(f2, r_inv(f1));
    ExtRational t = r_eval(q, origin);
    if (t == ExtRational(Rat(0))) continue;
    if (r_equal(q, r_const(E.n_vars, t)).equal())
      return std::make_pair(i, t);
  }
  return std::nullopt;
}

// Generator with exactly one bottom side: the quotient then fails to be a
// semifield, and the locus is empty.
inline std::optional<std::size_t> detect_bottom_pair(
    const CongruencePresentation& E) {
  for (std::size_t i = 0; i < E.gens.size(); ++i)
    if (E.gens[i].first.is_bottom() != E.gens[i].second.is_bottom()) return i;
  return std::nullopt;
}

namespace detail {

// Exact representation key: r_equal-equal functions can still differ as
// canonical fractions, but identical fractions are certainly equal. Used to
// keep the quadratic dedup below off the expensive path.
inline bool same_fraction(const RatFn& a, const RatFn& b) {
  return a.num.terms == b.num.terms && a.den.terms == b.den.terms;
}

inline bool pairs_equal(const GenPair& a, const GenPair& b) {
  if (same_fraction(a.first, b.first) && same_fraction(a.second, b.second))
    return true;
  return r_equal(a.first, b.first).equal() &&
         r_equal(a.second, b.second).equal();
}

inline bool sides_equal(const RatFn& a, const RatFn& b) {
  return same_fraction(a, b) || r_equal(a, b).equal();
}

// Values of both sides at a handful of fixed points. Equal functions have
// equal signatures, so distinct signatures rule out duplicates without
// touching the exact (and costly) r_equal path.
using PairSig = std::vector<ExtRational>;

inline PairSig pair_signature(const GenPair& p) {
  static constexpr int kProbes = 6;
  int n = p.first.n_vars;
  PairSig sig;
  for (int j = 0; j < kProbes; ++j) {
    std::vector<Rat> x(n);
    for (int i = 0; i < n; ++i)
      x[i] = Rat(((j * 7 + i * 3 + 2) % 11) - 5, 1 + (j + i) % 3);
    sig.push_back(r_eval(p.first, x));
    sig.push_back(r_eval(p.second, x));
  }
  return sig;
}

// Signature-bucketed list of pairs unique up to componentwise r_equal.
class PairSet {
 public:
  void insert(GenPair p) {
    PairSig sig = pair_signature(p);
    auto& bucket = buckets_[sig];
    for (std::size_t i : bucket)
      if (pairs_equal(items_[i], p)) return;
    bucket.push_back(items_.size());
    items_.push_back(std::move(p));
  }

  std::vector<GenPair> take() { return std::move(items_); }
  const std::vector<GenPair>& items() const { return items_; }

 private:
  std::vector<GenPair> items_;
  std::map<PairSig, std::vector<std::size_t>> buckets_;
};

}  // namespace detail

// One round of derived pairs: the input with both orientations, transitive
// compositions across matching endpoints, and all pairwise sum and product
// combinations (self-combinations included). Deduplicated up to componentwise
// functional equality.
inline std::vector<GenPair> closure_step(const std::vector<GenPair>& pairs) {
  if (pairs.empty()) throw Error("closure_step needs at least one pair");
  detail::PairSet base_set;
  for (const auto& p : pairs) {
    base_set.insert(p);
    base_set.insert({p.second, p.first});
  }
  const std::vector<GenPair>& base = base_set.items();

  // Per-side value probes so the transitivity screen skips most r_equal calls.
  std::vector<detail::PairSig> lhs_sig(base.size()), rhs_sig(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    detail::PairSig s = detail::pair_signature(base[i]);
    for (std::size_t j = 0; j < s.size(); j += 2) {
      lhs_sig[i].push_back(s[j]);
      rhs_sig[i].push_back(s[j + 1]);
    }
  }

  detail::PairSet out;
  for (const auto& p : base) out.insert(p);
  for (std::size_t ia = 0; ia < base.size(); ++ia) {
    const auto& a = base[ia];
    for (std::size_t ib = 0; ib < base.size(); ++ib) {
      const auto& b = base[ib];
      if (rhs_sig[ia] == lhs_sig[ib] && detail::sides_equal(a.second, b.first))
        out.insert({a.first, b.second});
      out.insert({r_add(a.first, b.first), r_add(a.second, b.second)});
      out.insert({r_mul(a.first, b.first), r_mul(a.second, b.second)});
    }
  }
  return out.take();
}

}  // namespace tropica
