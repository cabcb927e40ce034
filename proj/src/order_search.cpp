#include "ordercert/order_search.hpp"

#include <algorithm>

#include "ordercert/errors.hpp"
#include "parallel.hpp"

namespace ordercert {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::lo: return "lo";
    case Criterion::co: return "co";
    case Criterion::bo: return "bo";
  }
  return "?";
}

Criterion parse_criterion(std::string const& text) {
  if (text == "lo") return Criterion::lo;
  if (text == "co") return Criterion::co;
  if (text == "bo") return Criterion::bo;
  throw ParseError("unknown criterion '" + text + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::obstructed: return "obstructed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<Element> apply_signs(std::span<Element const> X, SignVector const& signs) {
  if (signs.size() != X.size()) throw PreconditionFailed("sign vector length does not match the element list");
  std::vector<Element> out;
  out.reserve(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw PreconditionFailed("signs must be +1 or -1");
    out.push_back(signs[i] == 1 ? X[i] : invert(X[i]));
  }
  return out;
}

SignVector sign_vector_at(std::size_t n, std::size_t rank) {
  SignVector s(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    if (rank >> (n - 1 - i) & 1U) s[i] = -1;
  return s;
}

ClosureKind closure_kind(Criterion c, int conjugator_radius) {
  switch (c) {
    case Criterion::lo: return ClosureKind::plain();
    case Criterion::co: return ClosureKind::conradian();
    case Criterion::bo: return ClosureKind::normal(conjugator_radius);
  }
  return ClosureKind::plain();
}

namespace {

constexpr std::size_t max_search_width = 20;

// Rewrites leaf indices from positions in the compacted list to positions in X.
Derivation reindex(Derivation const& d, std::vector<std::size_t> const& original) {
  if (d.is_leaf()) {
    auto const& l = d.as_leaf();
    return Derivation::leaf(original.at(l.index), l.base, l.conjugator);
  }
  auto [a, b] = d.children();
  auto ra = reindex(a, original);
  auto rb = reindex(b, original);
  return d.is_product() ? Derivation::product(std::move(ra), std::move(rb))
                        : Derivation::conradian(std::move(ra), std::move(rb));
}

struct Outcome {
  std::optional<Derivation> witness;
  bool exhausted = false;
};

Outcome run_vector(std::span<Element const> X, std::vector<std::size_t> const& kept, SignVector const& full_signs,
                   ClosureKind kind, int depth, std::size_t budget, Exec exec) {
  std::vector<Element> signed_kept;
  for (auto i : kept) signed_kept.push_back(full_signs[i] == 1 ? X[i] : invert(X[i]));
  auto r = close_until_identity(signed_kept, kind, depth, budget, exec);
  Outcome out;
  if (r.identity_witness) out.witness = reindex(*r.identity_witness, kept);
  else out.exhausted = r.exhausted_budget;
  return out;
}

}  // namespace

SearchVerdict sign_search(std::span<Element const> X, Criterion criterion, int depth, int conjugator_radius,
                          std::size_t budget, Exec exec) {
  for (auto const& x : X) require_same_owner(X.front(), x);
  SearchVerdict verdict;
  verdict.depth = depth;
  verdict.criterion = criterion;
  verdict.conjugator_radius = criterion == Criterion::bo ? conjugator_radius : 0;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_identity()) kept.push_back(i);
  if (kept.empty()) {
    verdict.status = Verdict::certified;
    verdict.signs = SignVector(X.size(), 1);
    return verdict;
  }
  if (kept.size() > max_search_width)
    throw PreconditionFailed("sign search over more than " + std::to_string(max_search_width) + " elements");

  // Only kept positions vary; identity entries stay +1.
  auto const m = kept.size();
  auto const total = std::size_t{1} << m;
  auto vector_at = [&](std::size_t rank) {
    SignVector s(X.size(), 1);
    auto compact = sign_vector_at(m, rank);
    for (std::size_t k = 0; k < m; ++k) s[kept[k]] = compact[k];
    return s;
  };
  auto kind = closure_kind(criterion, conjugator_radius);

  std::vector<Outcome> outcomes(total);
  if (exec == Exec::parallel) {
    detail::for_each_index(total, exec, [&](std::size_t r) {
      outcomes[r] = run_vector(X, kept, vector_at(r), kind, depth, budget, Exec::serial);
    });
  } else {
    for (std::size_t r = 0; r < total; ++r) {
      outcomes[r] = run_vector(X, kept, vector_at(r), kind, depth, budget, Exec::serial);
      if (!outcomes[r].witness && !outcomes[r].exhausted) break;
    }
  }

  for (std::size_t r = 0; r < total; ++r) {
    auto const& o = outcomes[r];
    if (!o.witness && !o.exhausted) {
      verdict.status = Verdict::certified;
      verdict.signs = vector_at(r);
      verdict.witnesses.clear();
      verdict.exhausted.clear();
      return verdict;
    }
    if (o.witness) verdict.witnesses.emplace_back(vector_at(r), *o.witness);
    else verdict.exhausted.push_back(vector_at(r));
  }
  verdict.status = verdict.exhausted.empty() ? Verdict::obstructed : Verdict::inconclusive;
  return verdict;
}

namespace {

void spot_check_invariance(SelectionStage const& stage) {
  auto target = stage.phi.target();
  if (!(stage.cone.owner() == target))
    throw PreconditionFailed("cone on " + stage.cone.owner().spec() + " does not live on the target " +
                             target.spec());
  auto conjugators = ball(target, 1).members;
  for (auto const& h : ball(target, 2).members) {
    if (!stage.cone.contains(h)) continue;
    for (auto const& g : conjugators)
      if (!stage.cone.contains(conjugate(g, h)))
        throw PreconditionFailed("cone " + stage.cone.describe() + " is not conjugation invariant on " +
                                 target.spec());
  }
}

}  // namespace

SignSelection bo_sign_select(std::span<Element const> X, std::vector<SelectionStage> const& stages, int depth,
                             int conjugator_radius, std::size_t budget, Exec exec) {
  if (stages.empty()) throw PreconditionFailed("bo_sign_select needs at least one stage");
  for (auto const& x : X) require_same_owner(X.front(), x);
  auto const usable = std::min(stages.size(), std::max<std::size_t>(X.size(), 1));
  for (std::size_t k = 0; k < usable; ++k) {
    if (!X.empty() && !(stages[k].phi.source() == X.front().group()))
      throw OwnerMismatch("stage " + std::to_string(k) + " map does not start at " + X.front().group().spec());
    spot_check_invariance(stages[k]);
  }

  SignSelection out;
  out.signs.assign(X.size(), 1);
  out.decided_by.assign(X.size(), -1);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_identity()) pending.push_back(i);

  bool first_stage_acted = false;
  for (std::size_t k = 0; k < usable && !pending.empty(); ++k) {
    std::vector<std::size_t> killed;
    for (auto i : pending) {
      auto image = stages[k].phi(X[i]);
      if (image.is_identity()) {
        killed.push_back(i);
        continue;
      }
      out.signs[i] = stages[k].cone.contains(image) ? 1 : -1;
      out.decided_by[i] = static_cast<int>(k);
      if (k == 0) first_stage_acted = true;
    }
    pending = std::move(killed);
  }
  if (!first_stage_acted)
    throw PreconditionFailed("every element maps to the identity: the image of N is trivial");

  if (!pending.empty()) {
    std::vector<Element> rest;
    for (auto i : pending) rest.push_back(X[i]);
    auto sub = sign_search(rest, Criterion::bo, depth, conjugator_radius, budget, exec);
    if (sub.status == Verdict::certified)
      for (std::size_t k = 0; k < pending.size(); ++k) out.signs[pending[k]] = (*sub.signs)[k];
  }

  // NS check of the chosen vector.
  auto& v = out.verdict;
  v.depth = depth;
  v.criterion = Criterion::bo;
  v.conjugator_radius = conjugator_radius;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_identity()) kept.push_back(i);
  auto r = kept.empty() ? Outcome{}
                        : run_vector(X, kept, out.signs, ClosureKind::normal(conjugator_radius), depth, budget, exec);
  if (r.witness) {
    v.status = Verdict::inconclusive;
    v.witnesses.emplace_back(out.signs, *r.witness);
  } else if (r.exhausted) {
    v.status = Verdict::inconclusive;
    v.exhausted.push_back(out.signs);
  } else {
    v.status = Verdict::certified;
    v.signs = out.signs;
  }
  return out;
}

}  // namespace ordercert
