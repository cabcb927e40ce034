#include "ordercert/cone.hpp"

#include <algorithm>
#include <set>

#include "ordercert/errors.hpp"
#include "ordercert/text.hpp"
#include "parallel.hpp"

namespace ordercert {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  auto r = a % n;
  return r < 0 ? r + n : r;
}

// Leading term of the kernel part of a laurent element known to lie in the kernel.
std::optional<std::pair<std::int64_t, std::int64_t>> kernel_leading_term(Element const& g) {
  auto [p, k] = laurent_parts(g);
  if (k != 0) throw PreconditionFailed("kernel cone queried outside Z[t,t^-1]: " + render(g));
  return p.leading_term();
}

bool defined_on(ConeHandle const& P, Element const& g) {
  if (std::holds_alternative<cone_desc::Q>(P.descriptor()) || std::holds_alternative<cone_desc::Qi>(P.descriptor()))
    return g.normal_form()[0] == 0;
  return true;
}

std::string hom_text(Homomorphism const& q) {
  if (q == Homomorphism::z_exponent()) return "z-exponent";
  std::string out = q.source().spec() + "->" + q.target().spec() + "[";
  auto labels = q.source().generator_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += labels[i] + "=" + render(q.images()[i]);
  }
  return out + "]";
}

}  // namespace

ConeHandle ConeHandle::standard(Group g) {
  switch (g.kind()) {
    case GroupKind::free_abelian:
    case GroupKind::heisenberg:
    case GroupKind::klein_bottle:
      return {g, cone_desc::Standard{}};
    default:
      throw PreconditionFailed("no standard cone on " + g.spec());
  }
}

ConeHandle ConeHandle::q_cone(std::int64_t shift) { return {Group::laurent_semidirect(), cone_desc::Q{shift}}; }

ConeHandle ConeHandle::qi_cone(int i, std::int64_t phase) {
  if (i < 1) throw PreconditionFailed("Q_i needs i >= 1");
  return {Group::laurent_semidirect(), cone_desc::Qi{i, floor_mod(phase, 2 * static_cast<std::int64_t>(i))}};
}

ConeHandle ConeHandle::lex(Homomorphism q, ConeHandle kernel, ConeHandle quotient) {
  if (!(kernel.owner() == q.source())) throw OwnerMismatch("kernel cone must live on the source of q");
  if (!(quotient.owner() == q.target())) throw OwnerMismatch("quotient cone must live on the target of q");
  auto owner = q.source();
  return {owner, cone_desc::Lex{std::move(q), std::make_shared<ConeHandle const>(std::move(kernel)),
                                std::make_shared<ConeHandle const>(std::move(quotient))}};
}

ConeHandle ConeHandle::finite(Group g, std::vector<Element> members, int radius) {
  for (auto const& m : members)
    if (!(m.group() == g)) throw OwnerMismatch("finite cone member outside " + g.spec());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return {g, cone_desc::Finite{std::move(members), radius}};
}

ConeHandle ConeHandle::conjugated(ConeHandle base, Element by) {
  if (!(by.group() == base.owner())) throw OwnerMismatch("conjugator outside " + base.owner().spec());
  auto owner = base.owner();
  return {owner, cone_desc::Conjugated{std::make_shared<ConeHandle const>(std::move(base)), std::move(by)}};
}

ConeHandle ConeHandle::p_cone() {
  return lex(Homomorphism::z_exponent(), q_cone(), standard(Group::free_abelian(1)));
}

ConeHandle ConeHandle::pi_cone(int i, std::int64_t phase) {
  return lex(Homomorphism::z_exponent(), qi_cone(i, phase), standard(Group::free_abelian(1)));
}

bool ConeHandle::contains(Element const& g) const {
  if (!(g.group() == owner_)) throw OwnerMismatch("cone on " + owner_.spec() + " queried with " + g.group().spec());
  return std::visit(
      [&](auto const& d) -> bool {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, cone_desc::Standard>) {
          auto const& nf = g.normal_form();
          if (owner_.kind() == GroupKind::klein_bottle && nf[1] != 0) return nf[1] > 0;
          for (auto v : nf)
            if (v != 0) return v > 0;
          return false;
        } else if constexpr (std::is_same_v<D, cone_desc::Q>) {
          auto lt = kernel_leading_term(g);
          if (!lt) return false;
          auto e = lt->first - d.shift;
          return e >= 0 ? lt->second > 0 : lt->second < 0;
        } else if constexpr (std::is_same_v<D, cone_desc::Qi>) {
          auto lt = kernel_leading_term(g);
          if (!lt) return false;
          auto m = floor_div(lt->first - d.phase, d.i);
          return (m % 2 == 0) ? lt->second > 0 : lt->second < 0;
        } else if constexpr (std::is_same_v<D, cone_desc::Lex>) {
          auto image = d.q(g);
          return image.is_identity() ? d.kernel->contains(g) : d.quotient->contains(image);
        } else if constexpr (std::is_same_v<D, cone_desc::Finite>) {
          return std::binary_search(d.members.begin(), d.members.end(), g);
        } else {
          return d.base->contains(multiply(multiply(invert(d.by), g), d.by));
        }
      },
      *desc_);
}

std::string ConeHandle::describe() const {
  return std::visit(
      [&](auto const& d) -> std::string {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, cone_desc::Standard>) {
          return "standard(" + owner_.spec() + ")";
        } else if constexpr (std::is_same_v<D, cone_desc::Q>) {
          return "q(shift=" + std::to_string(d.shift) + ")";
        } else if constexpr (std::is_same_v<D, cone_desc::Qi>) {
          return "qi(i=" + std::to_string(d.i) + ",phase=" + std::to_string(d.phase) + ")";
        } else if constexpr (std::is_same_v<D, cone_desc::Lex>) {
          return "lex(" + hom_text(d.q) + "; " + d.kernel->describe() + "; " + d.quotient->describe() + ")";
        } else if constexpr (std::is_same_v<D, cone_desc::Finite>) {
          std::string out = "finite(radius=" + std::to_string(d.radius) + ";";
          for (auto const& m : d.members) out += " " + render(m) + ";";
          return out + ")";
        } else {
          return "conj(" + render(d.by) + "; " + d.base->describe() + ")";
        }
      },
      *desc_);
}

bool operator==(ConeHandle const& a, ConeHandle const& b) {
  if (!(a.owner_ == b.owner_)) return false;
  if (a.desc_ == b.desc_) return true;
  return std::visit(
      [&](auto const& x) -> bool {
        using D = std::decay_t<decltype(x)>;
        auto const* y = std::get_if<D>(b.desc_.get());
        if (!y) return false;
        if constexpr (std::is_same_v<D, cone_desc::Standard>) {
          return true;
        } else if constexpr (std::is_same_v<D, cone_desc::Q>) {
          return x.shift == y->shift;
        } else if constexpr (std::is_same_v<D, cone_desc::Qi>) {
          return x.i == y->i && x.phase == y->phase;
        } else if constexpr (std::is_same_v<D, cone_desc::Lex>) {
          return x.q == y->q && *x.kernel == *y->kernel && *x.quotient == *y->quotient;
        } else if constexpr (std::is_same_v<D, cone_desc::Finite>) {
          return x.members == y->members && x.radius == y->radius;
        } else {
          return x.by == y->by && *x.base == *y->base;
        }
      },
      *a.desc_);
}

ConeHandle conjugate_cone(ConeHandle const& P, Element const& g) {
  if (!(g.group() == P.owner())) throw OwnerMismatch("conjugator outside " + P.owner().spec());
  if (g.is_identity()) return P;
  return std::visit(
      [&](auto const& d) -> ConeHandle {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, cone_desc::Standard>) {
          if (P.owner().is_abelian()) return P;
          return ConeHandle::conjugated(P, g);
        } else if constexpr (std::is_same_v<D, cone_desc::Q>) {
          return ConeHandle::q_cone(d.shift + g.normal_form()[0]);
        } else if constexpr (std::is_same_v<D, cone_desc::Qi>) {
          return ConeHandle::qi_cone(d.i, d.phase + g.normal_form()[0]);
        } else if constexpr (std::is_same_v<D, cone_desc::Lex>) {
          return ConeHandle::lex(d.q, conjugate_cone(*d.kernel, g), conjugate_cone(*d.quotient, d.q(g)));
        } else if constexpr (std::is_same_v<D, cone_desc::Finite>) {
          std::vector<Element> members;
          for (auto const& m : d.members) members.push_back(conjugate(g, m));
          return ConeHandle::finite(P.owner(), std::move(members), d.radius);
        } else {
          return ConeHandle::conjugated(*d.base, multiply(g, d.by));
        }
      },
      P.descriptor());
}

namespace {

// First index i (in order) for which row_violation(i) is set.
template <typename Row>
ConeCheckReport first_violation(std::size_t rows, Exec exec, Row&& row_violation) {
  std::vector<std::optional<ConeCheckReport>> found(rows);
  detail::for_each_index(rows, exec, [&](std::size_t i) { found[i] = row_violation(i); });
  for (auto& f : found)
    if (f) return std::move(*f);
  return {};
}

// Ball elements the cone classifies; kernel-only cones skip the rest.
std::vector<Element> domain_members(ConeHandle const& P, Ball const& B) {
  std::vector<Element> out;
  for (auto const& g : B.members)
    if (defined_on(P, g)) out.push_back(g);
  return out;
}

}  // namespace

ConeCheckReport cone_axioms_check(ConeHandle const& P, int radius, Exec exec) {
  auto B = ball(P.owner(), radius);
  auto members = domain_members(P, B);
  std::vector<char> positive(members.size());
  detail::for_each_index(members.size(), exec, [&](std::size_t i) { positive[i] = P.contains(members[i]); });

  for (std::size_t i = 0; i < members.size(); ++i) {
    auto const& g = members[i];
    if (g.is_identity()) {
      if (positive[i]) return {false, "identity is positive", {g}};
      continue;
    }
    bool inverse_positive = P.contains(invert(g));
    if (positive[i] == inverse_positive)
      return {false, positive[i] ? "g and g^-1 both positive" : "neither g nor g^-1 positive", {g}};
  }

  return first_violation(members.size(), exec, [&](std::size_t i) -> std::optional<ConeCheckReport> {
    if (!positive[i]) return std::nullopt;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (!positive[j]) continue;
      auto gh = multiply(members[i], members[j]);
      if (B.contains(gh) && !P.contains(gh))
        return ConeCheckReport{false, "product of positives not positive", {members[i], members[j]}};
    }
    return std::nullopt;
  });
}

ConeCheckReport cone_invariance_check(ConeHandle const& P, int radius, InvarianceMode mode, Exec exec) {
  auto B = ball(P.owner(), radius);
  auto members = domain_members(P, B);
  std::vector<char> positive(members.size());
  detail::for_each_index(members.size(), exec, [&](std::size_t i) { positive[i] = P.contains(members[i]); });

  return first_violation(members.size(), exec, [&](std::size_t i) -> std::optional<ConeCheckReport> {
    if (!positive[i]) return std::nullopt;
    auto const& g = members[i];
    for (std::size_t j = 0; j < members.size(); ++j) {
      auto const& h = members[j];
      auto hinv_g_h = multiply(multiply(invert(h), g), h);
      if (mode == InvarianceMode::bi) {
        if (!P.contains(hinv_g_h)) return ConeCheckReport{false, "h^-1 g h not positive", {g, h}};
      } else if (positive[j]) {
        if (!P.contains(multiply(hinv_g_h, h))) return ConeCheckReport{false, "h^-1 g h^2 not positive", {g, h}};
      }
    }
    return std::nullopt;
  });
}

OrbitReport cone_orbit(ConeHandle const& P, std::vector<Element> const& conjugators, int bound, int search_radius) {
  auto owner = P.owner();
  for (auto const& c : conjugators)
    if (!(c.group() == owner)) throw OwnerMismatch("conjugator outside " + owner.spec());

  // Witness candidates: conjugates c^k b c^-k of ball elements.
  std::set<Element> pool;
  for (auto const& b : ball(owner, search_radius).members) {
    pool.insert(b);
    for (auto const& c : conjugators)
      for (int k = 1; k <= bound; ++k) {
        pool.insert(conjugate(power(c, k), b));
        pool.insert(conjugate(power(c, -k), b));
      }
  }
  std::vector<Element> candidates(pool.begin(), pool.end());

  auto separate = [&](ConeHandle const& a, ConeHandle const& b) -> std::optional<std::pair<Element, bool>> {
    for (auto const& w : candidates) {
      if (!defined_on(a, w) || !defined_on(b, w)) continue;
      bool in_a = a.contains(w);
      if (in_a != b.contains(w)) return std::pair{w, in_a};
    }
    return std::nullopt;
  };

  OrbitReport report;
  report.cones.push_back(P);
  for (std::size_t next = 0; next < report.cones.size(); ++next) {
    for (auto const& c : conjugators) {
      auto image = conjugate_cone(report.cones[next], c);
      bool known = std::any_of(report.cones.begin(), report.cones.end(), [&](ConeHandle const& k) {
        return k == image || !separate(k, image);
      });
      if (known) continue;
      if (report.cones.size() >= static_cast<std::size_t>(bound))
        throw BudgetExceeded("orbit of " + P.describe() + " exceeds " + std::to_string(bound) + " cones");
      report.cones.push_back(std::move(image));
    }
  }

  for (std::size_t i = 0; i < report.cones.size(); ++i)
    for (std::size_t j = i + 1; j < report.cones.size(); ++j) {
      auto w = separate(report.cones[i], report.cones[j]);
      if (!w) throw PreconditionFailed("orbit cones " + std::to_string(i) + " and " + std::to_string(j) +
                                       " not separated within the search radius");
      report.witnesses.push_back({i, j, w->first, w->second});
    }
  return report;
}

std::optional<ClosedFormRecurrence> closed_form_recurrence(ConeHandle const& P, Element const& g,
                                                           std::vector<Element> const& probes) {
  auto const* lex = std::get_if<cone_desc::Lex>(&P.descriptor());
  if (!lex || !(lex->q == Homomorphism::z_exponent())) return std::nullopt;
  auto const* q = std::get_if<cone_desc::Q>(&lex->kernel->descriptor());
  if (!q || !std::holds_alternative<cone_desc::Standard>(lex->quotient->descriptor())) return std::nullopt;

  // g^-n (p, 0) g^n = (t^{-mn} p, 0); probes off the kernel keep their z
  // exponent, hence their sign, under conjugation.
  auto m = g.normal_form()[0];
  ClosedFormRecurrence out{true, 0};
  if (m == 0) return out;
  for (auto const& h : probes) {
    if (h.normal_form()[0] != 0) continue;
    auto lt = laurent_parts(h).first.leading_term();
    if (!lt) continue;
    auto [lead, coeff] = *lt;
    auto e0 = lead - q->shift;  // exponent seen by Q after n steps is e0 - m n
    // First n from which the membership of g^-n h g^n no longer changes.
    std::int64_t settle = 0;
    if (m > 0) {
      settle = std::max<std::int64_t>(0, floor_div(e0, m) + 1);
      if (coeff > 0) out.recurrent = false;
    } else {
      settle = std::max<std::int64_t>(0, -floor_div(e0, -m));
      if (coeff < 0) out.recurrent = false;
    }
    out.threshold = std::max(out.threshold, settle);
  }
  return out;
}

RecurrenceReport recurrence_check(ConeHandle const& P, Element const& g, std::vector<Element> const& probes,
                                  std::int64_t n_max) {
  for (auto const& h : probes)
    if (!P.contains(h)) throw PreconditionFailed("recurrence probe " + render(h) + " is not positive");
  RecurrenceReport report{g, probes, {}, n_max, closed_form_recurrence(P, g, probes)};
  auto gn = g.group().identity();
  auto gn_inv = gn;
  auto ginv = invert(g);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    gn = multiply(gn, g);
    gn_inv = multiply(ginv, gn_inv);
    bool all = std::all_of(probes.begin(), probes.end(),
                           [&](Element const& h) { return P.contains(multiply(multiply(gn_inv, h), gn)); });
    if (all) report.found.push_back(n);
  }
  return report;
}

}  // namespace ordercert
