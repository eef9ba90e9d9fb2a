#include "bapred/impossibility.hpp"

#include "bapred/predgen.hpp"

namespace bapred {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::T41: return "T4.1";
    case Family::T42p1: return "T4.2p1";
    case Family::T42p2: return "T4.2p2";
    case Family::T42p3: return "T4.2p3";
    case Family::TC3: return "TC.3";
    case Family::TC4p1: return "TC.4p1";
    case Family::TC4p2: return "TC.4p2";
    case Family::T52: return "T5.2";
  }
  return "unknown";
}

std::vector<Family> all_families() {
  return {Family::T41, Family::T42p1, Family::T42p2, Family::T42p3,
          Family::TC3, Family::TC4p1, Family::TC4p2, Family::T52};
}

Family parse_family(std::string_view text) {
  for (auto f : all_families()) {
    if (to_string(f) == text) return f;
  }
  throw DomainError("unknown impossibility family '" + std::string(text) + "'");
}

namespace {

/// Exact integer value of a part size, or nullopt.
std::optional<int> integral(const Rational& r) {
  if (r.denominator() != 1 || r.numerator() < 0) return std::nullopt;
  return static_cast<int>(r.numerator());
}

/// Consecutive id blocks of the given sizes.
std::vector<NodeSet> layout(const std::vector<int>& sizes) {
  std::vector<NodeSet> parts;
  int next = 1;
  for (int s : sizes) {
    parts.push_back(NodeSet::range(next, next + s - 1));
    next += s;
  }
  return parts;
}

NodeSet unite(std::initializer_list<NodeSet> sets) {
  NodeSet out;
  for (const auto& s : sets) out = out.unite(s);
  return out;
}

struct ConfigPlan {
  std::string name;
  NodeSet faulty;
  std::vector<std::pair<NodeSet, Bit>> inputs;
  std::vector<PersonaLabel> labels;
};

class Builder {
 public:
  Builder(Family family, ChannelMode mode, Rational alpha, int n)
      : family_(family), mode_(mode), alpha_(alpha), n_(n) {}

  FamilyMember make(const ConfigPlan& plan, const LocalPrediction& pred, bool local) const {
    Scenario s;
    s.mode = mode_;
    s.alpha = alpha_;
    s.protocol = mode_ == ChannelMode::NonAuth ? ProtocolChoice::PredBa : ProtocolChoice::AuthPredBa;
    s.config.n = n_;
    s.config.faulty = plan.faulty;
    for (const auto& [set, bit] : plan.inputs) {
      for (auto id : set) s.config.inputs[id] = bit;
    }
    s.prediction = pred;
    s.local_prediction = local;
    if (plan.labels.empty()) {
      s.adversary = AdversarySpec{};
    } else {
      s.adversary.kind = AdversaryKind::Personas;
      s.adversary.labels = plan.labels;
    }
    s.label = std::string(to_string(family_)) + ":" + plan.name;
    s.validate();
    return FamilyMember{s, s.error(), s.config.f()};
  }

 private:
  Family family_;
  ChannelMode mode_;
  Rational alpha_;
  int n_;
};

[[noreturn]] void infeasible(Family family, const Rational& alpha, int n, const std::string& why,
                             const std::function<bool(int)>& feasible) {
  std::string hint;
  for (int d = 1; d <= 4 * n + 8 && hint.empty(); ++d) {
    for (int cand : {n - d, n + d}) {
      if (cand >= 2 && feasible(cand)) {
        hint = "; nearest feasible n for alpha " + format_rational(alpha) + " is " + std::to_string(cand);
        break;
      }
    }
  }
  throw DomainError(std::string(to_string(family)) + " infeasible at alpha " + format_rational(alpha) + ", n " +
                    std::to_string(n) + ": " + why + hint);
}

void require_alpha(Family family, const Rational& alpha, ChannelMode mode, bool below_one) {
  TrustParam checked(alpha, mode);
  (void)checked;
  if (below_one && alpha >= Rational(1))
    throw DomainError(std::string(to_string(family)) + " needs alpha < 1");
}

std::vector<FamilyMember> build_t41(const Rational& alpha, int n) {
  require_alpha(Family::T41, alpha, ChannelMode::NonAuth, true);
  auto sizes_for = [&](int m) -> std::optional<std::array<int, 2>> {
    auto ab = integral((Rational(1) - alpha) * Rational(m) / Rational(2));
    auto c = integral(alpha * Rational(m));
    if (!ab || !c || *ab < 1) return std::nullopt;
    return std::array<int, 2>{*ab, *c};
  };
  auto sz = sizes_for(n);
  if (!sz) infeasible(Family::T41, alpha, n, "(1-alpha)n/2 and alpha n must be integers", [&](int m) { return sizes_for(m).has_value(); });
  auto parts = layout({(*sz)[0], (*sz)[0], (*sz)[1]});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2];
  Builder b(Family::T41, ChannelMode::NonAuth, alpha, n);
  auto pred = replicate(unite({A, B}), n);
  return {
      b.make({"config1", C, {{A, Bit::Zero}, {B, Bit::One}},
              {{C, Bit::Zero, A, std::nullopt}, {C, Bit::One, B, std::nullopt}}}, pred, false),
      b.make({"config2", B, {{unite({A, C}), Bit::Zero}}, {{B, Bit::One, unite({A, C}), std::nullopt}}}, pred, false),
      b.make({"config3", A, {{unite({B, C}), Bit::One}}, {{A, Bit::Zero, unite({B, C}), std::nullopt}}}, pred, false),
  };
}

std::vector<FamilyMember> build_t42p1(const Rational& alpha, int n, int d) {
  require_alpha(Family::T42p1, alpha, ChannelMode::NonAuth, true);
  auto sizes_for = [&](int m, int dd) -> std::optional<std::array<int, 2>> {
    auto ab = integral(((Rational(1) - alpha) * Rational(m) - Rational(1)) / Rational(2));
    auto an = integral(alpha * Rational(m));
    // The stated part sizes cover n - 1 nodes; C takes the remaining one so f = alpha n + 1 in (a).
    if (!ab || !an || *ab < 1 || dd < 0 || *an - dd < 1) return std::nullopt;
    return std::array<int, 2>{*ab, *an - dd};
  };
  auto sz = sizes_for(n, d);
  if (!sz)
    infeasible(Family::T42p1, alpha, n, "((1-alpha)n-1)/2 must be a positive integer and |D| <= alpha n - 1",
               [&](int m) { return sizes_for(m, d).has_value(); });
  auto parts = layout({(*sz)[0], (*sz)[0], (*sz)[1], d, 1});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2], &D = parts[3], &x = parts[4];
  Builder b(Family::T42p1, ChannelMode::NonAuth, alpha, n);
  auto pred = replicate(unite({A, B, D, x}), n);
  NodeSet cdx = unite({C, D, x});
  NodeSet rest_b = unite({A, C, D, x});
  NodeSet rest_a = unite({B, C, D, x});
  return {
      b.make({"a", cdx, {{A, Bit::Zero}, {B, Bit::One}},
              {{cdx, Bit::Zero, A, std::nullopt}, {cdx, Bit::One, B, std::nullopt}}}, pred, false),
      b.make({"b", B, {{rest_b, Bit::Zero}}, {{B, Bit::One, rest_b, std::nullopt}}}, pred, false),
      b.make({"c", A, {{rest_a, Bit::One}}, {{A, Bit::Zero, rest_a, std::nullopt}}}, pred, false),
  };
}

std::vector<FamilyMember> build_t42p2(const Rational& alpha, int n, std::optional<int> eta_opt) {
  require_alpha(Family::T42p2, alpha, ChannelMode::NonAuth, true);
  int eta = eta_opt ? *eta_opt : static_cast<int>(ceil_of((Rational(1) - alpha) * Rational(n) / Rational(2)));
  if (eta < 1 || 3 * eta > n)
    infeasible(Family::T42p2, alpha, n, "need 1 <= eta <= n/3", [&](int m) { return eta >= 1 && 3 * eta <= m; });
  auto parts = layout({eta, eta, eta, n - 3 * eta});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2], &D = parts[3];
  Builder b(Family::T42p2, ChannelMode::NonAuth, alpha, n);
  auto pred = replicate(unite({A, B, C}), n);
  NodeSet cd = unite({C, D});
  NodeSet ac = unite({A, C});
  NodeSet bc = unite({B, C});
  auto maybe = [](const NodeSet& members, Bit input, const NodeSet& audience) {
    std::vector<PersonaLabel> out;
    if (!members.empty()) out.push_back(PersonaLabel{members, input, audience, std::nullopt});
    return out;
  };
  auto labels_b = maybe(B, Bit::One, ac);
  for (auto& l : maybe(D, Bit::Zero, ac)) labels_b.push_back(l);
  auto labels_c = maybe(A, Bit::Zero, bc);
  for (auto& l : maybe(D, Bit::One, bc)) labels_c.push_back(l);
  return {
      b.make({"a", cd, {{A, Bit::Zero}, {B, Bit::One}},
              {{cd, Bit::Zero, A, std::nullopt}, {cd, Bit::One, B, std::nullopt}}}, pred, false),
      b.make({"b", unite({B, D}), {{ac, Bit::Zero}}, labels_b}, pred, false),
      b.make({"c", unite({A, D}), {{bc, Bit::One}}, labels_c}, pred, false),
  };
}

std::vector<FamilyMember> build_t42p3(const Rational& alpha, int n, std::optional<int> d_opt) {
  require_alpha(Family::T42p3, alpha, ChannelMode::NonAuth, true);
  int d = 0;
  if (d_opt) {
    d = *d_opt;
  } else {
    while ((n - d) % 3 != 0) ++d;
  }
  auto ok = [&](int m) { return d >= 0 && d <= m && (m - d) % 3 == 0 && (m - d) / 3 >= 2; };
  if (!ok(n)) infeasible(Family::T42p3, alpha, n, "(n-|D|)/3 must be an integer of at least 2", ok);
  int base = (n - d) / 3;
  auto parts = layout({base + 1, base + 1, base - 2, d});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2], &D = parts[3];
  Builder b(Family::T42p3, ChannelMode::NonAuth, alpha, n);
  auto pred = replicate(unite({A, B, C}), n);
  NodeSet cd = unite({C, D});
  NodeSet acd = unite({A, C, D});
  NodeSet bcd = unite({B, C, D});
  return {
      b.make({"a", cd, {{A, Bit::Zero}, {B, Bit::One}},
              {{cd, Bit::Zero, A, std::nullopt}, {cd, Bit::One, B, std::nullopt}}}, pred, false),
      b.make({"b", B, {{acd, Bit::Zero}}, {{B, Bit::One, acd, std::nullopt}}}, pred, false),
      b.make({"c", A, {{bcd, Bit::One}}, {{A, Bit::Zero, bcd, std::nullopt}}}, pred, false),
  };
}

std::vector<FamilyMember> build_tc3(const Rational& alpha, int n) {
  require_alpha(Family::TC3, alpha, ChannelMode::Auth, true);
  auto a = integral(alpha * Rational(n));
  auto ok = [&](int m) {
    auto am = integral(alpha * Rational(m));
    return am && *am >= 1 && *am < m;
  };
  if (!ok(n)) infeasible(Family::TC3, alpha, n, "alpha n must be an integer below n", ok);
  auto parts = layout({*a, n - *a});
  const NodeSet &A = parts[0], &B = parts[1];
  Builder b(Family::TC3, ChannelMode::Auth, alpha, n);
  auto pred = replicate(A, n);
  return {
      b.make({"config1", B, {{A, Bit::Zero}}, {{B, Bit::One, A, std::nullopt}}}, pred, false),
      b.make({"config2", A, {{B, Bit::One}}, {{A, Bit::Zero, B, std::nullopt}}}, pred, false),
      b.make({"config3", {}, {{A, Bit::Zero}, {B, Bit::One}}, {}}, pred, false),
  };
}

std::vector<FamilyMember> build_tc4p1(const Rational& alpha, int n, int c) {
  require_alpha(Family::TC4p1, alpha, ChannelMode::Auth, true);
  auto sizes_for = [&](int m) -> std::optional<std::array<int, 2>> {
    auto a = integral((Rational(1) - alpha) * Rational(m) - Rational(1));
    auto an = integral(alpha * Rational(m));
    if (!a || !an || *a < 1 || c < 0 || *an - c < 0) return std::nullopt;
    return std::array<int, 2>{*a, *an - c};
  };
  auto sz = sizes_for(n);
  if (!sz)
    infeasible(Family::TC4p1, alpha, n, "(1-alpha)n-1 must be a positive integer and |C| <= alpha n",
               [&](int m) { return sizes_for(m).has_value(); });
  auto parts = layout({(*sz)[0], (*sz)[1], c, 1});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2], &x = parts[3];
  Builder b(Family::TC4p1, ChannelMode::Auth, alpha, n);
  auto pred = replicate(unite({A, C, x}), n);
  NodeSet bcx = unite({B, C, x});
  return {
      b.make({"a", bcx, {{A, Bit::Zero}}, {{bcx, Bit::One, A, std::nullopt}}}, pred, false),
      b.make({"b", A, {{bcx, Bit::One}}, {{A, Bit::Zero, bcx, std::nullopt}}}, pred, false),
      b.make({"c", {}, {{A, Bit::Zero}, {bcx, Bit::One}}, {}}, pred, false),
  };
}

std::vector<FamilyMember> build_tc4p2(const Rational& alpha, int n, int c) {
  require_alpha(Family::TC4p2, alpha, ChannelMode::Auth, true);
  auto ok = [&](int m) { return c >= 0 && c <= m - 2 && (m - c) % 2 == 0; };
  if (!ok(n)) infeasible(Family::TC4p2, alpha, n, "(n-|C|)/2 must be a positive integer", ok);
  int half = (n - c) / 2;
  auto parts = layout({half, half, c});
  const NodeSet &A = parts[0], &B = parts[1], &C = parts[2];
  Builder b(Family::TC4p2, ChannelMode::Auth, alpha, n);
  auto pred = replicate(unite({A, B}), n);
  NodeSet ac = unite({A, C});
  NodeSet bc = unite({B, C});
  std::vector<PersonaLabel> split;
  if (!C.empty()) split = {{C, Bit::Zero, A, std::nullopt}, {C, Bit::One, B, std::nullopt}};
  return {
      b.make({"a", C, {{A, Bit::Zero}, {B, Bit::One}}, split}, pred, false),
      b.make({"b", B, {{ac, Bit::Zero}}, {{B, Bit::One, ac, std::nullopt}}}, pred, false),
      b.make({"c", A, {{bc, Bit::One}}, {{A, Bit::Zero, bc, std::nullopt}}}, pred, false),
  };
}

std::vector<FamilyMember> build_t52(const Rational& alpha, int n) {
  require_alpha(Family::T52, alpha, ChannelMode::NonAuth, false);
  auto ok = [](int m) { return m >= 2 && m % 2 == 0; };
  if (!ok(n)) infeasible(Family::T52, alpha, n, "n must be even", ok);
  auto parts = layout({n / 2, n / 2});
  const NodeSet &A = parts[0], &B = parts[1];
  std::map<NodeId, std::size_t> assignment;
  for (auto id : A) assignment[id] = 0;
  for (auto id : B) assignment[id] = 1;
  auto pred = local_from_global({Prediction{A}, Prediction{B}}, assignment);
  Builder b(Family::T52, ChannelMode::NonAuth, alpha, n);
  return {
      b.make({"config1", B, {{A, Bit::Zero}}, {{B, Bit::One, A, B}}}, pred, true),
      b.make({"config2", A, {{B, Bit::One}}, {{A, Bit::Zero, B, A}}}, pred, true),
      b.make({"config3", {}, {{A, Bit::Zero}, {B, Bit::One}}, {}}, pred, true),
  };
}

}  // namespace

std::vector<FamilyMember> build_impossibility_scenarios(Family family, const Rational& alpha, int n,
                                                        std::optional<int> size) {
  if (n < 2) throw DomainError("impossibility constructions need n >= 2");
  switch (family) {
    case Family::T41: return build_t41(alpha, n);
    case Family::T42p1: return build_t42p1(alpha, n, size.value_or(0));
    case Family::T42p2: return build_t42p2(alpha, n, size);
    case Family::T42p3: return build_t42p3(alpha, n, size);
    case Family::TC3: return build_tc3(alpha, n);
    case Family::TC4p1: return build_tc4p1(alpha, n, size.value_or(0));
    case Family::TC4p2: return build_tc4p2(alpha, n, size.value_or(2));
    case Family::T52: return build_t52(alpha, n);
  }
  throw DomainError("unknown family");
}

}  // namespace bapred
