#include "bapred/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

namespace bapred {

Bit bit_from_int(int v) {
  if (v == 0) return Bit::Zero;
  if (v == 1) return Bit::One;
  throw DomainError("bit must be 0 or 1, got " + std::to_string(v));
}

std::string_view to_string(ChannelMode mode) {
  return mode == ChannelMode::Auth ? "auth" : "nonauth";
}

ChannelMode parse_channel_mode(std::string_view text) {
  if (text == "auth") return ChannelMode::Auth;
  if (text == "nonauth") return ChannelMode::NonAuth;
  throw DomainError("unknown channel mode '" + std::string(text) + "'");
}

std::int64_t floor_of(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil_of(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw DomainError("not an integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw DomainError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }

  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (frac.size() > 15) throw DomainError("too many decimals in '" + std::string(text) + "'");

  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::int64_t num = (whole.empty() ? 0 : parse_int(whole)) * den + (frac.empty() ? 0 : parse_int(frac));
  return Rational(negative ? -num : num, den);
}

std::string format_rational(const Rational& r) {
  std::int64_t den = r.denominator();
  int twos = 0, fives = 0;
  while (den % 2 == 0) den /= 2, ++twos;
  while (den % 5 == 0) den /= 5, ++fives;
  if (den != 1) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  }
  int digits = std::max(twos, fives);
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  std::int64_t scaled = r.numerator() * (scale / r.denominator());
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string out = std::to_string(scaled / scale);
  if (digits > 0) {
    std::string frac = std::to_string(scaled % scale);
    out += "." + std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return negative ? "-" + out : out;
}

// --- NodeSet ---------------------------------------------------------------

NodeSet::NodeSet(std::initializer_list<int> ids) {
  for (int id : ids) insert(NodeId{id});
}

NodeSet::NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

NodeSet NodeSet::range(int first, int last) {
  NodeSet s;
  for (int i = first; i <= last; ++i) s.ids_.push_back(NodeId{i});
  return s;
}

bool NodeSet::contains(NodeId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool NodeSet::insert(NodeId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it != ids_.end() && *it == id) return false;
  ids_.insert(it, id);
  return true;
}

bool NodeSet::erase(NodeId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return false;
  ids_.erase(it);
  return true;
}

NodeSet NodeSet::minus(const NodeSet& other) const {
  NodeSet out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                      std::back_inserter(out.ids_));
  return out;
}

NodeSet NodeSet::unite(const NodeSet& other) const {
  NodeSet out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

NodeSet NodeSet::intersect(const NodeSet& other) const {
  NodeSet out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
  return out;
}

bool NodeSet::subset_of_range(int n) const {
  return ids_.empty() || (ids_.front().value >= 1 && ids_.back().value <= n);
}

std::string to_string(const NodeSet& set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto id : set) {
    if (!first) os << ',';
    os << id.value;
    first = false;
  }
  os << '}';
  return os.str();
}

// --- TrustParam / Configuration ---------------------------------------------

Rational TrustParam::lower_bound(ChannelMode mode) {
  return mode == ChannelMode::Auth ? Rational(1, 2) : Rational(1, 3);
}

TrustParam::TrustParam(Rational alpha, ChannelMode mode) : alpha_(alpha), mode_(mode) {
  if (alpha < lower_bound(mode) || alpha > Rational(1)) {
    throw DomainError("trust parameter " + format_rational(alpha) + " outside [" +
                      format_rational(lower_bound(mode)) + ", 1] for " +
                      std::string(to_string(mode)) + " mode");
  }
}

NodeSet Configuration::honest() const { return NodeSet::range(1, n).minus(faulty); }

void Configuration::validate() const {
  if (n < 1) throw DomainError("n must be positive");
  if (!faulty.subset_of_range(n)) throw DomainError("faulty set " + to_string(faulty) + " not within 1..n");
  for (auto id : honest()) {
    if (!inputs.contains(id)) throw DomainError("missing input for honest node " + std::to_string(id.value));
  }
  for (const auto& [id, bit] : inputs) {
    if (id.value < 1 || id.value > n) throw DomainError("input for unknown node " + std::to_string(id.value));
  }
}

ErrorBreakdown compute_error(const Configuration& config, const Prediction& pred) {
  NodeSet h = config.honest();
  ErrorBreakdown e;
  e.eta_F = static_cast<int>(pred.members.minus(h).size());
  e.eta_H = static_cast<int>(h.minus(pred.members).size());
  e.eta = e.eta_F + e.eta_H;
  return e;
}

std::int64_t compute_local_error(const Configuration& config, const LocalPrediction& pred) {
  if (pred.per_node.size() != static_cast<std::size_t>(config.n))
    throw DomainError("local prediction must have exactly n entries");
  std::int64_t total = 0;
  for (auto id : config.honest()) {
    total += compute_error(config, Prediction{pred.of(id)}).eta;
  }
  return total;
}

// --- curves ----------------------------------------------------------------

std::int64_t consistency_bound(ChannelMode mode, const Rational& alpha, int n) {
  [[maybe_unused]] TrustParam checked(alpha, mode);
  return floor_of(alpha * n);
}

std::int64_t robustness_bound(ChannelMode mode, const Rational& alpha, int n) {
  [[maybe_unused]] TrustParam checked(alpha, mode);
  Rational fraction = mode == ChannelMode::Auth ? (1 - alpha) : (1 - alpha) / 2;
  return std::max<std::int64_t>(0, floor_of(fraction * n) - 1);
}

namespace {

struct Piece {
  Rational lo, hi;
  Rational value;
};

std::vector<Piece> smoothness_pieces(ChannelMode mode, const Rational& a, int n, int eta) {
  const Rational N(n), E(eta);
  if (mode == ChannelMode::NonAuth) {
    return {
        {Rational(0), (1 - a) * N - 1, a * N - E},
        {(1 - a) * N - 1, (1 + a) / 4 * N + 1, N - 2 * E - 1},
        {(1 + a) / 4 * N + 1, N, (1 - a) / 2 * N - 1},
    };
  }
  return {
      {Rational(0), 2 * (1 - a) * N, a * N - E / 2},
      {2 * (1 - a) * N, Rational(2, 3) * a * N, N - Rational(3, 2) * E - 1},
      {Rational(2, 3) * a * N, N, (1 - a) * N - 1},
  };
}

void check_eta(int n, int eta) {
  if (n < 1) throw DomainError("n must be positive");
  if (eta < 0 || eta > n) throw DomainError("eta must lie in [0, n]");
}

}  // namespace

std::int64_t theoretical_smoothness(ChannelMode mode, const Rational& alpha, int n, int eta) {
  [[maybe_unused]] TrustParam checked(alpha, mode);
  check_eta(n, eta);
  std::optional<Rational> best;
  for (const auto& piece : smoothness_pieces(mode, alpha, n, eta)) {
    if (!IntRange::of(piece.lo, piece.hi).contains(eta)) continue;
    if (!best || piece.value > *best) best = piece.value;
  }
  std::int64_t value = best ? floor_of(*best) : 0;
  return std::max(value, robustness_bound(mode, alpha, n));
}

std::optional<Impossibility> theoretical_impossibility(ChannelMode mode, const Rational& alpha,
                                                       int n, int eta) {
  [[maybe_unused]] TrustParam checked(alpha, mode);
  check_eta(n, eta);
  const Rational N(n), E(eta);
  std::vector<Piece> firm;
  std::optional<Piece> conditional;
  if (mode == ChannelMode::NonAuth) {
    firm = {
        {Rational(0), (1 - alpha) / 2 * N, alpha * N + 1},
        {(1 - alpha) / 2 * N, N / 3, N - 2 * E},
    };
    conditional = Piece{N / 3, alpha * N, N / 2 - E / 2 - 2};
  } else {
    firm = {
        {Rational(0), (1 - alpha) * N, alpha * N + 1},
        {(1 - alpha) * N, alpha * N, N - E},
    };
  }

  // Every firm piece is an impossibility on its own, so the smallest one binds.
  std::optional<Rational> best;
  for (const auto& piece : firm) {
    if (!IntRange::of(piece.lo, piece.hi).contains(eta)) continue;
    if (!best || piece.value < *best) best = piece.value;
  }
  if (best) return Impossibility{floor_of(*best), false};
  if (conditional && IntRange::of(conditional->lo, conditional->hi).contains(eta))
    return Impossibility{floor_of(conditional->value), true};
  return std::nullopt;
}

ResilienceCurve smoothness_curve(ChannelMode mode, const Rational& alpha, int n) {
  ResilienceCurve curve{mode, CurveKind::TheoreticalS, alpha, n, {}};
  for (int eta = 0; eta <= n; ++eta) {
    curve.points.push_back(CurvePoint{eta, theoretical_smoothness(mode, alpha, n, eta), false, 0});
  }
  return curve;
}

ResilienceCurve impossibility_curve(ChannelMode mode, const Rational& alpha, int n) {
  ResilienceCurve curve{mode, CurveKind::TheoreticalSbar, alpha, n, {}};
  for (int eta = 0; eta <= n; ++eta) {
    CurvePoint p{eta, std::nullopt, false, 0};
    if (auto s = theoretical_impossibility(mode, alpha, n, eta)) {
      p.value = s->value;
      p.conditional = s->conditional;
    }
    curve.points.push_back(p);
  }
  return curve;
}

std::string curves_csv(ChannelMode mode, const Rational& alpha, int n) {
  auto s = smoothness_curve(mode, alpha, n);
  auto sbar = impossibility_curve(mode, alpha, n);
  std::ostringstream os;
  os << "mode,alpha,n,eta,s,sbar,sbar_conditional_flag\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    os << to_string(mode) << ',' << format_rational(alpha) << ',' << n << ',' << s.points[i].eta << ','
       << *s.points[i].value << ',';
    if (sbar.points[i].value) os << *sbar.points[i].value;
    os << ',' << (sbar.points[i].conditional ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace bapred
