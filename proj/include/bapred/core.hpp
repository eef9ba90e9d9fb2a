#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bapred {

/// Node identifier in 1..n.
struct NodeId {
  std::int32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::int32_t v) : value(v) {}

  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class Bit : std::uint8_t { Zero = 0, One = 1 };

constexpr Bit flip(Bit b) { return b == Bit::Zero ? Bit::One : Bit::Zero; }
constexpr int to_int(Bit b) { return static_cast<int>(b); }
Bit bit_from_int(int v);

using Round = std::int32_t;
using Rational = boost::rational<std::int64_t>;

enum class ChannelMode : std::uint8_t { NonAuth, Auth };

std::string_view to_string(ChannelMode mode);
ChannelMode parse_channel_mode(std::string_view text);

/// Raised for malformed inputs: out-of-range ids, invalid trust parameters,
/// infeasible prediction requests.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- rational helpers ------------------------------------------------------

std::int64_t floor_of(const Rational& r);
std::int64_t ceil_of(const Rational& r);

/// Parses "0.8", "4/5", "1" into an exact rational.
Rational parse_rational(std::string_view text);

/// Decimal form when the denominator divides a power of ten, "p/q" otherwise.
std::string format_rational(const Rational& r);

/// Integer range ⟦lo, hi⟧ over real endpoints: {⌈lo⌉, ..., ⌊hi⌋}.
struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  static IntRange of(const Rational& lo, const Rational& hi) {
    return IntRange{ceil_of(lo), floor_of(hi)};
  }
  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  bool empty() const { return lo > hi; }
};

// --- node sets ------------------------------------------------------------

/// Sorted set of node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<int> ids);
  explicit NodeSet(std::vector<NodeId> ids);

  static NodeSet range(int first, int last);  // ⟦first, last⟧, empty if first > last

  bool contains(NodeId id) const;
  bool insert(NodeId id);
  bool erase(NodeId id);
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::vector<NodeId>& ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  NodeSet minus(const NodeSet& other) const;
  NodeSet unite(const NodeSet& other) const;
  NodeSet intersect(const NodeSet& other) const;

  bool subset_of_range(int n) const;

  bool operator==(const NodeSet&) const = default;

 private:
  std::vector<NodeId> ids_;
};

std::string to_string(const NodeSet& set);

// --- domain types ---------------------------------------------------------

/// Global prediction: the set of nodes claimed honest.
struct Prediction {
  NodeSet members;
  bool operator==(const Prediction&) const = default;
};

/// Per-node predictions; entry i-1 belongs to node i.
struct LocalPrediction {
  std::vector<NodeSet> per_node;

  const NodeSet& of(NodeId id) const { return per_node.at(static_cast<std::size_t>(id.value - 1)); }
  bool operator==(const LocalPrediction&) const = default;
};

/// Trust parameter alpha, validated against the channel mode's admissible range.
class TrustParam {
 public:
  TrustParam(Rational alpha, ChannelMode mode);

  const Rational& value() const { return alpha_; }
  ChannelMode mode() const { return mode_; }

  static Rational lower_bound(ChannelMode mode);

 private:
  Rational alpha_;
  ChannelMode mode_;
};

struct ErrorBreakdown {
  int eta_F = 0;  // faulty nodes predicted honest, |P \ H|
  int eta_H = 0;  // honest nodes missing from P, |H \ P|
  int eta = 0;

  bool operator==(const ErrorBreakdown&) const = default;
};

struct Configuration {
  int n = 0;
  NodeSet faulty;
  std::map<NodeId, Bit> inputs;  // honest nodes only

  NodeSet honest() const;
  int f() const { return static_cast<int>(faulty.size()); }
  bool is_faulty(NodeId id) const { return faulty.contains(id); }

  /// Throws DomainError when ids are out of range or honest inputs are missing.
  void validate() const;
};

ErrorBreakdown compute_error(const Configuration& config, const Prediction& pred);
std::int64_t compute_local_error(const Configuration& config, const LocalPrediction& pred);

// --- theoretical curves ---------------------------------------------------

struct Impossibility {
  std::int64_t value = 0;
  bool conditional = false;  // only binding if the algorithm matches the previous piece
  bool operator==(const Impossibility&) const = default;
};

std::int64_t consistency_bound(ChannelMode mode, const Rational& alpha, int n);
std::int64_t robustness_bound(ChannelMode mode, const Rational& alpha, int n);

/// Guaranteed resilience of the prediction-augmented wrapper at error eta.
///
/// Piecewise curve; where ranges of two pieces meet, the larger piece wins.
/// The robustness guarantee holds for every prediction, so it also acts as a
/// floor. The value is floored after the max.
std::int64_t theoretical_smoothness(ChannelMode mode, const Rational& alpha, int n, int eta);

/// Impossibility curve: no alpha-consistent algorithm tolerates this many faults
/// at error eta. Absent outside the ranges where a construction exists.
std::optional<Impossibility> theoretical_impossibility(ChannelMode mode, const Rational& alpha,
                                                       int n, int eta);

enum class CurveKind : std::uint8_t { TheoreticalS, TheoreticalSbar, Empirical };

struct CurvePoint {
  int eta = 0;
  std::optional<std::int64_t> value;
  bool conditional = false;
  int trials = 0;
};

struct ResilienceCurve {
  ChannelMode mode = ChannelMode::NonAuth;
  CurveKind kind = CurveKind::TheoreticalS;
  Rational alpha;
  int n = 0;
  std::vector<CurvePoint> points;
};

ResilienceCurve smoothness_curve(ChannelMode mode, const Rational& alpha, int n);
ResilienceCurve impossibility_curve(ChannelMode mode, const Rational& alpha, int n);

/// CSV: mode,alpha,n,eta,s,sbar,sbar_conditional_flag
std::string curves_csv(ChannelMode mode, const Rational& alpha, int n);

}  // namespace bapred

template <>
struct std::hash<bapred::NodeId> {
  std::size_t operator()(const bapred::NodeId& id) const noexcept {
    return std::hash<std::int32_t>{}(id.value);
  }
};
