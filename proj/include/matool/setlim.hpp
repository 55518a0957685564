#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace matool::setlim {

using Rational = boost::multiprecision::cpp_rational;

/// Point of the two-point extended line. Infinite values are tokens, not floats.
class ExtReal {
public:
  enum class Kind { neg_inf, finite, pos_inf };

  ExtReal() = default;
  ExtReal(Rational v) : value_(std::move(v)) {}
  ExtReal(long long v) : value_(v) {}
  ExtReal(int v) : value_(v) {}

  static ExtReal neg_inf() { return ExtReal(Kind::neg_inf); }
  static ExtReal pos_inf() { return ExtReal(Kind::pos_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  const Rational& value() const { return value_; }

  /// Infinite values absorb the shift.
  ExtReal shifted(const Rational& d) const;
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b);

private:
  explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::finite;
  Rational value_ = 0;
};

/// "3", "-1/2", "0.05", "+inf", "inf", "-inf".
Rational parse_rational(std::string_view text);
ExtReal parse_ext(std::string_view text);

struct Interval {
  ExtReal lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals kept sorted, disjoint and with positive gaps.
class IntervalSet {
public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);
  static IntervalSet interval(ExtReal lo, ExtReal hi);

  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(const ExtReal& x) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
  std::vector<Interval> parts_;
};

IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet dilate(const IntervalSet& a, const Rational& eps);
/// Morphological erosion; each interval shrinks by eps at finite ends.
IntervalSet erode(const IntervalSet& a, const Rational& eps);
bool subset(const IntervalSet& a, const IntervalSet& b);
std::vector<IntervalSet> components(const IntervalSet& a);
bool is_connected(const IntervalSet& a);
bool is_unbounded(const IntervalSet& a);
std::string to_string(const IntervalSet& a);
/// Parses "[0,1] u [3,+inf]"; "{}" is the empty set.
IntervalSet parse_set(std::string_view text);

struct SetSequence {
  std::vector<IntervalSet> terms;
  Rational epsilon{1, 20};
  int window = 4;

  void validate() const;
};

/// Tail windows [m, m+W] with m running over the last W+1 starts, 1-based.
IntervalSet limsup_sets(const SetSequence& seq);
IntervalSet liminf_sets(const SetSequence& seq);

struct SetLimits {
  IntervalSet limsup, liminf;
};
SetLimits set_limits(const SetSequence& seq);

/// Endpoint c + d/n; d is ignored for infinite c.
struct EndpointFamily {
  ExtReal limit;
  Rational coeff = 0;
  ExtReal at(long long n) const;
};

struct IntervalFamily {
  EndpointFamily lo, hi;
};

struct TermFamily {
  std::vector<IntervalFamily> parts;
  IntervalSet at(long long n) const;
  IntervalSet limit() const;
};

/// Literal prefix followed by a cycle of families evaluated at the term index n.
struct SequenceDescription {
  std::string name;
  std::vector<IntervalSet> prefix;
  std::vector<TermFamily> cycle;

  IntervalSet term(long long n) const;
  std::vector<IntervalSet> terms(std::size_t M) const;
  /// Families replaced by their limit sets; eventually periodic.
  SequenceDescription limit_description() const;
  std::size_t preperiod() const { return prefix.size(); }
  std::size_t period() const { return cycle.size(); }
};

SequenceDescription example21();
/// Connected unbounded terms sharing the point 0.
SequenceDescription connected_example();

struct DescribedLimits {
  SetLimits literal;   // first M terms as given
  SetLimits exact;     // limit description over a horizon past its preperiod
  std::size_t literal_terms = 0;
  std::size_t exact_terms = 0;
};

/// M defaults to 40.
DescribedLimits describe_limits(const SequenceDescription& desc, const Rational& eps, int window,
                                std::size_t M = 40);

/// Random literal sequence with rational endpoints on a 1/8 grid in [-4, 4] and occasional infinite ends.
SetSequence random_sequence(std::uint64_t seed, std::size_t M, const Rational& eps, int window);

} // namespace matool::setlim
