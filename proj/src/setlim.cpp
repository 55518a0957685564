#include "matool/setlim.hpp"

#include "matool/error.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/core.h>
#include <limits>
#include <optional>
#include <random>

namespace matool::setlim {

ExtReal ExtReal::shifted(const Rational& d) const {
  if (!is_finite())
    return *this;
  return ExtReal(value_ + d);
}

double ExtReal::to_double() const {
  switch (kind_) {
  case Kind::neg_inf:
    return -std::numeric_limits<double>::infinity();
  case Kind::pos_inf:
    return std::numeric_limits<double>::infinity();
  default:
    return value_.convert_to<double>();
  }
}

std::string ExtReal::to_string() const {
  switch (kind_) {
  case Kind::neg_inf:
    return "-inf";
  case Kind::pos_inf:
    return "+inf";
  default:
    return value_.str();
  }
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ != b.kind_)
    return false;
  return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ != b.kind_)
    return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  if (!a.is_finite() || a.value_ == b.value_)
    return std::strong_ordering::equal;
  return a.value_ < b.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

boost::multiprecision::cpp_int parse_int(std::string_view s, std::string_view whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw InvalidArgument(fmt::format("not a rational number: '{}'", whole));
  return boost::multiprecision::cpp_int(std::string(s));
}

std::vector<Interval> normalized(std::vector<Interval> parts) {
  std::vector<Interval> out;
  for (auto& p : parts)
    if (p.lo <= p.hi)
      out.push_back(std::move(p));
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (auto& p : out) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      if (p.hi > merged.back().hi)
        merged.back().hi = p.hi;
    } else {
      merged.push_back(std::move(p));
    }
  }
  return merged;
}

} // namespace

Rational parse_rational(std::string_view text) {
  const auto whole = text;
  text = trim(text);
  bool neg = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational r;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1), whole);
    if (den == 0)
      throw InvalidArgument(fmt::format("zero denominator in '{}'", whole));
    r = Rational(parse_int(text.substr(0, slash), whole), den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto ip = text.substr(0, dot);
    const auto fp = text.substr(dot + 1);
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i)
      scale *= 10;
    const auto a = ip.empty() ? boost::multiprecision::cpp_int(0) : parse_int(ip, whole);
    const auto b = fp.empty() ? boost::multiprecision::cpp_int(0) : parse_int(fp, whole);
    if (ip.empty() && fp.empty())
      throw InvalidArgument(fmt::format("not a rational number: '{}'", whole));
    r = Rational(a * scale + b, scale);
  } else {
    r = Rational(parse_int(text, whole));
  }
  return neg ? Rational(-r) : r;
}

ExtReal parse_ext(std::string_view text) {
  const auto t = trim(text);
  if (t == "+inf" || t == "inf" || t == "+infinity" || t == "infinity")
    return ExtReal::pos_inf();
  if (t == "-inf" || t == "-infinity")
    return ExtReal::neg_inf();
  return ExtReal(parse_rational(t));
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(normalized(std::move(parts))) {}

IntervalSet IntervalSet::interval(ExtReal lo, ExtReal hi) {
  return IntervalSet({Interval{std::move(lo), std::move(hi)}});
}

bool IntervalSet::contains(const ExtReal& x) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& p) { return p.lo <= x && x <= p.hi; });
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  auto parts = a.intervals();
  parts.insert(parts.end(), b.intervals().begin(), b.intervals().end());
  return IntervalSet(std::move(parts));
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  const auto& x = a.intervals();
  const auto& y = b.intervals();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const auto& lo = std::max(x[i].lo, y[j].lo);
    const auto& hi = std::min(x[i].hi, y[j].hi);
    if (lo <= hi)
      out.push_back({lo, hi});
    if (x[i].hi < y[j].hi)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet dilate(const IntervalSet& a, const Rational& eps) {
  if (eps < 0)
    throw InvalidArgument("dilation radius must be non-negative");
  std::vector<Interval> out;
  for (const auto& p : a.intervals())
    out.push_back({p.lo.shifted(-eps), p.hi.shifted(eps)});
  return IntervalSet(std::move(out));
}

IntervalSet erode(const IntervalSet& a, const Rational& eps) {
  if (eps < 0)
    throw InvalidArgument("erosion radius must be non-negative");
  std::vector<Interval> out;
  for (const auto& p : a.intervals()) {
    Interval q{p.lo.shifted(eps), p.hi.shifted(-eps)};
    if (q.lo <= q.hi)
      out.push_back(std::move(q));
  }
  return IntervalSet(std::move(out));
}

bool subset(const IntervalSet& a, const IntervalSet& b) {
  return intersect(a, b) == a;
}

std::vector<IntervalSet> components(const IntervalSet& a) {
  std::vector<IntervalSet> out;
  for (const auto& p : a.intervals())
    out.push_back(IntervalSet::interval(p.lo, p.hi));
  return out;
}

bool is_connected(const IntervalSet& a) {
  return a.intervals().size() <= 1;
}

bool is_unbounded(const IntervalSet& a) {
  return std::any_of(a.intervals().begin(), a.intervals().end(),
                     [](const Interval& p) { return !p.lo.is_finite() || !p.hi.is_finite(); });
}

std::string to_string(const IntervalSet& a) {
  if (a.empty())
    return "{}";
  std::string out;
  for (const auto& p : a.intervals()) {
    if (!out.empty())
      out += " u ";
    out += fmt::format("[{}, {}]", p.lo.to_string(), p.hi.to_string());
  }
  return out;
}

IntervalSet parse_set(std::string_view text) {
  auto t = trim(text);
  if (t == "{}" || t.empty())
    return {};
  std::vector<Interval> parts;
  while (!t.empty()) {
    if (t.front() != '[')
      throw InvalidArgument(fmt::format("malformed interval set: '{}'", text));
    const auto close = t.find(']');
    const auto comma = t.find(',');
    if (close == std::string_view::npos || comma == std::string_view::npos || comma > close)
      throw InvalidArgument(fmt::format("malformed interval set: '{}'", text));
    const auto lo = parse_ext(t.substr(1, comma - 1));
    const auto hi = parse_ext(t.substr(comma + 1, close - comma - 1));
    if (hi < lo)
      throw InvalidArgument(fmt::format("interval with lo > hi in '{}'", text));
    parts.push_back({lo, hi});
    t = trim(t.substr(close + 1));
    if (t.empty())
      break;
    if (t.front() == 'u' || t.front() == 'U')
      t = trim(t.substr(1));
    else if (t.substr(0, 3) == "∪")
      t = trim(t.substr(3));
    else
      throw InvalidArgument(fmt::format("expected 'u' between intervals in '{}'", text));
  }
  return IntervalSet(std::move(parts));
}

void SetSequence::validate() const {
  if (window < 1)
    throw InvalidArgument("window length must be at least 1");
  if (!(epsilon > 0))
    throw InvalidArgument("epsilon must be positive");
  if (terms.size() < 2 * static_cast<std::size_t>(window))
    throw InvalidArgument(fmt::format("need at least 2W = {} terms, got {}", 2 * window, terms.size()));
}

namespace {

std::vector<IntervalSet> dilated_terms(const SetSequence& seq) {
  std::vector<IntervalSet> d;
  d.reserve(seq.terms.size());
  for (const auto& t : seq.terms)
    d.push_back(dilate(t, seq.epsilon));
  return d;
}

} // namespace

IntervalSet limsup_sets(const SetSequence& seq) {
  seq.validate();
  const auto d = dilated_terms(seq);
  const std::size_t M = d.size(), W = static_cast<std::size_t>(seq.window);
  std::optional<IntervalSet> acc;
  for (std::size_t m = M - 2 * W; m + W < M; ++m) {
    IntervalSet u;
    for (std::size_t n = m; n <= m + W; ++n)
      u = unite(u, d[n]);
    acc = acc ? intersect(*acc, u) : u;
  }
  return erode(*acc, seq.epsilon);
}

IntervalSet liminf_sets(const SetSequence& seq) {
  seq.validate();
  const auto d = dilated_terms(seq);
  const std::size_t M = d.size(), W = static_cast<std::size_t>(seq.window);
  IntervalSet acc;
  for (std::size_t m = M - 2 * W; m + W < M; ++m) {
    IntervalSet x = d[m];
    for (std::size_t n = m + 1; n < M; ++n)
      x = intersect(x, d[n]);
    acc = unite(acc, x);
  }
  return erode(acc, seq.epsilon);
}

SetLimits set_limits(const SetSequence& seq) {
  return {limsup_sets(seq), liminf_sets(seq)};
}

ExtReal EndpointFamily::at(long long n) const {
  if (n < 1)
    throw InvalidArgument("term index starts at 1");
  return limit.shifted(Rational(coeff / n));
}

IntervalSet TermFamily::at(long long n) const {
  std::vector<Interval> out;
  for (const auto& p : parts)
    out.push_back({p.lo.at(n), p.hi.at(n)});
  return IntervalSet(std::move(out));
}

IntervalSet TermFamily::limit() const {
  std::vector<Interval> out;
  for (const auto& p : parts)
    out.push_back({p.lo.limit, p.hi.limit});
  return IntervalSet(std::move(out));
}

IntervalSet SequenceDescription::term(long long n) const {
  if (n < 1)
    throw InvalidArgument("term index starts at 1");
  const auto k = static_cast<std::size_t>(n);
  if (k <= prefix.size())
    return prefix[k - 1];
  if (cycle.empty())
    throw InvalidArgument(fmt::format("sequence '{}' has no term {}", name, n));
  return cycle[(k - prefix.size() - 1) % cycle.size()].at(n);
}

std::vector<IntervalSet> SequenceDescription::terms(std::size_t M) const {
  std::vector<IntervalSet> out;
  out.reserve(M);
  for (std::size_t n = 1; n <= M; ++n)
    out.push_back(term(static_cast<long long>(n)));
  return out;
}

SequenceDescription SequenceDescription::limit_description() const {
  SequenceDescription out{name + " (limits)", prefix, {}};
  for (const auto& f : cycle) {
    TermFamily g;
    for (const auto& p : f.parts)
      g.parts.push_back({{p.lo.limit, 0}, {p.hi.limit, 0}});
    out.cycle.push_back(std::move(g));
  }
  return out;
}

SequenceDescription example21() {
  const EndpointFamily zero{0, 0}, three{3, 0}, inf{ExtReal::pos_inf(), 0};
  SequenceDescription d;
  d.name = "example21";
  d.prefix.push_back(IntervalSet::interval(2, ExtReal::pos_inf()));
  // n = 2m: [0, 1 + 1/n] u [3, +inf]; n = 2m+1: [0, 2 - 1/n] u [3, +inf]
  d.cycle.push_back(TermFamily{{{zero, {1, 1}}, {three, inf}}});
  d.cycle.push_back(TermFamily{{{zero, {2, -1}}, {three, inf}}});
  return d;
}

SequenceDescription connected_example() {
  SequenceDescription d;
  d.name = "connected";
  const EndpointFamily inf{ExtReal::pos_inf(), 0};
  d.cycle.push_back(TermFamily{{{{0, -1}, inf}}});
  d.cycle.push_back(TermFamily{{{{-1, 1}, inf}}});
  return d;
}

DescribedLimits describe_limits(const SequenceDescription& desc, const Rational& eps, int window, std::size_t M) {
  DescribedLimits out;
  SetSequence lit{desc.terms(M), eps, window};
  out.literal = set_limits(lit);
  out.literal_terms = M;
  const auto lim = desc.limit_description();
  const std::size_t W = static_cast<std::size_t>(window);
  std::size_t Me = std::max(M, lim.preperiod() + 2 * W + 2 * std::max<std::size_t>(lim.period(), 1));
  SetSequence ex{lim.terms(Me), eps, window};
  out.exact = set_limits(ex);
  out.exact_terms = Me;
  return out;
}

SetSequence random_sequence(std::uint64_t seed, std::size_t M, const Rational& eps, int window) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grid(-32, 32), pieces(0, 3), coin(0, 9);
  SetSequence seq;
  seq.epsilon = eps;
  seq.window = window;
  for (std::size_t n = 0; n < M; ++n) {
    std::vector<Interval> parts;
    const int k = pieces(rng);
    for (int j = 0; j < k; ++j) {
      int a = grid(rng), b = grid(rng);
      if (a > b)
        std::swap(a, b);
      ExtReal lo = Rational(a, 8), hi = Rational(b, 8);
      if (coin(rng) == 0)
        lo = ExtReal::neg_inf();
      if (coin(rng) == 0)
        hi = ExtReal::pos_inf();
      parts.push_back({lo, hi});
    }
    seq.terms.emplace_back(std::move(parts));
  }
  return seq;
}

} // namespace matool::setlim
