#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "npkit/error.hpp"

// Surface taxonomy: continuous characterization of a contact surface along
// size, curvature, friction and compliance; discretization into classes;
// canonical enumeration; compact class notation; functional-equivalence
// reduction.

namespace npkit {

// Continuous characterization of one contact surface. Geometry is measured
// along two orthogonal axes; the axis pair is unordered.
struct SurfaceProfile {
  double size_a = 0.0;       // mm
  double size_b = 0.0;       // mm
  double curvature_a = 0.0;  // 1/mm, 0 = flat
  double curvature_b = 0.0;  // 1/mm
  double friction = 0.0;     // typical coefficient of friction
  double compliance = 0.0;   // mm/N

  bool valid() const {
    return size_a > 0 && size_b > 0 && curvature_a >= 0 && curvature_b >= 0 &&
           friction >= 0 && compliance >= 0;
  }
};

// One labeled bin. `upper` is the inclusive upper bound; the last bin of a
// dimension is unbounded (upper = +inf).
struct Bin {
  std::string label;
  double upper = std::numeric_limits<double>::infinity();
};

// Labeled bin boundaries for the four dimensions. Bins are half-open: a value
// v belongs to the first bin with v <= upper; the last bin catches the rest.
struct DiscretizationScheme {
  std::vector<Bin> size_bins;
  std::vector<Bin> curvature_bins;
  std::vector<Bin> friction_bins;
  std::vector<Bin> compliance_bins;

  // Throws SyntaxError if any bin list is empty, bounds are not strictly
  // increasing, or labels repeat within a dimension.
  void validate() const;

  // S/M/L sizes, flat/curved, low/high friction, low/high compliance.
  // Thresholds: size 20/60 mm, curvature 0.02 1/mm, friction 0.5,
  // compliance 0.1 mm/N.
  static const DiscretizationScheme& standard();

  // True when the labels match the compact-notation alphabet
  // (S,M,L / dash,cap / c,C / f,F); thresholds are irrelevant to notation.
  bool compact_notation() const;

  bool operator==(const DiscretizationScheme&) const = default;
};

inline bool operator==(const Bin& a, const Bin& b) {
  return a.label == b.label && a.upper == b.upper;
}

namespace detail {

inline void validate_bins(const std::vector<Bin>& bins, const char* dim) {
  if (bins.empty())
    throw Error(errc::syntax, std::string("scheme: empty bin list for ") + dim);
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    if (!(bins[i].upper > prev))
      throw Error(errc::syntax,
                  std::string("scheme: bounds not strictly increasing in ") + dim);
    prev = bins[i].upper;
  }
  for (std::size_t i = 0; i < bins.size(); ++i)
    for (std::size_t j = i + 1; j < bins.size(); ++j)
      if (bins[i].label == bins[j].label)
        throw Error(errc::syntax,
                    std::string("scheme: duplicate label '") + bins[i].label +
                        "' in " + dim);
}

// First bin whose upper bound is >= value; last bin is unbounded.
inline int bin_index(double value, const std::vector<Bin>& bins) {
  for (std::size_t i = 0; i + 1 < bins.size(); ++i)
    if (value <= bins[i].upper) return static_cast<int>(i);
  return static_cast<int>(bins.size()) - 1;
}

}  // namespace detail

inline void DiscretizationScheme::validate() const {
  detail::validate_bins(size_bins, "size");
  detail::validate_bins(curvature_bins, "curvature");
  detail::validate_bins(friction_bins, "friction");
  detail::validate_bins(compliance_bins, "compliance");
}

inline const DiscretizationScheme& DiscretizationScheme::standard() {
  static const DiscretizationScheme scheme{
      {{"S", 20.0}, {"M", 60.0}, {"L"}},
      {{"–", 0.02}, {"∩"}},
      {{"c", 0.5}, {"C"}},
      {{"f", 0.1}, {"F"}},
  };
  return scheme;
}

inline bool DiscretizationScheme::compact_notation() const {
  auto labels = [](const std::vector<Bin>& bins) {
    std::vector<std::string> out;
    for (const auto& b : bins) out.push_back(b.label);
    return out;
  };
  return labels(size_bins) == std::vector<std::string>{"S", "M", "L"} &&
         labels(curvature_bins) ==
             std::vector<std::string>{"–", "∩"} &&
         labels(friction_bins) == std::vector<std::string>{"c", "C"} &&
         labels(compliance_bins) == std::vector<std::string>{"f", "F"};
}

// One geometric axis of a discretized surface, by bin rank.
struct AxisDescriptor {
  int size_rank = 0;
  int curvature_rank = 0;

  bool operator==(const AxisDescriptor&) const = default;
};

// Canonical axis order: larger size first; on equal size, flat before curved.
inline bool axis_precedes(const AxisDescriptor& a, const AxisDescriptor& b) {
  if (a.size_rank != b.size_rank) return a.size_rank > b.size_rank;
  return a.curvature_rank < b.curvature_rank;
}

// A discrete taxonomy class. Always stored canonically: axis_major precedes
// (or equals) axis_minor, so codes built from the same unordered axis pair
// compare equal.
struct ClassCode {
  AxisDescriptor axis_major;
  AxisDescriptor axis_minor;
  int friction_rank = 0;
  int compliance_rank = 0;

  ClassCode() = default;
  ClassCode(AxisDescriptor a, AxisDescriptor b, int friction, int compliance)
      : axis_major(a), axis_minor(b), friction_rank(friction),
        compliance_rank(compliance) {
    if (axis_precedes(axis_minor, axis_major))
      std::swap(axis_major, axis_minor);
  }

  bool operator==(const ClassCode&) const = default;

  // Ordering used for enumeration and for picking equivalence-group
  // representatives: (axis_major, axis_minor, friction, compliance), with
  // axes compared in canonical precedence order.
  auto sort_key() const {
    return std::tuple(-axis_major.size_rank, axis_major.curvature_rank,
                      -axis_minor.size_rank, axis_minor.curvature_rank,
                      friction_rank, compliance_rank);
  }
};

inline bool operator<(const ClassCode& a, const ClassCode& b) {
  return a.sort_key() < b.sort_key();
}

// Maps the six continuous values onto a canonical class.
inline ClassCode discretize(const SurfaceProfile& profile,
                            const DiscretizationScheme& scheme) {
  AxisDescriptor a{detail::bin_index(profile.size_a, scheme.size_bins),
                   detail::bin_index(profile.curvature_a, scheme.curvature_bins)};
  AxisDescriptor b{detail::bin_index(profile.size_b, scheme.size_bins),
                   detail::bin_index(profile.curvature_b, scheme.curvature_bins)};
  return ClassCode(a, b,
                   detail::bin_index(profile.friction, scheme.friction_bins),
                   detail::bin_index(profile.compliance, scheme.compliance_bins));
}

// All canonical classes of a scheme, each exactly once, in sort-key order.
// Count = g(g+1)/2 * friction_bins * compliance_bins with
// g = size_bins * curvature_bins. With ordered_axes (test use), axis pairs
// are kept ordered and the count is the full g^2 * f * k product.
inline std::vector<ClassCode> enumerate_classes(
    const DiscretizationScheme& scheme, bool ordered_axes = false) {
  std::vector<AxisDescriptor> axes;
  for (int s = 0; s < static_cast<int>(scheme.size_bins.size()); ++s)
    for (int c = 0; c < static_cast<int>(scheme.curvature_bins.size()); ++c)
      axes.push_back({s, c});
  std::sort(axes.begin(), axes.end(), axis_precedes);

  std::vector<ClassCode> out;
  const int nf = static_cast<int>(scheme.friction_bins.size());
  const int nk = static_cast<int>(scheme.compliance_bins.size());
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = ordered_axes ? 0 : i; j < axes.size(); ++j)
      for (int f = 0; f < nf; ++f)
        for (int k = 0; k < nk; ++k) {
          ClassCode code;
          code.axis_major = axes[i];
          code.axis_minor = axes[j];
          if (!ordered_axes && axis_precedes(code.axis_minor, code.axis_major))
            std::swap(code.axis_major, code.axis_minor);
          code.friction_rank = f;
          code.compliance_rank = k;
          out.push_back(code);
        }
  if (!ordered_axes) std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Splits UTF-8 text into glyphs (one code point each).
inline std::vector<std::string> glyphs(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    if (i + len > text.size()) len = text.size() - i;
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

inline int size_rank_of(const std::string& g) {
  if (g == "S") return 0;
  if (g == "M") return 1;
  if (g == "L") return 2;
  return -1;
}

inline int curvature_rank_of(const std::string& g) {
  if (g == "–" || g == "-") return 0;  // flat; ASCII alias '-'
  if (g == "∩" || g == "n") return 1;  // curved; ASCII alias 'n'
  return -1;
}

}  // namespace detail

// Parses compact notation (e.g. "L–M∩cf"). ASCII aliases '-' and
// 'n' are accepted for the curvature glyphs. Input axis order is irrelevant;
// the result is canonical. Only defined for compact-notation schemes.
inline ClassCode parse_class(std::string_view text,
                             const DiscretizationScheme& scheme) {
  if (!scheme.compact_notation())
    throw Error(errc::scheme_mismatch,
                "compact class notation is only defined for the default scheme");
  auto gs = detail::glyphs(text);
  if (gs.size() != 6)
    throw Error(errc::malformed_code,
                "class code '" + std::string(text) +
                    "': expected 6 symbols, got " + std::to_string(gs.size()));
  auto bad = [&](std::size_t pos) {
    return Error(errc::malformed_code,
                 "class code '" + std::string(text) + "': unexpected symbol '" +
                     gs[pos] + "' at position " + std::to_string(pos + 1));
  };
  AxisDescriptor a{detail::size_rank_of(gs[0]), detail::curvature_rank_of(gs[1])};
  AxisDescriptor b{detail::size_rank_of(gs[2]), detail::curvature_rank_of(gs[3])};
  if (a.size_rank < 0) throw bad(0);
  if (a.curvature_rank < 0) throw bad(1);
  if (b.size_rank < 0) throw bad(2);
  if (b.curvature_rank < 0) throw bad(3);
  int friction, compliance;
  if (gs[4] == "c") friction = 0;
  else if (gs[4] == "C") friction = 1;
  else throw bad(4);
  if (gs[5] == "f") compliance = 0;
  else if (gs[5] == "F") compliance = 1;
  else throw bad(5);
  return ClassCode(a, b, friction, compliance);
}

// Canonical compact string for a default-scheme class. With ascii,
// "–" -> "-" and "∩" -> "n". Inverse of parse_class.
inline std::string format_class(const ClassCode& code,
                                const DiscretizationScheme& scheme,
                                bool ascii = false) {
  if (!scheme.compact_notation())
    throw Error(errc::scheme_mismatch,
                "compact class notation is only defined for the default scheme");
  static const char* kSizes[] = {"S", "M", "L"};
  auto curv = [&](int rank) {
    if (rank == 0) return ascii ? "-" : "–";
    return ascii ? "n" : "∩";
  };
  std::string out;
  out += kSizes[code.axis_major.size_rank];
  out += curv(code.axis_major.curvature_rank);
  out += kSizes[code.axis_minor.size_rank];
  out += curv(code.axis_minor.curvature_rank);
  out += code.friction_rank ? "C" : "c";
  out += code.compliance_rank ? "F" : "f";
  return out;
}

// Verbose form, valid for any scheme.
inline std::string describe_class(const ClassCode& code,
                                  const DiscretizationScheme& scheme) {
  std::ostringstream out;
  out << "size=" << scheme.size_bins[code.axis_major.size_rank].label << ","
      << scheme.size_bins[code.axis_minor.size_rank].label
      << ";curv=" << scheme.curvature_bins[code.axis_major.curvature_rank].label
      << "," << scheme.curvature_bins[code.axis_minor.curvature_rank].label
      << ";friction=" << scheme.friction_bins[code.friction_rank].label
      << ";compliance=" << scheme.compliance_bins[code.compliance_rank].label;
  return out.str();
}

// Declared functional equivalences between classes. The induced relation is
// the reflexive-symmetric-transitive closure of the pairs; a group's
// representative is its least member under ClassCode ordering.
struct EquivalenceRules {
  std::vector<std::pair<ClassCode, ClassCode>> pairs;

  bool empty() const { return pairs.empty(); }

  // Representative of the class's equivalence group.
  ClassCode representative(const ClassCode& code) const {
    if (pairs.empty()) return code;
    std::map<ClassCode, ClassCode> parent;
    auto find = [&](ClassCode x) {
      while (true) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        x = it->second;
      }
    };
    auto unite = [&](const ClassCode& a, const ClassCode& b) {
      ClassCode ra = find(a), rb = find(b);
      if (ra == rb) return;
      if (rb < ra) std::swap(ra, rb);
      parent[rb] = ra;
      parent.try_emplace(ra, ra);
    };
    for (const auto& [a, b] : pairs) unite(a, b);
    return find(code);
  }

  bool equivalent(const ClassCode& a, const ClassCode& b) const {
    return a == b || representative(a) == representative(b);
  }
};

// One representative per equivalence group, keeping first-occurrence order.
// Idempotent; with empty rules this is deduplication.
inline std::vector<ClassCode> reduce(const std::vector<ClassCode>& classes,
                                     const EquivalenceRules& rules) {
  std::vector<ClassCode> out;
  std::vector<ClassCode> seen;
  for (const auto& c : classes) {
    ClassCode rep = rules.representative(c);
    if (std::find(seen.begin(), seen.end(), rep) == seen.end()) {
      seen.push_back(rep);
      out.push_back(rep);
    }
  }
  return out;
}

// --- scheme definition files -------------------------------------------------
//
// Line-oriented, one dimension per line, '#' comments:
//
//   size: S<20, M<60, L
//   curvature: –<0.02, ∩
//   friction: c<0.5, C
//   compliance: f<0.1, F
//
// Each entry is `label<upper_bound` except the last, which is a bare label
// (unbounded). All four dimensions are required.

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<Bin> parse_bin_list(const std::string& body, int line_no) {
  std::vector<Bin> bins;
  std::stringstream ss(body);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    if (entry.empty())
      throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                    ": empty bin entry");
    auto lt = entry.find('<');
    if (lt == std::string::npos) {
      bins.push_back({entry});
    } else {
      std::string label = trim(entry.substr(0, lt));
      std::string bound = trim(entry.substr(lt + 1));
      if (label.empty() || bound.empty())
        throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                      ": malformed bin entry '" + entry + "'");
      try {
        std::size_t used = 0;
        double upper = std::stod(bound, &used);
        if (used != bound.size()) throw std::invalid_argument(bound);
        bins.push_back({label, upper});
      } catch (const std::exception&) {
        throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                      ": bad bound '" + bound + "'");
      }
    }
  }
  return bins;
}

}  // namespace detail

inline DiscretizationScheme parse_scheme(std::string_view text) {
  DiscretizationScheme scheme;
  bool have[4] = {false, false, false, false};
  std::stringstream ss{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                    ": expected 'dimension: bins'");
    std::string dim = detail::trim(line.substr(0, colon));
    std::string body = line.substr(colon + 1);
    auto assign = [&](std::vector<Bin>& slot, int idx) {
      if (have[idx])
        throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                      ": duplicate dimension '" + dim + "'");
      slot = detail::parse_bin_list(body, line_no);
      have[idx] = true;
    };
    if (dim == "size") assign(scheme.size_bins, 0);
    else if (dim == "curvature") assign(scheme.curvature_bins, 1);
    else if (dim == "friction") assign(scheme.friction_bins, 2);
    else if (dim == "compliance") assign(scheme.compliance_bins, 3);
    else
      throw Error(errc::syntax, "scheme line " + std::to_string(line_no) +
                                    ": unknown dimension '" + dim + "'");
  }
  if (!(have[0] && have[1] && have[2] && have[3]))
    throw Error(errc::syntax, "scheme: all four dimensions are required");
  scheme.validate();
  return scheme;
}

inline std::string serialize_scheme(const DiscretizationScheme& scheme) {
  auto emit = [](std::ostringstream& out, const char* dim,
                 const std::vector<Bin>& bins) {
    out << dim << ": ";
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (i) out << ", ";
      out << bins[i].label;
      if (i + 1 < bins.size()) out << "<" << bins[i].upper;
    }
    out << "\n";
  };
  std::ostringstream out;
  emit(out, "size", scheme.size_bins);
  emit(out, "curvature", scheme.curvature_bins);
  emit(out, "friction", scheme.friction_bins);
  emit(out, "compliance", scheme.compliance_bins);
  return out.str();
}

// Equivalence rules file: one pair of class codes per line, '#' comments.
inline EquivalenceRules parse_rules(std::string_view text,
                                    const DiscretizationScheme& scheme) {
  EquivalenceRules rules;
  std::stringstream ss{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra))
      throw Error(errc::syntax, "rules line " + std::to_string(line_no) +
                                    ": expected exactly two class codes");
    rules.pairs.emplace_back(parse_class(a, scheme), parse_class(b, scheme));
  }
  return rules;
}

}  // namespace npkit
