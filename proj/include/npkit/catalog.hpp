#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "npkit/error.hpp"
#include "npkit/taxonomy.hpp"

// Tool-insert catalogs and task specifications, with their line-oriented file
// formats (.npt and .task).

namespace npkit {

// One interaction surface of a tool insert. Feature tags capture capabilities
// the taxonomy does not encode (e.g. "magnetic", "adhesive").
struct ToolSurface {
  std::string name;
  ClassCode cls;
  std::set<std::string> features;

  bool operator==(const ToolSurface&) const = default;
};

struct ToolInsert {
  std::string name;
  std::vector<ToolSurface> surfaces;  // at least one
  double mass = 0.0;                  // g
  std::array<double, 3> bounding_dims{};  // mm
  bool non_paper_class = false;  // class authored here, not printed in source data

  double volume() const {
    return bounding_dims[0] * bounding_dims[1] * bounding_dims[2];
  }

  bool operator==(const ToolInsert&) const = default;
};

struct Catalog {
  std::vector<ToolInsert> tools;

  const ToolInsert* find(std::string_view name) const {
    for (const auto& t : tools)
      if (t.name == name) return &t;
    return nullptr;
  }

  bool operator==(const Catalog&) const = default;
};

// A single non-prehensile step requirement.
struct TaskRequirement {
  ClassCode cls;
  std::set<std::string> required_features;
  bool allow_equivalents = true;

  bool operator==(const TaskRequirement&) const = default;
};

// One task step: either a non-prehensile requirement or a prehensile
// operation performed with the bare gripper.
struct TaskStep {
  std::optional<TaskRequirement> requirement;  // nullopt = prehensile

  bool prehensile() const { return !requirement.has_value(); }
  bool operator==(const TaskStep&) const = default;
};

struct TaskSpec {
  std::string name;
  std::vector<TaskStep> steps;  // at least one

  std::vector<TaskRequirement> requirements() const {
    std::vector<TaskRequirement> out;
    for (const auto& s : steps)
      if (s.requirement) out.push_back(*s.requirement);
    return out;
  }

  bool operator==(const TaskSpec&) const = default;
};

namespace detail {

inline bool valid_tag(std::string_view tag) {
  if (tag.empty()) return false;
  for (char c : tag)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

inline Error syntax_at(int line, const std::string& msg) {
  return Error(errc::syntax, "line " + std::to_string(line) + ": " + msg);
}

inline double parse_positive(const std::string& token, int line,
                             const char* what) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
  } catch (const std::exception&) {
    throw syntax_at(line, std::string("bad ") + what + " '" + token + "'");
  }
  if (!(v > 0))
    throw syntax_at(line, std::string(what) + " must be positive");
  return v;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

// Catalog file grammar: one tool per block, blocks separated by blank lines
// (or by the next `tool` header). '#' starts a comment.
//
//   tool magnetic_plate
//   mass 130
//   dims 60x60x12
//   surface face M–M–cf magnetic
//
// Optional `non_paper_class: true` marks tools whose class assignment was
// authored for this dataset rather than taken from source data.
inline Catalog parse_catalog(std::string_view text,
                             const DiscretizationScheme& scheme =
                                 DiscretizationScheme::standard()) {
  Catalog catalog;
  ToolInsert current;
  bool in_tool = false;
  bool have_mass = false, have_dims = false;
  int tool_line = 0;

  auto finish = [&](int line) {
    if (!in_tool) return;
    if (!have_mass)
      throw detail::syntax_at(tool_line, "tool '" + current.name + "' missing mass");
    if (!have_dims)
      throw detail::syntax_at(tool_line, "tool '" + current.name + "' missing dims");
    if (current.surfaces.empty())
      throw detail::syntax_at(tool_line,
                              "tool '" + current.name + "' has no surfaces");
    if (catalog.find(current.name))
      throw Error(errc::duplicate_name,
                  "line " + std::to_string(line) + ": duplicate tool '" +
                      current.name + "'");
    catalog.tools.push_back(std::move(current));
    current = {};
    in_tool = false;
    have_mass = have_dims = false;
  };

  std::stringstream ss{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) {
      finish(line_no);
      continue;
    }
    auto tokens = detail::split_ws(line);
    const std::string& key = tokens[0];
    if (key == "tool") {
      finish(line_no);
      if (tokens.size() != 2)
        throw detail::syntax_at(line_no, "expected 'tool <name>'");
      in_tool = true;
      tool_line = line_no;
      current.name = tokens[1];
    } else if (!in_tool) {
      throw detail::syntax_at(line_no, "'" + key + "' outside a tool block");
    } else if (key == "mass") {
      if (tokens.size() != 2)
        throw detail::syntax_at(line_no, "expected 'mass <grams>'");
      current.mass = detail::parse_positive(tokens[1], line_no, "mass");
      have_mass = true;
    } else if (key == "dims") {
      if (tokens.size() != 2)
        throw detail::syntax_at(line_no, "expected 'dims <x>x<y>x<z>'");
      std::stringstream ds(tokens[1]);
      std::string part;
      std::vector<double> dims;
      while (std::getline(ds, part, 'x'))
        dims.push_back(detail::parse_positive(part, line_no, "dimension"));
      if (dims.size() != 3)
        throw detail::syntax_at(line_no, "dims needs three values");
      current.bounding_dims = {dims[0], dims[1], dims[2]};
      have_dims = true;
    } else if (key == "non_paper_class:" || key == "non_paper_class") {
      if (tokens.size() != 2 || (tokens[1] != "true" && tokens[1] != "false"))
        throw detail::syntax_at(line_no, "expected 'non_paper_class: true|false'");
      current.non_paper_class = tokens[1] == "true";
    } else if (key == "surface") {
      if (tokens.size() < 3)
        throw detail::syntax_at(line_no,
                                "expected 'surface <name> <class> [features...]'");
      ToolSurface surface;
      surface.name = tokens[1];
      for (const auto& s : current.surfaces)
        if (s.name == surface.name)
          throw Error(errc::duplicate_name,
                      "line " + std::to_string(line_no) + ": duplicate surface '" +
                          surface.name + "' in tool '" + current.name + "'");
      surface.cls = parse_class(tokens[2], scheme);
      for (std::size_t i = 3; i < tokens.size(); ++i) {
        if (!detail::valid_tag(tokens[i]))
          throw detail::syntax_at(line_no, "bad feature tag '" + tokens[i] + "'");
        surface.features.insert(tokens[i]);
      }
      current.surfaces.push_back(std::move(surface));
    } else {
      throw detail::syntax_at(line_no, "unknown directive '" + key + "'");
    }
  }
  finish(line_no + 1);
  return catalog;
}

inline std::string serialize_catalog(const Catalog& catalog,
                                     const DiscretizationScheme& scheme =
                                         DiscretizationScheme::standard()) {
  std::ostringstream out;
  bool first = true;
  for (const auto& tool : catalog.tools) {
    if (!first) out << "\n";
    first = false;
    out << "tool " << tool.name << "\n";
    out << "mass " << tool.mass << "\n";
    out << "dims " << tool.bounding_dims[0] << "x" << tool.bounding_dims[1]
        << "x" << tool.bounding_dims[2] << "\n";
    if (tool.non_paper_class) out << "non_paper_class: true\n";
    for (const auto& surface : tool.surfaces) {
      out << "surface " << surface.name << " " << format_class(surface.cls, scheme);
      for (const auto& f : surface.features) out << " " << f;
      out << "\n";
    }
  }
  return out.str();
}

// Task file grammar: one step per line,
//   step <classcode> [features...] [exact]
//   step PREHENSILE
// Trailing `exact` disables equivalence matching for that step.
inline TaskSpec parse_task(std::string_view text,
                           const DiscretizationScheme& scheme =
                               DiscretizationScheme::standard()) {
  TaskSpec task;
  std::stringstream ss{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto tokens = detail::split_ws(line);
    if (tokens[0] == "task") {
      if (tokens.size() != 2)
        throw detail::syntax_at(line_no, "expected 'task <name>'");
      task.name = tokens[1];
      continue;
    }
    if (tokens[0] != "step")
      throw detail::syntax_at(line_no, "expected 'step ...'");
    if (tokens.size() < 2)
      throw detail::syntax_at(line_no, "step needs a class code or PREHENSILE");
    if (tokens[1] == "PREHENSILE") {
      if (tokens.size() != 2)
        throw detail::syntax_at(line_no, "PREHENSILE step takes no arguments");
      task.steps.push_back({});
      continue;
    }
    TaskRequirement req;
    req.cls = parse_class(tokens[1], scheme);
    std::size_t end = tokens.size();
    if (end > 2 && tokens.back() == "exact") {
      req.allow_equivalents = false;
      --end;
    }
    for (std::size_t i = 2; i < end; ++i) {
      if (!detail::valid_tag(tokens[i]))
        throw detail::syntax_at(line_no, "bad feature tag '" + tokens[i] + "'");
      req.required_features.insert(tokens[i]);
    }
    task.steps.push_back({req});
  }
  if (task.steps.empty())
    throw Error(errc::syntax, "task has no steps");
  return task;
}

inline std::string serialize_task(const TaskSpec& task,
                                  const DiscretizationScheme& scheme =
                                      DiscretizationScheme::standard()) {
  std::ostringstream out;
  if (!task.name.empty()) out << "task " << task.name << "\n";
  for (const auto& step : task.steps) {
    if (step.prehensile()) {
      out << "step PREHENSILE\n";
      continue;
    }
    out << "step " << format_class(step.requirement->cls, scheme);
    for (const auto& f : step.requirement->required_features) out << " " << f;
    if (!step.requirement->allow_equivalents) out << " exact";
    out << "\n";
  }
  return out.str();
}

}  // namespace npkit
