#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "npkit/catalog.hpp"
#include "npkit/error.hpp"
#include "npkit/taxonomy.hpp"

// Palette selection (constrained minimal set cover) and tool-change plan
// compilation (minimum mounts over a step sequence).

namespace npkit {

// Carrying-capacity limits plus the lexicographic objective (tool count,
// then total mass).
struct Constraints {
  double max_mass = std::numeric_limits<double>::infinity();    // g
  double max_volume = std::numeric_limits<double>::infinity();  // mm^3

  bool unlimited() const {
    return max_mass == std::numeric_limits<double>::infinity() &&
           max_volume == std::numeric_limits<double>::infinity();
  }
};

// A selected subset of catalog tools. Indices refer to the source catalog
// and are kept in catalog order.
struct Palette {
  std::vector<int> tool_indices;
  double total_mass = 0.0;
  double total_volume = 0.0;

  static Palette from_indices(const Catalog& catalog, std::vector<int> indices) {
    Palette p;
    std::sort(indices.begin(), indices.end());
    p.tool_indices = std::move(indices);
    for (int i : p.tool_indices) {
      p.total_mass += catalog.tools[i].mass;
      p.total_volume += catalog.tools[i].volume();
    }
    return p;
  }

  std::size_t size() const { return tool_indices.size(); }
  bool operator==(const Palette&) const = default;
};

// Per-step assignment in a compiled plan.
struct StepAssignment {
  bool prehensile = false;
  int tool_index = -1;        // catalog index; -1 for prehensile steps
  std::string tool_name;      // empty for prehensile steps
  std::string surface_name;

  bool operator==(const StepAssignment&) const = default;
};

struct Plan {
  std::vector<StepAssignment> assignments;
  int mount_count = 0;   // insert mount events
  int holder_ops = 0;    // holder pick-up/put-down pairs

  bool operator==(const Plan&) const = default;
};

// Does this tool satisfy the requirement? Returns the first matching surface
// in tool order, or nullopt. A surface matches when its class equals the
// required class (or is equivalent, if the requirement allows it) and its
// features include all required features.
inline std::optional<std::size_t> covers(const ToolInsert& tool,
                                         const TaskRequirement& req,
                                         const EquivalenceRules& rules) {
  for (std::size_t i = 0; i < tool.surfaces.size(); ++i) {
    const ToolSurface& s = tool.surfaces[i];
    bool class_ok = s.cls == req.cls ||
                    (req.allow_equivalents && rules.equivalent(s.cls, req.cls));
    if (!class_ok) continue;
    if (!std::includes(s.features.begin(), s.features.end(),
                       req.required_features.begin(),
                       req.required_features.end()))
      continue;
    return i;
  }
  return std::nullopt;
}

struct CoverageReport {
  std::vector<std::size_t> satisfied;    // requirement indices, ascending
  std::vector<std::size_t> unsatisfied;
};

inline CoverageReport coverage_report(const Catalog& catalog,
                                      const Palette& palette,
                                      const std::vector<TaskRequirement>& reqs,
                                      const EquivalenceRules& rules) {
  CoverageReport report;
  for (std::size_t r = 0; r < reqs.size(); ++r) {
    bool ok = false;
    for (int t : palette.tool_indices)
      if (covers(catalog.tools[t], reqs[r], rules)) {
        ok = true;
        break;
      }
    (ok ? report.satisfied : report.unsatisfied).push_back(r);
  }
  return report;
}

namespace detail {

// Per-requirement bitmask of covering tools, with feasibility diagnostics.
inline std::vector<std::uint64_t> coverage_masks(
    const Catalog& catalog, const std::vector<TaskRequirement>& reqs,
    const EquivalenceRules& rules, const DiscretizationScheme& scheme) {
  if (catalog.tools.size() > 30)
    throw Error(errc::infeasible,
                "exact solver supports at most 30 catalog tools");
  std::vector<std::uint64_t> masks(reqs.size(), 0);
  std::vector<std::size_t> uncoverable;
  for (std::size_t r = 0; r < reqs.size(); ++r) {
    for (std::size_t t = 0; t < catalog.tools.size(); ++t)
      if (covers(catalog.tools[t], reqs[r], rules))
        masks[r] |= std::uint64_t(1) << t;
    if (masks[r] == 0) uncoverable.push_back(r);
  }
  if (!uncoverable.empty()) {
    std::ostringstream msg;
    msg << "no catalog tool covers requirement";
    if (uncoverable.size() > 1) msg << "s";
    for (std::size_t r : uncoverable) {
      msg << " #" << r + 1 << " (" << format_class(reqs[r].cls, scheme);
      for (const auto& f : reqs[r].required_features) msg << " " << f;
      msg << ")";
    }
    throw Error(errc::infeasible, msg.str());
  }
  return masks;
}

struct SearchBest {
  std::size_t count = std::numeric_limits<std::size_t>::max();
  double mass = 0.0;
  std::vector<int> tools;  // ascending catalog indices

  bool improves(std::size_t count2, double mass2,
                const std::vector<int>& tools2) const {
    if (count2 != count) return count2 < count;
    if (mass2 != mass) return mass2 < mass;
    return tools2 < tools;
  }
};

inline void exact_search(const Catalog& catalog,
                         const std::vector<std::uint64_t>& masks,
                         const Constraints& constraints,
                         std::vector<int>& chosen, std::uint64_t chosen_mask,
                         double mass, double volume,
                         std::vector<bool>& covered, SearchBest& best) {
  // Find an uncovered requirement with the fewest covering tools.
  std::size_t pick = masks.size();
  int pick_options = std::numeric_limits<int>::max();
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (covered[r]) continue;
    int options = std::popcount(masks[r]);
    if (options < pick_options) {
      pick = r;
      pick_options = options;
    }
  }
  if (pick == masks.size()) {
    std::vector<int> sorted = chosen;
    std::sort(sorted.begin(), sorted.end());
    if (best.improves(sorted.size(), mass, sorted)) {
      best.count = sorted.size();
      best.mass = mass;
      best.tools = std::move(sorted);
    }
    return;
  }
  if (chosen.size() + 1 > best.count) return;
  for (std::size_t t = 0; t < catalog.tools.size(); ++t) {
    std::uint64_t bit = std::uint64_t(1) << t;
    if (!(masks[pick] & bit) || (chosen_mask & bit)) continue;
    const ToolInsert& tool = catalog.tools[t];
    double mass2 = mass + tool.mass;
    double volume2 = volume + tool.volume();
    if (mass2 > constraints.max_mass || volume2 > constraints.max_volume)
      continue;
    if (chosen.size() + 1 == best.count && mass2 > best.mass) continue;
    std::vector<std::size_t> newly;
    for (std::size_t r = 0; r < masks.size(); ++r)
      if (!covered[r] && (masks[r] & bit)) {
        covered[r] = true;
        newly.push_back(r);
      }
    chosen.push_back(static_cast<int>(t));
    exact_search(catalog, masks, constraints, chosen, chosen_mask | bit,
                 mass2, volume2, covered, best);
    chosen.pop_back();
    for (std::size_t r : newly) covered[r] = false;
  }
}

}  // namespace detail

// Exact minimal palette via branch and bound over the requirement/tool
// covering structure. Lexicographic objective: tool count, then total mass,
// ties broken toward earlier catalog indices. Catalogs up to 30 tools.
inline Palette select_palette_exact(const Catalog& catalog,
                                    const std::vector<TaskRequirement>& reqs,
                                    const Constraints& constraints,
                                    const EquivalenceRules& rules,
                                    const DiscretizationScheme& scheme =
                                        DiscretizationScheme::standard()) {
  auto masks = detail::coverage_masks(catalog, reqs, rules, scheme);
  detail::SearchBest best;
  std::vector<int> chosen;
  std::vector<bool> covered(reqs.size(), false);
  detail::exact_search(catalog, masks, constraints, chosen, 0, 0.0, 0.0,
                       covered, best);
  if (best.count == std::numeric_limits<std::size_t>::max()) {
    std::ostringstream msg;
    msg << "requirements are coverable but no palette fits the constraints"
        << " (max_mass=" << constraints.max_mass
        << ", max_volume=" << constraints.max_volume << ")";
    throw Error(errc::infeasible, msg.str());
  }
  return Palette::from_indices(catalog, best.tools);
}

// Greedy set cover: repeatedly add the tool covering the most uncovered
// requirements per gram, subject to the constraints. Feasible whenever it
// returns; never better than the exact solver.
inline Palette select_palette_greedy(const Catalog& catalog,
                                     const std::vector<TaskRequirement>& reqs,
                                     const Constraints& constraints,
                                     const EquivalenceRules& rules,
                                     const DiscretizationScheme& scheme =
                                         DiscretizationScheme::standard()) {
  std::vector<std::vector<std::size_t>> covers_by_tool(catalog.tools.size());
  std::vector<bool> coverable(reqs.size(), false);
  for (std::size_t t = 0; t < catalog.tools.size(); ++t)
    for (std::size_t r = 0; r < reqs.size(); ++r)
      if (covers(catalog.tools[t], reqs[r], rules)) {
        covers_by_tool[t].push_back(r);
        coverable[r] = true;
      }
  for (std::size_t r = 0; r < reqs.size(); ++r)
    if (!coverable[r]) {
      std::ostringstream msg;
      msg << "no catalog tool covers requirement #" << r + 1 << " ("
          << format_class(reqs[r].cls, scheme);
      for (const auto& f : reqs[r].required_features) msg << " " << f;
      msg << ")";
      throw Error(errc::infeasible, msg.str());
    }

  std::vector<bool> covered(reqs.size(), false);
  std::vector<bool> taken(catalog.tools.size(), false);
  std::vector<int> picked;
  double mass = 0.0, volume = 0.0;
  std::size_t remaining = reqs.size();
  while (remaining > 0) {
    int best_tool = -1;
    double best_score = -1.0;
    std::size_t best_gain = 0;
    for (std::size_t t = 0; t < catalog.tools.size(); ++t) {
      if (taken[t]) continue;
      const ToolInsert& tool = catalog.tools[t];
      if (mass + tool.mass > constraints.max_mass ||
          volume + tool.volume() > constraints.max_volume)
        continue;
      std::size_t gain = 0;
      for (std::size_t r : covers_by_tool[t])
        if (!covered[r]) ++gain;
      if (gain == 0) continue;
      double score = static_cast<double>(gain) / tool.mass;
      if (score > best_score ||
          (score == best_score && gain > best_gain)) {
        best_tool = static_cast<int>(t);
        best_score = score;
        best_gain = gain;
      }
    }
    if (best_tool < 0)
      throw Error(errc::infeasible,
                  "greedy selection cannot cover the remaining requirements "
                  "within the constraints");
    taken[best_tool] = true;
    picked.push_back(best_tool);
    mass += catalog.tools[best_tool].mass;
    volume += catalog.tools[best_tool].volume();
    for (std::size_t r : covers_by_tool[best_tool])
      if (!covered[r]) {
        covered[r] = true;
        --remaining;
      }
  }
  return Palette::from_indices(catalog, picked);
}

// Compiles a task into a per-step tool assignment minimizing mount events,
// then holder pick-ups. One holder, one mounted insert at a time; a
// prehensile step forces the holder to be put down (the mounted insert stays
// on the holder). Deterministic: ties go to the earliest catalog index.
inline Plan plan_changes(const TaskSpec& task, const Catalog& catalog,
                         const Palette& palette, const EquivalenceRules& rules,
                         const DiscretizationScheme& scheme =
                             DiscretizationScheme::standard()) {
  const std::size_t n = task.steps.size();
  // Options per step: palette positions of covering tools (with surface).
  std::vector<std::vector<std::pair<int, std::size_t>>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (task.steps[i].prehensile()) continue;
    for (int t : palette.tool_indices)
      if (auto s = covers(catalog.tools[t], *task.steps[i].requirement, rules))
        options[i].emplace_back(t, *s);
    if (options[i].empty()) {
      std::ostringstream msg;
      msg << "step " << i + 1 << " ("
          << format_class(task.steps[i].requirement->cls, scheme);
      for (const auto& f : task.steps[i].requirement->required_features)
        msg << " " << f;
      msg << ") is not coverable by the palette";
      throw Error(errc::uncoverable_step, msg.str());
    }
  }

  // DP over mounted-tool state. State 0 = nothing mounted; state k>0 = the
  // tool at palette position k-1 is mounted.
  const std::size_t num_states = palette.tool_indices.size() + 1;
  constexpr int kInf = std::numeric_limits<int>::max() / 2;
  auto palette_pos = [&](int tool_index) {
    for (std::size_t k = 0; k < palette.tool_indices.size(); ++k)
      if (palette.tool_indices[k] == tool_index) return k;
    return palette.tool_indices.size();
  };

  // cost[i][s] = minimal mounts for steps i..n-1 given state s before step i.
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(num_states, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t s = 0; s < num_states; ++s) {
      if (task.steps[i].prehensile()) {
        cost[i][s] = cost[i + 1][s];
        continue;
      }
      int best = kInf;
      for (const auto& [tool, surface] : options[i]) {
        std::size_t next = palette_pos(tool) + 1;
        int c = (next == s ? 0 : 1) + cost[i + 1][next];
        best = std::min(best, c);
      }
      cost[i][s] = best;
    }
  }

  Plan plan;
  std::size_t state = 0;  // nothing mounted
  bool holder_held = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (task.steps[i].prehensile()) {
      if (holder_held) holder_held = false;  // put the holder down
      plan.assignments.push_back({true, -1, "", ""});
      continue;
    }
    if (!holder_held) {
      holder_held = true;
      ++plan.holder_ops;
    }
    // Earliest catalog index achieving the optimum.
    int chosen_tool = -1;
    std::size_t chosen_surface = 0;
    for (const auto& [tool, surface] : options[i]) {
      std::size_t next = palette_pos(tool) + 1;
      int c = (next == state ? 0 : 1) + cost[i + 1][next];
      if (c == cost[i][state]) {
        chosen_tool = tool;
        chosen_surface = surface;
        break;
      }
    }
    std::size_t next = palette_pos(chosen_tool) + 1;
    if (next != state) ++plan.mount_count;
    state = next;
    const ToolInsert& tool = catalog.tools[chosen_tool];
    plan.assignments.push_back(
        {false, chosen_tool, tool.name, tool.surfaces[chosen_surface].name});
  }
  return plan;
}

// --- reports -----------------------------------------------------------------

inline std::string palette_report(const Catalog& catalog, const Palette& palette,
                                  bool machine) {
  std::ostringstream out;
  if (machine) {
    out << "palette_size=" << palette.size() << "\n";
    out << "palette_mass_g=" << palette.total_mass << "\n";
    out << "palette_volume_mm3=" << palette.total_volume << "\n";
    for (std::size_t i = 0; i < palette.tool_indices.size(); ++i)
      out << "palette_tool_" << i << "="
          << catalog.tools[palette.tool_indices[i]].name << "\n";
  } else {
    out << "palette (" << palette.size() << " tools, " << palette.total_mass
        << " g, " << palette.total_volume << " mm^3):\n";
    for (int t : palette.tool_indices)
      out << "  " << catalog.tools[t].name << " (" << catalog.tools[t].mass
          << " g)\n";
  }
  return out.str();
}

inline std::string plan_report(const TaskSpec& task, const Plan& plan,
                               bool machine) {
  std::ostringstream out;
  if (machine) {
    out << "steps=" << plan.assignments.size() << "\n";
    out << "mounts=" << plan.mount_count << "\n";
    out << "holder_pickups=" << plan.holder_ops << "\n";
    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
      const auto& a = plan.assignments[i];
      out << "step_" << i + 1 << "="
          << (a.prehensile ? "GRIPPER"
                           : a.tool_name + "/" + a.surface_name)
          << "\n";
    }
  } else {
    out << "plan (" << plan.mount_count << " mounts, " << plan.holder_ops
        << " holder pick-ups):\n";
    for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
      const auto& a = plan.assignments[i];
      out << "  step " << i + 1 << ": ";
      if (a.prehensile)
        out << "GRIPPER\n";
      else
        out << a.tool_name << " [" << a.surface_name << "]\n";
    }
  }
  (void)task;
  return out.str();
}

}  // namespace npkit
