#pragma once

// Random instance generators shared by the property tests and the
// acceptance suite. Everything is seeded; runs are reproducible.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "npkit/catalog.hpp"
#include "npkit/optimizer.hpp"
#include "npkit/taxonomy.hpp"

namespace npkit::testgen {

inline ClassCode random_class(std::mt19937& rng) {
  static const auto classes =
      enumerate_classes(DiscretizationScheme::standard());
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
  return classes[pick(rng)];
}

inline std::set<std::string> random_features(std::mt19937& rng,
                                             int max_tags = 2) {
  static const std::vector<std::string> pool = {"magnetic", "adhesive",
                                                "heat_safe", "food_safe"};
  std::set<std::string> out;
  std::uniform_int_distribution<int> count(0, max_tags);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  int n = count(rng);
  for (int i = 0; i < n; ++i) out.insert(pool[pick(rng)]);
  return out;
}

inline Catalog random_catalog(std::mt19937& rng, int max_tools = 12) {
  std::uniform_int_distribution<int> tool_count(1, max_tools);
  std::uniform_int_distribution<int> surface_count(1, 3);
  std::uniform_int_distribution<int> mass(25, 300);
  std::uniform_int_distribution<int> dim(55, 200);
  Catalog catalog;
  int n = tool_count(rng);
  for (int t = 0; t < n; ++t) {
    ToolInsert tool;
    tool.name = "tool_" + std::to_string(t);
    tool.mass = mass(rng);
    tool.bounding_dims = {double(dim(rng)), double(dim(rng)), double(dim(rng))};
    int ns = surface_count(rng);
    for (int s = 0; s < ns; ++s) {
      ToolSurface surface;
      surface.name = "s" + std::to_string(s);
      surface.cls = random_class(rng);
      surface.features = random_features(rng);
      tool.surfaces.push_back(surface);
    }
    catalog.tools.push_back(tool);
  }
  return catalog;
}

// Requirements biased toward coverable ones: mostly drawn from classes the
// catalog actually offers.
inline std::vector<TaskRequirement> random_requirements(std::mt19937& rng,
                                                        const Catalog& catalog,
                                                        int max_reqs = 10) {
  std::vector<ClassCode> offered;
  for (const auto& tool : catalog.tools)
    for (const auto& surface : tool.surfaces) offered.push_back(surface.cls);
  std::uniform_int_distribution<int> req_count(0, max_reqs);
  std::uniform_int_distribution<int> coin(0, 9);
  std::vector<TaskRequirement> reqs;
  int n = req_count(rng);
  for (int i = 0; i < n; ++i) {
    TaskRequirement req;
    if (!offered.empty() && coin(rng) < 8) {
      std::uniform_int_distribution<std::size_t> pick(0, offered.size() - 1);
      req.cls = offered[pick(rng)];
    } else {
      req.cls = random_class(rng);
    }
    if (coin(rng) == 0) req.required_features = random_features(rng, 1);
    req.allow_equivalents = coin(rng) < 8;
    reqs.push_back(req);
  }
  return reqs;
}

inline Constraints random_constraints(std::mt19937& rng) {
  Constraints constraints;
  std::uniform_int_distribution<int> coin(0, 3);
  if (coin(rng) == 0) {
    std::uniform_real_distribution<double> mass(100.0, 1500.0);
    constraints.max_mass = mass(rng);
  }
  if (coin(rng) == 0) {
    std::uniform_real_distribution<double> volume(2e5, 5e6);
    constraints.max_volume = volume(rng);
  }
  return constraints;
}

inline TaskSpec random_task(std::mt19937& rng, const Catalog& catalog,
                            int max_steps = 10) {
  std::uniform_int_distribution<int> step_count(1, max_steps);
  std::uniform_int_distribution<int> coin(0, 4);
  std::vector<ClassCode> offered;
  for (const auto& tool : catalog.tools)
    for (const auto& surface : tool.surfaces) offered.push_back(surface.cls);
  TaskSpec task;
  task.name = "random";
  int n = step_count(rng);
  for (int i = 0; i < n; ++i) {
    if (coin(rng) == 0 || offered.empty()) {
      task.steps.push_back({});
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, offered.size() - 1);
    TaskRequirement req;
    req.cls = offered[pick(rng)];
    req.allow_equivalents = coin(rng) > 0;
    task.steps.push_back({req});
  }
  return task;
}

inline EquivalenceRules random_rules(std::mt19937& rng, int max_pairs = 3) {
  std::uniform_int_distribution<int> count(0, max_pairs);
  EquivalenceRules rules;
  int n = count(rng);
  for (int i = 0; i < n; ++i)
    rules.pairs.emplace_back(random_class(rng), random_class(rng));
  return rules;
}

}  // namespace npkit::testgen
