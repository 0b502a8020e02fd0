#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "npkit/catalog.hpp"
#include "npkit/error.hpp"
#include "npkit/optimizer.hpp"
#include "npkit/stats.hpp"
#include "npkit/taxonomy.hpp"

// Command-line frontend. Exit codes: 0 success, 1 domain error (infeasible
// instance, uncoverable step, ...), 2 usage or input-parse error.

namespace npkit::cli {

constexpr const char* kUsage =
    "usage: npkit [--scheme FILE] [--rules FILE] [--ascii] [--machine] "
    "<command> [args]\n"
    "\n"
    "commands:\n"
    "  classes                          list all canonical classes\n"
    "  classify SA SB CA CB MU K        classify a surface (sizes mm,\n"
    "                                   curvatures 1/mm, CoF, compliance mm/N)\n"
    "  parse CODE                       canonicalize a class code\n"
    "  cover --catalog F --task F [--tools a,b,...]\n"
    "                                   coverage report\n"
    "  select --catalog F --task F [--greedy] [--max-mass G] [--max-volume V]\n"
    "                                   choose a minimal palette\n"
    "  plan --catalog F --task F [--tools a,b,...]\n"
    "                                   compile a tool-change schedule\n"
    "  ci S N [--confidence C]          exact binomial confidence interval\n"
    "  auc --csv F [--start T] [--end T]\n"
    "                                   pressure-recovery area under the curve\n"
    "  ttest MU0 V1 V2 ...              one-sample two-sided t-test\n"
    "\n"
    "File arguments accept '-' for stdin. NPKIT_SCHEME names a default\n"
    "scheme file; --scheme overrides it.\n";

struct CliConfig {
  std::optional<std::string> scheme_path;
  std::optional<std::string> rules_path;
  bool ascii_output = false;
  bool machine = false;
};

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw Error(errc::usage, "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

inline double parse_number(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::usage,
                std::string("bad ") + what + " '" + token + "'");
  }
}

inline long parse_count(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::usage,
                std::string("bad ") + what + " '" + token + "'");
  }
}

// Pulls the value of `--flag VALUE` out of args, if present.
inline std::optional<std::string> take_option(std::vector<std::string>& args,
                                              const std::string& flag) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag) {
      if (i + 1 >= args.size())
        throw Error(errc::usage, flag + " needs a value");
      std::string value = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      return value;
    }
  }
  return std::nullopt;
}

inline bool take_flag(std::vector<std::string>& args, const std::string& flag) {
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i] == flag) {
      args.erase(args.begin() + i);
      return true;
    }
  return false;
}

inline void reject_leftover_options(const std::vector<std::string>& args) {
  for (const auto& a : args)
    if (a.size() >= 2 && a[0] == '-' && a[1] == '-')
      throw Error(errc::usage, "unknown option '" + a + "'");
}

inline std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline Palette palette_from_names(const Catalog& catalog,
                                  const std::vector<std::string>& names) {
  std::vector<int> indices;
  for (const auto& name : names) {
    const ToolInsert* tool = catalog.find(name);
    if (!tool)
      throw Error(errc::usage, "unknown tool '" + name + "'");
    indices.push_back(
        static_cast<int>(tool - catalog.tools.data()));
  }
  return Palette::from_indices(catalog, std::move(indices));
}

}  // namespace detail

// Runs one invocation. argv excludes the program name.
inline int run(std::vector<std::string> args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  try {
    CliConfig config;
    if (auto v = detail::take_option(args, "--scheme")) config.scheme_path = *v;
    if (auto v = detail::take_option(args, "--rules")) config.rules_path = *v;
    config.ascii_output = detail::take_flag(args, "--ascii");
    config.machine = detail::take_flag(args, "--machine");
    if (!config.scheme_path)
      if (const char* env = std::getenv("NPKIT_SCHEME"))
        config.scheme_path = env;

    if (args.empty()) {
      err << kUsage;
      return 2;
    }
    std::string command = args.front();
    args.erase(args.begin());

    DiscretizationScheme scheme = DiscretizationScheme::standard();
    if (config.scheme_path)
      scheme = parse_scheme(detail::read_input(*config.scheme_path, in));
    EquivalenceRules rules;
    if (config.rules_path)
      rules = parse_rules(detail::read_input(*config.rules_path, in), scheme);

    auto fmt = [&](const ClassCode& code) {
      if (scheme.compact_notation())
        return format_class(code, scheme, config.ascii_output);
      return describe_class(code, scheme);
    };

    if (command == "classes") {
      detail::reject_leftover_options(args);
      if (!args.empty())
        throw Error(errc::usage, "classes takes no arguments");
      auto classes = enumerate_classes(scheme);
      if (config.machine) {
        out << "count=" << classes.size() << "\n";
        for (std::size_t i = 0; i < classes.size(); ++i)
          out << "class_" << i << "=" << fmt(classes[i]) << "\n";
      } else {
        for (const auto& c : classes) out << fmt(c) << "\n";
      }
      return 0;
    }

    if (command == "classify") {
      detail::reject_leftover_options(args);
      if (args.size() != 6)
        throw Error(errc::usage,
                    "classify needs six values: size_a size_b curvature_a "
                    "curvature_b friction compliance");
      SurfaceProfile profile;
      profile.size_a = detail::parse_number(args[0], "size_a");
      profile.size_b = detail::parse_number(args[1], "size_b");
      profile.curvature_a = detail::parse_number(args[2], "curvature_a");
      profile.curvature_b = detail::parse_number(args[3], "curvature_b");
      profile.friction = detail::parse_number(args[4], "friction");
      profile.compliance = detail::parse_number(args[5], "compliance");
      if (!profile.valid())
        throw Error(errc::usage,
                    "sizes must be positive; curvature, friction and "
                    "compliance non-negative");
      ClassCode code = discretize(profile, scheme);
      if (config.machine)
        out << "class=" << fmt(code) << "\n";
      else
        out << fmt(code) << "\n";
      return 0;
    }

    if (command == "parse") {
      detail::reject_leftover_options(args);
      if (args.size() != 1)
        throw Error(errc::usage, "parse needs exactly one class code");
      ClassCode code = parse_class(args[0], scheme);
      if (config.machine)
        out << "class=" << fmt(code) << "\n";
      else
        out << fmt(code) << "\n";
      return 0;
    }

    if (command == "cover" || command == "select" || command == "plan") {
      auto catalog_path = detail::take_option(args, "--catalog");
      auto task_path = detail::take_option(args, "--task");
      auto tools_arg = detail::take_option(args, "--tools");
      bool greedy = command == "select" && detail::take_flag(args, "--greedy");
      Constraints constraints;
      if (auto v = detail::take_option(args, "--max-mass"))
        constraints.max_mass = detail::parse_number(*v, "max mass");
      if (auto v = detail::take_option(args, "--max-volume"))
        constraints.max_volume = detail::parse_number(*v, "max volume");
      detail::reject_leftover_options(args);
      if (!args.empty())
        throw Error(errc::usage, "unexpected argument '" + args.front() + "'");
      if (!catalog_path || !task_path)
        throw Error(errc::usage, command + " needs --catalog and --task");
      if (catalog_path == task_path && *catalog_path == "-")
        throw Error(errc::usage, "only one file argument may be '-'");
      Catalog catalog =
          parse_catalog(detail::read_input(*catalog_path, in), scheme);
      TaskSpec task = parse_task(detail::read_input(*task_path, in), scheme);
      auto requirements = task.requirements();

      if (command == "cover") {
        Palette palette;
        if (tools_arg)
          palette = detail::palette_from_names(catalog,
                                               detail::split_csv(*tools_arg));
        else {
          std::vector<int> all(catalog.tools.size());
          for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = static_cast<int>(i);
          palette = Palette::from_indices(catalog, all);
        }
        auto report = coverage_report(catalog, palette, requirements, rules);
        if (config.machine) {
          out << "requirements=" << requirements.size() << "\n";
          out << "satisfied=" << report.satisfied.size() << "\n";
          out << "unsatisfied=" << report.unsatisfied.size() << "\n";
          for (std::size_t r : report.unsatisfied)
            out << "unsatisfied_req_" << r + 1 << "="
                << fmt(requirements[r].cls) << "\n";
        } else {
          out << report.satisfied.size() << "/" << requirements.size()
              << " requirements satisfied\n";
          for (std::size_t r : report.unsatisfied)
            out << "  unsatisfied: step requirement #" << r + 1 << " ("
                << fmt(requirements[r].cls) << ")\n";
        }
        return report.unsatisfied.empty() ? 0 : 1;
      }

      if (command == "select") {
        Palette palette =
            greedy ? select_palette_greedy(catalog, requirements, constraints,
                                           rules, scheme)
                   : select_palette_exact(catalog, requirements, constraints,
                                          rules, scheme);
        out << palette_report(catalog, palette, config.machine);
        return 0;
      }

      // plan
      Palette palette;
      bool selected = false;
      if (tools_arg)
        palette = detail::palette_from_names(catalog,
                                             detail::split_csv(*tools_arg));
      else {
        palette = select_palette_exact(catalog, requirements, constraints,
                                       rules, scheme);
        selected = true;
      }
      Plan plan = plan_changes(task, catalog, palette, rules, scheme);
      if (selected) out << palette_report(catalog, palette, config.machine);
      out << plan_report(task, plan, config.machine);
      return 0;
    }

    if (command == "ci") {
      double confidence = 0.95;
      if (auto v = detail::take_option(args, "--confidence"))
        confidence = detail::parse_number(*v, "confidence");
      detail::reject_leftover_options(args);
      if (args.size() != 2)
        throw Error(errc::usage, "ci needs: successes trials");
      long successes = detail::parse_count(args[0], "successes");
      long trials = detail::parse_count(args[1], "trials");
      BinomialResult r = clopper_pearson(successes, trials, confidence);
      std::ostringstream buf;
      buf.precision(9);
      if (config.machine) {
        buf << "successes=" << r.successes << "\n"
            << "trials=" << r.trials << "\n"
            << "point=" << r.point_estimate << "\n"
            << "lower=" << r.lower << "\n"
            << "upper=" << r.upper << "\n"
            << "confidence=" << r.confidence << "\n";
      } else {
        buf << r.successes << "/" << r.trials << " = " << r.point_estimate
            << " (" << r.confidence * 100 << "% CI: " << r.lower << " .. "
            << r.upper << ")\n";
      }
      out << buf.str();
      return 0;
    }

    if (command == "auc") {
      auto csv_path = detail::take_option(args, "--csv");
      auto start_arg = detail::take_option(args, "--start");
      auto end_arg = detail::take_option(args, "--end");
      detail::reject_leftover_options(args);
      if (!csv_path || !args.empty())
        throw Error(errc::usage, "auc needs --csv FILE");
      TimeSeries series =
          parse_pressure_csv(detail::read_input(*csv_path, in));
      if (series.size() < 2)
        throw Error(errc::out_of_range, "series needs at least 2 samples");
      double t_start = start_arg ? detail::parse_number(*start_arg, "start") : 0.0;
      double t_end =
          end_arg ? detail::parse_number(*end_arg, "end") : series.times.back();
      double value = auc(series, t_start, t_end);
      std::ostringstream buf;
      buf.precision(12);
      if (config.machine)
        buf << "t_start=" << t_start << "\nt_end=" << t_end << "\n"
            << "auc_psi_min=" << value << "\n";
      else
        buf << "AUC over [" << t_start << ", " << t_end << "] min: " << value
            << " psi*min\n";
      out << buf.str();
      return 0;
    }

    if (command == "ttest") {
      detail::reject_leftover_options(args);
      if (args.size() < 3)
        throw Error(errc::usage, "ttest needs: mu0 and at least two samples");
      double mu0 = detail::parse_number(args[0], "mu0");
      std::vector<double> samples;
      for (std::size_t i = 1; i < args.size(); ++i)
        samples.push_back(detail::parse_number(args[i], "sample"));
      TTestResult r = one_sample_ttest(samples, mu0);
      std::ostringstream buf;
      buf.precision(9);
      if (config.machine)
        buf << "t=" << r.t_statistic << "\ndf=" << r.degrees_of_freedom
            << "\np=" << r.p_value << "\n";
      else
        buf << "t(" << r.degrees_of_freedom << ") = " << r.t_statistic
            << ", two-sided p = " << r.p_value << "\n";
      out << buf.str();
      return 0;
    }

    err << "unknown command '" << command << "'\n" << kUsage;
    return 2;
  } catch (const Error& e) {
    err << errc_name(e.code()) << ": " << e.what() << "\n";
    return e.is_input_error() ? 2 : 1;
  }
}

// Reads a machine-format report back into ordered key/value pairs.
inline std::vector<std::pair<std::string, std::string>> parse_machine_report(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss{std::string(text)};
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(errc::syntax, "machine report: missing '=' in '" + line + "'");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace npkit::cli
