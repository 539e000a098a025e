#pragma once

// Command-line front end: argument parsing, subcommand dispatch and artifact emission.

#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "rrdlab/report.hpp"

namespace rrdlab {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

namespace detail {

/// Errors that reject the requested configuration map to the usage code; the rest are failures.
inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::invalid_argument:
    case Errc::degree_too_small:
    case Errc::window_overflow:
    case Errc::memory_budget:
    case Errc::table_too_small:
    case Errc::depth_too_small:
    case Errc::out_of_registry:
      return exit_usage;
    default:
      return exit_failure;
  }
}

inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  // exact [a, b, q] triple
  if (v.is_array() && v.size() == 3 && v[0].is_string() && v[2].is_number_integer()) {
    const double a = Rational(v[0].get<std::string>()).convert_to<double>();
    const double b = Rational(v[1].get<std::string>()).convert_to<double>();
    return csv_cell(nlohmann::json(a + b * std::sqrt(v[2].get<double>())));
  }
  return "";
}

/// Flattens an array of flat objects; nested values other than exact triples are dropped.
inline std::string rows_csv(const nlohmann::json& rows) {
  std::vector<std::string> cols;
  for (const auto& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (csv_cell(it.value()) != "" || !it.value().is_structured())
        if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (r.contains(cols[i]) ? csv_cell(r[cols[i]]) : "");
    os << "\n";
  }
  return os.str();
}

struct Outcome {
  nlohmann::json doc;
  std::string csv;
  bool pass = true;
};

}  // namespace detail

/// Parses argv, runs one subcommand and writes its artifact to --output or to `out`.
inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rrdlab: desk-scale experiments on SL2 over F_q[X, 1/X]", "rrdlab"};
  app.set_version_flag("--version", version_string);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  int degree = 3;
  int tree_n = 8;
  bool check_bfs = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "field size (prime power)");
    sub->add_option("--max-length", cfg.max_length, "largest sphere length N (even)");
    sub->add_option("--registry-radius", cfg.registry_radius, "vertex registry radius (0 derives it)");
    sub->add_option("--depth", cfg.depth, "largest cylinder depth K for compressions");
    sub->add_option("--u-threshold", cfg.u_threshold, "regression guard for U_n");
    sub->add_option("--tolerance", cfg.tolerance, "power iteration tolerance");
    sub->add_option("--max-iters", cfg.max_iterations, "power iteration cap");
    sub->add_option("--compression-max-n", cfg.compression_max_n, "largest n for compressed norms");
    sub->add_option("--lamplighter-radius", cfg.lamplighter_radius, "word radius for the lamplighter ball");
    sub->add_option("--threads", cfg.threads, "worker threads for enumeration");
    sub->add_option("--output,-o", cfg.output, "artifact path (stdout when omitted)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--cache-dir", cfg.cache_dir, "sphere cache directory (else RRDLAB_CACHE_DIR)");
  };
  auto tree_opts = [&](CLI::App* sub) {
    sub->add_option("--degree", degree, "tree degree d >= 3");
    sub->add_option("--n", tree_n, "largest radius or depth");
  };

  auto* spheres = app.add_subcommand("spheres", "enumerate C_n for even n <= N and write the table");
  auto* ball = app.add_subcommand("ball-count", "closed-form ball sizes in the d-regular tree");
  ball->add_flag("--check-bfs", check_bfs, "compare against breadth-first search");
  auto* xi = app.add_subcommand("xi", "Harish-Chandra values: tree closed form vs partition sum, sup over spheres");
  auto* mean_id = app.add_subcommand("mean-identity", "sphere averages of the cocycle and integrals of mean transfers");
  auto* cond1 = app.add_subcommand("condition1", "supXi * sqrt|C_n| against c n^(5/2)");
  auto* ubound = app.add_subcommand("uniform-bound", "exact U_n = sup of the mean transfer");
  auto* opnorm = app.add_subcommand("opnorm", "compressed mean norms and convolution lower bounds");
  auto* lamp = app.add_subcommand("lamplighter", "growth of H and the word family certificate");
  auto* report = app.add_subcommand("report", "full pipeline and verdict");
  for (auto* s : {spheres, ball, xi, mean_id, cond1, ubound, opnorm, lamp, report}) common(s);
  tree_opts(ball);
  tree_opts(mean_id);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }
  cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;

  detail::Outcome res;
  try {
    cfg.validate();
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    res.doc = header_json(name, cfg);

    if (sub == spheres) {
      const auto cached = load_or_build_spheres(cfg, err);
      res.doc = cached.table.to_json();
      nlohmann::json rows = nlohmann::json::array();
      for (int n = 0; n <= cfg.max_length; ++n) rows.push_back({{"n", n}, {"sphere_size", cached.table.sphere_size(n)}});
      res.csv = detail::rows_csv(rows);
    } else if (sub == ball) {
      if (degree < 3) throw Error(Errc::degree_too_small, "degree " + std::to_string(degree));
      if (tree_n < 0) throw Error(Errc::invalid_argument, "n must be >= 0");
      nlohmann::json rows = nlohmann::json::array();
      for (int n = 0; n <= tree_n; ++n) {
        nlohmann::json row = {{"n", n}, {"formula", ball_count_formula(degree, n).str()}};
        if (check_bfs) {
          const auto b = ball_count_bfs(degree, n);
          row["bfs"] = b.str();
          row["agree"] = b == ball_count_formula(degree, n);
          res.pass = res.pass && row["agree"].get<bool>();
        }
        rows.push_back(std::move(row));
      }
      res.doc["degree"] = degree;
      res.doc["rows"] = rows;
      res.doc["pass"] = res.pass;
      res.csv = detail::rows_csv(rows);
    } else if (sub == xi) {
      const int d = cfg.q + 1;
      nlohmann::json tree_rows = nlohmann::json::array();
      for (int n = 0; n <= std::max(cfg.max_length, 2); ++n) {
        const auto closed = hc_tree_closed(d, n);
        const auto brute = hc_tree_bruteforce(d, n);
        const bool agree = closed.value == brute.value;
        res.pass = res.pass && agree;
        tree_rows.push_back({{"n", n}, {"closed", exact_json(closed.value)}, {"partition_sum", exact_json(brute.value)}, {"agree", agree}});
      }
      const auto cached = load_or_build_spheres(cfg, err);
      nlohmann::json sup_rows = nlohmann::json::array();
      for (int n = 0; n <= cfg.max_length; n += 2) {
        const auto s = sup_xi_on_sphere(cached.table, n);
        const auto split = sup_xi_over_splittings(n, cfg.q);
        nlohmann::json row = {{"n", n}, {"sup_over_splittings", exact_json(split.value)}};
        row["sup_on_sphere"] = s ? exact_json(s->value) : nlohmann::json(nullptr);
        if (s) {
          const bool ok = s->value <= split.value;
          row["dominated"] = ok;
          res.pass = res.pass && ok;
        }
        sup_rows.push_back(std::move(row));
      }
      res.doc["tree_degree"] = d;
      res.doc["tree"] = tree_rows;
      res.doc["spheres"] = sup_rows;
      res.doc["pass"] = res.pass;
      res.csv = detail::rows_csv(sup_rows);
    } else if (sub == mean_id) {
      if (degree < 3) throw Error(Errc::degree_too_small, "degree " + std::to_string(degree));
      if (tree_n < 0) throw Error(Errc::invalid_argument, "n must be >= 0");
      nlohmann::json tree_rows = nlohmann::json::array();
      for (int n = 0; n <= tree_n; ++n) {
        std::int64_t cylinders = 0;
        bool all_one = true;
        for (const auto& v : sphere_vertices(degree, n)) {
          ++cylinders;
          if (!(sphere_average_check(degree, n, BoundaryCylinder(v)) == AlgebraicValue(degree - 1, 1))) all_one = false;
        }
        res.pass = res.pass && all_one;
        tree_rows.push_back({{"n", n}, {"cylinders", cylinders}, {"all_equal_one", all_one}});
      }
      const auto cached = load_or_build_spheres(cfg, err);
      const Registries regs(cached.table.field(), cfg.effective_registry_radius());
      nlohmann::json group_rows = nlohmann::json::array();
      for (int n = 0; n <= cfg.max_length; n += 2) {
        const auto integral = mean_transfer_exact(cached.table, n, regs).integral();
        const bool one = integral == AlgebraicValue(cfg.q, 1);
        res.pass = res.pass && one;
        group_rows.push_back({{"n", n}, {"integral", exact_json(integral)}, {"equals_one", one}});
      }
      res.doc["degree"] = degree;
      res.doc["tree"] = tree_rows;
      res.doc["group"] = group_rows;
      res.doc["pass"] = res.pass;
      res.csv = detail::rows_csv(tree_rows);
    } else if (sub == cond1) {
      const auto cached = load_or_build_spheres(cfg, err);
      const auto c1 = condition_one_certificate(cached.table);
      res.doc["spheres_provenance"] = provenance_name(cached.table.provenance());
      res.doc["condition1"] = condition_one_json(c1, growth_comparison(cached.table));
      res.pass = c1.rigorous_dominates;
      res.csv = detail::rows_csv(res.doc["condition1"]["rows"]);
    } else if (sub == ubound) {
      const auto cached = load_or_build_spheres(cfg, err);
      const Registries regs(cached.table.field(), cfg.effective_registry_radius());
      const auto c2 = condition_two(cached.table, regs, cfg.u_threshold);
      res.doc["spheres_provenance"] = provenance_name(cached.table.provenance());
      res.doc["condition2"] = condition_two_json(c2, cfg.u_threshold);
      res.pass = c2.pass;
      res.csv = detail::rows_csv(res.doc["condition2"]["rows"]);
    } else if (sub == opnorm) {
      const auto cached = load_or_build_spheres(cfg, err);
      const Registries regs(cached.table.field(), cfg.effective_registry_radius());
      const auto c2 = condition_two(cached.table, regs, cfg.u_threshold);
      const auto comp = compressions(cached.table, regs, c2, cfg);
      const auto conv = convolution_bounds(cached.table, cfg);
      res.doc["spheres_provenance"] = provenance_name(cached.table.provenance());
      res.doc["compressions"] = compressions_json(comp);
      res.doc["convolution"] = convolution_json(conv);
      res.pass = comp.pass && conv.pass;
      res.csv = detail::rows_csv(res.doc["compressions"]["rows"]);
    } else if (sub == lamp) {
      const auto r = lamplighter_run(cfg.q, cfg.lamplighter_radius);
      res.doc["lamplighter"] = lamplighter_json(r);
      res.pass = r.words_ok && r.certificate.rd_failure;
      res.csv = lamplighter_csv(r);
    } else if (sub == report) {
      auto v = rrd_report(cfg, err);
      res.doc = std::move(v.document);
      res.pass = v.pass;
      res.csv = detail::rows_csv(res.doc["condition2"]["rows"]);
    }

    const std::string body = cfg.format == OutputFormat::csv ? res.csv : res.doc.dump(2) + "\n";
    if (cfg.output.empty())
      out << body;
    else
      write_atomic(cfg.output, body);
  } catch (const Error& e) {
    err << "rrdlab: " << e.what() << "\n";
    return detail::exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "rrdlab: " << e.what() << "\n";
    return exit_failure;
  }
  if (!res.pass) err << "rrdlab: check failed\n";
  return res.pass ? exit_ok : exit_failure;
}

}  // namespace rrdlab
