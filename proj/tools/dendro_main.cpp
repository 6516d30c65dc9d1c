// Command-line front end: parse spaces and trees, run the comparisons, emit
// deterministic JSON reports.
//
// Exit codes: 0 computed, 1 input/validation error, 2 budget exhausted
// (bounds-only result from an --exact run).

#include "dendro/distortion.hpp"
#include "dendro/equivalence.hpp"
#include "dendro/generators.hpp"
#include "dendro/io.hpp"
#include "dendro/suites.hpp"
#include "dendro/tree.hpp"
#include "dendro/ultrametric.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using dendro::io::Json;

constexpr const char* kFormatVersion = "1";

struct Output {
  std::string out;            // empty = stdout
  std::string format = "json";
};

void add_output_flags(CLI::App* cmd, Output& output) {
  cmd->add_option("--out", output.out, "write the report to a file");
  cmd->add_option("--format", output.format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
}

void render_text(const Json& j, const std::string& prefix, std::string& out) {
  for (const auto& [key, value] : j.items()) {
    std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render_text(value, name, out);
    } else {
      out += name;
      out += ": ";
      out += value.is_string() ? value.get<std::string>() : value.dump();
      out += "\n";
    }
  }
}

void emit(const Json& report, const Output& output) {
  std::string text;
  if (output.format == "json")
    text = report.dump(2) + "\n";
  else
    render_text(report, "", text);
  if (output.out.empty())
    std::cout << text;
  else
    dendro::io::write_file(output.out, text);
}

Json input_entry(const std::string& path, const std::string& bytes) {
  return Json{{"path", path}, {"fnv1a64", dendro::io::fnv1a64_hex(bytes)}};
}

Json report_skeleton(const std::string& command) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  return j;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DENDRO_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw std::invalid_argument("DENDRO_SEED is not an unsigned integer");
    }
  }
  return 1;
}

std::vector<dendro::Rational> parse_level_list(const std::string& csv) {
  std::vector<dendro::Rational> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string token = csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    auto r = dendro::parse_rational(token);
    if (!r)
      throw std::invalid_argument("'" + token + "' is not an exact rational");
    out.push_back(*r);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::pair<dendro::Rational, dendro::Rational> parse_map_entry(
    const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--map entries look like FROM=TO");
  auto from = dendro::parse_rational(kv.substr(0, eq));
  auto to = dendro::parse_rational(kv.substr(eq + 1));
  if (!from || !to)
    throw std::invalid_argument("'" + kv + "' is not a rational=rational pair");
  return {*from, *to};
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dendro: exact distortion metrics between finite ultrametric spaces "
      "and rooted trees"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- validate -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "validate", "check a space or tree file and report the verdict");
    auto path = std::make_shared<std::string>();
    auto output = std::make_shared<Output>();
    cmd->add_option("path", *path, "input file")->required();
    add_output_flags(cmd, *output);
    cmd->callback([path, output, &exit_code] {
      std::string bytes = dendro::io::read_file(*path);
      Json report = report_skeleton("validate");
      report["inputs"] = Json::array({input_entry(*path, bytes)});
      auto parsed = dendro::io::parse_any(bytes);
      Json result;
      if (std::holds_alternative<dendro::UltrametricSpace>(parsed)) {
        const auto& space = std::get<dendro::UltrametricSpace>(parsed);
        auto verdict = dendro::validate(space);
        result["kind"] = "ultrametric-space";
        result["points"] = space.size();
        result["validation"] = dendro::io::validation_to_json(verdict);
        if (!verdict.ok) exit_code = 1;
      } else {
        const auto& tree = std::get<dendro::RootedTree>(parsed);
        result["kind"] = "rooted-tree";
        result["vertices"] = tree.size();
        result["leaves"] = tree.leaves().size();
        result["simplicial"] = tree.simplicial();
        if (tree.truncation_depth())
          result["truncation_depth"] =
              dendro::format_rational(*tree.truncation_depth());
        result["validation"] = Json{{"ok", true}};
      }
      report["result"] = std::move(result);
      emit(report, *output);
    });
  }

  // ---- rho ------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "rho", "optimal distortion exponent and rho between two spaces "
               "(tree inputs are converted to their end spaces)");
    struct Args {
      std::string a, b;
      bool bound_only = false;
      std::uint64_t budget = dendro::SearchBudget{}.max_nodes;
      unsigned jobs = 1;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("a", args->a, "first input")->required();
    cmd->add_option("b", args->b, "second input")->required();
    auto* exact = cmd->add_flag("--exact", "full search (default)");
    cmd->add_flag("--bound", args->bound_only,
                  "skip the search; report the heuristic upper bound and the "
                  "profile lower bound");
    exact->excludes("--bound");
    cmd->add_option("--budget", args->budget, "search node budget");
    cmd->add_option("--jobs", args->jobs, "worker threads (results identical)");
    add_output_flags(cmd, args->output);
    cmd->callback([args, &exit_code] {
      std::string bytes_a = dendro::io::read_file(args->a);
      std::string bytes_b = dendro::io::read_file(args->b);
      dendro::UltrametricSpace ua = dendro::io::as_space(bytes_a);
      dendro::UltrametricSpace ub = dendro::io::as_space(bytes_b);
      dendro::SearchBudget budget;
      budget.max_nodes = args->bound_only ? 0 : args->budget;
      budget.jobs = args->jobs;
      dendro::KappaResult k = dendro::exact_kappa(ua, ub, budget);
      Json report = report_skeleton("rho");
      report["inputs"] = Json::array(
          {input_entry(args->a, bytes_a), input_entry(args->b, bytes_b)});
      // --jobs never appears in the report: output is identical for any
      // worker count.
      report["config"] = Json{{"mode", args->bound_only ? "bound" : "exact"},
                              {"budget", args->budget}};
      report["result"] = dendro::io::kappa_result_to_json(k, ua, ub);
      emit(report, args->output);
      if (k.status == dendro::KappaStatus::Bracket && !args->bound_only)
        exit_code = 2;
    });
  }

  // ---- branching ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "branching", "decide branching equivalence of two spaces");
    struct Args {
      std::string a, b;
      bool oracle = false;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("a", args->a)->required();
    cmd->add_option("b", args->b)->required();
    cmd->add_flag("--oracle", args->oracle,
                  "also run the exhaustive bijection search (<= 8 points)");
    add_output_flags(cmd, args->output);
    cmd->callback([args] {
      std::string bytes_a = dendro::io::read_file(args->a);
      std::string bytes_b = dendro::io::read_file(args->b);
      dendro::UltrametricSpace ua = dendro::io::as_space(bytes_a);
      dendro::UltrametricSpace ub = dendro::io::as_space(bytes_b);
      Json report = report_skeleton("branching");
      report["inputs"] = Json::array(
          {input_entry(args->a, bytes_a), input_entry(args->b, bytes_b)});
      Json result;
      result["same_branching"] = dendro::same_branching(ua, ub);
      if (args->oracle)
        result["oracle"] = dendro::same_branching_oracle(ua, ub);
      report["result"] = std::move(result);
      emit(report, args->output);
    });
  }

  // ---- isometry ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("isometry",
                                   "decide rooted isometry of two spaces");
    struct Args {
      std::string a, b;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("a", args->a)->required();
    cmd->add_option("b", args->b)->required();
    add_output_flags(cmd, args->output);
    cmd->callback([args] {
      std::string bytes_a = dendro::io::read_file(args->a);
      std::string bytes_b = dendro::io::read_file(args->b);
      dendro::UltrametricSpace ua = dendro::io::as_space(bytes_a);
      dendro::UltrametricSpace ub = dendro::io::as_space(bytes_b);
      auto iso = dendro::exists_isometry(ua, ub);
      Json report = report_skeleton("isometry");
      report["inputs"] = Json::array(
          {input_entry(args->a, bytes_a), input_entry(args->b, bytes_b)});
      Json result;
      result["isometric"] = iso.isometric;
      if (iso.witness)
        result["witness"] = dendro::io::bijection_to_json(*iso.witness, ua, ub);
      report["result"] = std::move(result);
      emit(report, args->output);
    });
  }

  // ---- delta -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "delta", "pseudo-discreteness gap of a space (delta = e^gap)");
    auto path = std::make_shared<std::string>();
    auto output = std::make_shared<Output>();
    cmd->add_option("path", *path)->required();
    add_output_flags(cmd, *output);
    cmd->callback([path, output] {
      std::string bytes = dendro::io::read_file(*path);
      dendro::UltrametricSpace space = dendro::io::as_space(bytes);
      auto gap = dendro::pseudo_discreteness_gap(space);
      Json report = report_skeleton("delta");
      report["inputs"] = Json::array({input_entry(*path, bytes)});
      Json result;
      if (gap) {
        result["gap"] = dendro::format_rational(*gap);
        result["delta_display"] =
            dendro::display_decimal(std::exp(dendro::to_double(*gap)));
      } else {
        result["gap"] = "UNBOUNDED";
      }
      report["result"] = std::move(result);
      emit(report, *output);
    });
  }

  // ---- bound -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "bound", "descendant-count lower bound between two truncated "
                 "simplicial trees");
    struct Args {
      std::string a, b;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("a", args->a)->required();
    cmd->add_option("b", args->b)->required();
    add_output_flags(cmd, args->output);
    cmd->callback([args] {
      std::string bytes_a = dendro::io::read_file(args->a);
      std::string bytes_b = dendro::io::read_file(args->b);
      auto pa = dendro::io::parse_any(bytes_a);
      auto pb = dendro::io::parse_any(bytes_b);
      if (!std::holds_alternative<dendro::RootedTree>(pa) ||
          !std::holds_alternative<dendro::RootedTree>(pb))
        throw std::invalid_argument("bound expects two tree files");
      auto lb = dendro::lemma_lower_bound(std::get<dendro::RootedTree>(pa),
                                          std::get<dendro::RootedTree>(pb));
      Json report = report_skeleton("bound");
      report["inputs"] = Json::array(
          {input_entry(args->a, bytes_a), input_entry(args->b, bytes_b)});
      Json result;
      result["kappa_lower_bound"] = dendro::format_rational(lb.bound);
      result["no_qualifying_k"] = lb.no_qualifying_k;
      result["rho_lower_display"] =
          dendro::display_decimal(dendro::rho_of_exponent(lb.bound));
      report["result"] = std::move(result);
      emit(report, args->output);
    });
  }

  // ---- gen -------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("gen", "deterministic generators");
    struct Args {
      std::string kind;
      std::string manifest;
      std::size_t n = 1;
      std::size_t arity = 2;
      std::size_t depth = 2;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::size_t min_children = 2;
      std::size_t max_children = 2;
      std::string levels = "0,1,2";
      std::string in;
      std::vector<std::string> map;
      std::string out, out_a, out_b;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("--kind", args->kind,
                    "example41|regular|random-tree|random-um|shape-twin");
    cmd->add_option("--manifest", args->manifest,
                    "JSON generator spec (overrides flags)");
    cmd->add_option("--n", args->n, "family index / point count");
    cmd->add_option("--arity", args->arity);
    cmd->add_option("--depth", args->depth);
    cmd->add_option("--seed", args->seed)
        ->each([args](const std::string&) { args->seed_given = true; });
    cmd->add_option("--min-children", args->min_children);
    cmd->add_option("--max-children", args->max_children);
    cmd->add_option("--levels", args->levels, "comma-separated rationals");
    cmd->add_option("--in", args->in, "input space for shape-twin");
    cmd->add_option("--map", args->map, "FROM=TO height remap (repeatable)");
    cmd->add_option("--out", args->out,
                    "output file (.nwk sets Newick for trees)");
    cmd->add_option("--out-a", args->out_a, "first output (example41)");
    cmd->add_option("--out-b", args->out_b, "second output (example41)");
    cmd->add_option("--format", args->output.format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->callback([args, &exit_code] {
      (void)exit_code;
      dendro::GeneratorSpec spec;
      spec.seed = args->seed_given ? args->seed : default_seed();
      spec.n = args->n;
      spec.arity = args->arity;
      spec.depth = args->depth;
      spec.min_children = args->min_children;
      spec.max_children = args->max_children;
      spec.levels = parse_level_list(args->levels);
      for (const auto& kv : args->map)
        spec.height_map.push_back(parse_map_entry(kv));
      std::string kind = args->kind;
      if (!args->manifest.empty()) {
        Json m = Json::parse(dendro::io::read_file(args->manifest));
        if (m.contains("kind")) kind = m["kind"].get<std::string>();
        if (m.contains("n")) spec.n = m["n"].get<std::size_t>();
        if (m.contains("arity")) spec.arity = m["arity"].get<std::size_t>();
        if (m.contains("depth")) spec.depth = m["depth"].get<std::size_t>();
        if (m.contains("seed")) spec.seed = m["seed"].get<std::uint64_t>();
        if (m.contains("min_children"))
          spec.min_children = m["min_children"].get<std::size_t>();
        if (m.contains("max_children"))
          spec.max_children = m["max_children"].get<std::size_t>();
        if (m.contains("levels")) {
          spec.levels.clear();
          for (const auto& l : m["levels"])
            spec.levels.push_back(*dendro::parse_rational(l.get<std::string>()));
        }
        if (m.contains("height_map")) {
          spec.height_map.clear();
          for (const auto& e : m["height_map"])
            spec.height_map.emplace_back(
                *dendro::parse_rational(e[0].get<std::string>()),
                *dendro::parse_rational(e[1].get<std::string>()));
        }
        if (m.contains("in")) args->in = m["in"].get<std::string>();
      }
      if (kind.empty())
        throw std::invalid_argument("gen needs --kind or a manifest");

      Json report = report_skeleton("gen");
      Json written = Json::array();
      auto save = [&](const std::string& path, const std::string& content) {
        if (path.empty())
          throw std::invalid_argument("missing output path for gen");
        dendro::io::write_file(path, content);
        written.push_back(input_entry(path, content));
      };

      auto tree_bytes = [&](const dendro::RootedTree& t,
                            const std::string& path) {
        if (has_suffix(path, ".nwk") || has_suffix(path, ".newick"))
          return dendro::io::serialize_newick(t);
        return dendro::io::serialize_tree_json(t);
      };

      if (kind == "example41") {
        auto [a, b] = dendro::gen_example41(spec.n);
        save(args->out_a, dendro::io::serialize_space(a));
        save(args->out_b, dendro::io::serialize_space(b));
      } else if (kind == "regular") {
        auto t = dendro::gen_regular(spec.arity, spec.depth);
        save(args->out, tree_bytes(t, args->out));
      } else if (kind == "random-tree") {
        auto t = dendro::gen_random_tree(spec.seed, spec.depth,
                                         spec.min_children, spec.max_children);
        save(args->out, tree_bytes(t, args->out));
      } else if (kind == "random-um") {
        auto s = dendro::gen_random_ultrametric(spec.seed, spec.n, spec.levels);
        save(args->out, dendro::io::serialize_space(s));
      } else if (kind == "shape-twin") {
        if (args->in.empty())
          throw std::invalid_argument("shape-twin needs --in");
        auto base = dendro::io::as_space(dendro::io::read_file(args->in));
        auto s = dendro::gen_shape_twin(base, spec.height_map);
        save(args->out, dendro::io::serialize_space(s));
      } else {
        throw std::invalid_argument("unknown generator kind: " + kind);
      }
      report["config"] = Json{{"kind", kind}, {"seed", spec.seed}};
      report["result"] = Json{{"written", written}};
      emit(report, args->output);
    });
  }

  // ---- tree2um / um2tree -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("tree2um", "end space of a tree");
    struct Args {
      std::string in, out;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("path", args->in)->required();
    cmd->add_option("--out", args->out, "output space file (default stdout)");
    cmd->callback([args] {
      std::string bytes = dendro::io::read_file(args->in);
      auto parsed = dendro::io::parse_any(bytes);
      if (!std::holds_alternative<dendro::RootedTree>(parsed))
        throw std::invalid_argument("tree2um expects a tree file");
      std::string out = dendro::io::serialize_space(
          dendro::end_space(std::get<dendro::RootedTree>(parsed)));
      if (args->out.empty())
        std::cout << out;
      else
        dendro::io::write_file(args->out, out);
    });
  }
  {
    auto* cmd = app.add_subcommand(
        "um2tree", "canonical dendrogram of an ultrametric space");
    struct Args {
      std::string in, out;
      bool newick = false;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("path", args->in)->required();
    cmd->add_option("--out", args->out, "output tree file (default stdout)");
    cmd->add_flag("--newick", args->newick, "emit Newick instead of JSON");
    cmd->callback([args] {
      std::string bytes = dendro::io::read_file(args->in);
      auto parsed = dendro::io::parse_any(bytes);
      if (!std::holds_alternative<dendro::UltrametricSpace>(parsed))
        throw std::invalid_argument("um2tree expects a space file");
      auto tree = dendro::dendrogram_from_ultrametric(
          std::get<dendro::UltrametricSpace>(parsed));
      std::string out = args->newick ? dendro::io::serialize_newick(tree)
                                     : dendro::io::serialize_tree_json(tree);
      if (args->out.empty())
        std::cout << out;
      else
        dendro::io::write_file(args->out, out);
    });
  }

  // ---- suite ---------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("suite", "run a named verification suite");
    struct Args {
      std::string name;
      std::uint64_t seed = 0;
      bool seed_given = false;
      std::size_t trials = 0;
      Output output;
    };
    auto args = std::make_shared<Args>();
    cmd->add_option("name", args->name,
                    "one of: example41, branching-theorem, metric-axioms, "
                    "quantization, pseudo-discreteness, lemma-soundness, "
                    "root-change, branching-decision, determinism")
        ->required();
    cmd->add_option("--seed", args->seed)
        ->each([args](const std::string&) { args->seed_given = true; });
    cmd->add_option("--trials", args->trials,
                    "raise the pinned trial count (never lowers it)");
    add_output_flags(cmd, args->output);
    cmd->callback([args, &exit_code] {
      std::uint64_t seed = args->seed_given ? args->seed : default_seed();
      auto result = dendro::suites::run_suite(args->name, seed, args->trials);
      Json report = report_skeleton("suite");
      report["config"] = Json{{"suite", args->name}, {"seed", seed}};
      report["result"] = result.to_json();
      emit(report, args->output);
      if (!result.passed) exit_code = 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const dendro::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
