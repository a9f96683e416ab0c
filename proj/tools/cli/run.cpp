#include "cli/run.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "patmat/ensemble.hpp"
#include "patmat/errors.hpp"
#include "patmat/freeness.hpp"
#include "patmat/integrator.hpp"
#include "patmat/paths.hpp"
#include "patmat/pattern.hpp"
#include "patmat/pattern_io.hpp"
#include "patmat/words.hpp"

namespace patmat::cli {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kSubcommands = {"pattern-check", "paths",    "theory",   "simulate",
                                               "oracle",        "compare",  "spectrum", "freeness"};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json estimate_json(const MomentEstimate& e) {
  return json{{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples},
              {"method", std::string(to_string(e.method))}};
}

json config_object(const RunConfig& c) {
  return json{{"subcommand", c.subcommand},
              {"patterns", c.patterns},
              {"word", c.word},
              {"size", c.size},
              {"sizes", c.sizes},
              {"trials", c.trials},
              {"samples", c.samples},
              {"grid", c.grid},
              {"dist", c.dist},
              {"seed", c.seed},
              {"out", c.out},
              {"format", c.format},
              {"word_cap", c.word_cap},
              {"oracle_budget", c.oracle_budget},
              {"grid_budget", c.grid_budget},
              {"supersample", c.supersample},
              {"probes", c.probes},
              {"colors", c.colors},
              {"dump", c.dump},
              {"spec", c.spec},
              {"max_size", c.spectrum_max}};
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

RunConfig from_object(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "subcommand", "patterns", "pattern",     "word",        "size",       "sizes",      "trials",
      "samples",    "grid",     "dist",        "seed",        "out",        "format",     "word_cap",
      "oracle_budget", "grid_budget", "supersample", "probes", "colors", "dump", "spec", "max_size", "threads"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("unknown config key '" + key + "'");
  RunConfig c;
  take(j, "subcommand", c.subcommand);
  if (j.contains("pattern")) {
    if (j["pattern"].is_string())
      c.patterns = {j["pattern"].get<std::string>()};
    else
      take(j, "pattern", c.patterns);
  }
  take(j, "patterns", c.patterns);
  take(j, "word", c.word);
  take(j, "size", c.size);
  take(j, "sizes", c.sizes);
  take(j, "trials", c.trials);
  take(j, "samples", c.samples);
  take(j, "grid", c.grid);
  take(j, "dist", c.dist);
  take(j, "seed", c.seed);
  take(j, "out", c.out);
  take(j, "format", c.format);
  take(j, "word_cap", c.word_cap);
  take(j, "oracle_budget", c.oracle_budget);
  take(j, "grid_budget", c.grid_budget);
  take(j, "supersample", c.supersample);
  take(j, "probes", c.probes);
  take(j, "colors", c.colors);
  take(j, "dump", c.dump);
  take(j, "spec", c.spec);
  take(j, "max_size", c.spectrum_max);
  take(j, "threads", c.threads);
  return c;
}

void validate(const RunConfig& c) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end())
    throw ValidationError("unknown subcommand '" + c.subcommand + "'");
  if (c.format != "json" && c.format != "csv") throw ValidationError("format must be json or csv");
  if (c.supersample < 1) throw ValidationError("supersample must be >= 1");
  parse_entry_dist(c.dist);
}

std::vector<Pattern> letter_patterns(const RunConfig& c, const Word& w) {
  if (c.patterns.empty()) throw ValidationError("--pattern is required");
  std::vector<Pattern> out;
  for (const auto& p : c.patterns) out.push_back(load_index_pattern(p));
  if (out.size() == 1) {
    while (out.size() < static_cast<std::size_t>(w.letter_count())) out.push_back(out.front());
  } else if (out.size() != static_cast<std::size_t>(w.letter_count())) {
    throw ValidationError("word has " + std::to_string(w.letter_count()) + " letters but " +
                          std::to_string(out.size()) + " patterns were given");
  }
  return out;
}

Word require_word(const RunConfig& c) {
  if (c.word.empty()) throw ValidationError("--word is required");
  return Word::parse(c.word);
}

void require_size(const RunConfig& c) {
  if (c.size == 0) throw ValidationError("--size is required");
}

TheoryOptions theory_options(const RunConfig& c) {
  return TheoryOptions{c.word_cap, c.grid_budget, c.threads};
}

MomentEstimate run_theory(const RunConfig& c, std::span<const Pattern> pats, const Word& w) {
  if (c.grid > 0) return theory_moment_grid(pats, w, c.grid, theory_options(c));
  return theory_moment_mc(pats, w, c.samples, c.seed, theory_options(c));
}

EmpiricalMoment run_simulate(const RunConfig& c, std::span<const Pattern> pats, const Word& w) {
  require_size(c);
  if (c.trials == 0) throw ValidationError("--trials must be positive");
  return empirical_moment(pats, w, c.size, c.trials, parse_entry_dist(c.dist), c.seed,
                          EnsembleOptions{c.threads, c.supersample, c.probes});
}

// Single-row table used by the csv format of scalar subcommands.
std::string csv_table(const std::string& config, const std::vector<std::pair<std::string, std::string>>& cols) {
  std::string head, row;
  for (const auto& [k, v] : cols) {
    head += (head.empty() ? "" : ",") + k;
    row += (row.empty() ? "" : ",") + v;
  }
  return "# config=" + config + "\n" + head + "\n" + row + "\n";
}

std::uint64_t falling(std::uint64_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n < i) return 0;
    if (__builtin_mul_overflow(r, n - i, &r)) throw BudgetError("labeled path count overflows 64 bits");
  }
  return r;
}

std::string do_pattern_check(const RunConfig& c, const std::string& cfg) {
  if (c.patterns.empty()) throw ValidationError("--pattern is required");
  json items = json::array();
  std::string csv = "# config=" + cfg + "\npattern,area,stderr,active_cells\n";
  for (const auto& name : c.patterns) {
    Pattern p = load_index_pattern(name);
    auto area = area_mc(p, c.samples, c.seed, c.threads);
    json item{{"pattern", name}, {"index_expression", json::parse(to_json(p))}, {"area", estimate_json(area)}};
    std::string active;
    if (c.size > 0) {
      auto mask = activation_mask(p, c.size, c.supersample);
      std::size_t on = 0;
      for (auto b : mask) on += b;
      item["active_cells"] = on;
      active = std::to_string(on);
    }
    items.push_back(item);
    csv += name + "," + num(area.value) + "," + num(area.std_error) + "," + active + "\n";
  }
  if (c.format == "csv") return csv;
  return json{{"config", json::parse(cfg)}, {"patterns", items}}.dump(2) + "\n";
}

std::string do_paths(const RunConfig& c, const std::string& cfg) {
  Word w = require_word(c);
  auto shapes = enumerate_shapes(w, c.word_cap);
  json out{{"config", json::parse(cfg)},
           {"word", w.render()},
           {"even_balanced", is_even_balanced(w)},
           {"shapes", shapes.size()}};
  std::optional<std::uint64_t> labeled;
  if (c.colors > 0) {
    // each canonical shape on n+1 colors relabels injectively into [colors]
    labeled = shapes.size() * falling(c.colors, w.size() / 2 + 1);
    out["colors"] = c.colors;
    out["labeled_constraint_paths"] = *labeled;
  }
  if (c.dump) {
    json list = json::array();
    for (const auto& s : shapes) list.push_back(s.path.render());
    out["shape_list"] = list;
  }
  if (c.format == "json") return out.dump(2) + "\n";
  std::string csv = "# config=" + cfg + "\n# shapes=" + std::to_string(shapes.size()) + "\n";
  if (labeled) csv += "# labeled_constraint_paths=" + std::to_string(*labeled) + "\n";
  csv += "shape\n";
  for (const auto& s : shapes) csv += "\"" + s.path.render() + "\"\n";
  return csv;
}

std::string do_theory(const RunConfig& c, const std::string& cfg) {
  Word w = require_word(c);
  auto pats = letter_patterns(c, w);
  auto e = run_theory(c, pats, w);
  if (c.format == "csv")
    return csv_table(cfg, {{"value", num(e.value)},
                           {"stderr", num(e.std_error)},
                           {"samples", std::to_string(e.samples)},
                           {"method", std::string(to_string(e.method))}});
  json out{{"config", json::parse(cfg)}};
  out.update(estimate_json(e));
  return out.dump(2) + "\n";
}

std::string do_simulate(const RunConfig& c, const std::string& cfg) {
  Word w = require_word(c);
  auto pats = letter_patterns(c, w);
  auto e = run_simulate(c, pats, w);
  if (c.format == "csv")
    return csv_table(cfg, {{"value", num(e.estimate.value)},
                           {"stderr", num(e.estimate.std_error)},
                           {"trials", std::to_string(e.estimate.samples)},
                           {"trial_variance", num(e.trial_variance)},
                           {"imag_mean", num(e.imag_mean)}});
  json out{{"config", json::parse(cfg)}};
  out.update(estimate_json(e.estimate));
  out["trial_variance"] = e.trial_variance;
  out["imag_mean"] = e.imag_mean;
  return out.dump(2) + "\n";
}

std::string do_oracle(const RunConfig& c, const std::string& cfg) {
  Word w = require_word(c);
  require_size(c);
  auto pats = letter_patterns(c, w);
  double v = exact_moment_oracle(pats, w, c.size, parse_entry_dist(c.dist), c.oracle_budget, c.supersample);
  if (c.format == "csv") return csv_table(cfg, {{"value", num(v)}, {"method", "oracle"}});
  return json{{"config", json::parse(cfg)}, {"value", v}, {"method", "oracle"}}.dump(2) + "\n";
}

std::string do_compare(const RunConfig& c, const std::string& cfg) {
  Word w = require_word(c);
  auto pats = letter_patterns(c, w);
  auto t = run_theory(c, pats, w);
  auto e = run_simulate(c, pats, w);
  double diff = e.estimate.value - t.value;
  double se = std::hypot(e.estimate.std_error, t.std_error);
  std::optional<double> z;
  if (se > 0)
    z = diff / se;
  else if (diff == 0)
    z = 0.0;
  if (c.format == "csv")
    return csv_table(cfg, {{"theory", num(t.value)},
                           {"theory_stderr", num(t.std_error)},
                           {"empirical", num(e.estimate.value)},
                           {"empirical_stderr", num(e.estimate.std_error)},
                           {"difference", num(diff)},
                           {"combined_stderr", num(se)},
                           {"z_score", z ? num(*z) : "nan"}});
  json emp = estimate_json(e.estimate);
  emp["trial_variance"] = e.trial_variance;
  emp["imag_mean"] = e.imag_mean;
  return json{{"config", json::parse(cfg)},
              {"theory", estimate_json(t)},
              {"empirical", emp},
              {"difference", diff},
              {"combined_stderr", se},
              {"z_score", z ? json(*z) : json(nullptr)}}
             .dump(2) + "\n";
}

std::string do_spectrum(const RunConfig& c, const std::string& cfg) {
  require_size(c);
  if (c.patterns.size() != 1) throw ValidationError("spectrum takes exactly one --pattern");
  Pattern p = load_index_pattern(c.patterns.front());
  auto ev = spectrum(p, c.size, parse_entry_dist(c.dist), c.seed, c.spectrum_max, c.supersample);
  if (c.format == "json") {
    json pts = json::array();
    for (auto z : ev) pts.push_back({z.real(), z.imag()});
    return json{{"config", json::parse(cfg)}, {"eigenvalues", pts}}.dump(2) + "\n";
  }
  std::string csv = "# config=" + cfg + "\nre,im\n";
  for (auto z : ev) csv += num(z.real()) + "," + num(z.imag()) + "\n";
  return csv;
}

std::string do_freeness(const RunConfig& c, const std::string& cfg) {
  if (c.spec.empty()) throw ValidationError("--spec is required");
  std::ifstream in(c.spec, std::ios::binary);
  if (!in) throw ValidationError("cannot read spec file '" + c.spec + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto spec = parse_alternating_spec(ss.str(), std::filesystem::path(c.spec).parent_path());
  if (!c.sizes.empty()) spec.sizes = c.sizes;
  if (spec.sizes.empty()) throw ValidationError("no sizes: give --sizes or \"sizes\" in the spec");
  FreenessOptions opts{c.threads, c.supersample};
  auto warnings = check_spec(spec);
  auto centers = resolve_centers(spec, opts);
  std::vector<SweepRow> rows;
  for (auto n : spec.sizes) rows.push_back({n, centered_moment(spec, n, centers, opts)});

  json resolved{{"sizes", spec.sizes},
                {"trials", spec.trials},
                {"dist", std::string(to_string(spec.dist))},
                {"seed", spec.seed},
                {"centers", centers}};
  if (c.format == "csv") {
    std::string csv = "# config=" + cfg + "\n# spec=" + resolved.dump() + "\n";
    for (const auto& w : warnings) csv += "# warning: " + w + "\n";
    return csv + sweep_csv(rows);
  }
  json table = json::array();
  for (const auto& r : rows) table.push_back({{"N", r.size}, {"estimate", r.estimate.value}, {"stderr", r.estimate.std_error}});
  return json{{"config", json::parse(cfg)}, {"spec", resolved}, {"warnings", warnings}, {"rows", table}}.dump(2) +
         "\n";
}

}  // namespace

std::string config_json(const RunConfig& config) { return config_object(config).dump(); }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return from_object(j);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const std::string cfg = config_json(config);
    std::string text;
    const auto& s = config.subcommand;
    if (s == "pattern-check") text = do_pattern_check(config, cfg);
    else if (s == "paths") text = do_paths(config, cfg);
    else if (s == "theory") text = do_theory(config, cfg);
    else if (s == "simulate") text = do_simulate(config, cfg);
    else if (s == "oracle") text = do_oracle(config, cfg);
    else if (s == "compare") text = do_compare(config, cfg);
    else if (s == "spectrum") text = do_spectrum(config, cfg);
    else text = do_freeness(config, cfg);

    if (config.out.empty()) {
      out << text;
    } else {
      std::ofstream f(config.out, std::ios::binary | std::ios::trunc);
      if (!f) throw ValidationError("cannot write '" + config.out + "'");
      f << text;
      if (!f) throw ValidationError("write failed for '" + config.out + "'");
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 2;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Patterned random matrices: moments, simulation and freeness checks", "patmat"};
  app.require_subcommand(1);

  RunConfig v;
  std::string config_file;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  auto flag = [&](const char* key, CLI::Option* o) { opts.emplace_back(key, o); };

  app.add_option("--config", config_file, "JSON config; flags given on the command line override it");
  flag("patterns", app.add_option("--pattern", v.patterns, "preset name or pattern file; repeat per letter"));
  flag("word", app.add_option("--word", v.word, "word such as aAaA (uppercase = adjoint)"));
  flag("size", app.add_option("--size", v.size, "matrix size N"));
  flag("sizes", app.add_option("--sizes", v.sizes, "sizes for a freeness sweep")->delimiter(','));
  flag("trials", app.add_option("--trials", v.trials, "independent matrix draws"));
  flag("samples", app.add_option("--samples", v.samples, "Monte Carlo points"));
  flag("grid", app.add_option("--grid", v.grid, "use the midpoint rule with this many cells per axis"));
  flag("dist", app.add_option("--dist", v.dist, "gaussian-real|gaussian-complex|rademacher|fourth-root"));
  flag("seed", app.add_option("--seed", v.seed, "master seed"));
  flag("out", app.add_option("--out", v.out, "output file (default stdout)"));
  flag("format", app.add_option("--format", v.format, "json or csv"));
  flag("word_cap", app.add_option("--word-cap", v.word_cap, "max word length for shape enumeration"));
  flag("oracle_budget", app.add_option("--oracle-budget", v.oracle_budget, "max N^m for the exact oracle"));
  flag("grid_budget", app.add_option("--grid-budget", v.grid_budget, "max g^(n+1) grid points"));
  flag("supersample", app.add_option("--supersample", v.supersample, "k x k probes per cell"));
  flag("threads", app.add_option("--threads", v.threads, "worker cap (results do not depend on it)"));
  flag("probes", app.add_option("--probes", v.probes, "Hutchinson probes instead of exact traces"));
  flag("colors", app.add_option("--colors", v.colors, "count labeled constraint paths on this many colors"));
  flag("dump", app.add_flag("--dump", v.dump, "list every canonical shape"));
  flag("spec", app.add_option("--spec", v.spec, "alternating product spec (JSON)"));
  flag("max_size", app.add_option("--max-size", v.spectrum_max, "largest N accepted by spectrum"));

  const std::map<std::string, std::string> about = {
      {"pattern-check", "index-space form, area and active cells of each pattern"},
      {"paths", "constraint path shapes of a word"},
      {"theory", "limiting moment by Monte Carlo or grid quadrature"},
      {"simulate", "empirical moment over sampled matrices"},
      {"oracle", "exact finite-N moment by full index expansion"},
      {"compare", "theory and simulate side by side with a z-score"},
      {"spectrum", "eigenvalues of one sampled matrix"},
      {"freeness", "centred alternating product sweep from a spec file"}};
  for (const auto& name : kSubcommands) app.add_subcommand(name, about.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  json merged = json::object();
  if (!config_file.empty()) {
    std::ifstream in(config_file, std::ios::binary);
    if (!in) {
      err << "error: cannot read config '" << config_file << "'\n";
      return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      merged = json::parse(ss.str());
      if (!merged.is_object()) throw ValidationError("config must be a JSON object");
    } catch (const json::parse_error& e) {
      err << "error: config: " << e.what() << "\n";
      return 1;
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    if (merged.contains("pattern") && !merged.contains("patterns")) {
      merged["patterns"] = merged["pattern"].is_string() ? json::array({merged["pattern"]}) : merged["pattern"];
      merged.erase("pattern");
    }
  }
  json given = config_object(v);
  given["threads"] = v.threads;
  for (const auto& [key, o] : opts)
    if (o->count() > 0) merged[key] = given[key];
  merged["subcommand"] = app.get_subcommands().front()->get_name();

  RunConfig resolved;
  try {
    resolved = from_object(merged);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return run(resolved, out, err);
}

}  // namespace patmat::cli
