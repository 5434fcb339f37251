#include "torsionlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsionlab/errors.hpp"
#include "torsionlab/exactla.hpp"
#include "torsionlab/experiment.hpp"
#include "torsionlab/matrix.hpp"
#include "torsionlab/model.hpp"
#include "torsionlab/verify.hpp"

namespace torsionlab {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string n;
  std::string k;
  std::string p;
  std::string m;
  std::string c;
  std::string pattern = "alternating";
  std::uint64_t seed = 1;
  std::uint64_t trial_id = 0;
  std::size_t trials = 1;
  std::size_t parallelism = 1;
  std::size_t record_every = 1;
  std::size_t sweep_record_every = 0;
  std::size_t max_entries = ExactOptions{}.max_entries;
  std::string out;
  std::string in;
  std::string format;
  std::string grid;
  std::string suite = "all";
  std::size_t samples = 200;
  bool mutate_snf = false;
};

std::size_t parse_size(const std::string& text, const char* what) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    throw ParameterError(std::string(what) + " must be a non-negative integer, got \"" + text + "\"");
  }
  return static_cast<std::size_t>(value);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& part : split_list(text)) out.push_back(parse_size(part, what));
  if (out.empty()) throw ParameterError(std::string("missing value for ") + what);
  return out;
}

std::size_t require_size(const std::string& text, const char* what) {
  if (text.empty()) throw ParameterError(std::string("--") + what + " is required");
  return parse_size(text, what);
}

json factors_json(const std::vector<mpz_class>& factors) {
  json arr = json::array();
  for (const auto& d : factors) arr.push_back(d.get_str());
  return arr;
}

json step_json(const StepRecord& rec) {
  return {{"step", rec.step},
          {"free_rank", rec.coker.free_rank},
          {"torsion", factors_json(rec.coker.torsion_factors)},
          {"torsion_order", rec.coker.torsion_order.get_str()}};
}

// Exactly one of p, m, c.
struct EdgeParam {
  ParamKind kind;
  std::vector<std::string> texts;
};

EdgeParam edge_param(const RunConfig& cfg) {
  const int given = int(!cfg.p.empty()) + int(!cfg.m.empty()) + int(!cfg.c.empty());
  if (given != 1) throw ParameterError("exactly one of --p, --m, --c is required");
  if (!cfg.p.empty()) return {ParamKind::p, split_list(cfg.p)};
  if (!cfg.m.empty()) return {ParamKind::m, split_list(cfg.m)};
  return {ParamKind::c, split_list(cfg.c)};
}

mpq_class param_value(ParamKind kind, const std::string& text) {
  if (kind == ParamKind::m) return mpq_class(mpz_class(parse_size(text, "m")));
  mpq_class v = parse_rational(text);
  if (kind == ParamKind::p && (v < 0 || v > 1)) throw ParameterError("--p must lie in [0, 1]");
  if (kind == ParamKind::c && v < 0) throw ParameterError("--c must be non-negative");
  return v;
}

std::string format_or(const RunConfig& cfg, const std::string& fallback,
                      std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw ParameterError("unsupported --format \"" + f + "\" for this subcommand");
}

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw ParameterError("cannot open input file " + path);
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

// Applies flat "key = value" lines for every option of `sub` that the
// command line left unset.
std::vector<std::string> config_args(const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file " + path);
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") continue;
    if (sub.get_option_no_throw("--" + key) == nullptr) {
      throw ParameterError("config key \"" + key + "\" is not an option of " + sub.get_name());
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), default_out_(out), err_(err) {
    exact_.max_entries = cfg.max_entries;
    if (const char* env = std::getenv("TORSIONLAB_BUDGET")) {
      budget_.max_items = parse_size(env, "TORSIONLAB_BUDGET");
    }
  }

  int dispatch(const std::string& name) {
    if (!cfg_.out.empty()) {
      file_.open(cfg_.out);
      if (!file_) throw ParameterError("cannot open output file " + cfg_.out);
    }
    if (name == "sample") return sample();
    if (name == "incidence") return incidence();
    if (name == "snf" || name == "coker") return smith();
    if (name == "core") return core();
    if (name == "process") return process();
    if (name == "curve") return curve();
    if (name == "sweep") return sweep_cmd();
    if (name == "verify") return verify();
    throw ParameterError("a subcommand is required");
  }

 private:
  std::ostream& out() { return file_.is_open() ? file_ : default_out_; }

  int sample() {
    const std::size_t n = require_size(cfg_.n, "n");
    const std::size_t k = require_size(cfg_.k, "k");
    const EdgeParam param = edge_param(cfg_);
    if (param.texts.size() != 1) throw ParameterError("sample takes a single --p/--m/--c value");
    const mpq_class value = param_value(param.kind, param.texts.front());
    RandomSpec spec;
    spec.seed = cfg_.seed;
    spec.trial_id = cfg_.trial_id;
    if (param.kind == ParamKind::m) {
      spec.mode = EdgeCount{value.get_num().get_ui()};
    } else {
      spec.mode = EdgeProbability{param.kind == ParamKind::p ? value
                                                             : probability_from_c(n, k, value)};
    }
    write_hypergraph(out(), torsionlab::sample(n, k, spec));
    return kExitOk;
  }

  int incidence() {
    Input in(cfg_.in);
    const Hypergraph h = read_hypergraph(in.stream());
    write_sms(out(), incidence_matrix(h, parse_sign_pattern(cfg_.pattern)));
    return kExitOk;
  }

  int smith() {
    format_or(cfg_, "json", {"json"});
    Input in(cfg_.in);
    const SparseIntMatrix m = read_sms(in.stream());
    const SmithForm form = smith_normal_form(m, exact_);
    const CokernelSummary coker = cokernel_from_smith(m.n_rows(), form);
    const json j{{"rank", form.rank()},
                 {"invariant_factors", factors_json(form.invariant_factors)},
                 {"free_rank", coker.free_rank},
                 {"torsion", factors_json(coker.torsion_factors)}};
    out() << j.dump() << '\n';
    return kExitOk;
  }

  int core() {
    const std::string format = format_or(cfg_, "text", {"text", "json"});
    Input in(cfg_.in);
    const Hypergraph h = read_hypergraph(in.stream());
    const CoreResult result = two_core(h);
    if (format == "text") {
      write_hypergraph(out(), result.core);
      err_ << "isolated_removals " << result.isolated_removals << '\n';
      return kExitOk;
    }
    json edges = json::array();
    for (std::size_t j = 0; j < result.core.edge_count(); ++j) {
      const auto e = result.core.edge(j);
      edges.push_back(std::vector<Vertex>(e.begin(), e.end()));
    }
    const json j{{"n", result.core.n()},
                 {"k", result.core.k()},
                 {"edges", edges},
                 {"isolated_removals", result.isolated_removals},
                 {"original_labels", result.original_labels}};
    out() << j.dump() << '\n';
    return kExitOk;
  }

  int process() {
    const std::string format = format_or(cfg_, "jsonl", {"jsonl", "json"});
    const std::size_t n = require_size(cfg_.n, "n");
    const std::size_t k = require_size(cfg_.k, "k");
    const std::size_t m_max = require_size(cfg_.m, "m");
    ProcessOptions options;
    options.record_every = cfg_.record_every;
    options.exact = exact_;
    const ProcessTrace trace = run_process(n, k, m_max, parse_sign_pattern(cfg_.pattern),
                                           cfg_.seed, cfg_.trial_id, options);
    if (format == "jsonl") {
      for (const auto& rec : trace.steps) out() << step_json(rec).dump() << '\n';
    } else {
      json steps = json::array();
      for (const auto& rec : trace.steps) steps.push_back(step_json(rec));
      out() << steps.dump() << '\n';
    }
    return kExitOk;
  }

  int curve() {
    const std::string format = format_or(cfg_, "csv", {"csv", "json"});
    const std::size_t n = require_size(cfg_.n, "n");
    const std::size_t k = require_size(cfg_.k, "k");
    CurveOptions options;
    options.trials = cfg_.trials;
    options.seed = cfg_.seed;
    options.parallelism = cfg_.parallelism;
    options.pattern = parse_sign_pattern(cfg_.pattern);
    options.exact = exact_;
    const auto grid = parse_size_list(cfg_.grid, "grid");
    const auto points = torsion_probability_curve(n, k, grid, options);
    if (format == "csv") {
      out() << "m,trials,torsion_fraction\n";
      for (const auto& pt : points) {
        out() << pt.m << ',' << pt.trials << ',' << pt.fraction() << '\n';
      }
    } else {
      json arr = json::array();
      for (const auto& pt : points) {
        arr.push_back({{"m", pt.m}, {"trials", pt.trials}, {"torsion_fraction", pt.fraction()}});
      }
      out() << arr.dump() << '\n';
    }
    return kExitOk;
  }

  int sweep_cmd() {
    const std::string format = format_or(cfg_, "csv", {"csv", "json"});
    const auto ns = parse_size_list(cfg_.n, "n");
    const auto ks = parse_size_list(cfg_.k, "k");
    const EdgeParam param = edge_param(cfg_);
    std::vector<SignPattern> patterns;
    for (const auto& p : split_list(cfg_.pattern)) patterns.push_back(parse_sign_pattern(p));

    std::vector<SweepCell> cells;
    for (const std::size_t n : ns) {
      for (const std::size_t k : ks) {
        for (const auto& text : param.texts) {
          for (const SignPattern pattern : patterns) {
            cells.push_back({n, k, param.kind, param_value(param.kind, text), pattern});
          }
        }
      }
    }
    SweepOptions options;
    options.trials = cfg_.trials;
    options.seed = cfg_.seed;
    options.parallelism = cfg_.parallelism;
    options.record_every = cfg_.sweep_record_every;
    options.exact = exact_;
    const auto records = sweep(cells, options);

    for (const auto& rec : records) {
      for (const auto& e : rec.errors) err_ << "sweep error: " << e << '\n';
    }
    auto opt = [](const std::optional<std::size_t>& v) {
      return v ? std::to_string(*v) : std::string();
    };
    if (format == "csv") {
      out() << "n,k,param_kind,param_value,pattern,trials,torsion_final,torsion_ever,trivial,"
               "coker_Z,mean_free_rank,burst_min,burst_max\n";
      for (const auto& r : records) {
        out() << r.cell.n << ',' << r.cell.k << ',' << to_string(r.cell.kind) << ','
              << r.cell.value.get_str() << ',' << to_string(r.cell.pattern) << ',' << r.trials
              << ',' << r.torsion_final << ',' << r.torsion_ever << ',' << r.trivial << ','
              << r.coker_z << ',' << std::setprecision(6) << r.mean_free_rank << ','
              << opt(r.burst_min) << ',' << opt(r.burst_max) << '\n';
      }
    } else {
      json arr = json::array();
      for (const auto& r : records) {
        json j{{"n", r.cell.n},
               {"k", r.cell.k},
               {"param_kind", to_string(r.cell.kind)},
               {"param_value", r.cell.value.get_str()},
               {"pattern", to_string(r.cell.pattern)},
               {"trials", r.trials},
               {"torsion_final", r.torsion_final},
               {"torsion_ever", r.torsion_ever},
               {"trivial", r.trivial},
               {"coker_Z", r.coker_z},
               {"free_rank_at_least_one", r.free_rank_at_least_one},
               {"mean_free_rank", r.mean_free_rank},
               {"burst_min", r.burst_min ? json(*r.burst_min) : json()},
               {"burst_max", r.burst_max ? json(*r.burst_max) : json()},
               {"errors", r.errors}};
        arr.push_back(std::move(j));
      }
      out() << arr.dump() << '\n';
    }
    return kExitOk;
  }

  int verify() {
    format_or(cfg_, "json", {"json"});
    VerifyConfig vc;
    if (!cfg_.n.empty()) vc.n = parse_size(cfg_.n, "n");
    if (!cfg_.k.empty()) vc.k = parse_size(cfg_.k, "k");
    vc.seed = cfg_.seed;
    vc.samples = cfg_.samples;
    vc.budget = budget_;
    vc.smith = cfg_.mutate_snf ? mutated_smith_kernel() : default_smith_kernel(exact_);
    const auto results = run_verify_suite(cfg_.suite, vc);
    const json report = verify_report_json(cfg_.suite, results);
    out() << report.dump(2) << '\n';
    return report["passed"].get<bool>() ? kExitOk : kExitVerifyFailed;
  }

  const RunConfig& cfg_;
  std::ostream& default_out_;
  std::ostream& err_;
  std::ofstream file_;
  ExactOptions exact_;
  EnumerationBudget budget_;
};

}  // namespace

mpq_class parse_rational(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      throw ParameterError("not a rational number: " + text);
    }
    q.canonicalize();
    return q;
  }
  // [-]digits[.digits][e[+-]digits]
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --exponent;
      any = true;
    }
  }
  if (any && i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(text.substr(i), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw ParameterError("not a number: " + text);
    exponent += e;
    i += used;
  }
  if (!any || i != text.size()) throw ParameterError("not a number: " + text);
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class value = exponent >= 0 ? mpq_class(mantissa * scale) : mpq_class(mantissa, scale);
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"Random hypergraph cokernels: sampling, Smith normal form, torsion experiments",
               "torsionlab"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_shape = [&](CLI::App* sub, bool lists) {
    sub->add_option("--n", cfg.n, lists ? "vertex counts (comma-separated)" : "vertex count");
    sub->add_option("--k", cfg.k, lists ? "uniformities (comma-separated)" : "uniformity");
  };
  auto add_edges = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "edge probability, exact: 1/10 or 0.1");
    sub->add_option("--m", cfg.m, "edge count");
    sub->add_option("--c", cfg.c, "p = c log(n) / n^(k-1)");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--format", cfg.format, "json | jsonl | csv | text");
    sub->add_option("--max-entries", cfg.max_entries, "entry limit for exact elimination");
    sub->add_option("--config", config_path, "flat key = value file of flag defaults");
  };

  auto* sample = app.add_subcommand("sample", "sample a random k-uniform hypergraph");
  add_shape(sample, false);
  add_edges(sample);
  sample->add_option("--seed", cfg.seed);
  sample->add_option("--trial-id", cfg.trial_id);
  add_common(sample);

  auto* incidence = app.add_subcommand("incidence", "hypergraph file -> SMS incidence matrix");
  incidence->add_option("--in", cfg.in, "hypergraph file (default: standard input)");
  incidence->add_option("--pattern", cfg.pattern, "alternating | ones");
  add_common(incidence);

  for (const char* name : {"snf", "coker"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "snf"
                                             ? "Smith normal form of an SMS matrix"
                                             : "cokernel of an SMS matrix");
    sub->add_option("--in", cfg.in, "SMS matrix file (default: standard input)");
    add_common(sub);
  }

  auto* core = app.add_subcommand("core", "2-core of a hypergraph file");
  core->add_option("--in", cfg.in, "hypergraph file (default: standard input)");
  add_common(core);

  auto* process = app.add_subcommand("process", "add edges one at a time, record cokernels");
  add_shape(process, false);
  process->add_option("--m", cfg.m, "number of edges to add (m_max)");
  process->add_option("--pattern", cfg.pattern, "alternating | ones");
  process->add_option("--seed", cfg.seed);
  process->add_option("--trial-id", cfg.trial_id);
  process->add_option("--record-every", cfg.record_every)->check(CLI::PositiveNumber);
  add_common(process);

  auto* curve = app.add_subcommand("curve", "torsion probability at each prefix length");
  add_shape(curve, false);
  curve->add_option("--grid", cfg.grid, "prefix lengths m (comma-separated)");
  curve->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  curve->add_option("--seed", cfg.seed);
  curve->add_option("--parallelism", cfg.parallelism)->check(CLI::PositiveNumber);
  curve->add_option("--pattern", cfg.pattern, "alternating | ones");
  add_common(curve);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo statistics over parameter cells");
  add_shape(sweep, true);
  add_edges(sweep);
  sweep->add_option("--pattern", cfg.pattern, "alternating | ones (comma-separated)");
  sweep->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  sweep->add_option("--seed", cfg.seed);
  sweep->add_option("--parallelism", cfg.parallelism)->check(CLI::PositiveNumber);
  sweep->add_option("--record-every", cfg.sweep_record_every,
                    "prefix resolution for torsion_ever and bursts; 0 (default) records only "
                    "the final prefix");
  add_common(sweep);

  auto* verify = app.add_subcommand("verify", "structural property suites, JSON report");
  verify->add_option("--suite", cfg.suite, "claim6 | lemma7 | lemma8 | lemma10 | all");
  add_shape(verify, false);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--samples", cfg.samples, "random vectors per (k, n, q) cell");
  verify->add_flag("--mutate-snf", cfg.mutate_snf)->group("");
  add_common(verify);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // Config values go right after the subcommand name so explicit flags,
    // which come later, take precedence.
    CLI::App probe{"probe"};
    probe.allow_extras();
    probe.set_help_flag();
    probe.add_option("--config", config_path);
    probe.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    if (!config_path.empty() && !args.empty()) {
      const CLI::App* sub = app.get_subcommand_ptr(args.front()).get();
      const auto extra = config_args(config_path, *sub);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Runner runner(cfg, out, err);
    return runner.dispatch(app.get_subcommands().front()->get_name());
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::bad_alloc&) {
    err << "out of memory\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace torsionlab
