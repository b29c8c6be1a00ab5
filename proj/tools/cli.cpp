#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "ellhyp/errors.hpp"
#include "ellhyp/identities.hpp"
#include "ellhyp/json_io.hpp"
#include "ellhyp/series.hpp"

namespace ellhyp::cli {

namespace {

namespace ej = ellhyp::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int parse_int(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw SchemaError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

// "lo..hi" or a single value.
IntRange parse_range(const std::string& text, const std::string& field) {
  IntRange r;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = parse_int(text, field);
  } else {
    r.lo = parse_int(text.substr(0, dots), field);
    r.hi = parse_int(text.substr(dots + 2), field);
  }
  if (r.lo < 0 || r.hi < r.lo) {
    throw SchemaError(field, "expected 0 <= lo <= hi, got '" + text + "'");
  }
  return r;
}

MultiIndex parse_alpha(const std::string& text, const std::string& field) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int v = parse_int(item, field);
    if (v < 0) throw SchemaError(field, "entries must be >= 0");
    parts.push_back(v);
  }
  if (parts.empty()) throw SchemaError(field, "expected e.g. \"2,1,3\"");
  return MultiIndex(std::move(parts));
}

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw SchemaError(field, "expected an unsigned 64-bit integer");
  }
  return v;
}

std::vector<IdentityId> parse_identities(const std::vector<std::string>& names,
                                         const std::string& field) {
  std::vector<IdentityId> ids;
  for (const auto& name : names) {
    if (name == "all") {
      ids.clear();
      for (const auto& info : list_identities()) ids.push_back(info.id);
      return ids;
    }
    const auto id = parse_identity(name);
    if (!id) throw SchemaError(field, "unknown identity '" + name + "'");
    if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
  }
  return ids;
}

std::vector<KernelVariant> parse_kernels(const std::vector<std::string>& names,
                                         const std::string& field) {
  std::vector<KernelVariant> out;
  for (const auto& name : names) {
    if (name == "all") {
      return {KernelVariant::Rational, KernelVariant::Trigonometric,
              KernelVariant::Elliptic};
    }
    const auto v = parse_variant(name);
    if (!v) throw SchemaError(field, "unknown kernel '" + name + "'");
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  }
  return out;
}

bool parse_gauge(const std::string& text, const std::string& field) {
  if (text == "random") return true;
  if (text == "off") return false;
  throw SchemaError(field, "expected \"random\" or \"off\"");
}

// Settings that are not part of SuiteConfig.
struct RunConfig {
  SuiteConfig suite;
  std::string out_dir = "ellhyp-reports";
  bool seed_given = false;
};

std::vector<std::string> string_list(const ej::Json& j, const std::string& field) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_string()) throw SchemaError(field, "expected strings");
      out.push_back(e.get<std::string>());
    }
  } else {
    throw SchemaError(field, "expected a string or an array of strings");
  }
  return out;
}

IntRange json_range(const ej::Json& j, const std::string& field) {
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    return parse_range(std::to_string(v), field);
  }
  if (j.is_string()) return parse_range(j.get<std::string>(), field);
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() &&
      j[1].is_number_integer()) {
    return parse_range(std::to_string(j[0].get<int>()) + ".." +
                           std::to_string(j[1].get<int>()),
                       field);
  }
  throw SchemaError(field, "expected \"lo..hi\", an integer or [lo, hi]");
}

void apply_json(const ej::Json& j, RunConfig& cfg) {
  if (!j.is_object()) throw SchemaError("config", "expected an object");
  SuiteConfig& s = cfg.suite;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "config." + key;
    if (key == "identity") {
      s.ids = parse_identities(string_list(value, field), field);
    } else if (key == "kernel") {
      s.kernels = parse_kernels(string_list(value, field), field);
    } else if (key == "m") {
      s.m = json_range(value, field);
    } else if (key == "n") {
      s.n = json_range(value, field);
    } else if (key == "N") {
      s.N = json_range(value, field);
    } else if (key == "M") {
      s.M = json_range(value, field);
    } else if (key == "alpha") {
      if (value.is_string()) {
        s.alpha = parse_alpha(value.get<std::string>(), field);
      } else if (value.is_array()) {
        std::string text;
        for (const auto& e : value) {
          if (!e.is_number_integer()) throw SchemaError(field, "expected integers");
          text += (text.empty() ? "" : ",") + std::to_string(e.get<int>());
        }
        s.alpha = parse_alpha(text, field);
      } else {
        throw SchemaError(field, "expected \"2,1,3\" or [2, 1, 3]");
      }
    } else if (key == "trials") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw SchemaError(field, "expected a positive integer");
      }
      s.trials = value.get<int>();
    } else if (key == "seed") {
      if (value.is_number_unsigned()) {
        s.seed = value.get<std::uint64_t>();
      } else if (value.is_string()) {
        s.seed = parse_seed(value.get<std::string>(), field);
      } else {
        throw SchemaError(field, "expected an unsigned integer");
      }
      cfg.seed_given = true;
    } else if (key == "tol") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw SchemaError(field, "expected a positive number");
      }
      s.tol = value.get<double>();
    } else if (key == "gauge") {
      if (!value.is_string()) throw SchemaError(field, "expected a string");
      s.random_gauge = parse_gauge(value.get<std::string>(), field);
    } else if (key == "out") {
      if (!value.is_string()) throw SchemaError(field, "expected a string");
      cfg.out_dir = value.get<std::string>();
    } else if (key == "jobs") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw SchemaError(field, "expected a positive integer");
      }
      s.jobs = value.get<int>();
    } else if (key == "break_balance") {
      if (!value.is_boolean()) throw SchemaError(field, "expected true or false");
      s.break_balance = value.get<bool>();
    } else if (key == "omega1") {
      s.omega1 = ej::complex_from(value, field);
    } else if (key == "omega2") {
      s.omega2 = ej::complex_from(value, field);
    } else {
      throw SchemaError(field, "unknown key");
    }
  }
}

struct Tally {
  int total = 0;
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
  int error = 0;
  int ill_conditioned = 0;
  double max_rel_err = 0.0;
  std::vector<std::string> notes;
};

void print_summary(const std::vector<VerificationReport>& reports,
                   std::ostream& out) {
  std::map<IdentityId, Tally> by_id;
  for (const auto& r : reports) {
    Tally& t = by_id[r.id];
    ++t.total;
    t.ill_conditioned += r.draw.ill_conditioned;
    switch (r.outcome) {
      case Outcome::Pass:
        ++t.pass;
        break;
      case Outcome::Fail:
        ++t.fail;
        break;
      case Outcome::Inconclusive:
        ++t.inconclusive;
        break;
      case Outcome::Error:
        ++t.error;
        break;
    }
    if (r.outcome == Outcome::Pass || r.outcome == Outcome::Fail) {
      t.max_rel_err = std::max(t.max_rel_err, r.rel_err);
    }
    if (!r.note.empty() &&
        std::find(t.notes.begin(), t.notes.end(), r.note) == t.notes.end() &&
        t.notes.size() < 3) {
      t.notes.push_back(r.note);
    }
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %11s %6s %7s %6s %12s %9s\n",
                "identity", "pass/total", "fail", "inconcl", "error",
                "max_rel_err", "ill_cond");
  out << line;
  Tally all;
  for (const auto& info : list_identities()) {
    auto it = by_id.find(info.id);
    if (it == by_id.end()) continue;
    const Tally& t = it->second;
    const std::string ratio = std::to_string(t.pass) + "/" + std::to_string(t.total);
    std::snprintf(line, sizeof line, "%-24s %11s %6d %7d %6d %12.3e %9d\n",
                  std::string(info.name).c_str(), ratio.c_str(), t.fail,
                  t.inconclusive, t.error, t.max_rel_err, t.ill_conditioned);
    out << line;
    for (const auto& note : t.notes) out << "    note: " << note << '\n';
    all.total += t.total;
    all.pass += t.pass;
    all.fail += t.fail;
    all.inconclusive += t.inconclusive;
    all.error += t.error;
    all.ill_conditioned += t.ill_conditioned;
    all.max_rel_err = std::max(all.max_rel_err, t.max_rel_err);
  }
  const std::string ratio = std::to_string(all.pass) + "/" + std::to_string(all.total);
  std::snprintf(line, sizeof line, "%-24s %11s %6d %7d %6d %12.3e %9d\n", "total",
                ratio.c_str(), all.fail, all.inconclusive, all.error,
                all.max_rel_err, all.ill_conditioned);
  out << line;
}

int exit_code_for(const std::vector<VerificationReport>& reports) {
  int bad = 0;
  int inconclusive = 0;
  for (const auto& r : reports) {
    if (r.outcome == Outcome::Fail || r.outcome == Outcome::Error) ++bad;
    if (r.outcome == Outcome::Inconclusive) ++inconclusive;
  }
  if (bad > 0) return kExitFailure;
  if (2 * inconclusive > static_cast<int>(reports.size())) return kExitNumeric;
  return kExitOk;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SchemaError("out", "cannot write " + path.string());
  f << text;
}

int cmd_eval(const std::string& series, const std::string& file,
             std::ostream& out, std::ostream& err) {
  try {
    const ej::Json j = ej::parse(read_file(file));
    SeriesStats stats;
    ScaledComplex value;
    if (series == "phi") {
      value = phi(ej::phi_params_from(j), &stats);
    } else if (series == "e") {
      value = e_series(ej::e_params_from(j), &stats);
    } else if (series == "phi_basic") {
      value = phi_basic(ej::basic_phi_params_from(j), &stats);
    } else {
      value = w_series(ej::w_params_from(j), &stats);
    }
    out << value.to_string() << '\n';
    if (value.in_double_range()) out << format_complex(value.to_complex()) << '\n';
    if (!stats.note.empty()) err << "note: " << stats.note << '\n';
    return kExitOk;
  } catch (const SchemaError& e) {
    err << "error: invalid field " << e.what() << '\n';
    return kExitUsage;
  } catch (const PoleHit& e) {
    err << "error: pole hit: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NonConvergent& e) {
    err << "error: not convergent: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    // Length mismatch, unsatisfied termination and similar input faults.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

struct VerifyFlags {
  std::vector<std::string> identity;
  std::vector<std::string> kernel;
  std::string m, n, N, M, alpha, seed, gauge, out, config;
  int trials = 0;
  double tol = 0.0;
  int jobs = 0;
  bool break_balance = false;
};

int cmd_verify(const VerifyFlags& f, const CLI::App& sub, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  SuiteConfig& s = cfg.suite;
  const auto given = [&](const char* name) { return sub.count(name) > 0; };
  try {
    s.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    s.kernels = {KernelVariant::Rational, KernelVariant::Trigonometric,
                 KernelVariant::Elliptic};
    if (given("--config")) apply_json(ej::parse(read_file(f.config)), cfg);
    if (!cfg.seed_given && !given("--seed")) {
      if (const char* env = std::getenv("ELLHYP_SEED")) {
        s.seed = parse_seed(env, "ELLHYP_SEED");
      }
    }
    if (given("--identity")) s.ids = parse_identities(f.identity, "--identity");
    if (given("--kernel")) s.kernels = parse_kernels(f.kernel, "--kernel");
    if (given("--m")) s.m = parse_range(f.m, "--m");
    if (given("--n")) s.n = parse_range(f.n, "--n");
    if (given("--N")) s.N = parse_range(f.N, "--N");
    if (given("--M")) s.M = parse_range(f.M, "--M");
    if (given("--alpha")) s.alpha = parse_alpha(f.alpha, "--alpha");
    if (given("--trials")) s.trials = f.trials;
    if (given("--seed")) s.seed = parse_seed(f.seed, "--seed");
    if (given("--tol")) s.tol = f.tol;
    if (given("--gauge")) s.random_gauge = parse_gauge(f.gauge, "--gauge");
    if (given("--out")) cfg.out_dir = f.out;
    if (given("--jobs")) s.jobs = f.jobs;
    if (f.break_balance) s.break_balance = true;
    if (s.ids.empty()) throw SchemaError("--identity", "no identity selected");
    if (s.kernels.empty()) throw SchemaError("--kernel", "no kernel selected");
  } catch (const SchemaError& e) {
    err << "error: invalid field " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<VerificationReport> reports;
  try {
    reports = run_suite(s);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (reports.empty()) {
    err << "error: no case applies to the selected identities, kernels and sizes\n";
    return kExitUsage;
  }

  try {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "reports.jsonl", ej::reports_jsonl(reports));
    write_file(dir / "summary.csv", ej::aggregate_csv(reports));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  out << "seed " << s.seed << (s.break_balance ? "  (balance broken)" : "")
      << "\n";
  print_summary(reports, out);
  out << "reports: " << (std::filesystem::path(cfg.out_dir) / "reports.jsonl").string()
      << '\n';
  return exit_code_for(reports);
}

void cmd_list(std::ostream& out) {
  char line[512];
  for (const auto& info : list_identities()) {
    std::snprintf(line, sizeof line, "%-24s %s\n", std::string(info.name).c_str(),
                  std::string(info.anchor).c_str());
    out << line;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Evaluate elliptic hypergeometric series and verify identities"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print the identity registry");

  std::string series, file;
  auto* eval = app.add_subcommand("eval", "Evaluate a series from a JSON file");
  eval->add_option("series", series, "phi | e | phi_basic | w")
      ->required()
      ->check(CLI::IsMember({"phi", "e", "phi_basic", "w"}));
  eval->add_option("file", file, "Parameter file")->required();

  VerifyFlags f;
  auto* verify = app.add_subcommand("verify", "Run a randomized verification campaign");
  verify->add_option("--identity", f.identity, "Identity name or 'all' (repeatable)");
  verify->add_option("--kernel", f.kernel, "rational | trigonometric | elliptic | all");
  verify->add_option("--m", f.m, "Range lo..hi");
  verify->add_option("--n", f.n, "Range lo..hi");
  verify->add_option("--N", f.N, "Range lo..hi");
  verify->add_option("--M", f.M, "Cauchy matrix size range lo..hi");
  verify->add_option("--alpha", f.alpha, "Mode (B) termination, e.g. 2,1,3");
  verify->add_option("--trials", f.trials, "Draws per configuration")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", f.seed, "64-bit seed (default $ELLHYP_SEED or 0)");
  verify->add_option("--tol", f.tol, "Relative tolerance override")
      ->check(CLI::PositiveNumber);
  verify->add_option("--gauge", f.gauge, "random | off");
  verify->add_option("--out", f.out, "Report directory (default ellhyp-reports)");
  verify->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--break-balance", f.break_balance,
                   "Perturb the balancing condition by 1e-3");
  verify->add_option("--config", f.config, "JSON config; flags take precedence");

  std::vector<const char*> argv{"ellhyp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*list) {
    cmd_list(out);
    return kExitOk;
  }
  if (*eval) return cmd_eval(series, file, out, err);
  return cmd_verify(f, *verify, out, err);
}

}  // namespace ellhyp::cli
