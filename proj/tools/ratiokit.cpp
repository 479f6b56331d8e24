// Command-line front end: evaluate, sweep, Monte Carlo and verify
// subcommands over the coset-sum average library, with machine-readable
// JSON/CSV output.
//
// Exit codes: 0 success, 1 domain/validation error, 2 verification
// failure, 3 numerical failure, 64 usage error (message on stderr).

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratiokit/errors.hpp"
#include "ratiokit/formula.hpp"
#include "ratiokit/haar_mc.hpp"
#include "ratiokit/params.hpp"
#include "ratiokit/serialize.hpp"
#include "ratiokit/verify.hpp"

namespace {

using json = nlohmann::json;
using ratiokit::Complex;

constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Command-line misuse distinct from domain errors; exits with 64.
struct UsageError {
  std::string message;
};

double parse_double_exact(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw UsageError{what + " is not a number: \"" + text + "\""};
  return v;
}

/// Complex flag values are "re,im" pairs, e.g. "0.5,0".
Complex parse_complex_flag(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw UsageError{"complex flag value must be \"re,im\", got \"" + text + "\""};
  const double re = parse_double_exact(text.substr(0, comma), "complex real part");
  const double im = parse_double_exact(text.substr(comma + 1), "complex imaginary part");
  return {re, im};
}

std::vector<Complex> parse_complex_list(const std::vector<std::string>& texts) {
  std::vector<Complex> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(parse_complex_flag(t));
  return out;
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 0);
  if (text.empty() || end == begin || *end != '\0')
    throw UsageError{origin + " is not an unsigned integer: \"" + text + "\""};
  return static_cast<std::uint64_t>(v);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ratiokit::ValueError("cannot read parameter file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ratiokit::ValueError("cannot open output file \"" + out_path + "\"");
  out << text;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// ---- parameter sources --------------------------------------------------

/// Flags shared by every parameter-consuming subcommand.  Exactly one
/// source must be used: the JSON file or the inline flags.
struct ParamArgs {
  std::string file;
  int p = 0, q = 0, N = 0;
  int pprime = 0, qprime = 0;
  std::vector<std::string> xs, ys;

  CLI::Option* file_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* N_opt = nullptr;
  CLI::Option* pp_opt = nullptr;
  CLI::Option* qp_opt = nullptr;
  CLI::Option* xs_opt = nullptr;
  CLI::Option* ys_opt = nullptr;

  bool file_given() const { return file_opt->count() > 0; }
  bool inline_given() const {
    return p_opt->count() + q_opt->count() + N_opt->count() + xs_opt->count() +
               ys_opt->count() + (pp_opt ? pp_opt->count() : 0) +
               (qp_opt ? qp_opt->count() : 0) >
           0;
  }
  bool extended_given() const {
    return pp_opt && qp_opt && (pp_opt->count() > 0 || qp_opt->count() > 0);
  }
};

void add_param_flags(CLI::App* sub, ParamArgs& a, bool with_extended) {
  a.file_opt = sub->add_option("--params", a.file,
                               "JSON parameter file; replaces all inline parameter flags");
  a.p_opt = sub->add_option("--p", a.p, "contracting denominator count p");
  a.q_opt = sub->add_option("--q", a.q, "expanding denominator count q");
  a.N_opt = sub->add_option("--N", a.N, "matrix dimension N");
  a.xs_opt = sub->add_option("--xs", a.xs, "numerator parameters, \"re,im\" each");
  a.ys_opt = sub->add_option("--ys", a.ys, "denominator parameters, \"re,im\" each");
  if (with_extended) {
    a.pp_opt = sub->add_option("--pprime", a.pprime, "contracting count p' of the denominator family");
    a.qp_opt = sub->add_option("--qprime", a.qprime, "expanding count q' of the denominator family");
  }
}

void check_one_source(const ParamArgs& a) {
  if (a.file_given() && a.inline_given())
    throw UsageError{"--params and inline parameter flags are mutually exclusive"};
  if (!a.file_given() && !a.inline_given())
    throw UsageError{"missing parameters: pass --params FILE or the inline flags"};
}

void require_flag(const CLI::Option* opt, const char* name) {
  if (opt == nullptr || opt->count() == 0)
    throw UsageError{std::string("missing required flag ") + name};
}

/// Inline flags -> plain record.  Families the mode does not read are
/// rejected; families that are empty by count may omit their flag.
ratiokit::RawParams inline_plain(const ParamArgs& a, bool want_xs, bool want_ys) {
  require_flag(a.p_opt, "--p");
  require_flag(a.q_opt, "--q");
  require_flag(a.N_opt, "--N");
  ratiokit::RawParams raw;
  raw.p = a.p;
  raw.q = a.q;
  raw.N = a.N;
  if (want_xs && a.p + a.q > 0) require_flag(a.xs_opt, "--xs");
  if (want_ys && a.p + a.q > 0) require_flag(a.ys_opt, "--ys");
  if (!want_xs && a.xs_opt->count() > 0)
    throw UsageError{"--xs is not accepted in this mode"};
  if (!want_ys && a.ys_opt->count() > 0)
    throw UsageError{"--ys is not accepted in this mode"};
  raw.xs = parse_complex_list(a.xs);
  raw.ys = parse_complex_list(a.ys);
  return raw;
}

ratiokit::RawParams plain_record(const ParamArgs& a, bool want_xs = true, bool want_ys = true) {
  check_one_source(a);
  if (a.file_given()) return ratiokit::params_from_json(slurp(a.file));
  return inline_plain(a, want_xs, want_ys);
}

ratiokit::ExtendedRawParams extended_record(const ParamArgs& a) {
  check_one_source(a);
  if (a.file_given()) return ratiokit::extended_params_from_json(slurp(a.file));
  require_flag(a.p_opt, "--p");
  require_flag(a.q_opt, "--q");
  require_flag(a.pp_opt, "--pprime");
  require_flag(a.qp_opt, "--qprime");
  require_flag(a.N_opt, "--N");
  ratiokit::ExtendedRawParams ext;
  ext.p = a.p;
  ext.q = a.q;
  ext.pprime = a.pprime;
  ext.qprime = a.qprime;
  ext.N = a.N;
  if (a.p + a.q > 0) require_flag(a.xs_opt, "--xs");
  if (a.pprime + a.qprime > 0) require_flag(a.ys_opt, "--ys");
  ext.xs = parse_complex_list(a.xs);
  ext.ys = parse_complex_list(a.ys);
  return ext;
}

// ---- eval / sweep ---------------------------------------------------------

struct EvalArgs {
  ParamArgs params;
  std::string mode = "thm1";
  double tol = 0.0;
  CLI::Option* tol_opt = nullptr;
  std::string format = "json";
  std::string out;
};

struct SweepArgs {
  EvalArgs base;
  std::string var;
  double from = 0.0;
  double to = 0.0;
  int steps = 11;
};

/// One evaluation request: the mode plus whichever record it reads.
struct Request {
  std::string mode;
  ratiokit::RawParams raw;           // thm1 / compact / stable
  ratiokit::ExtendedRawParams ext;   // cor12
};

Request build_request(const EvalArgs& a) {
  Request req;
  req.mode = a.mode;
  if (a.mode == "cor12") {
    req.ext = extended_record(a.params);
    return req;
  }
  if (a.params.extended_given())
    throw UsageError{"--pprime/--qprime are only accepted with --mode cor12"};
  if (a.mode == "compact") {
    req.raw = plain_record(a.params, /*want_xs=*/true, /*want_ys=*/false);
    if (!req.raw.ys.empty())
      throw ratiokit::ValueError("compact mode takes no y-parameters; ys must be empty");
  } else if (a.mode == "stable") {
    req.raw = plain_record(a.params, /*want_xs=*/false, /*want_ys=*/true);
    if (!req.raw.xs.empty())
      throw ratiokit::ValueError("stable mode takes no x-parameters; xs must be empty");
  } else {
    req.raw = plain_record(a.params);
  }
  return req;
}

ratiokit::EvalResult evaluate(const Request& req, const ratiokit::EvalOptions& opts) {
  if (req.mode == "thm1") return ratiokit::eval_thm1(ratiokit::validate(req.raw), opts);
  if (req.mode == "cor12")
    return ratiokit::eval_cor12(ratiokit::validate_extended(req.ext), opts);
  if (req.mode == "compact")
    return ratiokit::eval_compact(req.raw.p, req.raw.q, req.raw.N, req.raw.xs, opts);
  return ratiokit::eval_stable(req.raw.p, req.raw.q, req.raw.N, req.raw.ys);
}

json params_echo(const Request& req) {
  if (req.mode == "cor12") return json::parse(ratiokit::extended_params_to_json(req.ext));
  return json::parse(ratiokit::params_to_json(req.raw));
}

const char* method_name(ratiokit::EvalMethod m) {
  return m == ratiokit::EvalMethod::Direct ? "direct" : "confluent-extrapolated";
}

ratiokit::EvalOptions eval_options(const EvalArgs& a) {
  ratiokit::EvalOptions opts;
  if (a.tol_opt->count() > 0) {
    if (!(a.tol > 0.0)) throw UsageError{"--tol must be positive"};
    opts.cluster_tol = a.tol;
  }
  return opts;
}

int run_eval(const EvalArgs& a) {
  const Request req = build_request(a);
  const ratiokit::EvalResult r = evaluate(req, eval_options(a));
  std::string text;
  if (a.format == "json") {
    json doc;
    doc["mode"] = req.mode;
    doc["value"] = complex_json(r.value);
    doc["condition"] = r.condition;
    doc["method"] = method_name(r.method);
    doc["extended_precision_used"] = r.extended_precision_used;
    doc["epsilon"] = r.epsilon;
    doc["extrapolation_residual"] = r.extrapolation_residual;
    doc["params"] = params_echo(req);
    text = doc.dump(2) + "\n";
  } else {
    text = "value_re,value_im,condition\n" + format_double(r.value.real()) + "," +
           format_double(r.value.imag()) + "," + format_double(r.condition) + "\n";
  }
  emit(text, a.out);
  return 0;
}

struct SweepVar {
  char family = 'x';  // 'x' or 'y'
  int index = 0;
  enum class Comp { Re, Im, Abs, Arg } comp = Comp::Re;
};

SweepVar parse_sweep_var(const std::string& text) {
  SweepVar v;
  const std::size_t dot = text.find('.');
  if (text.size() < 4 || (text[0] != 'x' && text[0] != 'y') || dot == std::string::npos ||
      dot < 2)
    throw UsageError{"--var must look like x0.re, y1.abs, ... got \"" + text + "\""};
  v.family = text[0];
  const std::string index_text = text.substr(1, dot - 1);
  for (char c : index_text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw UsageError{"--var index must be a nonnegative integer, got \"" + text + "\""};
  v.index = std::atoi(index_text.c_str());
  const std::string comp = text.substr(dot + 1);
  if (comp == "re")
    v.comp = SweepVar::Comp::Re;
  else if (comp == "im")
    v.comp = SweepVar::Comp::Im;
  else if (comp == "abs")
    v.comp = SweepVar::Comp::Abs;
  else if (comp == "arg")
    v.comp = SweepVar::Comp::Arg;
  else
    throw UsageError{"--var component must be re, im, abs or arg, got \"" + comp + "\""};
  return v;
}

void set_component(Complex& z, SweepVar::Comp comp, double v) {
  switch (comp) {
    case SweepVar::Comp::Re:
      z = Complex(v, z.imag());
      break;
    case SweepVar::Comp::Im:
      z = Complex(z.real(), v);
      break;
    case SweepVar::Comp::Abs:
      if (v < 0.0) throw ratiokit::ValueError("swept modulus must be nonnegative");
      z = std::polar(v, std::arg(z));
      break;
    case SweepVar::Comp::Arg:
      z = std::polar(std::abs(z), v);
      break;
  }
}

void apply_sweep_point(Request& req, const SweepVar& var, double point) {
  std::vector<Complex>& family = (req.mode == "cor12")
                                     ? (var.family == 'x' ? req.ext.xs : req.ext.ys)
                                     : (var.family == 'x' ? req.raw.xs : req.raw.ys);
  if (var.index < 0 || static_cast<std::size_t>(var.index) >= family.size()) {
    std::ostringstream msg;
    msg << "sweep variable " << var.family << var.index << " out of range ("
        << family.size() << " entries)";
    throw ratiokit::ValueError(msg.str());
  }
  set_component(family[static_cast<std::size_t>(var.index)], var.comp, point);
}

int run_sweep(const SweepArgs& a) {
  if (a.steps < 1) throw UsageError{"--steps must be at least 1"};
  const SweepVar var = parse_sweep_var(a.var);
  const Request base = build_request(a.base);
  const ratiokit::EvalOptions opts = eval_options(a.base);

  std::string csv = "point,value_re,value_im,condition\n";
  json rows = json::array();
  for (int i = 0; i < a.steps; ++i) {
    const double t = a.steps == 1
                         ? a.from
                         : a.from + (a.to - a.from) * static_cast<double>(i) /
                               static_cast<double>(a.steps - 1);
    Request req = base;
    apply_sweep_point(req, var, t);
    const ratiokit::EvalResult r = evaluate(req, opts);
    if (a.base.format == "json") {
      json row;
      row["point"] = t;
      row["value"] = complex_json(r.value);
      row["condition"] = r.condition;
      rows.push_back(row);
    } else {
      csv += format_double(t) + "," + format_double(r.value.real()) + "," +
             format_double(r.value.imag()) + "," + format_double(r.condition) + "\n";
    }
  }
  emit(a.base.format == "json" ? rows.dump(2) + "\n" : csv, a.base.out);
  return 0;
}

// ---- mc -------------------------------------------------------------------

struct McArgs {
  ParamArgs params;
  std::uint64_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  CLI::Option* seed_opt = nullptr;
  int threads = 1;
  std::string format = "json";
  std::string out;
};

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
  if (seed_opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("RATIOKIT_SEED"))
    return parse_seed_text(env, "RATIOKIT_SEED");
  return kDefaultSeed;
}

int run_mc(const McArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  const ratiokit::McOptions opts{a.threads, 1024};

  ratiokit::Estimate est;
  bool extended = a.params.extended_given();
  if (!extended && a.params.file_given()) {
    // A parameter file may hold either record; the extended one is
    // recognized by its p'/q' fields.
    const std::string text = slurp(a.params.file);
    ratiokit::RawParams raw;
    ratiokit::ExtendedRawParams ext;
    bool is_plain = true;
    try {
      raw = ratiokit::params_from_json(text);
    } catch (const ratiokit::ValueError& plain_err) {
      is_plain = false;
      try {
        ext = ratiokit::extended_params_from_json(text);
      } catch (const ratiokit::ValueError& ext_err) {
        throw ratiokit::ValueError(std::string("not a valid parameter record: ") +
                                   plain_err.what() + " / " + ext_err.what());
      }
    }
    est = is_plain ? ratiokit::mc_estimate(ratiokit::validate(raw), a.samples, seed, opts)
                   : ratiokit::mc_estimate_extended(ratiokit::validate_extended(ext),
                                                    a.samples, seed, opts);
  } else if (extended) {
    est = ratiokit::mc_estimate_extended(ratiokit::validate_extended(extended_record(a.params)),
                                         a.samples, seed, opts);
  } else {
    est = ratiokit::mc_estimate(ratiokit::validate(plain_record(a.params)), a.samples, seed,
                                opts);
  }

  std::string text;
  if (a.format == "json") {
    json doc;
    doc["mean"] = complex_json(est.mean);
    doc["std_error"] = est.std_error;
    doc["samples"] = est.samples;
    doc["seed"] = est.seed;
    doc["method"] = est.method;
    text = doc.dump(2) + "\n";
  } else {
    text = "mean_re,mean_im,std_error,samples,seed,method\n" + format_double(est.mean.real()) +
           "," + format_double(est.mean.imag()) + "," + format_double(est.std_error) + "," +
           std::to_string(est.samples) + "," + std::to_string(est.seed) + "," + est.method +
           "\n";
  }
  emit(text, a.out);
  return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = kDefaultSeed;
  CLI::Option* seed_opt = nullptr;
  int threads = 1;
  std::uint64_t samples = 100000;
  int order = 60;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  ratiokit::VerifyOptions opts;
  opts.seed = resolve_seed(a.seed_opt, a.seed);
  opts.threads = a.threads;
  opts.mc_samples = a.samples;
  opts.series_order = a.order;
  const ratiokit::VerifyReport report = ratiokit::run_verification(a.suite, opts);
  emit(report.to_text(), a.out);
  return report.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-family averages of characteristic-polynomial ratios over random unitaries"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one parameter point");
  add_param_flags(eval_cmd, eval_args.params, /*with_extended=*/true);
  eval_cmd->add_option("--mode", eval_args.mode, "formula variant")
      ->check(CLI::IsMember({"thm1", "cor12", "compact", "stable"}))
      ->capture_default_str();
  eval_args.tol_opt = eval_cmd->add_option(
      "--tol", eval_args.tol, "relative gap below which x's count as one confluent cluster");
  eval_cmd->add_option("--format", eval_args.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out, "write output to this file instead of stdout");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "evaluate along a grid over one parameter coordinate");
  add_param_flags(sweep_cmd, sweep_args.base.params, /*with_extended=*/true);
  sweep_cmd->add_option("--mode", sweep_args.base.mode, "formula variant")
      ->check(CLI::IsMember({"thm1", "cor12", "compact", "stable"}))
      ->capture_default_str();
  sweep_args.base.tol_opt = sweep_cmd->add_option(
      "--tol", sweep_args.base.tol,
      "relative gap below which x's count as one confluent cluster");
  sweep_cmd->add_option("--var", sweep_args.var,
                        "swept coordinate: x<i>.re|im|abs|arg or y<i>.re|im|abs|arg")
      ->required();
  sweep_cmd->add_option("--from", sweep_args.from, "first grid point")->required();
  sweep_cmd->add_option("--to", sweep_args.to, "last grid point")->required();
  sweep_cmd->add_option("--steps", sweep_args.steps, "number of grid points")
      ->capture_default_str();
  sweep_cmd->add_option("--format", sweep_args.base.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.base.out,
                        "write output to this file instead of stdout");

  McArgs mc_args;
  CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate over random unitaries");
  add_param_flags(mc_cmd, mc_args.params, /*with_extended=*/true);
  mc_cmd->add_option("--samples", mc_args.samples, "number of sampled matrices")
      ->capture_default_str();
  mc_args.seed_opt = mc_cmd->add_option(
      "--seed", mc_args.seed, "stream seed; default RATIOKIT_SEED or 24301 (0x5EED)");
  mc_cmd->add_option("--threads", mc_args.threads, "worker threads (result is independent)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mc_cmd->add_option("--format", mc_args.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  mc_cmd->add_option("--out", mc_args.out, "write output to this file instead of stdout");

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run acceptance suites and print pass/fail per criterion");
  {
    std::vector<std::string> allowed = {"all"};
    const auto& names = ratiokit::verify_suite_names();
    allowed.insert(allowed.end(), names.begin(), names.end());
    for (std::size_t i = 1; i <= names.size(); ++i) allowed.push_back(std::to_string(i));
    verify_cmd->add_option("--suite", verify_args.suite, "suite name, number, or \"all\"")
        ->check(CLI::IsMember(allowed))
        ->capture_default_str();
  }
  verify_args.seed_opt = verify_cmd->add_option(
      "--seed", verify_args.seed, "stream seed; default RATIOKIT_SEED or 24301 (0x5EED)");
  verify_cmd->add_option("--threads", verify_args.threads,
                         "worker threads for the Monte Carlo suites (report is independent)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--samples", verify_args.samples,
                         "sample count for the Monte Carlo cross-checks")
      ->capture_default_str();
  verify_cmd->add_option("--order", verify_args.order,
                         "truncation order for the series cross-check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_args.out,
                         "write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message to stderr
    return 64;
  }

  try {
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    if (mc_cmd->parsed()) return run_mc(mc_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
    std::fprintf(stderr, "usage error: a subcommand is required\n");
    return 64;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.message.c_str());
    return 64;
  } catch (const ratiokit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ratiokit::ErrorKind::Numerical ? 3 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
