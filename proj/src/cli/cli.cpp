#include "qcap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcap/bounds.hpp"
#include "qcap/channel_spec.hpp"
#include "qcap/errors.hpp"
#include "qcap/infoquant.hpp"

namespace qcap {

double round_sig9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;  // no "-0"
}

std::string format_sig9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", round_sig9(x));
  return buf;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct Common {
  std::string format = "json";
  std::size_t threads = 1;
  std::size_t dim_cap = 0;  // 0: keep current
};

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

// "lo:hi" inclusive, or a single integer. lo > hi is an empty range.
std::pair<long, long> range_arg(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const long v = std::stol(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const std::string lo_text = text.substr(0, colon);
    const std::string hi_text = text.substr(colon + 1);
    const long lo = std::stol(lo_text, &used);
    if (used != lo_text.size()) throw std::invalid_argument(text);
    const long hi = std::stol(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(what) + ": expected lo:hi, got '" + text + "'");
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

QuantumChannel load_channel(const std::string& path) {
  const nlohmann::json doc = read_json_file(path);
  try {
    return build_channel(channel_spec_from_json(doc));
  } catch (const DimensionError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

DensityOperator load_state(const std::string& path) {
  const nlohmann::json doc = read_json_file(path);
  try {
    return state_from_json(doc);
  } catch (const DimensionError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

CqEnsemble load_ensemble(const std::string& path) {
  const nlohmann::json doc = read_json_file(path);
  try {
    if (!doc.is_object() || !doc.contains("items") || !doc.at("items").is_array()) {
      throw SpecError("ensemble file needs an \"items\" array");
    }
    std::vector<std::pair<double, DensityOperator>> items;
    for (const auto& item : doc.at("items")) {
      const auto& pj = item.at("p");
      const double p = pj.is_string() ? to_double(parse_rational(pj.get<std::string>())) : pj.get<double>();
      items.emplace_back(p, state_from_json(item.at("state")));
    }
    return CqEnsemble(std::move(items));
  } catch (const DimensionError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

nlohmann::json info_json(const char* quantity, const InfoResult& r, std::uint64_t seed) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& [name, v] : r.components) {
    components.push_back({{"name", name}, {"value", round_sig9(v)}, {"unit", "bits"}});
  }
  return {{"quantity", quantity}, {"value", round_sig9(r.value)}, {"unit", "bits"}, {"components", components},
          {"seed", seed}};
}

void emit_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

// --- bounds ---------------------------------------------------------------------

int bounds_theorem(int n, Format fmt, std::ostream& out) {
  if (n < 2) throw UsageError("bounds theorem needs --n >= 2");
  const TheoremReport report = theorem_report(n);
  if (fmt == Format::csv) {
    out << report.to_csv();
  } else {
    emit_json(out, report.to_json());
  }
  return report.pass() ? exit_code::ok : exit_code::check_failed;
}

int bounds_locking(const Rational& p, long d, Format fmt, std::ostream& out) {
  if (p < 0 || p > Rational(1, 2)) throw UsageError("bounds locking needs 0 <= p <= 1/2");
  if (d < 1) throw UsageError("bounds locking needs --d >= 1");
  const double value = locking_upper(p, d);
  if (fmt == Format::csv) {
    out << "p,d,locking_upper\n" << to_string(p) << ',' << d << ',' << format_sig9(value) << '\n';
  } else {
    emit_json(out, {{"p", to_string(p)},
                    {"d", d},
                    {"locking_upper", round_sig9(value)},
                    {"gamma_d", round_sig9(gamma_d(d))},
                    {"unit", "bits"}});
  }
  return exit_code::ok;
}

int bounds_conjecture(const Rational& p, int n, Format fmt, std::ostream& out) {
  if (n < 2) throw UsageError("bounds conjecture needs --n >= 2");
  if (p <= 0 || p > Rational(1, 2)) throw UsageError("bounds conjecture needs 0 < p <= 1/2");
  const Rational t = conjecture_threshold(p, n);
  if (fmt == Format::csv) {
    out << "p,n,epsilon_threshold\n" << to_string(p) << ',' << n << ',' << to_string(t) << '\n';
  } else {
    emit_json(out, {{"p", to_string(p)}, {"n", n}, {"epsilon_threshold", to_string(t)}, {"unit", "rational-bits"}});
  }
  return exit_code::ok;
}

int bounds_p1(const BoundParams& bp, int k, Format fmt, std::ostream& out) {
  if (k < 1) throw UsageError("bounds p1-upper needs --k >= 1");
  const P1Upper r = p1_upper(bp, k);
  if (fmt == Format::csv) {
    out << "n,p,log2d,k,p1_upper,branch,erasure_uses\n"
        << bp.n << ',' << to_string(bp.p) << ',' << to_string(bp.log2d) << ',' << k << ',' << to_string(r.per_use)
        << ',' << to_string(r.branch) << ',' << r.erasure_uses << '\n';
  } else {
    emit_json(out, {{"n", bp.n},
                    {"p", to_string(bp.p)},
                    {"log2d", to_string(bp.log2d)},
                    {"k", k},
                    {"p1_upper", to_string(r.per_use)},
                    {"branch", to_string(r.branch)},
                    {"erasure_uses", r.erasure_uses},
                    {"unit", "rational-bits"}});
  }
  return exit_code::ok;
}

int bounds_q(const BoundParams& bp, int j, Format fmt, std::ostream& out) {
  if (j < 1) throw UsageError("bounds q-lower needs --j >= 1");
  const Rational q = q_lower(bp, j);
  if (fmt == Format::csv) {
    out << "n,p,log2d,j,q_lower\n"
        << bp.n << ',' << to_string(bp.p) << ',' << to_string(bp.log2d) << ',' << j << ',' << to_string(q) << '\n';
  } else {
    emit_json(out, {{"n", bp.n},
                    {"p", to_string(bp.p)},
                    {"log2d", to_string(bp.log2d)},
                    {"j", j},
                    {"q_lower", to_string(q)},
                    {"unit", "rational-bits"}});
  }
  return exit_code::ok;
}

// --- sweep ------------------------------------------------------------------------

int sweep_locking(const Rational& p, std::pair<long, long> range, Format fmt, std::ostream& out) {
  if (p < 0 || p > Rational(1, 2)) throw UsageError("sweep locking needs 0 <= p <= 1/2");
  if (range.first < 1 && range.first <= range.second) throw UsageError("sweep locking needs d >= 1");
  if (fmt == Format::json) {
    nlohmann::json rows = nlohmann::json::array();
    for (long d = range.first; d <= range.second; ++d) {
      rows.push_back({{"p", to_string(p)}, {"d", d}, {"locking_upper", round_sig9(locking_upper(p, d))},
                      {"unit", "bits"}});
    }
    emit_json(out, {{"rows", rows}});
    return exit_code::ok;
  }
  out << "p,d,locking_upper\n";
  for (long d = range.first; d <= range.second; ++d) {
    out << to_string(p) << ',' << d << ',' << format_sig9(locking_upper(p, d)) << '\n';
  }
  return exit_code::ok;
}

int sweep_bounds(int n, std::pair<long, long> range, Format fmt, std::ostream& out) {
  if (n < 1) throw UsageError("sweep bounds needs --n >= 1");
  if (range.first < 1 && range.first <= range.second) throw UsageError("sweep bounds needs k >= 1");
  TheoremReport report{theorem_params(n), {}};
  for (long k = range.first; k <= range.second; ++k) report.rows.push_back(theorem_row(n, static_cast<int>(k)));
  if (fmt == Format::json) {
    nlohmann::json j = report.to_json();
    j.erase("pass");
    emit_json(out, j);
  } else {
    out << report.to_csv();
  }
  return exit_code::ok;
}

// --- verify -------------------------------------------------------------------------

int verify(const std::string& suite, const VerifyOptions& opts, Format fmt, std::ostream& out, std::ostream& err) {
  const auto& names = verify_suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw UsageError("unknown suite '" + suite + "'");
  }
  const std::vector<CheckResult> checks = run_verify_suite(suite, opts, err);
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;

  if (fmt == Format::csv) {
    out << "suite,check,pass,value,reference,tolerance\n";
    for (const auto& c : checks) {
      out << c.suite << ',' << c.name << ',' << (c.pass ? "true" : "false") << ',' << format_sig9(c.value) << ','
          << format_sig9(c.reference) << ',' << format_sig9(c.tolerance) << '\n';
    }
    return all_pass ? exit_code::ok : exit_code::check_failed;
  }

  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.suite << '.' << c.name << " value=" << format_sig9(c.value)
        << " reference=" << format_sig9(c.reference) << " tolerance=" << format_sig9(c.tolerance) << '\n';
    nlohmann::json entry = {{"suite", c.suite},
                            {"check", c.name},
                            {"pass", c.pass},
                            {"value", round_sig9(c.value)},
                            {"reference", round_sig9(c.reference)},
                            {"tolerance", round_sig9(c.tolerance)}};
    if (!c.details.empty()) entry["details"] = c.details;
    list.push_back(std::move(entry));
  }
  const nlohmann::json summary = {{"suite", suite},
                                  {"seed", opts.seed},
                                  {"samples", opts.samples},
                                  {"mc_samples", opts.mc_samples},
                                  {"checks", list},
                                  {"passed", std::count_if(checks.begin(), checks.end(),
                                                           [](const CheckResult& c) { return c.pass; })},
                                  {"total", checks.size()},
                                  {"pass", all_pass}};
  emit_json(out, summary);
  return all_pass ? exit_code::ok : exit_code::check_failed;
}

// Restores the global dimension cap when an invocation ends.
class CapGuard {
 public:
  CapGuard() : saved_(dimension_cap()) {}
  ~CapGuard() { set_dimension_cap(saved_); }
  CapGuard(const CapGuard&) = delete;
  CapGuard& operator=(const CapGuard&) = delete;

 private:
  std::size_t saved_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CapGuard cap_guard;
  Common common;

  CLI::App app{"qcap: channel capacity bounds, information quantities and property checks", "qcap"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", common.threads, "Worker threads for Monte Carlo and searches")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}));
  app.add_option("--dim-cap", common.dim_cap, "Override the total-dimension cap (also QCAP_DIM_CAP)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Exact-rational bounds");
  bounds->require_subcommand(1);
  int theorem_n = 0;
  auto* theorem = bounds->add_subcommand("theorem", "Interleaving table for k = 1..n-1");
  theorem->add_option("--n", theorem_n)->required();

  std::string locking_p;
  long locking_d = 0;
  auto* locking = bounds->add_subcommand("locking", "Locking-capacity upper bound of the erasure channel");
  locking->add_option("--p", locking_p)->required();
  locking->add_option("--d", locking_d)->required();

  std::string conj_p;
  int conj_n = 0;
  auto* conjecture = bounds->add_subcommand("conjecture", "Epsilon threshold of the sharper-bound conjecture");
  conjecture->add_option("--p", conj_p)->required();
  conjecture->add_option("--n", conj_n)->required();

  std::string bp_p = "11/24";
  std::string bp_log2d;
  int bp_n = 0;
  int bp_k = 0;
  int bp_j = 0;
  auto* p1 = bounds->add_subcommand("p1-upper", "Per-use P1 upper bound of k uses");
  p1->add_option("--n", bp_n)->required();
  p1->add_option("--p", bp_p, "default 11/24");
  p1->add_option("--log2d", bp_log2d, "default 4n^2/(1-2p)");
  p1->add_option("--k", bp_k)->required();
  auto* ql = bounds->add_subcommand("q-lower", "Per-use witness coherent information over j uses");
  ql->add_option("--n", bp_n)->required();
  ql->add_option("--p", bp_p, "default 11/24");
  ql->add_option("--log2d", bp_log2d, "default 4n^2/(1-2p)");
  ql->add_option("--j", bp_j)->required();

  // info
  auto* info = app.add_subcommand("info", "Information quantities of a channel");
  info->require_subcommand(1);
  std::string channel_file;
  std::string state_file;
  std::string ensemble_file;
  std::uint64_t info_seed = 0;
  auto add_info = [&](const char* name, const char* help) {
    auto* sub = info->add_subcommand(name, help);
    sub->add_option("--channel", channel_file)->required();
    sub->add_option("--state", state_file);
    sub->add_option("--ensemble", ensemble_file);
    sub->add_option("--seed", info_seed);
    return sub;
  };
  auto* coherent = add_info("coherent", "Coherent information H(B) - H(E)");
  auto* holevo = add_info("holevo", "Holevo quantities I(X;B) and I(X;E)");
  auto* priv = add_info("private", "I(X;B) - I(X;E)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  std::string suite;
  VerifyOptions vopts;
  int v_n = 0;
  int v_uses = 0;
  std::string v_p = "1/4";
  verify_cmd->add_option("suite", suite, "lemma1 | lemma2-appendix | lemma3 | lower-bound | all")->required();
  verify_cmd->add_option("--seed", vopts.seed);
  verify_cmd->add_option("--samples", vopts.samples)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--mc-samples", vopts.mc_samples)->check(CLI::PositiveNumber);
  auto* v_n_opt = verify_cmd->add_option("--n", v_n);
  verify_cmd->add_option("--d", vopts.d);
  verify_cmd->add_option("--p", v_p);
  auto* v_uses_opt = verify_cmd->add_option("--uses", v_uses);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Tabulate bounds over a grid (CSV by default)");
  sweep->require_subcommand(1);
  std::string sweep_p;
  std::string sweep_range;
  int sweep_n = 0;
  auto* sweep_lock = sweep->add_subcommand("locking", "locking_upper over d = lo..hi");
  sweep_lock->add_option("--p", sweep_p)->required();
  sweep_lock->add_option("--d", sweep_range)->required();
  auto* sweep_bnd = sweep->add_subcommand("bounds", "Interleaving rows over k = lo..hi");
  sweep_bnd->add_option("--n", sweep_n)->required();
  sweep_bnd->add_option("--k", sweep_range)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::usage;
  }

  const bool csv_requested = app.count("--format") > 0 && common.format == "csv";
  const Format fmt = csv_requested ? Format::csv : Format::json;

  try {
    if (common.dim_cap > 0) set_dimension_cap(common.dim_cap);

    if (*bounds) {
      if (*theorem) return bounds_theorem(theorem_n, fmt, out);
      if (*locking) return bounds_locking(rational_arg(locking_p, "--p"), locking_d, fmt, out);
      if (*conjecture) return bounds_conjecture(rational_arg(conj_p, "--p"), conj_n, fmt, out);
      BoundParams bp;
      bp.n = bp_n;
      bp.p = rational_arg(bp_p, "--p");
      if (bp.n < 1) throw UsageError("--n must be >= 1");
      if (bp.p < 0 || bp.p >= Rational(1, 2)) {
        if (bp_log2d.empty()) throw UsageError("default log2d needs p < 1/2; pass --log2d");
      }
      bp.log2d = bp_log2d.empty() ? Rational(4 * bp.n * bp.n) / (1 - 2 * bp.p) : rational_arg(bp_log2d, "--log2d");
      try {
        bp.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (*p1) return bounds_p1(bp, bp_k, fmt, out);
      return bounds_q(bp, bp_j, fmt, out);
    }

    if (*info) {
      const QuantumChannel ch = load_channel(channel_file);
      if (*coherent) {
        if (state_file.empty()) throw UsageError("info coherent needs --state");
        emit_json(out, info_json("coherent_information", coherent_information(ch, load_state(state_file)), info_seed));
        return exit_code::ok;
      }
      if (ensemble_file.empty() && state_file.empty()) throw UsageError("info holevo/private needs --ensemble");
      const CqEnsemble ens = ensemble_file.empty()
                                 ? CqEnsemble({{1.0, load_state(state_file)}})
                                 : load_ensemble(ensemble_file);
      if (ens.layout().total() != ch.in_dim()) {
        throw DataError("ensemble dimension " + std::to_string(ens.layout().total()) +
                        " does not match channel input " + std::to_string(ch.in_dim()));
      }
      if (*holevo) {
        const InfoResult bob = holevo_bob(ch, ens);
        const InfoResult eve = holevo_eve(ch, ens);
        nlohmann::json j = info_json("holevo_bob", bob, info_seed);
        j["eve"] = info_json("holevo_eve", eve, info_seed);
        j["eve"].erase("seed");
        emit_json(out, j);
        return exit_code::ok;
      }
      (void)priv;
      emit_json(out, info_json("private_value", private_value(ch, ens), info_seed));
      return exit_code::ok;
    }

    if (*verify_cmd) {
      vopts.threads = common.threads;
      vopts.p = rational_arg(v_p, "--p");
      if (vopts.p < 0 || vopts.p > 1) throw UsageError("--p must lie in [0, 1]");
      if (v_n_opt->count() > 0) {
        if (v_n < 1) throw UsageError("--n must be >= 1");
        vopts.n = v_n;
      }
      if (v_uses_opt->count() > 0) {
        if (v_uses < 2) throw UsageError("--uses must be >= 2");
        vopts.uses = v_uses;
      }
      if (vopts.d < 2) throw UsageError("--d must be >= 2");
      return verify(suite, vopts, fmt, out, err);
    }

    if (*sweep) {
      const Format sweep_fmt = app.count("--format") > 0 ? fmt : Format::csv;
      if (*sweep_lock) return sweep_locking(rational_arg(sweep_p, "--p"), range_arg(sweep_range, "--d"), sweep_fmt, out);
      return sweep_bounds(sweep_n, range_arg(sweep_range, "--k"), sweep_fmt, out);
    }
  } catch (const UsageError& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const DataError& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::data;
  } catch (const SpecError& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::data;
  } catch (const DimensionError& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::dimension;
  } catch (const std::invalid_argument& e) {
    err << "qcap: " << e.what() << '\n';
    return exit_code::data;
  }
  err << "qcap: no command\n";
  return exit_code::usage;
}

}  // namespace qcap
