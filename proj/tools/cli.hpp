#pragma once

// Command-line front end: subtle <command> [flags].
//
// Exit codes: 0 success, 1 mathematical mismatch, 2 usage or input error,
// 3 Groebner budget exceeded, 4 internal failure.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subtle/json_io.hpp"
#include "subtle/spaces.hpp"
#include "subtle/version.hpp"

namespace subtle::cli {

using nlohmann::json;

enum Exit : int { ok = 0, mismatch = 1, usage = 2, budget = 3, internal = 4 };

struct Settings {
  std::string flavor = "bso";
  std::optional<int> n, j, k, from, to, max_j;
  std::int64_t max_degree = 20;
  std::string format = "text";
  std::optional<std::uint64_t> budget;
  unsigned jobs = 1;
  bool verify = false;
  std::string poly;
};

inline std::uint64_t effective_budget(const Settings& s) {
  if (s.budget) return *s.budget;
  if (const char* env = std::getenv("SUBTLE_BUDGET")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("SUBTLE_BUDGET", std::string("not an unsigned integer: ") + env);
  }
  return GroebnerOptions{}.budget;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// One table row: the payload, its wall time, and how it affects the exit code.
struct Row {
  json data;
  double wall_time = 0;
  Exit status = ok;
};

class Emitter {
 public:
  Emitter(const Settings& s, std::ostream& out) : s_(s), out_(out) {}

  json meta(const std::vector<double>& times) const {
    return {{"version", SUBTLE_VERSION}, {"budget", effective_budget(s_)}, {"wall_time", times}};
  }

  /// Single-value result; text is the plain rendering.
  void single(const std::string& command, json payload, const std::string& text, double wall_time) {
    if (s_.format == "text") {
      out_ << text << '\n';
    } else if (s_.format == "csv") {
      std::string header, values;
      for (auto& [key, v] : payload.items()) {
        header += (header.empty() ? "" : ",") + key;
        values += (values.empty() ? "" : ",") + csv_cell(v);
      }
      out_ << header << '\n' << values << '\n';
    } else {
      payload["command"] = command;
      payload["meta"] = meta({wall_time});
      out_ << payload.dump(s_.format == "json" ? 2 : -1) << '\n';
    }
  }

  void begin_table(const std::vector<std::string>& columns) {
    columns_ = columns;
    if (s_.format == "csv") {
      for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
      out_ << '\n';
    }
  }

  void row(const Row& r, const std::function<std::string(const json&)>& text) {
    times_.push_back(r.wall_time);
    if (s_.format == "json") {
      rows_.push_back(r.data);
      return;
    }
    if (s_.format == "jsonl") {
      out_ << r.data.dump() << '\n';
    } else if (s_.format == "csv") {
      for (std::size_t i = 0; i < columns_.size(); ++i)
        out_ << (i ? "," : "") << (r.data.contains(columns_[i]) ? csv_cell(r.data[columns_[i]]) : "");
      out_ << '\n';
    } else {
      out_ << text(r.data) << '\n';
    }
    out_.flush();
  }

  void end_table(const std::string& command) {
    if (s_.format == "json") {
      json doc{{"command", command}, {"rows", rows_}, {"meta", meta(times_)}};
      out_ << doc.dump(2) << '\n';
    } else if (s_.format == "jsonl") {
      out_ << json{{"meta", meta(times_)}}.dump() << '\n';
    }
  }

 private:
  static std::string csv_cell(const json& v) {
    if (v.is_string()) return quote(v.get<std::string>());
    if (v.is_null()) return "";
    if (v.is_primitive()) return v.dump();
    return quote(v.dump());
  }
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + '"';
  }

  const Settings& s_;
  std::ostream& out_;
  std::vector<std::string> columns_;
  json rows_ = json::array();
  std::vector<double> times_;
};

/// Evaluates rows 0..count-1 on up to `jobs` threads and hands them to
/// `sink` in index order as soon as each prefix is complete.
inline void run_rows(std::size_t count, unsigned jobs, const std::function<Row(std::size_t)>& compute,
                     const std::function<void(const Row&)>& sink) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) sink(compute(i));
    return;
  }
  std::vector<std::optional<Row>> done(count);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      Row r = compute(i);
      std::lock_guard lock(mu);
      done[i] = std::move(r);
      cv.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, count); ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[i].has_value(); });
    Row r = std::move(*done[i]);
    lock.unlock();
    sink(r);
  }
}

// Runs `body` and converts a budget overrun into a row marked with exit 3.
inline Row guarded_row(const std::function<Row()>& body, json partial) {
  auto start = std::chrono::steady_clock::now();
  try {
    Row r = body();
    r.wall_time = seconds_since(start);
    return r;
  } catch (const budget_exceeded& e) {
    partial["error"] = e.what();
    return {std::move(partial), seconds_since(start), Exit::budget};
  } catch (const mismatch_error& e) {
    partial["error"] = e.what();
    partial["ok"] = false;
    return {std::move(partial), seconds_since(start), Exit::mismatch};
  }
}

inline Exit combine(Exit a, Exit b) {
  // A mismatch outranks an incomplete computation.
  if (a == Exit::mismatch || b == Exit::mismatch) return Exit::mismatch;
  return a != Exit::ok ? a : b;
}

inline std::string format_set(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

inline int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw CLI::RequiredError(flag);
  return *v;
}

inline SteenrodContext steenrod_context(const Settings& s) {
  const int n = require(s.n, "--n");
  if (s.flavor == "bso") return SteenrodContext::bso(n);
  if (s.flavor == "bo") return SteenrodContext::bo(n);
  if (s.flavor == "top") return SteenrodContext::bso_top(n);
  throw CLI::ValidationError("--flavor", "Steenrod squares need flavor bo, bso or top");
}

inline Family family_of(const std::string& flavor) {
  if (flavor == "bo") return Family::BO;
  if (flavor == "bso") return Family::BSO;
  if (flavor == "bspin") return Family::BSpin;
  if (flavor == "bg2") return Family::BG2;
  return Family::BSO_top;
}

inline std::optional<int> n_for(const Settings& s, Family f) {
  if (f == Family::BG2) return std::nullopt;
  return require(s.n, "--n");
}

inline std::pair<int, int> range_of(const Settings& s) {
  if (s.n && !s.from && !s.to) return {*s.n, *s.n};
  const int from = require(s.from, "--from");
  const int to = s.to.value_or(from);
  if (to < from) throw CLI::ValidationError("--to", "--to must not be smaller than --from");
  return {from, to};
}

class Runner {
 public:
  Runner(const Settings& s, std::ostream& out) : s_(s), out_(out), emit_(s, out) {
    options_.budget = effective_budget(s);
  }

  Exit sq() {
    auto start = std::chrono::steady_clock::now();
    auto ctx = steenrod_context(s_);
    const int k = require(s_.k, "--k");
    Poly x = parse_poly(ctx.ring(), s_.poly);
    Poly r = subtle::sq(ctx, k, x);
    emit_.single("sq", {{"input", to_string(x)}, {"k", k}, {"n", ctx.n()}, {"result", to_string(r)}}, to_string(r),
                 seconds_since(start));
    return Exit::ok;
  }

  Exit theta() {
    auto start = std::chrono::steady_clock::now();
    auto ctx = steenrod_context(s_);
    const int j = require(s_.j, "--j");
    Poly r = subtle::theta(ctx, j);
    json payload{{"n", ctx.n()}, {"j", j}, {"result", to_string(r)}};
    if (auto d = bidegree_of(r); d.kind == Homogeneity::Kind::homogeneous) payload["bidegree"] = to_json(d.degree);
    emit_.single("theta", payload, to_string(r), seconds_since(start));
    return Exit::ok;
  }

  Exit ktable() {
    auto [from, to] = range_of(s_);
    if (from < 2) throw domain_error("k table starts at n = 2");
    std::vector<std::string> cols{"n", "expected", "computed", "ok"};
    if (s_.verify) cols.insert(cols.end(), {"regular", "theta_k_in_ik", "tau_prefix_regular"});
    cols.push_back("error");
    return table("ktable", from, to, cols, [this](int n) {
      json partial{{"n", n}, {"expected", k_expected(n)}, {"computed", nullptr}, {"ok", false}};
      return guarded_row(
          [&] {
            json row = partial;
            const int k = k_computed(n, options_);
            row["computed"] = k;
            bool good = k == k_expected(n);
            if (s_.verify) {
              auto rep = verify_mq1(n, k_expected(n), options_);
              row["regular"] = rep.regular;
              row["theta_k_in_ik"] = rep.theta_k_in_ik;
              row["tau_prefix_regular"] = rep.tau_prefix_regular;
              good = good && rep.all();
            }
            row["ok"] = good;
            return Row{row, 0, good ? Exit::ok : Exit::mismatch};
          },
          partial);
    }, [](const json& r) {
      std::ostringstream os;
      const bool done = !r["computed"].is_null();
      os << "n=" << r["n"] << " expected=" << r["expected"] << " computed=" << (done ? r["computed"].dump() : "-")
         << (r["ok"].get<bool>() ? " ok" : done ? " MISMATCH" : " INCOMPLETE");
      if (r.contains("error")) os << " (" << r["error"].get<std::string>() << ")";
      return os.str();
    });
  }

  Exit htable() {
    auto [from, to] = range_of(s_);
    if (from < 2) throw domain_error("h table starts at n = 2");
    return table("htable", from, to, {"n", "expected", "computed", "ok"}, [](int n) {
      auto start = std::chrono::steady_clock::now();
      const int e = h_expected(n), c = h_of(n);
      return Row{{{"n", n}, {"expected", e}, {"computed", c}, {"ok", e == c}}, seconds_since(start),
                 e == c ? Exit::ok : Exit::mismatch};
    }, [](const json& r) {
      std::ostringstream os;
      os << "n=" << r["n"] << " expected=" << r["expected"] << " computed=" << r["computed"]
         << (r["ok"].get<bool>() ? " ok" : " MISMATCH");
      return os.str();
    });
  }

  Exit verify() {
    auto [from, to] = range_of(s_);
    if (from < 2) throw domain_error("verify needs n >= 2");
    std::vector<std::string> cols{"n", "k", "h", "regular", "theta_k_in_ik", "tau_prefix_regular", "ok", "error"};
    return table("verify", from, to, cols, [this](int n) {
      const int k = s_.k.value_or(k_expected(n));
      json partial{{"n", n}, {"k", k}, {"h", h_of(n)}, {"ok", false}};
      return guarded_row(
          [&] {
            auto rep = verify_mq1(n, k, options_);
            json row{{"n", n},
                     {"k", k},
                     {"h", rep.h},
                     {"regular", rep.regular},
                     {"theta_k_in_ik", rep.theta_k_in_ik},
                     {"tau_prefix_regular", rep.tau_prefix_regular},
                     {"ok", rep.all()}};
            return Row{row, 0, rep.all() ? Exit::ok : Exit::mismatch};
          },
          partial);
    }, [](const json& r) {
      std::ostringstream os;
      os << "n=" << r["n"] << " k=" << r["k"] << " h=" << r["h"];
      for (const char* key : {"regular", "theta_k_in_ik", "tau_prefix_regular"})
        if (r.contains(key)) os << ' ' << key << '=' << (r[key].get<bool>() ? "true" : "false");
      if (r.contains("error")) os << " (" << r["error"].get<std::string>() << ")";
      return os.str();
    });
  }

  Exit present() {
    auto start = std::chrono::steady_clock::now();
    Family f = family_of(s_.flavor);
    auto pres = subtle::present(f, n_for(s_, f), options_);
    std::ostringstream text;
    text << to_string(pres.family);
    if (pres.n) text << '_' << *pres.n;
    text << " = F2[";
    for (std::size_t i = 0; i < pres.ring.size(); ++i) text << (i ? ", " : "") << pres.ring.generator(i).name;
    text << ']';
    if (!pres.relations.empty()) {
      text << " / (";
      for (std::size_t i = 0; i < pres.relations.size(); ++i)
        text << (i ? ", " : "") << to_string(pres.relations.elements()[i]);
      text << ')';
    }
    if (pres.k) text << "  k=" << *pres.k;
    emit_.single("present", to_json(pres), text.str(), seconds_since(start));
    return Exit::ok;
  }

  Exit poincare() {
    auto start = std::chrono::steady_clock::now();
    Family f = family_of(s_.flavor);
    auto pres = subtle::present(f, n_for(s_, f), options_);
    auto ps = subtle::poincare(pres, s_.max_degree);
    std::ostringstream text;
    for (const auto& e : ps.expansion) text << "(" << e.q << ")[" << e.p << "] " << e.dim << '\n';
    std::string t = text.str();
    if (!t.empty()) t.pop_back();
    emit_.single("poincare",
                 {{"family", std::string(to_string(pres.family))},
                  {"n", pres.n ? json(*pres.n) : json(nullptr)},
                  {"max_degree", s_.max_degree},
                  {"series", to_json(ps.series)},
                  {"expansion", to_json(ps.expansion)}},
                 t, seconds_since(start));
    return Exit::ok;
  }

  Exit torsor() {
    auto [from, to] = range_of(s_);
    if (from < 3) throw domain_error("torsor relations need n >= 3");
    const int max_j = s_.max_j.value_or(30);
    Exit status = Exit::ok;
    emit_.begin_table({"n", "j", "relation", "verified"});
    run_rows(static_cast<std::size_t>(to - from + 1), s_.jobs, [&](std::size_t i) {
      const int n = from + static_cast<int>(i);
      auto start = std::chrono::steady_clock::now();
      json rels = json::array();
      bool all = true;
      for (const auto& r : torsor_relations(n, max_j)) {
        rels.push_back({{"n", n}, {"j", r.j}, {"relation", to_string(r.relation)}, {"verified", r.verified}});
        all = all && r.verified;
      }
      return Row{rels, seconds_since(start), all ? Exit::ok : Exit::mismatch};
    }, [&](const Row& batch) {
      status = combine(status, batch.status);
      for (const auto& r : batch.data)
        emit_.row({r, batch.wall_time, Exit::ok}, [](const json& r) {
          return "n=" + std::to_string(r["n"].get<int>()) + " j=" + std::to_string(r["j"].get<int>()) + " " +
                 r["relation"].get<std::string>() + (r["verified"].get<bool>() ? " verified" : " FAILED");
        });
    });
    emit_.end_table("torsor");
    return status;
  }

  Exit radical() {
    auto start = std::chrono::steady_clock::now();
    const int n = require(s_.n, "--n");
    auto form = quillen_form(n);
    auto rad = right_radical(form);
    const int h = h_of(n);
    std::ostringstream text;
    for (const auto& row : form.rows()) {
      for (auto v : row) text << static_cast<int>(v);
      text << '\n';
    }
    text << "radical dim " << rad.dim();
    for (const auto& v : rad.basis()) {
      text << " (";
      for (std::size_t i = 0; i < v.size(); ++i) text << (i ? "," : "") << v[i];
      text << ')';
    }
    text << "\nh=" << h;
    emit_.single("radical",
                 {{"n", n},
                  {"matrix", to_json(form)},
                  {"radical", to_json(rad)},
                  {"radical_dim", rad.dim()},
                  {"h", h}},
                 text.str(), seconds_since(start));
    return h == h_expected(n) ? Exit::ok : Exit::mismatch;
  }

  Exit g2check() {
    auto start = std::chrono::steady_clock::now();
    auto rep = g2_gysin_check({}, options_);
    const bool good = rep.v8_regular && rep.series_identity;
    emit_.single("g2check", {{"v8_regular", rep.v8_regular}, {"series_identity", rep.series_identity}},
                 std::string("v8_regular=") + (rep.v8_regular ? "true" : "false") +
                     " series_identity=" + (rep.series_identity ? "true" : "false"),
                 seconds_since(start));
    return good ? Exit::ok : Exit::mismatch;
  }

  Exit jbound() {
    auto start = std::chrono::steady_clock::now();
    const int n = require(s_.n, "--n");
    auto b = j_lower_bound(n);
    emit_.single("jbound", {{"n", n}, {"bound", b}}, format_set(b), seconds_since(start));
    return Exit::ok;
  }

 private:
  Exit table(const std::string& command, int from, int to, const std::vector<std::string>& columns,
             const std::function<Row(int)>& compute, const std::function<std::string(const json&)>& text) {
    Exit status = Exit::ok;
    emit_.begin_table(columns);
    run_rows(static_cast<std::size_t>(to - from + 1), s_.jobs,
             [&](std::size_t i) { return compute(from + static_cast<int>(i)); },
             [&](const Row& r) {
               status = combine(status, r.status);
               emit_.row(r, text);
             });
    emit_.end_table(command);
    return status;
  }

  const Settings& s_;
  std::ostream& out_;
  Emitter emit_;
  GroebnerOptions options_;
};

/// Parses and runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Subtle Stiefel-Whitney classes, Steenrod squares and spin presentations"};
  app.name("subtle");
  app.set_version_flag("--version", SUBTLE_VERSION);
  app.require_subcommand(1, 1);

  const std::vector<std::string> flavors{"bo", "bso", "bspin", "bg2", "top"};
  const std::vector<std::string> formats{"json", "jsonl", "csv", "text"};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", s.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--budget", s.budget, "Buchberger pair reductions per Groebner call (env SUBTLE_BUDGET)");
    sub->add_option("--jobs", s.jobs, "Rows evaluated in parallel")->check(CLI::Range(1u, 256u));
  };
  auto add_flavor = [&](CLI::App* sub) {
    sub->add_option("--flavor", s.flavor, "Ring flavor")->check(CLI::IsMember(flavors));
  };
  auto add_range = [&](CLI::App* sub) {
    sub->add_option("--n", s.n, "Single rank");
    sub->add_option("--from", s.from, "First rank");
    sub->add_option("--to", s.to, "Last rank");
  };

  auto* c_sq = app.add_subcommand("sq", "Steenrod square Sq^k of a polynomial");
  add_flavor(c_sq);
  c_sq->add_option("--n", s.n, "Rank")->required();
  c_sq->add_option("--k", s.k, "Square index")->required()->check(CLI::NonNegativeNumber);
  c_sq->add_option("poly", s.poly, "Polynomial")->required();
  add_common(c_sq);

  auto* c_theta = app.add_subcommand("theta", "theta_j = Sq^{2^{j-1}} ... Sq^1 u2");
  add_flavor(c_theta);
  c_theta->add_option("--n", s.n, "Rank")->required();
  c_theta->add_option("--j", s.j, "Index")->required()->check(CLI::NonNegativeNumber);
  add_common(c_theta);

  auto* c_ktable = app.add_subcommand("ktable", "Compute k(n) and compare with the table");
  add_range(c_ktable);
  c_ktable->add_flag("--verify", s.verify, "Also certify regularity, membership and the t-prefix");
  add_common(c_ktable);

  auto* c_htable = app.add_subcommand("htable", "h(n) from radicals of the Quillen forms");
  add_range(c_htable);
  add_common(c_htable);

  auto* c_verify = app.add_subcommand("verify", "Certify theta_0..theta_{k-1} regular and theta_k in I_k");
  add_range(c_verify);
  c_verify->add_option("--k", s.k, "Sequence length (default: table value)")->check(CLI::NonNegativeNumber);
  add_common(c_verify);

  auto* c_present = app.add_subcommand("present", "Presentation of a cohomology ring");
  add_flavor(c_present);
  c_present->add_option("--n", s.n, "Rank");
  add_common(c_present);

  auto* c_poincare = app.add_subcommand("poincare", "Hilbert series and truncated expansion");
  add_flavor(c_poincare);
  c_poincare->add_option("--n", s.n, "Rank");
  c_poincare->add_option("--max-degree", s.max_degree, "Largest p + q in the expansion")
      ->check(CLI::NonNegativeNumber);
  add_common(c_poincare);

  auto* c_torsor = app.add_subcommand("torsor", "Relations among subtle classes of Spin_n-torsors");
  add_range(c_torsor);
  c_torsor->add_option("--max-j", s.max_j, "Largest j")->check(CLI::NonNegativeNumber);
  add_common(c_torsor);

  auto* c_radical = app.add_subcommand("radical", "Quillen form of rank n and its right radical");
  c_radical->add_option("--n", s.n, "Rank")->required();
  add_common(c_radical);

  auto* c_g2 = app.add_subcommand("g2check", "Gysin consistency between BSpin_7 and BG2");
  add_common(c_g2);

  auto* c_jbound = app.add_subcommand("jbound", "Lower bound {2^{j-1} : 2^j + 1 <= n} for J(q)");
  c_jbound->add_option("--n", s.n, "Rank")->required();
  add_common(c_jbound);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    Runner runner(s, out);
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "sq") return runner.sq();
    if (name == "theta") return runner.theta();
    if (name == "ktable") return runner.ktable();
    if (name == "htable") return runner.htable();
    if (name == "verify") return runner.verify();
    if (name == "present") return runner.present();
    if (name == "poincare") return runner.poincare();
    if (name == "torsor") return runner.torsor();
    if (name == "radical") return runner.radical();
    if (name == "g2check") return runner.g2check();
    if (name == "jbound") return runner.jbound();
    err << "unknown command " << name << '\n';
    return Exit::usage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const budget_exceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return Exit::budget;
  } catch (const mismatch_error& e) {
    err << "mismatch: " << e.what() << '\n';
    return Exit::mismatch;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return Exit::internal;
  }
}

}  // namespace subtle::cli
