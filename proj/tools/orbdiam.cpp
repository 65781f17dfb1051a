// orbdiam: exact orbital diameters and bound certificates for affine groups.
//
//   orbdiam diameter   <instance.json> [--undirected] [--cap N] [--threads N] [--method M]
//   orbdiam certify    <instance.json> [--targets all | --targets sample N] [--seed S] [--branch B]
//   orbdiam power-sums --p P --k K (--m M --rhs b1,...,bk | --frontier M_MAX)
//   orbdiam family     <wreath|sl|gl|singer|sym2> --p P [--d D] [--extra E] [-o out.json]
//
// stdout carries the machine-readable result only; progress goes to stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbdiam/orbdiam.hpp"

namespace {

using orbdiam::ExitCode;
using orbdiam::Json;

bool g_quiet = false;

void log(const std::string& msg) {
  if (!g_quiet) std::cerr << "[orbdiam] " << msg << '\n';
}

std::uint64_t closure_cap(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ORBDIAM_CAP")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw orbdiam::ParseError(std::string("ORBDIAM_CAP is not an integer: ") + env);
    }
  }
  return orbdiam::kDefaultClosureCap;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw orbdiam::Error("cannot write '" + out_path + "'");
  out << text;
}

std::vector<orbdiam::Residue> parse_rhs(const std::string& s, std::uint32_t p) {
  std::vector<orbdiam::Residue> out;
  std::stringstream ss(s);
  std::string item;
  const orbdiam::PrimeField f(p);
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(f.reduce(std::stoll(item)));
    } catch (const std::exception&) {
      throw orbdiam::ParseError("bad rhs entry '" + item + "'");
    }
  }
  return out;
}

struct Loaded {
  orbdiam::AffineInstance inst;
  orbdiam::GroupClosure closure;
  orbdiam::OrbitPartition part;
};

Loaded load(const std::string& path, std::uint64_t cap) {
  auto inst = orbdiam::load_instance(path);
  log("instance '" + inst.label + "': p=" + std::to_string(inst.p) + " d=" + std::to_string(inst.d));
  auto closure = orbdiam::close_group(inst, cap);
  log("|G| = " + std::to_string(closure.order()));
  auto part = orbdiam::orbits_on_V(inst);
  log(std::to_string(part.orbits.size()) + " nonzero orbits on " + std::to_string(part.space.size()) + " vectors");
  return Loaded{std::move(inst), std::move(closure), std::move(part)};
}

Json report_header(const Loaded& l) {
  return Json{{"instance", orbdiam::instance_json(l.inst)},
              {"group_order", l.closure.order()},
              {"irreducible", true},
              {"p_divides_order", l.closure.order() % l.inst.p == 0}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact orbital-graph diameters of affine permutation groups"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", g_quiet, "suppress progress output on stderr");

  // diameter
  auto* diam = app.add_subcommand("diameter", "exact per-orbit orbital diameters");
  std::string diam_path, diam_out;
  bool undirected = false;
  std::optional<std::uint64_t> diam_cap;
  unsigned diam_threads = 1;
  std::string method = "layered";
  diam->add_option("instance", diam_path, "instance JSON file")->required();
  diam->add_flag("--undirected", undirected, "also compute undirected diameters");
  diam->add_option("--cap", diam_cap, "group closure cap (overrides ORBDIAM_CAP)");
  diam->add_option("--threads", diam_threads, "worker threads for per-orbit work")->check(CLI::PositiveNumber);
  diam->add_option("--method", method, "layered | sumset | bfs")->check(CLI::IsMember({"layered", "sumset", "bfs"}));
  diam->add_option("-o,--output", diam_out, "write report here instead of stdout");

  // certify
  auto* cert = app.add_subcommand("certify", "build and verify explicit witness decompositions");
  std::string cert_path, cert_out, branch = "auto";
  std::vector<std::string> targets;
  std::uint64_t seed = orbdiam::CertifyOptions{}.seed;
  std::optional<std::uint64_t> cert_cap;
  unsigned cert_threads = 1;
  cert->add_option("instance", cert_path, "instance JSON file")->required();
  cert->add_option("--targets", targets, "all | sample N")->expected(1, 2);
  cert->add_option("--seed", seed, "seed for target sampling");
  cert->add_option("--branch", branch, "auto | unipotent | trivial")->check(CLI::IsMember({"auto", "unipotent", "trivial"}));
  cert->add_option("--cap", cert_cap, "group closure cap (overrides ORBDIAM_CAP)");
  cert->add_option("--threads", cert_threads, "worker threads for per-orbit work")->check(CLI::PositiveNumber);
  cert->add_option("-o,--output", cert_out, "write report here instead of stdout");

  // power-sums
  auto* ps = app.add_subcommand("power-sums", "solve or map diagonal power-sum systems over F_p");
  std::uint32_t ps_p = 0;
  std::size_t ps_k = 0, ps_m = 0, frontier = 0;
  std::string rhs;
  std::uint64_t budget = orbdiam::kDefaultSearchBudget;
  ps->add_option("--p", ps_p, "prime modulus")->required();
  ps->add_option("--k", ps_k, "number of equations")->required();
  auto* m_opt = ps->add_option("--m", ps_m, "number of unknowns");
  auto* rhs_opt = ps->add_option("--rhs", rhs, "comma-separated b_1,...,b_k");
  auto* fr_opt = ps->add_option("--frontier", frontier, "scan m = 1..M_MAX over every rhs; prints CSV");
  ps->add_option("--budget", budget, "search budget");
  m_opt->needs(rhs_opt);
  rhs_opt->needs(m_opt);
  fr_opt->excludes(m_opt)->excludes(rhs_opt);

  // family
  auto* fam = app.add_subcommand("family", "write a generated instance file");
  std::string fam_name, fam_out;
  std::uint32_t fam_p = 0;
  std::size_t fam_d = 0;
  std::uint64_t fam_extra = 1;
  fam->add_option("name", fam_name, "wreath | sl | gl | singer | sym2")->required();
  fam->add_option("--p", fam_p, "prime")->required();
  fam->add_option("--d", fam_d, "dimension (sl, gl, singer)");
  fam->add_option("--extra", fam_extra, "singer: use this power of the Singer cycle");
  fam->add_option("-o,--output", fam_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*diam) {
      const Loaded l = load(diam_path, closure_cap(diam_cap));
      orbdiam::DiameterOptions opt;
      opt.undirected = undirected;
      opt.threads = diam_threads;
      opt.method = method == "sumset" ? orbdiam::DiameterMethod::sumset
                   : method == "bfs"  ? orbdiam::DiameterMethod::bfs
                                      : orbdiam::DiameterMethod::layered;
      const auto start = std::chrono::steady_clock::now();
      const auto report = orbdiam::instance_diameter(l.inst, l.closure, l.part, opt);
      const std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
      log("overall directed diameter " + std::to_string(report.overall_directed) + " (" + std::to_string(secs.count()) + " s)");
      Json doc = report_header(l);
      doc["diameter"] = orbdiam::diameter_json(report, l.part.space);
      emit(orbdiam::dump(doc), diam_out);
      return 0;
    }

    if (*cert) {
      orbdiam::CertifyOptions opt;
      opt.seed = seed;
      opt.threads = cert_threads;
      opt.cap = closure_cap(cert_cap);
      opt.branch = branch == "unipotent" ? orbdiam::BranchChoice::unipotent
                   : branch == "trivial" ? orbdiam::BranchChoice::trivial
                                         : orbdiam::BranchChoice::automatic;
      if (!targets.empty()) {
        if (targets[0] == "all" && targets.size() == 1) {
          opt.targets.mode = orbdiam::TargetPolicy::Mode::all;
        } else if (targets[0] == "sample") {
          opt.targets.mode = orbdiam::TargetPolicy::Mode::sample;
          if (targets.size() == 2) opt.targets.samples = std::stoull(targets[1]);
        } else {
          throw orbdiam::ParseError("--targets expects 'all' or 'sample N'");
        }
      }
      const Loaded l = load(cert_path, opt.cap);
      orbdiam::DiameterOptions dopt;
      dopt.threads = opt.threads;
      const auto diameters = orbdiam::instance_diameter(l.inst, l.closure, l.part, dopt);
      Json doc = report_header(l);
      doc["diameter"] = orbdiam::diameter_json(diameters, l.part.space);
      try {
        const auto report = orbdiam::certify_instance(l.inst, l.closure, l.part, opt);
        log(std::string("branch ") + orbdiam::to_string(report.branch) + ", max witness length " +
            std::to_string(report.max_length) + " <= " + std::to_string(report.bound));
        if (report.exhaustive && diameters.overall_directed > report.max_length) {
          throw orbdiam::TheoremViolation("exact diameter exceeds the longest exhaustive witness");
        }
        doc["certification"] = orbdiam::certification_json(report, l.part.space, opt);
        emit(orbdiam::dump(doc), cert_out);
        return 0;
      } catch (const orbdiam::NotApplicable& e) {
        log(std::string("not applicable: ") + e.what());
        doc["certification"] = orbdiam::not_applicable_json(e.what());
        emit(orbdiam::dump(doc), cert_out);
        return static_cast<int>(ExitCode::not_applicable);
      }
    }

    if (*ps) {
      if (*fr_opt) {
        const auto rows = orbdiam::solvability_frontier(ps_p, ps_k, frontier, budget);
        std::cout << orbdiam::frontier_csv(rows);
        return 0;
      }
      if (!*m_opt) throw orbdiam::ParseError("power-sums needs --m and --rhs, or --frontier");
      orbdiam::PowerSumSystem sys{ps_p, ps_k, ps_m, parse_rhs(rhs, ps_p)};
      const auto sol = orbdiam::solve(sys, budget);
      if (!sol) {
        std::cout << "no solution\n";
        return static_cast<int>(ExitCode::no_solution);
      }
      if (!orbdiam::verify(sys, *sol)) throw orbdiam::TheoremViolation("solver returned an unverified tuple");
      for (std::size_t i = 0; i < sol->values.size(); ++i) std::cout << (i ? " " : "") << sol->values[i];
      std::cout << '\n';
      return 0;
    }

    if (*fam) {
      const auto inst = orbdiam::make_family(fam_name, fam_p, fam_d, fam_extra);
      emit(orbdiam::dump(orbdiam::instance_json(inst)), fam_out);
      return 0;
    }
  } catch (const orbdiam::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::parse_error);
  } catch (const orbdiam::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return static_cast<int>(ExitCode::cap_exceeded);
  } catch (const orbdiam::ReducibleInstance& e) {
    std::cerr << "reducible input: " << e.what() << '\n';
    return static_cast<int>(ExitCode::reducible);
  } catch (const orbdiam::NotApplicable& e) {
    std::cerr << "not applicable: " << e.what() << '\n';
    return static_cast<int>(ExitCode::not_applicable);
  } catch (const orbdiam::TheoremViolation& e) {
    std::cerr << "THEOREM VIOLATION: " << e.what() << '\n';
    return static_cast<int>(ExitCode::theorem_violation);
  } catch (const orbdiam::SearchBudgetExceeded& e) {
    std::cerr << "search budget exceeded: " << e.what() << '\n';
    return static_cast<int>(ExitCode::budget_exceeded);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  }
  return static_cast<int>(ExitCode::usage);
}
