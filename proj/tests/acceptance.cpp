// Acceptance harness: one [PASS]/[FAIL] line per criterion, exit nonzero if
// any failed. argv[1] is the path to the command-line binary, used by the
// end-to-end determinism criterion; everything else runs in-process.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "apstruct/closed_form.hpp"
#include "apstruct/identities.hpp"
#include "apstruct/induced.hpp"
#include "apstruct/report_io.hpp"
#include "apstruct/rng.hpp"
#include "apstruct/suite.hpp"

namespace fs = std::filesystem;
using namespace apstruct;
namespace closed = apstruct::closed_form;

namespace {

int g_failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_inf(const Vec<double>& a, const Vec<double>& b, double scale) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, scale);
}

std::string random_pattern(Rng& rng, int width) {
  std::string out;
  for (int i = 0; i < width; ++i) out += (rng.next_u64() & 1) ? '+' : '-';
  return out;
}

// --- identity suites over the built-in grid ------------------------------

struct GridOutcome {
  double worst_c1 = 0.0, worst_c2 = 0.0, worst_chain = 0.0;
  std::int64_t failed_c1 = 0, failed_c2 = 0, failed_chain = 0;
  std::int64_t seen_c1 = 0, seen_c2 = 0, seen_chain = 0;
  double seconds = 0.0;
};

GridOutcome run_default_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_full_suite(default_suite_config());
  const auto t1 = std::chrono::steady_clock::now();
  GridOutcome out;
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  for (const auto& c : rep.cases) {
    for (const auto& r : c.reports) {
      if (r.identity_id.rfind("c1.", 0) == 0) {
        ++out.seen_c1;
        out.worst_c1 = std::max(out.worst_c1, r.max_residual);
        if (!r.passed) ++out.failed_c1;
      } else if (r.identity_id.rfind("c2.", 0) == 0) {
        ++out.seen_c2;
        out.worst_c2 = std::max(out.worst_c2, r.max_residual);
        if (!r.passed) ++out.failed_c2;
      } else if (r.identity_id == "chain.equality") {
        ++out.seen_chain;
        out.worst_chain = std::max(out.worst_chain, r.max_residual);
        if (!r.passed) ++out.failed_chain;
      }
    }
  }
  return out;
}

// --- closed forms against the projection engine --------------------------

double sphere_triples(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const int p = 1 + static_cast<int>(rng.next_u64() % 3);
    const int q = 2 + static_cast<int>(rng.next_u64() % 3);
    const double R = 0.5 * std::pow(2.0, 2.0 * rng.uniform01());
    const BlockSwap<double> bs(p, q, signs_from_string(random_pattern(rng, p)),
                               signs_from_string(random_pattern(rng, q)));
    const AmbientStructure<double> s(bs);
    const Hypersphere<double> sphere(bs.dim(), R);
    const ManifoldPoint<double> pt = sample_point(sphere, rng);
    const TangentVector<double> x = sample_tangent(sphere, pt, rng);

    const auto engine = induce_at_point(s, sphere, pt);
    const auto st = closed::sphere_structure(bs, sphere, pt);
    worst = std::max(worst, std::abs(st.a11 - engine.a(0, 0)));
    worst = std::max(worst, rel_inf(st.xi1, engine.xi.col(0), 1.0));

    const auto act = closed::sphere_action(bs, sphere, x);
    const double scale = x.coords.norm();
    worst = std::max(worst, std::abs(act.u1 - evaluate_u(s, engine, x)[0]) /
                                std::max(1.0, scale));
    worst = std::max(worst,
                     rel_inf(act.px, apply_induced_P(s, engine, x).coords, scale));
  }
  return worst;
}

double product_triples(int n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const int p = 1 + static_cast<int>(rng.next_u64() % 3);
    const int q = 2 + static_cast<int>(rng.next_u64() % 3);
    const char eps_sign = (rng.next_u64() & 1) ? '+' : '-';
    const double r = 0.5 * std::pow(2.0, 2.0 * rng.uniform01());
    const double r3 = 0.5 * std::pow(2.0, 2.0 * rng.uniform01());
    const BlockSwap<double> bs(p, q, signs_from_string(random_pattern(rng, p)),
                               signs_from_string(std::string(q, eps_sign)));
    const AmbientStructure<double> s(bs);
    const ProductOfSpheres<double> product(p, q, r, r3);
    const ManifoldPoint<double> pt = sample_point(product, rng);
    const TangentVector<double> x = sample_tangent(product, pt, rng);

    const auto engine = induce_at_point(s, product, pt);
    const auto st = closed::product_structure(bs, product, pt);
    worst = std::max(worst, (st.a - engine.a).lpNorm<Eigen::Infinity>());
    worst = std::max(worst, rel_inf(st.xi1, engine.xi.col(0), 1.0));
    worst = std::max(worst, rel_inf(st.xi2, engine.xi.col(1), 1.0));

    // The a matrix must also reproduce the normal-frame Gram matrix of the
    // applied structure, computed without the engine's decomposition.
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        const double gram =
            bs.apply(engine.frame.col(i)).dot(engine.frame.col(j));
        worst = std::max(worst, std::abs(st.a(i, j) - gram));
      }

    const auto act = closed::product_action(bs, product, x);
    const double scale = x.coords.norm();
    const Vec<double> u = evaluate_u(s, engine, x);
    worst = std::max(worst, std::abs(act.u1 - u[0]) / std::max(1.0, scale));
    worst = std::max(worst, std::abs(act.u2 - u[1]) / std::max(1.0, scale));
    worst = std::max(worst,
                     rel_inf(act.px, apply_induced_P(s, engine, x).coords, scale));
  }
  return worst;
}

// --- spot values on the fixed block ---------------------------------------

double fixed_block_spot_values() {
  double worst = 0.0;
  for (const auto& d : default_suite_config().cases) {
    if (d.kind != CaseKind::kSphere) continue;
    const BlockSwap<double> bs = make_block_swap(d);
    const AmbientStructure<double> s(bs);
    const Hypersphere<double> sphere = make_sphere(d);
    for (int j = 0; j < d.q; ++j) {
      Vec<double> coords = Vec<double>::Zero(bs.dim());
      coords[2 * d.p + j] = d.R;
      const auto st = induce_at_point(s, sphere, {coords});
      const double eps_j = d.eps[static_cast<std::size_t>(j)] == '+' ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(st.a(0, 0) - eps_j));
      worst = std::max(worst, st.xi.col(0).lpNorm<Eigen::Infinity>());
      const auto cf = closed::sphere_structure(bs, sphere, {coords});
      worst = std::max(worst, std::abs(cf.a11 - eps_j));
      worst = std::max(worst, cf.xi1.lpNorm<Eigen::Infinity>());
    }
  }
  return worst;
}

// --- fault sensitivity -----------------------------------------------------

// Perturbs one stored component of an induced structure by delta and returns
// the largest identity residual. Faults come in five shapes: an a entry, an
// xi column nudged along a tangent direction, and a frame column either
// tilted into the tangent space or scaled off unit length (the latter two
// split self-adjointness from the Gram identity).
struct FaultProbe {
  AmbientStructure<double> s;
  InducedStructure<double> st;
  Vec<double> x, y, w;
};

double worst_residual(const FaultProbe& fp, const InducedStructure<double>& st) {
  if (st.codim() == 1) {
    const auto r = codim1_identity_residuals(fp.s, st, fp.x, fp.y);
    return *std::max_element(r.begin(), r.end());
  }
  const auto r = codim2_identity_residuals(fp.s, st, fp.x, fp.y);
  return *std::max_element(r.begin(), r.end());
}

std::vector<InducedStructure<double>> faulted_variants(const FaultProbe& fp,
                                                       double delta) {
  std::vector<InducedStructure<double>> out;
  for (Index i = 0; i < fp.st.a.rows(); ++i)
    for (Index j = 0; j < fp.st.a.cols(); ++j) {
      out.push_back(fp.st);
      out.back().a(i, j) += delta;
    }
  for (Index c = 0; c < fp.st.xi.cols(); ++c) {
    out.push_back(fp.st);
    out.back().xi.col(c) += delta * fp.w;
  }
  for (Index c = 0; c < fp.st.frame.cols(); ++c) {
    out.push_back(fp.st);
    out.back().frame.col(c) += delta * fp.x;
    out.push_back(fp.st);
    out.back().frame.col(c) *= (1.0 + delta);
  }
  return out;
}

bool fault_sensitivity(std::string& detail) {
  std::vector<FaultProbe> probes;
  {
    const AmbientStructure<double> s(
        BlockSwap<double>(1, 2, signs_from_string("+"), signs_from_string("+-")));
    const Hypersphere<double> sphere(4, 1.0);
    Rng rng(61);
    const auto pt = sample_point(sphere, rng);
    FaultProbe fp{s, induce_at_point(s, sphere, pt), {}, {}, {}};
    fp.x = sample_tangent(sphere, pt, rng).coords.normalized();
    fp.y = sample_tangent(sphere, pt, rng).coords.normalized();
    fp.w = sample_tangent(sphere, pt, rng).coords.normalized();
    probes.push_back(std::move(fp));
  }
  {
    const AmbientStructure<double> s(
        BlockSwap<double>(1, 2, signs_from_string("+"), signs_from_string("++")));
    const ProductOfSpheres<double> product(1, 2, 1.0, 2.0);
    Rng rng(62);
    const auto pt = sample_point(product, rng);
    FaultProbe fp{s, induce_at_point(s, product, pt), {}, {}, {}};
    fp.x = sample_tangent(product, pt, rng).coords.normalized();
    fp.y = sample_tangent(product, pt, rng).coords.normalized();
    fp.w = sample_tangent(product, pt, rng).coords.normalized();
    probes.push_back(std::move(fp));
  }

  bool ok = true;
  double lo = 1e30, hi = 0.0;
  for (const auto& fp : probes) {
    if (worst_residual(fp, fp.st) > 1e-13) ok = false;  // clean baseline
    for (const double delta : {1e-6, 1e-4}) {
      for (const auto& st : faulted_variants(fp, delta)) {
        const double r = worst_residual(fp, st);
        lo = std::min(lo, r / delta);
        hi = std::max(hi, r / delta);
        // The fault must turn the report red and sit within a factor of 10.
        if (!(r > kDefaultIdentityTol && r >= delta / 10 && r <= delta * 10))
          ok = false;
      }
    }
  }
  detail = "residual/delta in [" + fmt(lo) + ", " + fmt(hi) + "]";
  return ok;
}

// --- end-to-end determinism ------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool cli_determinism(const std::string& cli, std::string& detail) {
  const fs::path scratch =
      fs::temp_directory_path() / ("apstruct_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  const fs::path out = scratch / "report.json";
  const std::string cmd = "cd \"" + scratch.string() + "\" && \"" + cli +
                          "\" verify --out report.json > run.log 2>&1";
  const int rc1 = std::system(cmd.c_str());
  const std::string first = slurp(out);
  const int rc2 = std::system(cmd.c_str());
  const std::string second = slurp(out);
  std::error_code ec;
  fs::remove_all(scratch, ec);

  const bool exits_ok = WIFEXITED(rc1) && WEXITSTATUS(rc1) == 0 &&
                        WIFEXITED(rc2) && WEXITSTATUS(rc2) == 0;
  const bool identical = !first.empty() && first == second;
  detail = "exit codes " + std::to_string(WIFEXITED(rc1) ? WEXITSTATUS(rc1) : -1) +
           "/" + std::to_string(WIFEXITED(rc2) ? WEXITSTATUS(rc2) : -1) + ", " +
           std::to_string(first.size()) + " bytes" +
           (identical ? ", byte-identical" : ", DIFFER");
  return exits_ok && identical;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: apstruct_acceptance <path-to-cli>\n");
    return 2;
  }
  const std::string cli = fs::absolute(argv[1]).string();

  const GridOutcome grid = run_default_grid();
  report(grid.failed_c1 == 0 && grid.seen_c1 > 0 && grid.seconds < 10.0,
         "codimension-1 identities pass across the built-in grid",
         std::to_string(grid.seen_c1) + " reports, worst residual " +
             fmt(grid.worst_c1) + ", " + fmt(grid.seconds) + " s");
  report(grid.failed_c2 == 0 && grid.seen_c2 > 0,
         "codimension-2 identities pass across the built-in grid",
         std::to_string(grid.seen_c2) + " reports, worst residual " +
             fmt(grid.worst_c2));
  report(grid.failed_chain == 0 && grid.seen_chain > 0,
         "direct and two-step inductions agree across the built-in grid",
         std::to_string(grid.seen_chain) + " reports, worst residual " +
             fmt(grid.worst_chain));

  const double sphere_worst = sphere_triples(1000, 1001);
  report(sphere_worst <= 1e-10,
         "sphere closed forms match the engine on 1000 random triples",
         "worst residual " + fmt(sphere_worst));

  const double product_worst = product_triples(1000, 2002);
  report(product_worst <= 1e-10,
         "product closed forms match the engine on 1000 random triples",
         "worst residual " + fmt(product_worst));

  const double spot_worst = fixed_block_spot_values();
  report(spot_worst <= 1e-13,
         "poles on the fixed block give a11 = eps_j and xi1 = 0",
         "worst deviation " + fmt(spot_worst));

  std::string fault_detail;
  const bool fault_ok = fault_sensitivity(fault_detail);
  report(fault_ok, "every injected fault fails an identity at its own scale",
         fault_detail);

  std::string det_detail;
  const bool det_ok = cli_determinism(cli, det_detail);
  report(det_ok, "two full verification runs write byte-identical reports",
         det_detail);

  if (g_failures > 0) {
    std::printf("%d acceptance criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
