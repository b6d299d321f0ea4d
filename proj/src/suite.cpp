#include "apstruct/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apstruct/closed_form.hpp"
#include "apstruct/identities.hpp"
#include "apstruct/induced.hpp"
#include "apstruct/rng.hpp"

namespace apstruct {

BlockSwap<double> make_block_swap(const CaseDescriptor& d) {
  return BlockSwap<double>(d.p, d.q, signs_from_string(d.nu), signs_from_string(d.eps));
}

Hypersphere<double> make_sphere(const CaseDescriptor& d) {
  return Hypersphere<double>(2 * d.p + d.q, d.R);
}

ProductOfSpheres<double> make_product(const CaseDescriptor& d) {
  return ProductOfSpheres<double>(d.p, d.q, d.r, d.r3);
}

namespace {

std::uint64_t as_u64(std::int64_t v) { return static_cast<std::uint64_t>(v); }

// Running max with sample counting; ties keep the earliest sample, so the
// reported worst case is deterministic.
struct Accumulator {
  std::int64_t samples = 0;
  double max_residual = 0.0;
  WorstCase worst;
  bool any = false;

  void fold(double residual, std::int64_t case_index, std::int64_t point_index,
            std::int64_t tangent_index, std::uint64_t point_seed) {
    ++samples;
    if (!any || residual > max_residual) {
      any = true;
      max_residual = residual;
      worst = {case_index, point_index, tangent_index, point_seed};
    }
  }

  IdentityReport finish(std::string_view id, const Tolerances& tol) const {
    IdentityReport r;
    r.identity_id = std::string(id);
    r.samples = samples;
    r.max_residual = max_residual;
    r.tolerance = tol.get(id);
    r.passed = max_residual <= r.tolerance;
    r.worst_case = worst;
    return r;
  }
};

struct PointSamples {
  ManifoldPoint<double> pt;
  std::vector<TangentVector<double>> tangents;
};

// One point's draws, in stream order: the point first, then the probe
// tangents. Every check regenerates this identically from the point seed,
// which is what makes worst cases replayable.
template <typename Sub>
PointSamples draw_point_samples(const Sub& sub, int n_tangents,
                                std::uint64_t point_seed) {
  Rng rng(point_seed);
  PointSamples ps;
  ps.pt = sample_point(sub, rng);
  ps.tangents.reserve(static_cast<std::size_t>(n_tangents));
  for (int i = 0; i < n_tangents; ++i)
    ps.tangents.push_back(sample_tangent(sub, ps.pt, rng));
  return ps;
}

// The generators below emit (ordinal, tangent_index, residual) triples for
// one point; ordinals index the id table of the owning check. Point-level
// samples carry tangent_index -1 and are emitted once per point.

template <typename Fold>
void sphere_identity_samples(const AmbientStructure<double>& s,
                             const Hypersphere<double>& sphere, int n_tangents,
                             std::uint64_t point_seed, Fold&& fold) {
  const PointSamples ps = draw_point_samples(sphere, n_tangents, point_seed);
  const InducedStructure<double> st = induce_at_point(s, sphere, ps.pt);
  for (int i = 0; i < n_tangents; ++i) {
    const auto& x = ps.tangents[static_cast<std::size_t>(i)];
    const auto& y = ps.tangents[static_cast<std::size_t>((i + 1) % n_tangents)];
    const auto r = codim1_identity_residuals(s, st, x.coords, y.coords);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (kCodim1NeedsTangent[k])
        fold(static_cast<int>(k), static_cast<std::int64_t>(i), r[k]);
      else if (i == 0)
        fold(static_cast<int>(k), std::int64_t{-1}, r[k]);
    }
  }
}

template <typename Fold>
void product_identity_samples(const AmbientStructure<double>& s,
                              const ProductOfSpheres<double>& product,
                              int n_tangents, std::uint64_t point_seed,
                              Fold&& fold) {
  const PointSamples ps = draw_point_samples(product, n_tangents, point_seed);
  const InducedStructure<double> st = induce_at_point(s, product, ps.pt);
  for (int i = 0; i < n_tangents; ++i) {
    const auto& x = ps.tangents[static_cast<std::size_t>(i)];
    const auto& y = ps.tangents[static_cast<std::size_t>((i + 1) % n_tangents)];
    const auto r = codim2_identity_residuals(s, st, x.coords, y.coords);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (kCodim2NeedsTangent[k])
        fold(static_cast<int>(k), static_cast<std::int64_t>(i), r[k]);
      else if (i == 0)
        fold(static_cast<int>(k), std::int64_t{-1}, r[k]);
    }
  }
}

template <typename Fold>
void chain_samples(const AmbientStructure<double>& s,
                   const Hypersphere<double>& outer,
                   const ProductOfSpheres<double>& inner, int n_probes,
                   std::uint64_t point_seed, Fold&& fold) {
  const PointSamples ps = draw_point_samples(inner, n_probes, point_seed);
  const InducedStructure<double> direct = induce_at_point(s, inner, ps.pt);
  const InducedStructure<double> chained = chain_induce(s, outer, inner, ps.pt);
  const double res = compare_structures(
      s, direct, chained,
      std::span<const TangentVector<double>>(ps.tangents));
  fold(0, std::int64_t{-1}, res);
}

template <typename Fold>
void sphere_closed_form_samples(const BlockSwap<double>& bs,
                                const Hypersphere<double>& sphere,
                                int n_tangents, std::uint64_t point_seed,
                                Fold&& fold) {
  const AmbientStructure<double> s(bs);
  const PointSamples ps = draw_point_samples(sphere, n_tangents, point_seed);
  const InducedStructure<double> st = induce_at_point(s, sphere, ps.pt);
  const auto cf = closed_form::sphere_structure(bs, sphere, ps.pt);
  double res = std::abs(cf.a11 - st.a(0, 0));
  res = std::max(res, (cf.xi1 - st.xi.col(0)).cwiseAbs().maxCoeff());
  fold(0, std::int64_t{-1}, res);
  for (int i = 0; i < n_tangents; ++i) {
    const auto& x = ps.tangents[static_cast<std::size_t>(i)];
    const auto act = closed_form::sphere_action(bs, sphere, x);
    const Vec<double> u = evaluate_u(s, st, x);
    const TangentVector<double> px = apply_induced_P(s, st, x);
    double tres = std::abs(act.u1 - u[0]);
    tres = std::max(tres, (act.px - px.coords).lpNorm<Eigen::Infinity>());
    fold(0, static_cast<std::int64_t>(i),
         tres / std::max(1.0, x.coords.norm()));
  }
}

template <typename Fold>
void product_closed_form_samples(const BlockSwap<double>& bs,
                                 const ProductOfSpheres<double>& product,
                                 int n_tangents, std::uint64_t point_seed,
                                 Fold&& fold) {
  const AmbientStructure<double> s(bs);
  const PointSamples ps = draw_point_samples(product, n_tangents, point_seed);
  const InducedStructure<double> st = induce_at_point(s, product, ps.pt);
  const auto cf = closed_form::product_structure(bs, product, ps.pt);
  double res = (cf.a - st.a).cwiseAbs().maxCoeff();
  res = std::max(res, (cf.xi1 - st.xi.col(0)).cwiseAbs().maxCoeff());
  res = std::max(res, (cf.xi2 - st.xi.col(1)).cwiseAbs().maxCoeff());
  fold(0, std::int64_t{-1}, res);
  for (int i = 0; i < n_tangents; ++i) {
    const auto& x = ps.tangents[static_cast<std::size_t>(i)];
    const auto act = closed_form::product_action(bs, product, x);
    const Vec<double> u = evaluate_u(s, st, x);
    const TangentVector<double> px = apply_induced_P(s, st, x);
    double tres = std::abs(act.u1 - u[0]);
    tres = std::max(tres, std::abs(act.u2 - u[1]));
    tres = std::max(tres, (act.px - px.coords).lpNorm<Eigen::Infinity>());
    fold(0, static_cast<std::int64_t>(i),
         tres / std::max(1.0, x.coords.norm()));
  }
}

void require_counts(int n_points, int n_tangents) {
  detail::require(n_points >= 1, "check: n_points must be positive");
  detail::require(n_tangents >= 1, "check: n_tangents must be positive");
}

template <int N>
int ordinal_of(const std::array<std::string_view, N>& ids, std::string_view id) {
  for (int k = 0; k < N; ++k)
    if (ids[static_cast<std::size_t>(k)] == id) return k;
  return -1;
}

}  // namespace

std::vector<IdentityReport> check_codim1(const AmbientStructure<double>& s,
                                         const Hypersphere<double>& sphere,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol,
                                         std::int64_t case_index) {
  detail::require(s.epsilon() == 1, "check_codim1: requires a structure squaring to +Id");
  detail::require(s.dim() == sphere.ambient_dim(), "check_codim1: dimension mismatch");
  require_counts(n_points, n_tangents);
  std::array<Accumulator, 7> acc;
  for (int k = 0; k < n_points; ++k) {
    const std::uint64_t pseed = derive_seed(seed, {as_u64(case_index), as_u64(k)});
    sphere_identity_samples(s, sphere, n_tangents, pseed,
                            [&](int ord, std::int64_t ti, double res) {
                              acc[static_cast<std::size_t>(ord)].fold(res, case_index, k, ti, pseed);
                            });
  }
  std::vector<IdentityReport> out;
  out.reserve(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k)
    out.push_back(acc[k].finish(kCodim1IdentityIds[k], tol));
  return out;
}

std::vector<IdentityReport> check_codim2(const AmbientStructure<double>& s,
                                         const ProductOfSpheres<double>& product,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol,
                                         std::int64_t case_index) {
  detail::require(s.epsilon() == 1, "check_codim2: requires a structure squaring to +Id");
  detail::require(s.dim() == product.ambient_dim(), "check_codim2: dimension mismatch");
  require_counts(n_points, n_tangents);
  std::array<Accumulator, 13> acc;
  for (int k = 0; k < n_points; ++k) {
    const std::uint64_t pseed = derive_seed(seed, {as_u64(case_index), as_u64(k)});
    product_identity_samples(s, product, n_tangents, pseed,
                             [&](int ord, std::int64_t ti, double res) {
                               acc[static_cast<std::size_t>(ord)].fold(res, case_index, k, ti, pseed);
                             });
  }
  std::vector<IdentityReport> out;
  out.reserve(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k)
    out.push_back(acc[k].finish(kCodim2IdentityIds[k], tol));
  return out;
}

IdentityReport check_route_agreement(const AmbientStructure<double>& s,
                                   const Hypersphere<double>& outer,
                                   const ProductOfSpheres<double>& inner,
                                   int n_points, int n_probes,
                                   std::uint64_t seed,
                                   const Tolerances& tol,
                                   std::int64_t case_index) {
  detail::require(s.epsilon() == 1, "check_route_agreement: requires a structure squaring to +Id");
  require_counts(n_points, n_probes);
  Accumulator acc;
  for (int k = 0; k < n_points; ++k) {
    const std::uint64_t pseed = derive_seed(seed, {as_u64(case_index), as_u64(k)});
    chain_samples(s, outer, inner, n_probes, pseed,
                  [&](int, std::int64_t ti, double res) {
                    acc.fold(res, case_index, k, ti, pseed);
                  });
  }
  return acc.finish("chain.equality", tol);
}

IdentityReport check_closed_form_sphere(const BlockSwap<double>& s,
                                        const Hypersphere<double>& sphere,
                                        int n_points, int n_tangents,
                                        std::uint64_t seed,
                                        const Tolerances& tol,
                                        std::int64_t case_index) {
  detail::require(s.dim() == sphere.ambient_dim(),
                  "check_closed_form_sphere: dimension mismatch");
  require_counts(n_points, n_tangents);
  Accumulator acc;
  for (int k = 0; k < n_points; ++k) {
    const std::uint64_t pseed = derive_seed(seed, {as_u64(case_index), as_u64(k)});
    sphere_closed_form_samples(s, sphere, n_tangents, pseed,
                               [&](int, std::int64_t ti, double res) {
                                 acc.fold(res, case_index, k, ti, pseed);
                               });
  }
  return acc.finish("closed_form.sphere", tol);
}

IdentityReport check_closed_form_product(const BlockSwap<double>& s,
                                         const ProductOfSpheres<double>& product,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol,
                                         std::int64_t case_index) {
  detail::require((s.eps() == s.eps()[0]).all(),
                  "check_closed_form_product: requires a constant eps pattern");
  require_counts(n_points, n_tangents);
  Accumulator acc;
  for (int k = 0; k < n_points; ++k) {
    const std::uint64_t pseed = derive_seed(seed, {as_u64(case_index), as_u64(k)});
    product_closed_form_samples(s, product, n_tangents, pseed,
                                [&](int, std::int64_t ti, double res) {
                                  acc.fold(res, case_index, k, ti, pseed);
                                });
  }
  return acc.finish("closed_form.product", tol);
}

CaseReport run_case(const CaseDescriptor& descriptor, int n_points, int n_tangents,
                    std::uint64_t seed, std::int64_t case_index,
                    const Tolerances& tol) {
  CaseReport cr;
  cr.descriptor = descriptor;
  const BlockSwap<double> bs = make_block_swap(descriptor);
  const AmbientStructure<double> s(bs);
  if (descriptor.kind == CaseKind::kSphere) {
    const Hypersphere<double> sphere = make_sphere(descriptor);
    cr.reports = check_codim1(s, sphere, n_points, n_tangents, seed, tol, case_index);
    cr.reports.push_back(check_closed_form_sphere(bs, sphere, n_points, n_tangents,
                                                  seed, tol, case_index));
  } else {
    const ProductOfSpheres<double> product = make_product(descriptor);
    const Hypersphere<double> outer(product.ambient_dim(), product.enclosing_radius());
    cr.reports = check_codim2(s, product, n_points, n_tangents, seed, tol, case_index);
    cr.reports.push_back(check_route_agreement(s, outer, product, n_points, n_tangents,
                                             seed, tol, case_index));
    if ((bs.eps() == bs.eps()[0]).all())
      cr.reports.push_back(check_closed_form_product(bs, product, n_points, n_tangents,
                                                     seed, tol, case_index));
  }
  return cr;
}

SuiteReport run_full_suite(const SuiteConfig& config) {
  detail::require(config.n_points >= 1, "run_full_suite: n_points must be positive");
  detail::require(config.n_tangents >= 1, "run_full_suite: n_tangents must be positive");
  SuiteReport report;
  report.seed = config.seed;
  report.cases.reserve(config.cases.size());
  for (std::size_t i = 0; i < config.cases.size(); ++i)
    report.cases.push_back(run_case(config.cases[i], config.n_points,
                                    config.n_tangents, config.seed,
                                    static_cast<std::int64_t>(i),
                                    config.tolerances));
  return report;
}

double reproduce_sample(const SuiteConfig& config, std::int64_t case_index,
                        std::string_view identity_id, std::int64_t point_index,
                        std::int64_t tangent_index) {
  detail::require(case_index >= 0 &&
                      case_index < static_cast<std::int64_t>(config.cases.size()),
                  "reproduce_sample: case index out of range");
  detail::require(point_index >= 0 && point_index < config.n_points,
                  "reproduce_sample: point index out of range");
  const CaseDescriptor& d = config.cases[static_cast<std::size_t>(case_index)];
  const std::uint64_t pseed =
      derive_seed(config.seed, {as_u64(case_index), as_u64(point_index)});
  const BlockSwap<double> bs = make_block_swap(d);
  const AmbientStructure<double> s(bs);

  double out = 0.0;
  bool found = false;
  const auto pick = [&](int want) {
    return [&, want](int ord, std::int64_t ti, double res) {
      if (ord == want && ti == tangent_index && !found) {
        out = res;
        found = true;
      }
    };
  };

  if (d.kind == CaseKind::kSphere) {
    const Hypersphere<double> sphere = make_sphere(d);
    if (identity_id == "closed_form.sphere") {
      sphere_closed_form_samples(bs, sphere, config.n_tangents, pseed, pick(0));
    } else {
      const int ord = ordinal_of<7>(kCodim1IdentityIds, identity_id);
      detail::require(ord >= 0, "reproduce_sample: unknown identity for a sphere case");
      sphere_identity_samples(s, sphere, config.n_tangents, pseed, pick(ord));
    }
  } else {
    const ProductOfSpheres<double> product = make_product(d);
    if (identity_id == "chain.equality") {
      const Hypersphere<double> outer(product.ambient_dim(), product.enclosing_radius());
      chain_samples(s, outer, product, config.n_tangents, pseed, pick(0));
    } else if (identity_id == "closed_form.product") {
      product_closed_form_samples(bs, product, config.n_tangents, pseed, pick(0));
    } else {
      const int ord = ordinal_of<13>(kCodim2IdentityIds, identity_id);
      detail::require(ord >= 0, "reproduce_sample: unknown identity for a product case");
      product_identity_samples(s, product, config.n_tangents, pseed, pick(ord));
    }
  }
  detail::require(found, "reproduce_sample: no sample at that index");
  return out;
}

}  // namespace apstruct
