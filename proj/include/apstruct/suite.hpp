#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "apstruct/ambient.hpp"
#include "apstruct/submanifold.hpp"
#include "apstruct/suite_config.hpp"
#include "apstruct/version.hpp"

namespace apstruct {

// Where the largest residual of an identity was observed. point_seed is the
// derived seed of that point's stream, so the sample can be regenerated
// without rerunning the whole suite; tangent_index is -1 for point-level
// identities.
struct WorstCase {
  std::int64_t case_index = -1;
  std::int64_t point_index = -1;
  std::int64_t tangent_index = -1;
  std::uint64_t point_seed = 0;
};

struct IdentityReport {
  std::string identity_id;
  std::int64_t samples = 0;
  double max_residual = 0.0;
  double tolerance = kDefaultIdentityTol;
  bool passed = true;
  WorstCase worst_case;
};

struct CaseReport {
  CaseDescriptor descriptor;
  std::vector<IdentityReport> reports;

  bool passed() const {
    for (const auto& r : reports)
      if (!r.passed) return false;
    return true;
  }
};

struct SuiteReport {
  int schema_version = kReportSchemaVersion;
  std::uint64_t seed = 0;
  std::vector<CaseReport> cases;

  bool all_passed() const {
    for (const auto& c : cases)
      if (!c.passed()) return false;
    return true;
  }
};

// Every check below draws n_points points; point k uses the stream seeded by
// derive_seed(seed, {case_index, k}), drawing first the point and then the
// probe tangent vectors in order. Identities that take two probes pair
// tangent i with tangent (i + 1) mod n_tangents. Residuals above the
// configured tolerance mark the report failed; they are never thrown.

// The seven codimension-one identities on a sphere. Requires a structure
// squaring to +Id.
std::vector<IdentityReport> check_codim1(const AmbientStructure<double>& s,
                                         const Hypersphere<double>& sphere,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol = {},
                                         std::int64_t case_index = 0);

// The thirteen codimension-two identities on a product of spheres.
std::vector<IdentityReport> check_codim2(const AmbientStructure<double>& s,
                                         const ProductOfSpheres<double>& product,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol = {},
                                         std::int64_t case_index = 0);

// Direct induction onto the product against the two-step route through the
// enclosing sphere, compared on n_probes tangent probes per point
// (id "chain.equality").
IdentityReport check_route_agreement(const AmbientStructure<double>& s,
                                   const Hypersphere<double>& outer,
                                   const ProductOfSpheres<double>& inner,
                                   int n_points, int n_probes,
                                   std::uint64_t seed,
                                   const Tolerances& tol = {},
                                   std::int64_t case_index = 0);

// Closed-form sphere expressions against the projection engine: the a
// coefficient and xi at each point, u and P X on each tangent probe
// (id "closed_form.sphere").
IdentityReport check_closed_form_sphere(const BlockSwap<double>& s,
                                        const Hypersphere<double>& sphere,
                                        int n_points, int n_tangents,
                                        std::uint64_t seed,
                                        const Tolerances& tol = {},
                                        std::int64_t case_index = 0);

// Closed-form product expressions against the engine; requires a constant
// eps pattern (id "closed_form.product").
IdentityReport check_closed_form_product(const BlockSwap<double>& s,
                                         const ProductOfSpheres<double>& product,
                                         int n_points, int n_tangents,
                                         std::uint64_t seed,
                                         const Tolerances& tol = {},
                                         std::int64_t case_index = 0);

// All checks that apply to one case: sphere cases run the codim-1 identities
// plus the closed forms; product cases run the codim-2 identities, the
// two-route comparison, and (for constant eps) the closed forms.
CaseReport run_case(const CaseDescriptor& descriptor, int n_points, int n_tangents,
                    std::uint64_t seed, std::int64_t case_index,
                    const Tolerances& tol);

SuiteReport run_full_suite(const SuiteConfig& config);

// Recomputes the residual of one sample of one identity from the config
// alone; used to confirm that reported worst cases replay bit-for-bit.
// tangent_index is -1 for point-level samples (and selects the structure
// comparison sample for "closed_form.*" ids).
double reproduce_sample(const SuiteConfig& config, std::int64_t case_index,
                        std::string_view identity_id, std::int64_t point_index,
                        std::int64_t tangent_index);

// Builds the block-swap structure and submanifold a descriptor names.
BlockSwap<double> make_block_swap(const CaseDescriptor& d);
Hypersphere<double> make_sphere(const CaseDescriptor& d);
ProductOfSpheres<double> make_product(const CaseDescriptor& d);

}  // namespace apstruct
