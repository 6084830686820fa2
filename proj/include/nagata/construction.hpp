#pragma once

// A set X of dimension one on the positive real axis whose image under a
// genus-one entire function F has dimension zero.
//
// Dyadic annuli D_n = {eta c_A^(n+2) <= |z| < eta c_A^(n+3)}, eta = 4/(c_A-1),
// carry scales s_n = c_A^n. Zeros of F are covered by c_A s_n-bounded,
// s_n-disjoint blocks, each thickened by rho_n = eps s_n. Real intervals of
// D_n avoiding the thickened blocks, and not straddled by any one block,
// receive arithmetic patches of spacing delta. The ratio pass then checks
// |F(z_{k+1}) / F(z_k)| >= Lambda > 1 past an index K.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "nagata/complex_maps.hpp"
#include "nagata/metric_core.hpp"

namespace nagata {

enum class Admissibility {
  // Each block must avoid the closure of one side of I (either side, chosen
  // per block).
  kPerBlock,
  // One side of I must be avoided by every block.
  kCommonSide,
};

struct ConstructionParams {
  double c_A = 2.0;
  double epsilon = 1e-3;  // in (0, 1e-2)
  double delta = 1.0;     // in (0, c_A)
  // F; its zero set must be Geometric or Power (real, positive zeros).
  Genus1Function f;
  int n_min = 1;
  int n_max = 14;
  // Also skip annuli n <= N_A when placing patches.
  bool gate_on_tail_index = false;
  Admissibility admissibility = Admissibility::kPerBlock;

  void validate() const;
};

struct Annulus {
  int n = 0;
  double inner = 0.0;
  double outer = 0.0;
  double scale = 0.0;  // s_n
  double rho = 0.0;    // eps s_n
  bool patched = false;
};

struct AnnulusSchedule {
  double eta = 0.0;
  std::vector<Annulus> annuli;  // n_min..n_max
  RadialGrowthConstants growth;
  double tail_target = 0.0;  // the tail-sum bound J_A must meet
  std::size_t J_A = 0;       // least J with sum_{j > J+1} 1/|alpha_j| <= tail_target
  int N_A = 0;               // least n with every alpha_j in D_{>=n} of index > J_A + 1
  int n_q = 1;               // annulus holding R0, clamped to 1

  const Annulus& at(int n) const;
  double inner(int n) const;
  // Least n >= 1 with |z| < outer(n); z assumed >= inner(1).
  int annulus_of(double r) const;
};

AnnulusSchedule build_schedule(const ConstructionParams& params);

struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Open intervals of the rho-neighbourhood of `blocks` (points on the real
// line) inside `domain`, merged when they overlap; block[i] names the block
// each interval came from.
struct ThickenedBlocks {
  std::vector<RealInterval> intervals;
  std::vector<std::size_t> block;
};

// Blocks of the zero set relevant to annulus n at scale s_n, as sorted
// real coordinates.
std::vector<std::vector<double>> zero_blocks(const ConstructionParams& params,
                                             const AnnulusSchedule& schedule, int n);

ThickenedBlocks thickened_real_blocks(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                      int n);

struct AdmissibleIntervals {
  int n = 0;
  double scale = 0.0;
  std::vector<RealInterval> candidates;  // closed complement intervals in D_n ∩ R+
  std::vector<RealInterval> admissible;
  std::size_t rejected_straddled = 0;  // some block has points on both sides
  std::size_t rejected_short = 0;      // shorter than s_n (1 - 2 eps), clipped by the annulus
};

// The closed complement of the rho-thickened blocks inside `domain`,
// filtered by the admissibility reading and the minimum length. Containment
// tests carry 1e-12 relative slack.
AdmissibleIntervals admissible_from_blocks(RealInterval domain, const std::vector<std::vector<double>>& blocks,
                                          double rho, double min_length, Admissibility reading);

// Throws ConstructionError when no admissible interval exists.
AdmissibleIntervals admissible_intervals(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                         int n);

// (inf I) + rho + m delta for m = 1..floor((len(I) - rho) / delta).
std::vector<double> patch_points(RealInterval interval, double rho, double delta);

struct PointOrigin {
  int n = 0;
  std::size_t interval = 0;  // index into admissible intervals of annulus n
  std::size_t m = 0;
};

struct PatchSet {
  PointSet2D points;  // on the real axis, increasing
  std::vector<PointOrigin> origin;
  std::vector<AdmissibleIntervals> intervals;  // per patched annulus
  std::vector<std::pair<int, std::size_t>> patch_length;  // (n, M_n), M_n = longest patch
};

PatchSet place_patches(const ConstructionParams& params, const AnnulusSchedule& schedule);

enum class GapCase { kSameInterval, kSameAnnulus, kNextAnnulus, kUnclassified };

const char* gap_case_name(GapCase c);

struct RatioStep {
  std::size_t k = 0;  // pair (z_k, z_{k+1}), 0-based
  int n = 0;          // annulus of z_k
  double gap = 0.0;
  GapCase gap_case = GapCase::kUnclassified;
  bool case_one = false;       // delta step; otherwise the long-gap case
  bool gap_in_bounds = false;  // gap matches its case's bounds within 1e-9 s_n
  double log_ratio = 0.0;      // L_k
  std::size_t J = 0;           // least j with alpha_j in D_{>= n+2}
  // Log-space parts of the lower bound; -inf when a factor's bound is vacuous.
  double log_E = 0.0;
  double log_Q1 = 0.0;
  double log_Q2 = 0.0;
  double floor = 0.0;
  // |alpha_j - z_k| >= (1/c_A - 1/c_A^2)|alpha_j| for the checked j >= J.
  bool alpha_margin = false;
  // |alpha - z_k| >= eps s_n for every zero.
  bool zero_clearance = false;
};

struct RatioCertificate {
  std::vector<RatioStep> steps;
  std::optional<std::size_t> K;  // first index of the pruned sequence
  int K_annulus = 0;
  double Lambda = 0.0;
  std::vector<std::size_t> offending;  // k with L_k <= 0 when no K exists
  double proof_lambda_I = 0.0;         // exp(min floor over case-I steps past K)
  double proof_lambda_II = 0.0;        // same over long-gap steps
  bool floors_respected = false;       // L_k >= floor_k - 1e-6 for all k
  bool trichotomy = false;             // every gap classified and in bounds
  PointSet2D pruned;                   // z_k for k >= K
};

RatioCertificate ratio_certificate(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                   const PatchSet& patches);

nlohmann::json construction_json(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                 const PatchSet& patches, const RatioCertificate& cert);
// k,gap,case,L_k,floor
void write_ratios_csv(std::ostream& out, const RatioCertificate& cert);

}  // namespace nagata
