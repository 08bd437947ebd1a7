#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdw/params.hpp"

namespace sdw {

enum class Verdict { GlobalExistence, BlowUp, Undetermined };
enum class Theorem { None, Thm11, Thm12, Thm13, Thm14 };

const char* to_string(Verdict v);
const char* to_string(Theorem t);

/// One hypothesis of a theorem. margin is the signed distance to the boundary,
/// positive on the side where the condition holds.
struct ConditionCheck {
  std::string id;
  bool holds = false;
  double margin = 0.0;
  bool strict = false;
};

struct RegionVerdict {
  Verdict verdict = Verdict::Undetermined;
  Theorem theorem = Theorem::None;
  std::vector<ConditionCheck> checks;
  std::vector<std::string> notes;
  bool exact = false;  ///< produced by (or re-resolved with) rational arithmetic

  bool all_hold() const;
  const ConditionCheck* find(const std::string& id) const;
  /// "GlobalExistence(Thm11)", "BlowUp(Thm13)", "Undetermined".
  std::string label() const;
};

/// Floating margins within this distance of zero are re-resolved exactly.
inline constexpr double kBoundaryBand = 1e-9;

/// Left-hand side of the existence/blow-up threshold: for delta1 >= delta2
///   [1 + q(1-d2)/(1-d1) + (pq-1) d2] / [(q-1)(d1-d2)/(1-d2) + pq - 1].
/// Applying it to params.swapped() gives the mirrored form used by Thm12.
template <class T>
T critical_ratio(const BasicParams<T>& p);

/// The ordering-aware combination used when delta1 == delta2: max of both forms,
/// i.e. (1 + max{p,q})/(pq-1) + delta.
template <class T>
T combined_ratio(const BasicParams<T>& p);

/// Thm11: delta1 >= delta2, n > 2 m0 delta1, the range of m, the strict threshold and the three exponent bounds.
RegionVerdict check_thm11(const SystemParams& p);
RegionVerdict check_thm11(const ExactParams& p);
/// Thm12: the mirrored hypotheses (ids 1.10, 1.11 for the swapped conditions).
RegionVerdict check_thm12(const SystemParams& p);
RegionVerdict check_thm12(const ExactParams& p);
/// Thm14 (when delta1 == delta2 and m in (1,2)) takes precedence over Thm13.
RegionVerdict check_blowup(const SystemParams& p);
RegionVerdict check_blowup(const ExactParams& p);

/// Full classification. The floating path is re-run exactly whenever some
/// margin lies within kBoundaryBand of zero.
RegionVerdict classify(const SystemParams& p);
RegionVerdict classify(const ExactParams& p);

struct ReductionReport {
  bool equivalent = false;      ///< both inequality forms agree on truth
  Rational difference;          ///< (combined condition margin) - (reference margin), exactly
  double combined_margin = 0.0;
  double reference_margin = 0.0;
  std::string reference;        ///< which classical condition was compared
};

/// Compares the delta1 == delta2 conditions with the classical forms:
///  delta = 1/2, m = 1: (1 + max{p,q})/(pq-1) < (n-1)/2
///  delta = 0,   m = 1: (1 + max{p,q})/(pq-1) < n/2
/// For other delta the reference is (1 + max{p,q})/(pq-1) < n/(2m) - delta.
/// Throws InvalidInput when delta1 != delta2.
ReductionReport reduction_identity(const ExactParams& p);

/// True when Thm13's bound is exactly the complement of the strict threshold
/// condition at this point (m = 1, delta1 == delta2).
bool criticality_partition(const ExactParams& p);

struct SweepCell {
  double p = 0.0;
  double q = 0.0;
  RegionVerdict verdict;
  double margin_17 = 0.0;   ///< strict threshold margin, direct or mirrored by the delta ordering
  double margin_18 = 0.0;   ///< min over the three exponent bounds, direct or mirrored
  double margin_114 = 0.0;  ///< Thm13 margin
};

/// Row-major grid with p as the row index and q as the column index.
/// Cell (i, j) sits at p = p_lo + (i+1)(p_hi-p_lo)/res_p, q likewise, so the
/// half-open ranges (p_lo, p_hi] are covered. Rows run in parallel on `threads`.
std::vector<SweepCell> sweep(const SystemParams& tmpl, double p_lo, double p_hi, double q_lo, double q_hi,
                             int res_p, int res_q, int threads = 1);

}  // namespace sdw
