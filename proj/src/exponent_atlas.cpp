#include "sdw/exponent_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sdw/errors.hpp"

namespace sdw {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalExistence: return "GlobalExistence";
    case Verdict::BlowUp: return "BlowUp";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "unknown";
}

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::None: return "None";
    case Theorem::Thm11: return "Thm11";
    case Theorem::Thm12: return "Thm12";
    case Theorem::Thm13: return "Thm13";
    case Theorem::Thm14: return "Thm14";
  }
  return "unknown";
}

bool RegionVerdict::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.holds; });
}

const ConditionCheck* RegionVerdict::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string RegionVerdict::label() const {
  if (verdict == Verdict::Undetermined) return "Undetermined";
  return std::string(to_string(verdict)) + "(" + to_string(theorem) + ")";
}

template <class T>
T critical_ratio(const BasicParams<T>& p) {
  const T one(1);
  const T pq1 = p.p * p.q - one;
  const T num = one + p.q * (one - p.delta2) / (one - p.delta1) + pq1 * p.delta2;
  const T den = (p.q - one) * (p.delta1 - p.delta2) / (one - p.delta2) + pq1;
  return num / den;
}

template <class T>
T combined_ratio(const BasicParams<T>& p) {
  const T a = critical_ratio(p);
  const T b = critical_ratio(p.swapped());
  return a > b ? a : b;
}

template double critical_ratio<double>(const SystemParams&);
template Rational critical_ratio<Rational>(const ExactParams&);
template double combined_ratio<double>(const SystemParams&);
template Rational combined_ratio<Rational>(const ExactParams&);

namespace {

template <class T>
ConditionCheck nonstrict(std::string id, const T& margin) {
  return ConditionCheck{std::move(id), margin >= T(0), to_double(margin), false};
}

template <class T>
ConditionCheck strict(std::string id, const T& margin) {
  return ConditionCheck{std::move(id), margin > T(0), to_double(margin), true};
}

template <class T>
T min_of(std::initializer_list<T> xs) {
  T m = *xs.begin();
  for (const auto& x : xs)
    if (x < m) m = x;
  return m;
}

// Hypotheses of the global existence theorem for the ordering delta1 >= delta2;
// the mirrored theorem is this on swapped parameters.
template <class T>
std::vector<ConditionCheck> thm11_checks(const BasicParams<T>& p) {
  const T one(1), two(2);
  const T n(p.n);
  std::vector<ConditionCheck> c;
  c.push_back(nonstrict("delta1>=delta2", T(p.delta1 - p.delta2)));
  c.push_back(strict("n>2*m0*delta1", T(n - two * p.m0() * p.delta1)));

  const T lower = two / p.m;
  if (p.n <= 2) {
    c.push_back(nonstrict("1.5", min_of<T>({p.p - lower, p.q - lower})));
  } else if (n <= T(4) / (two - p.m)) {
    const T upper = n / (n - two);
    c.push_back(nonstrict("1.6", min_of<T>({p.p - lower, p.q - lower, upper - p.p, upper - p.q})));
  } else {
    c.push_back(ConditionCheck{"1.6", false, to_double(T(T(4) / (two - p.m) - n)), false});
  }

  c.push_back(strict("1.7", T(n / (two * p.m) - critical_ratio(p))));

  const T d2 = n - two * p.m * p.delta2;
  const T d1 = n - two * p.m * p.delta1;
  if (d2 > T(0) && d1 > T(0)) {
    const T thr2 = one + two * p.m / d2;
    const T thr1 = one + two * p.m / d1;
    c.push_back(nonstrict("1.8a", T(thr2 - p.p)));
    c.push_back(nonstrict("1.8b", T(thr1 - thr2)));
    c.push_back(strict("1.8c", T(p.q - thr1)));
  } else {
    c.push_back(ConditionCheck{"1.8a", false, to_double(d2), false});
    c.push_back(ConditionCheck{"1.8b", false, to_double(d1), false});
    c.push_back(ConditionCheck{"1.8c", false, to_double(d1), true});
  }
  return c;
}

std::string mirror_id(const std::string& id) {
  if (id == "delta1>=delta2") return "delta2>=delta1";
  if (id == "n>2*m0*delta1") return "n>2*m0*delta2";
  if (id == "1.7") return "1.10";
  if (id.rfind("1.8", 0) == 0) return "1.11" + id.substr(3);
  return id;
}

template <class T>
RegionVerdict make_thm(const BasicParams<T>& p, bool mirrored) {
  validate(p);
  RegionVerdict v;
  v.exact = std::is_same_v<T, Rational>;
  v.checks = thm11_checks(mirrored ? p.swapped() : p);
  if (mirrored)
    for (auto& c : v.checks) c.id = mirror_id(c.id);
  if (v.all_hold()) {
    v.verdict = Verdict::GlobalExistence;
    v.theorem = mirrored ? Theorem::Thm12 : Theorem::Thm11;
  }
  return v;
}

template <class T>
RegionVerdict make_blowup(const BasicParams<T>& p) {
  validate(p);
  const T one(1), two(2);
  const T n(p.n);
  RegionVerdict v;
  v.exact = std::is_same_v<T, Rational>;

  const bool gate14 = p.delta1 == p.delta2 && p.m > one && p.m < two;
  v.checks.push_back(ConditionCheck{"thm14_gate", gate14, gate14 ? 1.0 : -1.0, false});
  bool thm14 = false;
  if (gate14) {
    const T bigger = p.p > p.q ? p.p : p.q;
    const T margin = (one + bigger) / (p.p * p.q - one) - (n - two * p.m * p.delta1) / (two * p.m);
    auto c = strict("1.19", margin);
    thm14 = c.holds;
    v.checks.push_back(c);
    if (margin == T(0)) v.notes.push_back("critical value of the large-m blow-up condition: open case, not classified");
  }

  ConditionCheck c13;
  if (p.delta1 > p.delta2) {
    c13 = nonstrict("1.14", T(critical_ratio(p) - n / two));
  } else if (p.delta2 > p.delta1) {
    c13 = nonstrict("1.15", T(critical_ratio(p.swapped()) - n / two));
  } else {
    c13 = nonstrict("1.14", T(combined_ratio(p) - n / two));
  }
  v.checks.push_back(c13);
  if (c13.holds && c13.margin == 0.0) v.notes.push_back("critical boundary of the blow-up condition");

  if (thm14) {
    v.verdict = Verdict::BlowUp;
    v.theorem = Theorem::Thm14;
  } else if (c13.holds) {
    v.verdict = Verdict::BlowUp;
    v.theorem = Theorem::Thm13;
  }
  return v;
}

void append_prefixed(RegionVerdict& out, const RegionVerdict& part, const char* prefix) {
  for (auto c : part.checks) {
    c.id = std::string(prefix) + "/" + c.id;
    out.checks.push_back(std::move(c));
  }
  for (const auto& n : part.notes) out.notes.push_back(n);
}

template <class T>
RegionVerdict classify_impl(const BasicParams<T>& p) {
  const RegionVerdict t11 = make_thm(p, false);
  const RegionVerdict t12 = make_thm(p, true);
  const RegionVerdict bu = make_blowup(p);
  RegionVerdict out;
  out.exact = std::is_same_v<T, Rational>;
  append_prefixed(out, t11, "Thm11");
  append_prefixed(out, t12, "Thm12");
  append_prefixed(out, bu, "blowup");
  const RegionVerdict* winner = nullptr;
  if (t11.verdict == Verdict::GlobalExistence) winner = &t11;
  else if (t12.verdict == Verdict::GlobalExistence) winner = &t12;
  else if (bu.verdict == Verdict::BlowUp) winner = &bu;
  if (winner) {
    out.verdict = winner->verdict;
    out.theorem = winner->theorem;
  } else {
    out.notes.push_back("no theorem covers this point");
  }
  return out;
}

bool near_boundary(const RegionVerdict& v) {
  return std::any_of(v.checks.begin(), v.checks.end(),
                     [](const ConditionCheck& c) { return std::abs(c.margin) <= kBoundaryBand; });
}

}  // namespace

RegionVerdict check_thm11(const SystemParams& p) {
  auto v = make_thm(p, false);
  return near_boundary(v) ? make_thm(to_exact(p), false) : v;
}
RegionVerdict check_thm11(const ExactParams& p) { return make_thm(p, false); }
RegionVerdict check_thm12(const SystemParams& p) {
  auto v = make_thm(p, true);
  return near_boundary(v) ? make_thm(to_exact(p), true) : v;
}
RegionVerdict check_thm12(const ExactParams& p) { return make_thm(p, true); }
RegionVerdict check_blowup(const SystemParams& p) {
  auto v = make_blowup(p);
  return near_boundary(v) ? make_blowup(to_exact(p)) : v;
}
RegionVerdict check_blowup(const ExactParams& p) { return make_blowup(p); }

RegionVerdict classify(const SystemParams& p) {
  auto v = classify_impl(p);
  return near_boundary(v) ? classify_impl(to_exact(p)) : v;
}
RegionVerdict classify(const ExactParams& p) { return classify_impl(p); }

ReductionReport reduction_identity(const ExactParams& p) {
  validate(p);
  if (p.delta1 != p.delta2) throw InvalidInput("reduction_identity: requires delta1 == delta2");
  const Rational one(1), two(2);
  const Rational n(p.n);
  const Rational bigger = p.p > p.q ? p.p : p.q;
  const Rational classical = (one + bigger) / (p.p * p.q - one);

  ReductionReport r;
  Rational reference_margin;
  if (p.m == one && p.delta1 == Rational(1, 2)) {
    reference_margin = (n - one) / two - classical;
    r.reference = "(1+max{p,q})/(pq-1) < (n-1)/2";
  } else if (p.m == one && p.delta1 == 0) {
    reference_margin = n / two - classical;
    r.reference = "(1+max{p,q})/(pq-1) < n/2";
  } else {
    reference_margin = n / (two * p.m) - p.delta1 - classical;
    r.reference = "(1+max{p,q})/(pq-1) < n/(2m) - delta";
  }
  const Rational combined_margin = n / (two * p.m) - combined_ratio(p);
  r.difference = combined_margin - reference_margin;
  r.combined_margin = to_double(combined_margin);
  r.reference_margin = to_double(reference_margin);
  r.equivalent = (combined_margin > 0) == (reference_margin > 0);
  return r;
}

bool criticality_partition(const ExactParams& p) {
  validate(p);
  if (p.delta1 != p.delta2) throw InvalidInput("criticality_partition: requires delta1 == delta2");
  if (p.m != Rational(1)) throw InvalidInput("criticality_partition: requires m == 1");
  const Rational half_n = Rational(p.n) / 2;
  const bool existence_side = combined_ratio(p) < half_n;
  const auto bu = make_blowup(p);
  const ConditionCheck* c13 = bu.find("1.14");
  return c13 && (existence_side != c13->holds);
}

std::vector<SweepCell> sweep(const SystemParams& tmpl, double p_lo, double p_hi, double q_lo, double q_hi,
                             int res_p, int res_q, int threads) {
  validate(tmpl);
  if (res_p < 1 || res_q < 1 || res_p > 2000 || res_q > 2000)
    throw InvalidInput("sweep: resolution must lie in [1, 2000] per axis");
  if (!(p_lo >= 1.0 && p_hi > p_lo && q_lo >= 1.0 && q_hi > q_lo))
    throw InvalidInput("sweep: ranges must satisfy 1 <= lo < hi");
  std::vector<SweepCell> cells(static_cast<std::size_t>(res_p) * res_q);

  auto do_row = [&](int i) {
    const double p = p_lo + (i + 1) * (p_hi - p_lo) / res_p;
    for (int j = 0; j < res_q; ++j) {
      const double q = q_lo + (j + 1) * (q_hi - q_lo) / res_q;
      SystemParams sp = tmpl;
      sp.p = p;
      sp.q = q;
      SweepCell& cell = cells[static_cast<std::size_t>(i) * res_q + j];
      cell.p = p;
      cell.q = q;
      cell.verdict = classify(sp);
      const bool use12 = cell.verdict.theorem == Theorem::Thm12 || sp.delta2 > sp.delta1 ||
                         (sp.delta1 == sp.delta2 && sp.p > sp.q);
      const char* pre = use12 ? "Thm12/" : "Thm11/";
      const std::string id17 = use12 ? "1.10" : "1.7";
      const std::string id18 = use12 ? "1.11" : "1.8";
      cell.margin_17 = cell.verdict.find(pre + id17)->margin;
      cell.margin_18 = std::min({cell.verdict.find(pre + id18 + "a")->margin, cell.verdict.find(pre + id18 + "b")->margin,
                                 cell.verdict.find(pre + id18 + "c")->margin});
      const ConditionCheck* c13 = cell.verdict.find("blowup/1.14");
      if (!c13) c13 = cell.verdict.find("blowup/1.15");
      cell.margin_114 = c13->margin;
    }
  };

  const int workers = std::max(1, std::min(threads, res_p));
  if (workers == 1) {
    for (int i = 0; i < res_p; ++i) do_row(i);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < res_p; i += workers) do_row(i);
      });
  }
  return cells;
}

}  // namespace sdw
