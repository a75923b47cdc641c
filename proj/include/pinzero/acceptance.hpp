#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pinzero/griffiths.hpp"
#include "pinzero/io.hpp"
#include "pinzero/scaling.hpp"

namespace pinzero {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 2;
  std::filesystem::path cache_dir = "pinzero-cache";
  bool verbose = true;
};

namespace detail {

inline double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct XorShift {
  unsigned long long s = 88172645463325252ull;
  double uniform() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return (double)(s % 100000000ull) / 1e8;
  }
};

}  // namespace detail

// Shared state across criteria: the special-family zero sets are the
// expensive part and are cached on disk as sidecars.
class AcceptanceContext {
 public:
  explicit AcceptanceContext(const AcceptanceOptions& opt) : opt_(opt) {
    std::filesystem::create_directories(opt_.cache_dir);
  }

  const AcceptanceOptions& options() const { return opt_; }
  const PrecisionPolicy& policy() const { return policy_; }

  const ZeroSet& zero_set(int n) {
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = sets_.find(n);
      if (it != sets_.end()) return it->second;
    }
    ZeroSet zs = load_or_solve(n, opt_.threads);
    std::lock_guard<std::mutex> lk(mu_);
    return sets_.emplace(n, std::move(zs)).first->second;
  }

  // fills n in [lo, hi] with two solver workers (used for the Griffiths store)
  void build_range(int lo, int hi) {
    std::vector<int> missing;
    {
      std::lock_guard<std::mutex> lk(mu_);
      for (int n = lo; n <= hi; ++n)
        if (!sets_.count(n)) missing.push_back(n);
    }
    std::mutex take;
    size_t next = 0;
    auto worker = [&]() {
      while (true) {
        int n;
        {
          std::lock_guard<std::mutex> lk(take);
          if (next >= missing.size()) break;
          n = missing[next++];
        }
        ZeroSet zs = load_or_solve(n, 1);
        std::lock_guard<std::mutex> lk(mu_);
        sets_.emplace(n, std::move(zs));
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, opt_.threads); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::vector<ScalingZero>& scaling_zeros() {
    if (f0z_.empty()) f0z_ = f0_zeros(7, 256, true, 256, opt_.threads);
    return f0z_;
  }
  double scaling_zeros_seconds() {
    if (f0z_.empty()) {
      double t0 = detail::now_seconds();
      f0z_ = f0_zeros(7, 256, true, 256, opt_.threads);
      f0z_seconds_ = detail::now_seconds() - t0;
    }
    return f0z_seconds_;
  }

  const CurveModel& curve_half() {
    if (!curve_) curve_ = std::make_unique<CurveModel>(0.5, 4096);
    return *curve_;
  }

 private:
  ZeroSet load_or_solve(int n, int threads) {
    mpfr_prec_t prec = policy_.bits_for_degree(n);
    auto poly = PartitionPolynomial::special_half(n, prec);
    std::string key = io::cache_key(poly.law_descriptor(), n, prec);
    auto sidecar = opt_.cache_dir / ("zeros-" + key + ".sidecar");
    if (std::filesystem::exists(sidecar)) {
      try {
        ZeroSet zs = io::load_zeroset(sidecar);
        if (zs.N == n && (int)zs.zeros.size() == n - 1) return zs;
      } catch (const std::exception&) {
        // fall through to a fresh solve
      }
    }
    ZeroSet zs = find_all_zeros(poly, policy_, threads);
    io::save_zeroset(zs, opt_.cache_dir / ("zeros-" + key + ".json"), sidecar);
    return zs;
  }

  AcceptanceOptions opt_;
  PrecisionPolicy policy_;
  std::mutex mu_;
  std::map<int, ZeroSet> sets_;
  std::vector<ScalingZero> f0z_;
  double f0z_seconds_ = 0.0;
  std::unique_ptr<CurveModel> curve_;
};

namespace criteria {

// C1: the reference zero table within +-0.001 on all zeros and seed gaps, in
// under ten seconds.
inline CriterionResult c01_table1(AcceptanceContext& ctx) {
  CriterionResult r{1, "Scaling-function zero table (7 zeros + seed gaps, < 10 s)"};
  double secs = ctx.scaling_zeros_seconds();
  const auto& zs = ctx.scaling_zeros();
  static const double table[7][3] = {{1.225, 2.547, 0.017}, {2.026, 3.162, 0.015},
                                     {2.629, 3.656, 0.013}, {3.132, 4.083, 0.011},
                                     {3.573, 4.466, 0.010}, {3.969, 4.817, 0.009},
                                     {4.332, 5.141, 0.008}};
  bool ok = secs < 10.0;
  double worst = 0.0;
  for (int i = 0; i < 7; ++i) {
    double dre = std::fabs(zs[i].zeta.re().to_double() - table[i][0]);
    double dim = std::fabs(zs[i].zeta.im().to_double() - table[i][1]);
    double dgap = std::fabs(abs(zs[i].zeta - zs[i].seed).to_double() - table[i][2]);
    worst = std::max({worst, dre, dim, dgap});
    ok = ok && dre <= 1e-3 && dim <= 1e-3 && dgap <= 1e-3;
  }
  std::ostringstream os;
  os << "max |deviation| = " << worst << ", runtime " << secs << " s";
  r.pass = ok;
  r.detail = os.str();
  return r;
}

// C2: the first two zeros within the published 0.0005 error radii, with
// argument-principle certification.
inline CriterionResult c02_zeta_precision(AcceptanceContext& ctx) {
  CriterionResult r{2, "Closest-zero locations (0.0005 radii, certified)"};
  const auto& zs = ctx.scaling_zeros();
  double d1 = std::hypot(zs[0].zeta.re().to_double() - 1.225,
                         zs[0].zeta.im().to_double() - 2.547);
  double d2 = std::hypot(zs[1].zeta.re().to_double() - 2.026,
                         zs[1].zeta.im().to_double() - 3.162);
  bool certified = zs[0].certified && zs[1].certified;
  r.pass = d1 < 5e-4 && d2 < 5e-4 && certified;
  std::ostringstream os;
  os << "|zeta1 - ref| = " << d1 << ", |zeta3 - ref| = " << d2
     << (certified ? ", winding = 1 on both disks" : ", UNCERTIFIED");
  r.detail = os.str();
  return r;
}

// C3: the N = 500 zero set: count, exact conjugation, no real zeros,
// certificates below 2^-64, product identity to 1e-20, within runtime budget.
inline CriterionResult c03_n500(AcceptanceContext& ctx) {
  CriterionResult r{3, "N=500 zero set (499 certified zeros, product identity)"};
  double t0 = detail::now_seconds();
  const ZeroSet& zs = ctx.zero_set(500);
  double solve_secs = detail::now_seconds() - t0;
  bool ok = (int)zs.zeros.size() == 499 && zs.all_converged;
  BigFloat pi = BigFloat::pi(zs.prec);
  BigFloat res_cap = BigFloat::pow2(-64, 64);
  double worst_res = 0.0;
  int pairs_exact = 0, self_conj = 0;
  for (size_t i = 0; i < zs.zeros.size(); ++i) {
    const BigComplex& h = zs.zeros[i].h;
    ok = ok && !h.im().is_zero();
    worst_res = std::max(worst_res, zs.zeros[i].residual.to_double());
    ok = ok && zs.zeros[i].residual < res_cap;
    if (h.im() == pi) {
      ++self_conj;
    } else if (h.im().sign() > 0 && i + 1 < zs.zeros.size()) {
      if (zs.zeros[i + 1].h.re() == h.re() && zs.zeros[i + 1].h.im() == -h.im()) ++pairs_exact;
    }
  }
  ok = ok && (2 * pairs_exact + self_conj == 499);
  // product identity at 10 deterministic pseudo-random h
  auto poly = PartitionPolynomial::special_half(500, zs.prec);
  detail::XorShift rng;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    BigComplex h(-1.0 + 3.0 * rng.uniform(), -3.1 + 6.2 * rng.uniform(), zs.prec);
    BigFloat lhs = log(abs(poly.value(h)));
    BigFloat rhs = BigFloat(500.0, zs.prec) * log(BigFloat(0.5, zs.prec)) + h.re();
    BigComplex eh = exp(h);
    for (const ZeroRecord& rec : zs.zeros) rhs += log(abs(eh - exp(rec.h)));
    double gap = (abs(lhs - rhs) / abs(lhs)).to_double();
    worst_gap = std::max(worst_gap, gap);
    ok = ok && gap < 1e-20;
  }
  ok = ok && solve_secs < 1800.0;
  std::ostringstream os;
  os << "zeros 499, exact pairs " << pairs_exact << " + " << self_conj
     << " self-conjugate, max residual " << worst_res << ", identity gap " << worst_gap
     << ", solve " << solve_secs << " s";
  r.pass = ok;
  r.detail = os.str();
  return r;
}

// C4: max distance to the curve strictly decreasing along N = 125, 250, 500.
inline CriterionResult c04_distance_trend(AcceptanceContext& ctx) {
  CriterionResult r{4, "Distance to C_1/2 strictly decreasing (N = 125, 250, 500)"};
  const CurveModel& cm = ctx.curve_half();
  double d[3];
  int i = 0;
  for (int n : {125, 250, 500}) d[i++] = distance_stats(ctx.zero_set(n), cm).max_distance;
  r.pass = d[0] > d[1] && d[1] > d[2];
  std::ostringstream os;
  os << "max distances " << d[0] << " > " << d[1] << " > " << d[2];
  r.detail = os.str();
  return r;
}

// C5: the closest-zero expansion error scales like N^{-3/2}: the error ratio
// between N = 256 and N = 1024 lies in [8/3, 24] (nominal 8, factor-3 slack).
inline CriterionResult c05_expansion(AcceptanceContext& ctx) {
  CriterionResult r{5, "Closest-zero expansion error scales like N^{-3/2}"};
  ZeroExpansion e = zero_expansion(ctx.scaling_zeros()[0].zeta);
  double errs[2];
  int i = 0;
  for (long N : {256L, 1024L}) {
    mpfr_prec_t p = ctx.policy().bits_for_degree(N);
    auto poly = PartitionPolynomial::special_half(N, p);
    BigFloat rootN = sqrt(BigFloat((double)N, p));
    BigComplex pred = e.z0.round_to(p) + e.z1.round_to(p) / rootN + e.z2.round_to(p) / (rootN * rootN);
    NewtonResult nr = refine_zero_newton(poly, pred / rootN, BigFloat::pow2(-(long)p / 2, 64));
    errs[i++] = abs(rootN * nr.h - pred).to_double();
  }
  double ratio = errs[0] / errs[1];
  r.pass = ratio >= 8.0 / 3.0 && ratio <= 24.0;
  std::ostringstream os;
  os << "errors " << errs[0] << " -> " << errs[1] << ", ratio " << ratio
     << " (nominal 8, band [8/3, 24])";
  r.detail = os.str();
  return r;
}

// C6: delocalized asymptotics at N = 4000 within 2%, plus the stated
// halving-trend band [1, 4] on the N = 1000 -> 4000 error ratio.
inline CriterionResult c06_deloc(AcceptanceContext& ctx) {
  CriterionResult r{6, "Delocalized asymptotics (2% at N=4000 + trend band)"};
  (void)ctx;
  InterArrivalLaw law = InterArrivalLaw::special_family(0.5, 4000, 256);
  auto p1 = PartitionPolynomial::special_half(1000, 320);
  auto p4 = PartitionPolynomial::special_half(4000, 320);
  bool tol_ok = true, trend_ok = true;
  std::ostringstream os;
  for (auto [re, im] : {std::pair{-1.0, 0.0}, {-1.0, 1.5}, {0.2, 2.5}}) {
    BigComplex h(re, im, 320);
    double e4 = (abs(p4.value(h) / asymptotic_deloc(law, 4000, h) - 1.0)).to_double();
    double e1 = (abs(p1.value(h) / asymptotic_deloc(law, 1000, h) - 1.0)).to_double();
    double ratio = e1 / e4;
    tol_ok = tol_ok && e4 <= 0.02;
    trend_ok = trend_ok && ratio >= 1.0 && ratio <= 4.0;
    os << "h=(" << re << "," << im << "): err4000=" << e4 << " ratio=" << ratio << "; ";
  }
  r.pass = tol_ok && trend_ok;
  if (!trend_ok)
    os << "[trend outside [1,4]: the alpha=1/2 relative error is O(1/N) because the "
          "(1-z)^{2 alpha} singular term is analytic at 2 alpha = 1, so quadrupling N "
          "quarters the error; the band was derived from the generic O(N^{-alpha}) rate]";
  r.detail = os.str();
  return r;
}

// C7: localized asymptotics at h = 1, N = 200 to 1e-4.
inline CriterionResult c07_loc(AcceptanceContext& ctx) {
  CriterionResult r{7, "Localized asymptotics at h=1, N=200 (1e-4)"};
  (void)ctx;
  auto poly = PartitionPolynomial::special_half(200, 560);
  BigComplex h(1.0, 0.0, 560);
  double dev = (abs(poly.value(h) / asymptotic_loc(BigFloat(0.5, 560), 200, h) - 1.0)).to_double();
  r.pass = dev <= 1e-4;
  std::ostringstream os;
  os << "|Z/asymptotic - 1| = " << dev;
  r.detail = os.str();
  return r;
}

// C8: scaling limit on the 9-point grid at N = 1e4 within the
// first-correction budget, decreasing like N^{-1/2} from N = 2500.
inline CriterionResult c08_scaling(AcceptanceContext& ctx) {
  CriterionResult r{8, "Scaling limit sqrt(N) Z -> F0 (budget + N^{-1/2} trend)"};
  (void)ctx;
  std::vector<BigComplex> grid;
  for (double x : {-2.0, 0.0, 2.0})
    for (double y : {-2.0, 0.0, 2.0}) grid.emplace_back(x, y, 320);
  double f1max = 0.0;
  for (const BigComplex& z : grid) f1max = std::max(f1max, abs(f1_scaling(z)).to_double());
  auto p25 = PartitionPolynomial::special_half(2500, 320);
  auto p100 = PartitionPolynomial::special_half(10000, 320);
  double d25 = scaling_limit_check(p25, grid).to_double();
  double d100 = scaling_limit_check(p100, grid).to_double();
  double budget = 1.3 * f1max / 100.0;
  double ratio = d25 / d100;
  r.pass = d100 <= budget && ratio >= 4.0 / 3.0 && ratio <= 3.0;
  std::ostringstream os;
  os << "max dev " << d100 << " vs budget " << budget << "; trend ratio " << ratio
     << " (band [1.33, 3])";
  r.detail = os.str();
  return r;
}

// C9: Griffiths asymptotics with zeros for all n <= 300, k in [40, 120].
inline CriterionResult c09_griffiths(AcceptanceContext& ctx) {
  CriterionResult r{9, "Griffiths coefficient law (95% of gated k in [0.8, 1.25])"};
  ctx.build_range(3, 300);
  GriffithsRun run;
  run.p = 0.5;
  run.n0 = 3;
  for (int n = 3; n <= 300; ++n) run.add(ctx.zero_set(n));
  GriffithsConstants g = griffiths_constants(0.5, ctx.scaling_zeros()[0].zeta);
  bool const_ok = std::fabs(g.a.to_double() - 1.12247) < 5e-6 &&
                  std::fabs(g.b1.to_double() - 1.27356) < 5e-6;
  int in_band = 0, eligible = 0;
  double lo = 10.0, hi = 0.0;
  for (long k = 40; k <= 120; ++k) {
    if (abs(griffiths_cosine(g, k)).to_double() < 0.2) continue;
    ++eligible;
    double ratio =
        (BigFloat((double)k, 256) * taylor_coefficient(run, k) / griffiths_prediction(g, k))
            .to_double();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (ratio >= 0.8 && ratio <= 1.25) ++in_band;
  }
  double frac = eligible ? (double)in_band / (double)eligible : 0.0;
  // diagnostic at larger k, where the O((log k)^2 / sqrt k) remainder has
  // decayed (the store supports k up to ~280)
  int in_band_hi = 0, eligible_hi = 0;
  for (long k = 160; k <= 280; ++k) {
    if (abs(griffiths_cosine(g, k)).to_double() < 0.2) continue;
    ++eligible_hi;
    double ratio =
        (BigFloat((double)k, 320) * taylor_coefficient(run, k) / griffiths_prediction(g, k))
            .to_double();
    if (ratio >= 0.8 && ratio <= 1.25) ++in_band_hi;
  }
  r.pass = const_ok && frac >= 0.95;
  std::ostringstream os;
  os << "a, b1 to 5 decimals: " << (const_ok ? "yes" : "NO") << "; in-band " << in_band << "/"
     << eligible << " = " << 100.0 * frac << "% on k in [40,120], ratio range [" << lo << ", "
     << hi << "]; diagnostic k in [160,280]: " << in_band_hi << "/" << eligible_hi;
  r.detail = os.str();
  return r;
}

// C10: deep-negative-order polylog against T_beta and the windowed-sum
// equivalence at the stated exponential level.
inline CriterionResult c10_polylog(AcceptanceContext& ctx) {
  CriterionResult r{10, "Polylog asymptotics and window equivalence"};
  (void)ctx;
  bool ok = true;
  double worst_dev = 0.0, worst_win = 0.0;
  for (double beta : {100.0, 200.0, 400.0}) {
    for (double p : {0.3, 0.6}) {
      BigFloat li = polylog_direct(BigFloat(-beta, 320), BigFloat(p, 320), BigFloat(1e-50, 320));
      BigFloat tb = exp(log_gamma_real(BigFloat(beta + 1.0, 320)) -
                        (beta + 1.0) * log(abs(log(BigFloat(p, 320)))));
      double dev = std::fabs((li / tb).to_double() - 1.0);
      worst_dev = std::max(worst_dev, dev / (std::log(beta) / std::sqrt(beta)));
      ok = ok && dev <= 1.0 * std::log(beta) / std::sqrt(beta);
      WindowSumResult ws = polylog_window_sum(beta, p, WindowModulator::One, 0.0, 0.0, 320);
      double windev = std::fabs(((ws.full_sum - ws.window_sum) / ws.full_sum).to_double());
      double cap = std::exp(-std::pow(std::log(beta) * std::log(p), 2.0) / 8.0);
      worst_win = std::max(worst_win, windev / cap);
      ok = ok && windev <= cap;
    }
  }
  std::ostringstream os;
  os << "worst Li/T_beta deviation at " << worst_dev << " of the log(beta)/sqrt(beta) law; "
     << "worst window residual at " << worst_win << " of the exp level";
  r.pass = ok;
  r.detail = os.str();
  return r;
}

// C11: empirical CDF of the upper-half zero arclengths against the limit CDF.
inline CriterionResult c11_density(AcceptanceContext& ctx) {
  CriterionResult r{11, "Arclength law of the zeros (KS trend and cap)"};
  const CurveModel& cm = ctx.curve_half();
  auto ks_for = [&](int n) {
    DistanceStats ds = distance_stats(ctx.zero_set(n), cm);
    std::vector<double> u;
    for (const auto& pz : ds.per_zero)
      if (pz.h.imag() > 1e-12) u.push_back(cm.limit_cdf_of_s(pz.s));
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    size_t m = u.size();
    for (size_t i = 0; i < m; ++i) {
      ks = std::max(ks, std::fabs((double)(i + 1) / (double)m - u[i]));
      ks = std::max(ks, std::fabs(u[i] - (double)i / (double)m));
    }
    return ks;
  };
  double k200 = ks_for(200), k500 = ks_for(500);
  r.pass = k500 < k200 && k500 < 0.05;
  std::ostringstream os;
  os << "KS(200) = " << k200 << ", KS(500) = " << k500 << " (cap 0.05)";
  r.detail = os.str();
  return r;
}

// C12: curve identities, strip bounds, monotonicity, classifier consistency.
inline CriterionResult c12_curve(AcceptanceContext& ctx) {
  CriterionResult r{12, "Curve identities, monotonicity, classifier consistency"};
  (void)ctx;
  const mpfr_prec_t P = 192;
  bool ok = true;
  double worst = 0.0;
  for (double alpha : {0.2, 0.5, 0.8}) {
    BigFloat a(alpha, P);
    BigFloat x_max = -log(pow(BigFloat(2.0, P), a) - 1.0);
    BigFloat prev_f1(-1.0, P), prev_f2(-1.0, P);
    for (int i = 1; i <= 1000; ++i) {
      BigFloat theta = BigFloat::pi(P) * (double)i / 1000.0;
      auto [f1, f2] = curve_xy(a, theta);
      BigComplex h = curve_point(a, theta);
      double gap = std::max(abs(f1 - h.re()).to_double(), abs(f2 - h.im()).to_double());
      worst = std::max(worst, gap);
      ok = ok && gap <= 1e-12;
      ok = ok && f1.sign() > 0 && (i == 1000 ? f1 <= x_max : f1 < x_max);
      ok = ok && f1 > prev_f1 && f2 > prev_f2;
      prev_f1 = f1;
      prev_f2 = f2;
    }
  }
  // classifier: curve inversion vs the algebraic pole test at 10^4 points
  detail::XorShift rng;
  int disagreements = 0, undecided = 0;
  for (int i = 0; i < 10000; ++i) {
    double alpha = 0.2 + 0.6 * rng.uniform();
    double re = -1.5 + 3.5 * rng.uniform();
    double im = -3.14 + 6.28 * rng.uniform();
    BigFloat a(alpha, P);
    BigComplex h(re, im, P);
    RegionLabel lab = classify(a, h, 1e-9);
    if (lab == RegionLabel::Critical) {
      ++undecided;
      continue;
    }
    if (localized_algebraic(a, h) != (lab == RegionLabel::Localized)) ++disagreements;
  }
  ok = ok && disagreements == 0;
  std::ostringstream os;
  os << "worst curve-identity gap " << worst << "; classifier disagreements " << disagreements
     << " (undecided-critical " << undecided << " of 10000)";
  r.pass = ok;
  r.detail = os.str();
  return r;
}

}  // namespace criteria

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  AcceptanceContext ctx(opt);
  std::vector<CriterionResult> out;
  using Fn = CriterionResult (*)(AcceptanceContext&);
  struct Entry {
    int id;
    const char* name;
    Fn fn;
  };
  const Entry entries[] = {
      {1, "Scaling-function zero table", criteria::c01_table1},
      {2, "Closest-zero locations", criteria::c02_zeta_precision},
      {3, "N=500 zero set", criteria::c03_n500},
      {4, "Distance-to-curve trend", criteria::c04_distance_trend},
      {5, "Closest-zero expansion", criteria::c05_expansion},
      {6, "Delocalized asymptotics", criteria::c06_deloc},
      {7, "Localized asymptotics", criteria::c07_loc},
      {8, "Scaling limit", criteria::c08_scaling},
      {9, "Griffiths coefficients", criteria::c09_griffiths},
      {10, "Polylog asymptotics", criteria::c10_polylog},
      {11, "Zero arclength law", criteria::c11_density},
      {12, "Curve identities", criteria::c12_curve},
  };
  for (const Entry& e : entries) {
    double t0 = detail::now_seconds();
    CriterionResult r;
    try {
      r = e.fn(ctx);
    } catch (const std::exception& ex) {
      r.id = e.id;
      r.name = e.name;
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = detail::now_seconds() - t0;
    if (opt.verbose) {
      std::printf("C%02d %s  %s  [%.1f s]\n      %s\n", r.id, r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.seconds, r.detail.c_str());
      std::fflush(stdout);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pinzero
