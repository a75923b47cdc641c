// Command-line laboratory for the pinning-model partition-function zeros:
// zero sets, critical curve, scaling function, Griffiths coefficients.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pinzero/acceptance.hpp"
#include "pinzero/griffiths.hpp"
#include "pinzero/io.hpp"
#include "pinzero/scaling.hpp"

using namespace pinzero;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct CommonOpts {
  double alpha = 0.5;
  std::string law = "special";
  int threads = default_thread_count();
  fs::path cache_dir = "pinzero-cache";
  fs::path out_dir = ".";
};

InterArrivalLaw make_law(const CommonOpts& c, long truncation) {
  if (c.law == "special") return InterArrivalLaw::special_family(c.alpha, truncation, 256);
  if (c.law == "mixture-power") return InterArrivalLaw::mixture_power_law(c.alpha, truncation, 256);
  if (c.law == "mixture-lacunary")
    return InterArrivalLaw::mixture_lacunary(c.alpha, truncation, 256);
  throw CLI::ValidationError("--law", "unknown law '" + c.law + "'");
}

// Zero solve with the table cache: the alpha = 1/2 special family goes
// through the closed-form coefficients, everything else through the cached
// O(N^3) renewal recursion.
ZeroSet solve_zeros(const CommonOpts& c, int N, const PrecisionPolicy& policy) {
  if (c.law == "special" && c.alpha == 0.5) {
    auto poly = PartitionPolynomial::special_half(N, policy.bits_for_degree(N));
    return find_all_zeros(poly, policy, c.threads);
  }
  InterArrivalLaw law = make_law(c, 4L * N);
  fs::create_directories(c.cache_dir);
  std::string key = io::cache_key(law.descriptor(), N, policy.bits_for_degree(N));
  fs::path table_path = c.cache_dir / ("table-" + key + ".bin");
  RenewalTable table = [&]() {
    if (fs::exists(table_path)) {
      try {
        return io::load_table(law, table_path);
      } catch (const std::exception&) {
      }
    }
    RenewalTable t = renewal_table(law, N, policy);
    io::save_table(t, table_path);
    return t;
  }();
  return find_all_zeros(partition_polynomial(table, N), policy, c.threads);
}

std::vector<std::pair<double, double>> curve_polyline(double alpha, bool w_coords) {
  CurveModel cm(alpha, 1024);
  std::vector<std::pair<double, double>> pts;
  for (int i = (int)cm.points().size() - 1; i >= 0; --i) {
    std::complex<double> h = std::conj(cm.points()[i]);
    if (w_coords) h = std::exp(h);
    pts.emplace_back(h.real(), h.imag());
  }
  for (const std::complex<double>& hu : cm.points()) {
    std::complex<double> h = hu;
    if (w_coords) h = std::exp(h);
    pts.emplace_back(h.real(), h.imag());
  }
  return pts;
}

int cmd_zeros(const CommonOpts& c, int N, const std::string& svg, const std::string& coords) {
  PrecisionPolicy policy;
  ZeroSet zs = solve_zeros(c, N, policy);
  fs::create_directories(c.out_dir);
  std::string stem = "zeros-" + c.law + "-N" + std::to_string(N);
  io::save_zeroset(zs, c.out_dir / (stem + ".json"), c.out_dir / (stem + ".sidecar"));
  // distance report against the critical curve of the law's alpha
  CurveModel cm(c.alpha, 2048);
  DistanceStats ds = distance_stats(zs, cm);
  std::ostringstream rep;
  rep << "n,distance,theta,s,deloc_side\n";
  for (size_t i = 0; i < ds.per_zero.size(); ++i)
    rep << i + 1 << "," << ds.per_zero[i].distance << "," << ds.per_zero[i].theta << ","
        << ds.per_zero[i].s << "," << (ds.per_zero[i].deloc_side ? 1 : 0) << "\n";
  rep << "# max_distance," << ds.max_distance << "\n# mean_distance," << ds.mean_distance
      << "\n# deloc_fraction," << ds.deloc_fraction << "\n";
  io::write_atomic(c.out_dir / (stem + "-distances.csv"), rep.str());
  if (!svg.empty()) {
    bool w_coords = coords == "w";
    std::vector<std::pair<double, double>> dots;
    for (const ZeroRecord& r : zs.zeros) {
      std::complex<double> h = r.h.to_complex_double();
      if (w_coords) h = std::exp(h);
      dots.emplace_back(h.real(), h.imag());
    }
    io::write_atomic(fs::path(svg),
                     io::svg_zero_overlay(curve_polyline(c.alpha, w_coords), dots, stem));
  }
  std::printf("%d zeros written to %s\n", (int)zs.zeros.size(),
              (c.out_dir / (stem + ".json")).string().c_str());
  std::printf("closest zero: %s + %s i\n", zs.zeros[0].h.re().to_string(12).c_str(),
              zs.zeros[0].h.im().to_string(12).c_str());
  return kExitOk;
}

int cmd_curve(const CommonOpts& c, int resolution, const std::string& out) {
  CurveModel cm(c.alpha, resolution);
  std::ostringstream os;
  os << "theta,re,im,s,density\n";
  BigFloat a(c.alpha, 192);
  for (int i = 0; i <= cm.resolution(); ++i) {
    double th = cm.thetas()[i];
    os << th << "," << cm.points()[i].real() << "," << cm.points()[i].imag() << ","
       << cm.arclengths()[i] << ",";
    if (i > 0) os << mu_density_theta(a, BigFloat(th, 192)).to_double();
    os << "\n";
  }
  io::write_atomic(fs::path(out), os.str());
  std::printf("curve written to %s (upper half, %d samples, length %.9f)\n", out.c_str(),
              cm.resolution() + 1, cm.total_length());
  return kExitOk;
}

int cmd_classify(const CommonOpts& c, const std::vector<std::string>& points) {
  BigFloat a(c.alpha, 192);
  for (const std::string& s : points) {
    double re = 0, im = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) != 2)
      throw CLI::ValidationError("--point", "expected re,im but got '" + s + "'");
    RegionLabel lab = classify(a, BigComplex(re, im, 192));
    const char* name = lab == RegionLabel::Localized    ? "localized"
                       : lab == RegionLabel::Delocalized ? "delocalized"
                                                         : "critical";
    std::printf("%g%+gi  %s\n", re, im, name);
  }
  return kExitOk;
}

int cmd_density(const CommonOpts& c, const std::string& out) {
  CurveModel cm(c.alpha, 2048);
  BigFloat a(c.alpha, 192);
  std::ostringstream os;
  os << "theta,s,x,density,density_smalls\n";
  for (int i = 1; i <= cm.resolution(); i += 4) {
    double th = cm.thetas()[i];
    double s = cm.arclengths()[i];
    double x = cm.points()[i].real();
    os << th << "," << s << "," << x << ","
       << mu_density_theta(a, BigFloat(th, 192)).to_double() << ","
       << mu_density_small_s(a, BigFloat(s, 192)).to_double() << "\n";
  }
  io::write_atomic(fs::path(out), os.str());
  std::printf("density table written to %s\n", out.c_str());
  return kExitOk;
}

int cmd_f0zeros(int n_max, const std::string& out, int threads) {
  auto zs = f0_zeros(n_max, 256, true, 256, threads);
  std::ostringstream os;
  os << "n,re,im,seed_re,seed_im,gap\n";
  for (const ScalingZero& z : zs) {
    os << z.index << "," << z.zeta.re().to_string(12) << "," << z.zeta.im().to_string(12) << ","
       << z.seed.re().to_string(8) << "," << z.seed.im().to_string(8) << ","
       << abs(z.zeta - z.seed).to_string(4) << "\n";
  }
  io::write_atomic(fs::path(out), os.str());
  std::printf("%d certified zeros written to %s\n", n_max, out.c_str());
  return kExitOk;
}

int cmd_scaling(int N, const std::string& out) {
  mpfr_prec_t p = 320;
  auto poly = PartitionPolynomial::special_half(N, p);
  std::ostringstream os;
  os << "zeta_re,zeta_im,deviation\n";
  BigFloat rootN = sqrt(BigFloat((double)N, p));
  double worst = 0.0;
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      BigComplex zeta(x, y, p);
      double dev = abs(rootN * poly.value(zeta / rootN) - f0(zeta)).to_double();
      worst = std::max(worst, dev);
      os << x << "," << y << "," << dev << "\n";
    }
  os << "# max_deviation," << worst << "\n";
  io::write_atomic(fs::path(out), os.str());
  std::printf("scaling report written to %s (max deviation %.6g)\n", out.c_str(), worst);
  return kExitOk;
}

int cmd_griffiths(const CommonOpts& c, double p, int n0, int n_max, int k_min, int k_max,
                  const std::string& out) {
  PrecisionPolicy policy;
  fs::create_directories(c.cache_dir);
  GriffithsRun run;
  run.p = p;
  run.n0 = n0;
  AcceptanceOptions aopt;
  aopt.threads = c.threads;
  aopt.cache_dir = c.cache_dir;
  aopt.verbose = false;
  AcceptanceContext ctx(aopt);
  ctx.build_range(n0, n_max);
  for (int n = n0; n <= n_max; ++n) run.add(ctx.zero_set(n));
  auto f0z = f0_zeros(1, 320, false);
  GriffithsConstants g = griffiths_constants(p, f0z[0].zeta);
  std::ostringstream os;
  os << "{\n  \"p\": " << p << ",\n  \"alpha\": 0.5,\n  \"n0\": " << n0
     << ",\n  \"n_max\": " << n_max << ",\n  \"precision_bits\": " << (long)(k_max + 128)
     << ",\n  \"band\": [0.8, 1.25],\n  \"cos_gate\": 0.2,\n  \"constants\": {"
     << "\"a\": " << g.a.to_string(12) << ", \"b\": " << g.b.to_string(12)
     << ", \"c\": " << g.c.to_string(12) << ", \"d\": " << g.d.to_string(12)
     << ", \"A\": " << g.A.to_string(12) << ", \"B\": " << g.B.to_string(12)
     << ", \"C\": " << g.C.to_string(12) << ", \"b1\": " << g.b1.to_string(12)
     << ", \"b2\": " << g.b2.to_string(12) << ", \"C1\": " << g.C1.to_string(12)
     << ", \"C2\": " << g.C2.to_string(12) << "},\n  \"rows\": [\n";
  for (int k = k_min; k <= k_max; ++k) {
    BigFloat tk = taylor_coefficient(run, k);
    BigFloat pred = griffiths_prediction(g, k);
    BigFloat cosv = griffiths_cosine(g, k);
    BigFloat ratio = BigFloat((double)k, 256) * tk / pred;
    os << "    {\"k\": " << k << ", \"t_k\": " << tk.to_string(20)
       << ", \"prediction\": " << pred.to_string(20) << ", \"ratio\": " << ratio.to_string(10)
       << ", \"cos\": " << cosv.to_string(10) << "}" << (k < k_max ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  io::write_atomic(fs::path(out), os.str());
  std::printf("griffiths manifest written to %s\n", out.c_str());
  return kExitOk;
}

int cmd_verify(const CommonOpts& c, const std::string& out) {
  AcceptanceOptions opt;
  opt.threads = c.threads;
  opt.cache_dir = c.cache_dir;
  double t0 = pinzero::detail::now_seconds();
  std::vector<CriterionResult> results = run_acceptance(opt);
  double elapsed = pinzero::detail::now_seconds() - t0;
  int failed = 0;
  std::ostringstream os;
  os << "{\n  \"criteria\": [\n";
  for (size_t i = 0; i < results.size(); ++i) {
    const CriterionResult& r = results[i];
    if (!r.pass) ++failed;
    std::string detail = r.detail;
    for (char& ch : detail)
      if (ch == '"') ch = '\'';
    os << "    {\"id\": " << r.id << ", \"name\": \"" << r.name << "\", \"pass\": "
       << (r.pass ? "true" : "false") << ", \"detail\": \"" << detail << "\"}"
       << (i + 1 < results.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"failed\": " << failed << ",\n  \"meta\": {\"elapsed_seconds\": " << elapsed
     << ", \"threads\": " << opt.threads << "}\n}\n";
  if (!out.empty()) io::write_atomic(fs::path(out), os.str());
  std::printf("%s", out.empty() ? os.str().c_str() : "");
  std::printf("verify: %d of %zu criteria failed\n", failed, results.size());
  return failed == 0 ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinning-model partition-function zero laboratory"};
  app.require_subcommand(1);
  CommonOpts common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--alpha", common.alpha, "tail exponent in (0,1)")
        ->check(CLI::Range(1e-6, 0.999999));
    sub->add_option("--threads", common.threads, "worker threads");
    sub->add_option("--cache-dir", common.cache_dir, "cache directory");
    sub->add_option("--out-dir", common.out_dir, "output directory");
  };

  auto* zeros = app.add_subcommand("zeros", "solve for all zeros of Z_{N,h}");
  int N = 500;
  std::string svg, coords = "h";
  zeros->add_option("-N,--degree", N, "system size")->required();
  zeros->add_option("--law", common.law, "special | mixture-power | mixture-lacunary");
  zeros->add_option("--svg", svg, "write an SVG overlay of zeros on the curve");
  zeros->add_option("--coords", coords, "plot coordinates: h (cylinder) or w = e^h")
      ->check(CLI::IsMember({"h", "w"}));
  add_common(zeros);

  auto* curve = app.add_subcommand("curve", "export the critical curve");
  int resolution = 2048;
  std::string curve_out = "curve.csv";
  curve->add_option("--resolution", resolution, "number of samples");
  curve->add_option("--out", curve_out, "output CSV");
  add_common(curve);

  auto* cls = app.add_subcommand("classify", "classify points of the cylinder");
  std::vector<std::string> points;
  cls->add_option("--point", points, "point as re,im (repeatable)")->required();
  add_common(cls);

  auto* density = app.add_subcommand("density", "export the limit zero density");
  std::string density_out = "density.csv";
  density->add_option("--out", density_out, "output CSV");
  add_common(density);

  auto* f0z = app.add_subcommand("f0zeros", "zeros of the scaling function F0");
  int n_max = 7;
  std::string f0_out = "f0zeros.csv";
  f0z->add_option("--n-max", n_max, "number of zeros");
  f0z->add_option("--out", f0_out, "output CSV");
  add_common(f0z);

  auto* scal = app.add_subcommand("scaling", "scaling-limit deviation report");
  int scaling_N = 10000;
  std::string scaling_out = "scaling.csv";
  scal->add_option("-N,--degree", scaling_N, "system size");
  scal->add_option("--out", scaling_out, "output CSV");
  add_common(scal);

  auto* grif = app.add_subcommand("griffiths", "Taylor-coefficient run manifest");
  double p = 0.5;
  int n0 = 3, gr_nmax = 300, k_min = 40, k_max = 120;
  std::string grif_out = "griffiths.json";
  grif->add_option("--p", p, "dilution parameter in (0,1)")->check(CLI::Range(1e-6, 0.999999));
  grif->add_option("--n0", n0, "truncation start");
  grif->add_option("--n-max", gr_nmax, "largest system size in the store");
  grif->add_option("--k-min", k_min, "first derivative order");
  grif->add_option("--k-max", k_max, "last derivative order");
  grif->add_option("--out", grif_out, "output JSON manifest");
  add_common(grif);

  auto* verify = app.add_subcommand("verify", "run the full acceptance suite");
  std::string verify_out;
  verify->add_option("--out", verify_out, "write pass/fail JSON here");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*zeros) return cmd_zeros(common, N, svg, coords);
    if (*curve) return cmd_curve(common, resolution, curve_out);
    if (*cls) return cmd_classify(common, points);
    if (*density) return cmd_density(common, density_out);
    if (*f0z) return cmd_f0zeros(n_max, f0_out, common.threads);
    if (*scal) return cmd_scaling(scaling_N, scaling_out);
    if (*grif) return cmd_griffiths(common, p, n0, gr_nmax, k_min, k_max, grif_out);
    if (*verify) return cmd_verify(common, verify_out);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
