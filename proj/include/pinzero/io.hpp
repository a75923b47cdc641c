#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinzero/renewal.hpp"
#include "pinzero/zeros.hpp"

namespace pinzero::io {

namespace fs = std::filesystem;

inline void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write_atomic: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

inline std::string cache_key(const std::string& law_descriptor, long N, long prec) {
  return fnv1a_hex(law_descriptor + "|N=" + std::to_string(N) + "|prec=" + std::to_string(prec));
}

// ---- zero sets ------------------------------------------------------------

// Human-readable JSON: deterministic order, fixed digit count.
inline std::string zeroset_to_json(const ZeroSet& zs, int digits = 40) {
  std::ostringstream os;
  os << "{\n  \"n\": " << zs.N << ",\n  \"precision_bits\": " << (long)zs.prec
     << ",\n  \"law\": \"" << zs.law_descriptor << "\",\n  \"zeros\": [\n";
  for (size_t i = 0; i < zs.zeros.size(); ++i) {
    const ZeroRecord& r = zs.zeros[i];
    os << "    {\"re\": " << r.h.re().to_string(digits) << ", \"im\": " << r.h.im().to_string(digits)
       << ", \"residual\": " << r.residual.to_string(12) << "}";
    os << (i + 1 < zs.zeros.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

// Exact sidecar: hex mantissa/exponent records, lossless reload.
inline std::string zeroset_to_sidecar(const ZeroSet& zs) {
  std::ostringstream os;
  os << "pinzero-zeroset 1\n"
     << zs.N << "\n"
     << (long)zs.prec << "\n"
     << zs.law_descriptor << "\n"
     << zs.zeros.size() << "\n";
  for (const ZeroRecord& r : zs.zeros) {
    os << r.h.re().to_hex() << "\n"
       << r.h.im().to_hex() << "\n"
       << r.residual.to_hex() << "\n"
       << (r.converged ? 1 : 0) << "\n";
  }
  return os.str();
}

inline ZeroSet zeroset_from_sidecar(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "pinzero-zeroset" || version != 1)
    throw std::runtime_error("zeroset_from_sidecar: bad header");
  ZeroSet zs;
  long prec = 0;
  size_t count = 0;
  in >> zs.N >> prec;
  in.ignore();
  std::getline(in, zs.law_descriptor);
  in >> count;
  in.ignore();
  zs.prec = (mpfr_prec_t)prec;
  zs.zeros.reserve(count);
  std::string line;
  for (size_t i = 0; i < count; ++i) {
    ZeroRecord r;
    std::getline(in, line);
    BigFloat re = BigFloat::from_hex(line);
    std::getline(in, line);
    BigFloat im = BigFloat::from_hex(line);
    std::getline(in, line);
    r.residual = BigFloat::from_hex(line);
    std::getline(in, line);
    r.converged = line == "1";
    r.h = BigComplex(std::move(re), std::move(im));
    zs.all_converged = zs.all_converged && r.converged;
    zs.zeros.push_back(std::move(r));
  }
  return zs;
}

inline void save_zeroset(const ZeroSet& zs, const fs::path& json_path, const fs::path& sidecar_path) {
  write_atomic(json_path, zeroset_to_json(zs));
  write_atomic(sidecar_path, zeroset_to_sidecar(zs));
}

inline ZeroSet load_zeroset(const fs::path& sidecar_path) {
  std::ifstream in(sidecar_path, std::ios::binary);
  if (!in) throw std::runtime_error("load_zeroset: cannot open " + sidecar_path.string());
  return zeroset_from_sidecar(in);
}

// ---- renewal tables -------------------------------------------------------

// Binary cache of the O(N^3) table build: header with the law descriptor,
// N and precision, then the triangle row-major as hex mantissa/exponent
// records.
inline void save_table(const RenewalTable& table, const fs::path& path) {
  std::ostringstream os;
  os << "pinzero-renewal-table 1\n"
     << table.law().descriptor() << "\n"
     << table.N() << "\n"
     << (long)table.prec() << "\n";
  for (const auto& row : table.rows())
    for (const BigFloat& v : row) os << v.to_hex() << "\n";
  write_atomic(path, os.str());
}

inline RenewalTable load_table(const InterArrivalLaw& law, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_table: cannot open " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "pinzero-renewal-table" || version != 1)
    throw std::runtime_error("load_table: bad header");
  in.ignore();
  std::string descriptor;
  std::getline(in, descriptor);
  if (descriptor != law.descriptor())
    throw std::runtime_error("load_table: law mismatch (" + descriptor + " vs " +
                             law.descriptor() + ")");
  int N = 0;
  long prec = 0;
  in >> N >> prec;
  in.ignore();
  std::vector<std::vector<BigFloat>> rows(N);
  std::string line;
  for (int j = 1; j <= N; ++j) {
    rows[j - 1].reserve(N - j + 1);
    for (int n = j; n <= N; ++n) {
      std::getline(in, line);
      rows[j - 1].push_back(BigFloat::from_hex(line));
    }
  }
  return RenewalTable::from_rows(law, N, (mpfr_prec_t)prec, std::move(rows));
}

// ---- plots ----------------------------------------------------------------

// Static SVG scatter of zeros over the critical curve; plain polyline and
// dots, fixed viewBox derived from the data.
inline std::string svg_zero_overlay(const std::vector<std::pair<double, double>>& curve,
                                    const std::vector<std::pair<double, double>>& dots,
                                    const std::string& title) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  auto extend = [&](const std::pair<double, double>& p) {
    if (first) {
      xmin = xmax = p.first;
      ymin = ymax = p.second;
      first = false;
    } else {
      xmin = std::min(xmin, p.first);
      xmax = std::max(xmax, p.first);
      ymin = std::min(ymin, p.second);
      ymax = std::max(ymax, p.second);
    }
  };
  for (const auto& p : curve) extend(p);
  for (const auto& p : dots) extend(p);
  double pad = 0.05 * std::max(xmax - xmin, ymax - ymin) + 1e-9;
  xmin -= pad;
  xmax += pad;
  ymin -= pad;
  ymax += pad;
  const double W = 900, H = 700;
  auto X = [&](double x) { return (x - xmin) / (xmax - xmin) * W; };
  auto Y = [&](double y) { return H - (y - ymin) / (ymax - ymin) * H; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<title>" << title << "</title>\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!curve.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#c62828\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curve) os << X(p.first) << "," << Y(p.second) << " ";
    os << "\"/>\n";
  }
  for (const auto& p : dots)
    os << "<circle cx=\"" << X(p.first) << "\" cy=\"" << Y(p.second)
       << "\" r=\"2.2\" fill=\"#1565c0\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pinzero::io
