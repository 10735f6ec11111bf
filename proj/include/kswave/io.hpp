#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "exact.hpp"
#include "pde.hpp"

namespace kswave {

/// Shortest round-trip decimal form of a double (printf %.17g keeps every
/// bit; the fixed format makes runs byte-reproducible across platforms with
/// the same libc behaviour for finite values).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// 64-bit FNV-1a of a byte string; used to fingerprint configurations in run
/// summaries without embedding timestamps or machine state.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Profile CSV: optional "# key = value" comment lines, a "z,u,w" header,
/// then one row per sample with full-precision values.
inline void write_profile_csv(std::ostream& os, const WaveProfile& p,
                              const std::vector<std::pair<std::string, std::string>>& meta = {}) {
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
  os << "# construction = " << construction_name(p.construction) << "\n";
  os << "z,u,w\n";
  for (std::size_t i = 0; i < p.z.size(); ++i)
    os << format_g17(p.z[i]) << ',' << format_g17(p.u[i]) << ',' << format_g17(p.w[i]) << "\n";
}

inline void write_profile_csv(const std::string& path, const WaveProfile& p,
                              const std::vector<std::pair<std::string, std::string>>& meta = {}) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_profile_csv(os, p, meta);
}

inline WaveProfile read_profile_csv(std::istream& is) {
  WaveProfile p;
  p.construction = Construction::exact;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.find("construction") != std::string::npos) {
        std::string v = line.substr(eq + 1);
        v.erase(0, v.find_first_not_of(" \t"));
        v.erase(v.find_last_not_of(" \t\r") + 1);
        for (int c = 0; c <= static_cast<int>(Construction::pde); ++c)
          if (v == construction_name(static_cast<Construction>(c)))
            p.construction = static_cast<Construction>(c);
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("z,u,w", 0) != 0 && line.rfind("x,u,w", 0) != 0)
        throw Error("profile CSV must start with a z,u,w header");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    double z, u, w;
    char c1, c2;
    if (!(row >> z >> c1 >> u >> c2 >> w) || c1 != ',' || c2 != ',')
      throw Error("malformed profile CSV row: " + line);
    p.z.push_back(z);
    p.u.push_back(u);
    p.w.push_back(w);
  }
  if (!header_seen) throw Error("profile CSV has no header");
  check_profile(p);
  return p;
}

inline WaveProfile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open for reading: " + path);
  return read_profile_csv(is);
}

/// Snapshot CSV: the same layout with x instead of z and the time stamp in a
/// comment, so a sequence of files carries the full space-time record.
inline void write_field_csv(std::ostream& os, const Field1D& f, const Grid1D& g) {
  os << "# t = " << format_g17(f.t) << "\n";
  os << "x,u,w\n";
  for (std::size_t i = 0; i < g.n; ++i)
    os << format_g17(g.x(i)) << ',' << format_g17(f.u[i]) << ',' << format_g17(f.w[i]) << "\n";
}

inline void write_field_csv(const std::string& path, const Field1D& f, const Grid1D& g) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_field_csv(os, f, g);
}

}  // namespace kswave
