#pragma once

// Deterministic text emitters.  Every writer builds the full byte string
// first (17 significant digits, fixed column and key order, '\n' line
// ends, no timestamps) so reruns produce identical files and the manifest
// can checksum content before it touches disk.

#include <padelab/analysis.hpp>
#include <padelab/pade.hpp>
#include <padelab/polyroots.hpp>
#include <padelab/series.hpp>
#include <padelab/types.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace padelab {

inline std::string format_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("short write: " + path);
}

inline std::string series_csv(const VectorXc& c) {
  std::string s = "n,re,im\n";
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    s += std::to_string(k);
    s += ',';
    s += format_real(c[k].real());
    s += ',';
    s += format_real(c[k].imag());
    s += '\n';
  }
  return s;
}

inline const char* family_name(Family f) {
  switch (f) {
    case Family::F1Log: return "f1_log";
    case Family::F2Exp: return "f2_exp";
    case Family::F3SqrtBranch: return "f3_sqrt_branch";
    case Family::F4Essential: return "f4_essential";
    case Family::F5Tan4: return "f5_tan4";
    case Family::FibGenerating: return "fib_generating";
    case Family::JacobiLacunary: return "jacobi_lacunary";
    case Family::WeierstrassLacunary: return "weierstrass_lacunary";
    case Family::KroneckerLacunary: return "kronecker_lacunary";
    case Family::FibLacunary: return "fib_lacunary";
    case Family::Pole2: return "pole2";
    case Family::Branch1: return "branch1";
    case Family::Branch2: return "branch2";
    case Family::RandomUniform: return "random_uniform";
    case Family::Carleman: return "carleman";
    case Family::Recursion: return "recursion";
  }
  return "?";
}

// Generation metadata next to each coefficient file.  Lacunary exponent
// collisions accumulate additively; recording that here keeps the files
// self-describing.
inline std::string series_sidecar_json(const SeriesSpec& spec, int truncation) {
  std::string s = "{\n";
  s += "  \"family\": \"" + std::string(family_name(spec.family)) + "\",\n";
  s += "  \"truncation\": " + std::to_string(truncation) + ",\n";
  s += "  \"seed\": " + std::to_string(spec.seed) + ",\n";
  s += "  \"epsilon\": " + format_real(spec.epsilon) + ",\n";
  s += "  \"collision_convention\": \"additive\",\n";
  if (spec.noise) {
    s += "  \"noise\": {\n";
    s += "    \"epsilon\": " + format_real(spec.noise->epsilon) + ",\n";
    s += "    \"seed\": " + std::to_string(spec.noise->seed) + ",\n";
    s += std::string("    \"distribution\": \"") +
         (spec.noise->distribution == NoiseDistribution::Uniform01 ? "uniform01"
                                                                   : "uniform_sym") +
         "\"\n  }\n";
  } else {
    s += "  \"noise\": null\n";
  }
  s += "}\n";
  return s;
}

namespace detail {

inline std::string complex_json(Complex z) {
  return "{\"re\": " + format_real(z.real()) + ", \"im\": " + format_real(z.imag()) + "}";
}

}  // namespace detail

inline std::string approximant_json(const RationalApproximant& r) {
  std::string s = "{\n";
  s += "  \"L\": " + std::to_string(r.L) + ",\n";
  s += "  \"M\": " + std::to_string(r.M) + ",\n";
  s += "  \"scale\": " + format_real(r.scale) + ",\n";
  auto array = [&](const char* key, const VectorXc& v) {
    s += std::string("  \"") + key + "\": [";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (k) s += ", ";
      s += detail::complex_json(v[k]);
    }
    s += "],\n";
  };
  array("numerator", r.numerator);
  array("denominator", r.denominator);
  s += "  \"condition\": {\n";
  s += "    \"residual\": " + format_real(r.condition.residual) + ",\n";
  s += "    \"pivot_ratio\": " + format_real(r.condition.pivot_ratio) + ",\n";
  s += "    \"rcond\": " + format_real(r.condition.rcond) + ",\n";
  s += "    \"estimated_rank\": " + std::to_string(r.condition.estimated_rank) + ",\n";
  s += "    \"effective_denominator_degree\": " +
       std::to_string(r.condition.effective_denominator_degree) + ",\n";
  s += std::string("    \"degenerate\": ") +
       (r.condition.degenerate ? "true" : "false") + ",\n";
  s += std::string("    \"least_squares\": ") +
       (r.condition.least_squares ? "true" : "false") + "\n";
  s += "  }\n}\n";
  return s;
}

inline std::string roots_csv(const RootSet& rs) {
  std::string s = "re,im,backward_error,refined,clustered\n";
  for (const RootRecord& r : rs.roots) {
    s += format_real(r.value.real());
    s += ',';
    s += format_real(r.value.imag());
    s += ',';
    s += format_real(r.backward_error);
    s += ',';
    s += r.refined ? '1' : '0';
    s += ',';
    s += r.clustered ? '1' : '0';
    s += '\n';
  }
  return s;
}

inline std::string doublets_csv(const std::vector<DoubletReport>& reports) {
  std::string s =
      "pole_re,pole_im,residue_re,residue_im,pairing_distance,paired_zero,"
      "shell_distance,class\n";
  for (const DoubletReport& d : reports) {
    s += format_real(d.pole.real());
    s += ',';
    s += format_real(d.pole.imag());
    s += ',';
    s += format_real(d.residue.real());
    s += ',';
    s += format_real(d.residue.imag());
    s += ',';
    s += format_real(d.pairing_distance);
    s += ',';
    s += std::to_string(d.paired_zero);
    s += ',';
    s += format_real(d.shell_distance);
    s += ',';
    s += to_string(d.cls);
    s += '\n';
  }
  return s;
}

inline std::string modes_csv(const std::vector<SignalMode>& modes) {
  std::string s = "frequency,damping,amp_re,amp_im,zpole_re,zpole_im\n";
  for (const SignalMode& m : modes) {
    s += format_real(m.frequency);
    s += ',';
    s += format_real(m.damping);
    s += ',';
    s += format_real(m.amplitude.real());
    s += ',';
    s += format_real(m.amplitude.imag());
    s += ',';
    s += format_real(m.z_pole.real());
    s += ',';
    s += format_real(m.z_pole.imag());
    s += '\n';
  }
  return s;
}

// Scatter of poles (crosses) and zeros (circles) with the unit circle as
// the reference guide.  Pure geometry, no text except axis labels, so the
// bytes are reproducible.
inline std::string pole_zero_svg(const std::vector<Complex>& poles,
                                 const std::vector<Complex>& zeros,
                                 const std::string& title = "") {
  Real extent = 1.6;
  for (Complex z : poles) extent = std::max(extent, 1.1 * std::abs(z));
  for (Complex z : zeros) extent = std::max(extent, 1.1 * std::abs(z));
  extent = std::min(extent, Real(10.0));
  const int size = 640;
  const Real scale = size / (2.0 * extent);
  auto px = [&](Real x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", size / 2.0 + x * scale);
    return std::string(buf);
  };
  auto py = [&](Real y) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", size / 2.0 - y * scale);
    return std::string(buf);
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
       "viewBox=\"0 0 640 640\">\n";
  if (!title.empty())
    s += "<title>" + title + "</title>\n";
  s += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  s += "<line x1=\"0\" y1=\"" + py(0) + "\" x2=\"640\" y2=\"" + py(0) +
       "\" stroke=\"#ccc\"/>\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"0\" x2=\"" + px(0) +
       "\" y2=\"640\" stroke=\"#ccc\"/>\n";
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", scale);
    s += "<circle cx=\"" + px(0) + "\" cy=\"" + py(0) + "\" r=\"" + buf +
         "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (Complex z : zeros) {
    if (std::abs(z) > extent * 1.05) continue;
    s += "<circle cx=\"" + px(z.real()) + "\" cy=\"" + py(z.imag()) +
         "\" r=\"4\" fill=\"none\" stroke=\"#1a6fb5\" stroke-width=\"1.5\"/>\n";
  }
  for (Complex z : poles) {
    if (std::abs(z) > extent * 1.05) continue;
    const std::string cx = px(z.real()), cy = py(z.imag());
    auto off = [](const std::string& v, Real d) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", std::stod(v) + d);
      return std::string(buf);
    };
    s += "<line x1=\"" + off(cx, -4) + "\" y1=\"" + off(cy, -4) + "\" x2=\"" +
         off(cx, 4) + "\" y2=\"" + off(cy, 4) +
         "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
    s += "<line x1=\"" + off(cx, -4) + "\" y1=\"" + off(cy, 4) + "\" x2=\"" +
         off(cx, 4) + "\" y2=\"" + off(cy, -4) +
         "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace padelab
